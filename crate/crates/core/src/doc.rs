//! Versioned, self-describing JSON documents for every payload type.
//!
//! A document is one object with `version`, `kind`, `symbols` and, where it
//! applies, `dim`; the payload fields sit next to them. Keys are emitted in
//! sorted order so equal values serialize to equal bytes.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::flip::FlipMap;
use crate::geometry::{GridPattern, Multirect, Rect};
use crate::invariants::{RecIsomorphism, SafInvariant, TensorValue};
use crate::lattice::{DomainReport, Lattice};
use crate::qfree::{SimplicialRefinement, Tier};
use crate::recmap::{RecMap, Shuffle, Transposition};
use crate::scalar::{Scalar, Symbol, SymbolKind, SymbolTable};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Shuffle(Shuffle),
    Transposition(Transposition),
}

impl Factor {
    pub fn to_recmap(&self, ambient: &Multirect) -> Result<RecMap> {
        match self {
            Factor::Shuffle(s) => s.to_recmap(ambient),
            Factor::Transposition(t) => t.to_recmap(ambient),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Factor::Shuffle(s) => s.to_json(),
            Factor::Transposition(t) => t.to_json(),
        }
    }

    fn from_json(table: &Arc<SymbolTable>, value: &Value, location: &str) -> Result<Factor> {
        match value.get("kind").and_then(Value::as_str) {
            Some("shuffle") => Ok(Factor::Shuffle(Shuffle::from_json(table, value, location)?)),
            Some("transposition") => Ok(Factor::Transposition(Transposition::from_json(
                table, value, location,
            )?)),
            _ => Err(Error::parse(
                location,
                "factor kind must be \"shuffle\" or \"transposition\"",
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    RecMap(RecMap),
    FlipMap(FlipMap),
    Multirect(Multirect),
    Rect(Rect),
    Grid(GridPattern),
    Lattice(Lattice),
    Tensor(TensorValue),
    Saf(SafInvariant),
    /// Written order: the product is `f_1 ∘ f_2 ∘ ... ∘ f_m`.
    Factors {
        ambient: Multirect,
        factors: Vec<Factor>,
    },
    Scalars(Vec<Scalar>),
    Refinement(SimplicialRefinement),
    Isomorphism(RecIsomorphism),
    Domain {
        start: Rect,
        domain: Multirect,
        volume: TensorValue,
        report: DomainReport,
    },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::RecMap(_) => "recmap",
            Payload::FlipMap(_) => "flipmap",
            Payload::Multirect(_) => "multirect",
            Payload::Rect(_) => "rect",
            Payload::Grid(_) => "grid",
            Payload::Lattice(_) => "lattice",
            Payload::Tensor(_) => "tensor",
            Payload::Saf(_) => "saf",
            Payload::Factors { .. } => "factors",
            Payload::Scalars(_) => "scalars",
            Payload::Refinement(_) => "refinement",
            Payload::Isomorphism(_) => "isomorphism",
            Payload::Domain { .. } => "domain",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub table: Arc<SymbolTable>,
    /// Ambient dimension, absent for dimensionless payloads.
    pub dim: Option<usize>,
    pub payload: Payload,
}

pub fn symbols_to_json(table: &SymbolTable) -> Value {
    Value::Array(
        table
            .symbols()
            .iter()
            .map(|s| match &s.kind {
                SymbolKind::Unit => json!({"name": s.name, "kind": "unit"}),
                SymbolKind::Sqrt(m) => json!({"name": s.name, "kind": "sqrt", "arg": m}),
                SymbolKind::Opaque { decimal, digits } => {
                    json!({"name": s.name, "kind": "opaque", "value": decimal, "digits": digits})
                }
            })
            .collect(),
    )
}

pub fn symbols_from_json(value: &Value, max_precision_bits: u32) -> Result<Arc<SymbolTable>> {
    let list = value
        .as_array()
        .ok_or_else(|| Error::parse("symbols", "expected a list"))?;
    let mut symbols = Vec::with_capacity(list.len());
    for (i, s) in list.iter().enumerate() {
        let loc = format!("symbols[{i}]");
        let name = s
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse(&loc, "missing `name`"))?
            .to_string();
        let kind = match s.get("kind").and_then(Value::as_str) {
            Some("unit") => SymbolKind::Unit,
            Some("sqrt") => SymbolKind::Sqrt(
                s.get("arg")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::parse(&loc, "sqrt symbol needs an integer `arg`"))?,
            ),
            Some("opaque") => SymbolKind::Opaque {
                decimal: s
                    .get("value")
                    .and_then(Value::as_str)
                    .ok_or_else(|| {
                        Error::parse(&loc, "opaque symbol needs a decimal `value` string")
                    })?
                    .to_string(),
                digits: s
                    .get("digits")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::parse(&loc, "opaque symbol needs `digits`"))?
                    as u32,
            },
            _ => return Err(Error::parse(&loc, "kind must be unit, sqrt or opaque")),
        };
        symbols.push(Symbol { name, kind });
    }
    SymbolTable::with_max_precision(symbols, max_precision_bits)
}

fn tier_name(t: Tier) -> &'static str {
    match t {
        Tier::Independent => "independent",
        Tier::Subset => "subset",
        Tier::Gcd => "gcd",
        Tier::Subtractive => "subtractive",
        Tier::Search => "search",
    }
}

fn tier_from_name(s: &str) -> Option<Tier> {
    Some(match s {
        "independent" => Tier::Independent,
        "subset" => Tier::Subset,
        "gcd" => Tier::Gcd,
        "subtractive" => Tier::Subtractive,
        "search" => Tier::Search,
        _ => return None,
    })
}

fn scalars_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

fn report_json(r: &DomainReport) -> Value {
    json!({
        "disjoint": r.disjoint,
        "disjointness_witnesses": r.disjointness_witnesses,
        "tiles": r.tiles,
        "tiling_witnesses": r.tiling_witnesses,
    })
}

impl Document {
    pub fn new(table: &Arc<SymbolTable>, dim: Option<usize>, payload: Payload) -> Document {
        Document {
            table: table.clone(),
            dim,
            payload,
        }
    }

    pub fn recmap(f: &RecMap) -> Result<Document> {
        let table = f
            .table()
            .ok_or_else(|| Error::pre("map without coordinates"))?;
        Ok(Document::new(
            table,
            Some(f.dim()),
            Payload::RecMap(f.clone()),
        ))
    }

    pub fn to_json(&self) -> Value {
        let body = match &self.payload {
            Payload::RecMap(f) => f.to_json(),
            Payload::FlipMap(f) => f.to_json(),
            Payload::Multirect(m) => json!({"rects": m.to_json()}),
            Payload::Rect(r) => json!({"rect": r.to_json()}),
            Payload::Grid(g) => json!({"axes": g.to_json()}),
            Payload::Lattice(l) => l.to_json(),
            Payload::Tensor(t) => t.to_json(),
            Payload::Saf(s) => json!({"components": s.to_json()}),
            Payload::Factors { ambient, factors } => json!({
                "ambient": ambient.to_json(),
                "factors": factors.iter().map(Factor::to_json).collect::<Vec<_>>(),
            }),
            Payload::Scalars(v) => json!({"values": scalars_json(v)}),
            Payload::Refinement(r) => json!({
                "basis": scalars_json(&r.basis),
                "expansion": r.expansion,
                "tier": tier_name(r.tier),
                "work": r.work,
            }),
            Payload::Isomorphism(i) => i.to_json(),
            Payload::Domain {
                start,
                domain,
                volume,
                report,
            } => json!({
                "start": start.to_json(),
                "domain": domain.to_json(),
                "volume": volume.to_json(),
                "witnesses": report_json(report),
            }),
        };
        let mut map = match body {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        map.insert("version".into(), json!(FORMAT_VERSION));
        map.insert("kind".into(), json!(self.payload.kind()));
        map.insert("symbols".into(), symbols_to_json(&self.table));
        if let Some(d) = self.dim {
            map.insert("dim".into(), json!(d));
        }
        Value::Object(map)
    }

    /// Pretty JSON followed by a newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Document> {
        Self::parse_with_precision(text, crate::scalar::DEFAULT_MAX_PRECISION_BITS)
    }

    pub fn parse_with_precision(text: &str, max_precision_bits: u32) -> Result<Document> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Self::from_json(&value, max_precision_bits)
    }

    pub fn from_json(value: &Value, max_precision_bits: u32) -> Result<Document> {
        if !value.is_object() {
            return Err(Error::parse("document", "expected an object"));
        }
        match value.get("version").and_then(Value::as_u64) {
            Some(FORMAT_VERSION) => {}
            Some(v) => return Err(Error::parse("version", format!("unsupported version {v}"))),
            None => return Err(Error::parse("version", "missing")),
        }
        let table = symbols_from_json(
            value
                .get("symbols")
                .ok_or_else(|| Error::parse("symbols", "missing"))?,
            max_precision_bits,
        )?;
        let dim = match value.get("dim") {
            None => None,
            Some(d) => Some(
                d.as_u64()
                    .ok_or_else(|| Error::parse("dim", "expected an integer"))?
                    as usize,
            ),
        };
        let kind = value
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("kind", "missing"))?;
        let need_dim = || {
            dim.ok_or_else(|| Error::parse("dim", format!("`{kind}` documents need a dimension")))
        };
        let field = |k: &str| value.get(k).ok_or_else(|| Error::parse(k, "missing"));
        let payload = match kind {
            "recmap" => Payload::RecMap(RecMap::from_json(&table, need_dim()?, value)?),
            "flipmap" => Payload::FlipMap(FlipMap::from_json(&table, need_dim()?, value)?),
            "multirect" => Payload::Multirect(Multirect::from_json(
                &table,
                need_dim()?,
                field("rects")?,
                "rects",
            )?),
            "rect" => Payload::Rect(Rect::from_json(&table, field("rect")?, "rect")?),
            "grid" => Payload::Grid(GridPattern::from_json(&table, field("axes")?, "axes")?),
            "lattice" => Payload::Lattice(Lattice::from_json(&table, value)?),
            "tensor" => Payload::Tensor(TensorValue::from_json(&table, value, "tensor")?),
            "saf" => {
                let list = field("components")?
                    .as_array()
                    .ok_or_else(|| Error::parse("components", "expected a list"))?;
                let components = list
                    .iter()
                    .enumerate()
                    .map(|(i, c)| TensorValue::from_json(&table, c, &format!("components[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                Payload::Saf(SafInvariant { components })
            }
            "factors" => {
                let list = field("factors")?
                    .as_array()
                    .ok_or_else(|| Error::parse("factors", "expected a list"))?;
                Payload::Factors {
                    ambient: Multirect::from_json(
                        &table,
                        need_dim()?,
                        field("ambient")?,
                        "ambient",
                    )?,
                    factors: list
                        .iter()
                        .enumerate()
                        .map(|(i, f)| Factor::from_json(&table, f, &format!("factors[{i}]")))
                        .collect::<Result<_>>()?,
                }
            }
            "scalars" => Payload::Scalars(parse_scalars(&table, field("values")?, "values")?),
            "refinement" => {
                let basis = parse_scalars(&table, field("basis")?, "basis")?;
                let expansion: Vec<Vec<u64>> = serde_json::from_value(field("expansion")?.clone())
                    .map_err(|e| Error::parse("expansion", e.to_string()))?;
                let tier = field("tier")?
                    .as_str()
                    .and_then(tier_from_name)
                    .ok_or_else(|| Error::parse("tier", "unknown tier"))?;
                let work = field("work")?
                    .as_u64()
                    .ok_or_else(|| Error::parse("work", "expected an integer"))?;
                Payload::Refinement(SimplicialRefinement {
                    basis,
                    expansion,
                    tier,
                    work,
                })
            }
            "isomorphism" => {
                Payload::Isomorphism(RecIsomorphism::from_json(&table, need_dim()?, value)?)
            }
            "domain" => {
                let d = need_dim()?;
                let w = field("witnesses")?;
                let flag = |k: &str| {
                    w.get(k)
                        .and_then(Value::as_bool)
                        .ok_or_else(|| Error::parse(k, "expected a boolean"))
                };
                let count = |k: &str| {
                    w.get(k)
                        .and_then(Value::as_u64)
                        .map(|c| c as usize)
                        .ok_or_else(|| Error::parse(k, "expected an integer"))
                };
                Payload::Domain {
                    start: Rect::from_json(&table, field("start")?, "start")?,
                    domain: Multirect::from_json(&table, d, field("domain")?, "domain")?,
                    volume: TensorValue::from_json(&table, field("volume")?, "volume")?,
                    report: DomainReport {
                        disjointness_witnesses: count("disjointness_witnesses")?,
                        disjoint: flag("disjoint")?,
                        tiling_witnesses: count("tiling_witnesses")?,
                        tiles: flag("tiles")?,
                    },
                }
            }
            other => {
                return Err(Error::parse(
                    "kind",
                    format!("unknown document kind `{other}`"),
                ))
            }
        };
        Ok(Document {
            table,
            dim,
            payload,
        })
    }
}

fn parse_scalars(table: &Arc<SymbolTable>, value: &Value, location: &str) -> Result<Vec<Scalar>> {
    value
        .as_array()
        .ok_or_else(|| Error::parse(location, "expected a list"))?
        .iter()
        .enumerate()
        .map(|(i, v)| Scalar::from_json(table, v, &format!("{location}[{i}]")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{parse_symbol_spec, Sampler};

    fn round_trip(doc: &Document) {
        let text = doc.to_text();
        let again = Document::parse(&text).unwrap();
        assert_eq!(again.to_text(), text);
    }

    #[test]
    fn recmap_documents_round_trip() {
        let t = parse_symbol_spec("sqrt2,x=0.5772156649:10").unwrap();
        let f = Sampler::new(&t, 4).recmap(2, 5).unwrap();
        let doc = Document::recmap(&f).unwrap();
        round_trip(&doc);
        let back = Document::parse(&doc.to_text()).unwrap();
        match back.payload {
            Payload::RecMap(g) => assert!(g.equals(&f).unwrap()),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn scalar_list_round_trip() {
        let t = parse_symbol_spec("sqrt2").unwrap();
        let v = vec![
            Scalar::ratio(&t, 3, 5),
            Scalar::symbol(&t, "sqrt2", crate::scalar::q(-1, 7)).unwrap(),
        ];
        round_trip(&Document::new(&t, None, Payload::Scalars(v)));
    }

    #[test]
    fn bad_documents_name_the_problem() {
        let err = Document::parse("{\"version\": 1}").unwrap_err();
        assert!(err.to_string().contains("symbols"));
        let err = Document::parse("{\"version\": 7, \"symbols\": []}").unwrap_err();
        assert!(err.to_string().contains("version"));
        assert!(Document::parse("not json").is_err());
    }
}
