//! Piecewise maps whose linear parts are diagonal with entries ±1, taken
//! modulo finite unions of hyperplanes, and their embedding into
//! rectangle exchanges of `[-1, 1)^d` commuting with coordinate reflections.
//!
//! Every piece image is normalized to the half-open box with the same
//! closure, which fixes one representative of each class.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Multirect, Rect, RectPartition};
use crate::random::Sampler;
use crate::recmap::{parse_vector, Piece, RecMap};
use crate::scalar::{Scalar, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipPiece {
    pub rect: Rect,
    /// Entries are `1` or `-1`.
    pub signs: Vec<i8>,
    pub shift: Vec<Scalar>,
}

fn signed(x: &Scalar, sign: i8) -> Scalar {
    if sign < 0 {
        -x
    } else {
        x.clone()
    }
}

/// Half-open normalization of the image of `r` under `x -> signs*x + shift`.
pub fn affine_image(r: &Rect, signs: &[i8], shift: &[Scalar]) -> Rect {
    let mut lo = Vec::with_capacity(r.dim());
    let mut hi = Vec::with_capacity(r.dim());
    for i in 0..r.dim() {
        if signs[i] < 0 {
            lo.push(&shift[i] - &r.hi()[i]);
            hi.push(&shift[i] - &r.lo()[i]);
        } else {
            lo.push(&r.lo()[i] + &shift[i]);
            hi.push(&r.hi()[i] + &shift[i]);
        }
    }
    Rect::new(lo, hi).expect("image of a nonempty box")
}

impl FlipPiece {
    pub fn image(&self) -> Rect {
        affine_image(&self.rect, &self.signs, &self.shift)
    }

    fn inverse(&self) -> FlipPiece {
        let shift = self
            .shift
            .iter()
            .zip(&self.signs)
            .map(|(s, &e)| signed(&-s, e))
            .collect();
        FlipPiece {
            rect: self.image(),
            signs: self.signs.clone(),
            shift,
        }
    }

    /// Normalized preimage of `b`, a box inside the image.
    fn preimage(&self, b: &Rect) -> Rect {
        let inv = self.inverse();
        affine_image(b, &inv.signs, &inv.shift)
    }
}

#[derive(Clone, Debug)]
pub struct FlipMap {
    ambient: Multirect,
    pieces: Vec<FlipPiece>,
}

impl FlipMap {
    pub fn new(ambient: Multirect, pieces: Vec<FlipPiece>) -> Result<FlipMap> {
        let f = FlipMap { ambient, pieces };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(ambient: &Multirect) -> FlipMap {
        FlipMap::from_recmap(&RecMap::identity(ambient))
    }

    pub fn from_recmap(f: &RecMap) -> FlipMap {
        FlipMap {
            ambient: f.ambient().clone(),
            pieces: f
                .pieces()
                .iter()
                .map(|p| FlipPiece {
                    rect: p.rect.clone(),
                    signs: vec![1; p.rect.dim()],
                    shift: p.shift.clone(),
                })
                .collect(),
        }
    }

    /// `x -> lo + hi - x` on axis `axis` of `r`, identity elsewhere.
    pub fn reflection(ambient: &Multirect, r: &Rect, axis: usize) -> Result<FlipMap> {
        if !ambient.contains(&Multirect::single(r.clone()))? {
            return Err(Error::pre("reflected box leaves the ambient set"));
        }
        let table = r
            .table()
            .ok_or_else(|| Error::pre("zero-dimensional box"))?;
        let mut signs = vec![1i8; r.dim()];
        signs[axis] = -1;
        let mut shift = vec![Scalar::zero(table); r.dim()];
        shift[axis] = &r.lo()[axis] + &r.hi()[axis];
        let mut pieces = vec![FlipPiece {
            rect: r.clone(),
            signs,
            shift,
        }];
        pieces.extend(FlipMap::identity(&ambient.subtract_rect(r)?).pieces);
        Ok(FlipMap {
            ambient: ambient.clone(),
            pieces,
        })
    }

    pub fn ambient(&self) -> &Multirect {
        &self.ambient
    }

    pub fn pieces(&self) -> &[FlipPiece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for (k, p) in self.pieces.iter().enumerate() {
            if p.rect.dim() != d || p.signs.len() != d || p.shift.len() != d {
                return Err(Error::InvalidMap(format!(
                    "piece {k} has the wrong dimension"
                )));
            }
            if p.signs.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::InvalidMap(format!(
                    "piece {k} has a sign other than ±1"
                )));
            }
        }
        RectPartition::new(
            self.ambient.clone(),
            self.pieces.iter().map(|p| p.rect.clone()).collect(),
        )
        .map_err(|e| Error::InvalidMap(format!("domains: {e}")))?;
        RectPartition::new(
            self.ambient.clone(),
            self.pieces.iter().map(FlipPiece::image).collect(),
        )
        .map_err(|e| Error::InvalidMap(format!("images: {e}")))?;
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn inverse(&self) -> FlipMap {
        FlipMap {
            ambient: self.ambient.clone(),
            pieces: self.pieces.iter().map(FlipPiece::inverse).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FlipMap) -> Result<FlipMap> {
        if !self.ambient.set_eq(&other.ambient)? {
            return Err(Error::AmbientMismatch);
        }
        let mut pieces = Vec::new();
        for g in &other.pieces {
            let img = g.image();
            for f in &self.pieces {
                if let Some(k) = img.intersect(&f.rect)? {
                    let signs: Vec<i8> = f.signs.iter().zip(&g.signs).map(|(a, b)| a * b).collect();
                    let shift = f
                        .shift
                        .iter()
                        .zip(&g.shift)
                        .zip(&f.signs)
                        .map(|((fs, gs), &e)| &signed(gs, e) + fs)
                        .collect();
                    pieces.push(FlipPiece {
                        rect: g.preimage(&k),
                        signs,
                        shift,
                    });
                }
            }
        }
        Ok(FlipMap {
            ambient: self.ambient.clone(),
            pieces,
        })
    }

    /// Equality modulo hyperplanes.
    pub fn equals(&self, other: &FlipMap) -> Result<bool> {
        if !self.ambient.set_eq(&other.ambient)? {
            return Err(Error::AmbientMismatch);
        }
        for a in &self.pieces {
            for b in &other.pieces {
                if a.rect.intersects(&b.rect)? && (a.signs != b.signs || a.shift != b.shift) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.signs.iter().all(|&s| s == 1) && p.shift.iter().all(Scalar::is_zero))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ambient": self.ambient.to_json(),
            "pieces": self.pieces.iter().map(|p| serde_json::json!({
                "rect": p.rect.to_json(),
                "signs": p.signs,
                "shift": p.shift.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        dim: usize,
        value: &serde_json::Value,
    ) -> Result<FlipMap> {
        let ambient = Multirect::from_json(
            table,
            dim,
            value.get("ambient").unwrap_or(&serde_json::Value::Null),
            "ambient",
        )?;
        let list = value
            .get("pieces")
            .and_then(|p| p.as_array())
            .ok_or_else(|| Error::parse("pieces", "expected an array"))?;
        let mut pieces = Vec::with_capacity(list.len());
        for (k, p) in list.iter().enumerate() {
            let loc = format!("pieces[{k}]");
            let rect = Rect::from_json(
                table,
                p.get("rect").unwrap_or(&serde_json::Value::Null),
                &format!("{loc}.rect"),
            )?;
            let signs = p
                .get("signs")
                .and_then(|s| s.as_array())
                .ok_or_else(|| Error::parse(format!("{loc}.signs"), "expected an array"))?
                .iter()
                .map(|s| match s.as_i64() {
                    Some(1) => Ok(1i8),
                    Some(-1) => Ok(-1i8),
                    _ => Err(Error::parse(
                        format!("{loc}.signs"),
                        "entries must be 1 or -1",
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            let shift = parse_vector(table, p.get("shift"), &format!("{loc}.shift"))?;
            if rect.dim() != dim || signs.len() != dim || shift.len() != dim {
                return Err(Error::parse(loc, format!("expected dimension {dim}")));
            }
            pieces.push(FlipPiece { rect, signs, shift });
        }
        let f = FlipMap { ambient, pieces };
        f.validate()
            .map_err(|e| Error::parse("pieces", e.to_string()))?;
        Ok(f)
    }
}

fn sign_vectors(d: usize) -> Vec<Vec<i8>> {
    (0..1usize << d)
        .map(|m| {
            (0..d)
                .map(|i| if m >> i & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

fn symmetric_cube(table: &Arc<SymbolTable>, d: usize) -> Multirect {
    Multirect::single(Rect::new_unchecked(
        vec![Scalar::integer(table, -1); d],
        vec![Scalar::one(table); d],
    ))
}

/// The map `x -> A g(A x)` for a sign vector `A`.
fn conjugate_by_signs(g: &RecMap, a: &[i8]) -> RecMap {
    let zero: Vec<Scalar> = g
        .pieces()
        .first()
        .map(|p| p.shift.iter().map(|s| Scalar::zero(s.table())).collect())
        .unwrap_or_default();
    let pieces = g
        .pieces()
        .iter()
        .map(|p| {
            let rect = affine_image(&p.rect, a, &zero);
            let shift = p.shift.iter().zip(a).map(|(s, &e)| signed(s, e)).collect();
            Piece::new(rect, shift)
        })
        .collect();
    RecMap::new_unchecked(g.ambient().clone(), pieces)
}

/// `q(F)` on `[-1, 1)^d`: on the orthant of sign vector `A`, the piece `K`
/// of `F` with signs `s` and shift `t` becomes `A K` translated by `A s t`.
pub fn flip_embed(f: &FlipMap) -> Result<RecMap> {
    let d = f.dim();
    let table = f
        .pieces
        .first()
        .and_then(|p| p.rect.table())
        .ok_or_else(|| Error::pre("empty flip map"))?
        .clone();
    if !f.ambient.set_eq(&Multirect::unit_cube(&table, d))? {
        return Err(Error::pre("embedding needs a flip map of the unit cube"));
    }
    let zero = vec![Scalar::zero(&table); d];
    let mut pieces = Vec::with_capacity(f.pieces.len() << d);
    for a in sign_vectors(d) {
        for p in &f.pieces {
            let rect = affine_image(&p.rect, &a, &zero);
            let shift = (0..d)
                .map(|i| signed(&p.shift[i], a[i] * p.signs[i]))
                .collect();
            pieces.push(Piece::new(rect, shift));
        }
    }
    Ok(RecMap::new_unchecked(symmetric_cube(&table, d), pieces))
}

/// `r(g)`: restriction to `[0, 1)^d` followed by folding back with the
/// sign of the orthant reached.
pub fn flip_unembed(g: &RecMap) -> Result<FlipMap> {
    let d = g.dim();
    let table = g.table().ok_or_else(|| Error::pre("empty map"))?.clone();
    if !g.ambient().set_eq(&symmetric_cube(&table, d))? {
        return Err(Error::pre("unembedding needs a map of [-1, 1)^d"));
    }
    for i in 0..d {
        let mut a = vec![1i8; d];
        a[i] = -1;
        if !conjugate_by_signs(g, &a).equals(g)? {
            return Err(Error::pre(format!(
                "map does not commute with the reflection of axis {}",
                i + 1
            )));
        }
    }
    let unit = Rect::unit_cube(&table, d);
    let zero = vec![Scalar::zero(&table); d];
    let orthants: Vec<(Vec<i8>, Rect)> = sign_vectors(d)
        .into_iter()
        .map(|a| {
            let r = affine_image(&unit, &a, &zero);
            (a, r)
        })
        .collect();
    let mut pieces = Vec::new();
    for p in g.pieces() {
        let Some(k) = p.rect.intersect(&unit)? else {
            continue;
        };
        let img = k.translate(&p.shift);
        for (b, orthant) in &orthants {
            if let Some(part) = img.intersect(orthant)? {
                let neg: Vec<Scalar> = p.shift.iter().map(|s| -s).collect();
                let rect = part.translate(&neg);
                let shift = p.shift.iter().zip(b).map(|(s, &e)| signed(s, e)).collect();
                pieces.push(FlipPiece {
                    rect,
                    signs: b.clone(),
                    shift,
                });
            }
        }
    }
    FlipMap::new(Multirect::unit_cube(&table, d), pieces)
}

/// Random flip map of the unit cube: a product of grid-aligned rectangle
/// exchanges and box reflections.
pub fn random_flipmap(sampler: &mut Sampler, dim: usize, steps: usize) -> Result<FlipMap> {
    let table = sampler.table().clone();
    let cube = Multirect::unit_cube(&table, dim);
    let grid = sampler.qfree_grid(dim)?;
    let cells = grid.cells();
    let mut f = FlipMap::identity(&cube);
    for _ in 0..steps {
        let g = if sampler.below(2) == 0 {
            FlipMap::from_recmap(&sampler.grid_element(&grid)?)
        } else {
            let cell = &cells[sampler.below(cells.len())];
            FlipMap::reflection(&cube, cell, sampler.below(dim))?
        };
        f = g.compose(&f)?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::parse_symbol_spec;
    use crate::scalar::q;

    #[test]
    fn reflection_squares_to_identity() {
        let t = parse_symbol_spec("sqrt2").unwrap();
        let a = Scalar::symbol(&t, "sqrt2", q(1, 2)).unwrap();
        let cube = Multirect::unit_cube(&t, 1);
        let r = Rect::new(vec![Scalar::zero(&t)], vec![a]).unwrap();
        let f = FlipMap::reflection(&cube, &r, 0).unwrap();
        assert!(f.is_valid());
        assert!(!f.is_identity());
        assert!(f
            .compose(&f)
            .unwrap()
            .equals(&FlipMap::identity(&cube))
            .unwrap());
        let g = flip_embed(&f).unwrap();
        assert!(g.is_valid().unwrap());
        assert!(!g.is_identity());
        assert!(g
            .compose(&g)
            .unwrap()
            .equals(&RecMap::identity(g.ambient()))
            .unwrap());
    }

    #[test]
    fn translations_compose_as_rectangle_exchanges() {
        let t = parse_symbol_spec("sqrt2").unwrap();
        let mut s = Sampler::new(&t, 5);
        let f = s.recmap(2, 5).unwrap();
        let g = s.recmap(2, 5).unwrap();
        let lhs = FlipMap::from_recmap(&f)
            .compose(&FlipMap::from_recmap(&g))
            .unwrap();
        assert!(lhs
            .equals(&FlipMap::from_recmap(&f.compose(&g).unwrap()))
            .unwrap());
    }

    #[test]
    fn embedding_round_trip_and_homomorphism() {
        let t = parse_symbol_spec("sqrt2,sqrt3").unwrap();
        let mut s = Sampler::new(&t, 9);
        for d in 1..=2 {
            let f = random_flipmap(&mut s, d, 4).unwrap();
            let g = random_flipmap(&mut s, d, 4).unwrap();
            assert!(f.is_valid() && g.is_valid());
            let qf = flip_embed(&f).unwrap();
            assert!(qf.is_valid().unwrap());
            assert!(flip_unembed(&qf).unwrap().equals(&f).unwrap());
            let lhs = flip_embed(&f.compose(&g).unwrap()).unwrap();
            let rhs = qf.compose(&flip_embed(&g).unwrap()).unwrap();
            assert!(lhs.equals(&rhs).unwrap());
        }
        let cube = Multirect::unit_cube(&t, 2);
        assert!(flip_embed(&FlipMap::identity(&cube)).unwrap().is_identity());
    }

    #[test]
    fn non_centralizing_maps_are_rejected() {
        let t = parse_symbol_spec("").unwrap();
        let half = Scalar::ratio(&t, 1, 2);
        let big = symmetric_cube(&t, 1);
        let p = Rect::new(vec![Scalar::integer(&t, -1)], vec![-&half]).unwrap();
        let qq = Rect::new(vec![Scalar::zero(&t)], vec![half]).unwrap();
        let tau = RecMap::transposition(&big, &p, &qq).unwrap();
        assert!(flip_unembed(&tau).is_err());
    }
}
