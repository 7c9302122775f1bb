//! Tensor volume, the generalized SAF invariant, and Rec-isomorphisms
//! between multirectangles of equal tensor volume.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{Multirect, Rect};
use crate::qfree::simplicial_refine_with_budget;
use crate::recmap::{coalesce_pieces, Piece, RecMap};
use crate::scalar::{same_table, sub_vec, try_sort_by, Scalar, SymbolTable};

/// Element of the k-fold tensor power of R over Q, sparse in the basis of
/// symbol tuples.
#[derive(Clone)]
pub struct TensorValue {
    table: Arc<SymbolTable>,
    order: usize,
    coeffs: BTreeMap<Vec<u32>, BigRational>,
}

impl PartialEq for TensorValue {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.coeffs == other.coeffs
            && same_table(&self.table, &other.table)
    }
}

impl Eq for TensorValue {}

impl fmt::Debug for TensorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TensorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(t, q)| {
                let names: Vec<&str> = t.iter().map(|&s| self.table.name(s)).collect();
                format!("{q}*({})", names.join("⊗"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TensorValue {
    pub fn zero(table: &Arc<SymbolTable>, order: usize) -> TensorValue {
        TensorValue {
            table: table.clone(),
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// `s_1 ⊗ ... ⊗ s_k`, expanded multilinearly.
    pub fn product(table: &Arc<SymbolTable>, factors: &[Scalar]) -> TensorValue {
        let mut coeffs: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        coeffs.insert(Vec::new(), BigRational::from_integer(1.into()));
        for s in factors {
            let mut next = BTreeMap::new();
            for (t, q) in &coeffs {
                for (sym, c) in s.terms() {
                    let mut key = t.clone();
                    key.push(*sym);
                    add_entry(&mut next, key, q * c);
                }
            }
            coeffs = next;
        }
        TensorValue {
            table: table.clone(),
            order: factors.len(),
            coeffs,
        }
    }

    pub fn from_entries(
        table: &Arc<SymbolTable>,
        order: usize,
        entries: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Result<TensorValue> {
        let mut coeffs = BTreeMap::new();
        for (t, q) in entries {
            if t.len() != order {
                return Err(Error::DimensionMismatch {
                    expected: order,
                    found: t.len(),
                });
            }
            add_entry(&mut coeffs, t, q);
        }
        Ok(TensorValue {
            table: table.clone(),
            order,
            coeffs,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient on a tuple of symbol names.
    pub fn coeff(&self, names: &[&str]) -> BigRational {
        let key: Option<Vec<u32>> = names.iter().map(|n| self.table.index_of(n)).collect();
        key.and_then(|k| self.coeffs.get(&k).cloned())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &TensorValue) -> Result<TensorValue> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        if self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        let mut coeffs = self.coeffs.clone();
        for (t, q) in &other.coeffs {
            add_entry(&mut coeffs, t.clone(), q.clone());
        }
        Ok(TensorValue {
            table: self.table.clone(),
            order: self.order,
            coeffs,
        })
    }

    pub fn neg(&self) -> TensorValue {
        TensorValue {
            table: self.table.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|(t, q)| (t.clone(), -q)).collect(),
        }
    }

    pub fn sub(&self, other: &TensorValue) -> Result<TensorValue> {
        self.add(&other.neg())
    }

    /// Appends one more tensor factor on the right.
    pub fn tensor_scalar(&self, s: &Scalar) -> TensorValue {
        let mut coeffs = BTreeMap::new();
        for (t, q) in &self.coeffs {
            for (sym, c) in s.terms() {
                let mut key = t.clone();
                key.push(*sym);
                add_entry(&mut coeffs, key, q * c);
            }
        }
        TensorValue {
            table: self.table.clone(),
            order: self.order + 1,
            coeffs,
        }
    }

    pub fn swap_slots(&self, i: usize, j: usize) -> TensorValue {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, q)| {
                let mut k = t.clone();
                k.swap(i, j);
                (k, q.clone())
            })
            .collect();
        TensorValue {
            table: self.table.clone(),
            order: self.order,
            coeffs,
        }
    }

    /// `c(.., s, t) = -c(.., t, s)` on the last two slots.
    pub fn is_antisymmetric_last_two(&self) -> bool {
        if self.order < 2 {
            return self.is_zero();
        }
        let k = self.order;
        self.coeffs.iter().all(|(t, q)| {
            let mut swapped = t.clone();
            swapped.swap(k - 2, k - 1);
            match self.coeffs.get(&swapped) {
                Some(p) => *p == -q,
                None => false,
            }
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut entries: Vec<(Vec<String>, String)> = self
            .coeffs
            .iter()
            .map(|(t, q)| {
                (
                    t.iter().map(|&s| self.table.name(s).to_string()).collect(),
                    q.to_string(),
                )
            })
            .collect();
        entries.sort();
        serde_json::json!({
            "order": self.order,
            "coeffs": entries
                .into_iter()
                .map(|(t, q)| serde_json::json!({"tuple": t, "q": q}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        value: &serde_json::Value,
        location: &str,
    ) -> Result<TensorValue> {
        let order = value
            .get("order")
            .and_then(|o| o.as_u64())
            .ok_or_else(|| Error::parse(location, "tensor needs an integer `order`"))?
            as usize;
        let list = value
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::parse(location, "tensor needs a `coeffs` list"))?;
        let mut entries = Vec::with_capacity(list.len());
        for (i, e) in list.iter().enumerate() {
            let loc = format!("{location}.coeffs[{i}]");
            let names = e
                .get("tuple")
                .and_then(|t| t.as_array())
                .ok_or_else(|| Error::parse(&loc, "missing tuple"))?;
            let tuple = names
                .iter()
                .map(|n| {
                    let name = n
                        .as_str()
                        .ok_or_else(|| Error::parse(&loc, "tuple entries are symbol names"))?;
                    table
                        .index_of(name)
                        .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
                })
                .collect::<Result<Vec<u32>>>()?;
            let q: BigRational = e
                .get("q")
                .and_then(|q| q.as_str())
                .and_then(|q| q.parse().ok())
                .ok_or_else(|| Error::parse(&loc, "bad rational `q`"))?;
            entries.push((tuple, q));
        }
        TensorValue::from_entries(table, order, entries)
            .map_err(|e| Error::parse(location, e.to_string()))
    }
}

fn add_entry(map: &mut BTreeMap<Vec<u32>, BigRational>, key: Vec<u32>, q: BigRational) {
    if q.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(existing) => {
            *existing += q;
            if existing.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, q);
        }
    }
}

fn table_of(m: &Multirect) -> Result<Arc<SymbolTable>> {
    m.pieces()
        .iter()
        .find_map(|r| r.table())
        .cloned()
        .ok_or_else(|| {
            Error::pre("cannot infer the symbol table of an empty or zero-dimensional set")
        })
}

/// Sum over boxes of the tensor product of their side lengths.
pub fn vol_tensor_in(table: &Arc<SymbolTable>, m: &Multirect) -> TensorValue {
    let mut acc = TensorValue::zero(table, m.dim());
    for r in m.pieces() {
        let v = TensorValue::product(table, &r.sides());
        for (t, q) in v.coeffs {
            add_entry(&mut acc.coeffs, t, q);
        }
    }
    acc
}

pub fn vol_tensor(m: &Multirect) -> Result<TensorValue> {
    Ok(vol_tensor_in(&table_of(m)?, m))
}

/// Tensor volume with slot `axis` exchanged with the last slot.
pub fn vol_tensor_axis(m: &Multirect, axis: usize) -> Result<TensorValue> {
    let d = m.dim();
    if axis >= d {
        return Err(Error::pre(format!("axis {axis} out of range")));
    }
    Ok(vol_tensor(m)?.swap_slots(axis, d - 1))
}

/// The d components of the generalized SAF invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafInvariant {
    pub components: Vec<TensorValue>,
}

impl SafInvariant {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TensorValue::is_zero)
    }

    pub fn add(&self, other: &SafInvariant) -> Result<SafInvariant> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(SafInvariant { components })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.components.iter().map(TensorValue::to_json).collect())
    }
}

/// `T_i(f) = sum_v vol_{d,i}(X_v) ⊗ v_i` over displacement classes `X_v`.
pub fn saf(f: &RecMap) -> Result<SafInvariant> {
    let table = f
        .table()
        .cloned()
        .ok_or_else(|| Error::pre("map without coordinates"))?;
    let d = f.dim();
    let mut components = vec![TensorValue::zero(&table, d + 1); d];
    for (shift, class) in f.displacement_classes() {
        if shift.iter().all(Scalar::is_zero) {
            continue;
        }
        let vol = vol_tensor_in(&table, &class);
        for (i, comp) in components.iter_mut().enumerate() {
            if shift[i].is_zero() {
                continue;
            }
            let term = vol.swap_slots(i, d - 1).tensor_scalar(&shift[i]);
            for (t, q) in term.coeffs {
                add_entry(&mut comp.coeffs, t, q);
            }
        }
    }
    Ok(SafInvariant { components })
}

/// Membership in the derived subgroup: the SAF invariant vanishes.
pub fn is_in_derived(f: &RecMap) -> Result<bool> {
    Ok(saf(f)?.is_zero())
}

/// Membership in the subgroup generated by coordinatewise interval
/// exchanges and transpositions: every SAF coefficient sits on a tuple
/// starting with d-1 unit slots.
pub fn is_in_gtg(f: &RecMap) -> Result<bool> {
    let t = saf(f)?;
    let d = f.dim();
    let table = f
        .table()
        .ok_or_else(|| Error::pre("map without coordinates"))?;
    let unit = table.unit_index();
    Ok(t.components.iter().all(|c| {
        c.coeffs
            .keys()
            .all(|k| k[..d - 1].iter().all(|&s| s == unit))
    }))
}

/// A piecewise translation taking `source` bijectively onto `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecIsomorphism {
    source: Multirect,
    target: Multirect,
    pieces: Vec<Piece>,
}

impl RecIsomorphism {
    pub fn new(source: Multirect, target: Multirect, pieces: Vec<Piece>) -> Result<RecIsomorphism> {
        let iso = RecIsomorphism {
            source,
            target,
            pieces,
        };
        iso.validate()?;
        Ok(iso)
    }

    pub fn identity(m: &Multirect) -> RecIsomorphism {
        let f = RecMap::identity(m);
        RecIsomorphism {
            source: m.clone(),
            target: m.clone(),
            pieces: f.pieces().to_vec(),
        }
    }

    pub fn source(&self) -> &Multirect {
        &self.source
    }

    pub fn target(&self) -> &Multirect {
        &self.target
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Domains tile `source` and images tile `target`.
    pub fn validate(&self) -> Result<()> {
        let dim = self.source.dim();
        let domains: Vec<Rect> = self.pieces.iter().map(|p| p.rect.clone()).collect();
        let images: Vec<Rect> = self.pieces.iter().map(Piece::image).collect();
        let dom =
            Multirect::new(dim, domains).map_err(|e| Error::InvalidMap(format!("domains: {e}")))?;
        let img =
            Multirect::new(dim, images).map_err(|e| Error::InvalidMap(format!("images: {e}")))?;
        if !dom.set_eq(&self.source)? {
            return Err(Error::InvalidMap("domains do not tile the source".into()));
        }
        if !img.set_eq(&self.target)? {
            return Err(Error::InvalidMap("images do not tile the target".into()));
        }
        Ok(())
    }

    pub fn inverse(&self) -> RecIsomorphism {
        RecIsomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece::new(p.image(), p.shift.iter().map(|s| -s).collect()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "pieces": self.pieces.iter().map(|p| serde_json::json!({
                "rect": p.rect.to_json(),
                "shift": p.shift.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        dim: usize,
        value: &serde_json::Value,
    ) -> Result<RecIsomorphism> {
        let get = |k: &str| value.get(k).ok_or_else(|| Error::parse(k, "missing"));
        let source = Multirect::from_json(table, dim, get("source")?, "source")?;
        let target = Multirect::from_json(table, dim, get("target")?, "target")?;
        let list = get("pieces")?
            .as_array()
            .ok_or_else(|| Error::parse("pieces", "expected a list"))?;
        let mut pieces = Vec::with_capacity(list.len());
        for (i, p) in list.iter().enumerate() {
            let loc = format!("pieces[{i}]");
            let rect = Rect::from_json(
                table,
                p.get("rect").unwrap_or(&serde_json::Value::Null),
                &format!("{loc}.rect"),
            )?;
            let shift =
                crate::recmap::parse_vector(table, p.get("shift"), &format!("{loc}.shift"))?;
            if rect.dim() != dim || shift.len() != dim {
                return Err(Error::parse(loc, format!("expected dimension {dim}")));
            }
            pieces.push(Piece::new(rect, shift));
        }
        RecIsomorphism::new(source, target, pieces)
            .map_err(|e| Error::parse("pieces", e.to_string()))
    }
}

/// Outcome of the isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic(RecIsomorphism),
    NotIsomorphic {
        source: TensorValue,
        target: TensorValue,
    },
}

pub fn rec_isomorphism(m1: &Multirect, m2: &Multirect) -> Result<IsoOutcome> {
    rec_isomorphism_with_budget(m1, m2, crate::qfree::DEFAULT_SEARCH_BUDGET)
}

pub fn rec_isomorphism_with_budget(
    m1: &Multirect,
    m2: &Multirect,
    budget: u64,
) -> Result<IsoOutcome> {
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch {
            expected: m1.dim(),
            found: m2.dim(),
        });
    }
    if m1.is_empty() && m2.is_empty() {
        return Ok(IsoOutcome::Isomorphic(RecIsomorphism::identity(m1)));
    }
    let table = table_of(m1).or_else(|_| table_of(m2))?;
    let v1 = vol_tensor_in(&table, m1);
    let v2 = vol_tensor_in(&table, m2);
    if v1 != v2 {
        return Ok(IsoOutcome::NotIsomorphic {
            source: v1,
            target: v2,
        });
    }
    let common = m1.intersect(m2)?;
    let mut pieces = RecMap::identity(&common).pieces().to_vec();
    let left = m1.subtract(m2)?;
    let right = m2.subtract(m1)?;
    pieces.extend(match_boxes(left.pieces(), right.pieces(), budget)?);
    let iso = RecIsomorphism {
        source: m1.clone(),
        target: m2.clone(),
        pieces: coalesce_pieces(pieces),
    };
    iso.validate()?;
    Ok(IsoOutcome::Isomorphic(iso))
}

/// Cuts both families so every side length is a basis element of a
/// per-axis simplicial refinement, then pairs equal shapes.
fn match_boxes(left: &[Rect], right: &[Rect], budget: u64) -> Result<Vec<Piece>> {
    if left.is_empty() && right.is_empty() {
        return Ok(Vec::new());
    }
    let dim = left.first().or(right.first()).map(Rect::dim).unwrap_or(0);
    let mut left = left.to_vec();
    let mut right = right.to_vec();
    for axis in 0..dim {
        let mut distinct: Vec<Scalar> = Vec::new();
        for r in left.iter().chain(&right) {
            let s = r.side(axis);
            if !distinct.contains(&s) {
                distinct.push(s);
            }
        }
        let refinement = simplicial_refine_with_budget(&distinct, budget)?;
        let cut = |boxes: &[Rect]| -> Vec<Rect> {
            let mut out = Vec::new();
            for r in boxes {
                let row = &refinement.expansion[distinct
                    .iter()
                    .position(|d| *d == r.side(axis))
                    .expect("listed")];
                let mut at = r.lo()[axis].clone();
                for (m, b) in row.iter().zip(&refinement.basis) {
                    for _ in 0..*m {
                        let next = &at + b;
                        out.push(r.with_axis(axis, at.clone(), next.clone()));
                        at = next;
                    }
                }
            }
            out
        };
        left = cut(&left);
        right = cut(&right);
    }
    let mut groups: Vec<(Vec<Scalar>, Vec<Rect>, Vec<Rect>)> = Vec::new();
    for r in left {
        let shape = r.sides();
        match groups.iter_mut().find(|g| g.0 == shape) {
            Some(g) => g.1.push(r),
            None => groups.push((shape, vec![r], Vec::new())),
        }
    }
    for r in right {
        let shape = r.sides();
        match groups.iter_mut().find(|g| g.0 == shape) {
            Some(g) => g.2.push(r),
            None => return Err(Error::pre("shape counts differ despite equal volumes")),
        }
    }
    let mut pieces = Vec::new();
    for (_, mut a, mut b) in groups {
        if a.len() != b.len() {
            return Err(Error::pre("shape counts differ despite equal volumes"));
        }
        try_sort_by(&mut a, |x, y| x.cmp_lower(y))?;
        try_sort_by(&mut b, |x, y| x.cmp_lower(y))?;
        for (x, y) in a.into_iter().zip(b) {
            let shift = sub_vec(y.lo(), x.lo());
            pieces.push(Piece::new(x, shift));
        }
    }
    Ok(pieces)
}

/// Extends `phi: M1 -> M2` to a map of `ambient` sending `M1` onto `M2`.
pub fn extend_to_ambient(phi: &RecIsomorphism, ambient: &Multirect) -> Result<RecMap> {
    extend_to_ambient_with_budget(phi, ambient, crate::qfree::DEFAULT_SEARCH_BUDGET)
}

pub fn extend_to_ambient_with_budget(
    phi: &RecIsomorphism,
    ambient: &Multirect,
    budget: u64,
) -> Result<RecMap> {
    if !ambient.contains(&phi.source)? || !ambient.contains(&phi.target)? {
        return Err(Error::pre(
            "the ambient set must contain both ends of the isomorphism",
        ));
    }
    let rest_source = ambient.subtract(&phi.source)?;
    let rest_target = ambient.subtract(&phi.target)?;
    let rest = match rec_isomorphism_with_budget(&rest_source, &rest_target, budget)? {
        IsoOutcome::Isomorphic(iso) => iso,
        IsoOutcome::NotIsomorphic { .. } => {
            return Err(Error::pre("complements have different tensor volumes"));
        }
    };
    let mut pieces = phi.pieces.clone();
    pieces.extend(rest.pieces);
    let f = RecMap::new_unchecked(ambient.clone(), pieces);
    if let Some(v) = f.check()? {
        return Err(Error::InvalidMap(v.to_string()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recmap::{restricted_rotation, Shuffle};
    use crate::scalar::q;

    fn t() -> Arc<SymbolTable> {
        SymbolTable::quadratic(&[2, 3]).unwrap()
    }

    fn s(t: &Arc<SymbolTable>, n: i64, d: i64) -> Scalar {
        Scalar::ratio(t, n, d)
    }

    fn half_sqrt2(t: &Arc<SymbolTable>) -> Scalar {
        Scalar::symbol(t, "sqrt2", q(1, 2)).unwrap()
    }

    fn boxm(sides: &[Scalar]) -> Multirect {
        Multirect::single(Rect::from_sides(sides).unwrap())
    }

    #[test]
    fn volume_of_boxes() {
        let t = t();
        let v = vol_tensor(&boxm(&[s(&t, 1, 2), s(&t, 1, 3)])).unwrap();
        assert_eq!(v.coeff(&["1", "1"]), q(1, 6));
        assert_eq!(v.coeffs().len(), 1);
        let a = half_sqrt2(&t);
        let w = vol_tensor(&boxm(&[a.clone(), a])).unwrap();
        assert_eq!(w.coeff(&["sqrt2", "sqrt2"]), q(1, 4));
        assert_eq!(w.coeffs().len(), 1);
    }

    #[test]
    fn axis_volume_swaps_slots() {
        let t = t();
        let a = half_sqrt2(&t);
        let m = boxm(&[a, s(&t, 1, 3)]);
        assert_eq!(vol_tensor_axis(&m, 1).unwrap(), vol_tensor(&m).unwrap());
        let v = vol_tensor_axis(&m, 0).unwrap();
        assert_eq!(v.coeff(&["1", "sqrt2"]), q(1, 6));
        assert_eq!(v.swap_slots(0, 1), vol_tensor(&m).unwrap());
    }

    #[test]
    fn saf_of_restricted_rotation() {
        let t = t();
        let f = restricted_rotation(&t, &half_sqrt2(&t), &s(&t, 1, 3)).unwrap();
        let v = saf(&f).unwrap();
        assert_eq!(v.components.len(), 1);
        let c = &v.components[0];
        assert_eq!(c.coeffs().len(), 2);
        assert_eq!(c.coeff(&["sqrt2", "1"]), q(1, 6));
        assert_eq!(c.coeff(&["1", "sqrt2"]), q(-1, 6));
        assert!(c.is_antisymmetric_last_two());
        assert!(!is_in_derived(&f).unwrap());
        assert!(is_in_gtg(&f).unwrap());
    }

    #[test]
    fn saf_of_identity_and_transposition() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        assert!(saf(&RecMap::identity(&cube)).unwrap().is_zero());
        let p = Rect::from_sides(&[s(&t, 1, 4), half_sqrt2(&t).scale(&q(1, 2))]).unwrap();
        let qq = p.translate(&[s(&t, 1, 2), s(&t, 1, 2)]);
        let tau = RecMap::transposition(&cube, &p, &qq).unwrap();
        assert!(is_in_derived(&tau).unwrap());
        assert!(is_in_gtg(&tau).unwrap());
    }

    #[test]
    fn gtg_rejects_irrational_base() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let c = Scalar::symbol(&t, "sqrt3", q(1, 2)).unwrap();
        let base = Rect::new(vec![s(&t, 0, 1)], vec![c]).unwrap();
        let sh = Shuffle::new(0, base, s(&t, 0, 1), half_sqrt2(&t), s(&t, 1, 3)).unwrap();
        let f = sh.to_recmap(&cube).unwrap();
        let v = saf(&f).unwrap();
        assert!(v.components[1].is_zero());
        // c ⊗ (a ⊗ b - b ⊗ a), with slot order (base, rotation, offset)
        assert_eq!(v.components[0].coeff(&["sqrt3", "sqrt2", "1"]), q(1, 12));
        assert!(!is_in_gtg(&f).unwrap());
        assert!(!is_in_derived(&f).unwrap());
    }

    #[test]
    fn transverse_halves_are_isomorphic() {
        let t = t();
        let a = boxm(&[s(&t, 1, 2), s(&t, 1, 1)]);
        let b = boxm(&[s(&t, 1, 1), s(&t, 1, 2)]);
        match rec_isomorphism(&a, &b).unwrap() {
            IsoOutcome::Isomorphic(iso) => {
                iso.validate().unwrap();
                assert!(iso.pieces().len() >= 2);
            }
            other => panic!("expected an isomorphism, got {other:?}"),
        }
    }

    #[test]
    fn different_volumes_are_witnessed() {
        let t = t();
        let a = half_sqrt2(&t);
        let sq = boxm(&[a.clone(), a]);
        let half = boxm(&[s(&t, 1, 2), s(&t, 1, 1)]);
        match rec_isomorphism(&sq, &half).unwrap() {
            IsoOutcome::NotIsomorphic { source, target } => {
                assert_eq!(source.coeff(&["sqrt2", "sqrt2"]), q(1, 4));
                assert_eq!(target.coeff(&["1", "1"]), q(1, 2));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        match rec_isomorphism(&half, &half).unwrap() {
            IsoOutcome::Isomorphic(iso) => assert!(iso
                .pieces()
                .iter()
                .all(|p| p.shift.iter().all(Scalar::is_zero))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extension_of_a_translation_is_a_transposition() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let p = Rect::from_sides(&[s(&t, 1, 3), half_sqrt2(&t).scale(&q(1, 2))]).unwrap();
        let v = vec![s(&t, 1, 2), s(&t, 1, 2)];
        let qq = p.translate(&v);
        let phi = RecIsomorphism::new(
            Multirect::single(p.clone()),
            Multirect::single(qq.clone()),
            vec![Piece::new(p.clone(), v)],
        )
        .unwrap();
        let f = extend_to_ambient(&phi, &cube).unwrap();
        assert!(f
            .equals(&RecMap::transposition(&cube, &p, &qq).unwrap())
            .unwrap());
        let id =
            extend_to_ambient(&RecIsomorphism::identity(&Multirect::single(p)), &cube).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn tensor_json_round_trip() {
        let t = t();
        let f = restricted_rotation(&t, &half_sqrt2(&t), &s(&t, 1, 3)).unwrap();
        let c = &saf(&f).unwrap().components[0];
        let back = TensorValue::from_json(&t, &c.to_json(), "t").unwrap();
        assert_eq!(*c, back);
        assert_eq!(
            c.to_json(),
            serde_json::json!({"order": 2, "coeffs": [
                {"tuple": ["1", "sqrt2"], "q": "-1/6"},
                {"tuple": ["sqrt2", "1"], "q": "1/6"},
            ]})
        );
    }
}
