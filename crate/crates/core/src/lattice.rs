//! Fundamental domains of lattices as multirectangles, and the tensor
//! volume of the quotient torus.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Multirect, Rect};
use crate::invariants::{vol_tensor_in, TensorValue};
use crate::recmap::{is_lex_positive, parse_vector};
use crate::scalar::{add_vec, is_zero_vec, Scalar, SymbolTable};

/// Lattice spanned by `d` linearly independent generators of `R^d`.
#[derive(Clone, Debug)]
pub struct Lattice {
    table: Arc<SymbolTable>,
    generators: Vec<Vec<Scalar>>,
    inverse: Vec<Vec<f64>>,
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() <= scale * 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = a[r][col];
                if factor != 0.0 {
                    let pivot_row = a[col].clone();
                    for (v, w) in a[r].iter_mut().zip(pivot_row) {
                        *v -= factor * w;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl Lattice {
    pub fn new(table: &Arc<SymbolTable>, generators: Vec<Vec<Scalar>>) -> Result<Lattice> {
        let d = generators.len();
        if d == 0 {
            return Err(Error::pre("a lattice needs at least one generator"));
        }
        for (j, g) in generators.iter().enumerate() {
            if g.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: g.len(),
                });
            }
            if is_zero_vec(g) {
                return Err(Error::pre(format!("generator {j} is zero")));
            }
        }
        // Columns of the matrix are the generators.
        let matrix: Vec<Vec<f64>> = (0..d)
            .map(|i| generators.iter().map(|g| g[i].to_f64()).collect())
            .collect();
        let inverse =
            invert(&matrix).ok_or_else(|| Error::pre("generators are (numerically) dependent"))?;
        Ok(Lattice {
            table: table.clone(),
            generators,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }

    pub fn point(&self, coeffs: &[i64]) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(&self.table); self.dim()];
        for (g, &n) in self.generators.iter().zip(coeffs) {
            if n != 0 {
                let scaled: Vec<Scalar> = g.iter().map(|x| x.scale_int(n)).collect();
                v = add_vec(&v, &scaled);
            }
        }
        v
    }

    /// Bounding box of the closed parallelepiped spanned by the generators.
    /// Its translates cover space.
    pub fn spanned_box(&self) -> Result<Rect> {
        let d = self.dim();
        let mut lo = vec![Scalar::zero(&self.table); d];
        let mut hi = vec![Scalar::zero(&self.table); d];
        for g in &self.generators {
            for i in 0..d {
                if g[i].is_positive()? {
                    hi[i] = &hi[i] + &g[i];
                } else {
                    lo[i] = &lo[i] + &g[i];
                }
            }
        }
        Rect::new(lo, hi)
    }

    /// Lattice vectors `w` with `(from + w)` meeting `to`.
    pub fn translates_meeting(&self, from: &Rect, to: &Rect) -> Result<Vec<Vec<Scalar>>> {
        let d = self.dim();
        let mut center = vec![0.0; d];
        let mut radius = vec![0.0; d];
        for i in 0..d {
            let a = to.lo()[i].to_f64() - from.hi()[i].to_f64();
            let b = to.hi()[i].to_f64() - from.lo()[i].to_f64();
            center[i] = (a + b) / 2.0;
            radius[i] = (b - a).abs() / 2.0;
        }
        let mut ranges = Vec::with_capacity(d);
        for j in 0..d {
            let c: f64 = (0..d).map(|i| self.inverse[j][i] * center[i]).sum();
            let r: f64 = (0..d).map(|i| self.inverse[j][i].abs() * radius[i]).sum();
            let lo = (c - r).floor() as i64 - 1;
            let hi = (c + r).ceil() as i64 + 1;
            if hi - lo > 100_000 {
                return Err(Error::pre("lattice is too fine for the box"));
            }
            ranges.push((lo, hi));
        }
        let mut out = Vec::new();
        let mut n: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let w = self.point(&n);
            if from.translate(&w).intersects(to)? {
                out.push(w);
            }
            let mut j = 0;
            loop {
                if j == d {
                    return Ok(out);
                }
                if n[j] < ranges[j].1 {
                    n[j] += 1;
                    break;
                }
                n[j] = ranges[j].0;
                j += 1;
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "generators": self.generators.iter().map(|g| g.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(table: &Arc<SymbolTable>, value: &serde_json::Value) -> Result<Lattice> {
        let gens = value
            .get("generators")
            .and_then(|g| g.as_array())
            .ok_or_else(|| Error::parse("generators", "expected an array of vectors"))?;
        let generators = gens
            .iter()
            .enumerate()
            .map(|(j, g)| parse_vector(table, Some(g), &format!("generators[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        Lattice::new(table, generators)
    }
}

/// Checkable facts about a computed fundamental domain.
#[derive(Clone, Debug)]
pub struct DomainReport {
    /// Nonzero lattice vectors tested for `M ∩ (M + w) = ∅`.
    pub disjointness_witnesses: usize,
    pub disjoint: bool,
    /// Translates of `M` used to cover the starting box.
    pub tiling_witnesses: usize,
    pub tiles: bool,
}

#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub start: Rect,
    pub domain: Multirect,
    pub report: DomainReport,
}

fn covers(lattice: &Lattice, m: &Multirect, target: &Rect) -> Result<(bool, usize)> {
    let bbox = match m.bbox()? {
        Some(b) => b,
        None => return Ok((false, 0)),
    };
    let shifts = lattice.translates_meeting(&bbox, target)?;
    let mut rest = Multirect::single(target.clone());
    for w in &shifts {
        rest = rest.subtract(&m.translate(w))?;
        if rest.is_empty() {
            break;
        }
    }
    Ok((rest.is_empty(), shifts.len()))
}

/// `M = R0 \ ∪ (R0 + w)` over lattice vectors `w > 0` in lexicographic
/// order. `start` defaults to [`Lattice::spanned_box`].
pub fn fundamental_domain(lattice: &Lattice, start: Option<&Rect>) -> Result<FundamentalDomain> {
    let spanned = lattice.spanned_box()?;
    let r0 = match start {
        Some(r) => {
            if r.dim() != lattice.dim() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.dim(),
                    found: r.dim(),
                });
            }
            let (ok, _) = covers(lattice, &Multirect::single(r.clone()), &spanned)?;
            if !ok {
                return Err(Error::pre(
                    "translates of the starting box do not cover space",
                ));
            }
            r.clone()
        }
        None => spanned,
    };
    let mut domain = Multirect::single(r0.clone());
    for w in lattice.translates_meeting(&r0, &r0)? {
        if is_lex_positive(&w)? {
            domain = domain.subtract_rect(&r0.translate(&w))?;
        }
    }
    let report = verify_domain(lattice, &domain, &r0)?;
    if !report.disjoint || !report.tiles {
        return Err(Error::pre("constructed domain failed its witness checks"));
    }
    Ok(FundamentalDomain {
        start: r0,
        domain,
        report,
    })
}

/// Disjointness of the translates meeting `M`, and coverage of `target`.
pub fn verify_domain(lattice: &Lattice, m: &Multirect, target: &Rect) -> Result<DomainReport> {
    let bbox = m.bbox()?.ok_or_else(|| Error::pre("empty domain"))?;
    let mut disjoint = true;
    let mut count = 0;
    for w in lattice.translates_meeting(&bbox, &bbox)? {
        if is_zero_vec(&w) {
            continue;
        }
        count += 1;
        if !m.is_disjoint_from(&m.translate(&w))? {
            disjoint = false;
            break;
        }
    }
    let (tiles, used) = covers(lattice, m, target)?;
    Ok(DomainReport {
        disjointness_witnesses: count,
        disjoint,
        tiling_witnesses: used,
        tiles,
    })
}

pub fn torus_vol(lattice: &Lattice, start: Option<&Rect>) -> Result<TensorValue> {
    let fd = fundamental_domain(lattice, start)?;
    Ok(vol_tensor_in(lattice.table(), &fd.domain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn t() -> Arc<SymbolTable> {
        SymbolTable::quadratic(&[2, 3]).unwrap()
    }

    fn s(t: &Arc<SymbolTable>, n: i64, d: i64) -> Scalar {
        Scalar::ratio(t, n, d)
    }

    #[test]
    fn integer_lattice_keeps_the_unit_square() {
        let t = t();
        let l = Lattice::new(
            &t,
            vec![
                vec![s(&t, 1, 1), s(&t, 0, 1)],
                vec![s(&t, 0, 1), s(&t, 1, 1)],
            ],
        )
        .unwrap();
        let fd = fundamental_domain(&l, Some(&Rect::unit_cube(&t, 2))).unwrap();
        assert!(fd.domain.set_eq(&Multirect::unit_cube(&t, 2)).unwrap());
        assert_eq!(torus_vol(&l, None).unwrap().coeff(&["1", "1"]), q(1, 1));
    }

    #[test]
    fn sheared_lattice() {
        let t = t();
        let l = Lattice::new(
            &t,
            vec![
                vec![s(&t, 1, 1), s(&t, 0, 1)],
                vec![s(&t, 1, 2), s(&t, 1, 1)],
            ],
        )
        .unwrap();
        let v = torus_vol(&l, None).unwrap();
        assert_eq!(v.coeffs().len(), 1);
        assert_eq!(v.coeff(&["1", "1"]), q(1, 1));
        let other = Rect::new(
            vec![s(&t, -1, 3), s(&t, 0, 1)],
            vec![s(&t, 3, 2), s(&t, 5, 4)],
        )
        .unwrap();
        assert_eq!(torus_vol(&l, Some(&other)).unwrap(), v);
    }

    #[test]
    fn scaled_lattice() {
        let t = t();
        let r = Scalar::symbol(&t, "sqrt2", q(1, 1)).unwrap();
        let l = Lattice::new(&t, vec![vec![r.clone(), s(&t, 0, 1)], vec![s(&t, 0, 1), r]]).unwrap();
        let v = torus_vol(&l, None).unwrap();
        assert_eq!(v.coeffs().len(), 1);
        assert_eq!(v.coeff(&["sqrt2", "sqrt2"]), q(1, 1));
    }

    #[test]
    fn irrational_shear_matches_determinant_tensor() {
        let t = t();
        let a = s(&t, 1, 1);
        let b = Scalar::symbol(&t, "sqrt2", q(1, 4)).unwrap();
        let c = Scalar::symbol(&t, "sqrt3", q(1, 2)).unwrap();
        let d = s(&t, 1, 1);
        let l = Lattice::new(
            &t,
            vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]],
        )
        .unwrap();
        let expected = TensorValue::product(&t, &[a, d])
            .sub(&TensorValue::product(&t, &[c, b]))
            .unwrap();
        assert_eq!(torus_vol(&l, None).unwrap(), expected);
    }

    #[test]
    fn small_start_box_is_rejected() {
        let t = t();
        let l = Lattice::new(
            &t,
            vec![
                vec![s(&t, 1, 1), s(&t, 0, 1)],
                vec![s(&t, 0, 1), s(&t, 1, 1)],
            ],
        )
        .unwrap();
        let small = Rect::from_sides(&[s(&t, 1, 2), s(&t, 1, 1)]).unwrap();
        assert!(fundamental_domain(&l, Some(&small)).is_err());
    }

    #[test]
    fn dependent_generators_are_rejected() {
        let t = t();
        assert!(Lattice::new(
            &t,
            vec![
                vec![s(&t, 1, 1), s(&t, 1, 1)],
                vec![s(&t, 2, 1), s(&t, 2, 1)]
            ]
        )
        .is_err());
    }
}
