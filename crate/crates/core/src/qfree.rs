//! Q-linear independence tests and simplicial refinements of finite sets of
//! positive lengths.
//!
//! A simplicial refinement of positive scalars `s_1..s_n` is a list of
//! positive, Q-independent scalars `b_1..b_k` such that every `s_i` is a
//! nonnegative integer combination of the `b_j`. Such a list always exists;
//! the search below goes through increasingly expensive tiers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{GridPattern, RectPartition};
use crate::scalar::{try_sort_by, Scalar, SymbolTable};

pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

/// Subtractive steps tried before falling back to exhaustive search.
const HEURISTIC_STEPS: u64 = 200_000;

fn coeff_vector(s: &Scalar) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); s.table().len()];
    for (i, q) in s.terms() {
        v[*i as usize] = q.clone();
    }
    v
}

/// Incremental row echelon form over Q.
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &mut [BigRational]) {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
    }

    /// Adds `v` if independent of the rows so far.
    fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        self.reduce(&mut v);
        let pivot = match v.iter().position(|x| !x.is_zero()) {
            None => return false,
            Some(p) => p,
        };
        let inv = v[pivot].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &f * r;
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// True iff the scalars, as a list, are Q-linearly independent.
pub fn is_independent(values: &[Scalar]) -> bool {
    let mut e = Echelon::new();
    values.iter().all(|v| e.insert(coeff_vector(v)))
}

/// Q-independence of the set of distinct values.
pub fn is_qfree_set(values: &[Scalar]) -> bool {
    let mut distinct: Vec<Scalar> = Vec::new();
    for v in values {
        if !distinct.contains(v) {
            distinct.push(v.clone());
        }
    }
    is_independent(&distinct)
}

/// Dimension of the Q-span.
pub fn rank(values: &[Scalar]) -> usize {
    let mut e = Echelon::new();
    values.iter().filter(|v| e.insert(coeff_vector(v))).count()
}

/// Coordinates of `target` in the Q-independent list `basis`, if it lies in
/// their span.
pub fn express(target: &Scalar, basis: &[Scalar]) -> Option<Vec<BigRational>> {
    let n = target.table().len();
    let k = basis.len();
    // Augmented columns: basis vectors as columns, solved by elimination on
    // the transposed system.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                basis.iter().map(|b| coeff_vector(b)[i].clone()).collect();
            row.push(coeff_vector(target)[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let found = (pivot_row..n).find(|&r| !rows[r][col].is_zero());
        let r = match found {
            None => continue,
            Some(r) => r,
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for other in 0..n {
            if other != pivot_row && !rows[other][col].is_zero() {
                let f = rows[other][col].clone();
                let pr = rows[pivot_row].clone();
                for (x, p) in rows[other].iter_mut().zip(&pr) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); k];
    for (r, &col) in pivots.iter().enumerate() {
        out[col] = rows[r][k].clone();
    }
    Some(out)
}

/// Per axis, the set of distinct side lengths of the cells is Q-free.
pub fn is_setwise_qfree(partition: &RectPartition) -> bool {
    (0..partition.dim()).all(|i| {
        let lengths: Vec<Scalar> = partition.cells().iter().map(|c| c.side(i)).collect();
        is_qfree_set(&lengths)
    })
}

pub fn is_grid_qfree(grid: &GridPattern) -> bool {
    (0..grid.dim()).all(|i| is_qfree_set(&grid.lengths(i)))
}

/// Which strategy produced a refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Independent,
    Subset,
    Gcd,
    Subtractive,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialRefinement {
    pub basis: Vec<Scalar>,
    /// One row per input: `input_i = sum_j expansion[i][j] * basis[j]`.
    pub expansion: Vec<Vec<u64>>,
    pub tier: Tier,
    /// Subtractive steps or search nodes spent.
    pub work: u64,
}

impl SimplicialRefinement {
    /// Positivity, independence and exact reconstruction.
    pub fn verify(&self, inputs: &[Scalar]) -> Result<bool> {
        for b in &self.basis {
            if !b.is_positive()? {
                return Ok(false);
            }
        }
        if !is_independent(&self.basis) || self.expansion.len() != inputs.len() {
            return Ok(false);
        }
        for (s, row) in inputs.iter().zip(&self.expansion) {
            if row.len() != self.basis.len() {
                return Ok(false);
            }
            let mut acc = Scalar::zero(s.table());
            for (m, b) in row.iter().zip(&self.basis) {
                acc = &acc + &b.scale(&BigRational::from_integer(BigInt::from(*m)));
            }
            if acc != *s {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn to_u64_rows(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<u64>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|m| {
                    m.to_u64()
                        .ok_or_else(|| Error::pre("expansion coefficient does not fit in 64 bits"))
                })
                .collect()
        })
        .collect()
}

pub fn simplicial_refine(inputs: &[Scalar]) -> Result<SimplicialRefinement> {
    simplicial_refine_with_budget(inputs, DEFAULT_SEARCH_BUDGET)
}

pub fn simplicial_refine_with_budget(
    inputs: &[Scalar],
    budget: u64,
) -> Result<SimplicialRefinement> {
    if inputs.is_empty() {
        return Ok(SimplicialRefinement {
            basis: Vec::new(),
            expansion: Vec::new(),
            tier: Tier::Independent,
            work: 0,
        });
    }
    let table = inputs[0].table().clone();
    for s in inputs {
        if !s.is_positive()? {
            return Err(Error::pre(format!("length {s} is not positive")));
        }
    }
    if is_independent(inputs) {
        let k = inputs.len();
        let expansion = (0..k)
            .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
            .collect();
        return Ok(SimplicialRefinement {
            basis: inputs.to_vec(),
            expansion,
            tier: Tier::Independent,
            work: 0,
        });
    }

    // Greedy independent subset in input order.
    let mut echelon = Echelon::new();
    let mut subset = Vec::new();
    for s in inputs {
        if echelon.insert(coeff_vector(s)) {
            subset.push(s.clone());
        }
    }
    let coords: Vec<Vec<BigRational>> = inputs
        .iter()
        .map(|s| express(s, &subset).expect("input lies in the span of the subset"))
        .collect();
    if coords
        .iter()
        .all(|row| row.iter().all(|c| c.is_integer() && !c.is_negative()))
    {
        let rows: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|r| r.iter().map(|c| c.to_integer()).collect())
            .collect();
        return Ok(SimplicialRefinement {
            basis: subset,
            expansion: to_u64_rows(&rows)?,
            tier: Tier::Subset,
            work: 0,
        });
    }

    if subset.len() == 1 {
        let mut g = coords[0][0].clone();
        for row in &coords[1..] {
            g = rational_gcd(&g, &row[0]);
        }
        let rows: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|r| vec![(&r[0] / &g).to_integer()])
            .collect();
        return Ok(SimplicialRefinement {
            basis: vec![subset[0].scale(&g)],
            expansion: to_u64_rows(&rows)?,
            tier: Tier::Gcd,
            work: 0,
        });
    }

    // Integer coordinates relative to subset / denom.
    let mut denom = BigInt::one();
    for row in &coords {
        for c in row {
            denom = denom.lcm(c.denom());
        }
    }
    let int_rows: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let lattice = hermite_basis(&int_rows, subset.len());
    let unit = BigRational::new(BigInt::one(), denom);
    let mut basis: Vec<Scalar> = lattice
        .iter()
        .map(|row| combine(&table, row, &subset).scale(&unit))
        .collect();
    let mut input_coords: Vec<Vec<BigInt>> = int_rows
        .iter()
        .map(|r| solve_integer(&lattice, r).expect("inputs generate the lattice"))
        .collect();
    for (j, b) in basis.iter_mut().enumerate() {
        if !b.is_positive()? {
            *b = -&*b;
            for row in input_coords.iter_mut() {
                row[j] = -&row[j];
            }
        }
    }

    let mut work = 0u64;
    let k = basis.len();
    let step_cap = if k == 2 {
        budget.max(HEURISTIC_STEPS)
    } else {
        HEURISTIC_STEPS.min(budget)
    };
    loop {
        if input_coords
            .iter()
            .all(|r| r.iter().all(|m| !m.is_negative()))
        {
            return finish(inputs, basis, input_coords, Tier::Subtractive, work);
        }
        if work >= step_cap {
            break;
        }
        work += 1;
        // Brun step: largest minus second largest (Euclid when k = 2).
        let mut order: Vec<usize> = (0..k).collect();
        try_sort_by(&mut order, |&a, &b| basis[b].cmp_value(&basis[a]))?;
        let (big, second) = (order[0], order[1]);
        basis[big] = &basis[big] - &basis[second];
        for row in input_coords.iter_mut() {
            let m = row[big].clone();
            row[second] += m;
        }
    }
    if k == 2 {
        return Err(Error::SearchBudgetExceeded {
            budget,
            inputs: inputs.len(),
        });
    }
    search(
        inputs, &table, &subset, &lattice, &unit, &int_rows, budget, work,
    )
}

fn finish(
    inputs: &[Scalar],
    basis: Vec<Scalar>,
    coords: Vec<Vec<BigInt>>,
    tier: Tier,
    work: u64,
) -> Result<SimplicialRefinement> {
    let k = basis.len();
    let mut order: Vec<usize> = (0..k).collect();
    try_sort_by(&mut order, |&a, &b| basis[a].cmp_value(&basis[b]))?;
    let basis: Vec<Scalar> = order.iter().map(|&j| basis[j].clone()).collect();
    let rows: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|r| order.iter().map(|&j| r[j].clone()).collect())
        .collect();
    let out = SimplicialRefinement {
        basis,
        expansion: to_u64_rows(&rows)?,
        tier,
        work,
    };
    debug_assert!(out.verify(inputs).unwrap_or(true));
    Ok(out)
}

/// Exhaustive search over small integer combinations of a lattice basis.
#[allow(clippy::too_many_arguments)]
fn search(
    inputs: &[Scalar],
    table: &Arc<SymbolTable>,
    subset: &[Scalar],
    lattice: &[Vec<BigInt>],
    unit: &BigRational,
    int_rows: &[Vec<BigInt>],
    budget: u64,
    mut work: u64,
) -> Result<SimplicialRefinement> {
    let k = lattice.len();
    let lattice_basis: Vec<Scalar> = lattice
        .iter()
        .map(|row| combine(table, row, subset).scale(unit))
        .collect();
    let coords: Vec<Vec<BigInt>> = int_rows
        .iter()
        .map(|r| solve_integer(lattice, r).expect("inputs generate the lattice"))
        .collect();
    let mut bound = 1i64;
    loop {
        let mut candidates: Vec<(Vec<i64>, Scalar)> = Vec::new();
        for w in box_vectors(k, bound) {
            let s = combine_i64(table, &w, &lattice_basis);
            if s.is_positive()? {
                candidates.push((w, s));
            }
        }
        let n = candidates.len();
        let mut pick: Vec<usize> = (0..k).collect();
        if n >= k {
            loop {
                work += 1;
                if work > budget {
                    return Err(Error::SearchBudgetExceeded {
                        budget,
                        inputs: inputs.len(),
                    });
                }
                let w: Vec<Vec<BigRational>> = pick
                    .iter()
                    .map(|&i| {
                        candidates[i]
                            .0
                            .iter()
                            .map(|&x| BigRational::from_integer(x.into()))
                            .collect()
                    })
                    .collect();
                if let Some(inv) = invert(&w) {
                    let mut ok = true;
                    let mut rows = Vec::with_capacity(coords.len());
                    for c in &coords {
                        let mut row = Vec::with_capacity(k);
                        for col in 0..k {
                            let mut v = BigRational::zero();
                            for (j, cj) in c.iter().enumerate() {
                                v += BigRational::from_integer(cj.clone()) * &inv[j][col];
                            }
                            if !v.is_integer() || v.is_negative() {
                                ok = false;
                                break;
                            }
                            row.push(v.to_integer());
                        }
                        if !ok {
                            break;
                        }
                        rows.push(row);
                    }
                    if ok {
                        let basis = pick.iter().map(|&i| candidates[i].1.clone()).collect();
                        return finish(inputs, basis, rows, Tier::Search, work);
                    }
                }
                if !next_combination(&mut pick, n) {
                    break;
                }
            }
        }
        bound += 1;
    }
}

fn box_vectors(k: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
        for v in &out {
            for x in -bound..=bound {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
    out
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let k = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..k {
        let p = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pr = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pr) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[k..].to_vec()).collect())
}

fn combine(table: &Arc<SymbolTable>, coeffs: &[BigInt], basis: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero(table);
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            acc = &acc + &b.scale(&BigRational::from_integer(c.clone()));
        }
    }
    acc
}

fn combine_i64(table: &Arc<SymbolTable>, coeffs: &[i64], basis: &[Scalar]) -> Scalar {
    let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    combine(table, &big, basis)
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Row-style Hermite reduction: `k` rows spanning the same lattice as `rows`.
fn hermite_basis(rows: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut r = 0;
    for col in 0..k {
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if !m[i][col].is_zero() && best.map_or(true, |b| m[i][col].abs() < m[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let b = match best {
                None => break,
                Some(b) => b,
            };
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][col].is_zero() {
                    let f = m[i][col].div_floor(&m[r][col]);
                    let pr = m[r].clone();
                    for (x, p) in m[i].iter_mut().zip(&pr) {
                        *x -= &f * p;
                    }
                    if !m[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][col].is_zero() {
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Integer coordinates of `v` in the nonsingular lattice basis `rows`.
fn solve_integer(rows: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = rows.len();
    let m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let inv = invert(&m)?;
    let mut out = Vec::with_capacity(k);
    for col in 0..k {
        let mut acc = BigRational::zero();
        for (j, vj) in v.iter().enumerate() {
            acc += BigRational::from_integer(vj.clone()) * &inv[j][col];
        }
        if !acc.is_integer() {
            return None;
        }
        out.push(acc.to_integer());
    }
    Some(out)
}

/// Refines every axis so its set of interval lengths becomes Q-free.
pub fn refine_grid_qfree(grid: &GridPattern) -> Result<GridPattern> {
    refine_grid_qfree_with_budget(grid, DEFAULT_SEARCH_BUDGET)
}

pub fn refine_grid_qfree_with_budget(grid: &GridPattern, budget: u64) -> Result<GridPattern> {
    let table = grid.table();
    let mut lengths = Vec::with_capacity(grid.dim());
    for axis in 0..grid.dim() {
        let ls = grid.lengths(axis);
        let mut distinct: Vec<Scalar> = Vec::new();
        for l in &ls {
            if !distinct.contains(l) {
                distinct.push(l.clone());
            }
        }
        let refinement = simplicial_refine_with_budget(&distinct, budget)?;
        let mut out = Vec::new();
        for l in &ls {
            let row = &refinement.expansion[distinct.iter().position(|d| d == l).expect("listed")];
            for (m, b) in row.iter().zip(&refinement.basis) {
                for _ in 0..*m {
                    out.push(b.clone());
                }
            }
        }
        lengths.push(out);
    }
    GridPattern::from_lengths(table, &lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn t() -> Arc<SymbolTable> {
        SymbolTable::quadratic(&[2, 3]).unwrap()
    }

    fn sqrt2(t: &Arc<SymbolTable>) -> Scalar {
        Scalar::symbol(t, "sqrt2", q(1, 1)).unwrap()
    }

    #[test]
    fn rational_inputs_reduce_to_gcd() {
        let t = t();
        let r = simplicial_refine(&[Scalar::integer(&t, 3), Scalar::integer(&t, 5)]).unwrap();
        assert_eq!(r.basis, vec![Scalar::one(&t)]);
        assert_eq!(r.expansion, vec![vec![3], vec![5]]);
    }

    #[test]
    fn inputs_containing_a_basis() {
        let t = t();
        let one = Scalar::one(&t);
        let s = sqrt2(&t);
        let inputs = [one.clone(), s.clone(), &one + &s];
        let r = simplicial_refine(&inputs).unwrap();
        assert_eq!(r.basis, vec![one, s]);
        assert_eq!(r.expansion, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn subtractive_reduction_of_silver_ratio_set() {
        let t = t();
        let one = Scalar::one(&t);
        let a = &sqrt2(&t) - &one;
        let b = &Scalar::integer(&t, 2) - &sqrt2(&t);
        let inputs = [one, a.clone(), b.clone()];
        let r = simplicial_refine(&inputs).unwrap();
        assert!(r.verify(&inputs).unwrap());
        assert_eq!(r.basis, vec![a, b]);
        assert_eq!(r.expansion, vec![vec![1, 1], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn rank_three_inputs() {
        let t = t();
        let one = Scalar::one(&t);
        let r2 = sqrt2(&t);
        let r3 = Scalar::symbol(&t, "sqrt3", q(1, 1)).unwrap();
        let inputs = [
            one.clone(),
            &r2 - &one,
            &r3 - &one,
            &(&r3 - &r2) + &Scalar::ratio(&t, 1, 2),
            &Scalar::integer(&t, 2) - &r2,
        ];
        let r = simplicial_refine(&inputs).unwrap();
        assert!(r.verify(&inputs).unwrap());
        assert_eq!(r.basis.len(), 3);
    }

    #[test]
    fn qfree_grids() {
        let t = t();
        let a = Scalar::symbol(&t, "sqrt2", q(1, 2)).unwrap();
        let b = Scalar::symbol(&t, "sqrt3", q(1, 3)).unwrap();
        let g = GridPattern::new(
            &t,
            vec![vec![Scalar::zero(&t), a], vec![Scalar::zero(&t), b]],
        )
        .unwrap();
        assert!(is_setwise_qfree(&g.to_partition()));
        let halves =
            GridPattern::new(&t, vec![vec![Scalar::zero(&t), Scalar::ratio(&t, 1, 2)]]).unwrap();
        assert!(is_grid_qfree(&halves));
        let quarters =
            GridPattern::new(&t, vec![vec![Scalar::zero(&t), Scalar::ratio(&t, 1, 4)]]).unwrap();
        assert!(!is_grid_qfree(&quarters));
        let refined = refine_grid_qfree(&quarters).unwrap();
        assert_eq!(refined.shape(), vec![4]);
        assert!(is_grid_qfree(&refined));
        assert_eq!(refine_grid_qfree(&g).unwrap(), g);
    }

    #[test]
    fn sum_lengths_split_into_parts() {
        let t = t();
        let a = Scalar::symbol(&t, "sqrt2", q(1, 4)).unwrap();
        let b = &Scalar::ratio(&t, 1, 2) - &a;
        let cuts = vec![Scalar::zero(&t), a.clone(), &a + &b];
        let g = GridPattern::new(&t, vec![cuts]).unwrap();
        // lengths a, b, a + b
        let refined = refine_grid_qfree(&g).unwrap();
        assert!(is_grid_qfree(&refined));
        assert_eq!(refined.shape(), vec![4]);
        assert!(refined.lengths(0).iter().all(|l| *l == a || *l == b));
    }

    #[test]
    fn express_recovers_coordinates() {
        let t = t();
        let one = Scalar::one(&t);
        let s = sqrt2(&t);
        let target = &one.scale_int(3) - &s.scale(&q(1, 2));
        assert_eq!(
            express(&target, &[one, s]).unwrap(),
            vec![q(3, 1), q(-1, 2)]
        );
    }

    #[test]
    fn non_positive_inputs_are_rejected() {
        let t = t();
        assert!(simplicial_refine(&[Scalar::zero(&t)]).is_err());
    }
}
