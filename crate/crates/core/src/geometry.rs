//! Half-open axis-aligned boxes and the set algebra built on them.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{add_vec, lex_cmp, sorted_distinct, try_sort_by, Scalar, SymbolTable};

/// The box `[lo_0, hi_0) x ... x [lo_{d-1}, hi_{d-1})`.
///
/// Dimension zero is allowed and denotes a single point; it shows up as
/// the base of one-dimensional shuffles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    lo: Vec<Scalar>,
    hi: Vec<Scalar>,
}

impl Rect {
    pub fn new(lo: Vec<Scalar>, hi: Vec<Scalar>) -> Result<Rect> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if !l.lt(h)? {
                return Err(Error::pre(format!(
                    "degenerate side on axis {i}: [{l}, {h})"
                )));
            }
        }
        Ok(Rect { lo, hi })
    }

    pub(crate) fn new_unchecked(lo: Vec<Scalar>, hi: Vec<Scalar>) -> Rect {
        debug_assert_eq!(lo.len(), hi.len());
        Rect { lo, hi }
    }

    pub fn point() -> Rect {
        Rect {
            lo: Vec::new(),
            hi: Vec::new(),
        }
    }

    pub fn unit_cube(table: &Arc<SymbolTable>, dim: usize) -> Rect {
        Rect {
            lo: vec![Scalar::zero(table); dim],
            hi: vec![Scalar::one(table); dim],
        }
    }

    /// `[0, s_0) x ... x [0, s_{d-1})`.
    pub fn from_sides(sides: &[Scalar]) -> Result<Rect> {
        let lo = sides.iter().map(|s| Scalar::zero(s.table())).collect();
        Rect::new(lo, sides.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Scalar] {
        &self.lo
    }

    pub fn hi(&self) -> &[Scalar] {
        &self.hi
    }

    pub fn side(&self, axis: usize) -> Scalar {
        &self.hi[axis] - &self.lo[axis]
    }

    pub fn sides(&self) -> Vec<Scalar> {
        (0..self.dim()).map(|i| self.side(i)).collect()
    }

    pub fn table(&self) -> Option<&Arc<SymbolTable>> {
        self.lo.first().map(Scalar::table)
    }

    fn check_dim(&self, other: &Rect) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Rect) -> Result<Option<Rect>> {
        self.check_dim(other)?;
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let l = self.lo[i].max_value(&other.lo[i])?;
            let h = self.hi[i].min_value(&other.hi[i])?;
            if !l.lt(&h)? {
                return Ok(None);
            }
            lo.push(l);
            hi.push(h);
        }
        Ok(Some(Rect { lo, hi }))
    }

    pub fn intersects(&self, other: &Rect) -> Result<bool> {
        self.check_dim(other)?;
        for i in 0..self.dim() {
            if !self.lo[i].lt(&other.hi[i])? || !other.lo[i].lt(&self.hi[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_rect(&self, other: &Rect) -> Result<bool> {
        self.check_dim(other)?;
        for i in 0..self.dim() {
            if !self.lo[i].le(&other.lo[i])? || !other.hi[i].le(&self.hi[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_point(&self, x: &[Scalar]) -> Result<bool> {
        for i in 0..self.dim() {
            if !self.lo[i].le(&x[i])? || !x[i].lt(&self.hi[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn translate(&self, v: &[Scalar]) -> Rect {
        Rect {
            lo: add_vec(&self.lo, v),
            hi: add_vec(&self.hi, v),
        }
    }

    /// Exact equality of all side lengths.
    pub fn same_shape(&self, other: &Rect) -> bool {
        self.dim() == other.dim() && (0..self.dim()).all(|i| self.side(i) == other.side(i))
    }

    /// Replaces the extent along one axis.
    pub fn with_axis(&self, axis: usize, lo: Scalar, hi: Scalar) -> Rect {
        let mut r = self.clone();
        r.lo[axis] = lo;
        r.hi[axis] = hi;
        r
    }

    /// Drops one axis.
    pub fn project_out(&self, axis: usize) -> Rect {
        let mut r = self.clone();
        r.lo.remove(axis);
        r.hi.remove(axis);
        r
    }

    /// Inserts `[lo, hi)` as a new axis at position `axis`.
    pub fn insert_axis(&self, axis: usize, lo: Scalar, hi: Scalar) -> Rect {
        let mut r = self.clone();
        r.lo.insert(axis, lo);
        r.hi.insert(axis, hi);
        r
    }

    /// Cuts at `at` along `axis`; either half may be empty.
    pub fn split(&self, axis: usize, at: &Scalar) -> Result<(Option<Rect>, Option<Rect>)> {
        if !self.lo[axis].lt(at)? {
            return Ok((None, Some(self.clone())));
        }
        if !at.lt(&self.hi[axis])? {
            return Ok((Some(self.clone()), None));
        }
        Ok((
            Some(self.with_axis(axis, self.lo[axis].clone(), at.clone())),
            Some(self.with_axis(axis, at.clone(), self.hi[axis].clone())),
        ))
    }

    /// `self \ other` as disjoint boxes, cutting along axis 0 first, lower
    /// slab before upper slab.
    pub fn subtract(&self, other: &Rect) -> Result<Vec<Rect>> {
        let inter = match self.intersect(other)? {
            None => return Ok(vec![self.clone()]),
            Some(r) => r,
        };
        let mut out = Vec::new();
        let mut cur = self.clone();
        for axis in 0..self.dim() {
            if cur.lo[axis] != inter.lo[axis] {
                out.push(cur.with_axis(axis, cur.lo[axis].clone(), inter.lo[axis].clone()));
                cur.lo[axis] = inter.lo[axis].clone();
            }
            if cur.hi[axis] != inter.hi[axis] {
                out.push(cur.with_axis(axis, inter.hi[axis].clone(), cur.hi[axis].clone()));
                cur.hi[axis] = inter.hi[axis].clone();
            }
        }
        Ok(out)
    }

    /// Lexicographic order of lower corners by value.
    pub fn cmp_lower(&self, other: &Rect) -> Result<Ordering> {
        lex_cmp(&self.lo, &other.lo)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lo": self.lo.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "hi": self.hi.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        value: &serde_json::Value,
        location: &str,
    ) -> Result<Rect> {
        let read = |key: &str| -> Result<Vec<Scalar>> {
            let arr = value.get(key).and_then(|v| v.as_array()).ok_or_else(|| {
                Error::parse(location, format!("rectangle needs a `{key}` array"))
            })?;
            arr.iter()
                .enumerate()
                .map(|(i, s)| Scalar::from_json(table, s, &format!("{location}.{key}[{i}]")))
                .collect()
        };
        let lo = read("lo")?;
        let hi = read("hi")?;
        Rect::new(lo, hi).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::parse(location, other.to_string()),
        })
    }
}

/// A finite union of pairwise disjoint boxes. The empty union is allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multirect {
    dim: usize,
    pieces: Vec<Rect>,
}

impl Multirect {
    pub fn new(dim: usize, pieces: Vec<Rect>) -> Result<Multirect> {
        for p in &pieces {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i].intersects(&pieces[j])? {
                    return Err(Error::pre(format!("pieces {i} and {j} overlap")));
                }
            }
        }
        Ok(Multirect { dim, pieces })
    }

    pub(crate) fn from_disjoint(dim: usize, pieces: Vec<Rect>) -> Multirect {
        Multirect { dim, pieces }
    }

    pub fn empty(dim: usize) -> Multirect {
        Multirect {
            dim,
            pieces: Vec::new(),
        }
    }

    pub fn single(rect: Rect) -> Multirect {
        Multirect {
            dim: rect.dim(),
            pieces: vec![rect],
        }
    }

    pub fn unit_cube(table: &Arc<SymbolTable>, dim: usize) -> Multirect {
        Multirect::single(Rect::unit_cube(table, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Rect] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<Rect> {
        self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    fn check_dim(&self, other: &Multirect) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn subtract(&self, other: &Multirect) -> Result<Multirect> {
        self.check_dim(other)?;
        let mut current = self.pieces.clone();
        for cut in &other.pieces {
            let mut next = Vec::with_capacity(current.len());
            for p in &current {
                next.extend(p.subtract(cut)?);
            }
            current = next;
            if current.is_empty() {
                break;
            }
        }
        Ok(Multirect::from_disjoint(self.dim, current))
    }

    pub fn subtract_rect(&self, cut: &Rect) -> Result<Multirect> {
        self.subtract(&Multirect::single(cut.clone()))
    }

    pub fn intersect(&self, other: &Multirect) -> Result<Multirect> {
        self.check_dim(other)?;
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                if let Some(r) = a.intersect(b)? {
                    out.push(r);
                }
            }
        }
        Ok(Multirect::from_disjoint(self.dim, out))
    }

    pub fn intersect_rect(&self, r: &Rect) -> Result<Multirect> {
        self.intersect(&Multirect::single(r.clone()))
    }

    /// Union; pieces of `other` are cut to avoid `self`.
    pub fn union(&self, other: &Multirect) -> Result<Multirect> {
        let extra = other.subtract(self)?;
        let mut pieces = self.pieces.clone();
        pieces.extend(extra.pieces);
        Ok(Multirect::from_disjoint(self.dim, pieces))
    }

    /// Union of sets already known to be disjoint.
    pub fn disjoint_union(&self, other: &Multirect) -> Multirect {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Multirect::from_disjoint(self.dim, pieces)
    }

    pub fn contains(&self, other: &Multirect) -> Result<bool> {
        Ok(other.subtract(self)?.is_empty())
    }

    pub fn set_eq(&self, other: &Multirect) -> Result<bool> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    pub fn is_disjoint_from(&self, other: &Multirect) -> Result<bool> {
        self.check_dim(other)?;
        for a in &self.pieces {
            for b in &other.pieces {
                if a.intersects(b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn translate(&self, v: &[Scalar]) -> Multirect {
        Multirect::from_disjoint(
            self.dim,
            self.pieces.iter().map(|p| p.translate(v)).collect(),
        )
    }

    pub fn bbox(&self) -> Result<Option<Rect>> {
        let mut it = self.pieces.iter();
        let first = match it.next() {
            None => return Ok(None),
            Some(r) => r.clone(),
        };
        let mut lo = first.lo;
        let mut hi = first.hi;
        for p in it {
            for i in 0..self.dim {
                lo[i] = lo[i].min_value(&p.lo[i])?;
                hi[i] = hi[i].max_value(&p.hi[i])?;
            }
        }
        Ok(Some(Rect::new_unchecked(lo, hi)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.pieces.iter().map(Rect::to_json).collect())
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        dim: usize,
        value: &serde_json::Value,
        location: &str,
    ) -> Result<Multirect> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::parse(location, "expected a list of rectangles"))?;
        let pieces = arr
            .iter()
            .enumerate()
            .map(|(i, r)| Rect::from_json(table, r, &format!("{location}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Multirect::new(dim, pieces).map_err(|e| Error::parse(location, e.to_string()))
    }
}

/// A finite list of disjoint boxes whose union is `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectPartition {
    target: Multirect,
    cells: Vec<Rect>,
}

impl RectPartition {
    pub fn new(target: Multirect, cells: Vec<Rect>) -> Result<RectPartition> {
        let union = Multirect::new(target.dim(), cells)
            .map_err(|e| Error::pre(format!("cells are not disjoint: {e}")))?;
        if !target.contains(&union)? {
            return Err(Error::pre("cells leave the target"));
        }
        if !union.contains(&target)? {
            return Err(Error::pre("cells do not cover the target"));
        }
        Ok(RectPartition {
            target,
            cells: union.pieces,
        })
    }

    pub(crate) fn new_unchecked(target: Multirect, cells: Vec<Rect>) -> RectPartition {
        RectPartition { target, cells }
    }

    pub fn target(&self) -> &Multirect {
        &self.target
    }

    pub fn cells(&self) -> &[Rect] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    /// All nonempty pairwise intersections.
    pub fn common_refinement(&self, other: &RectPartition) -> Result<RectPartition> {
        if !self.target.set_eq(&other.target)? {
            return Err(Error::AmbientMismatch);
        }
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                if let Some(r) = a.intersect(b)? {
                    cells.push(r);
                }
            }
        }
        Ok(RectPartition::new_unchecked(self.target.clone(), cells))
    }

    /// Every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &RectPartition) -> Result<bool> {
        for c in &self.cells {
            let mut inside = false;
            for k in &coarser.cells {
                if k.contains_rect(c)? {
                    inside = true;
                    break;
                }
            }
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Product partition of the unit cube given by cut points on each axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPattern {
    table: Arc<SymbolTable>,
    axes: Vec<Vec<Scalar>>,
}

impl GridPattern {
    pub fn new(table: &Arc<SymbolTable>, axes: Vec<Vec<Scalar>>) -> Result<GridPattern> {
        let one = Scalar::one(table);
        for (i, cuts) in axes.iter().enumerate() {
            if cuts.first().map_or(true, |c| !c.is_zero()) {
                return Err(Error::pre(format!("axis {i} cuts must start at 0")));
            }
            for w in cuts.windows(2) {
                if !w[0].lt(&w[1])? {
                    return Err(Error::pre(format!(
                        "axis {i} cuts are not strictly increasing"
                    )));
                }
            }
            if !cuts.last().expect("nonempty").lt(&one)? {
                return Err(Error::pre(format!("axis {i} cuts must stay below 1")));
            }
        }
        Ok(GridPattern {
            table: table.clone(),
            axes,
        })
    }

    pub fn trivial(table: &Arc<SymbolTable>, dim: usize) -> GridPattern {
        GridPattern {
            table: table.clone(),
            axes: vec![vec![Scalar::zero(table)]; dim],
        }
    }

    /// Grid whose intervals on each axis have the given lengths in order.
    pub fn from_lengths(table: &Arc<SymbolTable>, lengths: &[Vec<Scalar>]) -> Result<GridPattern> {
        let one = Scalar::one(table);
        let mut axes = Vec::with_capacity(lengths.len());
        for (i, ls) in lengths.iter().enumerate() {
            let mut cuts = vec![Scalar::zero(table)];
            let mut acc = Scalar::zero(table);
            for l in ls {
                acc = &acc + l;
                cuts.push(acc.clone());
            }
            if cuts.pop() != Some(one.clone()) {
                return Err(Error::pre(format!("axis {i} lengths do not sum to 1")));
            }
            axes.push(cuts);
        }
        GridPattern::new(table, axes)
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<Scalar>] {
        &self.axes
    }

    pub fn cuts(&self, axis: usize) -> &[Scalar] {
        &self.axes[axis]
    }

    pub fn intervals(&self, axis: usize) -> Vec<(Scalar, Scalar)> {
        let cuts = &self.axes[axis];
        let one = Scalar::one(&self.table);
        (0..cuts.len())
            .map(|k| {
                (
                    cuts[k].clone(),
                    cuts.get(k + 1).cloned().unwrap_or_else(|| one.clone()),
                )
            })
            .collect()
    }

    pub fn lengths(&self, axis: usize) -> Vec<Scalar> {
        self.intervals(axis)
            .into_iter()
            .map(|(a, b)| &b - &a)
            .collect()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    /// Cells in row-major order, axis 0 most significant.
    pub fn cells(&self) -> Vec<Rect> {
        let intervals: Vec<_> = (0..self.dim()).map(|i| self.intervals(i)).collect();
        let shape = self.shape();
        (0..self.cell_count())
            .map(|flat| {
                let idx = unflatten(flat, &shape);
                let lo = idx
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| intervals[i][k].0.clone())
                    .collect();
                let hi = idx
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| intervals[i][k].1.clone())
                    .collect();
                Rect::new_unchecked(lo, hi)
            })
            .collect()
    }

    pub fn to_partition(&self) -> RectPartition {
        RectPartition::new_unchecked(Multirect::unit_cube(&self.table, self.dim()), self.cells())
    }

    /// Coarsest grid refining a partition of the unit cube: per axis, all
    /// cell endpoints.
    pub fn refining(partition: &RectPartition) -> Result<GridPattern> {
        let dim = partition.dim();
        let table = partition
            .cells()
            .first()
            .and_then(|c| c.table())
            .ok_or_else(|| Error::pre("partition of a zero-dimensional or empty target"))?
            .clone();
        if !partition
            .target()
            .set_eq(&Multirect::unit_cube(&table, dim))?
        {
            return Err(Error::pre("target is not the unit cube"));
        }
        let one = Scalar::one(&table);
        let mut axes = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut pts: Vec<Scalar> = Vec::new();
            for c in partition.cells() {
                pts.push(c.lo()[i].clone());
                pts.push(c.hi()[i].clone());
            }
            let mut pts = sorted_distinct(pts)?;
            pts.retain(|p| *p != one);
            axes.push(pts);
        }
        GridPattern::new(&table, axes)
    }

    /// Coarsest grid refining both.
    pub fn join(&self, other: &GridPattern) -> Result<GridPattern> {
        let mut axes = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let mut pts = self.axes[i].clone();
            pts.extend(other.axes[i].iter().cloned());
            axes.push(sorted_distinct(pts)?);
        }
        Ok(GridPattern {
            table: self.table.clone(),
            axes,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.axes
                .iter()
                .map(|cuts| serde_json::Value::Array(cuts.iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        value: &serde_json::Value,
        location: &str,
    ) -> Result<GridPattern> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::parse(location, "grid needs one cut list per axis"))?;
        let mut axes = Vec::with_capacity(arr.len());
        for (i, cuts) in arr.iter().enumerate() {
            let list = cuts.as_array().ok_or_else(|| {
                Error::parse(format!("{location}[{i}]"), "cut list must be an array")
            })?;
            axes.push(
                list.iter()
                    .enumerate()
                    .map(|(k, s)| Scalar::from_json(table, s, &format!("{location}[{i}][{k}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        GridPattern::new(table, axes).map_err(|e| Error::parse(location, e.to_string()))
    }
}

pub(crate) fn unflatten(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for i in (0..shape.len()).rev() {
        idx[i] = flat % shape[i];
        flat /= shape[i];
    }
    idx
}

/// Sorts boxes by lower corner, lexicographically by value.
pub fn sort_by_lower(rects: &mut [Rect]) -> Result<()> {
    try_sort_by(rects, |a, b| a.cmp_lower(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn t() -> Arc<SymbolTable> {
        SymbolTable::quadratic(&[2, 3]).unwrap()
    }

    fn r(t: &Arc<SymbolTable>, lo: &[(i64, i64)], hi: &[(i64, i64)]) -> Rect {
        Rect::new(
            lo.iter().map(|&(n, d)| Scalar::ratio(t, n, d)).collect(),
            hi.iter().map(|&(n, d)| Scalar::ratio(t, n, d)).collect(),
        )
        .unwrap()
    }

    fn area(rects: &[Rect]) -> num_rational::BigRational {
        rects
            .iter()
            .map(|x| {
                x.sides()
                    .iter()
                    .map(|s| s.as_rational().unwrap())
                    .fold(q(1, 1), |a, b| a * b)
            })
            .fold(q(0, 1), |a, b| a + b)
    }

    #[test]
    fn intersection_is_componentwise() {
        let t = t();
        let a = r(&t, &[(0, 1), (0, 1)], &[(1, 1), (1, 1)]);
        let b = r(&t, &[(1, 2), (1, 2)], &[(3, 2), (3, 2)]);
        assert_eq!(
            a.intersect(&b).unwrap().unwrap(),
            r(&t, &[(1, 2), (1, 2)], &[(1, 1), (1, 1)])
        );
        assert_eq!(a.intersect(&a).unwrap().unwrap(), a);
        let left = r(&t, &[(0, 1)], &[(1, 2)]);
        let right = r(&t, &[(1, 2)], &[(1, 1)]);
        assert!(left.intersect(&right).unwrap().is_none());
    }

    #[test]
    fn subtraction_keeps_area() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let quarter = Multirect::single(r(&t, &[(0, 1), (0, 1)], &[(1, 2), (1, 2)]));
        let diff = cube.subtract(&quarter).unwrap();
        assert_eq!(area(diff.pieces()), q(3, 4));
        assert!(diff.pieces().len() <= 3);
        assert!(Multirect::new(2, diff.pieces().to_vec()).is_ok());
        assert!(diff.is_disjoint_from(&quarter).unwrap());
        assert!(cube.subtract(&cube).unwrap().is_empty());
        assert_eq!(cube.subtract(&Multirect::empty(2)).unwrap(), cube);
    }

    #[test]
    fn transverse_halves_refine_to_quadrants() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let v = RectPartition::new(
            cube.clone(),
            vec![
                r(&t, &[(0, 1), (0, 1)], &[(1, 2), (1, 1)]),
                r(&t, &[(1, 2), (0, 1)], &[(1, 1), (1, 1)]),
            ],
        )
        .unwrap();
        let h = RectPartition::new(
            cube,
            vec![
                r(&t, &[(0, 1), (0, 1)], &[(1, 1), (1, 2)]),
                r(&t, &[(0, 1), (1, 2)], &[(1, 1), (1, 1)]),
            ],
        )
        .unwrap();
        let both = v.common_refinement(&h).unwrap();
        assert_eq!(both.cells().len(), 4);
        assert!(both.refines(&v).unwrap() && both.refines(&h).unwrap());
        assert_eq!(v.common_refinement(&v).unwrap().cells().len(), 2);
    }

    #[test]
    fn grid_refinement_of_l_shape() {
        let t = t();
        let p = RectPartition::new(
            Multirect::unit_cube(&t, 2),
            vec![
                r(&t, &[(0, 1), (0, 1)], &[(1, 2), (1, 1)]),
                r(&t, &[(1, 2), (0, 1)], &[(1, 1), (1, 2)]),
                r(&t, &[(1, 2), (1, 2)], &[(1, 1), (1, 1)]),
            ],
        )
        .unwrap();
        let g = GridPattern::refining(&p).unwrap();
        assert_eq!(g.shape(), vec![2, 2]);
        assert!(g.to_partition().refines(&p).unwrap());
        let again = GridPattern::refining(&g.to_partition()).unwrap();
        assert_eq!(again, g);
        let single =
            RectPartition::new(Multirect::unit_cube(&t, 2), vec![Rect::unit_cube(&t, 2)]).unwrap();
        assert_eq!(
            GridPattern::refining(&single).unwrap(),
            GridPattern::trivial(&t, 2)
        );
    }

    #[test]
    fn overlapping_cells_are_rejected() {
        let t = t();
        let cells = vec![r(&t, &[(0, 1)], &[(2, 3)]), r(&t, &[(1, 3)], &[(1, 1)])];
        assert!(RectPartition::new(Multirect::unit_cube(&t, 1), cells).is_err());
        let gap = vec![r(&t, &[(0, 1)], &[(1, 3)]), r(&t, &[(2, 3)], &[(1, 1)])];
        assert!(RectPartition::new(Multirect::unit_cube(&t, 1), gap).is_err());
    }

    #[test]
    fn irrational_cuts_sort_by_value() {
        let t = t();
        let r2 = Scalar::symbol(&t, "sqrt2", q(1, 2)).unwrap();
        let r3 = Scalar::symbol(&t, "sqrt3", q(1, 3)).unwrap();
        let g = GridPattern::new(&t, vec![vec![Scalar::zero(&t), r3.clone(), r2.clone()]]).unwrap();
        assert_eq!(g.lengths(0).len(), 3);
        assert!(GridPattern::new(&t, vec![vec![Scalar::zero(&t), r2, r3]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = t();
        let a = r(&t, &[(0, 1), (1, 4)], &[(1, 2), (1, 1)]);
        let back = Rect::from_json(&t, &a.to_json(), "r").unwrap();
        assert_eq!(a, back);
    }
}
