//! Constructive factorizations into restricted shuffles and transpositions.
//!
//! Factor lists are in written order: `[s_1, s_2, ..., s_m]` stands for
//! `s_1 ∘ s_2 ∘ ... ∘ s_m`, so the last factor acts first.
//!
//! The general algorithm works on a setwise Q-free partition of the unit
//! cube, with the last axis as the vertical one. Cells meeting the floor
//! form the ground; stacking cells with the same footprint gives towers;
//! the highest towers form the city and everything else is the sky. The
//! complexity is the set of floor heights of sky cells. Each round moves
//! city towers sideways below the lowest such height (the working height)
//! so that the sky cells resting there join a tower, which removes that
//! height from the complexity. With an empty complexity every tower is
//! sorted vertically, which yields a grid; a grid-to-grid map is then
//! factored axis by axis.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{sort_by_lower, GridPattern, Multirect, Rect, RectPartition};
use crate::qfree::{is_setwise_qfree, refine_grid_qfree_with_budget, DEFAULT_SEARCH_BUDGET};
use crate::recmap::{is_lex_positive, Piece, RecMap, Shuffle, Transposition};
use crate::scalar::{add_vec, sorted_distinct, sub_vec, try_sort_by, Scalar, SymbolTable};

/// Product of shuffles in written order.
pub fn compose_shuffles(ambient: &Multirect, factors: &[Shuffle]) -> Result<RecMap> {
    let maps = factors
        .iter()
        .map(|s| s.to_recmap(ambient))
        .collect::<Result<Vec<_>>>()?;
    RecMap::compose_all(ambient, &maps)
}

pub fn compose_transpositions(ambient: &Multirect, factors: &[Transposition]) -> Result<RecMap> {
    let maps = factors
        .iter()
        .map(|t| t.to_recmap(ambient))
        .collect::<Result<Vec<_>>>()?;
    RecMap::compose_all(ambient, &maps)
}

/// Stratification of a partition of the unit cube along the last axis.
///
/// Cell indices refer to the analysed cell list.
#[derive(Clone, Debug)]
pub struct CityAnalysis {
    pub ground: Vec<usize>,
    /// Highest tower above each ground cell, bottom to top.
    pub towers: Vec<Vec<usize>>,
    pub city: Vec<usize>,
    pub sky: Vec<usize>,
    /// Distinct floor heights of sky cells, increasing.
    pub complexity: Vec<Scalar>,
    pub working_height: Option<Scalar>,
    pub work_minus: Vec<usize>,
    pub work_plus: Vec<usize>,
    pub site: Multirect,
}

impl CityAnalysis {
    pub fn tops(&self) -> Vec<usize> {
        self.towers
            .iter()
            .map(|t| *t.last().expect("towers are nonempty"))
            .collect()
    }
}

pub fn analyze_partition(partition: &RectPartition) -> Result<CityAnalysis> {
    let table = partition
        .cells()
        .first()
        .and_then(|c| c.table())
        .ok_or_else(|| Error::pre("empty partition"))?
        .clone();
    if !partition
        .target()
        .set_eq(&Multirect::unit_cube(&table, partition.dim()))?
    {
        return Err(Error::pre("partition target is not the unit cube"));
    }
    if !is_setwise_qfree(partition) {
        return Err(Error::pre("partition is not setwise Q-free"));
    }
    analyze_cells(partition.cells())
}

fn analyze_cells(cells: &[Rect]) -> Result<CityAnalysis> {
    let d = cells
        .first()
        .map(Rect::dim)
        .ok_or_else(|| Error::pre("empty partition"))?;
    if d == 0 {
        return Err(Error::pre("zero-dimensional partition"));
    }
    let v = d - 1;
    let mut by_floor: HashMap<(Rect, Scalar), usize> = HashMap::with_capacity(cells.len());
    for (k, c) in cells.iter().enumerate() {
        by_floor.insert((c.project_out(v), c.lo()[v].clone()), k);
    }
    let ground: Vec<usize> = (0..cells.len())
        .filter(|&k| cells[k].lo()[v].is_zero())
        .collect();
    let mut in_city = vec![false; cells.len()];
    let mut towers = Vec::with_capacity(ground.len());
    for &g in &ground {
        let foot = cells[g].project_out(v);
        let mut tower = vec![g];
        in_city[g] = true;
        let mut top = g;
        while let Some(&next) = by_floor.get(&(foot.clone(), cells[top].hi()[v].clone())) {
            tower.push(next);
            in_city[next] = true;
            top = next;
        }
        towers.push(tower);
    }
    let city: Vec<usize> = (0..cells.len()).filter(|&k| in_city[k]).collect();
    let sky: Vec<usize> = (0..cells.len()).filter(|&k| !in_city[k]).collect();
    let complexity = sorted_distinct(sky.iter().map(|&k| cells[k].lo()[v].clone()).collect())?;
    let working_height = complexity.first().cloned();
    let (work_minus, work_plus) = match &working_height {
        None => (Vec::new(), Vec::new()),
        Some(h) => (
            towers
                .iter()
                .map(|t| *t.last().expect("nonempty"))
                .filter(|&k| cells[k].hi()[v] == *h)
                .collect(),
            sky.iter()
                .copied()
                .filter(|&k| cells[k].lo()[v] == *h)
                .collect::<Vec<_>>(),
        ),
    };
    let site = Multirect::from_disjoint(
        v,
        work_minus
            .iter()
            .map(|&k| cells[k].project_out(v))
            .collect(),
    );
    Ok(CityAnalysis {
        ground,
        towers,
        city,
        sky,
        complexity,
        working_height,
        work_minus,
        work_plus,
        site,
    })
}

/// Factors an involution into transpositions with pairwise disjoint
/// supports.
pub fn decompose_involution(f: &RecMap) -> Result<Vec<Transposition>> {
    if !f.compose(f)?.equals(&RecMap::identity(f.ambient()))? {
        return Err(Error::pre("map is not an involution"));
    }
    let mut out = Vec::new();
    for (v, class) in f.coalesced().displacement_classes() {
        if !is_lex_positive(&v)? {
            continue;
        }
        let mut boxes = class.into_pieces();
        sort_by_lower(&mut boxes)?;
        for k in boxes {
            let q = k.translate(&v);
            out.push(Transposition { p: k, q });
        }
    }
    Ok(out)
}

/// Shuffles whose product is a one-dimensional interval exchange of `[0, 1)`.
pub fn decompose_iet(f: &RecMap) -> Result<Vec<Shuffle>> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.dim(),
        });
    }
    let f = f.coalesced();
    let mut pieces: Vec<&Piece> = f.pieces().iter().collect();
    try_sort_by(&mut pieces, |a, b| {
        a.rect.lo()[0].cmp_value(&b.rect.lo()[0])
    })?;
    let mut arrangement: Vec<(usize, Scalar, Scalar)> = pieces
        .iter()
        .enumerate()
        .map(|(label, p)| (label, p.image().lo()[0].clone(), p.rect.side(0)))
        .collect();
    try_sort_by(&mut arrangement, |a, b| a.1.cmp_value(&b.1))?;
    let start = match arrangement.first() {
        None => return Ok(Vec::new()),
        Some(a) => a.1.clone(),
    };
    let mut arrangement: Vec<(usize, Scalar)> = arrangement
        .into_iter()
        .map(|(l, _, len)| (l, len))
        .collect();
    let mut swaps = Vec::new();
    loop {
        let mut swapped = false;
        let mut pos = start.clone();
        for j in 0..arrangement.len().saturating_sub(1) {
            if arrangement[j].0 > arrangement[j + 1].0 {
                let x = arrangement[j].1.clone();
                let y = arrangement[j + 1].1.clone();
                swaps.push(Shuffle::new(0, Rect::point(), pos.clone(), &x + &y, y)?);
                arrangement.swap(j, j + 1);
                swapped = true;
            }
            pos = &pos + &arrangement[j].1;
        }
        if !swapped {
            break;
        }
    }
    Ok(swaps.iter().map(Shuffle::inverse).collect())
}

/// Result of factoring a transposition.
#[derive(Clone, Debug)]
pub struct TranspositionFactors {
    pub shuffles: Vec<Shuffle>,
    /// True when the boxes had to be cut into smaller pairs first because
    /// an intermediate box would have collided with them.
    pub split: bool,
}

fn aligned_swap(p: &Rect, q: &Rect, axis: usize) -> Result<Vec<Shuffle>> {
    let (low, high) = if p.lo()[axis].lt(&q.lo()[axis])? {
        (p, q)
    } else {
        (q, p)
    };
    let x = low.lo()[axis].clone();
    let len = low.side(axis);
    let gap = &high.lo()[axis] - &low.hi()[axis];
    let base = low.project_out(axis);
    if gap.is_zero() {
        return Ok(vec![Shuffle::new(axis, base, x, len.scale_int(2), len)?]);
    }
    let first = Shuffle::new(axis, base.clone(), x, &len.scale_int(2) + &gap, len.clone())?;
    let second = Shuffle::new(axis, base, low.hi()[axis].clone(), &len + &gap, gap)?;
    Ok(vec![second, first])
}

fn overlaps(a: &Rect, b: &Rect, axis: usize) -> Result<bool> {
    Ok(a.lo()[axis].lt(&b.hi()[axis])? && b.lo()[axis].lt(&a.hi()[axis])?)
}

/// Shuffles whose product swaps the disjoint translates `p` and `q`.
pub fn transposition_shuffles(p: &Rect, q: &Rect) -> Result<TranspositionFactors> {
    if !p.same_shape(q) {
        return Err(Error::pre("boxes are not translates of each other"));
    }
    if p.intersects(q)? {
        return Err(Error::pre("boxes overlap"));
    }
    let d = p.dim();
    let moving: Vec<usize> = (0..d).filter(|&i| p.lo()[i] != q.lo()[i]).collect();
    let mut colliding = Vec::new();
    for &i in &moving {
        if overlaps(p, q, i)? {
            colliding.push(i);
        }
    }
    if colliding.is_empty() {
        let mut chain = vec![p.clone()];
        for &i in &moving {
            let last = chain.last().expect("nonempty");
            chain.push(last.with_axis(i, q.lo()[i].clone(), q.hi()[i].clone()));
        }
        let steps: Vec<Vec<Shuffle>> = moving
            .iter()
            .enumerate()
            .map(|(j, &i)| aligned_swap(&chain[j], &chain[j + 1], i))
            .collect::<Result<_>>()?;
        let k = steps.len();
        let mut shuffles = Vec::new();
        for step in steps.iter().take(k) {
            shuffles.extend(step.iter().cloned());
        }
        for step in steps.iter().take(k.saturating_sub(1)).rev() {
            shuffles.extend(step.iter().cloned());
        }
        return Ok(TranspositionFactors {
            shuffles,
            split: false,
        });
    }
    let v = sub_vec(q.lo(), p.lo());
    let mut parts = vec![p.clone()];
    for &i in &colliding {
        let len = p.side(i);
        let step = v[i].abs()?;
        let n = parts_needed(&len, &step)?;
        let piece = len.scale(&num_rational::BigRational::new(1.into(), n.into()));
        let mut next = Vec::with_capacity(parts.len() * n as usize);
        for r in &parts {
            let mut at = r.lo()[i].clone();
            for _ in 0..n {
                let end = &at + &piece;
                next.push(r.with_axis(i, at.clone(), end.clone()));
                at = end;
            }
        }
        parts = next;
    }
    let mut shuffles = Vec::new();
    for r in &parts {
        let sub = transposition_shuffles(r, &r.translate(&v))?;
        shuffles.extend(sub.shuffles);
    }
    Ok(TranspositionFactors {
        shuffles,
        split: true,
    })
}

/// Least `n` with `len <= n * step`.
fn parts_needed(len: &Scalar, step: &Scalar) -> Result<u64> {
    let guess = (len.to_f64() / step.to_f64()).ceil().max(1.0) as u64;
    let mut n = guess.max(1);
    while step.scale_int(n as i64).lt(len)? {
        n += 1;
    }
    while n > 1 && len.le(&step.scale_int(n as i64 - 1))? {
        n -= 1;
    }
    Ok(n)
}

/// Factors a map recognized as a transposition.
pub fn transposition_to_shuffles(tau: &RecMap) -> Result<TranspositionFactors> {
    let (p, q) = tau
        .as_transposition()?
        .ok_or_else(|| Error::pre("map is not a rectangle transposition"))?;
    transposition_shuffles(&p, &q)
}

fn unit_base(table: &Arc<SymbolTable>, dim: usize) -> Rect {
    Rect::unit_cube(table, dim)
}

/// Places a one-dimensional shuffle on `axis` of the `d`-cube.
fn along_axis(s: &Shuffle, axis: usize, d: usize, table: &Arc<SymbolTable>) -> Shuffle {
    Shuffle {
        axis,
        base: unit_base(table, d - 1),
        start: s.start.clone(),
        length: s.length.clone(),
        offset: s.offset.clone(),
    }
}

/// Factors the map sending each cell of `grid` to `cell + shifts[k]`, when
/// the images again form a grid. Returns the shuffles and the number of
/// transpositions that needed splitting.
fn grid_to_grid_cells(
    table: &Arc<SymbolTable>,
    grid: &GridPattern,
    shifts: &[Vec<Scalar>],
) -> Result<(Vec<Shuffle>, usize)> {
    let d = grid.dim();
    let cells = grid.cells();
    let images: Vec<Rect> = cells
        .iter()
        .zip(shifts)
        .map(|(c, s)| c.translate(s))
        .collect();
    let cube = Multirect::unit_cube(table, d);
    let target =
        GridPattern::refining(&RectPartition::new_unchecked(cube.clone(), images.clone()))?;
    if target.cell_count() != cells.len() {
        return Err(Error::pre("images of the grid cells do not form a grid"));
    }
    // g_i sends the intervals of the image grid back onto those of the
    // source grid, matching equal lengths in order of occurrence.
    let mut per_axis: Vec<RecMap> = Vec::with_capacity(d);
    for i in 0..d {
        let src = grid.intervals(i);
        let dst = target.intervals(i);
        let mut used = vec![false; src.len()];
        let mut pieces = Vec::with_capacity(dst.len());
        for (a, b) in &dst {
            let len = b - a;
            let k = (0..src.len())
                .find(|&k| !used[k] && &src[k].1 - &src[k].0 == len)
                .ok_or_else(|| {
                    Error::pre(format!(
                        "axis {i}: interval lengths of the two grids differ"
                    ))
                })?;
            used[k] = true;
            let r = Rect::new_unchecked(vec![a.clone()], vec![b.clone()]);
            pieces.push(Piece::new(r, vec![&src[k].0 - a]));
        }
        per_axis.push(RecMap::new_unchecked(
            Multirect::unit_cube(table, 1),
            pieces,
        ));
    }
    let mut factors = Vec::new();
    for (i, g) in per_axis.iter().enumerate() {
        for s in decompose_iet(&g.inverse())? {
            factors.push(along_axis(&s, i, d, table));
        }
    }
    // phi = g ∘ F permutes the source cells.
    let mut index: HashMap<Vec<Scalar>, usize> = HashMap::with_capacity(cells.len());
    for (k, c) in cells.iter().enumerate() {
        index.insert(c.lo().to_vec(), k);
    }
    let mut perm = vec![0usize; cells.len()];
    for (k, img) in images.iter().enumerate() {
        let mut lo = Vec::with_capacity(d);
        for i in 0..d {
            let t = per_axis[i]
                .shift_on(&Rect::new_unchecked(
                    vec![img.lo()[i].clone()],
                    vec![img.hi()[i].clone()],
                ))?
                .ok_or_else(|| Error::pre("image interval is cut by the axis map"))?;
            lo.push(&img.lo()[i] + &t[0]);
        }
        perm[k] = *index
            .get(&lo)
            .ok_or_else(|| Error::pre("cell does not land on a grid cell"))?;
    }
    let mut seen = vec![false; cells.len()];
    let mut split = 0;
    for start in 0..cells.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut k = perm[start];
        while k != start {
            cycle.push(k);
            seen[k] = true;
            k = perm[k];
        }
        for w in cycle.windows(2) {
            let t = transposition_shuffles(&cells[w[0]], &cells[w[1]])?;
            if t.split {
                split += 1;
            }
            factors.extend(t.shuffles);
        }
    }
    Ok((factors, split))
}

/// Factors `f` when `grid` is a setwise Q-free grid associated with `f`
/// whose image is again a grid.
pub fn grid_to_grid_decompose(f: &RecMap, grid: &GridPattern) -> Result<Vec<Shuffle>> {
    let table = grid.table().clone();
    let cube = Multirect::unit_cube(&table, grid.dim());
    if f.dim() != grid.dim() || !f.ambient().set_eq(&cube)? {
        return Err(Error::pre(
            "map must act on the unit cube of the grid's dimension",
        ));
    }
    if !crate::qfree::is_grid_qfree(grid) {
        return Err(Error::pre("grid is not setwise Q-free"));
    }
    let mut shifts = Vec::with_capacity(grid.cell_count());
    for c in grid.cells() {
        shifts.push(
            f.shift_on(&c)?
                .ok_or_else(|| Error::pre("a grid cell is cut by the map"))?,
        );
    }
    Ok(grid_to_grid_cells(&table, grid, &shifts)?.0)
}

/// Output of the full shuffle factorization.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Written order: the product of the list equals the input.
    pub factors: Vec<Shuffle>,
    /// Size of the complexity at each round of the top-level reduction,
    /// ending with 0.
    pub complexity_trace: Vec<usize>,
    /// Transpositions that were cut into smaller pairs.
    pub split_transpositions: usize,
}

pub fn decompose_shuffles(f: &RecMap) -> Result<Decomposition> {
    decompose_shuffles_with_budget(f, DEFAULT_SEARCH_BUDGET)
}

pub fn decompose_shuffles_with_budget(f: &RecMap, budget: u64) -> Result<Decomposition> {
    let d = f.dim();
    let table = f
        .table()
        .ok_or_else(|| Error::pre("map without coordinates"))?
        .clone();
    if d == 0 || !f.ambient().set_eq(&Multirect::unit_cube(&table, d))? {
        return Err(Error::pre(
            "shuffle factorization needs a map of the unit cube",
        ));
    }
    if let Some(v) = f.check()? {
        return Err(Error::InvalidMap(v.to_string()));
    }
    if f.is_identity() {
        return Ok(Decomposition {
            factors: Vec::new(),
            complexity_trace: vec![0],
            split_transpositions: 0,
        });
    }
    if d == 1 {
        return Ok(Decomposition {
            factors: decompose_iet(f)?,
            complexity_trace: vec![0],
            split_transpositions: 0,
        });
    }
    let domains = RectPartition::new_unchecked(
        f.ambient().clone(),
        f.pieces().iter().map(|p| p.rect.clone()).collect(),
    );
    let grid = refine_grid_qfree_with_budget(&GridPattern::refining(&domains)?, budget)?;
    let cells = grid.cells();
    let mut shifts = Vec::with_capacity(cells.len());
    for c in &cells {
        shifts.push(
            f.shift_on(c)?
                .ok_or_else(|| Error::pre("grid cell cut by the map"))?,
        );
    }
    let images: Vec<Rect> = cells
        .iter()
        .zip(&shifts)
        .map(|(c, s)| c.translate(s))
        .collect();
    let reduced = gridify(&table, images, budget)?;
    let total: Vec<Vec<Scalar>> = shifts
        .iter()
        .zip(&reduced.offsets)
        .map(|(a, b)| add_vec(a, b))
        .collect();
    let (tail, split) = grid_to_grid_cells(&table, &grid, &total)?;
    let mut factors: Vec<Shuffle> = reduced.moves.iter().map(Shuffle::inverse).collect();
    factors.extend(tail);
    Ok(Decomposition {
        factors,
        complexity_trace: reduced.trace,
        split_transpositions: split + reduced.split,
    })
}

struct Gridified {
    /// Shuffles in the order they are applied.
    moves: Vec<Shuffle>,
    /// Total displacement of each input cell.
    offsets: Vec<Vec<Scalar>>,
    trace: Vec<usize>,
    split: usize,
}

/// Moves the cells of a setwise Q-free partition of the unit cube, each
/// rigidly, until they form a grid.
fn gridify(table: &Arc<SymbolTable>, cells: Vec<Rect>, budget: u64) -> Result<Gridified> {
    let d = cells.first().map(Rect::dim).unwrap_or(0);
    let mut out = Gridified {
        moves: Vec::new(),
        offsets: vec![vec![Scalar::zero(table); d]; cells.len()],
        trace: Vec::new(),
        split: 0,
    };
    if d <= 1 {
        out.trace.push(0);
        return Ok(out);
    }
    let v = d - 1;
    let mut cur = cells;
    loop {
        let a = analyze_cells(&cur)?;
        let size = a.complexity.len();
        if let Some(&prev) = out.trace.last() {
            if size >= prev {
                return Err(Error::pre(format!(
                    "complexity failed to shrink ({prev} -> {size})"
                )));
            }
        }
        out.trace.push(size);
        let whei = match &a.working_height {
            None => break,
            Some(h) => h.clone(),
        };
        let delta = sideways_map(table, &cur, &a)?;
        let sub = decompose_shuffles_with_budget(&delta, budget)?;
        out.split += sub.split_transpositions;
        for s in sub.factors.iter().rev() {
            out.moves.push(s.lift(Scalar::zero(table), whei.clone()));
        }
        let moves: HashMap<Rect, Vec<Scalar>> = delta
            .pieces()
            .iter()
            .map(|p| (p.rect.clone(), p.shift.clone()))
            .collect();
        for k in 0..cur.len() {
            if !cur[k].lo()[v].lt(&whei)? {
                continue;
            }
            let foot = cur[k].project_out(v);
            let mut t = match moves.get(&foot) {
                Some(t) => t.clone(),
                None => delta
                    .shift_on(&foot)?
                    .ok_or_else(|| Error::pre("footprint cut by the sideways map"))?,
            };
            if t.iter().all(Scalar::is_zero) {
                continue;
            }
            if whei.lt(&cur[k].hi()[v])? {
                return Err(Error::pre("a moving cell straddles the working height"));
            }
            t.push(Scalar::zero(table));
            cur[k] = cur[k].translate(&t);
            out.offsets[k] = add_vec(&out.offsets[k], &t);
        }
    }

    // Empty complexity: every cell sits in a tower. Sort each tower by
    // height so all towers share the same vertical cuts.
    let a = analyze_cells(&cur)?;
    for tower in &a.towers {
        let foot = cur[tower[0]].project_out(v);
        let mut order: Vec<usize> = tower.clone();
        loop {
            let mut swapped = false;
            let mut pos = Scalar::zero(table);
            for j in 0..order.len().saturating_sub(1) {
                let x = cur[order[j]].side(v);
                let y = cur[order[j + 1]].side(v);
                if y.lt(&x)? {
                    out.moves.push(Shuffle::new(
                        v,
                        foot.clone(),
                        pos.clone(),
                        &x + &y,
                        y.clone(),
                    )?);
                    let mut up = vec![Scalar::zero(table); d];
                    up[v] = y.clone();
                    let mut down = vec![Scalar::zero(table); d];
                    down[v] = -&x;
                    let (lower, upper) = (order[j], order[j + 1]);
                    cur[lower] = cur[lower].translate(&up);
                    out.offsets[lower] = add_vec(&out.offsets[lower], &up);
                    cur[upper] = cur[upper].translate(&down);
                    out.offsets[upper] = add_vec(&out.offsets[upper], &down);
                    order.swap(j, j + 1);
                    swapped = true;
                }
                pos = &pos + &cur[order[j]].side(v);
            }
            if !swapped {
                break;
            }
        }
    }

    // The columns now form footprint x common vertical cuts. Footprints of a
    // three- or higher-dimensional cube need not form a grid; rearrange them
    // one dimension down.
    if d >= 3 {
        let feet: Vec<Rect> = a.towers.iter().map(|t| cur[t[0]].project_out(v)).collect();
        let floor = Multirect::unit_cube(table, v);
        let grid = GridPattern::refining(&RectPartition::new_unchecked(floor, feet.clone()))?;
        if grid.cell_count() != feet.len() {
            let sub = gridify(table, feet.clone(), budget)?;
            out.split += sub.split;
            for s in &sub.moves {
                out.moves
                    .push(s.lift(Scalar::zero(table), Scalar::one(table)));
            }
            let column: HashMap<Rect, usize> = feet
                .iter()
                .enumerate()
                .map(|(k, r)| (r.clone(), k))
                .collect();
            for k in 0..cur.len() {
                let c = column[&cur[k].project_out(v)];
                let mut t = sub.offsets[c].clone();
                t.push(Scalar::zero(table));
                cur[k] = cur[k].translate(&t);
                out.offsets[k] = add_vec(&out.offsets[k], &t);
            }
        }
    }
    Ok(out)
}

/// The horizontal map that carries the worksite tops onto the footprints
/// of the cells resting at the working height, identity on other tops.
fn sideways_map(table: &Arc<SymbolTable>, cells: &[Rect], a: &CityAnalysis) -> Result<RecMap> {
    let d = cells[0].dim();
    let v = d - 1;
    let zero = vec![Scalar::zero(table); v];
    let mut pieces = Vec::new();
    for top in a.tops() {
        if !a.work_minus.contains(&top) {
            pieces.push(Piece::new(cells[top].project_out(v), zero.clone()));
        }
    }
    let mut groups: Vec<(Vec<Scalar>, Vec<Rect>, Vec<Rect>)> = Vec::new();
    for &k in &a.work_minus {
        let foot = cells[k].project_out(v);
        let shape = foot.sides();
        match groups.iter_mut().find(|g| g.0 == shape) {
            Some(g) => g.1.push(foot),
            None => groups.push((shape, vec![foot], Vec::new())),
        }
    }
    for &k in &a.work_plus {
        let foot = cells[k].project_out(v);
        let shape = foot.sides();
        match groups.iter_mut().find(|g| g.0 == shape) {
            Some(g) => g.2.push(foot),
            None => return Err(Error::pre("worksite shapes do not match")),
        }
    }
    for (_, mut from, mut to) in groups {
        if from.len() != to.len() {
            return Err(Error::pre("worksite shape counts do not match"));
        }
        sort_by_lower(&mut from)?;
        sort_by_lower(&mut to)?;
        for (x, y) in from.into_iter().zip(to) {
            let shift = sub_vec(y.lo(), x.lo());
            pieces.push(Piece::new(x, shift));
        }
    }
    let delta = RecMap::new_unchecked(Multirect::unit_cube(table, v), pieces);
    debug_assert!(delta.is_valid().unwrap_or(true));
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recmap::restricted_rotation;
    use crate::scalar::q;

    fn t() -> Arc<SymbolTable> {
        SymbolTable::quadratic(&[2, 3]).unwrap()
    }

    fn s(t: &Arc<SymbolTable>, n: i64, d: i64) -> Scalar {
        Scalar::ratio(t, n, d)
    }

    fn check_shuffles(f: &RecMap, factors: &[Shuffle]) {
        for x in factors {
            let m = x.to_recmap(f.ambient()).unwrap();
            assert_eq!(m.as_shuffle().unwrap().as_ref(), Some(x));
        }
        let g = compose_shuffles(f.ambient(), factors).unwrap();
        assert!(g.equals(f).unwrap());
    }

    #[test]
    fn one_dimensional_swap_takes_two_rotations() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 1);
        let p = Rect::new(vec![s(&t, 0, 1)], vec![s(&t, 1, 5)]).unwrap();
        let qq = p.translate(&[s(&t, 1, 2)]);
        let tau = RecMap::transposition(&cube, &p, &qq).unwrap();
        let out = transposition_to_shuffles(&tau).unwrap();
        assert_eq!(out.shuffles.len(), 2);
        assert!(!out.split);
        check_shuffles(&tau, &out.shuffles);
    }

    #[test]
    fn adjacent_swap_is_one_rotation() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 1);
        let p = Rect::new(vec![s(&t, 0, 1)], vec![s(&t, 1, 3)]).unwrap();
        let qq = p.translate(&[s(&t, 1, 3)]);
        let tau = RecMap::transposition(&cube, &p, &qq).unwrap();
        let out = transposition_to_shuffles(&tau).unwrap();
        assert_eq!(out.shuffles.len(), 1);
        check_shuffles(&tau, &out.shuffles);
    }

    #[test]
    fn general_position_transposition() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let p = Rect::from_sides(&[s(&t, 1, 4), s(&t, 1, 5)]).unwrap();
        let qq = p.translate(&[s(&t, 1, 2), s(&t, 3, 5)]);
        let tau = RecMap::transposition(&cube, &p, &qq).unwrap();
        let out = transposition_to_shuffles(&tau).unwrap();
        assert!(out.shuffles.len() <= 6);
        check_shuffles(&tau, &out.shuffles);
    }

    #[test]
    fn colliding_transposition_is_split() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let p = Rect::from_sides(&[s(&t, 1, 2), s(&t, 1, 4)]).unwrap();
        let qq = p.translate(&[s(&t, 1, 8), s(&t, 1, 2)]);
        let tau = RecMap::transposition(&cube, &p, &qq).unwrap();
        let out = transposition_to_shuffles(&tau).unwrap();
        assert!(out.split);
        check_shuffles(&tau, &out.shuffles);
    }

    #[test]
    fn involution_splits_into_disjoint_transpositions() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let p1 = Rect::from_sides(&[s(&t, 1, 4), s(&t, 1, 4)]).unwrap();
        let q1 = p1.translate(&[s(&t, 1, 2), s(&t, 0, 1)]);
        let p2 = p1.translate(&[s(&t, 0, 1), s(&t, 1, 2)]);
        let q2 = p1.translate(&[s(&t, 1, 2), s(&t, 1, 2)]);
        let a = RecMap::transposition(&cube, &p1, &q1).unwrap();
        let b = RecMap::transposition(&cube, &p2, &q2).unwrap();
        let f = a.compose(&b).unwrap();
        let out = decompose_involution(&f).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out[0]
            .support()
            .is_disjoint_from(&out[1].support())
            .unwrap());
        assert!(compose_transpositions(&cube, &out)
            .unwrap()
            .equals(&f)
            .unwrap());
    }

    #[test]
    fn three_cycle_is_not_an_involution() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 1);
        let f = restricted_rotation(&t, &s(&t, 3, 4), &s(&t, 1, 4)).unwrap();
        assert!(decompose_involution(&f).is_err());
        let _ = cube;
    }

    #[test]
    fn iet_bubble_sort() {
        let t = t();
        let a = Scalar::symbol(&t, "sqrt2", q(1, 2)).unwrap();
        let f = restricted_rotation(&t, &a, &s(&t, 1, 3)).unwrap();
        let g = restricted_rotation(&t, &s(&t, 1, 1), &(&Scalar::one(&t) - &a)).unwrap();
        let h = f.compose(&g).unwrap();
        let factors = decompose_iet(&h).unwrap();
        check_shuffles(&h, &factors);
        assert!(decompose_iet(&RecMap::identity(h.ambient()))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn floating_cell_gives_complexity() {
        let t = t();
        let h = s(&t, 1, 2);
        let cells = vec![
            Rect::new(vec![s(&t, 0, 1), s(&t, 0, 1)], vec![s(&t, 1, 2), h.clone()]).unwrap(),
            Rect::new(
                vec![s(&t, 1, 2), s(&t, 0, 1)],
                vec![s(&t, 1, 1), s(&t, 1, 1)],
            )
            .unwrap(),
            Rect::new(vec![s(&t, 0, 1), h.clone()], vec![s(&t, 1, 4), s(&t, 1, 1)]).unwrap(),
            Rect::new(vec![s(&t, 1, 4), h.clone()], vec![s(&t, 1, 2), s(&t, 1, 1)]).unwrap(),
        ];
        let a = analyze_cells(&cells).unwrap();
        assert_eq!(a.ground, vec![0, 1]);
        assert_eq!(a.complexity, vec![h.clone()]);
        assert_eq!(a.working_height, Some(h));
        assert_eq!(a.work_minus, vec![0]);
        assert_eq!(a.work_plus, vec![2, 3]);
    }

    #[test]
    fn grids_have_empty_complexity() {
        let t = t();
        let g = GridPattern::new(
            &t,
            vec![
                vec![s(&t, 0, 1), Scalar::symbol(&t, "sqrt3", q(1, 3)).unwrap()],
                vec![s(&t, 0, 1), Scalar::symbol(&t, "sqrt2", q(1, 2)).unwrap()],
            ],
        )
        .unwrap();
        let a = analyze_partition(&g.to_partition()).unwrap();
        assert!(a.complexity.is_empty() && a.sky.is_empty());
        assert_eq!(a.city.len(), 4);
    }

    #[test]
    fn shuffle_factorization_of_a_transposition() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let a = Scalar::symbol(&t, "sqrt2", q(1, 4)).unwrap();
        let p = Rect::from_sides(&[a.clone(), s(&t, 1, 3)]).unwrap();
        let qq = p.translate(&[s(&t, 1, 2), s(&t, 1, 2)]);
        let tau = RecMap::transposition(&cube, &p, &qq).unwrap();
        let out = decompose_shuffles(&tau).unwrap();
        check_shuffles(&tau, &out.factors);
        assert!(out.complexity_trace.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn shuffle_factorization_with_floating_cells() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let a = Scalar::symbol(&t, "sqrt2", q(1, 4)).unwrap();
        let base = Rect::new(vec![s(&t, 0, 1)], vec![a.clone()]).unwrap();
        let vertical = Shuffle::new(1, base, s(&t, 0, 1), s(&t, 1, 1), s(&t, 1, 3)).unwrap();
        let side = Rect::new(vec![s(&t, 0, 1)], vec![s(&t, 1, 2)]).unwrap();
        let horizontal = Shuffle::new(0, side, s(&t, 0, 1), s(&t, 1, 1), a).unwrap();
        let f = vertical
            .to_recmap(&cube)
            .unwrap()
            .compose(&horizontal.to_recmap(&cube).unwrap())
            .unwrap();
        let out = decompose_shuffles(&f).unwrap();
        check_shuffles(&f, &out.factors);
        assert!(out.complexity_trace.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(out.complexity_trace.last(), Some(&0));
    }

    #[test]
    fn identity_needs_no_factors() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        assert!(decompose_shuffles(&RecMap::identity(&cube))
            .unwrap()
            .factors
            .is_empty());
        let g = GridPattern::trivial(&t, 2);
        assert!(grid_to_grid_decompose(&RecMap::identity(&cube), &g)
            .unwrap()
            .is_empty());
    }
}

#[cfg(test)]
mod sampled {
    use super::*;
    use crate::random::{parse_symbol_spec, Sampler};

    #[test]
    fn random_maps_recompose() {
        let t = parse_symbol_spec("sqrt2,sqrt3").unwrap();
        for (d, n) in [(1, 10u64), (2, 10), (3, 4)] {
            for seed in 0..n {
                let f = Sampler::new(&t, seed).recmap(d, 6).unwrap();
                let out = decompose_shuffles(&f).unwrap();
                let g = compose_shuffles(f.ambient(), &out.factors).unwrap();
                assert!(g.equals(&f).unwrap(), "d={d} seed={seed}");
                assert!(out.complexity_trace.windows(2).all(|w| w[0] > w[1]));
            }
        }
    }
}
