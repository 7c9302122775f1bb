//! Seeded generation of group elements built on random Q-free grids.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{GridPattern, Multirect, Rect};
use crate::recmap::{Piece, RecMap, Shuffle};
use crate::scalar::{q, Scalar, Symbol, SymbolKind, SymbolTable};

/// Parses a comma separated symbol list such as `sqrt2,sqrt3` or
/// `e=2.718281828459045:15`. The unit is always present.
pub fn parse_symbol_spec(spec: &str) -> Result<Arc<SymbolTable>> {
    let mut symbols = vec![Symbol::unit()];
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "1" || item == "rational" {
            continue;
        }
        if let Some(m) = item.strip_prefix("sqrt") {
            let m: u64 = m
                .parse()
                .map_err(|_| Error::InvalidSymbols(format!("bad symbol `{item}`")))?;
            symbols.push(Symbol::sqrt(m));
            continue;
        }
        let (name, rest) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidSymbols(format!("bad symbol `{item}`")))?;
        let (decimal, digits) = rest.split_once(':').ok_or_else(|| {
            Error::InvalidSymbols(format!("`{item}`: expected name=decimal:digits"))
        })?;
        let digits: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidSymbols(format!("`{item}`: bad digit count")))?;
        symbols.push(Symbol {
            name: name.to_string(),
            kind: SymbolKind::Opaque {
                decimal: decimal.to_string(),
                digits,
            },
        });
    }
    SymbolTable::new(symbols)
}

/// Deterministic source of random elements.
pub struct Sampler {
    rng: ChaCha8Rng,
    table: Arc<SymbolTable>,
}

impl Sampler {
    pub fn new(table: &Arc<SymbolTable>, seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            table: table.clone(),
        }
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n.max(1))
    }

    fn irrationals(&self) -> Vec<u32> {
        (0..self.table.len() as u32)
            .filter(|&i| i != self.table.unit_index())
            .collect()
    }

    /// Small rational `n/den` with `lo <= n <= hi`.
    pub fn rational(&mut self, lo: i64, hi: i64, den: i64) -> Scalar {
        Scalar::ratio(&self.table, self.rng.gen_range(lo..=hi), den)
    }

    /// A positive irrational close to `target`, or a rational one when the
    /// table has no irrational symbols.
    pub fn irrational_near(&mut self, target: f64) -> Scalar {
        let syms = self.irrationals();
        if syms.is_empty() {
            let n = ((target * 64.0).round() as i64).max(1);
            return Scalar::ratio(&self.table, n, 64);
        }
        let s = syms[self.below(syms.len())];
        let unit = Scalar::from_terms(&self.table, [(s, q(1, 1))]);
        let c = ((target / unit.to_f64() * 64.0).round() as i64).max(1);
        unit.scale(&q(c, 64))
    }

    /// Lengths of one axis of a random Q-free grid, in order.
    pub fn qfree_lengths(&mut self) -> Vec<Scalar> {
        let one = Scalar::one(&self.table);
        if self.irrationals().is_empty() {
            let k = self.rng.gen_range(2..=4);
            return vec![Scalar::ratio(&self.table, 1, k); k as usize];
        }
        loop {
            let na = self.rng.gen_range(1..=2usize);
            let nb = self.rng.gen_range(1..=2usize);
            let k = (na + nb) as f64;
            let target = self.rng.gen_range(0.4..1.6) / k;
            let a = self.irrational_near(target);
            let b = (&one - &a.scale_int(na as i64)).scale(&q(1, nb as i64));
            if !matches!(b.is_positive(), Ok(true)) {
                continue;
            }
            let mut lengths = vec![a; na];
            lengths.extend(vec![b; nb]);
            lengths.shuffle(&mut self.rng);
            return lengths;
        }
    }

    pub fn qfree_grid(&mut self, dim: usize) -> Result<GridPattern> {
        let lengths: Vec<Vec<Scalar>> = (0..dim).map(|_| self.qfree_lengths()).collect();
        GridPattern::from_lengths(&self.table, &lengths)
    }

    /// A random element of at most `pieces` pieces after coalescing;
    /// `pieces <= 1` gives the identity.
    pub fn recmap(&mut self, dim: usize, pieces: usize) -> Result<RecMap> {
        let cube = Multirect::unit_cube(&self.table, dim);
        let mut f = RecMap::identity(&cube);
        if pieces <= 1 || dim == 0 {
            return Ok(f);
        }
        let grid = self.qfree_grid(dim)?;
        for _ in 0..6 * pieces {
            let g = self.grid_element(&grid)?;
            let h = g.compose(&f)?.coalesced();
            if h.pieces().len() <= pieces {
                f = h;
            }
        }
        Ok(f)
    }

    /// One shuffle, transposition or IET lift aligned with `grid`.
    pub fn grid_element(&mut self, grid: &GridPattern) -> Result<RecMap> {
        match self.below(3) {
            0 => self
                .grid_shuffle(grid)?
                .to_recmap(&Multirect::unit_cube(&self.table, grid.dim())),
            1 => match self.grid_transposition(grid)? {
                Some(t) => Ok(t),
                None => self.grid_iet_lift(grid),
            },
            _ => self.grid_iet_lift(grid),
        }
    }

    fn interval_range(&mut self, count: usize, min_len: usize) -> (usize, usize) {
        let len = self.rng.gen_range(min_len..=count);
        let start = self.rng.gen_range(0..=count - len);
        (start, start + len)
    }

    pub fn grid_shuffle(&mut self, grid: &GridPattern) -> Result<Shuffle> {
        let d = grid.dim();
        let axes: Vec<usize> = (0..d).filter(|&i| grid.intervals(i).len() >= 2).collect();
        if axes.is_empty() {
            return Err(Error::pre("grid has no axis with two intervals"));
        }
        let axis = axes[self.below(axes.len())];
        let iv = grid.intervals(axis);
        let (j0, j1) = self.interval_range(iv.len(), 2);
        let m = self.rng.gen_range(1..j1 - j0);
        let start = iv[j0].0.clone();
        let length = &iv[j1 - 1].1 - &start;
        let offset = &iv[j1 - 1].1 - &iv[j1 - m].0;
        let mut lo = Vec::with_capacity(d - 1);
        let mut hi = Vec::with_capacity(d - 1);
        for i in (0..d).filter(|&i| i != axis) {
            let other = grid.intervals(i);
            let (k0, k1) = self.interval_range(other.len(), 1);
            lo.push(other[k0].0.clone());
            hi.push(other[k1 - 1].1.clone());
        }
        Shuffle::new(axis, Rect::new(lo, hi)?, start, length, offset)
    }

    /// Swap of two random grid cells of equal shape, if the grid has any.
    pub fn grid_transposition(&mut self, grid: &GridPattern) -> Result<Option<RecMap>> {
        let cells = grid.cells();
        let cube = Multirect::unit_cube(&self.table, grid.dim());
        let pairs: Vec<(usize, usize)> = (0..cells.len())
            .flat_map(|a| (a + 1..cells.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| cells[a].same_shape(&cells[b]))
            .collect();
        if pairs.is_empty() {
            return Ok(None);
        }
        let (a, b) = pairs[self.below(pairs.len())];
        RecMap::transposition(&cube, &cells[a], &cells[b]).map(Some)
    }

    /// Random permutation of the intervals of one axis of `grid`.
    pub fn axis_iet(&mut self, grid: &GridPattern, axis: usize) -> RecMap {
        let iv = grid.intervals(axis);
        let mut order: Vec<usize> = (0..iv.len()).collect();
        order.shuffle(&mut self.rng);
        let mut pos = Scalar::zero(&self.table);
        let mut pieces = Vec::with_capacity(iv.len());
        for k in order {
            let (a, b) = &iv[k];
            pieces.push(Piece::new(
                Rect::new(vec![a.clone()], vec![b.clone()]).expect("grid interval"),
                vec![&pos - a],
            ));
            pos = &pos + &(b - a);
        }
        RecMap::new(Multirect::unit_cube(&self.table, 1), pieces)
            .expect("permuted intervals tile [0, 1)")
    }

    pub fn grid_iet_lift(&mut self, grid: &GridPattern) -> Result<RecMap> {
        let factors: Vec<RecMap> = (0..grid.dim()).map(|i| self.axis_iet(grid, i)).collect();
        Ok(RecMap::iet_lift(&factors)?.coalesced())
    }

    /// Product of one to three disjoint transpositions of grid cells.
    pub fn involution(&mut self, dim: usize) -> Result<RecMap> {
        let grid = self.qfree_grid(dim)?;
        let cube = Multirect::unit_cube(&self.table, dim);
        let cells = grid.cells();
        let mut free: Vec<usize> = (0..cells.len()).collect();
        free.shuffle(&mut self.rng);
        let wanted = self.rng.gen_range(1..=3);
        let mut f = RecMap::identity(&cube);
        let mut made = 0;
        while made < wanted {
            let Some(a) = free.pop() else { break };
            if let Some(pos) = free.iter().position(|&b| cells[b].same_shape(&cells[a])) {
                let b = free.remove(pos);
                f = RecMap::transposition(&cube, &cells[a], &cells[b])?.compose(&f)?;
                made += 1;
            }
        }
        if made == 0 {
            return self.involution(dim);
        }
        Ok(f.coalesced())
    }

    /// `g h g^-1 h^-1` for random `g`, `h`.
    pub fn commutator(&mut self, dim: usize, pieces: usize) -> Result<RecMap> {
        let g = self.recmap(dim, pieces)?;
        let h = self.recmap(dim, pieces)?;
        let cube = Multirect::unit_cube(&self.table, dim);
        Ok(
            RecMap::compose_all(&cube, &[g.clone(), h.clone(), g.inverse(), h.inverse()])?
                .coalesced(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        let t = parse_symbol_spec("sqrt2, sqrt5,e=2.718281828459045:15").unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.index_of("e"), Some(3));
        assert_eq!(parse_symbol_spec("").unwrap().len(), 1);
        assert!(parse_symbol_spec("sqrt4").is_err());
        assert!(parse_symbol_spec("x=1.5").is_err());
    }

    #[test]
    fn samples_are_reproducible_and_valid() {
        let t = parse_symbol_spec("sqrt2,sqrt3").unwrap();
        for d in 1..=3 {
            let f = Sampler::new(&t, 7).recmap(d, 6).unwrap();
            let g = Sampler::new(&t, 7).recmap(d, 6).unwrap();
            assert_eq!(f.to_json(), g.to_json());
            assert!(f.is_valid().unwrap());
            assert!(f.pieces().len() <= 6);
        }
        assert!(Sampler::new(&t, 1).recmap(2, 1).unwrap().is_identity());
    }

    #[test]
    fn grids_are_qfree() {
        let t = parse_symbol_spec("sqrt2").unwrap();
        let mut s = Sampler::new(&t, 3);
        for _ in 0..10 {
            assert!(crate::qfree::is_grid_qfree(&s.qfree_grid(2).unwrap()));
        }
        let r = parse_symbol_spec("").unwrap();
        assert!(crate::qfree::is_grid_qfree(
            &Sampler::new(&r, 3).qfree_grid(2).unwrap()
        ));
    }

    #[test]
    fn involutions_square_to_identity() {
        let t = parse_symbol_spec("sqrt2").unwrap();
        let mut s = Sampler::new(&t, 11);
        for _ in 0..5 {
            let f = s.involution(2).unwrap();
            assert!(!f.is_identity());
            assert!(f
                .compose(&f)
                .unwrap()
                .equals(&RecMap::identity(f.ambient()))
                .unwrap());
        }
    }
}
