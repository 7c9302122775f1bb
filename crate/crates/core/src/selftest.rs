//! The acceptance suite: twelve exact, seeded checks with a scoreboard.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::decompose::{
    compose_shuffles, compose_transpositions, decompose_involution, decompose_shuffles_with_budget,
    grid_to_grid_decompose, transposition_shuffles,
};
use crate::doc::{Document, Factor, Payload};
use crate::error::{Error, Result};
use crate::flip::{flip_embed, flip_unembed, random_flipmap};
use crate::geometry::{GridPattern, Multirect, Rect};
use crate::invariants::{
    extend_to_ambient_with_budget, is_in_derived, is_in_gtg, rec_isomorphism_with_budget, saf,
    vol_tensor_in, IsoOutcome, TensorValue,
};
use crate::lattice::{fundamental_domain, torus_vol, Lattice};
use crate::qfree::{
    is_grid_qfree, is_independent, is_setwise_qfree, refine_grid_qfree_with_budget,
    simplicial_refine_with_budget, DEFAULT_SEARCH_BUDGET,
};
use crate::random::{parse_symbol_spec, Sampler};
use crate::recmap::{RecMap, Shuffle, Transposition};
use crate::scalar::{q, Scalar, SymbolTable};

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    pub search_budget: u64,
    pub max_precision_bits: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            search_budget: DEFAULT_SEARCH_BUDGET,
            max_precision_bits: crate::scalar::DEFAULT_MAX_PRECISION_BITS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{verdict}] {:02} {}: {} cases, {:.2}s",
            self.id, self.name, self.cases, self.seconds
        );
        if let Some(first) = self.failures.first() {
            s.push_str(&format!(
                " ({} failing, first: {first})",
                self.failures.len()
            ));
        }
        s
    }
}

/// Collects case verdicts for one criterion.
struct Check {
    cases: usize,
    failures: Vec<String>,
}

impl Check {
    fn new() -> Check {
        Check {
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, label: impl Into<String>, verdict: Result<bool>) {
        self.cases += 1;
        match verdict {
            Ok(true) => {}
            Ok(false) => self.failures.push(label.into()),
            Err(e) => self.failures.push(format!("{}: {e}", label.into())),
        }
    }
}

type Runner = fn(&Config, &mut Check) -> Result<()>;

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "saf-homomorphism"),
    (2, "saf-generators"),
    (3, "derived-kernel"),
    (4, "shuffle-generation"),
    (5, "transposition-shuffles"),
    (6, "involutions"),
    (7, "simplicial-refinement"),
    (8, "rec-isomorphism"),
    (9, "torus-volume"),
    (10, "flip-embedding"),
    (11, "gtg-membership"),
    (12, "infrastructure"),
];

fn runner(id: u8) -> Runner {
    match id {
        1 => saf_homomorphism,
        2 => saf_generators,
        3 => derived_kernel,
        4 => shuffle_generation,
        5 => transposition_factors,
        6 => involutions,
        7 => simplicial_refinement,
        8 => isomorphisms,
        9 => torus_volume,
        10 => flip_embedding,
        11 => gtg_membership,
        _ => infrastructure,
    }
}

/// Runs every criterion whose name or number contains `filter`.
pub fn run(config: &Config, filter: Option<&str>) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .filter(|(id, name)| {
            filter.map_or(true, |f| {
                name.contains(f) || format!("{id:02}") == f || id.to_string() == f
            })
        })
        .map(|&(id, name)| run_one(config, id, name))
        .collect()
}

fn run_one(config: &Config, id: u8, name: &'static str) -> Outcome {
    let start = Instant::now();
    let mut check = Check::new();
    if let Err(e) = runner(id)(config, &mut check) {
        check.failures.push(format!("aborted: {e}"));
    }
    Outcome {
        id,
        name,
        cases: check.cases,
        failures: check.failures,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn table(config: &Config, spec: &str) -> Result<Arc<SymbolTable>> {
    Ok(parse_symbol_spec(spec)?.with_precision_cap(config.max_precision_bits))
}

fn sym(t: &Arc<SymbolTable>, name: &str, n: i64, d: i64) -> Scalar {
    Scalar::symbol(t, name, q(n, d)).expect("declared symbol")
}

fn rat(t: &Arc<SymbolTable>, n: i64, d: i64) -> Scalar {
    Scalar::ratio(t, n, d)
}

fn tensor(t: &Arc<SymbolTable>, factors: &[Scalar]) -> TensorValue {
    TensorValue::product(t, factors)
}

/// `R_{i,c,a,b}`: rotation by `b` modulo `a` along `axis`, over the base
/// box with corner 0 and sides `c`.
fn rotation_element(
    t: &Arc<SymbolTable>,
    axis: usize,
    c: &[Scalar],
    a: &Scalar,
    b: &Scalar,
) -> Result<RecMap> {
    let d = c.len() + 1;
    let base = if c.is_empty() {
        Rect::point()
    } else {
        Rect::from_sides(c)?
    };
    Shuffle::new(axis, base, Scalar::zero(t), a.clone(), b.clone())?
        .to_recmap(&Multirect::unit_cube(t, d))
}

/// Q-free triples `(a, b, c)` with `0 < b < a < 1` and `0 < c <= 1`.
fn parameter_choices(t: &Arc<SymbolTable>) -> Vec<(Scalar, Scalar, Scalar)> {
    let mut out = Vec::new();
    let a_choices = [
        sym(t, "sqrt2", 1, 2),
        sym(t, "sqrt3", 1, 3),
        sym(t, "sqrt5", 1, 4),
        sym(t, "sqrt2", 1, 3),
        sym(t, "sqrt3", 1, 2),
        sym(t, "sqrt5", 1, 3),
        &rat(t, 1, 2) + &sym(t, "sqrt2", 1, 5),
    ];
    let b_choices = [
        rat(t, 1, 3),
        rat(t, 1, 5),
        &rat(t, 1, 7) + &sym(t, "sqrt5", 1, 20),
    ];
    let c_choices = [
        sym(t, "sqrt3", 1, 2),
        sym(t, "sqrt5", 1, 3),
        &sym(t, "sqrt2", 1, 4) + &rat(t, 1, 3),
    ];
    for (k, a) in a_choices.iter().enumerate() {
        for (j, b) in b_choices.iter().enumerate() {
            let c = c_choices[(k + j) % c_choices.len()].clone();
            if is_independent(&[a.clone(), b.clone(), c.clone()]) {
                out.push((a.clone(), b.clone(), c));
            }
        }
    }
    out.truncate(20);
    out
}

fn saf_homomorphism(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    for d in 1..=3 {
        let mut s = Sampler::new(&t, config.seed.wrapping_add(100 * d as u64));
        for k in 0..200 {
            let f = s.recmap(d, 8)?;
            let g = s.recmap(d, 8)?;
            let verdict = (|| {
                let lhs = saf(&f.compose(&g)?)?;
                let rhs = saf(&f)?.add(&saf(&g)?)?;
                Ok(lhs == rhs)
            })();
            check.case(format!("d={d} pair {k}"), verdict);
        }
    }
    Ok(())
}

fn saf_generators(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3,sqrt5")?;
    for (k, (a, b, c)) in parameter_choices(&t).into_iter().enumerate() {
        let wedge =
            tensor(&t, &[a.clone(), b.clone()]).sub(&tensor(&t, &[b.clone(), a.clone()]))?;
        // R_{a,b} on [0, 1).
        let f = rotation_element(&t, 0, &[], &a, &b)?;
        check.case(
            format!("R_a,b #{k}"),
            saf(&f).map(|s| s.components == vec![wedge.clone()]),
        );
        // R_{i,c,a,b} for d = 2, 3 and every axis.
        for d in 2..=3 {
            let sides = vec![c.clone(); d - 1];
            for i in 0..d {
                let verdict = (|| {
                    let f = rotation_element(&t, i, &sides, &a, &b)?;
                    let mut expected = vec![TensorValue::zero(&t, d + 1); d];
                    expected[i] = tensor(&t, &sides)
                        .tensor_scalar(&a)
                        .tensor_scalar(&b)
                        .sub(&tensor(&t, &sides).tensor_scalar(&b).tensor_scalar(&a))?;
                    Ok(saf(&f)?.components == expected)
                })();
                check.case(format!("R_i,c,a,b #{k} d={d} i={}", i + 1), verdict);
            }
        }
    }
    Ok(())
}

fn derived_kernel(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3,sqrt5")?;
    let mut s = Sampler::new(&t, config.seed.wrapping_add(300));
    for k in 0..100 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let comm = s.commutator(d, 4)?;
            let moving: Vec<usize> = (0..d).filter(|_| s.below(2) == 0).collect();
            let moving = if moving.is_empty() { vec![0] } else { moving };
            let (p, qq) = separated_pair(&mut s, d, &moving)?;
            let tau = RecMap::transposition(&Multirect::unit_cube(&t, d), &p, &qq)?;
            let f = comm.compose(&tau)?.compose(&s.commutator(d, 3)?)?;
            is_in_derived(&f)
        })();
        check.case(format!("product {k} (d={d})"), verdict);
    }
    for (k, (a, b, c)) in parameter_choices(&t).into_iter().enumerate() {
        let d = 1 + k % 3;
        let verdict = (|| {
            let f = rotation_element(&t, k % d, &vec![c.clone(); d - 1], &a, &b)?;
            Ok(!is_in_derived(&f)?)
        })();
        check.case(format!("R_i,c,a,b #{k}"), verdict);
    }
    Ok(())
}

fn is_shuffle_factor(s: &Shuffle, cube: &Multirect) -> Result<bool> {
    Ok(s.to_recmap(cube)?.as_shuffle()?.as_ref() == Some(s))
}

fn shuffle_generation(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    for (d, count) in [(2usize, 50u64), (3, 20)] {
        let cube = Multirect::unit_cube(&t, d);
        for k in 0..count {
            let verdict = (|| {
                let f = Sampler::new(&t, config.seed.wrapping_add(400 + 1000 * d as u64 + k))
                    .recmap(d, 6)?;
                let out = decompose_shuffles_with_budget(&f, config.search_budget)?;
                for s in &out.factors {
                    if !is_shuffle_factor(s, &cube)? {
                        return Ok(false);
                    }
                }
                if !out.complexity_trace.windows(2).all(|w| w[0] > w[1]) {
                    return Ok(false);
                }
                compose_shuffles(&cube, &out.factors)?.equals(&f)
            })();
            check.case(format!("d={d} map {k}"), verdict);
        }
    }
    Ok(())
}

/// Two disjoint translates whose projections are disjoint on every axis
/// where they differ. `moving` lists those axes.
fn separated_pair(s: &mut Sampler, d: usize, moving: &[usize]) -> Result<(Rect, Rect)> {
    let t = s.table().clone();
    let mut lo_p = Vec::with_capacity(d);
    let mut lo_q = Vec::with_capacity(d);
    let mut sides = Vec::with_capacity(d);
    for i in 0..d {
        let target = 0.1 + 0.2 * (s.below(100) as f64 / 100.0);
        let side = s.irrational_near(target);
        let p0 = rat(&t, s.below(8) as i64, 100);
        let q0 = if moving.contains(&i) {
            // A gap of zero makes the boxes adjacent on this axis.
            let gap = if s.below(4) == 0 {
                Scalar::zero(&t)
            } else {
                rat(&t, 1 + s.below(20) as i64, 100)
            };
            &(&p0 + &side) + &gap
        } else {
            p0.clone()
        };
        lo_p.push(p0);
        lo_q.push(q0);
        sides.push(side);
    }
    let p = Rect::from_sides(&sides)?.translate(&lo_p);
    let q = Rect::from_sides(&sides)?.translate(&lo_q);
    Ok((p, q))
}

fn transposition_factors(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    let mut s = Sampler::new(&t, config.seed.wrapping_add(500));
    for k in 0..30 {
        let d = [1, 2, 3][k % 3];
        let aligned = k < 10;
        let verdict = (|| {
            let moving: Vec<usize> = if aligned {
                vec![s.below(d)]
            } else {
                (0..d).filter(|_| s.below(3) != 0).collect::<Vec<_>>()
            };
            let moving = if moving.is_empty() {
                vec![d - 1]
            } else {
                moving
            };
            let (p, qq) = if aligned {
                // Force a positive gap.
                loop {
                    let pair = separated_pair(&mut s, d, &moving)?;
                    let i = moving[0];
                    if pair.0.hi()[i] != pair.1.lo()[i] {
                        break pair;
                    }
                }
            } else {
                separated_pair(&mut s, d, &moving)?
            };
            let cube = Multirect::unit_cube(&t, d);
            let tau = RecMap::transposition(&cube, &p, &qq)?;
            let out = transposition_shuffles(&p, &qq)?;
            let bound = if aligned { 2 } else { 2 * (2 * d - 1) };
            if out.split || out.shuffles.len() > bound || (aligned && out.shuffles.len() != 2) {
                return Ok(false);
            }
            for f in &out.shuffles {
                if !is_shuffle_factor(f, &cube)? {
                    return Ok(false);
                }
            }
            compose_shuffles(&cube, &out.shuffles)?.equals(&tau)
        })();
        check.case(format!("case {k} (d={d}, aligned={aligned})"), verdict);
    }
    Ok(())
}

fn involutions(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    let mut s = Sampler::new(&t, config.seed.wrapping_add(600));
    for k in 0..30 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let f = s.involution(d)?;
            let out = decompose_involution(&f)?;
            for (i, a) in out.iter().enumerate() {
                for b in &out[i + 1..] {
                    if !a.support().is_disjoint_from(&b.support())? {
                        return Ok(false);
                    }
                }
            }
            compose_transpositions(f.ambient(), &out)?.equals(&f)
        })();
        check.case(format!("involution {k} (d={d})"), verdict);
    }
    Ok(())
}

/// gcd of positive rationals: gcd of numerators over lcm of denominators.
fn rational_gcd_oracle(values: &[BigRational]) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    BigRational::new(num, den)
}

fn simplicial_refinement(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    let r2 = sym(&t, "sqrt2", 1, 1);
    let one = Scalar::one(&t);
    let corpus: Vec<Vec<Scalar>> = vec![
        vec![rat(&t, 3, 1), rat(&t, 5, 1)],
        vec![one.clone(), r2.clone(), &one + &r2],
        vec![one.clone(), &r2 - &one, &rat(&t, 2, 1) - &r2],
        vec![rat(&t, 1, 6), rat(&t, 1, 4), rat(&t, 5, 9)],
        vec![rat(&t, 2, 3)],
    ];
    let mut s = Sampler::new(&t, config.seed.wrapping_add(700));
    let mut sets = corpus;
    for _ in 0..20 {
        let a = s.irrational_near(0.3);
        let b = if s.below(4) == 0 {
            a.scale(&q(1 + s.below(3) as i64, 1 + s.below(4) as i64))
        } else {
            rat(&t, 1 + s.below(9) as i64, 10)
        };
        let n = 2 + s.below(3);
        let set: Vec<Scalar> = (0..n)
            .map(|_| {
                let x = s.below(4) as i64;
                let y = if x == 0 {
                    1 + s.below(3) as i64
                } else {
                    s.below(4) as i64
                };
                &a.scale_int(x) + &b.scale_int(y)
            })
            .collect();
        sets.push(set);
    }
    for (k, set) in sets.iter().enumerate() {
        let verdict = (|| {
            let r = simplicial_refine_with_budget(set, config.search_budget)?;
            if !r.verify(set)? {
                return Ok(false);
            }
            let rationals: Option<Vec<BigRational>> = set.iter().map(Scalar::as_rational).collect();
            if let Some(rs) = rationals {
                let g = Scalar::rational(&t, rational_gcd_oracle(&rs));
                return Ok(r.basis == vec![g]);
            }
            Ok(true)
        })();
        check.case(format!("set {k}"), verdict);
    }
    // Grids whose lengths are not Q-free.
    for k in 0..10 {
        let verdict = (|| {
            let lengths: Vec<Vec<Scalar>> = (0..2)
                .map(|_| {
                    let a = s.irrational_near(0.2);
                    let b = rat(&t, 1, 5);
                    let rest = &(&one - &a.scale_int(2)) - &b;
                    let mut v = vec![a.clone(), a.scale_int(1), b, rest];
                    if s.below(2) == 0 {
                        v.reverse();
                    }
                    v
                })
                .collect();
            let grid = GridPattern::from_lengths(&t, &lengths)?;
            let fine = refine_grid_qfree_with_budget(&grid, config.search_budget)?;
            let refines = fine.to_partition().refines(&grid.to_partition())?;
            Ok(refines && is_grid_qfree(&fine) && is_setwise_qfree(&fine.to_partition()))
        })();
        check.case(format!("grid {k}"), verdict);
    }
    Ok(())
}

fn maps_onto(phi_pieces: &[crate::recmap::Piece], m1: &Multirect, m2: &Multirect) -> Result<bool> {
    let d = m1.dim();
    let domains = Multirect::new(d, phi_pieces.iter().map(|p| p.rect.clone()).collect())?;
    let images = Multirect::new(d, phi_pieces.iter().map(|p| p.image()).collect())?;
    Ok(domains.set_eq(m1)? && images.set_eq(m2)?)
}

fn isomorphisms(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    let mut s = Sampler::new(&t, config.seed.wrapping_add(800));
    // Fixed pairs.
    let half = rat(&t, 1, 2);
    let one = Scalar::one(&t);
    let wide = Multirect::single(Rect::from_sides(&[one.clone(), half.clone()])?);
    let tall = Multirect::single(Rect::from_sides(&[half.clone(), one.clone()])?);
    let root = Multirect::single(Rect::from_sides(&[
        sym(&t, "sqrt2", 1, 2),
        sym(&t, "sqrt2", 1, 2),
    ])?);
    check.case(
        "[0,1/2)x[0,1) vs [0,1)x[0,1/2)",
        rec_isomorphism_with_budget(&tall, &wide, config.search_budget).and_then(|o| match o {
            IsoOutcome::Isomorphic(phi) => {
                Ok(phi.validate().is_ok() && maps_onto(phi.pieces(), &tall, &wide)?)
            }
            IsoOutcome::NotIsomorphic { .. } => Ok(false),
        }),
    );
    check.case(
        "witness pair",
        rec_isomorphism_with_budget(&root, &tall, config.search_budget).map(|o| match o {
            IsoOutcome::NotIsomorphic { source, target } => {
                source != target
                    && source == tensor(&t, &[sym(&t, "sqrt2", 1, 2), sym(&t, "sqrt2", 1, 2)])
                    && target == tensor(&t, &[half.clone(), one.clone()])
            }
            IsoOutcome::Isomorphic(_) => false,
        }),
    );
    // Random sub-multirectangles of the cube and their images.
    for k in 0..18 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let grid = s.qfree_grid(d)?;
            let cells = grid.cells();
            let mut chosen: Vec<Rect> = cells.iter().filter(|_| s.below(3) == 0).cloned().collect();
            if chosen.is_empty() {
                chosen.push(cells[0].clone());
            }
            if chosen.len() == cells.len() {
                chosen.pop();
            }
            let m1 = Multirect::new(d, chosen)?;
            let f = s.recmap(d, 6)?;
            let m2 = f.image_of_set(&m1)?;
            if vol_tensor_in(&t, &m1) != vol_tensor_in(&t, &m2) {
                return Ok(false);
            }
            let phi = match rec_isomorphism_with_budget(&m1, &m2, config.search_budget)? {
                IsoOutcome::Isomorphic(phi) => phi,
                IsoOutcome::NotIsomorphic { .. } => return Ok(false),
            };
            if phi.validate().is_err() || !maps_onto(phi.pieces(), &m1, &m2)? {
                return Ok(false);
            }
            let cube = Multirect::unit_cube(&t, d);
            let g = extend_to_ambient_with_budget(&phi, &cube, config.search_budget)?;
            Ok(g.is_valid()? && g.image_of_set(&m1)?.set_eq(&m2)?)
        })();
        check.case(format!("pair {k} (d={d})"), verdict);
    }
    Ok(())
}

fn torus_volume(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    let r2 = |n, d| sym(&t, "sqrt2", n, d);
    let r3 = |n, d| sym(&t, "sqrt3", n, d);
    let z = || rat(&t, 0, 1);
    let bases: Vec<[Scalar; 4]> = vec![
        [rat(&t, 1, 1), z(), z(), rat(&t, 1, 1)],
        [rat(&t, 1, 1), z(), rat(&t, 1, 2), rat(&t, 1, 1)],
        [r2(1, 1), z(), z(), r2(1, 1)],
        [rat(&t, 1, 1), r2(1, 4), r3(1, 2), rat(&t, 1, 1)],
        [rat(&t, 2, 1), rat(&t, 1, 3), rat(&t, -1, 2), rat(&t, 3, 2)],
        [r3(1, 1), z(), rat(&t, 1, 3), r2(1, 2)],
        [r2(1, 2), rat(&t, 1, 5), z(), r3(1, 3)],
        [&rat(&t, 1, 1) + &r2(1, 3), z(), r3(1, 4), rat(&t, 2, 3)],
        [rat(&t, 3, 4), rat(&t, -1, 4), rat(&t, 1, 4), rat(&t, 3, 4)],
        [r2(1, 1), r3(1, 5), rat(&t, -1, 3), r3(1, 1)],
    ];
    for (k, [a, b, c, d]) in bases.into_iter().enumerate() {
        let verdict = (|| {
            let lattice = Lattice::new(
                &t,
                vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]],
            )?;
            let expected =
                tensor(&t, &[a.clone(), d.clone()]).sub(&tensor(&t, &[c.clone(), b.clone()]))?;
            let fd = fundamental_domain(&lattice, None)?;
            if !fd.report.disjoint || !fd.report.tiles {
                return Ok(false);
            }
            let vol = vol_tensor_in(&t, &fd.domain);
            let start = &fd.start;
            let grown = Rect::new(
                start.lo().iter().map(|x| x - &rat(&t, 1, 3)).collect(),
                start.hi().iter().map(|x| x + &rat(&t, 1, 5)).collect(),
            )?;
            let other = torus_vol(&lattice, Some(&grown))?;
            Ok(vol == expected && other == vol)
        })();
        check.case(format!("lattice {k}"), verdict);
    }
    Ok(())
}

fn flip_embedding(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3")?;
    let mut s = Sampler::new(&t, config.seed.wrapping_add(1000));
    for k in 0..30 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let f = random_flipmap(&mut s, d, 4)?;
            Ok(f.is_valid() && flip_unembed(&flip_embed(&f)?)?.equals(&f)?)
        })();
        check.case(format!("r(q(F)) #{k} (d={d})"), verdict);
    }
    for k in 0..30 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let f = random_flipmap(&mut s, d, 3)?;
            let g = random_flipmap(&mut s, d, 3)?;
            let lhs = flip_embed(&f.compose(&g)?)?;
            let rhs = flip_embed(&f)?.compose(&flip_embed(&g)?)?;
            lhs.equals(&rhs)
        })();
        check.case(format!("q(FG) #{k} (d={d})"), verdict);
    }
    Ok(())
}

fn gtg_membership(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3,sqrt5")?;
    let mut s = Sampler::new(&t, config.seed.wrapping_add(1100));
    for k in 0..20 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let grid = s.qfree_grid(d)?;
            is_in_gtg(&s.grid_iet_lift(&grid)?)
        })();
        check.case(format!("IET lift {k} (d={d})"), verdict);
    }
    for k in 0..20 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let moving: Vec<usize> = (0..d).filter(|_| s.below(2) == 0).collect();
            let moving = if moving.is_empty() { vec![0] } else { moving };
            let (p, qq) = separated_pair(&mut s, d, &moving)?;
            is_in_gtg(&RecMap::transposition(
                &Multirect::unit_cube(&t, d),
                &p,
                &qq,
            )?)
        })();
        check.case(format!("transposition {k} (d={d})"), verdict);
    }
    for (k, (a, b, c)) in parameter_choices(&t).into_iter().enumerate() {
        let d = 2 + k % 2;
        let verdict = (|| {
            let f = rotation_element(&t, 0, &vec![c.clone(); d - 1], &a, &b)?;
            Ok(!is_in_gtg(&f)?)
        })();
        check.case(format!("R_1,c,a,b #{k} (d={d})"), verdict);
    }
    Ok(())
}

fn stable(doc: &Document) -> Result<bool> {
    let text = doc.to_text();
    Ok(Document::parse(&text)?.to_text() == text)
}

fn infrastructure(config: &Config, check: &mut Check) -> Result<()> {
    let t = table(config, "sqrt2,sqrt3,g=0.5772156649015329:16")?;
    let mut s = Sampler::new(&t, config.seed.wrapping_add(1200));
    let f = s.recmap(2, 6)?;
    let cube = Multirect::unit_cube(&t, 2);
    let grid = s.qfree_grid(2)?;
    let refinement = simplicial_refine_with_budget(
        &[rat(&t, 1, 1), sym(&t, "sqrt2", 1, 1)],
        config.search_budget,
    )?;
    let lattice = Lattice::new(
        &t,
        vec![
            vec![rat(&t, 1, 1), z_of(&t)],
            vec![rat(&t, 1, 2), rat(&t, 1, 1)],
        ],
    )?;
    let fd = fundamental_domain(&lattice, None)?;
    let half = Multirect::single(Rect::from_sides(&[rat(&t, 1, 2), rat(&t, 1, 1)])?);
    let iso =
        match rec_isomorphism_with_budget(&half, &f.image_of_set(&half)?, config.search_budget)? {
            IsoOutcome::Isomorphic(phi) => phi,
            IsoOutcome::NotIsomorphic { .. } => {
                return Err(Error::pre("image of a set must be isomorphic to it"))
            }
        };
    let shuffle = s.grid_shuffle(&grid)?;
    let cells = grid.cells();
    let payloads = vec![
        Payload::RecMap(f.clone()),
        Payload::FlipMap(random_flipmap(&mut s, 2, 3)?),
        Payload::Multirect(cube.clone()),
        Payload::Rect(cells[0].clone()),
        Payload::Grid(grid.clone()),
        Payload::Lattice(lattice.clone()),
        Payload::Tensor(vol_tensor_in(&t, &half)),
        Payload::Saf(saf(&f)?),
        Payload::Factors {
            ambient: cube.clone(),
            factors: vec![
                Factor::Shuffle(shuffle),
                Factor::Transposition(Transposition {
                    p: Rect::from_sides(&[rat(&t, 1, 4), rat(&t, 1, 4)])?,
                    q: Rect::from_sides(&[rat(&t, 1, 4), rat(&t, 1, 4)])?
                        .translate(&[rat(&t, 1, 2), rat(&t, 1, 2)]),
                }),
            ],
        },
        Payload::Scalars(vec![sym(&t, "g", 1, 3), rat(&t, -7, 2)]),
        Payload::Refinement(refinement),
        Payload::Isomorphism(iso),
        Payload::Domain {
            start: fd.start.clone(),
            volume: vol_tensor_in(&t, &fd.domain),
            domain: fd.domain,
            report: fd.report,
        },
    ];
    for p in payloads {
        let kind = p.kind();
        let dim = match &p {
            Payload::Scalars(_) | Payload::Refinement(_) | Payload::Tensor(_) | Payload::Saf(_) => {
                None
            }
            _ => Some(2),
        };
        check.case(
            format!("round trip {kind}"),
            stable(&Document::new(&t, dim, p)),
        );
    }
    for d in 1..=3 {
        let verdict = (|| {
            let a = Document::recmap(&Sampler::new(&t, 77).recmap(d, 7)?)?.to_text();
            let b = Document::recmap(&Sampler::new(&t, 77).recmap(d, 7)?)?.to_text();
            Ok(a == b)
        })();
        check.case(format!("seeded generation d={d}"), verdict);
    }
    for k in 0..20 {
        let d = 1 + k % 3;
        let verdict = (|| {
            let grid = s.qfree_grid(d)?;
            // Cell swaps keep the grid; the final lift moves it onto another grid.
            let mut f = RecMap::identity(&Multirect::unit_cube(&t, d));
            for _ in 0..2 {
                if let Some(tau) = s.grid_transposition(&grid)? {
                    f = tau.compose(&f)?;
                }
            }
            let f = s.grid_iet_lift(&grid)?.compose(&f)?;
            let factors = grid_to_grid_decompose(&f, &grid)?;
            compose_shuffles(f.ambient(), &factors)?.equals(&f)
        })();
        check.case(format!("grid to grid {k} (d={d})"), verdict);
    }
    Ok(())
}

fn z_of(t: &Arc<SymbolTable>) -> Scalar {
    Scalar::zero(t)
}
