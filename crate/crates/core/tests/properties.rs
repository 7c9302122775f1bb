use std::sync::Arc;

use proptest::prelude::*;

use recex_core::decompose::{compose_shuffles, decompose_shuffles};
use recex_core::doc::Document;
use recex_core::invariants::{is_in_derived, saf, vol_tensor_in};
use recex_core::qfree::simplicial_refine;
use recex_core::random::{parse_symbol_spec, Sampler};
use recex_core::{Multirect, Piece, RecMap, Scalar, SymbolTable};

fn table() -> Arc<SymbolTable> {
    parse_symbol_spec("sqrt2,sqrt3").unwrap()
}

fn maps(seed: u64, d: usize, n: usize) -> Vec<RecMap> {
    let t = table();
    let mut s = Sampler::new(&t, seed);
    (0..n).map(|_| s.recmap(d, 6).unwrap()).collect()
}

/// Cuts every piece of `f` in half along `axis`.
fn resplit(f: &RecMap, axis: usize) -> RecMap {
    let mut pieces = Vec::new();
    for p in f.pieces() {
        let mid = (&p.rect.lo()[axis] + &p.rect.hi()[axis]).scale(&recex_core::scalar::q(1, 2));
        let (a, b) = p.rect.split(axis, &mid).unwrap();
        for r in [a, b].into_iter().flatten() {
            pieces.push(Piece::new(r, p.shift.clone()));
        }
    }
    RecMap::new(f.ambient().clone(), pieces).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_axioms(seed in any::<u64>(), d in 1usize..=3) {
        let m = maps(seed, d, 3);
        let (f, g, h) = (&m[0], &m[1], &m[2]);
        let id = RecMap::identity(f.ambient());
        let left = f.compose(&g.compose(h).unwrap()).unwrap();
        let right = f.compose(g).unwrap().compose(h).unwrap();
        prop_assert!(left.equals(&right).unwrap());
        prop_assert!(f.compose(&id).unwrap().equals(f).unwrap());
        prop_assert!(id.compose(f).unwrap().equals(f).unwrap());
        prop_assert!(f.compose(&f.inverse()).unwrap().equals(&id).unwrap());
        prop_assert!(left.is_valid().unwrap());
    }

    #[test]
    fn equality_ignores_presentation(seed in any::<u64>(), d in 1usize..=3, axis in 0usize..3) {
        let f = &maps(seed, d, 1)[0];
        let g = resplit(f, axis % d);
        prop_assert!(g.pieces().len() >= f.pieces().len());
        prop_assert!(f.equals(&g).unwrap() && g.equals(f).unwrap());
    }

    #[test]
    fn saf_is_a_homomorphism(seed in any::<u64>(), d in 1usize..=3) {
        let m = maps(seed, d, 2);
        let lhs = saf(&m[0].compose(&m[1]).unwrap()).unwrap();
        let rhs = saf(&m[0]).unwrap().add(&saf(&m[1]).unwrap()).unwrap();
        prop_assert_eq!(lhs.clone(), rhs);
        prop_assert!(lhs.components.iter().all(|c| c.is_antisymmetric_last_two()));
    }

    #[test]
    fn conjugates_of_commutators_stay_in_the_kernel(seed in any::<u64>(), d in 1usize..=2) {
        let m = maps(seed, d, 3);
        let (g, h, k) = (&m[0], &m[1], &m[2]);
        let amb = g.ambient().clone();
        let comm = RecMap::compose_all(&amb, &[g.clone(), h.clone(), g.inverse(), h.inverse()]).unwrap();
        let conj = RecMap::compose_all(&amb, &[k.clone(), comm, k.inverse()]).unwrap();
        prop_assert!(is_in_derived(&conj).unwrap());
    }

    #[test]
    fn tensor_volume_is_invariant(seed in any::<u64>(), d in 1usize..=3, take in 1usize..4) {
        let t = table();
        let mut s = Sampler::new(&t, seed);
        let grid = s.qfree_grid(d).unwrap();
        let cells: Vec<_> = grid.cells().into_iter().step_by(take).collect();
        let m0 = Multirect::new(d, cells).unwrap();
        let f = s.recmap(d, 6).unwrap();
        let image = f.image_of_set(&m0).unwrap();
        prop_assert_eq!(vol_tensor_in(&t, &image), vol_tensor_in(&t, &m0));
    }

    #[test]
    fn refinement_reconstructs_inputs(xs in prop::collection::vec((0i64..5, 0i64..5, 1i64..6), 1..5)) {
        let t = table();
        let r2 = Scalar::symbol(&t, "sqrt2", recex_core::scalar::q(1, 3)).unwrap();
        let inputs: Vec<Scalar> = xs
            .iter()
            .map(|&(a, b, den)| {
                let a = if a == 0 && b == 0 { 1 } else { a };
                &r2.scale_int(a) + &Scalar::ratio(&t, b, den)
            })
            .collect();
        let r = simplicial_refine(&inputs).unwrap();
        prop_assert!(r.verify(&inputs).unwrap());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), d in 1usize..=3) {
        let f = &maps(seed, d, 1)[0];
        let text = Document::recmap(f).unwrap().to_text();
        let again = Document::parse(&text).unwrap();
        prop_assert_eq!(again.to_text(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn shuffle_factorization_recomposes(seed in any::<u64>(), d in 1usize..=3) {
        let f = &maps(seed, d, 1)[0];
        let out = decompose_shuffles(f).unwrap();
        prop_assert!(compose_shuffles(f.ambient(), &out.factors).unwrap().equals(f).unwrap());
    }
}
