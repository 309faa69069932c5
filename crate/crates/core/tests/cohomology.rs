//! Cochains, coboundaries and the asymmetrization class through the public API.

use atlas_core::cochain::{Cochain, Flavor};
use atlas_core::engine::{is_coboundary, is_cocycle, multicharacter_class, RowSet, WitnessSolver};
use atlas_core::families::ParameterA;
use atlas_core::groups::{heisenberg_mul, GroupElement, HeisenbergElement};
use atlas_core::num::rat;
use atlas_core::resolution::{resolve_third_cocycle, third_cocycle_c_a, verify_resolution};
use atlas_core::sample::Sampler;
use proptest::prelude::*;

const FLAVORS: [Flavor; 4] = [Flavor::G, Flavor::Gm, Flavor::H, Flavor::Hm];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn boundary_squared_vanishes(seed in any::<u64>(), f in 0usize..4, rank in 1usize..=3, arity in 1usize..=2) {
        let c = Sampler::new(seed).cochain(FLAVORS[f], rank, arity, 3, 6);
        prop_assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn asymmetrized_boundaries_vanish(seed in any::<u64>(), rank in 1usize..=3, arity in 1usize..=2) {
        let c = Sampler::new(seed).cochain(Flavor::G, rank, arity, 3, 6);
        prop_assert!(c.boundary().asymmetrize().is_zero());
    }

    #[test]
    fn class_test_matches_witness_search(seed in any::<u64>(), rank in 2usize..=3) {
        let mut s = Sampler::new(seed);
        let mut c = Cochain::zero(Flavor::G, rank, 2);
        for i in 1..=rank {
            for j in 1..=rank {
                let v = s.rat(3, 1);
                c = c.add(&Cochain::term(Flavor::G, rank, v, &[&[(i, 1)], &[(j, 1)]]).unwrap()).unwrap();
            }
        }
        prop_assert!(is_cocycle(&c));
        let witness = WitnessSolver::new().solve(&c, RowSet::All).unwrap();
        prop_assert_eq!(is_coboundary(&c).unwrap(), witness.is_some());
        if let Some(f) = witness {
            prop_assert!(f.boundary().sub(&c).unwrap().is_trivial_mod_one());
        }
    }
}

#[test]
fn bilinear_class_is_the_antisymmetric_part() {
    let c = Cochain::term(Flavor::G, 2, rat(1, 3), &[&[(1, 1)], &[(2, 1)]]).unwrap();
    let class = multicharacter_class(&c).unwrap();
    assert_eq!(class.get(&[1, 2]), rat(1, 3));
    let sym = c.add(&Cochain::term(Flavor::G, 2, rat(1, 3), &[&[(2, 1)], &[(1, 1)]]).unwrap()).unwrap();
    assert!(is_coboundary(&sym).unwrap());
}

#[test]
fn resolution_kills_the_third_cocycle() {
    let a = ParameterA::from_entries(4, [((1, 2, 3), rat(1, 3)), ((2, 3, 4), rat(-2, 5))]).unwrap();
    let c = third_cocycle_c_a(&a).unwrap();
    assert!(is_cocycle(&c));
    assert!(!multicharacter_class(&c).unwrap().is_zero());
    let b = resolve_third_cocycle(&a).unwrap();
    let rep = verify_resolution(&a, &b, 50, 11).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn heisenberg_commutator_is_central() {
    let x = HeisenbergElement::section(GroupElement::from_i64(&[1, 0]));
    let y = HeisenbergElement::section(GroupElement::from_i64(&[0, 1]));
    let xy = heisenberg_mul(&x, &y).unwrap();
    let yx = heisenberg_mul(&y, &x).unwrap();
    assert_eq!(xy.g, yx.g);
    assert_ne!(xy, yx);
}
