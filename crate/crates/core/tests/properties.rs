use pcoh::abelian::AbelianPresentation;
use pcoh::action::PartialAction;
use pcoh::cochain::delta;
use pcoh::cohomology::{cohomology, cohomology_bruteforce, random_cocycle};
use pcoh::fixtures;
use pcoh::globalize::{compare_globalizations, globalize, globalize_with_order, GlobalCochain};
use pcoh::verify::check_partial_global_iso;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_action(seed: u64) -> (ChaCha8Rng, PartialAction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = fixtures::small_groups();
    let g = groups[(seed % groups.len() as u64) as usize].clone();
    let pa = fixtures::random_partial_action(&mut rng, &g).unwrap();
    (rng, pa)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn globalization_checks_hold(seed in any::<u64>(), n in 0usize..3) {
        let (mut rng, pa) = random_action(seed);
        prop_assert!(pa.validate().valid);
        let w = random_cocycle(&mut rng, &pa, n).unwrap();
        let gs = globalize(&pa, &w).unwrap();
        prop_assert_eq!(gs.len(), pa.orbits().len());
        for g in &gs {
            prop_assert!(g.checks.all_pass());
            prop_assert!(g.env.round_trip_ok().unwrap());
        }
    }

    #[test]
    fn random_transversals_give_cohomologous_lifts(seed in any::<u64>(), n in 1usize..3) {
        let (mut rng, pa) = random_action(seed);
        let w = random_cocycle(&mut rng, &pa, n).unwrap();
        let mut order: Vec<usize> = pa.group().elements().collect();
        order.shuffle(&mut rng);
        let a = globalize(&pa, &w).unwrap();
        let b = globalize_with_order(&pa, &w, &order).unwrap();
        for (ga, gb) in a.iter().zip(&b) {
            let u2 = GlobalCochain(ga.env.transport_from(&gb.env, &gb.lift.u.0));
            let z = compare_globalizations(&ga.env, &ga.lift.u, &u2, None).unwrap();
            let g = &ga.env.global;
            prop_assert_eq!(ga.lift.u.0.mul(g, &delta(g, &z).unwrap()).unwrap(), u2.0);
        }
    }

    #[test]
    fn partial_and_envelope_cohomology_agree(seed in any::<u64>()) {
        let (_, pa) = random_action(seed);
        for e in check_partial_global_iso(&pa, &[0, 1]).unwrap() {
            prop_assert!(e.equal, "{:?}", e);
        }
    }

    #[test]
    fn snf_matches_enumeration(seed in any::<u64>(), n in 0usize..3) {
        let (_, pa) = random_action(seed);
        let small = |k: usize| AbelianPresentation::cochains(&pa, k).order_u64().is_some_and(|o| o <= 1 << 14);
        prop_assume!(small(n) && (n == 0 || small(n - 1)));
        prop_assert_eq!(cohomology(&pa, n).unwrap().invariant_factors, cohomology_bruteforce(&pa, n, 1 << 14).unwrap());
    }
}

#[test]
fn documented_values() {
    // H^1 of the trivial Z2 action on U(Z5) = Z4 is Hom(Z2, Z4) = Z2.
    assert_eq!(cohomology(&fixtures::fixture3(), 1).unwrap().invariant_factors, vec![2]);
    // FIXTURE-1 invariants are the diagonal units (c, c).
    assert_eq!(cohomology(&fixtures::fixture1(), 0).unwrap().invariant_factors, vec![4]);
    // FIXTURE-3 cochain orders per slot.
    assert_eq!(AbelianPresentation::cochains(&fixtures::fixture3(), 1).orders(), vec![4, 4]);
}
