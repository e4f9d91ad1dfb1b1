use std::collections::HashSet;

use cyclic_ca::closure::Closure;
use cyclic_ca::search::{all_automata, DEFAULT_UNIVERSE_CAP};
use cyclic_ca::{
    canonical_rotation, commutes_with_shift, rank_ca_report, CellularAutomaton, Configuration,
    IcaElement, LocalRule, OrbitStructure, Params,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn random_ca(params: Params, seed: u64) -> CellularAutomaton {
    let mut rng = StdRng::seed_from_u64(seed);
    CellularAutomaton::from_local_rule(&LocalRule::random(params, &mut rng))
}

fn random_unit(params: Params, seed: u64) -> CellularAutomaton {
    (seed..)
        .map(|s| random_ca(params, s))
        .find(CellularAutomaton::is_invertible)
        .unwrap()
}

fn shape() -> impl Strategy<Value = Params> {
    prop_oneof![Just((2, 2)), Just((3, 2)), Just((4, 2)), Just((2, 3))]
        .prop_map(|(n, q)| Params::new(n, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_monotone_and_order_free(params in shape(), seeds in prop::collection::vec(any::<u64>(), 1..4), extra in any::<u64>()) {
        let gens: Vec<_> = seeds.iter().map(|&s| random_ca(params, s)).collect();
        let small: HashSet<_> = Closure::complete(&gens, 1 << 16).unwrap().into_elements().into_iter().collect();
        let mut reversed = gens.clone();
        reversed.reverse();
        let again: HashSet<_> = Closure::complete(&reversed, 1 << 16).unwrap().into_elements().into_iter().collect();
        prop_assert_eq!(&small, &again);

        let mut bigger = gens.clone();
        bigger.push(random_ca(params, extra));
        let large: HashSet<_> = Closure::complete(&bigger, 1 << 16).unwrap().into_elements().into_iter().collect();
        prop_assert!(small.is_subset(&large));
        for e in &large {
            prop_assert!(commutes_with_shift(e.images(), &params).unwrap());
        }
    }

    #[test]
    fn decomposition_is_a_homomorphism(params in shape(), a in any::<u64>(), b in any::<u64>()) {
        let orbits = OrbitStructure::enumerate(params);
        let f = random_unit(params, a);
        let g = random_unit(params, b);
        let fg = IcaElement::decompose(&f.compose(&g).unwrap(), &orbits).unwrap();
        let product = IcaElement::decompose(&f, &orbits).unwrap()
            .multiply(&IcaElement::decompose(&g, &orbits).unwrap())
            .unwrap();
        prop_assert_eq!(&fg, &product);
        prop_assert_eq!(product.compose(&orbits).unwrap(), f.compose(&g).unwrap());
    }

    #[test]
    fn inverse_undoes(params in shape(), seed in any::<u64>()) {
        let f = random_unit(params, seed);
        let inv = f.invert().unwrap();
        prop_assert!(commutes_with_shift(inv.images(), &params).unwrap());
        for c in 0..params.states() {
            prop_assert_eq!(inv.image(f.image(c)), c);
        }
    }

    #[test]
    fn canonical_rotation_is_constant_on_orbits(n in 2usize..9, q in 2usize..4, c in any::<u32>()) {
        let params = Params::new(n, q).unwrap();
        let c = Configuration(c % params.states() as u32);
        let canon = canonical_rotation(c, &params);
        prop_assert_eq!(canonical_rotation(canon, &params), canon);
        let rotated = Configuration(params.shift_index(c.index()) as u32);
        prop_assert_eq!(canonical_rotation(rotated, &params), canon);
        prop_assert!(canon <= c);
    }

    #[test]
    fn rank_reports_are_consistent(n in 2u64..5000, q in 2u64..10) {
        let r = rank_ca_report(n, q).unwrap();
        prop_assert!(r.rank_lower <= r.rank_upper);
        prop_assert_eq!(r.exact, r.rank_lower == r.rank_upper);
        prop_assert_eq!(r.rank_upper - r.rank_lower, r.epsilon_max);
        prop_assert_eq!(r.di_plus == 0, n % 2 == 1);
    }
}

#[test]
fn local_rules_round_trip_exhaustively() {
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let params = Params::new(n, q).unwrap();
        let all = all_automata(&params, DEFAULT_UNIVERSE_CAP).unwrap();
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        for ca in &all {
            assert_eq!(&CellularAutomaton::from_local_rule(&ca.to_local_rule()), ca);
        }
    }
}

#[test]
fn orbit_images_exhaustively() {
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let params = Params::new(n, q).unwrap();
        let orbits = OrbitStructure::enumerate(params);
        for ca in all_automata(&params, DEFAULT_UNIVERSE_CAP).unwrap() {
            for orbit in orbits.orbits() {
                let targets: HashSet<usize> = orbit
                    .members()
                    .iter()
                    .map(|m| orbits.locate(Configuration(ca.image(m.index()) as u32)).id)
                    .collect();
                assert_eq!(targets.len(), 1);
                let target = &orbits.orbits()[*targets.iter().next().unwrap()];
                assert_eq!(orbit.size() % target.size(), 0);
            }
        }
    }
}
