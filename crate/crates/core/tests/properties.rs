mod common;

use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use soficlab::entropy::{count_good_traces, CountOptions, GoodnessParams, MicrostateSpace};
use soficlab::monoid::FiniteMonoid;
use soficlab::rational::Rational;
use soficlab::shift::DEFAULT_PATTERN_CAP;

fn library_count(inst: &common::Instance, delta: Rational, shards: usize) -> BigUint {
    let params = GoodnessParams::new(inst.f.clone(), delta).unwrap();
    let space = MicrostateSpace::new(&inst.chart, &inst.sft, &inst.f, inst.mode, DEFAULT_PATTERN_CAP).unwrap();
    let options = CountOptions {
        shards,
        force_enumeration: true,
        ..CountOptions::default()
    };
    count_good_traces(&space, &params, &options).unwrap().count
}

fn instance(seed: u64, finite: bool) -> common::Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if finite {
        let monoids: Vec<FiniteMonoid> = (1..=3).flat_map(FiniteMonoid::enumerate_up_to_iso).collect();
        common::random_finite_instance(&mut rng, &monoids, 4, 2)
    } else {
        common::random_integer_instance(&mut rng, 5, 2)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dfs_matches_naive_enumeration(seed in any::<u64>(), finite in any::<bool>()) {
        let inst = instance(seed, finite);
        let oracle = common::oracle_count(&inst, Ratio::new(1, 2));
        prop_assert_eq!(library_count(&inst, inst.delta, 1), BigUint::from(oracle), "{}", inst.label);
    }

    #[test]
    fn counts_are_monotone_in_delta(seed in any::<u64>(), finite in any::<bool>()) {
        let inst = instance(seed, finite);
        let deltas = [Ratio::new(1, 1000), Ratio::new(1, 2), Ratio::new(3, 4), Ratio::new(1, 1)];
        let counts: Vec<BigUint> = deltas.iter().map(|&d| library_count(&inst, d, 1)).collect();
        for w in counts.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        let full = BigUint::from(inst.alphabet()).pow(inst.chart.d() as u32);
        prop_assert!(counts[3] <= full);
    }

    #[test]
    fn shard_count_does_not_matter(seed in any::<u64>(), shards in 1usize..9) {
        let inst = instance(seed, seed % 2 == 0);
        prop_assert_eq!(library_count(&inst, inst.delta, 1), library_count(&inst, inst.delta, shards));
    }
}
