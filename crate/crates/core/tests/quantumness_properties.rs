mod common;

use proptest::prelude::*;
use resourceforge::oracles::{grid_min_deficit, grid_min_discord, GridSpec};
use resourceforge::random::random_unitary;
use resourceforge::state::apply_local_unitary;
use resourceforge::*;

fn quick() -> OptimizerConfig {
    OptimizerConfig { restarts: 8, ..Default::default() }
}

fn optimizer_cases() -> ProptestConfig {
    ProptestConfig { cases: 12, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(optimizer_cases())]

    #[test]
    fn minima_are_covariant_under_local_unitaries(seed in any::<u64>()) {
        let rho = common::two_qubit(seed);
        let moved = apply_local_unitary(&rho, &random_unitary(2, seed ^ 1), &[0]).unwrap();
        let moved = apply_local_unitary(&moved, &random_unitary(2, seed ^ 2), &[1]).unwrap();
        let (a, b) = (deficit_one_way(&rho, &quick()).unwrap(), deficit_one_way(&moved, &quick()).unwrap());
        prop_assert!((a.value - b.value).abs() <= 2e-3);
    }

    #[test]
    fn ordering_chain_and_cross_path(seed in any::<u64>()) {
        let rho = common::two_qubit(seed);
        let q = discord(&rho, &quick()).unwrap().value;
        let d1 = deficit_one_way(&rho, &quick()).unwrap().value;
        let d0 = deficit_zero_way(&rho, &quick()).unwrap().value;
        prop_assert!(q >= -1e-9 && q <= d1 + 1e-3 && d1 <= d0 + 1e-3);
        prop_assert!((relent_to_cq(&rho, &quick()).unwrap().value - d1).abs() <= 1e-6);
    }

    #[test]
    fn free_states_have_no_quantumness(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let cq = common::random_cq(da, db, seed);
        prop_assert!(deficit_one_way(&cq, &quick()).unwrap().value.abs() <= 1e-6);
        prop_assert!(discord(&cq, &quick()).unwrap().value.abs() <= 1e-6);
        let cc = common::random_cc(2, db, seed);
        prop_assert!(relent_to_cc(&cc, &quick()).unwrap().value.abs() <= 1e-6);
    }

    #[test]
    fn optimizer_never_loses_to_the_grid(seed in any::<u64>()) {
        let rho = common::two_qubit(seed);
        let grid = GridSpec::new(40, 40).unwrap();
        prop_assert!(grid_min_deficit(&rho, &grid).unwrap().value >= deficit_one_way(&rho, &quick()).unwrap().value - 1e-6);
        prop_assert!(grid_min_discord(&rho, &grid).unwrap().value >= discord(&rho, &quick()).unwrap().value - 1e-6);
    }

    #[test]
    fn value_is_the_trace_minimum(seed in any::<u64>()) {
        let r = deficit_one_way(&common::two_qubit(seed), &quick()).unwrap();
        let min = r.trace.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(r.value, min);
        prop_assert!(r.value >= -1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn discord_equals_deficit_minus_local_entropy_production(seed in any::<u64>(), da in 2usize..4, db in 1usize..4) {
        let rho = random_density(da * db, 1 + (seed as usize) % (da * db), seed).unwrap().with_dims(vec![da, db]).unwrap();
        let m = ProjectiveMeasurement::from_basis(random_unitary(da, seed ^ 99)).unwrap();
        let after = measure_local(&rho, &m, 0).unwrap();
        let local = vn_entropy(&partial_trace(&after, &[0]).unwrap()) - vn_entropy(&partial_trace(&rho, &[0]).unwrap());
        let gap = discord_fixed(&rho, &m).unwrap() - deficit_one_way_fixed(&rho, &m).unwrap() + local;
        prop_assert!(gap.abs() <= 1e-10);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let rho = common::two_qubit(42);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| deficit_one_way(&rho, &quick()).unwrap())
    };
    let (one, many) = (run(1), run(4));
    assert_eq!(one.value.to_bits(), many.value.to_bits());
    assert_eq!(one.trace, many.trace);
    assert_eq!(one.measurement, many.measurement);
}

#[test]
fn generalized_and_multicopy_never_exceed_the_plain_deficit() {
    for seed in 0..3 {
        let rho = common::two_qubit(seed + 60);
        let plain = deficit_one_way(&rho, &quick()).unwrap().value;
        assert!(generalized_deficit(&rho, 1, &quick()).unwrap().value <= plain + 1e-9);
        assert!(multicopy_deficit(&rho, 2, &quick()).unwrap().value <= plain + 1e-3);
    }
}
