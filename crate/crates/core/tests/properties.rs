//! Whole-run properties of the simulator.

use pirs_core::compute::VehicleState;
use pirs_core::game::Willingness;
use pirs_core::strategy::pirs_contribution;
use pirs_core::{
    default_scenario, run, run_with, MetricsReport, RunHandle, RunOptions, ScenarioConfig, Strategy,
};
use proptest::prelude::*;

fn scenario(n: usize, duration: f64) -> ScenarioConfig {
    let mut cfg = default_scenario();
    cfg.n_vehicles = n;
    cfg.sim_duration_s = duration;
    cfg
}

fn handle(cfg: &ScenarioConfig, strategy: Strategy, rep: u64) -> RunHandle<'_> {
    RunHandle {
        scenario: cfg,
        strategy,
        master_seed: 99,
        rep_index: rep,
    }
}

fn closes(r: &MetricsReport) -> bool {
    r.failed_tasks + r.executed_total() == r.total_tasks
}

#[test]
fn lone_vehicle_behaves_like_ncs() {
    let cfg = scenario(1, 600.0);
    let ncs = run(&handle(&cfg, Strategy::Ncs, 0)).unwrap();
    assert!(ncs.total_tasks > 0);
    for s in [Strategy::Airs, Strategy::Pirs] {
        let mut r = run(&handle(&cfg, s, 0)).unwrap();
        assert_eq!(r.executed_v2v, 0);
        r.strategy = Strategy::Ncs;
        assert_eq!(r, ncs, "{s}");
    }
}

#[test]
fn reservations_balance_over_whole_run() {
    let cfg = scenario(60, 300.0);
    for s in Strategy::ALL {
        let out = run_with(
            &handle(&cfg, s, 1),
            RunOptions {
                check_invariants: true,
                record_trace: false,
            },
        )
        .unwrap();
        assert!(
            out.stats.violations.is_empty(),
            "{s}: {:?}",
            out.stats.violations
        );
        assert!(closes(&out.report), "{s}");
        assert_eq!(
            out.stats.scheduled,
            out.stats.processed + out.stats.discarded,
            "{s}"
        );
    }
}

#[test]
fn trace_is_reproducible_and_ordered() {
    let cfg = scenario(30, 200.0);
    let opts = RunOptions {
        check_invariants: false,
        record_trace: true,
    };
    let a = run_with(&handle(&cfg, Strategy::Pirs, 2), opts).unwrap();
    let b = run_with(&handle(&cfg, Strategy::Pirs, 2), opts).unwrap();
    assert_eq!(a.stats.trace, b.stats.trace);
    assert_eq!(a.report, b.report);
    assert!(a.stats.trace.windows(2).all(|w| w[0].0 <= w[1].0));
}

#[test]
fn repetitions_differ() {
    let cfg = scenario(20, 300.0);
    let a = run(&handle(&cfg, Strategy::Airs, 0)).unwrap();
    let b = run(&handle(&cfg, Strategy::Airs, 1)).unwrap();
    assert_ne!(a.total_tasks, b.total_tasks);
}

#[test]
fn strategies_see_the_same_arrivals() {
    // Streams do not depend on the strategy and arrivals do not depend on
    // placement, so all three strategies face the same task stream.
    let cfg = scenario(25, 300.0);
    let arrivals: Vec<u64> = Strategy::ALL
        .iter()
        .map(|&s| {
            run_with(&handle(&cfg, s, 3), RunOptions::default())
                .unwrap()
                .stats
                .arrivals
        })
        .collect();
    assert!(arrivals[0] > 0);
    assert!(arrivals.iter().all(|&a| a == arrivals[0]), "{arrivals:?}");
}

fn vehicle(id: usize, busy: f64, give: f64) -> VehicleState {
    let mut v = VehicleState::new(id, 2.0, Willingness::new(give), 0);
    v.busy_gips = busy;
    v
}

proptest! {
    #[test]
    fn pirs_never_takes_more_than_airs(
        owner_busy in 0.0..2.0f64,
        helper_busy in 0.0..2.0f64,
        owner_give in 0.0..=1.0f64,
        helper_give in 0.0..=1.0f64,
    ) {
        let owner = vehicle(0, owner_busy, owner_give);
        let helper = vehicle(1, helper_busy, helper_give);
        let c = pirs_contribution(&owner, &helper);
        prop_assert!(c >= 0.0);
        prop_assert!(c <= helper.spare() + 1e-12);
    }
}
