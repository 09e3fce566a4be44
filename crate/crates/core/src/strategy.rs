//! Placement of a freshly generated task under NCS, AIRS or PIRS.
//!
//! All three strategies try the owner's own spare capacity first and fall
//! back to the edge server of the owner's location, or the remote cloud when
//! that server is above its VM utilization threshold. AIRS and PIRS insert a
//! V2V tier in between: co-located vehicles are ranked by their utility for
//! giving, and a temporary coalition pools the owner's spare with what the
//! helpers contribute. AIRS helpers contribute all their spare; PIRS helpers
//! bargain one at a time and contribute only their share of the split.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::compute::{EdgeServerState, VehicleState, EPS};
use crate::config::{GameConfig, ScenarioConfig};
use crate::game::{self, ActionProbability, GET, GIVE};
use crate::netdelay::{self, DelayEstimate};
use crate::workload::{TaskId, TaskSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// No cooperation.
    Ncs,
    /// All idle resource sharing.
    Airs,
    /// Partial idle resource sharing through bargaining.
    Pirs,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Ncs, Strategy::Airs, Strategy::Pirs];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Ncs => "ncs",
            Strategy::Airs => "airs",
            Strategy::Pirs => "pirs",
        }
    }

    pub fn cooperative(self) -> bool {
        self != Strategy::Ncs
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownStrategy;

impl fmt::Display for UnknownStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown strategy (expected ncs, airs or pirs)")
    }
}

impl core::error::Error for UnknownStrategy {}

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ncs" => Ok(Strategy::Ncs),
            "airs" => Ok(Strategy::Airs),
            "pirs" => Ok(Strategy::Pirs),
            _ => Err(UnknownStrategy),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
/// Discriminants index the per-tier arrays in run statistics.
pub enum Tier {
    Local,
    V2V,
    Edge,
    Cloud,
}

impl Tier {
    /// Edge and cloud together form the MEC layer.
    pub fn is_mec(self) -> bool {
        matches!(self, Tier::Edge | Tier::Cloud)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coalition {
    pub task_id: TaskId,
    pub owner_id: usize,
    /// Spare capacity the owner itself puts into the pool.
    pub owner_share_gips: f64,
    /// Contributing helpers in bargaining order.
    pub members: Vec<(usize, f64)>,
    pub pooled_gips: f64,
    pub formed_at_s: f64,
}

impl Coalition {
    fn new(task_id: TaskId, owner_id: usize, owner_share_gips: f64, formed_at_s: f64) -> Self {
        Self {
            task_id,
            owner_id,
            owner_share_gips,
            members: Vec::new(),
            pooled_gips: owner_share_gips,
            formed_at_s,
        }
    }

    fn push(&mut self, vehicle_id: usize, contribution: f64) {
        self.members.push((vehicle_id, contribution));
        self.pooled_gips += contribution;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Placement {
    Local {
        delay: DelayEstimate,
        gips: f64,
    },
    V2V {
        delay: DelayEstimate,
        coalition: Coalition,
    },
    Edge {
        delay: DelayEstimate,
        es_id: usize,
    },
    Cloud {
        delay: DelayEstimate,
    },
    /// No tier met the deadline; `attempted` is the last tier tried.
    Failed {
        attempted: Tier,
        delay: DelayEstimate,
    },
}

impl Placement {
    pub fn tier(&self) -> Option<Tier> {
        match self {
            Placement::Local { .. } => Some(Tier::Local),
            Placement::V2V { .. } => Some(Tier::V2V),
            Placement::Edge { .. } => Some(Tier::Edge),
            Placement::Cloud { .. } => Some(Tier::Cloud),
            Placement::Failed { .. } => None,
        }
    }

    /// Tier the task was sent to, whether or not it can succeed there.
    pub fn target(&self) -> Tier {
        match self {
            Placement::Failed { attempted, .. } => *attempted,
            p => p.tier().expect("non-failed placement has a tier"),
        }
    }

    pub fn delay(&self) -> DelayEstimate {
        match self {
            Placement::Local { delay, .. }
            | Placement::V2V { delay, .. }
            | Placement::Edge { delay, .. }
            | Placement::Cloud { delay }
            | Placement::Failed { delay, .. } => *delay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub vehicle_id: usize,
    pub utility: f64,
    pub spare: f64,
}

/// Utility of `helper` for giving to an owner that gets.
pub fn helper_utility(helper: &VehicleState, game_cfg: &GameConfig) -> f64 {
    let reward = game::action_reward(
        ActionProbability::GIVE,
        &game_cfg.ma,
        ActionProbability::GET,
    );
    match game::risk_vector(helper.busy_gips, helper.total_gips(), helper.beta) {
        Ok(risk) => game::utility(risk, &game_cfg.mtheta, reward, GIVE),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Co-located vehicles with spare capacity, best utility first (ties by
/// ascending id), with entries under `candidate_utility_min` removed.
pub fn build_candidates(
    owner: usize,
    vehicles: &[VehicleState],
    game_cfg: &GameConfig,
) -> Vec<Candidate> {
    let here = vehicles[owner].location_id;
    let mut out: Vec<Candidate> = vehicles
        .iter()
        .filter(|v| v.vehicle_id != owner && v.location_id == here && v.spare() > EPS)
        .map(|v| Candidate {
            vehicle_id: v.vehicle_id,
            utility: helper_utility(v, game_cfg),
            spare: v.spare(),
        })
        .filter(|c| c.utility >= game_cfg.candidate_utility_min)
        .collect();
    sort_candidates(&mut out);
    out
}

pub fn sort_candidates(c: &mut [Candidate]) {
    c.sort_by(|a, b| {
        b.utility
            .total_cmp(&a.utility)
            .then(a.vehicle_id.cmp(&b.vehicle_id))
    });
}

/// Every selected helper hands over all of its spare.
pub fn form_coalition_airs(
    owner: &VehicleState,
    candidates: &[Candidate],
    max_connections: usize,
    task_id: TaskId,
    now: f64,
) -> Coalition {
    let mut c = Coalition::new(task_id, owner.vehicle_id, owner.spare(), now);
    for cand in candidates.iter().take(max_connections) {
        c.push(cand.vehicle_id, cand.spare);
    }
    c
}

/// Helper's contribution in a pairwise bargain: what it gives up from its
/// spare once the pooled surplus is split by bargaining power.
pub fn pirs_contribution(owner: &VehicleState, helper: &VehicleState) -> f64 {
    let lambda_owner = game::bargaining_power(owner.beta.get, helper.beta.get);
    let phi = owner.total_gips() + helper.base_capacity_gips;
    let busy = [owner.busy_gips, helper.busy_gips];
    let helper_spare = helper.spare();
    match game::anbs_allocate(&busy, phi, &[lambda_owner, 1.0 - lambda_owner]) {
        Ok(out) => {
            let helper_keeps = out.allocation[1] - helper.busy_gips;
            (helper_spare - helper_keeps).clamp(0.0, helper_spare)
        }
        Err(_) => 0.0,
    }
}

/// Per-action rewards of a vehicle facing a counterpart that plays `other`.
fn round_rewards(ma: &game::Matrix2, other: ActionProbability) -> [f64; 2] {
    [
        game::action_reward(ActionProbability::GIVE, ma, other),
        game::action_reward(ActionProbability::GET, ma, other),
    ]
}

fn learn(v: &mut VehicleState, now: [f64; 2], alpha: f64) {
    v.beta = game::update_willingness(v.beta, now, v.last_reward, alpha);
    v.last_reward = now;
}

/// Bargains with the candidates in order until `max_connections` helpers
/// contribute. Helpers whose share clamps to zero are skipped and do not use
/// a connection. Both parties of every contributing round update their
/// willingness.
pub fn form_coalition_pirs(
    vehicles: &mut [VehicleState],
    owner: usize,
    candidates: &[Candidate],
    game_cfg: &GameConfig,
    max_connections: usize,
    task_id: TaskId,
    now: f64,
) -> Coalition {
    let mut c = Coalition::new(task_id, owner, vehicles[owner].spare(), now);
    let owner_rewards = round_rewards(&game_cfg.ma, ActionProbability::pure(GIVE));
    let helper_rewards = round_rewards(&game_cfg.ma, ActionProbability::pure(GET));
    for cand in candidates {
        if c.members.len() >= max_connections {
            break;
        }
        let j = cand.vehicle_id;
        let contribution = pirs_contribution(&vehicles[owner], &vehicles[j]);
        if contribution <= EPS {
            continue;
        }
        c.push(j, contribution);
        vehicles[owner].acquired_gips += contribution;
        learn(&mut vehicles[owner], owner_rewards, game_cfg.alpha);
        learn(&mut vehicles[j], helper_rewards, game_cfg.alpha);
    }
    vehicles[owner].acquired_gips = 0.0;
    c
}

/// Read-only view of the world needed to place one task.
pub struct World<'a> {
    pub cfg: &'a ScenarioConfig,
    pub vehicles: &'a mut [VehicleState],
    pub edges: &'a [EdgeServerState],
    /// Edge server serving each location.
    pub edge_of_location: &'a [usize],
}

/// Chooses where `task` runs. Reservations are left to the caller.
pub fn decide(task: &TaskSpec, world: &mut World<'_>, strategy: Strategy, now: f64) -> Placement {
    let cfg = world.cfg;
    let owner = task.owner_vehicle_id;
    let spare = world.vehicles[owner].spare();
    let local = netdelay::local_delay(task.length_gi, spare);
    if local.total_s <= task.d_limit_s {
        return Placement::Local {
            delay: local,
            gips: spare,
        };
    }

    if strategy.cooperative() {
        let candidates = build_candidates(owner, world.vehicles, &cfg.game);
        if !candidates.is_empty() {
            let max = cfg.compute.max_v2v_connections;
            let coalition = match strategy {
                Strategy::Airs => {
                    form_coalition_airs(&world.vehicles[owner], &candidates, max, task.task_id, now)
                }
                _ => form_coalition_pirs(
                    world.vehicles,
                    owner,
                    &candidates,
                    &cfg.game,
                    max,
                    task.task_id,
                    now,
                ),
            };
            if let Ok(delay) = netdelay::v2v_delay(
                &task.payload(),
                coalition.pooled_gips,
                cfg.net.v2v_rate_mbps,
            ) {
                if delay.total_s <= task.d_limit_s && !coalition.members.is_empty() {
                    return Placement::V2V { delay, coalition };
                }
            }
        }
    }

    let es_id = world.edge_of_location[world.vehicles[owner].location_id];
    let vm = cfg.apps[task.app].vm_utilization_pct;
    let (tier, delay) = if world.edges[es_id].admits(vm, cfg.compute.edge_utilization_threshold_pct)
    {
        (
            Tier::Edge,
            netdelay::edge_delay(
                &task.payload(),
                cfg.compute.edge_gips,
                cfg.net.v2i_rate_mbps,
            ),
        )
    } else {
        (
            Tier::Cloud,
            netdelay::cloud_delay(
                &task.payload(),
                cfg.compute.cloud_gips,
                cfg.net.v2i_rate_mbps,
                cfg.net.wan_rate_mbps,
            ),
        )
    };
    if delay.total_s > task.d_limit_s {
        return Placement::Failed {
            attempted: tier,
            delay,
        };
    }
    match tier {
        Tier::Edge => Placement::Edge { delay, es_id },
        _ => Placement::Cloud { delay },
    }
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use crate::config::default_scenario;
    use crate::game::Willingness;
    use alloc::vec;
    use proptest::prelude::*;

    fn fleet(n: usize, loc: usize) -> Vec<VehicleState> {
        (0..n)
            .map(|i| VehicleState::new(i, 2.0, Willingness::new(0.5), loc))
            .collect()
    }

    fn task(app: usize, length_gi: f64, owner: usize) -> TaskSpec {
        let p = &default_scenario().apps[app];
        TaskSpec {
            task_id: 1,
            owner_vehicle_id: owner,
            app,
            created_at_s: 0.0,
            length_gi,
            upload_kb: p.upload_kb,
            download_kb: p.download_kb,
            d_limit_s: p.delay_tolerance_s,
        }
    }

    fn place(t: &TaskSpec, vehicles: &mut [VehicleState], s: Strategy) -> Placement {
        let cfg = default_scenario();
        let edges = vec![EdgeServerState::new(0, 0, 160.0)];
        let mut w = World {
            cfg: &cfg,
            vehicles,
            edges: &edges,
            edge_of_location: &[0],
        };
        decide(t, &mut w, s, 0.0)
    }

    #[test]
    fn strategy_names_roundtrip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>(), Ok(s));
        }
        assert_eq!("PIRS".parse::<Strategy>(), Ok(Strategy::Pirs));
        assert!("greedy".parse::<Strategy>().is_err());
    }

    #[test]
    fn ar_runs_locally_on_idle_vehicle() {
        let mut v = fleet(1, 0);
        match place(&task(0, 9.0, 0), &mut v, Strategy::Ncs) {
            Placement::Local { delay, gips } => {
                assert_eq!(delay.total_s, 4.5);
                assert_eq!(gips, 2.0);
            }
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn infotainment_goes_to_edge() {
        let mut v = fleet(1, 0);
        match place(&task(3, 45.0, 0), &mut v, Strategy::Ncs) {
            Placement::Edge { delay, es_id } => {
                assert_eq!(es_id, 0);
                assert!((delay.total_s - 0.36765).abs() < 1e-12);
            }
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn lone_vehicle_skips_v2v() {
        for s in Strategy::ALL {
            let mut v = fleet(1, 0);
            v[0].busy_gips = 2.0;
            assert!(matches!(
                place(&task(0, 9.0, 0), &mut v, s),
                Placement::Edge { .. }
            ));
        }
    }

    #[test]
    fn busy_owner_with_idle_neighbours_uses_v2v() {
        let mut v = fleet(4, 0);
        v[0].busy_gips = 2.0;
        match place(&task(0, 9.0, 0), &mut v, Strategy::Airs) {
            Placement::V2V { coalition, delay } => {
                assert_eq!(coalition.pooled_gips, 6.0);
                assert_eq!(coalition.members.len(), 3);
                assert!(delay.total_s <= 5.0);
            }
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn congested_edge_sends_to_cloud() {
        let cfg = default_scenario();
        let mut v = fleet(1, 0);
        let mut es = EdgeServerState::new(0, 0, 160.0);
        es.utilization_pct = 60.0;
        let edges = vec![es];
        let mut w = World {
            cfg: &cfg,
            vehicles: &mut v,
            edges: &edges,
            edge_of_location: &[0],
        };
        assert!(matches!(
            decide(&task(3, 45.0, 0), &mut w, Strategy::Ncs, 0.0),
            Placement::Cloud { .. }
        ));
        assert!(matches!(
            decide(&task(0, 30.0, 0), &mut w, Strategy::Ncs, 0.0),
            Placement::Edge { .. }
        ));
    }

    #[test]
    fn oversized_task_fails_at_edge() {
        let mut v = fleet(1, 0);
        match place(&task(3, 200.0, 0), &mut v, Strategy::Ncs) {
            Placement::Failed { attempted, .. } => assert_eq!(attempted, Tier::Edge),
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn candidates_sorted_and_filtered() {
        let cfg = GameConfig::default();
        let mut v = fleet(5, 0);
        v[1].busy_gips = 1.0; // riskier
        v[2].busy_gips = 2.0; // no spare
        v[4].location_id = 1; // elsewhere
        let c = build_candidates(0, &v, &cfg);
        let ids: Vec<usize> = c.iter().map(|c| c.vehicle_id).collect();
        assert_eq!(ids, [3, 1]);
        assert!(c[0].utility > c[1].utility);
    }

    #[test]
    fn sort_contract() {
        let mut c = vec![
            Candidate {
                vehicle_id: 1,
                utility: 0.2,
                spare: 1.0,
            },
            Candidate {
                vehicle_id: 2,
                utility: 0.9,
                spare: 1.0,
            },
            Candidate {
                vehicle_id: 3,
                utility: 0.5,
                spare: 1.0,
            },
            Candidate {
                vehicle_id: 0,
                utility: 0.5,
                spare: 1.0,
            },
        ];
        sort_candidates(&mut c);
        let ids: Vec<usize> = c.iter().map(|c| c.vehicle_id).collect();
        assert_eq!(ids, [2, 0, 3, 1]);
    }

    #[test]
    fn airs_pools_full_spares() {
        let mut v = fleet(3, 0);
        v[0].busy_gips = 2.0;
        let cands = build_candidates(0, &v, &GameConfig::default());
        let c = form_coalition_airs(&v[0], &cands, 6, 1, 0.0);
        assert_eq!(c.pooled_gips, 4.0);

        let many = fleet(9, 0);
        let cands = build_candidates(0, &many, &GameConfig::default());
        assert_eq!(cands.len(), 8);
        assert_eq!(
            form_coalition_airs(&many[0], &cands, 6, 1, 0.0)
                .members
                .len(),
            6
        );

        let mut v = fleet(2, 0);
        v[1].busy_gips = 0.5;
        let cands = build_candidates(0, &v, &GameConfig::default());
        assert_eq!(
            form_coalition_airs(&v[0], &cands, 6, 1, 0.0).members,
            vec![(1, 1.5)]
        );
    }

    #[test]
    fn pirs_pairwise_examples() {
        // Owner spare 0, helper spare 2, equal power: helper keeps half.
        let mut v = fleet(2, 0);
        v[0].busy_gips = 2.0;
        assert!((pirs_contribution(&v[0], &v[1]) - 1.0).abs() < 1e-12);

        // Owner spare 2, helper spare 1, owner power 0.25 → negative, clamped.
        let mut v = fleet(2, 0);
        v[1].busy_gips = 1.0;
        v[0].beta = Willingness {
            give: 0.9,
            get: 0.1,
        };
        v[1].beta = Willingness {
            give: 0.7,
            get: 0.3,
        };
        assert!((game::bargaining_power(v[0].beta.get, v[1].beta.get) - 0.25).abs() < 1e-12);
        assert_eq!(pirs_contribution(&v[0], &v[1]), 0.0);

        // Owner holds all the power: helper gives everything.
        let mut v = fleet(2, 0);
        v[0].busy_gips = 2.0;
        v[0].beta = Willingness {
            give: 0.0,
            get: 1.0,
        };
        v[1].beta = Willingness {
            give: 1.0,
            get: 0.0,
        };
        assert_eq!(pirs_contribution(&v[0], &v[1]), 2.0);
    }

    #[test]
    fn pirs_skips_zero_contributors_and_learns() {
        let cfg = GameConfig::default();
        let mut v = fleet(3, 0);
        v[0].busy_gips = 2.0;
        let cands = build_candidates(0, &v, &cfg);
        let c = form_coalition_pirs(&mut v, 0, &cands, &cfg, 6, 1, 0.0);
        assert_eq!(c.members.len(), 2);
        assert!((c.members[0].1 - 1.0).abs() < 1e-12);
        assert!(c.pooled_gips > 1.0 && c.pooled_gips < 4.0);
        assert_eq!(v[0].acquired_gips, 0.0);
        assert!(v[0].beta.get > 0.5, "owner leans toward getting");
        assert!(v[1].beta.give > 0.5, "helper leans toward giving");
        for x in &v {
            assert!((x.beta.give + x.beta.get - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pirs_respects_connection_limit() {
        let cfg = GameConfig::default();
        let mut v = fleet(12, 0);
        v[0].busy_gips = 2.0;
        let cands = build_candidates(0, &v, &cfg);
        let c = form_coalition_pirs(&mut v, 0, &cands, &cfg, 6, 1, 0.0);
        assert!(c.members.len() <= 6);
    }

    #[test]
    fn ranking_invariant_under_payoff_scaling() {
        let mut v = fleet(6, 0);
        for (i, x) in v.iter_mut().enumerate() {
            x.busy_gips = 0.3 * i as f64;
            x.beta = Willingness::new(0.1 * i as f64);
        }
        let base = GameConfig::default();
        let mut scaled = base.clone();
        for row in scaled.ma.iter_mut() {
            for x in row.iter_mut() {
                *x *= 3.7;
            }
        }
        let ids = |g: &GameConfig| -> Vec<usize> {
            build_candidates(0, &v, g)
                .iter()
                .map(|c| c.vehicle_id)
                .collect()
        };
        assert_eq!(ids(&base), ids(&scaled));
    }

    proptest! {
        #[test]
        fn pirs_never_exceeds_airs(ob in 0.0f64..2.0, hb in 0.0f64..1.99, og in 0.0f64..=1.0, hg in 0.0f64..=1.0) {
            let mut v = fleet(2, 0);
            v[0].busy_gips = ob;
            v[1].busy_gips = hb;
            v[0].beta = Willingness::new(1.0 - og);
            v[1].beta = Willingness::new(1.0 - hg);
            let p = pirs_contribution(&v[0], &v[1]);
            prop_assert!(p >= 0.0 && p <= v[1].spare() + 1e-12);
        }
    }
}
