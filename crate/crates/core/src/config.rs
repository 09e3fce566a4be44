//! Scenario configuration: application profiles, link rates, capacities,
//! game parameters and the location map.
//!
//! Every struct deserializes with `#[serde(default)]`, so a config file only
//! needs to mention the fields it overrides. Units are fixed crate-wide:
//! 1 KB = 1000 bytes = 8000 bits, 1 Mbps = 10^6 bit/s, 1 GI = 10^9
//! instructions, 1 GIPS = 10^9 instructions/s.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// One application class run by a share of the vehicles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppProfile {
    pub name: String,
    /// Fraction of vehicles running this application, in (0, 1].
    pub usage_pct: f64,
    /// Mean of the exponential inter-arrival time during the active phase.
    pub interarrival_mean_s: f64,
    /// Maximum tolerable delay of one task.
    pub delay_tolerance_s: f64,
    pub active_period_s: f64,
    pub idle_period_s: f64,
    pub upload_kb: f64,
    pub download_kb: f64,
    /// Mean of the exponential task length.
    pub task_length_mean_gi: f64,
    /// CPU overhead on an edge VM while one task of this app runs, in percent.
    pub vm_utilization_pct: f64,
}

impl AppProfile {
    #[allow(clippy::too_many_arguments)]
    fn new(
        name: &str,
        usage_pct: f64,
        interarrival_mean_s: f64,
        delay_tolerance_s: f64,
        active_period_s: f64,
        idle_period_s: f64,
        upload_kb: f64,
        download_kb: f64,
        task_length_mean_gi: f64,
        vm_utilization_pct: f64,
    ) -> Self {
        Self {
            name: name.into(),
            usage_pct,
            interarrival_mean_s,
            delay_tolerance_s,
            active_period_s,
            idle_period_s,
            upload_kb,
            download_kb,
            task_length_mean_gi,
            vm_utilization_pct,
        }
    }

    /// Length of one active+idle cycle.
    pub fn cycle_s(&self) -> f64 {
        self.active_period_s + self.idle_period_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkConfig {
    pub v2v_rate_mbps: f64,
    pub v2i_rate_mbps: f64,
    pub wan_rate_mbps: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            v2v_rate_mbps: 10.0,
            v2i_rate_mbps: 250.0,
            wan_rate_mbps: 1000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComputeConfig {
    pub vehicle_gips: f64,
    pub edge_gips: f64,
    pub cloud_gips: f64,
    pub edge_utilization_threshold_pct: f64,
    /// Upper bound on helpers in one coalition.
    pub max_v2v_connections: usize,
}

impl Default for ComputeConfig {
    fn default() -> Self {
        Self {
            vehicle_gips: 2.0,
            edge_gips: 160.0,
            cloud_gips: 1600.0,
            edge_utilization_threshold_pct: 80.0,
            max_v2v_connections: 6,
        }
    }
}

/// Payoff matrices and willingness-learning parameters.
///
/// Matrix rows index the vehicle's own action (give, get). Columns of `ma`
/// index the counterpart's action; columns of `mtheta` index the state
/// (risky, safe).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameConfig {
    pub ma: [[f64; 2]; 2],
    pub mtheta: [[f64; 2]; 2],
    pub alpha: f64,
    pub initial_beta_give: f64,
    pub candidate_utility_min: f64,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            ma: [[0.25, 1.0], [1.0, 0.0]],
            mtheta: [[0.1, 1.0], [1.0, 0.5]],
            alpha: 0.1,
            initial_beta_give: 0.5,
            candidate_utility_min: 0.0,
        }
    }
}

/// Location types: `location_counts[k]` locations of type `k + 1`, each with
/// mean dwell `dwell_mean_s[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MobilityConfig {
    pub location_counts: Vec<u32>,
    pub dwell_mean_s: Vec<f64>,
}

impl Default for MobilityConfig {
    fn default() -> Self {
        Self {
            location_counts: vec![1, 1, 2],
            dwell_mean_s: vec![30.0, 20.0, 10.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub sim_duration_s: f64,
    pub n_vehicles: usize,
    pub warmup_s: f64,
    pub apps: Vec<AppProfile>,
    pub net: NetworkConfig,
    pub compute: ComputeConfig,
    pub game: GameConfig,
    pub mobility: MobilityConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        default_scenario()
    }
}

/// The reference configuration: four application classes, 10/250/1000 Mbps
/// links, 2/160/1600 GIPS, six V2V connections, locations 1/1/2 with mean
/// dwell 30/20/10 s, 30 simulated minutes.
pub fn default_scenario() -> ScenarioConfig {
    ScenarioConfig {
        sim_duration_s: 1800.0,
        n_vehicles: 40,
        warmup_s: 0.0,
        apps: default_apps(),
        net: NetworkConfig::default(),
        compute: ComputeConfig::default(),
        game: GameConfig::default(),
        mobility: MobilityConfig::default(),
    }
}

pub fn default_apps() -> Vec<AppProfile> {
    vec![
        AppProfile::new(
            "Augmented Reality",
            0.30,
            1.0,
            5.0,
            40.0,
            5.0,
            1500.0,
            25.0,
            9.0,
            6.0,
        ),
        AppProfile::new(
            "Health App",
            0.20,
            1.0,
            8.0,
            45.0,
            90.0,
            1250.0,
            20.0,
            3.0,
            2.0,
        ),
        AppProfile::new(
            "Compute Intensive",
            0.20,
            10.0,
            8.0,
            60.0,
            120.0,
            2500.0,
            200.0,
            45.0,
            30.0,
        ),
        AppProfile::new(
            "Infotainment App",
            0.30,
            5.0,
            1.0,
            30.0,
            45.0,
            2500.0,
            200.0,
            45.0,
            30.0,
        ),
    ]
}

impl ScenarioConfig {
    pub fn app(&self, name: &str) -> Option<&AppProfile> {
        self.apps.iter().find(|a| a.name == name)
    }

    /// Returns every violated invariant; empty means the config is usable.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut check = |ok: bool, msg: String| {
            if !ok {
                v.push(msg);
            }
        };

        check(
            self.sim_duration_s.is_finite() && self.warmup_s >= 0.0,
            format!("warmup_s must be >= 0 (got {})", self.warmup_s),
        );
        check(
            self.sim_duration_s > self.warmup_s
                || (self.sim_duration_s == 0.0 && self.warmup_s == 0.0),
            format!(
                "sim_duration_s must exceed warmup_s (got {} <= {})",
                self.sim_duration_s, self.warmup_s
            ),
        );
        check(self.n_vehicles >= 1, "n_vehicles must be >= 1".into());

        check(!self.apps.is_empty(), "apps must not be empty".into());
        for a in &self.apps {
            let positive = [
                ("interarrival_mean_s", a.interarrival_mean_s),
                ("delay_tolerance_s", a.delay_tolerance_s),
                ("active_period_s", a.active_period_s),
                ("idle_period_s", a.idle_period_s),
                ("upload_kb", a.upload_kb),
                ("download_kb", a.download_kb),
                ("task_length_mean_gi", a.task_length_mean_gi),
            ];
            for (field, x) in positive {
                check(
                    x.is_finite() && x > 0.0,
                    format!("apps[{}].{field} must be > 0 (got {x})", a.name),
                );
            }
            check(
                a.usage_pct > 0.0 && a.usage_pct <= 1.0,
                format!(
                    "apps[{}].usage_pct must be in (0,1] (got {})",
                    a.name, a.usage_pct
                ),
            );
            check(
                a.vm_utilization_pct > 0.0 && a.vm_utilization_pct <= 100.0,
                format!(
                    "apps[{}].vm_utilization_pct must be in (0,100] (got {})",
                    a.name, a.vm_utilization_pct
                ),
            );
        }
        let usage: f64 = self.apps.iter().map(|a| a.usage_pct).sum();
        check(
            self.apps.is_empty() || (usage - 1.0).abs() <= 1e-9,
            format!("usage_pct sum must be 1 (got {usage})"),
        );

        for (field, x) in [
            ("net.v2v_rate_mbps", self.net.v2v_rate_mbps),
            ("net.v2i_rate_mbps", self.net.v2i_rate_mbps),
            ("net.wan_rate_mbps", self.net.wan_rate_mbps),
            ("compute.vehicle_gips", self.compute.vehicle_gips),
            ("compute.edge_gips", self.compute.edge_gips),
            ("compute.cloud_gips", self.compute.cloud_gips),
        ] {
            check(
                x > 0.0 && !x.is_nan(),
                format!("{field} must be > 0 (got {x})"),
            );
        }
        let th = self.compute.edge_utilization_threshold_pct;
        check(
            th > 0.0 && th <= 100.0,
            format!("compute.edge_utilization_threshold_pct must be in (0,100] (got {th})"),
        );
        check(
            self.compute.max_v2v_connections >= 1,
            "compute.max_v2v_connections must be >= 1".into(),
        );

        let g = &self.game;
        check(
            g.alpha > 0.0 && g.alpha < 1.0,
            format!("alpha must be in open interval (0,1) (got {})", g.alpha),
        );
        check(
            (0.0..=1.0).contains(&g.initial_beta_give),
            format!(
                "initial_beta_give must be in [0,1] (got {})",
                g.initial_beta_give
            ),
        );
        check(
            g.ma.iter()
                .chain(g.mtheta.iter())
                .flatten()
                .all(|x| x.is_finite()),
            "payoff matrix entries must be finite".into(),
        );
        check(
            !g.candidate_utility_min.is_nan(),
            "candidate_utility_min must not be NaN".into(),
        );

        let m = &self.mobility;
        check(
            m.location_counts.len() == m.dwell_mean_s.len(),
            format!(
                "mobility.location_counts and mobility.dwell_mean_s lengths differ ({} vs {})",
                m.location_counts.len(),
                m.dwell_mean_s.len()
            ),
        );
        let n_loc: u32 = m.location_counts.iter().sum();
        check(
            n_loc >= 2,
            format!("at least 2 locations required (got {n_loc})"),
        );
        for (k, d) in m.dwell_mean_s.iter().enumerate() {
            check(
                d.is_finite() && *d > 0.0,
                format!("mobility.dwell_mean_s[{k}] must be > 0 (got {d})"),
            );
        }
        v
    }
}

/// Free-function form of [`ScenarioConfig::validate`].
pub fn validate(config: &ScenarioConfig) -> Vec<String> {
    config.validate()
}
