//! Task generation: each vehicle runs one application that alternates
//! between fixed-length active and idle phases, emitting a Poisson stream of
//! tasks with exponential lengths while active.

use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::config::AppProfile;

pub type TaskId = u64;

#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    pub task_id: TaskId,
    pub owner_vehicle_id: usize,
    /// Index into the scenario's application list.
    pub app: usize,
    pub created_at_s: f64,
    pub length_gi: f64,
    pub upload_kb: f64,
    pub download_kb: f64,
    pub d_limit_s: f64,
}

impl TaskSpec {
    pub fn payload(&self) -> crate::netdelay::Payload {
        crate::netdelay::Payload {
            length_gi: self.length_gi,
            upload_kb: self.upload_kb,
            download_kb: self.download_kb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Active,
    Idle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppBinding {
    pub vehicle_id: usize,
    pub app: usize,
    pub phase: Phase,
    /// Index of the current active+idle cycle; cycle `k` starts at `k * cycle_s`.
    pub cycle: u64,
    pub phase_until_s: f64,
}

impl AppBinding {
    fn starting(vehicle_id: usize, app: usize, profile: &AppProfile) -> Self {
        Self {
            vehicle_id,
            app,
            phase: Phase::Active,
            cycle: 0,
            phase_until_s: profile.active_period_s,
        }
    }

    /// Flips the phase at its boundary and returns the new boundary.
    pub fn toggle(&mut self, profile: &AppProfile) -> f64 {
        let start = self.cycle as f64 * profile.cycle_s();
        match self.phase {
            Phase::Active => {
                self.phase = Phase::Idle;
                self.phase_until_s = start + profile.cycle_s();
            }
            Phase::Idle => {
                self.phase = Phase::Active;
                self.cycle += 1;
                self.phase_until_s =
                    (self.cycle as f64 * profile.cycle_s()) + profile.active_period_s;
            }
        }
        self.phase_until_s
    }
}

/// Draws one application per vehicle with probability equal to its usage share.
pub fn assign_apps<R: Rng + ?Sized>(
    n_vehicles: usize,
    apps: &[AppProfile],
    rng: &mut R,
) -> Vec<AppBinding> {
    (0..n_vehicles)
        .map(|v| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = apps.len() - 1;
            for (i, a) in apps.iter().enumerate() {
                acc += a.usage_pct;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            AppBinding::starting(v, pick, &apps[pick])
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NextWorkload {
    Arrival(f64),
    /// The candidate arrival fell past the end of the active phase.
    Toggle(f64),
}

/// Next event of an active binding. An idle binding only waits for its toggle.
pub fn next_arrival<R: Rng + ?Sized>(
    binding: &AppBinding,
    profile: &AppProfile,
    now: f64,
    rng: &mut R,
) -> NextWorkload {
    if binding.phase == Phase::Idle {
        return NextWorkload::Toggle(binding.phase_until_s);
    }
    let gap = Exp::new(1.0 / profile.interarrival_mean_s)
        .expect("validated inter-arrival mean")
        .sample(rng);
    let at = now + gap;
    if at >= binding.phase_until_s {
        NextWorkload::Toggle(binding.phase_until_s)
    } else {
        NextWorkload::Arrival(at)
    }
}

pub fn sample_length<R: Rng + ?Sized>(profile: &AppProfile, rng: &mut R) -> f64 {
    let l = Exp::new(1.0 / profile.task_length_mean_gi)
        .expect("validated task length")
        .sample(rng);
    l.max(f64::MIN_POSITIVE)
}

pub fn materialize_task<R: Rng + ?Sized>(
    binding: &AppBinding,
    profile: &AppProfile,
    task_id: TaskId,
    now: f64,
    rng: &mut R,
) -> TaskSpec {
    TaskSpec {
        task_id,
        owner_vehicle_id: binding.vehicle_id,
        app: binding.app,
        created_at_s: now,
        length_gi: sample_length(profile, rng),
        upload_kb: profile.upload_kb,
        download_kb: profile.download_kb,
        d_limit_s: profile.delay_tolerance_s,
    }
}
