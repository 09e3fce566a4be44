use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::queue::{EventQueue, QueueError};
use super::rng::{derive_stream, Purpose, Stream, StreamKey};
use crate::compute::{ComputeState, EdgeServerState, Host, ReservationId, VehicleState};
use crate::config::ScenarioConfig;
use crate::game::Willingness;
use crate::metrics::{MetricsReport, Outcome};
use crate::mobility::{self, LocationMap};
use crate::netdelay::transfer_s;
use crate::strategy::{self, Placement, Strategy, Tier};
use crate::workload::{self, AppBinding, NextWorkload, Phase, TaskId, TaskSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    TaskArrival {
        vehicle: usize,
    },
    PhaseToggle {
        vehicle: usize,
    },
    TaskComplete {
        task: TaskId,
    },
    /// Frees capacity held by a reservation at the end of its compute phase.
    Release {
        reservation: ReservationId,
    },
    Relocate {
        vehicle: usize,
    },
    SimEnd,
}

/// Everything that identifies one run.
#[derive(Debug, Clone, Copy)]
pub struct RunHandle<'a> {
    pub scenario: &'a ScenarioConfig,
    pub strategy: Strategy,
    pub master_seed: u64,
    pub rep_index: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Check reservation accounting after every event.
    pub check_invariants: bool,
    /// Keep the (time, kind) sequence of processed events.
    pub record_trace: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub scheduled: u64,
    pub processed: u64,
    /// Events still queued when the run ended.
    pub discarded: u64,
    /// Events not enqueued because they fall after the end of the run.
    pub beyond_horizon: u64,
    pub arrivals: u64,
    /// Failures at placement time, by the tier that was tried last.
    pub deadline_failures: [u64; 4],
    /// Failures from relocation, by the tier the task ran on.
    pub mobility_failures: [u64; 4],
    pub violations: Vec<String>,
    pub trace: Vec<(f64, EventKind)>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: MetricsReport,
    pub stats: RunStats,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    InvalidConfig(Vec<String>),
    /// Internal inconsistency; the run was aborted.
    Fault(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::InvalidConfig(v) => write!(f, "invalid scenario: {}", v.join("; ")),
            RunError::Fault(m) => write!(f, "simulation fault: {m}"),
        }
    }
}

impl core::error::Error for RunError {}

impl From<QueueError> for RunError {
    fn from(e: QueueError) -> Self {
        RunError::Fault(format!("{e}"))
    }
}

/// Runs one simulation and returns its metrics.
pub fn run(handle: &RunHandle<'_>) -> Result<MetricsReport, RunError> {
    run_with(handle, RunOptions::default()).map(|o| o.report)
}

pub fn run_with(handle: &RunHandle<'_>, opts: RunOptions) -> Result<RunOutput, RunError> {
    let violations = handle.scenario.validate();
    if !violations.is_empty() {
        return Err(RunError::InvalidConfig(violations));
    }
    let mut sim = Sim::new(handle, opts)?;
    sim.run()?;
    Ok(sim.finish())
}

const MAX_REPORTED_VIOLATIONS: usize = 64;

struct InFlight {
    task: TaskSpec,
    target: Tier,
    reservations: Vec<ReservationId>,
    /// Vehicles whose relocation breaks the task.
    linked: Vec<usize>,
}

struct Sim<'a> {
    cfg: &'a ScenarioConfig,
    strategy: Strategy,
    opts: RunOptions,
    map: LocationMap,
    placements: Vec<mobility::Placement>,
    bindings: Vec<AppBinding>,
    compute: ComputeState,
    edge_of_location: Vec<usize>,
    workload_rng: Vec<Stream>,
    mobility_rng: Vec<Stream>,
    queue: EventQueue<EventKind>,
    inflight: BTreeMap<TaskId, InFlight>,
    next_task: TaskId,
    report: MetricsReport,
    stats: RunStats,
}

impl<'a> Sim<'a> {
    fn new(h: &RunHandle<'a>, opts: RunOptions) -> Result<Self, RunError> {
        let cfg = h.scenario;
        let n = cfg.n_vehicles;
        let key = StreamKey {
            master_seed: h.master_seed,
            n_vehicles: n as u64,
            rep_index: h.rep_index,
        };
        let map = LocationMap::from_config(&cfg.mobility);
        let placements =
            mobility::initial_placement(n, &map, &mut derive_stream(key, Purpose::Placement, 0));
        let bindings =
            workload::assign_apps(n, &cfg.apps, &mut derive_stream(key, Purpose::Apps, 0));
        let beta = Willingness::new(cfg.game.initial_beta_give);
        let vehicles = placements
            .iter()
            .map(|p| VehicleState::new(p.vehicle_id, cfg.compute.vehicle_gips, beta, p.location_id))
            .collect();
        let edges = map
            .locations()
            .iter()
            .map(|l| EdgeServerState::new(l.id, l.id, cfg.compute.edge_gips))
            .collect();
        let mut sim = Sim {
            cfg,
            strategy: h.strategy,
            opts,
            edge_of_location: (0..map.len()).collect(),
            map,
            placements,
            bindings,
            compute: ComputeState::new(vehicles, edges),
            workload_rng: (0..n as u64)
                .map(|v| derive_stream(key, Purpose::Workload, v))
                .collect(),
            mobility_rng: (0..n as u64)
                .map(|v| derive_stream(key, Purpose::Mobility, v))
                .collect(),
            queue: EventQueue::new(),
            inflight: BTreeMap::new(),
            next_task: 0,
            report: MetricsReport::new(h.strategy, n, h.rep_index, h.master_seed, cfg.warmup_s),
            stats: RunStats::default(),
        };
        sim.queue.schedule(cfg.sim_duration_s, EventKind::SimEnd)?;
        for v in 0..n {
            let until = sim.placements[v].dwell_until_s;
            sim.schedule(until, EventKind::Relocate { vehicle: v })?;
            sim.schedule_workload(v, 0.0)?;
        }
        Ok(sim)
    }

    fn schedule(&mut self, at: f64, kind: EventKind) -> Result<(), RunError> {
        if at > self.cfg.sim_duration_s {
            self.stats.beyond_horizon += 1;
            return Ok(());
        }
        self.queue.schedule(at, kind)?;
        Ok(())
    }

    fn schedule_workload(&mut self, v: usize, now: f64) -> Result<(), RunError> {
        let profile = &self.cfg.apps[self.bindings[v].app];
        match workload::next_arrival(&self.bindings[v], profile, now, &mut self.workload_rng[v]) {
            NextWorkload::Arrival(t) => self.schedule(t, EventKind::TaskArrival { vehicle: v }),
            NextWorkload::Toggle(t) => self.schedule(t, EventKind::PhaseToggle { vehicle: v }),
        }
    }

    fn run(&mut self) -> Result<(), RunError> {
        while let Some(ev) = self.queue.pop() {
            let now = ev.time_s;
            if self.opts.record_trace {
                self.stats.trace.push((now, ev.kind));
            }
            match ev.kind {
                EventKind::SimEnd => break,
                EventKind::TaskArrival { vehicle } => self.on_arrival(vehicle, now)?,
                EventKind::PhaseToggle { vehicle } => self.on_toggle(vehicle, now)?,
                EventKind::TaskComplete { task } => self.on_complete(task, now)?,
                EventKind::Release { reservation } => {
                    self.compute.release(reservation);
                }
                EventKind::Relocate { vehicle } => self.on_relocate(vehicle, now)?,
            }
            if self.opts.check_invariants {
                self.check(now);
            }
        }
        Ok(())
    }

    fn check(&mut self, now: f64) {
        if self.stats.violations.len() >= MAX_REPORTED_VIOLATIONS {
            return;
        }
        let mut v = self.compute.check(now);
        for (p, veh) in self.placements.iter().zip(&self.compute.vehicles) {
            if p.location_id != veh.location_id || p.location_id >= self.map.len() {
                v.push(format!(
                    "t={now}: vehicle {} location mismatch",
                    veh.vehicle_id
                ));
            }
        }
        for (id, f) in &self.inflight {
            for r in &f.reservations {
                if let Some(res) = self.compute.get(*r) {
                    if res.task_id != *id {
                        v.push(format!("t={now}: reservation {r} attached to wrong task"));
                    }
                }
            }
        }
        self.stats.violations.extend(v);
        self.stats.violations.truncate(MAX_REPORTED_VIOLATIONS);
    }

    fn on_toggle(&mut self, v: usize, now: f64) -> Result<(), RunError> {
        let profile = &self.cfg.apps[self.bindings[v].app];
        let boundary = self.bindings[v].toggle(profile);
        match self.bindings[v].phase {
            Phase::Active => self.schedule_workload(v, now),
            Phase::Idle => self.schedule(boundary, EventKind::PhaseToggle { vehicle: v }),
        }
    }

    fn on_arrival(&mut self, v: usize, now: f64) -> Result<(), RunError> {
        let id = self.next_task;
        self.next_task += 1;
        self.stats.arrivals += 1;
        let profile = &self.cfg.apps[self.bindings[v].app];
        let task = workload::materialize_task(
            &self.bindings[v],
            profile,
            id,
            now,
            &mut self.workload_rng[v],
        );
        let placement = {
            let mut world = strategy::World {
                cfg: self.cfg,
                vehicles: &mut self.compute.vehicles,
                edges: &self.compute.edges,
                edge_of_location: &self.edge_of_location,
            };
            strategy::decide(&task, &mut world, self.strategy, now)
        };
        self.commit(task, placement, now)?;
        self.schedule_workload(v, now)
    }

    fn reserve(
        &mut self,
        host: Host,
        amount: f64,
        task: TaskId,
        now: f64,
        until: f64,
    ) -> Result<ReservationId, RunError> {
        let id = self
            .compute
            .reserve(host, amount, task, now, until)
            .map_err(|e| RunError::Fault(format!("t={now}: task {task}: {e}")))?;
        self.schedule(until, EventKind::Release { reservation: id })?;
        Ok(id)
    }

    fn commit(&mut self, task: TaskSpec, placement: Placement, now: f64) -> Result<(), RunError> {
        let delay = placement.delay();
        let end = now + delay.total_s;
        let owner = task.owner_vehicle_id;
        let id = task.task_id;
        if let Placement::Failed { attempted, .. } = placement {
            if now >= self.cfg.warmup_s {
                self.stats.deadline_failures[attempted as usize] += 1;
            }
            return self.record(&task, attempted, Outcome::Failed, now);
        }
        if !(end > now) {
            // Too short to register on the clock.
            return self.record(&task, placement.target(), Outcome::Success, now);
        }
        let mut reservations = Vec::new();
        let target = placement.target();
        let linked = match placement {
            Placement::Local { gips, .. } => {
                reservations.push(self.reserve(Host::Vehicle(owner), gips, id, now, end)?);
                Vec::new()
            }
            Placement::V2V { coalition, delay } => {
                let compute_end = now
                    + delay.upload_and_compute_s(transfer_s(
                        task.upload_kb,
                        self.cfg.net.v2v_rate_mbps,
                    ));
                let compute_end = compute_end.min(end);
                if coalition.owner_share_gips > 0.0 {
                    reservations.push(self.reserve(
                        Host::Vehicle(owner),
                        coalition.owner_share_gips,
                        id,
                        now,
                        compute_end,
                    )?);
                }
                let mut l = Vec::with_capacity(coalition.members.len() + 1);
                l.push(owner);
                for (helper, amount) in coalition.members {
                    reservations.push(self.reserve(
                        Host::Vehicle(helper),
                        amount,
                        id,
                        now,
                        compute_end,
                    )?);
                    l.push(helper);
                }
                l
            }
            Placement::Edge { es_id, delay } => {
                let upload_s = transfer_s(task.upload_kb, self.cfg.net.v2i_rate_mbps);
                let compute_end = (now + delay.upload_and_compute_s(upload_s)).min(end);
                let vm = self.cfg.apps[task.app].vm_utilization_pct;
                reservations.push(self.reserve(Host::Edge(es_id), vm, id, now, compute_end)?);
                alloc::vec![owner]
            }
            Placement::Cloud { .. } => alloc::vec![owner],
            Placement::Failed { .. } => unreachable!(),
        };
        self.schedule(end, EventKind::TaskComplete { task: id })?;
        self.inflight.insert(
            id,
            InFlight {
                task,
                target,
                reservations,
                linked,
            },
        );
        Ok(())
    }

    fn record(
        &mut self,
        task: &TaskSpec,
        target: Tier,
        outcome: Outcome,
        now: f64,
    ) -> Result<(), RunError> {
        self.report
            .record_outcome(task, target, outcome, now)
            .map_err(|e| RunError::Fault(format!("{e}")))
    }

    fn on_complete(&mut self, task: TaskId, now: f64) -> Result<(), RunError> {
        // Already failed through relocation.
        let Some(f) = self.inflight.remove(&task) else {
            return Ok(());
        };
        for r in &f.reservations {
            self.compute.release(*r);
        }
        self.record(&f.task, f.target, Outcome::Success, now)
    }

    fn on_relocate(&mut self, v: usize, now: f64) -> Result<(), RunError> {
        let broken: Vec<TaskId> = self
            .inflight
            .iter()
            .filter(|(_, f)| f.linked.contains(&v))
            .map(|(id, _)| *id)
            .collect();
        for id in broken {
            let f = self.inflight.remove(&id).expect("collected above");
            for r in &f.reservations {
                self.compute.release(*r);
            }
            if now >= self.cfg.warmup_s {
                self.stats.mobility_failures[f.target as usize] += 1;
            }
            self.record(&f.task, f.target, Outcome::Failed, now)?;
        }
        let next = mobility::relocate(
            &self.placements[v],
            &self.map,
            now,
            &mut self.mobility_rng[v],
        );
        self.placements[v] = next;
        self.compute.vehicles[v].location_id = next.location_id;
        self.schedule(next.dwell_until_s, EventKind::Relocate { vehicle: v })
    }

    fn finish(mut self) -> RunOutput {
        self.stats.discarded = self.queue.len() as u64;
        self.stats.scheduled = self.queue.scheduled();
        self.stats.processed = self.queue.popped();
        RunOutput {
            report: self.report,
            stats: self.stats,
        }
    }
}
