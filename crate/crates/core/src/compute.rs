//! Computational state of vehicles and edge servers, and the reservation
//! ledger that ties every unit of busy capacity to a task.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::game::Willingness;
use crate::workload::TaskId;

/// Slack for comparing sums of reservations.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    pub vehicle_id: usize,
    pub base_capacity_gips: f64,
    /// Sum of live reservations on this vehicle.
    pub busy_gips: f64,
    /// Capacity obtained from helpers; nonzero only while a coalition is
    /// being bargained.
    pub acquired_gips: f64,
    pub beta: Willingness,
    /// Per-action reward of this vehicle's previous cooperation round.
    pub last_reward: [f64; 2],
    pub location_id: usize,
}

impl VehicleState {
    pub fn new(
        vehicle_id: usize,
        base_capacity_gips: f64,
        beta: Willingness,
        location_id: usize,
    ) -> Self {
        Self {
            vehicle_id,
            base_capacity_gips,
            busy_gips: 0.0,
            acquired_gips: 0.0,
            beta,
            last_reward: [0.0; 2],
            location_id,
        }
    }

    /// Real-time total resource.
    pub fn total_gips(&self) -> f64 {
        self.base_capacity_gips + self.acquired_gips
    }

    pub fn spare(&self) -> f64 {
        (self.total_gips() - self.busy_gips).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeServerState {
    pub es_id: usize,
    pub location_id: usize,
    pub capacity_gips: f64,
    pub utilization_pct: f64,
    pub running: BTreeSet<TaskId>,
}

impl EdgeServerState {
    pub fn new(es_id: usize, location_id: usize, capacity_gips: f64) -> Self {
        Self {
            es_id,
            location_id,
            capacity_gips,
            utilization_pct: 0.0,
            running: BTreeSet::new(),
        }
    }

    /// Would one more task of `vm_utilization_pct` stay under `threshold_pct`?
    pub fn admits(&self, vm_utilization_pct: f64, threshold_pct: f64) -> bool {
        self.utilization_pct + vm_utilization_pct < threshold_pct
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Host {
    Vehicle(usize),
    Edge(usize),
}

pub type ReservationId = u64;

#[derive(Debug, Clone, PartialEq)]
pub struct Reservation {
    pub reservation_id: ReservationId,
    pub host: Host,
    /// GIPS on a vehicle, utilization percent on an edge server.
    pub amount: f64,
    pub task_id: TaskId,
    pub created_at_s: f64,
    pub release_at_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComputeError {
    InsufficientCapacity {
        host: Host,
        requested: f64,
        available: f64,
    },
    InvalidReservation {
        amount: f64,
        created_at_s: f64,
        release_at_s: f64,
    },
}

impl fmt::Display for ComputeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComputeError::InsufficientCapacity {
                host,
                requested,
                available,
            } => {
                write!(
                    f,
                    "{host:?}: requested {requested}, only {available} available"
                )
            }
            ComputeError::InvalidReservation {
                amount,
                created_at_s,
                release_at_s,
            } => write!(
                f,
                "invalid reservation of {amount} from {created_at_s} s until {release_at_s} s"
            ),
        }
    }
}

impl core::error::Error for ComputeError {}

/// All vehicles, edge servers and live reservations of one run.
#[derive(Debug, Clone, Default)]
pub struct ComputeState {
    pub vehicles: Vec<VehicleState>,
    pub edges: Vec<EdgeServerState>,
    reservations: BTreeMap<ReservationId, Reservation>,
    vehicle_live: Vec<u32>,
    edge_live: Vec<u32>,
    next_id: ReservationId,
}

impl ComputeState {
    pub fn new(vehicles: Vec<VehicleState>, edges: Vec<EdgeServerState>) -> Self {
        Self {
            vehicle_live: alloc::vec![0; vehicles.len()],
            edge_live: alloc::vec![0; edges.len()],
            vehicles,
            edges,
            reservations: BTreeMap::new(),
            next_id: 0,
        }
    }

    pub fn spare(&self, vehicle: usize) -> f64 {
        self.vehicles[vehicle].spare()
    }

    pub fn live(&self) -> impl Iterator<Item = &Reservation> {
        self.reservations.values()
    }

    pub fn get(&self, id: ReservationId) -> Option<&Reservation> {
        self.reservations.get(&id)
    }

    pub fn reserve(
        &mut self,
        host: Host,
        amount: f64,
        task_id: TaskId,
        now: f64,
        until: f64,
    ) -> Result<ReservationId, ComputeError> {
        if !(amount > 0.0) || !(until > now) {
            return Err(ComputeError::InvalidReservation {
                amount,
                created_at_s: now,
                release_at_s: until,
            });
        }
        let granted = match host {
            Host::Vehicle(v) => {
                let spare = self.vehicles[v].spare();
                if amount > spare + EPS {
                    return Err(ComputeError::InsufficientCapacity {
                        host,
                        requested: amount,
                        available: spare,
                    });
                }
                let granted = amount.min(spare);
                self.vehicles[v].busy_gips += granted;
                self.vehicle_live[v] += 1;
                granted
            }
            Host::Edge(e) => {
                let es = &mut self.edges[e];
                if es.utilization_pct + amount > 100.0 + EPS {
                    return Err(ComputeError::InsufficientCapacity {
                        host,
                        requested: amount,
                        available: 100.0 - es.utilization_pct,
                    });
                }
                es.utilization_pct += amount;
                es.running.insert(task_id);
                self.edge_live[e] += 1;
                amount
            }
        };
        let id = self.next_id;
        self.next_id += 1;
        self.reservations.insert(
            id,
            Reservation {
                reservation_id: id,
                host,
                amount: granted,
                task_id,
                created_at_s: now,
                release_at_s: until,
            },
        );
        Ok(id)
    }

    /// Frees a reservation. Returns `None` if it was already released.
    pub fn release(&mut self, id: ReservationId) -> Option<Reservation> {
        let r = self.reservations.remove(&id)?;
        match r.host {
            Host::Vehicle(v) => {
                self.vehicle_live[v] -= 1;
                let veh = &mut self.vehicles[v];
                veh.busy_gips -= r.amount;
                // Snap float residue once nothing is reserved.
                if self.vehicle_live[v] == 0 || veh.busy_gips < 0.0 {
                    veh.busy_gips = 0.0;
                }
            }
            Host::Edge(e) => {
                self.edge_live[e] -= 1;
                let es = &mut self.edges[e];
                es.utilization_pct -= r.amount;
                es.running.remove(&r.task_id);
                if self.edge_live[e] == 0 || es.utilization_pct < 0.0 {
                    es.utilization_pct = 0.0;
                }
            }
        }
        Some(r)
    }

    /// Accounting violations at time `now`; empty when consistent.
    pub fn check(&self, now: f64) -> Vec<String> {
        let mut out = Vec::new();
        let mut per_vehicle = alloc::vec![0.0; self.vehicles.len()];
        let mut per_edge = alloc::vec![0.0; self.edges.len()];
        let mut edge_tasks: Vec<BTreeSet<TaskId>> = alloc::vec![BTreeSet::new(); self.edges.len()];
        for r in self.reservations.values() {
            if r.release_at_s < now - EPS {
                out.push(format!(
                    "t={now}: reservation {} outlived release time {}",
                    r.reservation_id, r.release_at_s
                ));
            }
            match r.host {
                Host::Vehicle(v) => per_vehicle[v] += r.amount,
                Host::Edge(e) => {
                    per_edge[e] += r.amount;
                    edge_tasks[e].insert(r.task_id);
                }
            }
        }
        for (v, sum) in self.vehicles.iter().zip(per_vehicle) {
            if (v.busy_gips - sum).abs() > EPS {
                out.push(format!(
                    "t={now}: vehicle {} busy {} != reserved {sum}",
                    v.vehicle_id, v.busy_gips
                ));
            }
            if v.busy_gips < 0.0 || v.busy_gips > v.total_gips() + EPS {
                out.push(format!(
                    "t={now}: vehicle {} busy {} outside [0, {}]",
                    v.vehicle_id,
                    v.busy_gips,
                    v.total_gips()
                ));
            }
            if v.acquired_gips != 0.0 {
                out.push(format!(
                    "t={now}: vehicle {} holds {} acquired GIPS outside a bargain",
                    v.vehicle_id, v.acquired_gips
                ));
            }
            if (v.beta.give + v.beta.get - 1.0).abs() > EPS {
                out.push(format!(
                    "t={now}: vehicle {} willingness off simplex",
                    v.vehicle_id
                ));
            }
        }
        for ((es, sum), tasks) in self.edges.iter().zip(per_edge).zip(edge_tasks) {
            if (es.utilization_pct - sum).abs() > EPS {
                out.push(format!(
                    "t={now}: edge {} utilization {} != reserved {sum}",
                    es.es_id, es.utilization_pct
                ));
            }
            if es.running != tasks {
                out.push(format!(
                    "t={now}: edge {} running set out of sync",
                    es.es_id
                ));
            }
        }
        out
    }
}
