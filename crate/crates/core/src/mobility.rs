//! Nomadic mobility over access-point coverage areas.
//!
//! Vehicles sit in one location for an exponentially distributed dwell time
//! and then hop to one of the two ring neighbours.

use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::config::MobilityConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub id: usize,
    /// 1-based location type.
    pub kind: u8,
    pub dwell_mean_s: f64,
}

/// Locations in ring order; location `i` neighbours `i-1` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationMap {
    locations: Vec<Location>,
}

impl LocationMap {
    /// Expands per-type counts in config order: all type-1 locations, then
    /// type 2, and so on.
    pub fn from_config(cfg: &MobilityConfig) -> Self {
        let mut locations = Vec::new();
        for (k, (&count, &mean)) in cfg
            .location_counts
            .iter()
            .zip(&cfg.dwell_mean_s)
            .enumerate()
        {
            for _ in 0..count {
                locations.push(Location {
                    id: locations.len(),
                    kind: (k + 1) as u8,
                    dwell_mean_s: mean,
                });
            }
        }
        Self { locations }
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn location(&self, id: usize) -> &Location {
        &self.locations[id]
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    /// Previous and next location on the ring.
    pub fn neighbors(&self, id: usize) -> (usize, usize) {
        let n = self.locations.len();
        ((id + n - 1) % n, (id + 1) % n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub vehicle_id: usize,
    pub location_id: usize,
    pub dwell_until_s: f64,
}

pub fn sample_dwell<R: Rng + ?Sized>(location: &Location, rng: &mut R) -> f64 {
    let exp = Exp::new(1.0 / location.dwell_mean_s).expect("validated dwell mean");
    // Exp can return exactly 0, which would relocate twice at one instant.
    let d = exp.sample(rng);
    if d > 0.0 {
        d
    } else {
        f64::MIN_POSITIVE
    }
}

/// Uniform placement at time 0, each with its first dwell expiry.
pub fn initial_placement<R: Rng + ?Sized>(
    n_vehicles: usize,
    map: &LocationMap,
    rng: &mut R,
) -> Vec<Placement> {
    (0..n_vehicles)
        .map(|vehicle_id| {
            let location_id = rng.random_range(0..map.len());
            let dwell_until_s = sample_dwell(map.location(location_id), rng);
            Placement {
                vehicle_id,
                location_id,
                dwell_until_s,
            }
        })
        .collect()
}

/// Moves to a ring neighbour chosen uniformly and samples the next dwell.
pub fn relocate<R: Rng + ?Sized>(
    current: &Placement,
    map: &LocationMap,
    now: f64,
    rng: &mut R,
) -> Placement {
    let (prev, next) = map.neighbors(current.location_id);
    let location_id = if prev == next || rng.random_bool(0.5) {
        next
    } else {
        prev
    };
    Placement {
        vehicle_id: current.vehicle_id,
        location_id,
        dwell_until_s: now + sample_dwell(map.location(location_id), rng),
    }
}
