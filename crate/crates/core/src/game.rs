//! Cooperation game between a task owner and its neighbours.
//!
//! Risk and action probability vectors, the bilinear action reward, the
//! expected utility used to rank helpers, bargaining power from
//! get-willingness, the closed-form asymmetric Nash bargaining split, and the
//! willingness learning rule.

use alloc::vec::Vec;
use core::fmt;

/// Index of the "give resources" action.
pub const GIVE: usize = 0;
/// Index of the "get resources" action.
pub const GET: usize = 1;

pub type Matrix2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GameError {
    /// Total capacity of zero makes the usage ratio undefined.
    DegenerateCapacity,
    /// Pool is smaller than the parties' combined usage.
    InfeasibleBargain { phi: f64, busy: f64 },
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::DegenerateCapacity => write!(f, "total capacity is zero"),
            GameError::InfeasibleBargain { phi, busy } => {
                write!(f, "infeasible bargain: pool {phi} < combined usage {busy}")
            }
        }
    }
}

impl core::error::Error for GameError {}

/// Probability of being in the risky (`[0]`) and safe (`[1]`) state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskVector {
    pub p_risky: f64,
    pub p_safe: f64,
}

impl RiskVector {
    pub fn as_array(&self) -> [f64; 2] {
        [self.p_risky, self.p_safe]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionProbability {
    pub p_give: f64,
    pub p_get: f64,
}

impl ActionProbability {
    pub const GIVE: Self = Self {
        p_give: 1.0,
        p_get: 0.0,
    };
    pub const GET: Self = Self {
        p_give: 0.0,
        p_get: 1.0,
    };

    pub fn new(p_give: f64, p_get: f64) -> Self {
        Self { p_give, p_get }
    }

    /// The pure strategy playing `action`.
    pub fn pure(action: usize) -> Self {
        if action == GIVE {
            Self::GIVE
        } else {
            Self::GET
        }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.p_give, self.p_get]
    }
}

/// Willingness to give (`give`) and to get (`get`); always on the simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Willingness {
    pub give: f64,
    pub get: f64,
}

impl Willingness {
    pub fn new(give: f64) -> Self {
        Self {
            give,
            get: 1.0 - give,
        }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.give, self.get]
    }
}

/// Result of one bargain.
#[derive(Debug, Clone, PartialEq)]
pub struct BargainOutcome {
    /// Post-bargain total resource of each party.
    pub allocation: Vec<f64>,
    /// Each party's slice of the surplus.
    pub surplus_shares: Vec<f64>,
    pub lambda: Vec<f64>,
}

/// Risk of running short: usage ratio plus the give-minus-get willingness,
/// clamped into [0, 1].
pub fn risk_vector(
    busy_gips: f64,
    total_gips: f64,
    beta: Willingness,
) -> Result<RiskVector, GameError> {
    if total_gips <= 0.0 {
        return Err(GameError::DegenerateCapacity);
    }
    let raw = busy_gips / total_gips + (beta.give - beta.get);
    let p_risky = raw.clamp(0.0, 1.0);
    Ok(RiskVector {
        p_risky,
        p_safe: 1.0 - p_risky,
    })
}

/// `own · ma · otherᵀ`.
pub fn action_reward(own: ActionProbability, ma: &Matrix2, other: ActionProbability) -> f64 {
    let o = own.as_array();
    let c = other.as_array();
    let mut j = 0.0;
    for r in 0..2 {
        for k in 0..2 {
            j += o[r] * ma[r][k] * c[k];
        }
    }
    j
}

/// Expected utility of taking `own_action`: the state weights in that row of
/// `mtheta`, averaged under `risk`, times the action reward.
pub fn utility(risk: RiskVector, mtheta: &Matrix2, reward: f64, own_action: usize) -> f64 {
    let row = &mtheta[own_action];
    (row[0] * risk.p_risky + row[1] * risk.p_safe) * reward
}

/// Bargaining power of party `i` against `j`. Both zero splits evenly.
pub fn bargaining_power(beta_get_i: f64, beta_get_j: f64) -> f64 {
    let sum = beta_get_i + beta_get_j;
    if sum > 0.0 {
        beta_get_i / sum
    } else {
        0.5
    }
}

/// Asymmetric Nash bargaining over a pool `phi`: every party keeps its usage
/// and receives its power-weighted share of the surplus.
pub fn anbs_allocate(busy: &[f64], phi: f64, lambda: &[f64]) -> Result<BargainOutcome, GameError> {
    debug_assert_eq!(busy.len(), lambda.len());
    let total_busy: f64 = busy.iter().sum();
    if phi < total_busy {
        return Err(GameError::InfeasibleBargain {
            phi,
            busy: total_busy,
        });
    }
    let surplus = phi - total_busy;
    let surplus_shares: Vec<f64> = lambda.iter().map(|l| l * surplus).collect();
    let mut allocation: Vec<f64> = busy
        .iter()
        .zip(&surplus_shares)
        .map(|(b, s)| b + s)
        .collect();
    // Put rounding residue on the last party so the pool is matched exactly.
    if let Some((last, head)) = allocation.split_last_mut() {
        let rest: f64 = head.iter().sum();
        *last = (phi - rest).max(busy[busy.len() - 1]);
    }
    Ok(BargainOutcome {
        allocation,
        surplus_shares,
        lambda: lambda.to_vec(),
    })
}

/// One willingness learning step.
///
/// `reward_now[m]` and `reward_prev[m]` are the rewards of action `m` in the
/// current and the previous cooperation round.
pub fn update_willingness(
    beta_prev: Willingness,
    reward_now: [f64; 2],
    reward_prev: [f64; 2],
    alpha: f64,
) -> Willingness {
    let dj = [
        reward_now[0] - reward_prev[0],
        reward_now[1] - reward_prev[1],
    ];
    let denom = dj[0] + dj[1];
    let signal = denom > 0.0 && dj.iter().all(|d| d.is_finite());
    let prev = beta_prev.as_array();
    let mut raw = [0.0; 2];
    for m in 0..2 {
        let delta = if signal { dj[m] / denom } else { 0.0 };
        raw[m] = (prev[m] + alpha * delta).clamp(0.0, 1.0);
    }
    let sum = raw[0] + raw[1];
    if sum > 0.0 && sum.is_finite() {
        Willingness {
            give: raw[0] / sum,
            get: raw[1] / sum,
        }
    } else {
        // Both components clamped to zero: no preference survives.
        Willingness {
            give: 0.5,
            get: 0.5,
        }
    }
}
