//! Identification policies.
//!
//! Every policy consumes a [`PolicyStreams`] bundle (one stream per arm plus
//! one for tie-breaking decisions) and returns a [`Trace`] recording the
//! recommendation, the stopping time, and per-arm pull counts. Keeping the
//! streams per arm makes runs independent of the order arms are visited
//! within an epoch and lets tests relabel arms together with their streams.

mod baselines;
mod dbcare;
mod schedule;

pub use baselines::{run_guess, run_oracle_two_arm, run_racing, run_sequential_halving};
pub use dbcare::run_dbcare;
pub use schedule::{confidence_radius, delta_mi, delta_sr, nstar_mi, nstar_sr};

use crate::core::{BanditInstance, RngStream};
use crate::{invalid, Result};
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Common types
// ---------------------------------------------------------------------------

/// Which penalty the risk functional charges on the recommendation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskKind {
    /// Misidentification indicator.
    Mi,
    /// Simple regret of the recommended arm.
    Sr,
}

impl RiskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RiskKind::Mi => "mi",
            RiskKind::Sr => "sr",
        }
    }
}

/// Which confidence parameterization DBCARE uses.
///
/// `TwoArm` is the two-arm corollary tuning, `KArm` the general one; by
/// default the policy picks `TwoArm` exactly when the instance has two arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameterization {
    TwoArm,
    KArm,
}

/// Full specification of a policy run.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicySpec {
    Dbcare(DbcareSpec),
    OracleTwoArm(OracleSpec),
    SequentialHalving { budget: u64 },
    Racing(RacingSpec),
    Guess,
}

impl PolicySpec {
    /// Short series label used in CSV output and plots. Never contains a
    /// comma.
    pub fn label(&self) -> String {
        match self {
            PolicySpec::Dbcare(spec) => format!("dbcare:{}", spec.risk_kind.as_str()),
            PolicySpec::OracleTwoArm(spec) => format!("oracle:{}", spec.risk_kind.as_str()),
            PolicySpec::SequentialHalving { budget } => format!("sh:T={budget}"),
            PolicySpec::Racing(spec) => format!("racing:delta={}", spec.delta),
            PolicySpec::Guess => "guess".to_string(),
        }
    }
}

/// DBCARE tuning: which risk the budget schedule targets and the scalar
/// parameters the schedule and confidence level are computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct DbcareSpec {
    pub risk_kind: RiskKind,
    /// Cost per sample `c`.
    pub cost: f64,
    /// Sub-Gaussian proxy the policy assumes.
    pub sigma: f64,
    /// Reward range bound `B`; only the simple-regret tuning reads it.
    pub reward_range_b: f64,
    /// Confidence parameterization; `None` selects by the number of arms.
    pub parameterization: Option<Parameterization>,
    /// Ablation override for the budget schedule: entry `i` is the budget
    /// `N*` used while `i + 2` arms survive.
    pub nstar_override: Option<Vec<f64>>,
    /// Ablation override for the elimination confidence level.
    pub delta_override: Option<f64>,
}

impl DbcareSpec {
    pub fn new(risk_kind: RiskKind, cost: f64, sigma: f64, reward_range_b: f64) -> Self {
        DbcareSpec {
            risk_kind,
            cost,
            sigma,
            reward_range_b,
            parameterization: None,
            nstar_override: None,
            delta_override: None,
        }
    }
}

/// Oracle baseline tuning. The oracle is told the true gap and computes its
/// fixed per-arm sample count from it.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    pub risk_kind: RiskKind,
    pub known_delta: f64,
    pub cost: f64,
    pub sigma: f64,
}

/// Racing (fixed-confidence elimination) tuning.
#[derive(Debug, Clone, PartialEq)]
pub struct RacingSpec {
    /// Target error probability of the elimination radius.
    pub delta: f64,
    pub sigma: f64,
    /// Hard cap on total pulls; the run stops there even if no single arm
    /// has emerged.
    pub safeguard_cap: u64,
}

/// Outcome of a single policy run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub recommended_arm: usize,
    pub stopping_time_tau: u64,
    pub pulls_per_arm: Vec<u64>,
    pub epochs_completed: u64,
}

impl Trace {
    fn check(self) -> Trace {
        debug_assert_eq!(
            self.pulls_per_arm.iter().sum::<u64>(),
            self.stopping_time_tau,
            "stopping time must equal total pulls"
        );
        debug_assert!(self.recommended_arm < self.pulls_per_arm.len());
        self
    }
}

/// Per-run random streams: one decision stream for tie-breaking plus one
/// stream per arm.
#[derive(Debug, Clone)]
pub struct PolicyStreams {
    pub decision: RngStream,
    pub arms: Vec<RngStream>,
}

impl PolicyStreams {
    /// Streams for one replication of one experiment.
    pub fn for_replication(master_seed: u64, replication_index: u64, num_arms: usize) -> Self {
        let base = RngStream::new(master_seed, replication_index);
        Self::from_base(&base, num_arms)
    }

    /// Fork the decision stream and `num_arms` arm streams off a base
    /// stream.
    pub fn from_base(base: &RngStream, num_arms: usize) -> Self {
        PolicyStreams {
            decision: base.substream(0),
            arms: (0..num_arms)
                .map(|k| base.substream(k as u64 + 1))
                .collect(),
        }
    }

    /// Assemble streams explicitly, for ablations and relabeling tests.
    pub fn from_parts(decision: RngStream, arms: Vec<RngStream>) -> Self {
        PolicyStreams { decision, arms }
    }

    fn check_arms(&self, expected: usize) -> Result<()> {
        if self.arms.len() != expected {
            return Err(invalid(format!(
                "policy streams carry {} arm streams but the instance has {expected} arms",
                self.arms.len()
            )));
        }
        Ok(())
    }
}

/// Run any policy described by a [`PolicySpec`].
pub fn run_policy(
    instance: &BanditInstance,
    spec: &PolicySpec,
    streams: &mut PolicyStreams,
) -> Result<Trace> {
    match spec {
        PolicySpec::Dbcare(spec) => run_dbcare(instance, spec, streams),
        PolicySpec::OracleTwoArm(spec) => run_oracle_two_arm(instance, spec, streams),
        PolicySpec::SequentialHalving { budget } => {
            run_sequential_halving(instance, *budget, streams)
        }
        PolicySpec::Racing(spec) => run_racing(instance, spec, streams),
        PolicySpec::Guess => run_guess(instance, streams),
    }
}

/// Index of the empirical maximum among `candidates`, breaking exact ties
/// uniformly at random from the decision stream.
pub(crate) fn argmax_with_ties(
    candidates: &[usize],
    value: impl Fn(usize) -> f64,
    decision: &mut RngStream,
) -> usize {
    debug_assert!(!candidates.is_empty());
    let best = candidates
        .iter()
        .map(|&k| value(k))
        .fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&k| value(k) == best)
        .collect();
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[decision.next_index(tied.len())]
    }
}
