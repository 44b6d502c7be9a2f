//! Monte Carlo risk estimation and declarative sweeps.
//!
//! [`evaluate_risk`] runs a policy for a fixed number of replications, each
//! on its own counter-based stream, and aggregates per-run realized risks in
//! replication order. Aggregation order never depends on scheduling, so the
//! estimate is bitwise identical whether replications run sequentially or on
//! a rayon pool of any width.
//!
//! [`run_sweep`] evaluates a list of policies over a grid of instances
//! described by a [`SweepConfig`] and returns flat [`SweepRow`]s ready for
//! CSV or plotting.

mod csv;
mod drug;
mod plot;

pub use csv::{csv_string, write_csv, CSV_HEADER};
pub use drug::{drug_binary, drug_instances, drug_leveled, DRUG_BINARY_MEANS, DRUG_LEVELED_MEANS};
pub use plot::emit_plot;

use crate::core::{derive_seed, BanditInstance, RngStream};
use crate::policies::{
    run_policy, DbcareSpec, OracleSpec, Parameterization, PolicySpec, PolicyStreams, RacingSpec,
    RiskKind,
};
use crate::{invalid, Result};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const SHUFFLE_TAG: u64 = u64::MAX;

// ---------------------------------------------------------------------------
// Risk evaluation
// ---------------------------------------------------------------------------

/// Risk functional: which penalty to charge plus the per-sample cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskConfig {
    pub risk_kind: RiskKind,
    pub cost: f64,
}

impl RiskConfig {
    pub fn new(risk_kind: RiskKind, cost: f64) -> Result<Self> {
        if cost <= 0.0 || !cost.is_finite() {
            return Err(invalid(format!("cost must be positive, got {cost}")));
        }
        Ok(RiskConfig { risk_kind, cost })
    }
}

/// Aggregated Monte Carlo estimate of a policy's risk on one instance.
///
/// `mean_risk` decomposes exactly as `misid_rate + cost * mean_tau` for the
/// misidentification penalty and `mean_simple_regret + cost * mean_tau` for
/// simple regret; `se_risk` is the sample standard deviation of the per-run
/// realized risk divided by `sqrt(runs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskEstimate {
    pub mean_risk: f64,
    pub se_risk: f64,
    pub mean_tau: f64,
    pub misid_rate: f64,
    pub mean_simple_regret: f64,
    pub runs: u64,
}

/// Evaluation knobs beyond the risk functional itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Re-shuffle arm order per replication from the replication's stream.
    pub shuffle_arms: bool,
    /// Fan replications out over rayon. Ignored (always sequential) when the
    /// `parallel` feature is off.
    pub parallel: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            shuffle_arms: false,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct RunStats {
    misidentified: bool,
    tau: u64,
    regret: f64,
    risk: f64,
}

/// Estimate a policy's risk over `runs` independent replications seeded from
/// `master_seed`.
pub fn evaluate_risk(
    instance: &BanditInstance,
    policy: &PolicySpec,
    risk: &RiskConfig,
    runs: u64,
    master_seed: u64,
) -> Result<RiskEstimate> {
    evaluate_risk_with(
        instance,
        policy,
        risk,
        runs,
        master_seed,
        EvalOptions::default(),
    )
}

/// [`evaluate_risk`] with explicit [`EvalOptions`].
pub fn evaluate_risk_with(
    instance: &BanditInstance,
    policy: &PolicySpec,
    risk: &RiskConfig,
    runs: u64,
    master_seed: u64,
    options: EvalOptions,
) -> Result<RiskEstimate> {
    if runs == 0 {
        return Err(invalid("risk evaluation needs at least one run"));
    }
    if risk.cost <= 0.0 || !risk.cost.is_finite() {
        return Err(invalid(format!("cost must be positive, got {}", risk.cost)));
    }

    let means = instance.means();
    let best_mean = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let replication = |rep: u64| -> Result<RunStats> {
        run_replication(
            instance,
            policy,
            risk,
            &means,
            best_mean,
            master_seed,
            rep,
            options,
        )
    };

    #[cfg(feature = "parallel")]
    let stats: Vec<RunStats> = if options.parallel {
        (0..runs)
            .into_par_iter()
            .map(replication)
            .collect::<Result<Vec<_>>>()?
    } else {
        (0..runs).map(replication).collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let stats: Vec<RunStats> = (0..runs).map(replication).collect::<Result<Vec<_>>>()?;

    Ok(aggregate(&stats, risk))
}

#[allow(clippy::too_many_arguments)]
fn run_replication(
    instance: &BanditInstance,
    policy: &PolicySpec,
    risk: &RiskConfig,
    means: &[f64],
    best_mean: f64,
    master_seed: u64,
    rep: u64,
    options: EvalOptions,
) -> Result<RunStats> {
    let k = instance.num_arms();
    let base = RngStream::new(master_seed, rep);
    let mut streams = PolicyStreams::from_base(&base, k);

    let recommended_mean;
    let trace;
    if options.shuffle_arms {
        let mut shuffle_stream = base.substream(SHUFFLE_TAG);
        let permutation = random_permutation(k, &mut shuffle_stream);
        let shuffled = instance.permuted(&permutation)?;
        trace = run_policy(&shuffled, policy, &mut streams)?;
        recommended_mean = means[permutation[trace.recommended_arm]];
    } else {
        trace = run_policy(instance, policy, &mut streams)?;
        recommended_mean = means[trace.recommended_arm];
    }

    let misidentified = recommended_mean != best_mean;
    let regret = best_mean - recommended_mean;
    let penalty = match risk.risk_kind {
        RiskKind::Mi => {
            if misidentified {
                1.0
            } else {
                0.0
            }
        }
        RiskKind::Sr => regret,
    };
    Ok(RunStats {
        misidentified,
        tau: trace.stopping_time_tau,
        regret,
        risk: penalty + risk.cost * trace.stopping_time_tau as f64,
    })
}

/// Fold per-run statistics in replication order. Means come from plain
/// sums; the risk variance uses Welford's update for stability.
fn aggregate(stats: &[RunStats], risk: &RiskConfig) -> RiskEstimate {
    let runs = stats.len() as f64;
    let mut misid_count = 0u64;
    let mut tau_sum = 0u64;
    let mut regret_sum = 0.0;
    let mut risk_mean = 0.0;
    let mut risk_m2 = 0.0;
    for (i, s) in stats.iter().enumerate() {
        misid_count += s.misidentified as u64;
        tau_sum += s.tau;
        regret_sum += s.regret;
        let delta = s.risk - risk_mean;
        risk_mean += delta / (i + 1) as f64;
        risk_m2 += delta * (s.risk - risk_mean);
    }
    let misid_rate = misid_count as f64 / runs;
    let mean_tau = tau_sum as f64 / runs;
    let mean_simple_regret = regret_sum / runs;
    let mean_risk = match risk.risk_kind {
        RiskKind::Mi => misid_rate + risk.cost * mean_tau,
        RiskKind::Sr => mean_simple_regret + risk.cost * mean_tau,
    };
    let se_risk = if stats.len() > 1 {
        (risk_m2 / (runs - 1.0)).sqrt() / runs.sqrt()
    } else {
        0.0
    };
    RiskEstimate {
        mean_risk,
        se_risk,
        mean_tau,
        misid_rate,
        mean_simple_regret,
        runs: stats.len() as u64,
    }
}

/// Fisher-Yates permutation of `0..k` drawn from `stream`.
fn random_permutation(k: usize, stream: &mut RngStream) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, stream.next_index(i + 1));
    }
    perm
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Experiment family a sweep walks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// Two Gaussian arms; the grid is over the gap.
    TwoArmGaussian,
    /// Two Bernoulli arms; the grid is over the gap.
    TwoArmBernoulli,
    /// One arm at `delta`, the rest at zero; the grid is over `delta`.
    OneSparse,
    /// Gaps rising linearly from `delta2` to `2 delta2`; the grid is over
    /// `delta2`.
    LinearDecay,
    /// Five published response rates as Bernoulli arms; the grid is over the
    /// sampling cost.
    DrugBinary,
    /// Five published mean scores as leveled-outcome arms; the grid is over
    /// the sampling cost.
    DrugLeveled,
}

impl Setting {
    pub fn as_str(self) -> &'static str {
        match self {
            Setting::TwoArmGaussian => "two_arm_gaussian",
            Setting::TwoArmBernoulli => "two_arm_bernoulli",
            Setting::OneSparse => "one_sparse",
            Setting::LinearDecay => "linear_decay",
            Setting::DrugBinary => "drug_binary",
            Setting::DrugLeveled => "drug_leveled",
        }
    }

    /// Whether the grid variable is the sampling cost rather than a gap.
    pub fn grid_is_cost(self) -> bool {
        matches!(self, Setting::DrugBinary | Setting::DrugLeveled)
    }

    fn shuffles_arms(self) -> bool {
        matches!(self, Setting::DrugBinary | Setting::DrugLeveled)
    }
}

/// Grid of sweep points: either explicit values or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Points(Vec<f64>),
    Range(GridRange),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub scale: GridScale,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Linear,
    Log,
}

impl GridSpec {
    /// Expand to concrete grid values.
    pub fn materialize(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Points(values) => {
                if values.is_empty() {
                    return Err(invalid("grid needs at least one point"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("grid points must be finite"));
                }
                Ok(values.clone())
            }
            GridSpec::Range(range) => {
                if range.points == 0 {
                    return Err(invalid("grid needs at least one point"));
                }
                if !range.lo.is_finite() || !range.hi.is_finite() || range.lo > range.hi {
                    return Err(invalid(format!(
                        "grid range [{}, {}] is not ordered",
                        range.lo, range.hi
                    )));
                }
                if range.points == 1 {
                    return Ok(vec![range.lo]);
                }
                let n = range.points;
                match range.scale {
                    GridScale::Linear => Ok((0..n)
                        .map(|i| range.lo + (range.hi - range.lo) * i as f64 / (n - 1) as f64)
                        .collect()),
                    GridScale::Log => {
                        if range.lo <= 0.0 || range.lo.is_nan() {
                            return Err(invalid("log grids need positive endpoints"));
                        }
                        let (llo, lhi) = (range.lo.ln(), range.hi.ln());
                        Ok((0..n)
                            .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
                            .collect())
                    }
                }
            }
        }
    }
}

/// Declarative policy entry in a sweep; scalars the policy shares with the
/// sweep (cost, sigma, the true gap for the oracle) are filled in per grid
/// point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicyConfig {
    Dbcare {
        risk: RiskKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parameterization: Option<Parameterization>,
    },
    Oracle {
        risk: RiskKind,
    },
    SequentialHalving {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        budget: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        budget_per_arm: Option<u64>,
    },
    Racing {
        delta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        safeguard_cap: Option<u64>,
    },
    Guess,
}

/// One full experiment grid: a setting, a risk functional, the grid, and
/// the policies to race over it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub setting: Setting,
    pub risk: RiskKind,
    pub grid: GridSpec,
    /// Arm count for the K-arm settings; two-arm and drug settings fix it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_arms: Option<usize>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Override for the reward range bound `B`; defaults to the instance's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reward_range_b: Option<f64>,
    /// Per-sample cost; required unless the setting grids over the cost.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
    #[serde(default = "default_runs")]
    pub runs: u64,
    pub master_seed: u64,
    pub policies: Vec<PolicyConfig>,
}

fn default_sigma() -> f64 {
    1.0
}

fn default_runs() -> u64 {
    1000
}

/// One CSV row of a sweep: a (grid point, policy) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub setting: Setting,
    pub policy: String,
    pub grid_value: f64,
    pub num_arms: usize,
    pub runs: u64,
    pub mean_risk: f64,
    pub se_risk: f64,
    pub mean_tau: f64,
    pub misid_rate: f64,
    pub mean_simple_regret: f64,
}

/// Run every (grid point, policy) cell of a sweep. Rows come back in grid
/// order, policies in listed order within each point.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.policies.is_empty() {
        return Err(invalid("a sweep needs at least one policy"));
    }
    if config.runs == 0 {
        return Err(invalid("a sweep needs at least one run per cell"));
    }
    let grid = config.grid.materialize()?;
    let mut rows = Vec::with_capacity(grid.len() * config.policies.len());
    for (grid_index, &grid_value) in grid.iter().enumerate() {
        let instance = build_instance(config, grid_value)?;
        let cost = if config.setting.grid_is_cost() {
            grid_value
        } else {
            config
                .cost
                .ok_or_else(|| invalid("this setting grids over a gap, so `cost` must be set"))?
        };
        let risk = RiskConfig::new(config.risk, cost)?;
        for (policy_index, policy_config) in config.policies.iter().enumerate() {
            let policy = resolve_policy(policy_config, &instance, cost)?;
            let seed = derive_seed(
                config.master_seed,
                &[config.risk as u64, grid_index as u64, policy_index as u64],
            );
            let options = EvalOptions {
                shuffle_arms: config.setting.shuffles_arms(),
                ..EvalOptions::default()
            };
            let estimate =
                evaluate_risk_with(&instance, &policy, &risk, config.runs, seed, options)?;
            rows.push(SweepRow {
                setting: config.setting,
                policy: policy.label(),
                grid_value,
                num_arms: instance.num_arms(),
                runs: estimate.runs,
                mean_risk: estimate.mean_risk,
                se_risk: estimate.se_risk,
                mean_tau: estimate.mean_tau,
                misid_rate: estimate.misid_rate,
                mean_simple_regret: estimate.mean_simple_regret,
            });
        }
    }
    Ok(rows)
}

fn build_instance(config: &SweepConfig, grid_value: f64) -> Result<BanditInstance> {
    let instance = match config.setting {
        Setting::TwoArmGaussian => BanditInstance::gaussian_two_arm(grid_value, config.sigma)?,
        Setting::TwoArmBernoulli => BanditInstance::bernoulli_two_arm(grid_value)?,
        Setting::OneSparse => {
            let k = require_k(config)?;
            BanditInstance::one_sparse(k, grid_value, config.sigma)?
        }
        Setting::LinearDecay => {
            let k = require_k(config)?;
            BanditInstance::linear_decay(k, grid_value, config.sigma)?
        }
        Setting::DrugBinary => drug_binary(),
        Setting::DrugLeveled => drug_leveled(),
    };
    match config.reward_range_b {
        Some(b) => instance.with_reward_range(b),
        None => Ok(instance),
    }
}

fn require_k(config: &SweepConfig) -> Result<usize> {
    config.num_arms.ok_or_else(|| {
        invalid(format!(
            "setting {} needs `num_arms`",
            config.setting.as_str()
        ))
    })
}

/// Turn a declarative policy entry into a concrete spec for one instance
/// and cost level.
pub fn resolve_policy(
    config: &PolicyConfig,
    instance: &BanditInstance,
    cost: f64,
) -> Result<PolicySpec> {
    match config {
        PolicyConfig::Dbcare {
            risk,
            parameterization,
        } => {
            let mut spec =
                DbcareSpec::new(*risk, cost, instance.sigma(), instance.reward_range_b());
            spec.parameterization = *parameterization;
            Ok(PolicySpec::Dbcare(spec))
        }
        PolicyConfig::Oracle { risk } => {
            if instance.num_arms() != 2 {
                return Err(invalid(
                    "the oracle baseline is two-arm only; drop it from K-arm sweeps",
                ));
            }
            Ok(PolicySpec::OracleTwoArm(OracleSpec {
                risk_kind: *risk,
                known_delta: instance.gap_profile().delta2(),
                cost,
                sigma: instance.sigma(),
            }))
        }
        PolicyConfig::SequentialHalving {
            budget,
            budget_per_arm,
        } => {
            let budget = match (budget, budget_per_arm) {
                (Some(t), None) => *t,
                (None, Some(per)) => per * instance.num_arms() as u64,
                _ => {
                    return Err(invalid(
                        "sequential halving needs exactly one of `budget` or `budget_per_arm`",
                    ))
                }
            };
            Ok(PolicySpec::SequentialHalving { budget })
        }
        PolicyConfig::Racing {
            delta,
            safeguard_cap,
        } => {
            let cap = match safeguard_cap {
                Some(cap) => *cap,
                None => (10.0 / cost).ceil() as u64,
            };
            Ok(PolicySpec::Racing(RacingSpec {
                delta: *delta,
                sigma: instance.sigma(),
                safeguard_cap: cap,
            }))
        }
        PolicyConfig::Guess => Ok(PolicySpec::Guess),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guess_risk_is_exact_in_tau_and_close_in_rate() {
        let instance = BanditInstance::gaussian_two_arm(1.0, 1.0).unwrap();
        let risk = RiskConfig::new(RiskKind::Mi, 1e-4).unwrap();
        let estimate = evaluate_risk(&instance, &PolicySpec::Guess, &risk, 10_000, 91).unwrap();
        assert_eq!(estimate.mean_tau, 0.0);
        assert!(
            (estimate.mean_risk - 0.5).abs() < 0.015,
            "{}",
            estimate.mean_risk
        );
        assert_eq!(estimate.mean_risk, estimate.misid_rate);
    }

    #[test]
    fn guess_simple_regret_matches_uniform_choice() {
        let instance = BanditInstance::gaussian_two_arm(1.0, 1.0).unwrap();
        let risk = RiskConfig::new(RiskKind::Sr, 1e-4).unwrap();
        let estimate = evaluate_risk(&instance, &PolicySpec::Guess, &risk, 10_000, 92).unwrap();
        assert_eq!(estimate.mean_tau, 0.0);
        assert!((estimate.mean_simple_regret - 0.5).abs() < 0.02);
        assert_eq!(estimate.mean_risk, estimate.mean_simple_regret);
    }

    #[test]
    fn halving_tau_is_deterministic() {
        let instance = BanditInstance::gaussian_two_arm(0.5, 1.0).unwrap();
        let risk = RiskConfig::new(RiskKind::Mi, 1e-4).unwrap();
        let policy = PolicySpec::SequentialHalving { budget: 10 };
        let estimate = evaluate_risk(&instance, &policy, &risk, 500, 93).unwrap();
        assert_eq!(estimate.mean_tau, 10.0);
    }

    #[test]
    fn risk_decomposition_is_exact() {
        let instance = BanditInstance::one_sparse(4, 0.6, 1.0).unwrap();
        let risk = RiskConfig::new(RiskKind::Mi, 2e-3).unwrap();
        let policy = PolicySpec::Dbcare(DbcareSpec::new(RiskKind::Mi, 2e-3, 1.0, 1.0));
        let estimate = evaluate_risk(&instance, &policy, &risk, 400, 94).unwrap();
        assert_eq!(
            estimate.mean_risk,
            estimate.misid_rate + 2e-3 * estimate.mean_tau
        );
        assert!(estimate.se_risk > 0.0);
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let instance = BanditInstance::one_sparse(4, 0.6, 1.0).unwrap();
        let risk = RiskConfig::new(RiskKind::Mi, 2e-3).unwrap();
        let policy = PolicySpec::Dbcare(DbcareSpec::new(RiskKind::Mi, 2e-3, 1.0, 1.0));
        let seq = evaluate_risk_with(
            &instance,
            &policy,
            &risk,
            200,
            95,
            EvalOptions {
                shuffle_arms: false,
                parallel: false,
            },
        )
        .unwrap();
        let par = evaluate_risk_with(
            &instance,
            &policy,
            &risk,
            200,
            95,
            EvalOptions {
                shuffle_arms: false,
                parallel: true,
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn zero_runs_is_rejected() {
        let instance = BanditInstance::gaussian_two_arm(1.0, 1.0).unwrap();
        let risk = RiskConfig::new(RiskKind::Mi, 1e-4).unwrap();
        assert!(evaluate_risk(&instance, &PolicySpec::Guess, &risk, 0, 1).is_err());
    }

    #[test]
    fn shuffling_preserves_risk_semantics() {
        let instance = drug_binary();
        let risk = RiskConfig::new(RiskKind::Mi, 1e-4).unwrap();
        let options = EvalOptions {
            shuffle_arms: true,
            ..EvalOptions::default()
        };
        let estimate =
            evaluate_risk_with(&instance, &PolicySpec::Guess, &risk, 20_000, 96, options).unwrap();
        assert!(
            (estimate.misid_rate - 0.8).abs() < 0.02,
            "{}",
            estimate.misid_rate
        );
    }

    #[test]
    fn grid_materialization() {
        let grid = GridSpec::Range(GridRange {
            scale: GridScale::Linear,
            lo: 0.0,
            hi: 1.0,
            points: 5,
        });
        assert_eq!(grid.materialize().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);

        let grid = GridSpec::Range(GridRange {
            scale: GridScale::Log,
            lo: 1e-5,
            hi: 1e-3,
            points: 3,
        });
        let values = grid.materialize().unwrap();
        assert!((values[1] - 1e-4).abs() < 1e-15);

        assert!(GridSpec::Points(vec![]).materialize().is_err());
        let grid = GridSpec::Range(GridRange {
            scale: GridScale::Log,
            lo: 0.0,
            hi: 1.0,
            points: 4,
        });
        assert!(grid.materialize().is_err());
    }

    #[test]
    fn sweep_produces_rows_in_order() {
        let config = SweepConfig {
            setting: Setting::TwoArmGaussian,
            risk: RiskKind::Mi,
            grid: GridSpec::Points(vec![0.5, 2.0]),
            num_arms: None,
            sigma: 1.0,
            reward_range_b: None,
            cost: Some(1e-3),
            runs: 50,
            master_seed: 7,
            policies: vec![
                PolicyConfig::Guess,
                PolicyConfig::SequentialHalving {
                    budget: Some(10),
                    budget_per_arm: None,
                },
            ],
        };
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].policy, "guess");
        assert_eq!(rows[1].policy, "sh:T=10");
        assert_eq!(rows[0].grid_value, 0.5);
        assert_eq!(rows[2].grid_value, 2.0);
        assert_eq!(rows[0].num_arms, 2);
        assert_eq!(rows[1].mean_tau, 10.0);
    }

    #[test]
    fn sweep_rejects_missing_cost_and_missing_k() {
        let mut config = SweepConfig {
            setting: Setting::TwoArmGaussian,
            risk: RiskKind::Mi,
            grid: GridSpec::Points(vec![0.5]),
            num_arms: None,
            sigma: 1.0,
            reward_range_b: None,
            cost: None,
            runs: 5,
            master_seed: 7,
            policies: vec![PolicyConfig::Guess],
        };
        assert!(run_sweep(&config).is_err());
        config.setting = Setting::OneSparse;
        config.cost = Some(1e-3);
        assert!(run_sweep(&config).is_err());
    }

    #[test]
    fn oracle_is_rejected_on_k_arm_sweeps() {
        let config = SweepConfig {
            setting: Setting::OneSparse,
            risk: RiskKind::Mi,
            grid: GridSpec::Points(vec![0.5]),
            num_arms: Some(4),
            sigma: 1.0,
            reward_range_b: None,
            cost: Some(1e-3),
            runs: 5,
            master_seed: 7,
            policies: vec![PolicyConfig::Oracle { risk: RiskKind::Mi }],
        };
        assert!(run_sweep(&config).is_err());
    }

    #[test]
    fn racing_cap_defaults_from_cost() {
        let instance = BanditInstance::gaussian_two_arm(1.0, 1.0).unwrap();
        let config = PolicyConfig::Racing {
            delta: 0.1,
            safeguard_cap: None,
        };
        match resolve_policy(&config, &instance, 1e-3).unwrap() {
            PolicySpec::Racing(spec) => assert_eq!(spec.safeguard_cap, 10_000),
            other => panic!("unexpected policy {other:?}"),
        }
    }

    #[test]
    fn policy_config_json_round_trip_and_unknown_keys() {
        let json = r#"[
            {"dbcare": {"risk": "mi"}},
            {"oracle": {"risk": "sr"}},
            {"sequential_halving": {"budget_per_arm": 5}},
            {"racing": {"delta": 0.1}},
            "guess"
        ]"#;
        let policies: Vec<PolicyConfig> = serde_json::from_str(json).unwrap();
        assert_eq!(policies.len(), 5);
        let bad = r#"{"racing": {"delta": 0.1, "extra": 2}}"#;
        assert!(serde_json::from_str::<PolicyConfig>(bad).is_err());
    }
}
