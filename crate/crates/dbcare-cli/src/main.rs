//! Command line front end for the dbcare laboratory.
//!
//! Three subcommands: `sweep` drives the Monte Carlo harness from a JSON
//! config and writes CSV (plus optional SVG), `run` executes one policy once
//! and prints its trace, and `bounds` tabulates analytic risk curves over a
//! gap grid. Exit codes are 0 on success, 1 on I/O failure, and 2 on any
//! validation or parse failure.
//!
//! Replication fan-out happens inside the harness; results do not depend on
//! the thread count, which rayon reads from RAYON_NUM_THREADS.

mod minispec;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dbcare::bounds::{
    dbcare_sr_k_arm_minimax, dbcare_sr_two_arm_minimax, hard_mi_k_arm, hard_mi_two_arm,
    hard_sr_k_arm, hard_sr_minimax, hard_sr_two_arm, minimax_delta_star, oracle_sr_minimax,
    upper_curve, BoundQuery, UpperPolicy,
};
use dbcare::harness::{
    emit_plot, run_sweep, write_csv, GridSpec, PolicyConfig, Setting, SweepConfig,
};
use dbcare::policies::{run_policy, PolicyStreams, RiskKind};
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "dbcare",
    version,
    about = "Cost-aware best-arm identification laboratory",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every sweep described by a config file and write one CSV per risk.
    Sweep(SweepArgs),
    /// Run one policy once on one instance and print the trace.
    Run(RunArgs),
    /// Tabulate lower and upper risk bounds over a gap grid as CSV.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep description; see the bundled files under configs/.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV and SVG files; falls back to the config's
    /// out_dir field.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's replication count.
    #[arg(long)]
    runs: Option<u64>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Render an SVG chart next to each CSV.
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Policy spec: dbcare[:mi|:sr][,param=two_arm|k_arm], oracle[:mi|:sr],
    /// sh:T=<n> or sh:per_arm=<n>, racing:delta=<d>[,cap=<n>], guess.
    #[arg(long)]
    policy: String,
    /// Instance spec: gaussian2:delta=<d>[,sigma=<s>], bernoulli2:delta=<d>,
    /// one_sparse:K=<k>,delta=<d>[,sigma=<s>],
    /// linear_decay:K=<k>,delta2=<d>[,sigma=<s>], drug_binary, drug_leveled.
    #[arg(long)]
    instance: String,
    /// Penalty charged on the recommendation; also the default risk for
    /// dbcare and oracle specs that omit one.
    #[arg(long, value_enum, default_value = "mi")]
    risk: RiskArg,
    /// Cost per sample.
    #[arg(long, default_value_t = 1e-4)]
    cost: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reward range bound; required for dbcare:sr on unbounded reward
    /// families.
    #[arg(long = "B")]
    reward_range_b: Option<f64>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    risk: RiskArg,
    /// Two-arm curves over the gap, or K-arm curves over the smallest gap
    /// of a one-sparse instance.
    #[arg(long, value_enum)]
    scope: ScopeArg,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    cost: f64,
    /// Gap grid: lo:hi:points[:log] or comma-separated values.
    #[arg(long)]
    grid: String,
    /// Reward range bound; required for --risk sr, rejected otherwise.
    #[arg(long = "B")]
    reward_range_b: Option<f64>,
    /// Arm count; required for --scope k, rejected otherwise.
    #[arg(long = "K")]
    num_arms: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RiskArg {
    Mi,
    Sr,
}

impl From<RiskArg> for RiskKind {
    fn from(arg: RiskArg) -> RiskKind {
        match arg {
            RiskArg::Mi => RiskKind::Mi,
            RiskArg::Sr => RiskKind::Sr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Two,
    K,
}

// ---------------------------------------------------------------------------
// Error-to-exit-code mapping
// ---------------------------------------------------------------------------

enum CliError {
    Validation(String),
    Io(String),
}

impl From<dbcare::Error> for CliError {
    fn from(err: dbcare::Error) -> Self {
        match err {
            dbcare::Error::InvalidParameter(_) => CliError::Validation(err.to_string()),
            dbcare::Error::Io(_) => CliError::Io(err.to_string()),
        }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Run(args) => cmd_run(args),
        Command::Bounds(args) => cmd_bounds(args),
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

/// On-disk sweep description: a [`SweepConfig`] with a list of risks in
/// place of a single one, an optional separate grid for the simple-regret
/// pass, and output settings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CliConfigFile {
    setting: Setting,
    risks: Vec<RiskKind>,
    grid: GridSpec,
    #[serde(default)]
    grid_sr: Option<GridSpec>,
    #[serde(default)]
    num_arms: Option<usize>,
    #[serde(default = "default_sigma")]
    sigma: f64,
    #[serde(default)]
    reward_range_b: Option<f64>,
    #[serde(default)]
    cost: Option<f64>,
    #[serde(default = "default_runs")]
    runs: u64,
    master_seed: u64,
    policies: Vec<PolicyConfig>,
    #[serde(default)]
    out_dir: Option<PathBuf>,
    #[serde(default)]
    emit_plots: bool,
}

fn default_sigma() -> f64 {
    1.0
}

fn default_runs() -> u64 {
    1000
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let config: CliConfigFile = serde_json::from_str(&text)
        .map_err(|e| validation(format!("{}: {e}", args.config.display())))?;
    if config.risks.is_empty() {
        return Err(validation("config needs at least one risk"));
    }
    let out_dir = args
        .out
        .or(config.out_dir.clone())
        .ok_or_else(|| validation("pass --out or set out_dir in the config"))?;

    for &risk in &config.risks {
        let grid = match (risk, &config.grid_sr) {
            (RiskKind::Sr, Some(grid)) => grid.clone(),
            _ => config.grid.clone(),
        };
        let sweep = SweepConfig {
            setting: config.setting,
            risk,
            grid,
            num_arms: config.num_arms,
            sigma: config.sigma,
            reward_range_b: config.reward_range_b,
            cost: config.cost,
            runs: args.runs.unwrap_or(config.runs),
            master_seed: args.seed.unwrap_or(config.master_seed),
            policies: config.policies.clone(),
        };
        let rows = run_sweep(&sweep)?;
        let stem = format!("{}_{}", config.setting.as_str(), risk.as_str());
        let csv_path = out_dir.join(format!("{stem}.csv"));
        write_csv(&rows, &csv_path)?;
        println!("wrote {} ({} rows)", csv_path.display(), rows.len());
        if args.plot || config.emit_plots {
            let svg_path = out_dir.join(format!("{stem}.svg"));
            let title = format!("{} ({} risk)", config.setting.as_str(), risk.as_str());
            emit_plot(&rows, &title, &svg_path)?;
            println!("wrote {}", svg_path.display());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    if args.cost <= 0.0 || !args.cost.is_finite() {
        return Err(validation(format!(
            "--cost must be positive, got {}",
            args.cost
        )));
    }
    let parsed = minispec::parse_instance(&args.instance).map_err(validation)?;
    let mut instance = parsed.instance;
    if let Some(b) = args.reward_range_b {
        instance = instance.with_reward_range(b)?;
    }
    let risk_kind: RiskKind = args.risk.into();
    let policy_config = minispec::parse_policy(&args.policy, risk_kind).map_err(validation)?;
    if matches!(
        policy_config,
        PolicyConfig::Dbcare {
            risk: RiskKind::Sr,
            ..
        }
    ) && args.reward_range_b.is_none()
        && !parsed.bounded
    {
        return Err(validation(
            "dbcare:sr on an unbounded reward family needs --B <reward range bound>",
        ));
    }

    let policy = dbcare::harness::resolve_policy(&policy_config, &instance, args.cost)?;
    let mut streams = PolicyStreams::for_replication(args.seed, 0, instance.num_arms());
    let trace = run_policy(&instance, &policy, &mut streams)?;

    let means = instance.means();
    let best = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let recommended_mean = means[trace.recommended_arm];
    let misidentified = recommended_mean != best;
    let penalty = match risk_kind {
        RiskKind::Mi => misidentified as u8 as f64,
        RiskKind::Sr => best - recommended_mean,
    };
    let realized_risk = penalty + args.cost * trace.stopping_time_tau as f64;
    println!(
        "policy={} risk={} cost={} seed={} recommended_arm={} tau={} epochs={} pulls={:?} misidentified={} penalty={} realized_risk={}",
        policy.label(),
        risk_kind.as_str(),
        args.cost,
        args.seed,
        trace.recommended_arm,
        trace.stopping_time_tau,
        trace.epochs_completed,
        trace.pulls_per_arm,
        misidentified,
        penalty,
        realized_risk,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    let deltas = minispec::parse_grid(&args.grid).map_err(validation)?;
    let reward_range_b = match (args.risk, args.reward_range_b) {
        (RiskArg::Mi, Some(_)) => {
            return Err(validation("--B only applies to --risk sr"));
        }
        (RiskArg::Sr, None) => {
            return Err(validation("--risk sr needs --B <reward range bound>"));
        }
        (RiskArg::Mi, None) => 1.0,
        (RiskArg::Sr, Some(b)) => b,
    };
    let num_arms = match (args.scope, args.num_arms) {
        (ScopeArg::Two, Some(_)) => {
            return Err(validation("--K only applies to --scope k"));
        }
        (ScopeArg::K, None) => {
            return Err(validation("--scope k needs --K <arm count>"));
        }
        (ScopeArg::Two, None) => 2,
        (ScopeArg::K, Some(k)) => k,
    };

    let mut out = String::new();
    match args.scope {
        ScopeArg::Two => {
            out.push_str("delta,lower,regime,upper_oracle,upper_dbcare\n");
            for &delta in &deltas {
                let query = BoundQuery::two_arm(delta, args.sigma, args.cost, reward_range_b);
                let (lower, oracle, dbcare) = match args.risk {
                    RiskArg::Mi => (
                        hard_mi_two_arm(delta, args.sigma, args.cost)?,
                        upper_curve(UpperPolicy::OracleMi, &query)?,
                        upper_curve(UpperPolicy::DbcareMi2, &query)?,
                    ),
                    RiskArg::Sr => (
                        hard_sr_two_arm(delta, args.sigma, args.cost)?,
                        upper_curve(UpperPolicy::OracleSr, &query)?,
                        upper_curve(UpperPolicy::DbcareSr2, &query)?,
                    ),
                };
                let _ = writeln!(
                    out,
                    "{delta},{},{},{oracle},{dbcare}",
                    lower.value,
                    lower.regime.as_str()
                );
            }
            if args.risk == RiskArg::Sr {
                let delta_star = minimax_delta_star(2, args.sigma, args.cost)?;
                let _ = writeln!(
                    out,
                    "{delta_star},{},minimax,{},{}",
                    hard_sr_minimax(2, args.sigma, args.cost)?,
                    oracle_sr_minimax(args.sigma, args.cost)?,
                    dbcare_sr_two_arm_minimax(args.sigma, args.cost)?,
                );
            }
        }
        ScopeArg::K => {
            out.push_str("delta,h,lower,regime,upper_dbcare\n");
            for &delta in &deltas {
                let h = (num_arms - 1) as f64 / (delta * delta);
                let query =
                    BoundQuery::k_arm(num_arms, h, delta, args.sigma, args.cost, reward_range_b);
                let (lower, dbcare) = match args.risk {
                    RiskArg::Mi => (
                        hard_mi_k_arm(h, args.sigma, args.cost)?,
                        upper_curve(UpperPolicy::DbcareMiK, &query)?,
                    ),
                    RiskArg::Sr => (
                        hard_sr_k_arm(h, delta, args.sigma, args.cost)?,
                        upper_curve(UpperPolicy::DbcareSrK, &query)?,
                    ),
                };
                let _ = writeln!(
                    out,
                    "{delta},{h},{},{},{dbcare}",
                    lower.value,
                    lower.regime.as_str()
                );
            }
            if args.risk == RiskArg::Sr {
                let delta_star = minimax_delta_star(num_arms, args.sigma, args.cost)?;
                let h = (num_arms - 1) as f64 / (delta_star * delta_star);
                let _ = writeln!(
                    out,
                    "{delta_star},{h},{},minimax,{}",
                    hard_sr_minimax(num_arms, args.sigma, args.cost)?,
                    dbcare_sr_k_arm_minimax(num_arms, args.sigma, args.cost)?,
                );
            }
        }
    }

    match args.out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(|e| {
                        CliError::Io(format!("cannot create {}: {e}", parent.display()))
                    })?;
                }
            }
            std::fs::write(&path, out)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote {}", path.display());
        }
        None => print!("{out}"),
    }
    Ok(())
}
