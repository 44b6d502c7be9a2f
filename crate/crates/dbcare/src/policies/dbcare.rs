//! The DBCARE elimination policy.
//!
//! The policy proceeds in epochs. Each epoch pulls every surviving arm once,
//! updates running means, and eliminates every arm whose empirical mean sits
//! more than the confidence radius below the best surviving mean. A new
//! epoch starts only while the epoch count is within the budget `N*(|S|)`
//! for the current surviving set, so every elimination extends the remaining
//! budget; once the budget is exhausted or one arm is left, the policy
//! recommends the empirical maximizer among the survivors.

use super::schedule::{confidence_radius, delta_mi, delta_sr, nstar_mi, nstar_sr};
use super::{argmax_with_ties, DbcareSpec, Parameterization, PolicyStreams, RiskKind, Trace};
use crate::core::BanditInstance;
use crate::{invalid, Result};

pub fn run_dbcare(
    instance: &BanditInstance,
    spec: &DbcareSpec,
    streams: &mut PolicyStreams,
) -> Result<Trace> {
    let k_total = instance.num_arms();
    streams.check_arms(k_total)?;

    let budgets = budget_schedule(spec, k_total)?;
    let delta = resolve_delta(spec, k_total)?;
    if spec.sigma <= 0.0 || !spec.sigma.is_finite() {
        return Err(invalid(format!(
            "sigma must be positive, got {}",
            spec.sigma
        )));
    }

    let mut surviving: Vec<usize> = (0..k_total).collect();
    let mut sums = vec![0.0; k_total];
    let mut pulls = vec![0u64; k_total];
    let mut tau = 0u64;
    let mut epochs = 0u64;

    while surviving.len() > 1 && epochs as f64 <= budgets[surviving.len() - 2] {
        epochs += 1;
        for &arm in &surviving {
            sums[arm] += instance.sample(arm, &mut streams.arms[arm]);
            pulls[arm] += 1;
            tau += 1;
        }
        debug_assert!(
            surviving.iter().all(|&arm| pulls[arm] == epochs),
            "surviving arms must stay equally sampled"
        );
        let radius = confidence_radius(epochs, k_total, delta, spec.sigma)?;
        let n = epochs as f64;
        let best = surviving
            .iter()
            .map(|&arm| sums[arm] / n)
            .fold(f64::NEG_INFINITY, f64::max);
        surviving.retain(|&arm| best - sums[arm] / n <= radius);
        debug_assert!(
            !surviving.is_empty(),
            "the empirical best arm always survives"
        );
    }

    let n = epochs.max(1) as f64;
    let recommended = argmax_with_ties(
        &surviving,
        |arm| if pulls[arm] > 0 { sums[arm] / n } else { 0.0 },
        &mut streams.decision,
    );
    Ok(Trace {
        recommended_arm: recommended,
        stopping_time_tau: tau,
        pulls_per_arm: pulls,
        epochs_completed: epochs,
    }
    .check())
}

/// Budgets indexed by surviving-set size: entry `i` is `N*` for `i + 2`
/// survivors.
fn budget_schedule(spec: &DbcareSpec, k_total: usize) -> Result<Vec<f64>> {
    let budgets = match &spec.nstar_override {
        Some(schedule) => {
            if schedule.len() < k_total - 1 {
                return Err(invalid(format!(
                    "budget override covers {} sizes but the instance needs {}",
                    schedule.len(),
                    k_total - 1
                )));
            }
            if schedule.iter().any(|b| !b.is_finite()) {
                return Err(invalid("budget override entries must be finite"));
            }
            schedule[..k_total - 1].to_vec()
        }
        None => (2..=k_total)
            .map(|k| match spec.risk_kind {
                RiskKind::Mi => nstar_mi(k, spec.cost),
                RiskKind::Sr => nstar_sr(k, spec.cost, spec.sigma),
            })
            .collect::<Result<Vec<f64>>>()?,
    };
    if budgets.windows(2).any(|w| w[1] >= w[0]) {
        log::warn!("budget schedule is not strictly decreasing in the surviving-set size");
    }
    if budgets[k_total - 2] < 1.0 {
        log::warn!(
            "budget at the full arm count is {} (< 1); the first epoch still runs",
            budgets[k_total - 2]
        );
    }
    Ok(budgets)
}

fn resolve_delta(spec: &DbcareSpec, k_total: usize) -> Result<f64> {
    if let Some(delta) = spec.delta_override {
        if !(0.0..1.0).contains(&delta) {
            return Err(invalid(format!(
                "delta override must lie in [0, 1), got {delta}"
            )));
        }
        return Ok(delta);
    }
    let parameterization = spec.parameterization.unwrap_or(if k_total == 2 {
        Parameterization::TwoArm
    } else {
        Parameterization::KArm
    });
    match spec.risk_kind {
        RiskKind::Mi => delta_mi(k_total, spec.cost, parameterization),
        RiskKind::Sr => delta_sr(
            k_total,
            spec.cost,
            spec.sigma,
            spec.reward_range_b,
            parameterization,
        ),
    }
}
