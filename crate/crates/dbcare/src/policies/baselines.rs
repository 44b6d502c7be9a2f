//! Baseline policies: the gap-aware oracle, sequential halving, racing, and
//! a uniform guess.

use super::schedule::confidence_radius;
use super::{argmax_with_ties, OracleSpec, PolicyStreams, RacingSpec, RiskKind, Trace};
use crate::core::BanditInstance;
use crate::{invalid, Result};

/// Two-arm oracle: pulls each arm a fixed number of times computed from the
/// true gap it was told, then recommends the empirical maximizer.
///
/// The per-arm count is `max(0, ceil((4 sigma^2 / delta^2) *
/// log(delta^p / (8 sigma^2 c))))` with `p = 2` for misidentification and
/// `p = 3` for simple regret. When the count is zero the oracle recommends
/// uniformly at random without sampling.
pub fn run_oracle_two_arm(
    instance: &BanditInstance,
    spec: &OracleSpec,
    streams: &mut PolicyStreams,
) -> Result<Trace> {
    if instance.num_arms() != 2 {
        return Err(invalid(format!(
            "the oracle baseline is two-arm only, got {} arms",
            instance.num_arms()
        )));
    }
    streams.check_arms(2)?;
    if spec.known_delta < 0.0 || !spec.known_delta.is_finite() {
        return Err(invalid(format!(
            "known delta must be nonnegative, got {}",
            spec.known_delta
        )));
    }
    if spec.cost <= 0.0 || !spec.cost.is_finite() {
        return Err(invalid(format!("cost must be positive, got {}", spec.cost)));
    }
    if spec.sigma <= 0.0 || !spec.sigma.is_finite() {
        return Err(invalid(format!(
            "sigma must be positive, got {}",
            spec.sigma
        )));
    }

    let per_arm = oracle_pulls_per_arm(spec);
    let mut sums = [0.0f64; 2];
    for _ in 0..per_arm {
        for (arm, sum) in sums.iter_mut().enumerate() {
            *sum += instance.sample(arm, &mut streams.arms[arm]);
        }
    }
    let recommended = if per_arm == 0 {
        streams.decision.next_index(2)
    } else {
        argmax_with_ties(&[0, 1], |arm| sums[arm], &mut streams.decision)
    };
    Ok(Trace {
        recommended_arm: recommended,
        stopping_time_tau: 2 * per_arm,
        pulls_per_arm: vec![per_arm, per_arm],
        epochs_completed: per_arm,
    }
    .check())
}

/// Fixed per-arm sample count the oracle commits to.
pub fn oracle_pulls_per_arm(spec: &OracleSpec) -> u64 {
    if spec.known_delta == 0.0 {
        return 0;
    }
    let sigma2 = spec.sigma * spec.sigma;
    let delta = spec.known_delta;
    let power = match spec.risk_kind {
        RiskKind::Mi => delta * delta,
        RiskKind::Sr => delta * delta * delta,
    };
    let raw = 4.0 * sigma2 / (delta * delta) * (power / (8.0 * sigma2 * spec.cost)).ln();
    if raw > 0.0 {
        raw.ceil() as u64
    } else {
        0
    }
}

/// Sequential halving with a hard sample budget.
///
/// Runs `ceil(log2 K)` rounds; round `r` pulls every surviving arm
/// `max(1, floor(T / (|S_r| ceil(log2 K))))` times (truncated so the total
/// never exceeds `T`), then keeps the better half by cumulative mean.
pub fn run_sequential_halving(
    instance: &BanditInstance,
    budget: u64,
    streams: &mut PolicyStreams,
) -> Result<Trace> {
    let k_total = instance.num_arms();
    streams.check_arms(k_total)?;
    if budget < k_total as u64 {
        return Err(invalid(format!(
            "sequential halving needs a budget of at least K = {k_total}, got {budget}"
        )));
    }

    let rounds = usize::BITS - (k_total - 1).leading_zeros();
    let mut surviving: Vec<usize> = (0..k_total).collect();
    let mut sums = vec![0.0; k_total];
    let mut pulls = vec![0u64; k_total];
    let mut tau = 0u64;

    for _ in 0..rounds {
        let per_arm = (budget / (surviving.len() as u64 * rounds as u64)).max(1);
        'allocation: for _ in 0..per_arm {
            for &arm in &surviving {
                if tau >= budget {
                    break 'allocation;
                }
                sums[arm] += instance.sample(arm, &mut streams.arms[arm]);
                pulls[arm] += 1;
                tau += 1;
            }
        }
        let keep = surviving.len().div_ceil(2);
        let mut ranked: Vec<(f64, u64, usize)> = surviving
            .iter()
            .map(|&arm| {
                let mean = if pulls[arm] > 0 {
                    sums[arm] / pulls[arm] as f64
                } else {
                    0.0
                };
                (mean, streams.decision.next_raw(), arm)
            })
            .collect();
        ranked.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .expect("finite means")
                .then(a.1.cmp(&b.1))
        });
        surviving = ranked[..keep].iter().map(|&(_, _, arm)| arm).collect();
        surviving.sort_unstable();
    }

    debug_assert_eq!(surviving.len(), 1);
    debug_assert!(tau <= budget);
    Ok(Trace {
        recommended_arm: surviving[0],
        stopping_time_tau: tau,
        pulls_per_arm: pulls,
        epochs_completed: rounds as u64,
    }
    .check())
}

/// Racing: the same epoch-and-eliminate loop as DBCARE but with no budget
/// schedule. It stops once a single arm survives or the next epoch would
/// push total pulls past `safeguard_cap`.
pub fn run_racing(
    instance: &BanditInstance,
    spec: &RacingSpec,
    streams: &mut PolicyStreams,
) -> Result<Trace> {
    let k_total = instance.num_arms();
    streams.check_arms(k_total)?;
    if !(spec.delta > 0.0 && spec.delta < 1.0) {
        return Err(invalid(format!(
            "racing delta must lie in (0, 1), got {}",
            spec.delta
        )));
    }
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

    while surviving.len() > 1 && tau + surviving.len() as u64 <= spec.safeguard_cap {
        epochs += 1;
        for &arm in &surviving {
            sums[arm] += instance.sample(arm, &mut streams.arms[arm]);
            pulls[arm] += 1;
            tau += 1;
        }
        let radius = confidence_radius(epochs, k_total, spec.delta, spec.sigma)?;
        let n = epochs as f64;
        let best = surviving
            .iter()
            .map(|&arm| sums[arm] / n)
            .fold(f64::NEG_INFINITY, f64::max);
        surviving.retain(|&arm| best - sums[arm] / n <= radius);
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

/// Zero-sample baseline: recommend an arm uniformly at random.
pub fn run_guess(instance: &BanditInstance, streams: &mut PolicyStreams) -> Result<Trace> {
    let k_total = instance.num_arms();
    streams.check_arms(k_total)?;
    Ok(Trace {
        recommended_arm: streams.decision.next_index(k_total),
        stopping_time_tau: 0,
        pulls_per_arm: vec![0; k_total],
        epochs_completed: 0,
    }
    .check())
}
