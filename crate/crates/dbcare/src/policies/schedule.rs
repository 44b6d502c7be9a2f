//! Elimination radii, budget schedules, and confidence levels for DBCARE.
//!
//! The budget `N*(k)` is the number of epochs the policy is willing to spend
//! while `k` arms survive; it shrinks as `k` grows, so eliminations extend
//! the remaining budget. The confidence level `delta` balances the cost of
//! extra sampling against the chance of eliminating the best arm, and comes
//! in a two-arm and a general `K`-arm tuning for each risk kind.

use super::Parameterization;
use crate::{invalid, Result};
use std::f64::consts::E;

/// Elimination radius after `n` epochs: `sqrt(4 sigma^2 log(K n / delta) / n)`.
///
/// `delta = 0` pushes the radius to infinity, which disables elimination;
/// arguments that would make the logarithm nonpositive are rejected.
pub fn confidence_radius(n: u64, num_arms: usize, delta: f64, sigma: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("confidence radius needs n >= 1"));
    }
    if sigma <= 0.0 || sigma.is_nan() {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(invalid(format!("delta must lie in [0, 1), got {delta}")));
    }
    let arg = num_arms as f64 * n as f64 / delta;
    if arg <= 1.0 {
        return Err(invalid(format!(
            "confidence radius undefined: K * n / delta = {arg} is not above 1"
        )));
    }
    Ok((4.0 * sigma * sigma * arg.ln() / n as f64).sqrt())
}

/// Misidentification budget: `N*(k) = 1 / (k e c)` epochs while `k` arms
/// survive.
pub fn nstar_mi(k: usize, cost: f64) -> Result<f64> {
    if k < 2 {
        return Err(invalid(format!("budget schedule needs k >= 2, got {k}")));
    }
    check_cost(cost)?;
    Ok(1.0 / (k as f64 * E * cost))
}

/// Simple-regret budget:
/// `N*(k) = (3 / 2e) sigma^(2/3) ((k - 1) c)^(-2/3)` epochs while `k` arms
/// survive.
pub fn nstar_sr(k: usize, cost: f64, sigma: f64) -> Result<f64> {
    if k < 2 {
        return Err(invalid(format!("budget schedule needs k >= 2, got {k}")));
    }
    check_cost(cost)?;
    check_sigma(sigma)?;
    Ok(1.5 / E * sigma.powf(2.0 / 3.0) * ((k as f64 - 1.0) * cost).powf(-2.0 / 3.0))
}

/// Confidence level for the misidentification tuning.
///
/// Two-arm: `c / (1 + 2 c N*)` with `N* = 1 / (2 e c)`.
/// K-arm: `c / (1 + 2 c log(K) N*(2))`.
pub fn delta_mi(num_arms: usize, cost: f64, parameterization: Parameterization) -> Result<f64> {
    check_cost(cost)?;
    let nstar2 = nstar_mi(2, cost)?;
    let delta = match parameterization {
        Parameterization::TwoArm => cost / (1.0 + 2.0 * cost * nstar2),
        Parameterization::KArm => {
            if num_arms < 2 {
                return Err(invalid(format!("delta_mi needs K >= 2, got {num_arms}")));
            }
            cost / (1.0 + 2.0 * cost * (num_arms as f64).ln() * nstar2)
        }
    };
    check_delta(delta)
}

/// Confidence level for the simple-regret tuning.
///
/// Two-arm: `c / (B + 2 c N*)` with `N* = (3 / 2e) (sigma / c)^(2/3)`.
/// K-arm: `c / (B + e K^(1/3) log(K) N*(2))`.
pub fn delta_sr(
    num_arms: usize,
    cost: f64,
    sigma: f64,
    reward_range_b: f64,
    parameterization: Parameterization,
) -> Result<f64> {
    check_cost(cost)?;
    check_sigma(sigma)?;
    if reward_range_b <= 0.0 || !reward_range_b.is_finite() {
        return Err(invalid(format!(
            "reward range B must be positive, got {reward_range_b}"
        )));
    }
    let nstar2 = nstar_sr(2, cost, sigma)?;
    let delta = match parameterization {
        Parameterization::TwoArm => cost / (reward_range_b + 2.0 * cost * nstar2),
        Parameterization::KArm => {
            if num_arms < 2 {
                return Err(invalid(format!("delta_sr needs K >= 2, got {num_arms}")));
            }
            let k = num_arms as f64;
            cost / (reward_range_b + E * k.powf(1.0 / 3.0) * k.ln() * nstar2)
        }
    };
    check_delta(delta)
}

fn check_cost(cost: f64) -> Result<()> {
    if cost <= 0.0 || !cost.is_finite() {
        return Err(invalid(format!("cost must be positive, got {cost}")));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!(
            "derived confidence level {delta} falls outside (0, 1)"
        )));
    }
    Ok(delta)
}
