//! Golden-section search and the numeric oracles built on it.
//!
//! The oracles minimize the raw risk objectives by direct one-dimensional
//! search instead of evaluating the closed-form optima, so agreement between
//! the two is a genuine cross-check of the closed forms.

use super::hard_sr_k_arm;
use crate::{invalid, Result};

const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;
const INTERVAL_TOL: f64 = 1e-12;
const MAX_ITER: u32 = 400;

/// Minimize a unimodal function on `[lo, hi]` by golden-section search.
///
/// Contracts the bracket until it is narrower than `INTERVAL_TOL` or the
/// iteration cap is hit (floating-point spacing can keep wide-magnitude
/// brackets from ever reaching the tolerance), and returns the best point
/// evaluated.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    debug_assert!(lo < hi);
    let ratio = 1.0 / GOLDEN_RATIO;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - (b - a) * ratio;
    let mut x2 = a + (b - a) * ratio;
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let (mut best_x, mut best_f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };

    let mut iter = 0;
    while b - a > INTERVAL_TOL && iter < MAX_ITER {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * ratio;
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * ratio;
            f2 = f(x2);
        }
        let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        if fx < best_f {
            best_f = fx;
            best_x = x;
        }
        iter += 1;
    }
    (best_x, best_f)
}

/// Result of a numeric phase-transition oracle: the minimizing sampling
/// level and the minimal risk value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOracle {
    pub argmin: f64,
    pub min_value: f64,
}

/// Numerically minimize the misidentification risk profile
/// `x -> exp(-2x / (sigma^2 H)) / 4 + (c / 2) x` over `x >= 0`.
pub fn phase_oracle_mi(h: f64, sigma: f64, cost: f64) -> Result<PhaseOracle> {
    check_phase_inputs(h, sigma, cost)?;
    let scale = sigma * sigma * h;
    let objective = move |x: f64| 0.25 * (-2.0 * x / scale).exp() + 0.5 * cost * x;
    let hi = 10.0 * scale * f64::max(1.0, (1.0 / (cost * scale)).ln());
    let (argmin, min_value) = golden_min(objective, 0.0, hi);
    Ok(PhaseOracle { argmin, min_value })
}

/// Numerically minimize the simple-regret risk profile
/// `x -> delta2 exp(-2x / (sigma^2 H)) / 4 + (c / 2) x` over `x >= 0`.
pub fn phase_oracle_sr(h: f64, delta2: f64, sigma: f64, cost: f64) -> Result<PhaseOracle> {
    check_phase_inputs(h, sigma, cost)?;
    if delta2 <= 0.0 || !delta2.is_finite() {
        return Err(invalid(format!("delta2 must be positive, got {delta2}")));
    }
    let scale = sigma * sigma * h;
    let objective = move |x: f64| 0.25 * delta2 * (-2.0 * x / scale).exp() + 0.5 * cost * x;
    let hi = 10.0 * scale * f64::max(1.0, (delta2 / (cost * scale)).ln());
    let (argmin, min_value) = golden_min(objective, 0.0, hi);
    Ok(PhaseOracle { argmin, min_value })
}

/// Result of the numeric minimax oracle: the gap attaining the worst-case
/// simple-regret lower bound and the bound's value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxOracle {
    pub delta_star: f64,
    pub max_value: f64,
}

/// Numerically maximize the simple-regret lower bound over instances with a
/// shared gap `Delta`, i.e. `Delta -> hard_sr_k_arm((K - 1) / Delta^2, Delta)`.
pub fn minimax_oracle_sr(num_arms: usize, sigma: f64, cost: f64) -> Result<MinimaxOracle> {
    if num_arms < 2 {
        return Err(invalid(format!(
            "minimax oracle needs K >= 2, got {num_arms}"
        )));
    }
    check_phase_inputs(1.0, sigma, cost)?;
    let k1 = (num_arms - 1) as f64;
    let objective = move |delta: f64| {
        let h = k1 / (delta * delta);
        -hard_sr_k_arm(h, delta, sigma, cost)
            .expect("interior points of the search bracket are valid")
            .value
    };
    let hi = 10.0 * (k1 * sigma * sigma * cost).cbrt();
    let (delta_star, neg_max) = golden_min(objective, 0.0, hi);
    Ok(MinimaxOracle {
        delta_star,
        max_value: -neg_max,
    })
}

fn check_phase_inputs(h: f64, sigma: f64, cost: f64) -> Result<()> {
    if h <= 0.0 || !h.is_finite() {
        return Err(invalid(format!(
            "complexity H must be positive and finite, got {h}"
        )));
    }
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if cost <= 0.0 || !cost.is_finite() {
        return Err(invalid(format!("cost must be positive, got {cost}")));
    }
    Ok(())
}
