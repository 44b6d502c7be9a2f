//! Analytic risk bounds.
//!
//! The `hard_*` functions are instance-dependent lower bounds on the
//! achievable risk `penalty + c E[tau]`; each reports which side of its
//! phase transition the query falls on. Small gaps (equivalently, large
//! complexity) saturate the bound at the cost of a pure guess, while large
//! gaps pay for informative sampling through a logarithmic factor. The
//! `upper_curve` envelopes are the matching guarantees for the oracle and
//! DBCARE tunings, evaluated literally from their closed-form constants, and
//! the `*_minimax` constants are the corresponding worst-case levels.
//!
//! All logarithms are natural.

mod search;

pub use search::{minimax_oracle_sr, phase_oracle_mi, phase_oracle_sr, MinimaxOracle, PhaseOracle};

use crate::{invalid, Result};
use std::f64::consts::E;

// ---------------------------------------------------------------------------
// Hard (lower-bound) functions
// ---------------------------------------------------------------------------

/// Which side of the phase transition a bound was evaluated on.
///
/// `SmallGap` is the saturated side (gaps too small to be worth learning,
/// equivalently complexity too large) and `LargeGap` the informative side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    LargeGap,
    SmallGap,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::LargeGap => "large_gap",
            Regime::SmallGap => "small_gap",
        }
    }
}

/// A lower-bound value together with its regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardBound {
    pub value: f64,
    pub regime: Regime,
}

/// Two-arm misidentification lower bound.
///
/// `(sigma^2 c / (4 delta^2)) log(e delta^2 / (sigma^2 c))` when
/// `delta >= sqrt(sigma^2 c)`, else the constant `1/4`.
pub fn hard_mi_two_arm(delta: f64, sigma: f64, cost: f64) -> Result<HardBound> {
    check_common(sigma, cost)?;
    check_delta_nonneg(delta)?;
    let s2c = sigma * sigma * cost;
    if delta >= s2c.sqrt() {
        let value = s2c / (4.0 * delta * delta) * (E * delta * delta / s2c).ln();
        Ok(HardBound {
            value,
            regime: Regime::LargeGap,
        })
    } else {
        Ok(HardBound {
            value: 0.25,
            regime: Regime::SmallGap,
        })
    }
}

/// Two-arm simple-regret lower bound.
///
/// `(sigma^2 c / (4 delta^2)) log(e delta^3 / (sigma^2 c))` when
/// `delta >= (sigma^2 c)^(1/3)`, else `delta / 4`.
pub fn hard_sr_two_arm(delta: f64, sigma: f64, cost: f64) -> Result<HardBound> {
    check_common(sigma, cost)?;
    check_delta_nonneg(delta)?;
    let s2c = sigma * sigma * cost;
    if delta >= s2c.cbrt() {
        let value = s2c / (4.0 * delta * delta) * (E * delta * delta * delta / s2c).ln();
        Ok(HardBound {
            value,
            regime: Regime::LargeGap,
        })
    } else {
        Ok(HardBound {
            value: delta / 4.0,
            regime: Regime::SmallGap,
        })
    }
}

/// K-arm misidentification lower bound in terms of the complexity `H`.
///
/// `(sigma^2 c H / 4) log(e / (sigma^2 c H))` when `H <= 1 / (sigma^2 c)`,
/// else the constant `1/4`. `H` may be infinite (tied best arms).
pub fn hard_mi_k_arm(h: f64, sigma: f64, cost: f64) -> Result<HardBound> {
    check_common(sigma, cost)?;
    check_h(h)?;
    let s2c = sigma * sigma * cost;
    if h <= 1.0 / s2c {
        let value = s2c * h / 4.0 * (E / (s2c * h)).ln();
        Ok(HardBound {
            value,
            regime: Regime::LargeGap,
        })
    } else {
        Ok(HardBound {
            value: 0.25,
            regime: Regime::SmallGap,
        })
    }
}

/// K-arm simple-regret lower bound in terms of `H` and the smallest gap
/// `delta2`.
///
/// `(sigma^2 c H / 4) log(e delta2 / (sigma^2 c H))` when
/// `H / delta2 <= 1 / (sigma^2 c)`, else `delta2 / 4`. `H` may be infinite.
pub fn hard_sr_k_arm(h: f64, delta2: f64, sigma: f64, cost: f64) -> Result<HardBound> {
    check_common(sigma, cost)?;
    check_h(h)?;
    if delta2 <= 0.0 || !delta2.is_finite() {
        return Err(invalid(format!("delta2 must be positive, got {delta2}")));
    }
    let s2c = sigma * sigma * cost;
    if h / delta2 <= 1.0 / s2c {
        let value = s2c * h / 4.0 * (E * delta2 / (s2c * h)).ln();
        Ok(HardBound {
            value,
            regime: Regime::LargeGap,
        })
    } else {
        Ok(HardBound {
            value: delta2 / 4.0,
            regime: Regime::SmallGap,
        })
    }
}

/// Worst-case simple-regret level `(3/8) ((K - 1) sigma^2 c / e)^(1/3)`.
pub fn hard_sr_minimax(num_arms: usize, sigma: f64, cost: f64) -> Result<f64> {
    check_common(sigma, cost)?;
    check_k(num_arms)?;
    let k1 = (num_arms - 1) as f64;
    Ok(0.375 * (k1 * sigma * sigma * cost / E).cbrt())
}

/// Gap at which the worst-case simple-regret bound is attained:
/// `(sqrt(e) (K - 1) sigma^2 c)^(1/3)`.
pub fn minimax_delta_star(num_arms: usize, sigma: f64, cost: f64) -> Result<f64> {
    check_common(sigma, cost)?;
    check_k(num_arms)?;
    let k1 = (num_arms - 1) as f64;
    Ok((E.sqrt() * k1 * sigma * sigma * cost).cbrt())
}

// ---------------------------------------------------------------------------
// Upper-bound envelopes
// ---------------------------------------------------------------------------

/// Which guarantee an upper envelope describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperPolicy {
    OracleMi,
    OracleSr,
    DbcareMi2,
    DbcareSr2,
    DbcareMiK,
    DbcareSrK,
}

/// Point at which bounds are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    pub sigma: f64,
    pub cost: f64,
    /// Reward range bound `B`; only simple-regret envelopes read it.
    pub reward_range_b: f64,
    pub scope: QueryScope,
}

/// Two-arm queries carry the gap; K-arm queries carry the arm count, the
/// complexity, and the smallest gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QueryScope {
    TwoArm {
        delta: f64,
    },
    KArm {
        num_arms: usize,
        h: f64,
        delta2: f64,
    },
}

impl BoundQuery {
    pub fn two_arm(delta: f64, sigma: f64, cost: f64, reward_range_b: f64) -> Self {
        BoundQuery {
            sigma,
            cost,
            reward_range_b,
            scope: QueryScope::TwoArm { delta },
        }
    }

    pub fn k_arm(
        num_arms: usize,
        h: f64,
        delta2: f64,
        sigma: f64,
        cost: f64,
        reward_range_b: f64,
    ) -> Self {
        BoundQuery {
            sigma,
            cost,
            reward_range_b,
            scope: QueryScope::KArm {
                num_arms,
                h,
                delta2,
            },
        }
    }
}

/// Evaluate a guaranteed upper envelope at a query point.
///
/// Each curve is the literal multiplicative-plus-additive form of its
/// guarantee; simple-regret curves pick the branch matching the query's
/// regime. Mixing a two-arm curve with a K-arm query (or vice versa) is
/// rejected.
pub fn upper_curve(policy: UpperPolicy, query: &BoundQuery) -> Result<f64> {
    let sigma = query.sigma;
    let cost = query.cost;
    match (policy, query.scope) {
        (UpperPolicy::OracleMi, QueryScope::TwoArm { delta }) => {
            Ok(32.0 * hard_mi_two_arm(delta, sigma, cost)?.value + 2.0 * cost)
        }
        (UpperPolicy::OracleSr, QueryScope::TwoArm { delta }) => {
            Ok(32.0 * hard_sr_two_arm(delta, sigma, cost)?.value + 2.0 * cost)
        }
        (UpperPolicy::DbcareMi2, QueryScope::TwoArm { delta }) => {
            let hard = hard_mi_two_arm(delta, sigma, cost)?.value;
            let factor = ((E + 1.0) / (E * cost).powi(2)).ln();
            Ok(128.0 * factor * hard + 3.0 * cost)
        }
        (UpperPolicy::DbcareSr2, QueryScope::TwoArm { delta }) => {
            let hard = hard_sr_two_arm(delta, sigma, cost)?;
            let b = check_b(query.reward_range_b)?;
            match hard.regime {
                Regime::LargeGap => {
                    let factor =
                        (3.0 * b * sigma.powf(4.0 / 3.0) / cost.powf(5.0 / 3.0)).ln();
                    Ok(128.0 * factor * hard.value + 3.0 * cost)
                }
                Regime::SmallGap => {
                    Ok(4.0 * hard.value + 2.0 * (sigma * sigma * cost).cbrt() + 3.0 * cost)
                }
            }
        }
        (UpperPolicy::DbcareMiK, QueryScope::KArm { num_arms, h, .. }) => {
            check_k(num_arms)?;
            let k = num_arms as f64;
            let hard = hard_mi_k_arm(h, sigma, cost)?.value;
            let factor = k.ln() * (k * k.ln() / (E * cost * cost)).ln();
            Ok(760.0 * factor * hard + (k + 1.0) * cost)
        }
        (UpperPolicy::DbcareSrK, QueryScope::KArm { num_arms, h, delta2 }) => {
            check_k(num_arms)?;
            let k = num_arms as f64;
            let hard = hard_sr_k_arm(h, delta2, sigma, cost)?;
            let b = check_b(query.reward_range_b)?;
            match hard.regime {
                Regime::LargeGap => {
                    let factor = k.ln()
                        * (k * k.ln() * b * sigma.powf(4.0 / 3.0) / cost.powf(5.0 / 3.0)).ln();
                    Ok(550.0 * factor * hard.value + (k + 1.0) * cost)
                }
                Regime::SmallGap => {
                    let extra = 4.0 * k.ln() * (k * sigma * sigma * cost).cbrt();
                    Ok(hard.value + extra + (k + 1.0) * cost)
                }
            }
        }
        _ => Err(invalid(
            "upper curve scope mismatch: two-arm curves need two-arm queries and K-arm curves need K-arm queries",
        )),
    }
}

/// Worst-case level of the oracle's simple-regret guarantee.
pub fn oracle_sr_minimax(sigma: f64, cost: f64) -> Result<f64> {
    Ok(8.0 * hard_sr_minimax(2, sigma, cost)? + 2.0 * cost)
}

/// Worst-case level of the two-arm DBCARE simple-regret guarantee.
pub fn dbcare_sr_two_arm_minimax(sigma: f64, cost: f64) -> Result<f64> {
    Ok(9.0 * hard_sr_minimax(2, sigma, cost)? + 3.0 * cost)
}

/// Worst-case level of the K-arm DBCARE simple-regret guarantee.
pub fn dbcare_sr_k_arm_minimax(num_arms: usize, sigma: f64, cost: f64) -> Result<f64> {
    check_k(num_arms)?;
    let k = num_arms as f64;
    Ok(20.0 * k.ln() * hard_sr_minimax(num_arms, sigma, cost)? + (k + 1.0) * cost)
}

// ---------------------------------------------------------------------------
// Shared validation
// ---------------------------------------------------------------------------

fn check_common(sigma: f64, cost: f64) -> Result<()> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if cost <= 0.0 || !cost.is_finite() {
        return Err(invalid(format!("cost must be positive, got {cost}")));
    }
    Ok(())
}

fn check_delta_nonneg(delta: f64) -> Result<()> {
    if delta < 0.0 || delta.is_nan() {
        return Err(invalid(format!("delta must be nonnegative, got {delta}")));
    }
    Ok(())
}

fn check_h(h: f64) -> Result<()> {
    if h <= 0.0 || h.is_nan() {
        return Err(invalid(format!("complexity H must be positive, got {h}")));
    }
    Ok(())
}

fn check_k(num_arms: usize) -> Result<()> {
    if num_arms < 2 {
        return Err(invalid(format!("bounds need K >= 2, got {num_arms}")));
    }
    Ok(())
}

fn check_b(reward_range_b: f64) -> Result<f64> {
    if reward_range_b <= 0.0 || !reward_range_b.is_finite() {
        return Err(invalid(format!(
            "reward range B must be positive, got {reward_range_b}"
        )));
    }
    Ok(reward_range_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(actual: f64, expected: f64, rel_tol: f64) {
        let rel = (actual - expected).abs() / expected.abs();
        assert!(
            rel <= rel_tol,
            "actual {actual}, expected {expected}, rel {rel}"
        );
    }

    #[test]
    fn hard_two_arm_reference_values() {
        let mi = hard_mi_two_arm(1.0, 1.0, 1e-4).unwrap();
        close(mi.value, 2.552_585_092_994_046e-4, 1e-12);
        assert_eq!(mi.regime, Regime::LargeGap);

        let sr = hard_sr_two_arm(1.0, 1.0, 1e-4).unwrap();
        close(sr.value, 2.552_585_092_994_046e-4, 1e-12);

        let sr_small = hard_sr_two_arm(0.01, 1.0, 1e-4).unwrap();
        assert_eq!(sr_small.value, 0.0025);
        assert_eq!(sr_small.regime, Regime::SmallGap);

        let mi_small = hard_mi_two_arm(0.0, 1.0, 1e-4).unwrap();
        assert_eq!(mi_small.value, 0.25);
        assert_eq!(mi_small.regime, Regime::SmallGap);
    }

    #[test]
    fn hard_minimax_reference_values() {
        close(
            hard_sr_minimax(2, 1.0, 1e-4).unwrap(),
            0.012471913987849614,
            1e-12,
        );
        close(
            minimax_delta_star(2, 1.0, 1e-4).unwrap(),
            0.054833893008293646,
            1e-12,
        );
        close(
            hard_sr_minimax(5, 1.0, 1e-3).unwrap(),
            0.042_653_345_856_486_97,
            1e-12,
        );
        close(
            minimax_delta_star(5, 1.0, 1e-3).unwrap(),
            0.18752927621365129,
            1e-12,
        );
    }

    #[test]
    fn k_arm_bounds_reduce_to_two_arm() {
        for &delta in &[0.05, 0.3, 1.0, 2.5] {
            for &cost in &[1e-5, 1e-3] {
                for &sigma in &[0.5, 1.0, 2.0] {
                    let h = 1.0 / (delta * delta);
                    let two = hard_mi_two_arm(delta, sigma, cost).unwrap();
                    let k = hard_mi_k_arm(h, sigma, cost).unwrap();
                    close(k.value, two.value, 1e-12);
                    assert_eq!(k.regime, two.regime);

                    let two = hard_sr_two_arm(delta, sigma, cost).unwrap();
                    let k = hard_sr_k_arm(h, delta, sigma, cost).unwrap();
                    close(k.value, two.value, 1e-12);
                    assert_eq!(k.regime, two.regime);
                }
            }
        }
    }

    #[test]
    fn infinite_complexity_saturates() {
        let mi = hard_mi_k_arm(f64::INFINITY, 1.0, 1e-4).unwrap();
        assert_eq!(mi.value, 0.25);
        assert_eq!(mi.regime, Regime::SmallGap);
        let sr = hard_sr_k_arm(f64::INFINITY, 0.3, 1.0, 1e-4).unwrap();
        assert_eq!(sr.value, 0.075);
        assert_eq!(sr.regime, Regime::SmallGap);
    }

    #[test]
    fn hard_mi_two_arm_nonincreasing_past_boundary() {
        let sigma = 1.0_f64;
        let cost = 1e-4;
        let boundary = (sigma * sigma * cost).sqrt();
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let delta = boundary * 1.001_f64.powi(i) * 1.0001;
            let value = hard_mi_two_arm(delta, sigma, cost).unwrap().value;
            assert!(value <= prev + 1e-15, "not nonincreasing at delta {delta}");
            prev = value;
        }
    }

    #[test]
    fn hard_sr_two_arm_peaks_at_delta_star() {
        let sigma = 1.0;
        let cost = 1e-4;
        let peak = minimax_delta_star(2, sigma, cost).unwrap();
        let at_peak = hard_sr_two_arm(peak, sigma, cost).unwrap().value;
        for &delta in &[
            peak / 10.0,
            peak / 2.0,
            peak * 0.99,
            peak * 1.01,
            peak * 3.0,
        ] {
            let v = hard_sr_two_arm(delta, sigma, cost).unwrap().value;
            assert!(v <= at_peak + 1e-15, "value {v} above peak {at_peak}");
        }
        close(at_peak, hard_sr_minimax(2, sigma, cost).unwrap(), 1e-12);
    }

    #[test]
    fn upper_curve_reference_values() {
        let query = BoundQuery::two_arm(1.0, 1.0, 1e-4, 1.0);
        close(
            upper_curve(UpperPolicy::DbcareMi2, &query).unwrap(),
            0.579_722_682_759_506,
            1e-12,
        );
        close(
            upper_curve(UpperPolicy::OracleMi, &query).unwrap(),
            0.008_368_272_297_580_946,
            1e-12,
        );
        close(
            upper_curve(UpperPolicy::DbcareSr2, &query).unwrap(),
            0.537_745_511_371_268_5,
            1e-12,
        );
        close(
            oracle_sr_minimax(1.0, 1e-4).unwrap(),
            0.099_975_311_902_796_9,
            1e-12,
        );
    }

    #[test]
    fn oracle_mi_envelope_saturates_below_boundary() {
        let cost = 1e-4;
        let query = BoundQuery::two_arm(1e-3, 1.0, cost, 1.0);
        let value = upper_curve(UpperPolicy::OracleMi, &query).unwrap();
        close(value, 8.0 + 2.0 * cost, 1e-15);
    }

    #[test]
    fn upper_curves_dominate_their_hard_functions() {
        for &cost in &[1e-5, 1e-4, 1e-3] {
            for i in 0..40 {
                let delta = 0.01 * 1.2_f64.powi(i);
                let query = BoundQuery::two_arm(delta, 1.0, cost, 1.0);
                let hard_mi = hard_mi_two_arm(delta, 1.0, cost).unwrap().value;
                let hard_sr = hard_sr_two_arm(delta, 1.0, cost).unwrap().value;
                assert!(upper_curve(UpperPolicy::OracleMi, &query).unwrap() >= hard_mi);
                assert!(upper_curve(UpperPolicy::DbcareMi2, &query).unwrap() >= hard_mi);
                assert!(upper_curve(UpperPolicy::OracleSr, &query).unwrap() >= hard_sr);
                assert!(upper_curve(UpperPolicy::DbcareSr2, &query).unwrap() >= hard_sr);

                for k in [3usize, 8, 32] {
                    let h = (k - 1) as f64 / (delta * delta);
                    let query = BoundQuery::k_arm(k, h, delta, 1.0, cost, 1.0);
                    let hard_mi = hard_mi_k_arm(h, 1.0, cost).unwrap().value;
                    let hard_sr = hard_sr_k_arm(h, delta, 1.0, cost).unwrap().value;
                    assert!(upper_curve(UpperPolicy::DbcareMiK, &query).unwrap() >= hard_mi);
                    assert!(upper_curve(UpperPolicy::DbcareSrK, &query).unwrap() >= hard_sr);
                }
            }
        }
    }

    #[test]
    fn scope_mismatch_is_rejected() {
        let two = BoundQuery::two_arm(1.0, 1.0, 1e-4, 1.0);
        let karm = BoundQuery::k_arm(5, 4.0, 1.0, 1.0, 1e-4, 1.0);
        assert!(upper_curve(UpperPolicy::DbcareMiK, &two).is_err());
        assert!(upper_curve(UpperPolicy::OracleMi, &karm).is_err());
    }

    #[test]
    fn phase_oracles_match_closed_forms_at_spot_checks() {
        let cases = [(28.0, 1.0, 1e-4), (0.5, 2.0, 1e-3), (1e5, 0.5, 1e-5)];
        for &(h, sigma, cost) in &cases {
            let oracle = phase_oracle_mi(h, sigma, cost).unwrap();
            let hard = hard_mi_k_arm(h, sigma, cost).unwrap().value;
            close(oracle.min_value, hard, 1e-9);

            let s2 = sigma * sigma;
            let closed_arg = f64::max(0.0, s2 * h / 2.0 * (1.0 / (s2 * cost * h)).ln());
            assert!(
                (oracle.argmin - closed_arg).abs() <= 1e-6 * (1.0 + closed_arg),
                "argmin {} vs {closed_arg}",
                oracle.argmin
            );

            for &delta2 in &[0.08, 1.0] {
                let oracle = phase_oracle_sr(h, delta2, sigma, cost).unwrap();
                let hard = hard_sr_k_arm(h, delta2, sigma, cost).unwrap().value;
                close(oracle.min_value, hard, 1e-9);
            }
        }
    }

    #[test]
    fn minimax_oracle_matches_closed_form() {
        for k in [2usize, 5, 32] {
            for &cost in &[1e-3, 1e-4, 1e-5] {
                let oracle = minimax_oracle_sr(k, 1.0, cost).unwrap();
                close(
                    oracle.max_value,
                    hard_sr_minimax(k, 1.0, cost).unwrap(),
                    1e-6,
                );
                close(
                    oracle.delta_star,
                    minimax_delta_star(k, 1.0, cost).unwrap(),
                    1e-6,
                );
            }
        }
    }

    #[test]
    fn boundary_continuity_is_tight() {
        for &sigma in &[0.5_f64, 1.0, 2.0] {
            for &cost in &[1e-6, 1e-4, 1e-2] {
                let s2c = sigma * sigma * cost;

                let at = hard_mi_two_arm(s2c.sqrt(), sigma, cost).unwrap();
                close(at.value, 0.25, 1e-12);
                let at = hard_sr_two_arm(s2c.cbrt(), sigma, cost).unwrap();
                close(at.value, s2c.cbrt() / 4.0, 1e-12);
                let at = hard_mi_k_arm(1.0 / s2c, sigma, cost).unwrap();
                close(at.value, 0.25, 1e-12);
                for &delta2 in &[0.1, 0.9] {
                    let at = hard_sr_k_arm(delta2 / s2c, delta2, sigma, cost).unwrap();
                    close(at.value, delta2 / 4.0, 1e-12);
                }
            }
        }
    }
}
