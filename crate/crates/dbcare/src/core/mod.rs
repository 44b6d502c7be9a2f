//! Bandit instances and their derived quantities.
//!
//! An instance is a list of arm reward distributions together with the
//! sub-Gaussian proxy `sigma` the policies are told about and the reward
//! range `B` used by simple-regret parameterizations. Gap profiles,
//! complexity `H`, and sampling all live here; policies never look at an
//! instance beyond [`BanditInstance::sample`] and the scalar parameters they
//! were explicitly given.

mod rng;

pub use rng::RngStream;

use crate::{invalid, Result};
use rand_distr::Distribution;

// ---------------------------------------------------------------------------
// Arm distributions
// ---------------------------------------------------------------------------

/// Reward distribution of a single arm.
#[derive(Debug, Clone, PartialEq)]
pub enum ArmDistribution {
    /// Normal rewards with the given mean and standard deviation.
    Gaussian { mean: f64, sd: f64 },
    /// Rewards in `{0, 1}` with success probability `p`.
    Bernoulli { p: f64 },
    /// Finitely supported rewards; `probs[i]` is the probability of
    /// `support[i]`.
    Discrete { support: Vec<f64>, probs: Vec<f64> },
}

impl ArmDistribution {
    /// True mean reward.
    pub fn mean(&self) -> f64 {
        match self {
            ArmDistribution::Gaussian { mean, .. } => *mean,
            ArmDistribution::Bernoulli { p } => *p,
            ArmDistribution::Discrete { support, probs } => {
                support.iter().zip(probs).map(|(x, p)| x * p).sum()
            }
        }
    }

    /// Smallest `s` such that the distribution is `s`-sub-Gaussian: the
    /// standard deviation for Gaussian arms and half the reward range for
    /// bounded arms (Hoeffding).
    pub fn sub_gaussian_constant(&self) -> f64 {
        match self {
            ArmDistribution::Gaussian { sd, .. } => *sd,
            ArmDistribution::Bernoulli { .. } => 0.5,
            ArmDistribution::Discrete { support, .. } => {
                let lo = support.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = support.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (hi - lo) / 2.0
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ArmDistribution::Gaussian { mean, sd } => {
                if !mean.is_finite() {
                    return Err(invalid(format!("gaussian mean must be finite, got {mean}")));
                }
                if *sd <= 0.0 || !sd.is_finite() {
                    return Err(invalid(format!("gaussian sd must be positive, got {sd}")));
                }
            }
            ArmDistribution::Bernoulli { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(invalid(format!("bernoulli p must lie in [0, 1], got {p}")));
                }
            }
            ArmDistribution::Discrete { support, probs } => {
                if support.is_empty() || support.len() != probs.len() {
                    return Err(invalid(
                        "discrete arm needs matching non-empty support and probability lists",
                    ));
                }
                if support.iter().any(|x| !x.is_finite()) {
                    return Err(invalid("discrete support values must be finite"));
                }
                if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(invalid("discrete probabilities must lie in [0, 1]"));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(invalid(format!(
                        "discrete probabilities must sum to 1, got {total}"
                    )));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

/// A best-arm identification problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<ArmDistribution>,
    sigma: f64,
    reward_range_b: f64,
}

impl BanditInstance {
    /// Build an instance from explicit arms.
    ///
    /// `sigma` is the sub-Gaussian proxy handed to policies and must dominate
    /// every arm's own constant. `reward_range_b` is the range bound `B` used
    /// by simple-regret parameterizations.
    pub fn new(arms: Vec<ArmDistribution>, sigma: f64, reward_range_b: f64) -> Result<Self> {
        if arms.len() < 2 {
            return Err(invalid(format!(
                "an instance needs at least 2 arms, got {}",
                arms.len()
            )));
        }
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(invalid(format!("sigma must be positive, got {sigma}")));
        }
        if reward_range_b <= 0.0 || !reward_range_b.is_finite() {
            return Err(invalid(format!(
                "reward range B must be positive, got {reward_range_b}"
            )));
        }
        for arm in &arms {
            arm.validate()?;
            let own = arm.sub_gaussian_constant();
            if sigma < own {
                return Err(invalid(format!(
                    "sigma {sigma} is below an arm's sub-Gaussian constant {own}"
                )));
            }
        }
        Ok(BanditInstance {
            arms,
            sigma,
            reward_range_b,
        })
    }

    /// Two Gaussian arms with means `+delta/2` and `-delta/2`.
    pub fn gaussian_two_arm(delta: f64, sigma: f64) -> Result<Self> {
        if delta < 0.0 || !delta.is_finite() {
            return Err(invalid(format!("delta must be nonnegative, got {delta}")));
        }
        let arms = vec![
            ArmDistribution::Gaussian {
                mean: delta / 2.0,
                sd: sigma,
            },
            ArmDistribution::Gaussian {
                mean: -delta / 2.0,
                sd: sigma,
            },
        ];
        BanditInstance::new(arms, sigma, f64::max(1.0, delta))
    }

    /// Two Bernoulli arms with success probabilities `0.5 + delta/2` and
    /// `0.5 - delta/2`. The proxy is the Hoeffding constant `1/2` and `B = 1`.
    pub fn bernoulli_two_arm(delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(invalid(format!("delta must lie in [0, 1], got {delta}")));
        }
        let arms = vec![
            ArmDistribution::Bernoulli {
                p: 0.5 + delta / 2.0,
            },
            ArmDistribution::Bernoulli {
                p: 0.5 - delta / 2.0,
            },
        ];
        BanditInstance::new(arms, 0.5, 1.0)
    }

    /// `k` Gaussian arms: one at `delta`, the rest at zero, all with
    /// standard deviation `sigma`. Complexity is `H = (k - 1) / delta^2`.
    pub fn one_sparse(k: usize, delta: f64, sigma: f64) -> Result<Self> {
        if k < 2 {
            return Err(invalid(format!("one_sparse needs k >= 2, got {k}")));
        }
        if delta <= 0.0 || !delta.is_finite() {
            return Err(invalid(format!("delta must be positive, got {delta}")));
        }
        let mut arms = vec![ArmDistribution::Gaussian {
            mean: delta,
            sd: sigma,
        }];
        arms.extend((1..k).map(|_| ArmDistribution::Gaussian {
            mean: 0.0,
            sd: sigma,
        }));
        BanditInstance::new(arms, sigma, f64::max(1.0, delta))
    }

    /// `k` Gaussian arms whose gaps grow linearly from `delta2` to
    /// `2 * delta2`: means are `delta2, 0, -delta2 / (k - 2), ...,
    /// -delta2`. Requires `k >= 3`.
    pub fn linear_decay(k: usize, delta2: f64, sigma: f64) -> Result<Self> {
        if k < 3 {
            return Err(invalid(format!("linear_decay needs k >= 3, got {k}")));
        }
        if delta2 <= 0.0 || !delta2.is_finite() {
            return Err(invalid(format!("delta2 must be positive, got {delta2}")));
        }
        let mut arms = vec![ArmDistribution::Gaussian {
            mean: delta2,
            sd: sigma,
        }];
        arms.extend((2..=k).map(|j| ArmDistribution::Gaussian {
            mean: -delta2 * (j - 2) as f64 / (k - 2) as f64,
            sd: sigma,
        }));
        BanditInstance::new(arms, sigma, f64::max(1.0, 2.0 * delta2))
    }

    /// Same instance with a different reward range bound `B`.
    pub fn with_reward_range(mut self, reward_range_b: f64) -> Result<Self> {
        if reward_range_b <= 0.0 || !reward_range_b.is_finite() {
            return Err(invalid(format!(
                "reward range B must be positive, got {reward_range_b}"
            )));
        }
        self.reward_range_b = reward_range_b;
        Ok(self)
    }

    /// Same arms in permuted order: arm `i` of the result is arm
    /// `permutation[i]` of `self`.
    pub fn permuted(&self, permutation: &[usize]) -> Result<Self> {
        let k = self.arms.len();
        let mut seen = vec![false; k];
        if permutation.len() != k
            || permutation
                .iter()
                .any(|&i| i >= k || std::mem::replace(&mut seen[i], true))
        {
            return Err(invalid("permutation must visit each arm exactly once"));
        }
        Ok(BanditInstance {
            arms: permutation.iter().map(|&i| self.arms[i].clone()).collect(),
            sigma: self.sigma,
            reward_range_b: self.reward_range_b,
        })
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn reward_range_b(&self) -> f64 {
        self.reward_range_b
    }

    pub fn arms(&self) -> &[ArmDistribution] {
        &self.arms
    }

    /// True mean of one arm. Panics on an out-of-range index.
    pub fn mean(&self, arm: usize) -> f64 {
        self.arms[arm].mean()
    }

    /// All true means in arm order.
    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmDistribution::mean).collect()
    }

    /// Draw one reward from an arm, advancing the stream by however many
    /// draws the sampler consumes. Panics on an out-of-range index.
    pub fn sample(&self, arm: usize, stream: &mut RngStream) -> f64 {
        match &self.arms[arm] {
            ArmDistribution::Gaussian { mean, sd } => {
                let z: f64 = rand_distr::StandardNormal.sample(stream);
                mean + sd * z
            }
            ArmDistribution::Bernoulli { p } => {
                if stream.next_f64() < *p {
                    1.0
                } else {
                    0.0
                }
            }
            ArmDistribution::Discrete { support, probs } => {
                let u = stream.next_f64();
                let mut acc = 0.0;
                for (x, p) in support.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return *x;
                    }
                }
                *support.last().expect("validated non-empty support")
            }
        }
    }

    /// Gap structure of the instance.
    pub fn gap_profile(&self) -> GapProfile {
        GapProfile::from_means(&self.means())
    }

    /// Sum of inverse squared gaps; infinite when the best mean is tied.
    pub fn complexity_h(&self) -> f64 {
        self.gap_profile().complexity_h()
    }
}

// ---------------------------------------------------------------------------
// Gap profiles
// ---------------------------------------------------------------------------

/// Sorted suboptimality gaps of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    best_mean: f64,
    gaps: Vec<f64>,
    best_arms: Vec<usize>,
}

impl GapProfile {
    /// Profile of an explicit mean vector (at least two entries, all finite).
    pub fn from_means(means: &[f64]) -> GapProfile {
        assert!(means.len() >= 2, "a gap profile needs at least 2 means");
        assert!(
            means.iter().all(|m| m.is_finite()),
            "gap profile means must be finite"
        );
        let best_mean = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let best_arms: Vec<usize> = means
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == best_mean)
            .map(|(i, _)| i)
            .collect();
        let skip = best_arms[0];
        let mut gaps: Vec<f64> = means
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, &m)| best_mean - m)
            .collect();
        gaps.sort_by(|a, b| a.partial_cmp(b).expect("finite gaps"));
        GapProfile {
            best_mean,
            gaps,
            best_arms,
        }
    }

    /// Largest true mean.
    pub fn best_mean(&self) -> f64 {
        self.best_mean
    }

    /// Gaps of the non-best arms, ascending; ties with the best arm appear
    /// as zeros. Length is one less than the number of arms.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Smallest nonzero-or-not gap, the `Delta_2` of the instance.
    pub fn delta2(&self) -> f64 {
        self.gaps[0]
    }

    /// Indices of all arms achieving the best mean.
    pub fn best_arms(&self) -> &[usize] {
        &self.best_arms
    }

    /// Whether recommending `arm` counts as a correct identification.
    pub fn is_best(&self, arm: usize) -> bool {
        self.best_arms.contains(&arm)
    }

    /// Complexity `H`, the sum of inverse squared gaps. Tied best arms give
    /// a zero gap and therefore `H = infinity`; that is a value, not an
    /// error.
    pub fn complexity_h(&self) -> f64 {
        self.gaps.iter().map(|g| 1.0 / (g * g)).sum()
    }
}

/// Derive a child seed from a master seed and a path of tags, for handing
/// independent sub-experiments their own reproducible seeds.
pub fn derive_seed(master_seed: u64, tags: &[u64]) -> u64 {
    let mut stream = RngStream::new(master_seed, u64::MAX);
    for &tag in tags {
        stream = stream.substream(tag);
    }
    stream.substream(0).next_raw()
}
