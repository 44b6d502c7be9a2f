//! Five-arm dose-finding instances with published response profiles.
//!
//! Both instances score responses on [0, 1], so rewards are 1/2-sub-Gaussian
//! and the reward range bound is B = 1. The binary instance treats each
//! patient outcome as response versus no response; the leveled instance
//! scores none, partial, good, and full response as 0, 0.2, 0.5, and 0.7.

use crate::core::{ArmDistribution, BanditInstance};

/// Response rates of the binary instance, best arm first.
pub const DRUG_BINARY_MEANS: [f64; 5] = [0.537, 0.469, 0.465, 0.360, 0.340];

/// Mean scores of the leveled instance, best arm first.
pub const DRUG_LEVELED_MEANS: [f64; 5] = [0.230, 0.227, 0.200, 0.196, 0.102];

/// Outcome levels shared by every leveled arm.
const LEVELS: [f64; 4] = [0.0, 0.2, 0.5, 0.7];

/// How responder mass splits across the three positive levels.
const RESPONDER_SPLIT: [f64; 3] = [0.5, 0.3, 0.2];

/// The binary-outcome instance: five Bernoulli arms.
pub fn drug_binary() -> BanditInstance {
    let arms = DRUG_BINARY_MEANS
        .iter()
        .map(|&p| ArmDistribution::Bernoulli { p })
        .collect();
    BanditInstance::new(arms, 0.5, 1.0).expect("published rates form a valid instance")
}

/// The leveled-outcome instance: five arms over the shared outcome levels.
///
/// Each arm's responder probability `r` is chosen so the mean score matches
/// the published value: the per-responder mean score is 0.39, so
/// `r = mean / 0.39`, with mass `(1 - r, 0.5 r, 0.3 r, 0.2 r)` over the
/// levels.
pub fn drug_leveled() -> BanditInstance {
    let per_responder_mean: f64 = RESPONDER_SPLIT
        .iter()
        .zip(&LEVELS[1..])
        .map(|(w, v)| w * v)
        .sum();
    let arms = DRUG_LEVELED_MEANS
        .iter()
        .map(|&mean| {
            let r = mean / per_responder_mean;
            let probs = vec![
                1.0 - r,
                RESPONDER_SPLIT[0] * r,
                RESPONDER_SPLIT[1] * r,
                RESPONDER_SPLIT[2] * r,
            ];
            ArmDistribution::Discrete {
                support: LEVELS.to_vec(),
                probs,
            }
        })
        .collect();
    BanditInstance::new(arms, 0.5, 1.0).expect("published scores form a valid instance")
}

/// Both dose-finding instances, binary first.
pub fn drug_instances() -> (BanditInstance, BanditInstance) {
    (drug_binary(), drug_leveled())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_means_match_published_rates() {
        let instance = drug_binary();
        for (arm, &p) in instance.arms().iter().zip(DRUG_BINARY_MEANS.iter()) {
            assert_eq!(arm.mean(), p);
        }
        assert_eq!(instance.sigma(), 0.5);
        assert_eq!(instance.reward_range_b(), 1.0);
    }

    #[test]
    fn leveled_means_match_published_scores() {
        let instance = drug_leveled();
        for (arm, &m) in instance.arms().iter().zip(DRUG_LEVELED_MEANS.iter()) {
            assert!((arm.mean() - m).abs() < 1e-12, "{} vs {m}", arm.mean());
        }
    }

    #[test]
    fn leveled_probabilities_are_a_distribution() {
        let instance = drug_leveled();
        for arm in instance.arms() {
            match arm {
                ArmDistribution::Discrete { support, probs } => {
                    assert_eq!(support, &LEVELS);
                    assert!(probs.iter().all(|&p| (0.0..=1.0).contains(&p)));
                    let total: f64 = probs.iter().sum();
                    assert!((total - 1.0).abs() < 1e-12);
                }
                other => panic!("unexpected arm {other:?}"),
            }
        }
    }

    #[test]
    fn gap_profiles_match_published_differences() {
        let (binary, leveled) = drug_instances();
        let profile = binary.gap_profile();
        let expected: Vec<f64> = DRUG_BINARY_MEANS[1..]
            .iter()
            .map(|m| DRUG_BINARY_MEANS[0] - m)
            .collect();
        let mut sorted = expected.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, e) in profile.gaps().iter().zip(sorted.iter()) {
            assert!((g - e).abs() < 1e-12);
        }
        assert!((profile.delta2() - (0.537 - 0.469)).abs() < 1e-12);
        assert!((leveled.gap_profile().delta2() - (0.230 - 0.227)).abs() < 1e-12);
    }
}
