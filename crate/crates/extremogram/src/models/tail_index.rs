//! Tail index of a GARCH(1,1) process: the positive root of E C^{alpha/2} = 1
//! with C = alpha1 Z^2 + beta1.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::noise::NoiseSpec;

const ALPHA_LO: f64 = 0.01;
const ALPHA_HI: f64 = 20.0;
const ALPHA_TOL: f64 = 1e-4;

/// Root of the moment equation together with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIndexSolution {
    pub alpha: f64,
    /// Monte Carlo standard error of the moment function at the root.
    pub h_std_err: f64,
    pub draws: usize,
}

/// Solve E(alpha1 Z^2 + beta1)^{alpha/2} = 1 for alpha by bisection on a
/// fixed sample of C-draws (common random numbers), so the solved function is
/// deterministic and monotone across the bracketing steps.
pub fn solve_garch_tail_index(
    alpha1: f64,
    beta1: f64,
    noise: &NoiseSpec,
    mc_replicates: usize,
    seed: u64,
) -> Result<TailIndexSolution> {
    if !(alpha1 >= 0.0) || !(beta1 >= 0.0) {
        return Err(Error::invalid("alpha1/beta1", "must be nonnegative"));
    }
    if mc_replicates == 0 {
        return Err(Error::invalid("mc_replicates", "must be at least 1"));
    }
    noise.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; mc_replicates];
    standardized_garch_noise(noise)?.sample_into(&mut rng, &mut z);
    let ln_c: Vec<f64> = z
        .iter()
        .map(|&z| (alpha1 * z * z + beta1).ln())
        .collect();

    if !ln_c.iter().any(|&l| l > 0.0) {
        return Err(Error::NoRoot(
            "C = alpha1 Z^2 + beta1 never exceeds 1 in the sample".into(),
        ));
    }
    let mean_ln = ln_c.iter().sum::<f64>() / ln_c.len() as f64;
    if mean_ln >= 0.0 {
        return Err(Error::NoRoot(format!(
            "estimated E log C = {:.4} is nonnegative; the recursion diverges",
            mean_ln
        )));
    }

    // h(alpha) = mean of exp(alpha/2 * ln C); h(0) = 1, initially decreasing,
    // convex, so it crosses 1 from below exactly once.
    let h = |alpha: f64| -> f64 {
        ln_c.iter().map(|&l| (0.5 * alpha * l).exp()).sum::<f64>() / ln_c.len() as f64
    };
    if h(ALPHA_LO) >= 1.0 {
        return Err(Error::NoRoot(format!(
            "moment function already exceeds 1 at alpha = {}",
            ALPHA_LO
        )));
    }
    if h(ALPHA_HI) <= 1.0 {
        return Err(Error::NotConverged(format!(
            "no root of the moment equation below alpha = {}",
            ALPHA_HI
        )));
    }
    let (mut lo, mut hi) = (ALPHA_LO, ALPHA_HI);
    while hi - lo > ALPHA_TOL {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);

    let mean = h(alpha);
    let var = ln_c
        .iter()
        .map(|&l| {
            let v = (0.5 * alpha * l).exp() - mean;
            v * v
        })
        .sum::<f64>()
        / ln_c.len() as f64;
    Ok(TailIndexSolution {
        alpha,
        h_std_err: (var / ln_c.len() as f64).sqrt(),
        draws: mc_replicates,
    })
}

/// GARCH noise must have mean zero and unit variance: Student noise is
/// rescaled accordingly (requiring nu > 2), Gaussian must have scale one.
pub(crate) fn standardized_garch_noise(noise: &NoiseSpec) -> Result<NoiseSpec> {
    use crate::models::noise::NoiseLaw;
    match noise.law {
        NoiseLaw::Gaussian => {
            if noise.scale != 1.0 {
                return Err(Error::invalid(
                    "scale",
                    "GARCH noise must have unit variance; use scale = 1",
                ));
            }
            Ok(*noise)
        }
        NoiseLaw::StudentT { nu } => {
            if nu <= 2.0 {
                return Err(Error::invalid(
                    "nu",
                    "GARCH noise needs finite variance: nu must exceed 2",
                ));
            }
            if noise.scale != 1.0 {
                return Err(Error::invalid(
                    "scale",
                    "GARCH noise must have unit variance; use scale = 1",
                ));
            }
            Ok(NoiseSpec::student(nu).with_scale(((nu - 2.0) / nu).sqrt()))
        }
        _ => Err(Error::invalid(
            "noise",
            "GARCH noise must be Gaussian or Student t",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    #[test]
    fn arch_with_unit_coefficient_has_index_two() {
        // E(Z^2)^{alpha/2} = E|Z|^alpha equals 1 at alpha = 2 since E Z^2 = 1.
        let s = solve_garch_tail_index(1.0, 0.0, &NoiseSpec::gaussian(), 1_000_000, 1).unwrap();
        assert!((s.alpha - 2.0).abs() < 0.05, "alpha = {}", s.alpha);
    }

    #[test]
    fn arch_half_matches_gaussian_moment_formula() {
        // Deterministic oracle: E|Z|^alpha = 2^{alpha/2} Gamma((alpha+1)/2) / sqrt(pi),
        // so h(alpha) = Gamma((alpha+1)/2) / sqrt(pi) for alpha1 = 0.5. Root by
        // bisection on the analytic formula.
        let target = |alpha: f64| gamma((alpha + 1.0) / 2.0) / std::f64::consts::PI.sqrt() - 1.0;
        let (mut lo, mut hi) = (0.1, 10.0);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if target(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let analytic = 0.5 * (lo + hi);
        let s = solve_garch_tail_index(0.5, 0.0, &NoiseSpec::gaussian(), 1_000_000, 2).unwrap();
        assert!(
            (s.alpha - analytic).abs() < 0.08,
            "solver {} vs analytic {}",
            s.alpha,
            analytic
        );
    }

    #[test]
    fn beta_at_least_one_has_no_root() {
        assert!(matches!(
            solve_garch_tail_index(0.3, 1.0, &NoiseSpec::gaussian(), 100_000, 3),
            Err(Error::NoRoot(_))
        ));
        // C < 1 almost surely: no upcrossing possible
        assert!(matches!(
            solve_garch_tail_index(0.0, 0.5, &NoiseSpec::gaussian(), 1_000, 3),
            Err(Error::NoRoot(_))
        ));
    }

    #[test]
    fn student_noise_is_standardized() {
        let s = standardized_garch_noise(&NoiseSpec::student(5.0)).unwrap();
        assert!((s.scale - (3.0f64 / 5.0).sqrt()).abs() < 1e-15);
        assert!(standardized_garch_noise(&NoiseSpec::student(2.0)).is_err());
        assert!(standardized_garch_noise(&NoiseSpec::pareto(2.0, 0.5)).is_err());
    }

    #[test]
    fn common_draws_make_the_solution_deterministic() {
        let a = solve_garch_tail_index(0.8, 0.1, &NoiseSpec::gaussian(), 200_000, 9).unwrap();
        let b = solve_garch_tail_index(0.8, 0.1, &NoiseSpec::gaussian(), 200_000, 9).unwrap();
        assert_eq!(a, b);
    }
}
