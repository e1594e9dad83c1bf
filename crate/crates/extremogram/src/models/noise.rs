//! Noise laws for the model families and their samplers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distribution family of the innovation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum NoiseLaw {
    /// Symmetric alpha-stable via the Chambers-Mallows-Stuck transform.
    /// alpha = 2 degenerates to a Gaussian with variance 2 * scale^2.
    SymmetricAlphaStable { alpha: f64 },
    /// |Z| is Pareto(alpha) with P(|Z| > x) = (x / scale)^-alpha for
    /// x >= scale; the sign is +1 with probability p.
    TwoSidedPareto { alpha: f64, p: f64 },
    StudentT { nu: f64 },
    Gaussian,
}

/// A noise law together with its scale factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    #[serde(flatten)]
    pub law: NoiseLaw,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

impl NoiseSpec {
    pub fn gaussian() -> Self {
        NoiseSpec {
            law: NoiseLaw::Gaussian,
            scale: 1.0,
        }
    }

    pub fn stable(alpha: f64) -> Self {
        NoiseSpec {
            law: NoiseLaw::SymmetricAlphaStable { alpha },
            scale: 1.0,
        }
    }

    pub fn pareto(alpha: f64, p: f64) -> Self {
        NoiseSpec {
            law: NoiseLaw::TwoSidedPareto { alpha, p },
            scale: 1.0,
        }
    }

    pub fn student(nu: f64) -> Self {
        NoiseSpec {
            law: NoiseLaw::StudentT { nu },
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Tail index of regular variation, when the law has one.
    pub fn tail_index(&self) -> Option<f64> {
        match self.law {
            NoiseLaw::SymmetricAlphaStable { alpha } if alpha < 2.0 => Some(alpha),
            NoiseLaw::TwoSidedPareto { alpha, .. } => Some(alpha),
            NoiseLaw::StudentT { nu } => Some(nu),
            _ => None,
        }
    }

    /// Positive-tail balance p = lim P(Z > x) / P(|Z| > x).
    pub fn tail_balance(&self) -> f64 {
        match self.law {
            NoiseLaw::TwoSidedPareto { p, .. } => p,
            _ => 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::invalid("scale", "must be finite and positive"));
        }
        match self.law {
            NoiseLaw::SymmetricAlphaStable { alpha } => {
                if !(alpha > 0.0 && alpha <= 2.0) {
                    return Err(Error::invalid(
                        "alpha",
                        format!("stability index {} not in (0, 2]", alpha),
                    ));
                }
            }
            NoiseLaw::TwoSidedPareto { alpha, p } => {
                if !(alpha > 0.0) {
                    return Err(Error::invalid("alpha", "tail index must be positive"));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid("p", "tail balance must lie in [0, 1]"));
                }
            }
            NoiseLaw::StudentT { nu } => {
                if !(nu > 0.0) {
                    return Err(Error::invalid("nu", "degrees of freedom must be positive"));
                }
            }
            NoiseLaw::Gaussian => {}
        }
        Ok(())
    }

    /// Fill `out` with i.i.d. draws.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match self.law {
            NoiseLaw::Gaussian => {
                for v in out.iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *v = self.scale * z;
                }
            }
            NoiseLaw::StudentT { nu } => {
                let t = StudentT::new(nu).expect("validated degrees of freedom");
                for v in out.iter_mut() {
                    *v = self.scale * t.sample(rng);
                }
            }
            NoiseLaw::TwoSidedPareto { alpha, p } => {
                for v in out.iter_mut() {
                    let u: f64 = rng.random::<f64>().max(1e-300);
                    let magnitude = self.scale * u.powf(-1.0 / alpha);
                    let sign = if rng.random::<f64>() < p { 1.0 } else { -1.0 };
                    *v = sign * magnitude;
                }
            }
            NoiseLaw::SymmetricAlphaStable { alpha } => {
                for v in out.iter_mut() {
                    *v = self.scale * sample_sas(rng, alpha);
                }
            }
        }
    }
}

/// One symmetric alpha-stable draw by the Chambers-Mallows-Stuck transform.
fn sample_sas<R: Rng + ?Sized>(rng: &mut R, alpha: f64) -> f64 {
    let u: f64 = rng.random::<f64>().clamp(1e-16, 1.0 - 1e-16);
    let w: f64 = -(rng.random::<f64>().max(1e-300)).ln();
    let v = std::f64::consts::PI * (u - 0.5);
    if (alpha - 1.0).abs() < 1e-12 {
        return v.tan();
    }
    let av = alpha * v;
    (av.sin() / v.cos().powf(1.0 / alpha))
        * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Draw `count` i.i.d. values from the law; deterministic given the seed.
pub fn sample_noise(spec: &NoiseSpec, count: usize, seed: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0.0; count];
    spec.sample_into(&mut rng, &mut out);
    Ok(out)
}
