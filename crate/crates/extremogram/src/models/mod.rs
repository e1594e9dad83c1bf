//! Model families with known extremograms: simulators, noise generators,
//! theoretical oracles and the GARCH tail-index solver.

mod arma;
mod noise;
mod oracles;
mod tail_index;

pub use arma::{arma_psi_coefficients, default_truncation, min_root_modulus};
pub use noise::{sample_noise, NoiseLaw, NoiseSpec};
pub use oracles::{
    arch1_extremogram, arch_decay_bound, band_example_oracle, garch11_extremogram, lambda_alpha,
    linear_process_extremogram, ar1_extremogram, ou_coefficients, sas_ou_extremogram,
    sv_extremogram, BandExampleValues, OracleMethod, TheoreticalExtremogram,
};
pub use tail_index::{solve_garch_tail_index, TailIndexSolution};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// One of the generative families the crate can simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelFamily {
    /// X_t = sigma_t Z_t with log sigma_t a stationary Gaussian AR(1) with
    /// mean zero and unit marginal variance, independent of the noise.
    SvLognormal { phi_sigma: f64, noise: NoiseSpec },
    /// X_t = sigma_t Z_t, sigma_t^2 = alpha0 + alpha1 X_{t-1}^2 + beta1 sigma_{t-1}^2.
    Garch11 {
        alpha0: f64,
        alpha1: f64,
        beta1: f64,
        noise: NoiseSpec,
    },
    /// Causal ARMA(p, q) driven by the given noise.
    Arma {
        phi: Vec<f64>,
        theta: Vec<f64>,
        noise: NoiseSpec,
    },
    /// X_t = sum_j psi_j Z_{t-j} with symmetric alpha-stable noise.
    SasLinear {
        psi: Vec<f64>,
        alpha: f64,
        scale: f64,
    },
}

/// A model family plus its simulation burn-in.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub family: ModelFamily,
    pub burn_in: usize,
}

impl ModelSpec {
    /// Family with the default burn-in: 10^4 steps for the recursive models,
    /// none for the causal filters (their pre-samples play that role).
    pub fn new(family: ModelFamily) -> Self {
        let burn_in = match family {
            ModelFamily::SvLognormal { .. } | ModelFamily::Garch11 { .. } => 10_000,
            _ => 0,
        };
        ModelSpec { family, burn_in }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| Error::invalid("model", e.to_string()))?;
        doc.to_spec()
    }
}

/// Draw a length-n realization of the model; bit-identical for identical
/// (spec, n, seed).
pub fn simulate(spec: &ModelSpec, n: usize, seed: u64) -> Result<TimeSeries> {
    if n == 0 {
        return Err(Error::invalid("n", "series length must be at least 1"));
    }
    match &spec.family {
        ModelFamily::SvLognormal { phi_sigma, noise } => {
            simulate_sv(*phi_sigma, noise, spec.burn_in, n, seed)
        }
        ModelFamily::Garch11 {
            alpha0,
            alpha1,
            beta1,
            noise,
        } => simulate_garch(*alpha0, *alpha1, *beta1, noise, spec.burn_in, n, seed),
        ModelFamily::Arma { phi, theta, noise } => {
            noise.validate()?;
            let truncation = default_truncation(phi, theta)?;
            let psi = arma_psi_coefficients(phi, theta, truncation)?;
            let z = draw_noise(noise, n + truncation, seed);
            TimeSeries::from_scalar(convolve(&psi, &z, n))
        }
        ModelFamily::SasLinear { psi, alpha, scale } => {
            if psi.is_empty() {
                return Err(Error::invalid("psi", "coefficient sequence is empty"));
            }
            let noise = NoiseSpec::stable(*alpha).with_scale(*scale);
            noise.validate()?;
            let z = draw_noise(&noise, n + psi.len() - 1, seed);
            TimeSeries::from_scalar(convolve(psi, &z, n))
        }
    }
}

fn draw_noise(noise: &NoiseSpec, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; count];
    noise.sample_into(&mut rng, &mut z);
    z
}

/// x[i] = sum_j psi[j] z[i + J - j]; each output is an independent dot
/// product, so chunked evaluation is deterministic.
fn convolve(psi: &[f64], z: &[f64], n: usize) -> Vec<f64> {
    let j_max = psi.len() - 1;
    let mut out = vec![0.0; n];
    out.par_chunks_mut(8192).enumerate().for_each(|(c, chunk)| {
        let offset = c * 8192;
        for (i, x) in chunk.iter_mut().enumerate() {
            let t = offset + i;
            let mut acc = 0.0;
            for (j, &w) in psi.iter().enumerate() {
                acc += w * z[t + j_max - j];
            }
            *x = acc;
        }
    });
    out
}

fn simulate_sv(
    phi_sigma: f64,
    noise: &NoiseSpec,
    burn_in: usize,
    n: usize,
    seed: u64,
) -> Result<TimeSeries> {
    if !(phi_sigma.abs() < 1.0) {
        return Err(Error::NonStationary(format!(
            "log-volatility AR coefficient {} must lie in (-1, 1)",
            phi_sigma
        )));
    }
    noise.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let innovation_sd = (1.0 - phi_sigma * phi_sigma).sqrt();
    // stationary start: unit marginal variance throughout
    let mut log_vol: f64 = StandardNormal.sample(&mut rng);
    let mut z = vec![0.0; n];
    noise.sample_into(&mut rng, &mut z);
    for _ in 0..burn_in {
        let eta: f64 = StandardNormal.sample(&mut rng);
        log_vol = phi_sigma * log_vol + innovation_sd * eta;
    }
    let mut out = Vec::with_capacity(n);
    for &zt in &z {
        let eta: f64 = StandardNormal.sample(&mut rng);
        log_vol = phi_sigma * log_vol + innovation_sd * eta;
        out.push(log_vol.exp() * zt);
    }
    TimeSeries::from_scalar(out)
}

fn simulate_garch(
    alpha0: f64,
    alpha1: f64,
    beta1: f64,
    noise: &NoiseSpec,
    burn_in: usize,
    n: usize,
    seed: u64,
) -> Result<TimeSeries> {
    if !(alpha0 > 0.0) {
        return Err(Error::invalid("alpha0", "must be positive"));
    }
    if alpha1 < 0.0 || beta1 < 0.0 {
        return Err(Error::invalid("alpha1/beta1", "must be nonnegative"));
    }
    let z_noise = tail_index::standardized_garch_noise(noise)?;
    check_garch_stationarity(alpha1, beta1, &z_noise, seed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma2 = if alpha1 + beta1 < 1.0 {
        alpha0 / (1.0 - alpha1 - beta1)
    } else {
        alpha0
    };
    let mut z = vec![0.0; burn_in + n];
    z_noise.sample_into(&mut rng, &mut z);
    let mut out = Vec::with_capacity(n);
    for (t, &zt) in z.iter().enumerate() {
        let x = sigma2.sqrt() * zt;
        if t >= burn_in {
            out.push(x);
        }
        sigma2 = alpha0 + alpha1 * x * x + beta1 * sigma2;
    }
    TimeSeries::from_scalar(out)
}

/// Monte Carlo check of E log(alpha1 Z^2 + beta1) < 0 before simulating.
fn check_garch_stationarity(
    alpha1: f64,
    beta1: f64,
    z_noise: &NoiseSpec,
    seed: u64,
) -> Result<()> {
    if alpha1 == 0.0 {
        // deterministic recursion: contraction iff beta1 < 1
        if beta1 >= 1.0 {
            return Err(Error::NonStationary(format!(
                "beta1 = {} with alpha1 = 0 gives a non-contracting recursion",
                beta1
            )));
        }
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX); // keep the check off the simulation stream
    let draws = 10_000;
    let mut z = vec![0.0; draws];
    z_noise.sample_into(&mut rng, &mut z);
    let mean_log = z
        .iter()
        .map(|&zv| (alpha1 * zv * zv + beta1).ln())
        .sum::<f64>()
        / draws as f64;
    if mean_log >= 0.0 {
        return Err(Error::NonStationary(format!(
            "estimated E log(alpha1 Z^2 + beta1) = {:.4} is nonnegative",
            mean_log
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Serializable model document
// ---------------------------------------------------------------------------

/// Flat JSON/TOML layout of a model specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_ou: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
}

impl ModelDoc {
    pub fn to_spec(&self) -> Result<ModelSpec> {
        let noise = self.noise;
        let require = |v: Option<f64>, name: &'static str| {
            v.ok_or_else(|| Error::invalid(name, "required by this family"))
        };
        let family = match self.family.as_str() {
            "sv" | "sv_lognormal" => {
                let phi = match self.phi.as_deref() {
                    Some([v]) => *v,
                    Some(_) => {
                        return Err(Error::invalid(
                            "phi",
                            "the stochastic volatility family takes exactly one AR coefficient",
                        ))
                    }
                    None => return Err(Error::invalid("phi", "required by this family")),
                };
                ModelFamily::SvLognormal {
                    phi_sigma: phi,
                    noise: noise
                        .ok_or_else(|| Error::invalid("noise", "required by this family"))?,
                }
            }
            "garch11" => ModelFamily::Garch11 {
                alpha0: require(self.alpha0, "alpha0")?,
                alpha1: require(self.alpha1, "alpha1")?,
                beta1: self.beta1.unwrap_or(0.0),
                noise: noise.unwrap_or_else(NoiseSpec::gaussian),
            },
            "arch1" => ModelFamily::Garch11 {
                alpha0: require(self.alpha0, "alpha0")?,
                alpha1: require(self.alpha1, "alpha1")?,
                beta1: 0.0,
                noise: noise.unwrap_or_else(NoiseSpec::gaussian),
            },
            "arma" => ModelFamily::Arma {
                phi: self.phi.clone().unwrap_or_default(),
                theta: self.theta.clone().unwrap_or_default(),
                noise: noise.unwrap_or_else(NoiseSpec::gaussian),
            },
            "sas_linear" => {
                let alpha = require(self.alpha, "alpha")?;
                let psi = match (&self.psi, self.lambda_ou) {
                    (Some(psi), None) => psi.clone(),
                    (None, Some(lambda)) => ou_coefficients(lambda, 1)?,
                    (Some(_), Some(_)) => {
                        return Err(Error::invalid(
                            "psi",
                            "give either psi or lambda_ou, not both",
                        ))
                    }
                    (None, None) => {
                        return Err(Error::invalid("psi", "psi or lambda_ou is required"))
                    }
                };
                ModelFamily::SasLinear {
                    psi,
                    alpha,
                    scale: noise.map_or(1.0, |ns| ns.scale),
                }
            }
            other => {
                return Err(Error::invalid(
                    "family",
                    format!(
                        "unknown family '{}'; expected sv_lognormal, garch11, arch1, arma or sas_linear",
                        other
                    ),
                ))
            }
        };
        let mut spec = ModelSpec::new(family);
        if let Some(b) = self.burn_in {
            spec.burn_in = b;
        }
        Ok(spec)
    }
}
