//! Causal moving-average coefficients of an ARMA filter.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const CAUSALITY_MARGIN: f64 = 1e-6;

/// psi_0..=psi_j from phi(z) * sum psi_j z^j = 1 + theta_1 z + ... + theta_q z^q.
///
/// Requires the autoregressive polynomial to have all roots strictly outside
/// the unit circle (with a small numerical margin).
pub fn arma_psi_coefficients(phi: &[f64], theta: &[f64], truncation: usize) -> Result<Vec<f64>> {
    check_causal(phi)?;
    Ok(psi_recursion(phi, theta, truncation))
}

fn psi_recursion(phi: &[f64], theta: &[f64], truncation: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(truncation + 1);
    psi.push(1.0);
    for j in 1..=truncation {
        let mut v = if j <= theta.len() { theta[j - 1] } else { 0.0 };
        for (k, &p) in phi.iter().enumerate() {
            if j > k {
                v += p * psi[j - 1 - k];
            } else {
                break;
            }
        }
        psi.push(v);
    }
    psi
}

/// Smallest modulus among the roots of 1 - phi_1 z - ... - phi_p z^p,
/// or None when the polynomial is constant.
pub fn min_root_modulus(phi: &[f64]) -> Option<f64> {
    // trim exactly-zero trailing coefficients
    let p = phi.iter().rposition(|&c| c != 0.0)? + 1;
    // companion matrix of the monic polynomial z^p - sum c_k z^k with the
    // coefficients of 1 - phi_1 z - ... written as c_0 = 1, c_k = -phi_k
    let lead = -phi[p - 1];
    let mut companion = DMatrix::<f64>::zeros(p, p);
    for i in 1..p {
        companion[(i, i - 1)] = 1.0;
    }
    for k in 0..p {
        let c_k = if k == 0 { 1.0 } else { -phi[k - 1] };
        companion[(k, p - 1)] = -c_k / lead;
    }
    let eigen = companion.complex_eigenvalues();
    eigen.iter().map(|z| z.norm()).reduce(f64::min)
}

pub(crate) fn check_causal(phi: &[f64]) -> Result<()> {
    if let Some(m) = min_root_modulus(phi) {
        if m <= 1.0 + CAUSALITY_MARGIN {
            return Err(Error::NonCausal { modulus: m });
        }
    }
    Ok(())
}

/// Truncation point for the causal filter: at least 1000 coefficients, and
/// larger until |psi_J| falls below 1e-12 of the largest coefficient.
pub fn default_truncation(phi: &[f64], theta: &[f64]) -> Result<usize> {
    check_causal(phi)?;
    const HARD_CAP: usize = 200_000;
    let mut psi = vec![1.0f64];
    let mut max_abs: f64 = 1.0;
    for j in 1..=HARD_CAP {
        let mut v = if j <= theta.len() { theta[j - 1] } else { 0.0 };
        for (k, &p) in phi.iter().enumerate() {
            if j > k {
                v += p * psi[j - 1 - k];
            } else {
                break;
            }
        }
        psi.push(v);
        max_abs = max_abs.max(v.abs());
        if j >= 1000 && v.abs() < 1e-12 * max_abs {
            return Ok(j);
        }
    }
    Err(Error::DivergentCoefficients(format!(
        "|psi_j| has not decayed below 1e-12 of its maximum after {} terms",
        HARD_CAP
    )))
}
