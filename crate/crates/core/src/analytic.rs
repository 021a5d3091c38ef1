//! Closed-form statistics of the even cat state `(|α⟩ + |−α⟩)/√K` before
//! and after the dark-port displacement `exp(iδ(a† + a))`.
//!
//! Only real cat amplitudes are supported: a real `α` puts the displacement
//! orthogonal to the interference fringes of the cat, which is the
//! configuration every formula here assumes.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cat amplitude `alpha` and dark-port displacement `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    alpha: f64,
    delta: f64,
}

impl CatParams {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        if !alpha.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "cat parameters must be finite, got alpha = {alpha}, delta = {delta}"
            )));
        }
        if alpha < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cat amplitude must be non-negative, got {alpha}"
            )));
        }
        Ok(CatParams { alpha, delta })
    }

    pub(crate) fn unchecked(alpha: f64, delta: f64) -> Self {
        CatParams { alpha, delta }
    }

    /// Accepts a complex amplitude only if it is real and non-negative.
    pub fn from_complex(alpha: Complex64, delta: f64) -> Result<Self> {
        if alpha.im != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "only real cat amplitudes are supported, got {alpha}"
            )));
        }
        Self::new(alpha.re, delta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Mean photon number `α² + δ²` of either displaced coherent branch.
    pub fn branch_intensity(&self) -> f64 {
        self.alpha * self.alpha + self.delta * self.delta
    }
}

/// Carrier photon number `N` and logarithmic squeeze factor `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLimits {
    n_photons: f64,
    squeeze_factor: f64,
}

impl ReferenceLimits {
    pub fn new(n_photons: f64, squeeze_factor: f64) -> Result<Self> {
        if !(n_photons > 0.0) || !n_photons.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "photon number must be positive, got {n_photons}"
            )));
        }
        if !(squeeze_factor >= 0.0) || !squeeze_factor.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "squeeze factor must be non-negative, got {squeeze_factor}"
            )));
        }
        Ok(ReferenceLimits {
            n_photons,
            squeeze_factor,
        })
    }

    pub fn n_photons(&self) -> f64 {
        self.n_photons
    }

    pub fn squeeze_factor(&self) -> f64 {
        self.squeeze_factor
    }
}

/// Phase sensitivities of the standard probe states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseLimits {
    /// Shot-noise limit `1/(2√N)`.
    pub snl: f64,
    /// Squeezed-light sensitivity `e^{-r}/(2√N)`.
    pub sqz: f64,
    /// Heisenberg scaling `1/N`.
    pub hl: f64,
}

pub fn reference_limits(limits: &ReferenceLimits) -> PhaseLimits {
    let n = limits.n_photons;
    let snl = 0.5 / n.sqrt();
    PhaseLimits {
        snl,
        sqz: (-limits.squeeze_factor).exp() * snl,
        hl: 1.0 / n,
    }
}

/// Normalisation `K = 2(1 + e^{-2α²})` of the even cat state.
pub fn normalization_k(alpha: f64) -> f64 {
    2.0 * (1.0 + (-2.0 * alpha * alpha).exp())
}

/// Overlap `⟨Ψ₀|Ψ_δ⟩` between the cat and its displaced copy. Real with the
/// phase convention `D(δ)|α⟩ = e^{iδα}|α + iδ⟩`.
pub fn overlap(params: &CatParams) -> f64 {
    let (a, d) = (params.alpha, params.delta);
    2.0 * (-0.5 * d * d).exp() / normalization_k(a) * ((2.0 * a * d).cos() + (-2.0 * a * a).exp())
}

fn require_positive_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "a positive finite cat amplitude is required, got {alpha}"
        )))
    }
}

fn require_positive_photons(n_photons: f64) -> Result<()> {
    if n_photons > 0.0 && n_photons.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "carrier photon number must be positive, got {n_photons}"
        )))
    }
}

/// The `k`-th positive displacement at which the displaced cat becomes
/// orthogonal to the undisplaced one, `(arccos(-e^{-2α²}) + 2πk)/(2α)`.
///
/// For `α = 0` the overlap is a pure Gaussian and never vanishes.
pub fn overlap_zero(alpha: f64, k: u32) -> Result<f64> {
    require_positive_alpha(alpha)?;
    let principal = (-(-2.0 * alpha * alpha).exp()).acos();
    Ok((principal + 2.0 * PI * f64::from(k)) / (2.0 * alpha))
}

/// Smallest phase shift `φ₀ = δ₀/√N` that the cat probe can detect without
/// ambiguity.
pub fn detectable_phase(alpha: f64, n_photons: f64) -> Result<f64> {
    require_positive_photons(n_photons)?;
    Ok(overlap_zero(alpha, 0)? / n_photons.sqrt())
}

/// Large-amplitude form `π/(4α√N)` of [`detectable_phase`].
pub fn detectable_phase_approx(alpha: f64, n_photons: f64) -> Result<f64> {
    require_positive_alpha(alpha)?;
    require_positive_photons(n_photons)?;
    Ok(FRAC_PI_2 / (2.0 * alpha * n_photons.sqrt()))
}

/// Photon-number parity `⟨(-1)^n⟩` of the displaced cat.
pub fn parity(params: &CatParams) -> f64 {
    let (a, d) = (params.alpha, params.delta);
    let c = (-2.0 * a * a).exp();
    (-2.0 * d * d).exp() * ((4.0 * a * d).cos() + c) / (1.0 + c)
}

/// Probabilities of an even and an odd photon count, from the parity.
pub fn even_odd_probabilities(params: &CatParams) -> (f64, f64) {
    let p = parity(params);
    (0.5 * (1.0 + p), 0.5 * (1.0 - p))
}

/// Same probabilities as [`even_odd_probabilities`], obtained by summing the
/// photon-number distribution over even and odd `n` in closed form
/// (`cosh`/`sinh` of `α² + δ²` and of `α² − δ² + 2iαδ`).
///
/// The hyperbolic functions are multiplied by `e^{-(α²+δ²)}` before they are
/// evaluated so that large amplitudes do not overflow.
pub fn even_odd_probabilities_series(params: &CatParams) -> (f64, f64) {
    let (a, d) = (params.alpha, params.delta);
    let mu = params.branch_intensity();
    let w = Complex64::new(a * a - d * d, 2.0 * a * d);
    let phase = Complex64::new(0.0, 2.0 * a * d).exp();

    // e^{-μ}·cosh(μ), e^{-μ}·sinh(μ)
    let decay = (-2.0 * mu).exp();
    let cosh_mu = 0.5 * (1.0 + decay);
    let sinh_mu = 0.5 * (1.0 - decay);
    // e^{-μ}·cosh(w), e^{-μ}·sinh(w)
    let up = (w - mu).exp();
    let down = (-w - mu).exp();
    let cosh_w = 0.5 * (up + down);
    let sinh_w = 0.5 * (up - down);

    let scale = 2.0 / normalization_k(a);
    let even = scale * (cosh_mu + (phase * cosh_w).re);
    let odd = scale * (sinh_mu - (phase * sinh_w).re);
    (even, odd)
}

/// Probability `p_n` of counting `n` photons in the displaced cat.
///
/// Both terms of the distribution share the magnitude `(α²+δ²)^n`, so it is
/// evaluated as a Poisson weight times `cos²` (even `n`) or `sin²` (odd `n`)
/// of `αδ + n·atan2(δ, α)`. At `δ = 0` the odd weights are exactly zero.
pub fn photon_probability(params: &CatParams, n: usize) -> f64 {
    let mu = params.branch_intensity();
    if mu == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let log_poisson = -mu + n as f64 * mu.ln() - ln_factorial(n);
    interference_weight(params, n) * 4.0 * log_poisson.exp() / normalization_k(params.alpha)
}

/// `p_0 ..= p_{n_max}` by the Poisson recurrence; agrees with
/// [`photon_probability`] term by term.
pub fn photon_distribution(params: &CatParams, n_max: usize) -> Vec<f64> {
    let mu = params.branch_intensity();
    let scale = 4.0 / normalization_k(params.alpha);
    let mut poisson = (-mu).exp();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            poisson *= mu / n as f64;
        }
        if poisson == 0.0 {
            // e^{-μ} or the tail underflowed; log space keeps every term.
            out.push(photon_probability(params, n));
        } else {
            out.push(scale * poisson * interference_weight(params, n));
        }
    }
    out
}

fn interference_weight(params: &CatParams, n: usize) -> f64 {
    let theta = params.delta.atan2(params.alpha);
    let x = params.alpha * params.delta + n as f64 * theta;
    if n % 2 == 0 {
        x.cos().powi(2)
    } else {
        x.sin().powi(2)
    }
}

/// `ln(n!)`, exact summation below 256 and Stirling's series above.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    if n < 256 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        let x = n as f64;
        x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
    }
}
