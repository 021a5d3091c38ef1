//! Brute-force single-mode states in a truncated Fock basis `|0⟩ ..= |n_max⟩`.
//!
//! Nothing in here uses the closed forms of [`crate::analytic`]; the two are
//! compared against each other in tests.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::analytic::ln_factorial;
use crate::error::{Error, Result};

/// Levels kept above the Poisson cut-off of the target state.
pub const SAFETY_MARGIN: usize = 10;

/// Truncation level together with the probability that may be discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    n_max: usize,
    tail_tolerance: f64,
}

impl TruncationPolicy {
    pub fn new(n_max: usize, tail_tolerance: f64) -> Result<Self> {
        check_tolerance(tail_tolerance)?;
        Ok(TruncationPolicy {
            n_max,
            tail_tolerance,
        })
    }

    /// Policy for a cat of amplitude `alpha` displaced by up to `delta`:
    /// the Poisson cut-off for `α² + δ²` plus [`SAFETY_MARGIN`] levels.
    pub fn for_cat(alpha: f64, delta: f64, tail_tolerance: f64) -> Result<Self> {
        let n_max = required_truncation(alpha, delta, tail_tolerance)? + SAFETY_MARGIN;
        Self::new(n_max, tail_tolerance)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }
}

fn check_tolerance(tail_tolerance: f64) -> Result<()> {
    if tail_tolerance > 0.0 && tail_tolerance < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "tail tolerance must lie in (0, 1), got {tail_tolerance}"
        )))
    }
}

/// Smallest `n_max` for which a Poisson distribution of mean `α² + δ²`
/// puts less than `tail_tolerance` above `n_max`.
///
/// The tail is summed term by term from the far end, so no `1 - cdf`
/// cancellation limits how small the tolerance may be.
pub fn required_truncation(alpha: f64, delta: f64, tail_tolerance: f64) -> Result<usize> {
    check_tolerance(tail_tolerance)?;
    if !alpha.is_finite() || !delta.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need finite alpha >= 0 and finite delta, got alpha = {alpha}, delta = {delta}"
        )));
    }
    let mu = alpha * alpha + delta * delta;
    if mu == 0.0 {
        return Ok(0);
    }
    let ln_mu = mu.ln();
    let weight = |n: usize| (-mu + n as f64 * ln_mu - ln_factorial(n)).exp();

    // Past the mode the terms fall faster than geometrically; stop once they
    // are negligible against the tolerance.
    let mut last = mu.ceil() as usize;
    while weight(last) > tail_tolerance * 1e-6 || (last as f64) < mu {
        last += 1;
    }
    let mut tail = 0.0;
    let mut n = last;
    while n > 0 {
        let above = tail + weight(n);
        if above >= tail_tolerance {
            return Ok(n);
        }
        tail = above;
        n -= 1;
    }
    Ok(0)
}

/// Pure state `Σ c_n |n⟩` on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("a Fock vector needs at least one level".into()));
        }
        if amplitudes.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        Ok(FockVector { amplitudes })
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::number_state(0, n_max)
    }

    /// `|n⟩`, panics if `n > n_max`.
    pub fn number_state(n: usize, n_max: usize) -> Self {
        assert!(n <= n_max, "level {n} above truncation {n_max}");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        FockVector { amplitudes }
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`, insensitive to global phase.
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        let overlap = inner(self, other)?;
        Ok(overlap.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }

    fn padded(&self, n_max: usize) -> Vec<Complex64> {
        let mut v = self.amplitudes.clone();
        v.resize(n_max.max(self.n_max()) + 1, Complex64::new(0.0, 0.0));
        v
    }
}

fn check_norm(amplitudes: Vec<Complex64>, policy: &TruncationPolicy) -> Result<FockVector> {
    let state = FockVector::from_amplitudes(amplitudes)?;
    let lost = (1.0 - state.norm_sqr()).abs();
    if lost > policy.tail_tolerance {
        return Err(Error::Truncation {
            n_max: state.n_max(),
            lost,
            tolerance: policy.tail_tolerance,
        });
    }
    Ok(state)
}

/// Coherent amplitudes `e^{-|β|²/2} β^n / √n!`, without normalisation check.
fn coherent_amplitudes(beta: Complex64, n_max: usize) -> Vec<Complex64> {
    let r = beta.norm();
    if r == 0.0 {
        return FockVector::vacuum(n_max).amplitudes;
    }
    let (ln_r, arg) = (r.ln(), beta.arg());
    (0..=n_max)
        .map(|n| {
            let ln_mag = -0.5 * r * r + n as f64 * ln_r - 0.5 * ln_factorial(n);
            Complex64::from_polar(ln_mag.exp(), n as f64 * arg)
        })
        .collect()
}

pub fn coherent_state(beta: Complex64, policy: &TruncationPolicy) -> Result<FockVector> {
    check_norm(coherent_amplitudes(beta, policy.n_max), policy)
}

/// Even cat `(|α⟩ + |−α⟩)/√K`. Odd levels are set to exactly zero.
pub fn cat_state(alpha: f64, policy: &TruncationPolicy) -> Result<FockVector> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "cat amplitude must be finite and non-negative, got {alpha}"
        )));
    }
    let k = 2.0 * (1.0 + (-2.0 * alpha * alpha).exp());
    let scale = 2.0 / k.sqrt();
    let amplitudes = coherent_amplitudes(Complex64::new(alpha, 0.0), policy.n_max)
        .into_iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 0 { c * scale } else { Complex64::new(0.0, 0.0) })
        .collect();
    check_norm(amplitudes, policy)
}

/// Applies `exp(iδ(a† + a))`.
///
/// The generator is the real symmetric tridiagonal matrix with off-diagonal
/// entries `δ√n`; its exponential is taken through the eigendecomposition
/// `V diag(e^{iλ}) Vᵀ`. The working dimension is the larger of the state's
/// and the policy's truncation. Weight above `tail_tolerance` in the upper
/// half of the [`SAFETY_MARGIN`] means the basis was too small and is
/// reported as a truncation error. (Interference can put up to twice the
/// Poisson tail into the lower half of the margin.)
pub fn displace(state: &FockVector, delta: f64, policy: &TruncationPolicy) -> Result<FockVector> {
    if !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("displacement must be finite, got {delta}")));
    }
    let psi = state.padded(policy.n_max);
    if delta == 0.0 {
        return Ok(FockVector { amplitudes: psi });
    }
    let dim = psi.len();
    let generator = DMatrix::from_fn(dim, dim, |i, j| {
        if i + 1 == j {
            delta * (j as f64).sqrt()
        } else if j + 1 == i {
            delta * (i as f64).sqrt()
        } else {
            0.0
        }
    });
    let eigen = SymmetricEigen::new(generator);
    let basis = eigen.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let psi = DVector::from_vec(psi);
    let mut coeffs = basis.tr_mul(&psi);
    for (c, &lambda) in coeffs.iter_mut().zip(eigen.eigenvalues.iter()) {
        *c *= Complex64::new(0.0, lambda).exp();
    }
    let out = (&basis * coeffs).data.into();
    let result = FockVector::from_amplitudes(out)?;

    let edge: f64 = result.amplitudes[dim.saturating_sub(SAFETY_MARGIN / 2)..]
        .iter()
        .map(|c| c.norm_sqr())
        .sum();
    let drift = (result.norm_sqr() - state.norm_sqr()).abs();
    let lost = edge.max(drift);
    if lost > policy.tail_tolerance {
        return Err(Error::Truncation {
            n_max: result.n_max(),
            lost,
            tolerance: policy.tail_tolerance,
        });
    }
    Ok(result)
}

/// `⟨a|b⟩ = Σ conj(a_n) b_n`.
pub fn inner(a: &FockVector, b: &FockVector) -> Result<Complex64> {
    if a.n_max() != b.n_max() {
        return Err(Error::InvalidArgument(format!(
            "truncation mismatch: {} vs {}",
            a.n_max(),
            b.n_max()
        )));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

pub fn photon_distribution(state: &FockVector) -> Vec<f64> {
    state.amplitudes.iter().map(|c| c.norm_sqr()).collect()
}

/// `⟨(-1)^n⟩`.
pub fn parity_expectation(state: &FockVector) -> f64 {
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 0 { c.norm_sqr() } else { -c.norm_sqr() })
        .sum()
}
