//! Mach-Zehnder interferometer with a strong carrier in the bright port and
//! the probe state in the dark port.
//!
//! Two beamsplitters with real amplitude reflectivity `R` and transmissivity
//! `T` (`R² + T² = 1`) enclose arm phases `φ₁`, `φ₂`. To first order in the
//! phases the dark output is the dark input displaced by `δ = Bφ`, which is
//! all the detection analysis needs.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, FockVector, TruncationPolicy};

/// Largest phase accepted by the linearised model.
pub const PHASE_LIMIT: f64 = 0.1;
/// Phases above this are accepted but flagged as [`PhaseRegime::Marginal`].
pub const PHASE_WARNING: f64 = 0.01;

const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Signal phase in arm 1 only, arm 2 is the reference.
    Asymmetric,
    /// Balanced beamsplitters, phase `+φ` in arm 1 and `−φ` in arm 2.
    Antisymmetric,
    /// Arbitrary `R`, `T`, `φ₁`, `φ₂`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IfoConfig {
    reflectivity: f64,
    transmissivity: f64,
    phi1: f64,
    phi2: f64,
    carrier_amplitude: f64,
    topology: Topology,
}

impl IfoConfig {
    pub fn new(
        topology: Topology,
        reflectivity: f64,
        transmissivity: f64,
        phi1: f64,
        phi2: f64,
        carrier_amplitude: f64,
    ) -> Result<Self> {
        let all = [reflectivity, transmissivity, phi1, phi2, carrier_amplitude];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("interferometer parameters must be finite".into()));
        }
        if !(0.0..=1.0).contains(&reflectivity) || !(0.0..=1.0).contains(&transmissivity) {
            return Err(Error::InvalidArgument(format!(
                "R and T must lie in [0, 1], got R = {reflectivity}, T = {transmissivity}"
            )));
        }
        let loss = reflectivity * reflectivity + transmissivity * transmissivity - 1.0;
        if loss.abs() > UNITARITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "R² + T² must equal 1, off by {loss:.3e}"
            )));
        }
        if !(carrier_amplitude > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "carrier amplitude must be positive, got {carrier_amplitude}"
            )));
        }
        if topology == Topology::Antisymmetric {
            if reflectivity != FRAC_1_SQRT_2 || transmissivity != FRAC_1_SQRT_2 {
                return Err(Error::InvalidArgument(
                    "antisymmetric topology requires balanced beamsplitters".into(),
                ));
            }
            if phi1 != -phi2 {
                return Err(Error::InvalidArgument(
                    "antisymmetric topology requires phi1 = -phi2".into(),
                ));
            }
        }
        Ok(IfoConfig {
            reflectivity,
            transmissivity,
            phi1,
            phi2,
            carrier_amplitude,
            topology,
        })
    }

    /// Asymmetric interferometer with `R = √(1 − T²)` and no phase applied.
    pub fn asymmetric(transmissivity: f64, carrier_amplitude: f64) -> Result<Self> {
        let reflectivity = (1.0 - transmissivity * transmissivity).max(0.0).sqrt();
        Self::new(Topology::Asymmetric, reflectivity, transmissivity, 0.0, 0.0, carrier_amplitude)
    }

    /// Balanced antisymmetric interferometer with no phase applied.
    pub fn antisymmetric(carrier_amplitude: f64) -> Result<Self> {
        Self::new(
            Topology::Antisymmetric,
            FRAC_1_SQRT_2,
            FRAC_1_SQRT_2,
            0.0,
            0.0,
            carrier_amplitude,
        )
    }

    /// Applies a signal phase according to the topology: `(φ, 0)` for the
    /// asymmetric and `(φ, −φ)` for the antisymmetric layout. General
    /// configurations keep their own arm phases.
    pub fn with_signal(&self, phi: f64) -> Self {
        let (phi1, phi2) = match self.topology {
            Topology::Asymmetric => (phi, 0.0),
            Topology::Antisymmetric => (phi, -phi),
            Topology::General => (self.phi1, self.phi2),
        };
        IfoConfig { phi1, phi2, ..*self }
    }

    pub fn reflectivity(&self) -> f64 {
        self.reflectivity
    }

    pub fn transmissivity(&self) -> f64 {
        self.transmissivity
    }

    pub fn phases(&self) -> (f64, f64) {
        (self.phi1, self.phi2)
    }

    pub fn carrier_amplitude(&self) -> f64 {
        self.carrier_amplitude
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }
}

/// Input-to-output matrix `d = M a` of the interferometer.
///
/// The diagonal is written as `e^{-iφ₂} + T²(e^{-iφ₁} − e^{-iφ₂})` (and the
/// mirror image), which is algebraically `T²e^{-iφ₁} + R²e^{-iφ₂}` but is
/// exactly the identity when the arm phases are equal to zero.
pub fn transfer_matrix(config: &IfoConfig) -> Matrix2<Complex64> {
    let (r, t) = (config.reflectivity, config.transmissivity);
    let e1 = Complex64::new(0.0, -config.phi1).exp();
    let e2 = Complex64::new(0.0, -config.phi2).exp();
    let diff = e1 - e2;
    let off = -(diff * (r * t));
    Matrix2::new(e2 + diff * (t * t), off, off, e2 + diff * (r * r))
}

/// Propagates classical field amplitudes through the interferometer.
pub fn propagate_classical(config: &IfoConfig, a1: Complex64, a2: Complex64) -> (Complex64, Complex64) {
    let m = transfer_matrix(config);
    (m[(0, 0)] * a1 + m[(0, 1)] * a2, m[(1, 0)] * a1 + m[(1, 1)] * a2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseRegime {
    Linear,
    /// Above [`PHASE_WARNING`]; the quadratic correction may matter.
    Marginal,
}

/// Dark-port displacement produced by a phase shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Displacement {
    /// Coupling `B` in `δ = Bφ`.
    pub b: f64,
    /// Photons that interacted with the phase, `N = B²`.
    pub n_photons: f64,
    pub delta: f64,
    /// Dark-port amplitude of the full (non-linearised) classical map.
    pub exact_dark_amplitude: Complex64,
    /// `|exact_dark_amplitude − iδ|`.
    pub linearization_error: f64,
    pub regime: PhaseRegime,
}

/// Maps a signal phase to the displacement `δ = Bφ`.
///
/// `B = T·A` for the asymmetric and `B = A` for the antisymmetric topology.
/// A general configuration has no single signal phase; it reports
/// `B = R·T·A` and `δ = R·T·A·(φ₁ − φ₂)` from its own arm phases, and `phi`
/// is ignored apart from the range check.
pub fn displacement_of(config: &IfoConfig, phi: f64) -> Result<Displacement> {
    let signalled = config.with_signal(phi);
    let (phi1, phi2) = signalled.phases();
    let largest = phi.abs().max(phi1.abs()).max(phi2.abs());
    if !(largest <= PHASE_LIMIT) {
        return Err(Error::PhaseOutOfRange {
            phi: if phi.abs() == largest { phi } else if phi1.abs() == largest { phi1 } else { phi2 },
            limit: PHASE_LIMIT,
        });
    }
    let a = config.carrier_amplitude;
    let (b, delta) = match config.topology {
        Topology::Asymmetric => (config.transmissivity * a, config.transmissivity * a * phi),
        Topology::Antisymmetric => (a, a * phi),
        Topology::General => {
            let b = config.reflectivity * config.transmissivity * a;
            (b, b * (phi1 - phi2))
        }
    };
    let (_, dark) = propagate_classical(&signalled, Complex64::new(a, 0.0), Complex64::new(0.0, 0.0));
    Ok(Displacement {
        b,
        n_photons: b * b,
        delta,
        exact_dark_amplitude: dark,
        linearization_error: (dark - Complex64::new(0.0, delta)).norm(),
        regime: if largest > PHASE_WARNING {
            PhaseRegime::Marginal
        } else {
            PhaseRegime::Linear
        },
    })
}

/// Dark-port output state for a cat of amplitude `alpha` at the input.
pub fn end_to_end_state(
    config: &IfoConfig,
    alpha: f64,
    phi: f64,
    policy: &TruncationPolicy,
) -> Result<FockVector> {
    let displacement = displacement_of(config, phi)?;
    let cat = fock::cat_state(alpha, policy)?;
    fock::displace(&cat, displacement.delta, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn config_validation() {
        assert!(IfoConfig::new(Topology::General, 0.6, 0.8, 0.0, 0.0, 1.0).is_ok());
        assert!(IfoConfig::new(Topology::General, 0.6, 0.7, 0.0, 0.0, 1.0).is_err());
        assert!(IfoConfig::new(Topology::General, 0.6, 0.8, 0.0, 0.0, 0.0).is_err());
        assert!(IfoConfig::new(Topology::General, -0.6, 0.8, 0.0, 0.0, 1.0).is_err());
        assert!(IfoConfig::new(Topology::Antisymmetric, 0.6, 0.8, 0.0, 0.0, 1.0).is_err());
        assert!(IfoConfig::new(Topology::Antisymmetric, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.1, 0.1, 1.0).is_err());
        assert!(IfoConfig::new(Topology::General, 0.6, 0.8, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn zero_phase_is_identity() {
        for cfg in [
            IfoConfig::antisymmetric(10.0).unwrap(),
            IfoConfig::asymmetric(0.3, 10.0).unwrap(),
            IfoConfig::new(Topology::General, 0.6, 0.8, 0.0, 0.0, 1.0).unwrap(),
        ] {
            assert_eq!(transfer_matrix(&cfg), Matrix2::identity());
            let a1 = c(3.5, -1.25);
            let a2 = c(0.125, 2.0);
            assert_eq!(propagate_classical(&cfg, a1, a2), (a1, a2));
        }
    }

    #[test]
    fn antisymmetric_dark_port_is_sine() {
        let cfg = IfoConfig::antisymmetric(100.0).unwrap().with_signal(1e-3);
        let m = transfer_matrix(&cfg);
        assert!((m[(1, 0)] - c(0.0, 1e-3f64.sin())).norm() < 1e-18);
        let (_, d2) = propagate_classical(&cfg, c(100.0, 0.0), c(0.0, 0.0));
        assert!((d2 - c(0.0, 100.0 * 1e-3f64.sin())).norm() < 1e-15);
        let lin_gap = (d2.im - 0.1).abs() / 0.1;
        assert!((lin_gap - 1e-6 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn common_phase_gives_no_signal() {
        let cfg = IfoConfig::new(Topology::General, 0.6, 0.8, 0.02, 0.02, 50.0).unwrap();
        let m = transfer_matrix(&cfg);
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
        assert_eq!(displacement_of(&cfg, 0.0).unwrap().delta, 0.0);
    }

    #[test]
    fn displacement_values() {
        let cfg = IfoConfig::antisymmetric(1000.0).unwrap();
        let d = displacement_of(&cfg, 5.2730e-4).unwrap();
        assert!((d.delta - 0.52730).abs() < 1e-12);
        assert_eq!((d.b, d.n_photons), (1000.0, 1e6));
        assert_eq!(displacement_of(&cfg, 0.0).unwrap().delta, 0.0);

        let cfg = IfoConfig::asymmetric(0.1, 1e4).unwrap();
        let d = displacement_of(&cfg, 1e-3).unwrap();
        assert!((d.b - 1e3).abs() < 1e-9 && (d.delta - 1.0).abs() < 1e-12);
        // R = √0.99 scales the exact amplitude; the rest is O(φ²).
        let r = 0.99f64.sqrt();
        assert!((d.exact_dark_amplitude - c(0.0, r)).norm() < 1e3 * 1e-6);

        let gen = IfoConfig::new(Topology::General, 0.6, 0.8, 2e-3, -1e-3, 100.0).unwrap();
        let d = displacement_of(&gen, 0.0).unwrap();
        assert!((d.delta - 0.48 * 100.0 * 3e-3).abs() < 1e-15);
        assert!(d.linearization_error < 100.0 * 9e-6);
    }

    #[test]
    fn phase_range_guard() {
        let cfg = IfoConfig::antisymmetric(10.0).unwrap();
        assert_eq!(displacement_of(&cfg, 0.005).unwrap().regime, PhaseRegime::Linear);
        assert_eq!(displacement_of(&cfg, 0.05).unwrap().regime, PhaseRegime::Marginal);
        assert!(matches!(displacement_of(&cfg, 0.2), Err(Error::PhaseOutOfRange { .. })));
        assert!(displacement_of(&cfg, f64::NAN).is_err());
        let gen = IfoConfig::new(Topology::General, 0.6, 0.8, 0.5, 0.0, 1.0).unwrap();
        assert!(displacement_of(&gen, 0.0).is_err());
    }

    #[test]
    fn linearization_error_is_quadratic() {
        let a = 1000.0;
        let cfg = IfoConfig::antisymmetric(a).unwrap();
        for i in 0..=100 {
            let phi = i as f64 * 1e-4;
            let d = displacement_of(&cfg, phi).unwrap();
            assert!(d.linearization_error <= a * phi * phi);
        }
    }

    #[test]
    fn asymmetric_limit() {
        let (ta, phi) = (10.0, 1e-3);
        let mut previous = f64::INFINITY;
        for t in [0.1, 0.01, 0.001] {
            let cfg = IfoConfig::asymmetric(t, ta / t).unwrap();
            let d = displacement_of(&cfg, phi).unwrap();
            assert!((d.b - ta).abs() < 1e-12);
            let err = (d.exact_dark_amplitude - c(0.0, ta * phi)).norm();
            let r = (1.0 - t * t).sqrt();
            assert!(err <= ta * ((1.0 - r) * phi + phi * phi), "T {t}: {err}");
            assert!(err <= previous);
            previous = err;
        }
    }
}
