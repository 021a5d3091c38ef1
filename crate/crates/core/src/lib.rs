//! Detection of a fixed interferometric phase shift with a Schrödinger-cat
//! probe in the dark port of a Mach-Zehnder interferometer.
//!
//! The crate is organised around the displacement parameter `δ = Bφ` that a
//! small phase shift imprints on the dark-port mode:
//!
//! * [`analytic`] holds the closed-form overlap, parity and photon-number
//!   statistics of the displaced cat state.
//! * [`fock`] is a truncated Fock-space engine that recomputes the same
//!   quantities by brute force and serves as an independent oracle.
//! * [`interferometer`] maps beamsplitter settings and arm phases onto `δ`.
//! * [`optimizer`] locates the displacement that minimises the parity.
//! * [`montecarlo`] runs seeded photon-counting detection campaigns.

pub mod analytic;
pub mod error;
pub mod fock;
pub mod interferometer;
pub mod montecarlo;
pub mod optimizer;

pub use analytic::{CatParams, ReferenceLimits};
pub use error::{Error, Result};
pub use fock::{FockVector, TruncationPolicy};
pub use interferometer::{IfoConfig, Topology};
pub use montecarlo::{DetectionStats, RngSpec};
pub use optimizer::Optimum;
