//! Numerical security analysis for four-state quantum key distribution with
//! balanced homodyne detection and postselection.
//!
//! Alice sends one of four weak coherent states (phases 0, pi/2, pi, -pi/2 at
//! a chosen pulse intensity); Bob homodynes a random quadrature and, after
//! basis reconciliation, keeps only outcomes whose magnitude clears a
//! postselection threshold. This crate computes everything needed to pick the
//! intensity and threshold against a lossy, possibly eavesdropped channel:
//!
//! - quadrature distributions of signal mixtures ([`signal`]);
//! - postselection efficiency and bit error rate without an eavesdropper
//!   ([`protocol`]);
//! - the disturbance and error rates of two intercept-resend attacks, and the
//!   wrong-basis distribution monitor that exposes them ([`attacks`]);
//! - mutual information, beam-splitting leakage, the secure key gain, and its
//!   optimization over threshold and intensity ([`keygain`]);
//! - a seeded Monte Carlo of the whole protocol that cross-checks every
//!   closed form ([`montecarlo`]).
//!
//! Quadrature convention: `[x1, x2] = i/2`, so every coherent-state
//! quadrature has variance 1/4 and a state of amplitude `r` and phase
//! `theta` measured at basis angle `phi` is Gaussian around
//! `r cos(theta - phi)`.
//!
//! All quantities are dimensionless; intensities are mean photon numbers per
//! pulse and quadratures are in vacuum units. Everything is pure and
//! thread-safe; parameter sweeps can fan out freely.
//!
//! ```
//! use homodyne_qkd::keygain::{key_gain, optimize, SearchSpec};
//! use homodyne_qkd::protocol::ProtocolParams;
//!
//! // key gain at threshold 0.5, intensity 1, 10% channel loss
//! let params = ProtocolParams::new(1.0, 0.5, 0.9).unwrap();
//! let report = key_gain(&params).unwrap();
//! assert!(report.gain > 0.0);
//!
//! // and the best operating point for that loss
//! let best = optimize(0.1, &SearchSpec::default()).unwrap();
//! assert!(best.secure && best.best_gain >= report.gain);
//! ```

pub mod attacks;
mod error;
pub mod keygain;
pub mod math;
pub mod montecarlo;
pub mod protocol;
pub mod signal;

pub use error::{Error, Result};
