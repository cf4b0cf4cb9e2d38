//! Intercept-resend eavesdropping: the simultaneous two-quadrature
//! measurement attack and the intermediate-basis attack, with the disturbed
//! signal ensembles, the resulting bit error rates, and the wrong-basis
//! disturbance monitor.
//!
//! Both attacks leave fingerprints in the quadrature distributions Bob can
//! observe, most visibly in the wrong-basis data, which is why the protocol
//! monitors that profile.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use crate::error::Result;
use crate::math::{erfc_unchecked, integrate_1d, Interval, QuadratureSpec};
use crate::protocol::{ber_no_eve, postselection_efficiency};
use crate::signal::{
    distribution_distance, ensemble_density, gaussian_peak, CoherentEnsemble, CoherentState,
    QuadratureDistribution,
};

/// The three resend probabilities of the simultaneous measurement attack:
/// Eve resends the original state (`p_plus`), either of the two
/// quarter-rotated states (`p_perp` each), or the opposite state
/// (`p_minus`). They satisfy `p_plus + 2 p_perp + p_minus = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResendTriple {
    pub p_plus: f64,
    pub p_perp: f64,
    pub p_minus: f64,
}

impl ResendTriple {
    /// Total probability `p_plus + 2 p_perp + p_minus`.
    pub fn total(&self) -> f64 {
        self.p_plus + 2.0 * self.p_perp + self.p_minus
    }
}

/// An eavesdropping strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackModel {
    /// Eve splits each pulse 50:50, measures both quadratures, and resends
    /// the most probable of the four states.
    SimultaneousMeasurement,
    /// Eve homodynes the diagonal quadrature and resends a diagonal state
    /// carrying her bit estimate.
    IntermediateBasis,
    /// Eve taps the stated loss fraction with an asymmetric beam splitter
    /// and measures her share in the announced basis; Bob's signal is not
    /// disturbed beyond the loss itself.
    BeamSplitting { loss: f64 },
}

/// Bob's signal ensembles after an attack, split by basis announcement.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbedSignal {
    pub correct_basis: CoherentEnsemble,
    pub wrong_basis: CoherentEnsemble,
}

/// Resend probabilities for the simultaneous measurement attack at pulse
/// intensity `n`.
///
/// Eve's outcome pair is distributed as a product Gaussian centered at
/// `(sqrt(n/2), 0)` with variance 1/4 per axis; each probability is the mass
/// of one diagonal cone. Computed as one-dimensional integrals with an erfc
/// inner integral (the cone cross-section at fixed ordinate is a Gaussian
/// tail), which is faster and better conditioned than a raw double integral.
pub fn resend_probabilities(intensity: f64) -> Result<ResendTriple> {
    debug_assert!(intensity >= 0.0);
    let m = (intensity / 2.0).sqrt();
    let spec = QuadratureSpec::default();
    let peak = gaussian_peak();

    // mass of x >= |y|: integrate the y marginal against the x tail
    let p_plus = integrate_1d(
        |y| peak * (-2.0 * y * y).exp() * erfc_unchecked(SQRT_2 * (y - m)),
        Interval::new(0.0, 4.5)?,
        &spec,
    )?;
    // mass of -x >= |y|: same with the opposite tail
    let p_minus = integrate_1d(
        |y| peak * (-2.0 * y * y).exp() * erfc_unchecked(SQRT_2 * (y + m)),
        Interval::new(0.0, 4.5)?,
        &spec,
    )?;
    // mass of y > |x|: integrate the x marginal against the upper y tail
    let p_perp = integrate_1d(
        |x| peak * (-2.0 * (x - m) * (x - m)).exp() * 0.5 * erfc_unchecked(SQRT_2 * x.abs()),
        Interval::new(m - 4.5, m + 4.5)?,
        &spec,
    )?;

    let triple = ResendTriple {
        p_plus,
        p_perp,
        p_minus,
    };
    debug_assert!((triple.total() - 1.0).abs() < 1e-8);
    Ok(triple)
}

/// Bob's announced-basis ensembles under the simultaneous measurement attack:
/// the correct-basis signal keeps weight `p_plus + p_minus` on the encoding
/// pair and acquires `2 p_perp` on the orthogonal pair; the wrong-basis
/// signal has the weights swapped.
pub fn simultaneous_attack_signal(intensity: f64) -> Result<DisturbedSignal> {
    let p = resend_probabilities(intensity)?;
    let amp = intensity.sqrt();
    let on_axis = [CoherentState::new(amp, 0.0)?, CoherentState::new(amp, PI)?];
    let off_axis = [
        CoherentState::new(amp, PI / 2.0)?,
        CoherentState::new(amp, -PI / 2.0)?,
    ];
    let mix = |axis_weight: f64, cross_weight: f64| -> Result<CoherentEnsemble> {
        let mut components = Vec::with_capacity(4);
        let mut raw = vec![
            (axis_weight / 2.0, on_axis[0]),
            (axis_weight / 2.0, on_axis[1]),
            (cross_weight / 2.0, off_axis[0]),
            (cross_weight / 2.0, off_axis[1]),
        ];
        // absorb quadrature round-off so the ensemble normalizes exactly
        let sum: f64 = raw.iter().map(|(w, _)| w).sum();
        raw[0].0 += 1.0 - sum;
        components.append(&mut raw);
        CoherentEnsemble::new(components)
    };
    let axis = p.p_plus + p.p_minus;
    let cross = 2.0 * p.p_perp;
    Ok(DisturbedSignal {
        correct_basis: mix(axis, cross)?,
        wrong_basis: mix(cross, axis)?,
    })
}

/// `(bob_ber, efficiency)` style result for an attacked channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackedChannel {
    pub bob_ber: f64,
    pub efficiency: f64,
}

/// Bob's bit error rate and postselection efficiency under the simultaneous
/// measurement attack:
/// `P' = (p+ + p-) P(x0, n) + 2 p_perp erfc(sqrt2 x0)` and the error tail is
/// the resend-weighted mixture of the three Gaussian tails.
pub fn ber_simultaneous(threshold: f64, intensity: f64) -> Result<AttackedChannel> {
    debug_assert!(threshold >= 0.0 && intensity >= 0.0);
    let p = resend_probabilities(intensity)?;
    let root = intensity.sqrt();
    let efficiency = (p.p_plus + p.p_minus) * postselection_efficiency(threshold, intensity)
        + 2.0 * p.p_perp * erfc_unchecked(SQRT_2 * threshold);
    let error_mass = p.p_plus * erfc_unchecked(SQRT_2 * (threshold + root))
        + p.p_minus * erfc_unchecked(SQRT_2 * (threshold - root))
        + 2.0 * p.p_perp * erfc_unchecked(SQRT_2 * threshold);
    Ok(AttackedChannel {
        bob_ber: error_mass / (2.0 * efficiency),
        efficiency,
    })
}

/// Eve's bit error rate for either intercept-resend attack. Her measurement
/// sees the displacement reduced to half intensity (a 50:50 split in one
/// case, a diagonal projection in the other), and she cannot postselect, so
/// her error rate is q(0, n/2) in both cases.
pub fn eve_ber_intercept(intensity: f64) -> f64 {
    debug_assert!(intensity >= 0.0);
    ber_no_eve(0.0, intensity / 2.0)
}

/// The resent signal of the intermediate-basis attack, conditioned on Alice
/// having encoded bit 1: weight `1 - q_E` on the diagonal state carrying the
/// right bit and `q_E` on its opposite. The correct-basis and wrong-basis
/// ensembles coincide because Eve never learns the basis, which also means
/// their observed distributions are identical.
pub fn intermediate_attack_signal(intensity: f64) -> DisturbedSignal {
    debug_assert!(intensity >= 0.0);
    let q_e = eve_ber_intercept(intensity);
    let amp = intensity.sqrt();
    let plus = CoherentState::new(amp, FRAC_PI_4).expect("amplitude is finite and non-negative");
    let minus = CoherentState::new(amp, FRAC_PI_4 - PI).expect("amplitude is valid");
    let ensemble = CoherentEnsemble::new(vec![(1.0 - q_e, plus), (q_e, minus)])
        .expect("weights (1 - q, q) are normalized");
    DisturbedSignal {
        correct_basis: ensemble.clone(),
        wrong_basis: ensemble,
    }
}

/// Bob's bit error rate and postselection efficiency under the
/// intermediate-basis attack. The diagonal resend projects onto either
/// measured quadrature with half intensity, so the efficiency is exactly
/// `P(x0, n/2)`; the error rate mixes the faithful and flipped resends with
/// weights `1 - q_E` and `q_E`.
pub fn ber_intermediate(threshold: f64, intensity: f64) -> AttackedChannel {
    debug_assert!(threshold >= 0.0 && intensity >= 0.0);
    let q_e = eve_ber_intercept(intensity);
    let half = intensity / 2.0;
    let efficiency = postselection_efficiency(threshold, half);
    let bob_ber = (1.0 - q_e) * ber_no_eve(threshold, half)
        + q_e * erfc_unchecked(SQRT_2 * (threshold - half.sqrt())) / (2.0 * efficiency);
    AttackedChannel {
        bob_ber,
        efficiency,
    }
}

/// Disturbance statistic for the wrong-basis monitor: the L1 distance between
/// an observed wrong-basis distribution and the undisturbed one (the centered
/// variance-1/4 Gaussian, for any pulse intensity). Zero on an undisturbed
/// channel; how large a distance should raise an alarm is left to the caller.
pub fn wrong_basis_monitor(observed: &QuadratureDistribution, intensity: f64) -> f64 {
    let ideal = ensemble_density(
        &CoherentEnsemble::wrong_basis_pair(intensity).expect("intensity validated by caller"),
        0.0,
    );
    distribution_distance(observed, &ideal)
}
