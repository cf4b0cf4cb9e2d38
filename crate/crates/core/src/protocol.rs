//! The four-state protocol in the absence of an eavesdropper: sifting,
//! threshold postselection, and the closed-form efficiency and bit error
//! rate.
//!
//! Alice encodes bit 1 on the phase 0 and pi/2 states and bit 0 on their
//! opposites; Bob homodynes a randomly chosen quadrature and keeps a pulse
//! only when his basis matches the encoding. A conclusive bit requires the
//! outcome magnitude to clear the threshold `x0`; everything else is
//! discarded. Raising `x0` trades efficiency for a lower error rate, which is
//! the knob the key-gain optimization turns.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::math::erfc_unchecked;
use crate::signal::CoherentState;

/// Protocol operating point: pulse intensity (mean photons per pulse),
/// postselection threshold, and channel transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    intensity: f64,
    threshold: f64,
    transmission: f64,
}

impl ProtocolParams {
    pub fn new(intensity: f64, threshold: f64, transmission: f64) -> Result<Self> {
        for (name, v) in [
            ("intensity", intensity),
            ("threshold", threshold),
            ("transmission", transmission),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name, value: v });
            }
        }
        if intensity < 0.0 {
            return Err(Error::OutOfRange {
                name: "intensity",
                constraint: ">= 0",
                value: intensity,
            });
        }
        if threshold < 0.0 {
            return Err(Error::OutOfRange {
                name: "threshold",
                constraint: ">= 0",
                value: threshold,
            });
        }
        if transmission <= 0.0 || transmission > 1.0 {
            return Err(Error::OutOfRange {
                name: "transmission",
                constraint: "in (0, 1]",
                value: transmission,
            });
        }
        Ok(Self {
            intensity,
            threshold,
            transmission,
        })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    /// Channel loss 1 - transmission.
    pub fn loss(&self) -> f64 {
        1.0 - self.transmission
    }
}

/// Bob's verdict for one conclusive-or-not measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDecision {
    One,
    Zero,
    Inconclusive,
}

/// Threshold decision: 1 for `x > x0`, 0 for `x < -x0`, inconclusive
/// otherwise (boundary outcomes included: both bit branches are strict).
pub fn decide_bit(x: f64, threshold: f64) -> BitDecision {
    debug_assert!(threshold >= 0.0);
    if x > threshold {
        BitDecision::One
    } else if x < -threshold {
        BitDecision::Zero
    } else {
        BitDecision::Inconclusive
    }
}

/// One of the four signal states, by phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateChoice {
    /// phase 0, bit 1
    Alpha,
    /// phase pi/2, bit 1
    IAlpha,
    /// phase pi, bit 0
    MinusAlpha,
    /// phase -pi/2, bit 0
    MinusIAlpha,
}

impl StateChoice {
    pub const ALL: [StateChoice; 4] = [
        StateChoice::Alpha,
        StateChoice::IAlpha,
        StateChoice::MinusAlpha,
        StateChoice::MinusIAlpha,
    ];

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn phase(&self) -> f64 {
        match self {
            StateChoice::Alpha => 0.0,
            StateChoice::IAlpha => FRAC_PI_2,
            StateChoice::MinusAlpha => PI,
            StateChoice::MinusIAlpha => -FRAC_PI_2,
        }
    }

    /// The bit value Alice assigns to this state.
    pub fn bit(&self) -> u8 {
        match self {
            StateChoice::Alpha | StateChoice::IAlpha => 1,
            StateChoice::MinusAlpha | StateChoice::MinusIAlpha => 0,
        }
    }

    /// The quadrature this state encodes its bit on.
    pub fn encoding_basis(&self) -> MeasuredQuadrature {
        match self {
            StateChoice::Alpha | StateChoice::MinusAlpha => MeasuredQuadrature::X1,
            StateChoice::IAlpha | StateChoice::MinusIAlpha => MeasuredQuadrature::X2,
        }
    }

    /// The coherent state itself at the given pulse intensity.
    pub fn state(&self, intensity: f64) -> Result<CoherentState> {
        CoherentState::from_intensity(intensity, self.phase())
    }
}

/// Bob's two measurement choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasuredQuadrature {
    X1,
    X2,
}

impl MeasuredQuadrature {
    pub fn from_index(index: usize) -> Option<Self> {
        match index {
            0 => Some(MeasuredQuadrature::X1),
            1 => Some(MeasuredQuadrature::X2),
            _ => None,
        }
    }

    pub fn basis_angle(&self) -> f64 {
        match self {
            MeasuredQuadrature::X1 => 0.0,
            MeasuredQuadrature::X2 => FRAC_PI_2,
        }
    }
}

/// Whether Bob's measured quadrature matches the one the bit was encoded on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMatch {
    Correct,
    Wrong,
}

/// Sifting rule applied after the basis announcement.
pub fn sift(choice: StateChoice, basis: MeasuredQuadrature) -> BasisMatch {
    if choice.encoding_basis() == basis {
        BasisMatch::Correct
    } else {
        BasisMatch::Wrong
    }
}

/// Postselection efficiency P(x0, n): the probability that a correct-basis
/// pulse clears the threshold,
/// `P = (erfc(sqrt2 (x0 + sqrt n)) + erfc(sqrt2 (x0 - sqrt n))) / 2`.
///
/// P(0, n) = 1 for every n, and P decreases in the threshold.
pub fn postselection_efficiency(threshold: f64, intensity: f64) -> f64 {
    debug_assert!(threshold >= 0.0 && intensity >= 0.0);
    if threshold == 0.0 {
        return 1.0;
    }
    let root = intensity.sqrt();
    0.5 * (erfc_unchecked(SQRT_2 * (threshold + root))
        + erfc_unchecked(SQRT_2 * (threshold - root)))
}

/// Bit error rate q(x0, n) of the conclusive bits in the absence of Eve:
/// the opposite-sign tail mass renormalized by the efficiency,
/// `q = erfc(sqrt2 (x0 + sqrt n)) / (2 P(x0, n))`.
///
/// The vacuum limit q(x0, 0) = 1/2 is taken exactly (both tails coincide).
pub fn ber_no_eve(threshold: f64, intensity: f64) -> f64 {
    debug_assert!(threshold >= 0.0 && intensity >= 0.0);
    if intensity == 0.0 {
        return 0.5;
    }
    let p = postselection_efficiency(threshold, intensity);
    if p == 0.0 {
        // threshold so deep that both tails underflow; the error tail
        // underflows first
        return 0.0;
    }
    0.5 * erfc_unchecked(SQRT_2 * (threshold + intensity.sqrt())) / p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{ensemble_density, CoherentEnsemble};

    #[test]
    fn decision_rule() {
        assert_eq!(decide_bit(0.5, 0.2), BitDecision::One);
        assert_eq!(decide_bit(-0.5, 0.2), BitDecision::Zero);
        assert_eq!(decide_bit(0.1, 0.2), BitDecision::Inconclusive);
        // boundary outcomes are inconclusive: the bit branches are strict
        assert_eq!(decide_bit(0.2, 0.2), BitDecision::Inconclusive);
        assert_eq!(decide_bit(-0.2, 0.2), BitDecision::Inconclusive);
        assert_eq!(decide_bit(0.0, 0.0), BitDecision::Inconclusive);
    }

    #[test]
    fn sifting_rule() {
        assert_eq!(
            sift(StateChoice::Alpha, MeasuredQuadrature::X1),
            BasisMatch::Correct
        );
        assert_eq!(
            sift(StateChoice::IAlpha, MeasuredQuadrature::X1),
            BasisMatch::Wrong
        );
        assert_eq!(
            sift(StateChoice::MinusIAlpha, MeasuredQuadrature::X2),
            BasisMatch::Correct
        );
        assert_eq!(
            sift(StateChoice::MinusAlpha, MeasuredQuadrature::X2),
            BasisMatch::Wrong
        );
    }

    #[test]
    fn state_choice_round_trip() {
        for (i, c) in StateChoice::ALL.iter().enumerate() {
            assert_eq!(StateChoice::from_index(i), Some(*c));
        }
        assert_eq!(StateChoice::from_index(4), None);
        assert_eq!(StateChoice::Alpha.bit(), 1);
        assert_eq!(StateChoice::MinusIAlpha.bit(), 0);
    }

    #[test]
    fn zero_threshold_efficiency_is_exactly_one() {
        for n in [0.0, 0.5, 1.0, 2.0, 5.0] {
            assert_eq!(postselection_efficiency(0.0, n), 1.0);
        }
    }

    #[test]
    fn vacuum_efficiency_reduces_to_single_erfc() {
        let x0 = 0.7;
        let want = crate::math::erfc(SQRT_2 * x0).unwrap();
        assert!((postselection_efficiency(x0, 0.0) - want).abs() < 1e-15);
    }

    #[test]
    fn efficiency_example_point() {
        // frozen: P(0.5, 1) = 0.842694644100173
        let p = postselection_efficiency(0.5, 1.0);
        assert!((p - 0.842694644100173).abs() < 1e-12, "{p}");
    }

    #[test]
    fn ber_trivials_and_examples() {
        assert_eq!(ber_no_eve(0.0, 0.0), 0.5);
        assert_eq!(ber_no_eve(1.3, 0.0), 0.5);
        // frozen: q(0,1) = erfc(sqrt2)/2 = 0.022750131948179195
        assert!((ber_no_eve(0.0, 1.0) - 0.022750131948179195).abs() < 1e-14);
        // frozen: q(0.5,1) = 0.001601882771038032
        assert!((ber_no_eve(0.5, 1.0) - 0.001601882771038032).abs() < 1e-13);
    }

    #[test]
    fn ber_monte_carlo_cross_check() {
        use crate::montecarlo::{simulate, SimConfig};
        let params = ProtocolParams::new(1.0, 0.5, 1.0).unwrap();
        let result = simulate(&SimConfig {
            pulses: 10_000_000,
            params,
            attack: None,
            rng_seed: 2750,
        });
        let want = ber_no_eve(0.5, 1.0);
        assert!(
            (result.empirical_q - want).abs() < 3.0 * result.std_err_q,
            "{} vs analytic {want} (3 sigma = {})",
            result.empirical_q,
            3.0 * result.std_err_q
        );
    }

    #[test]
    fn efficiency_and_ber_monotone_in_threshold() {
        for &n in &[0.1, 0.5, 1.0, 2.0] {
            let mut prev_p = f64::INFINITY;
            let mut prev_q = f64::INFINITY;
            let mut x0 = 0.0;
            while x0 <= 3.0 + 1e-9 {
                let p = postselection_efficiency(x0, n);
                let q = ber_no_eve(x0, n);
                assert!(p <= prev_p + 1e-15, "P not decreasing at x0={x0}, n={n}");
                assert!(q <= prev_q + 1e-15, "q not decreasing at x0={x0}, n={n}");
                assert!((0.0..=1.0).contains(&p));
                assert!((0.0..=0.5).contains(&q));
                prev_p = p;
                prev_q = q;
                x0 += 0.1;
            }
        }
    }

    #[test]
    fn ber_efficiency_product_identity() {
        // q * P = erfc(sqrt2 (x0 + sqrt n)) / 2 algebraically
        for &n in &[0.1, 0.5, 1.0, 2.0] {
            let mut x0 = 0.0;
            while x0 <= 3.0 + 1e-9 {
                let lhs = ber_no_eve(x0, n) * postselection_efficiency(x0, n);
                let rhs = 0.5 * erfc_unchecked(SQRT_2 * (x0 + n.sqrt()));
                assert!((lhs - rhs).abs() < 1e-12, "x0={x0}, n={n}: {lhs} vs {rhs}");
                x0 += 0.1;
            }
        }
    }

    #[test]
    fn efficiency_agrees_with_distribution_tail_mass() {
        for &(x0, n) in &[(0.0, 1.0), (0.5, 1.0), (1.2, 0.3), (2.0, 2.0)] {
            let d = ensemble_density(&CoherentEnsemble::correct_basis_pair(n).unwrap(), 0.0);
            let (below, above) = d.tail_mass(x0).unwrap();
            let p = postselection_efficiency(x0, n);
            assert!((p - (below + above)).abs() < 1e-9, "x0={x0}, n={n}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(ProtocolParams::new(1.0, 0.0, 1.0).is_ok());
        assert!(ProtocolParams::new(-1.0, 0.0, 1.0).is_err());
        assert!(ProtocolParams::new(1.0, -0.1, 1.0).is_err());
        assert!(ProtocolParams::new(1.0, 0.0, 0.0).is_err());
        assert!(ProtocolParams::new(1.0, 0.0, 1.1).is_err());
        let p = ProtocolParams::new(0.89, 0.22, 0.9).unwrap();
        assert!((p.loss() - 0.1).abs() < 1e-15);
    }
}
