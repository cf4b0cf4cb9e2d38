//! Coherent-state quadrature statistics.
//!
//! Signal states are represented only through what balanced homodyne
//! detection can observe: for a coherent state of amplitude `r` and phase
//! `theta`, the quadrature `x_phi = x1 cos(phi) + x2 sin(phi)` is Gaussian
//! with mean `r cos(theta - phi)` and variance 1/4. The variance is fixed by
//! the commutator convention `[x1, x2] = i/2` and is deliberately not
//! configurable. Mixtures of coherent states therefore become Gaussian
//! mixtures on the quadrature line, which is all the protocol analysis needs.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::{self, integrate_1d, Interval, QuadratureSpec};

/// Weight sum slack tolerated when validating an ensemble.
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Peak density of a variance-1/4 Gaussian, sqrt(2/pi).
pub(crate) fn gaussian_peak() -> f64 {
    (2.0 / PI).sqrt()
}

/// A coherent state described by its real amplitude (square root of the mean
/// photon number) and phase in [-pi, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentState {
    amplitude: f64,
    phase: f64,
}

impl CoherentState {
    pub fn new(amplitude: f64, phase: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::NonFinite {
                name: "amplitude",
                value: amplitude,
            });
        }
        if amplitude < 0.0 {
            return Err(Error::OutOfRange {
                name: "amplitude",
                constraint: ">= 0",
                value: amplitude,
            });
        }
        if !phase.is_finite() {
            return Err(Error::NonFinite {
                name: "phase",
                value: phase,
            });
        }
        Ok(Self {
            amplitude,
            phase: canonical_phase(phase),
        })
    }

    /// The vacuum state (zero amplitude).
    pub fn vacuum() -> Self {
        Self {
            amplitude: 0.0,
            phase: 0.0,
        }
    }

    /// A state with mean photon number `intensity` and the given phase.
    pub fn from_intensity(intensity: f64, phase: f64) -> Result<Self> {
        if intensity < 0.0 {
            return Err(Error::OutOfRange {
                name: "intensity",
                constraint: ">= 0",
                value: intensity,
            });
        }
        Self::new(intensity.sqrt(), phase)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Mean of the quadrature measured at `basis_angle`.
    pub fn quadrature_mean(&self, basis_angle: f64) -> f64 {
        self.amplitude * (self.phase - basis_angle).cos()
    }

    /// The same state with its phase advanced by `delta`.
    pub fn rotated(&self, delta: f64) -> Self {
        Self {
            amplitude: self.amplitude,
            phase: canonical_phase(self.phase + delta),
        }
    }
}

fn canonical_phase(phase: f64) -> f64 {
    let mut p = (phase + PI).rem_euclid(2.0 * PI) - PI;
    if p >= PI {
        p -= 2.0 * PI;
    }
    p
}

/// A statistical mixture of coherent states: non-negative weights summing to
/// one. This is the density-operator description restricted to what homodyne
/// statistics can distinguish.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentEnsemble {
    components: Vec<(f64, CoherentState)>,
}

impl CoherentEnsemble {
    pub fn new(components: Vec<(f64, CoherentState)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidEnsemble("empty component list".into()));
        }
        let mut sum = 0.0;
        for &(w, _) in &components {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidEnsemble(format!("invalid weight {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidEnsemble(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { components })
    }

    /// A single coherent state with unit weight.
    pub fn pure(state: CoherentState) -> Self {
        Self {
            components: vec![(1.0, state)],
        }
    }

    /// The full four-state signal: equal mixture of phases 0, pi/2, pi,
    /// -pi/2 at the given pulse intensity.
    pub fn four_state(intensity: f64) -> Result<Self> {
        let phases = [0.0, PI / 2.0, PI, -PI / 2.0];
        let components = phases
            .iter()
            .map(|&p| Ok((0.25, CoherentState::from_intensity(intensity, p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    /// The signal after the phase-0/pi basis is announced: equal mixture of
    /// the two opposite-phase states encoding the bit on x1.
    pub fn correct_basis_pair(intensity: f64) -> Result<Self> {
        Ok(Self {
            components: vec![
                (0.5, CoherentState::from_intensity(intensity, 0.0)?),
                (0.5, CoherentState::from_intensity(intensity, PI)?),
            ],
        })
    }

    /// The announced-basis signal encoding on x2, as seen when measuring x1:
    /// equal mixture of the two phase +-pi/2 states.
    pub fn wrong_basis_pair(intensity: f64) -> Result<Self> {
        Ok(Self {
            components: vec![
                (0.5, CoherentState::from_intensity(intensity, PI / 2.0)?),
                (0.5, CoherentState::from_intensity(intensity, -PI / 2.0)?),
            ],
        })
    }

    pub fn components(&self) -> &[(f64, CoherentState)] {
        &self.components
    }
}

/// One Gaussian term of a quadrature distribution; the variance is 1/4 for
/// every term by the homodyne convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTerm {
    pub weight: f64,
    pub mean: f64,
}

/// A probability density over the quadrature line, stored as a mixture of
/// variance-1/4 Gaussians. Evaluable pointwise and integrable in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureDistribution {
    terms: Vec<GaussianTerm>,
}

impl QuadratureDistribution {
    pub fn terms(&self) -> &[GaussianTerm] {
        &self.terms
    }

    /// The density value at `x`.
    pub fn density(&self, x: f64) -> f64 {
        let peak = gaussian_peak();
        self.terms
            .iter()
            .map(|t| t.weight * peak * (-2.0 * (x - t.mean) * (x - t.mean)).exp())
            .sum()
    }

    /// Probability mass in the two tails cut off at `+-threshold`:
    /// `(below, above)` with `below` the mass under `-threshold` and `above`
    /// the mass over `+threshold`. A negative threshold is a domain error.
    pub fn tail_mass(&self, threshold: f64) -> Result<(f64, f64)> {
        if !threshold.is_finite() {
            return Err(Error::NonFinite {
                name: "threshold",
                value: threshold,
            });
        }
        if threshold < 0.0 {
            return Err(Error::OutOfRange {
                name: "threshold",
                constraint: ">= 0",
                value: threshold,
            });
        }
        let sq2 = std::f64::consts::SQRT_2;
        let mut below = 0.0;
        let mut above = 0.0;
        for t in &self.terms {
            above += t.weight * 0.5 * math::erfc_unchecked(sq2 * (threshold - t.mean));
            below += t.weight * 0.5 * math::erfc_unchecked(sq2 * (threshold + t.mean));
        }
        Ok((below, above))
    }

    /// A window containing all but less than 1e-15 of the mass (8 standard
    /// deviations around the extreme component means).
    pub fn support_window(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for t in &self.terms {
            lo = lo.min(t.mean);
            hi = hi.max(t.mean);
        }
        (lo - 4.0, hi + 4.0)
    }
}

/// The quadrature density of a single coherent state measured at
/// `basis_angle`: one Gaussian of variance 1/4 centered on the projected
/// amplitude.
pub fn quadrature_density(state: &CoherentState, basis_angle: f64) -> QuadratureDistribution {
    QuadratureDistribution {
        terms: vec![GaussianTerm {
            weight: 1.0,
            mean: state.quadrature_mean(basis_angle),
        }],
    }
}

/// The quadrature density of a mixture: the weight-convex combination of the
/// component Gaussians.
pub fn ensemble_density(ens: &CoherentEnsemble, basis_angle: f64) -> QuadratureDistribution {
    QuadratureDistribution {
        terms: ens
            .components()
            .iter()
            .map(|(w, s)| GaussianTerm {
                weight: *w,
                mean: s.quadrature_mean(basis_angle),
            })
            .collect(),
    }
}

/// The L1 distance between two quadrature densities, in [0, 2]. Zero exactly
/// when the densities agree almost everywhere. This is the integrable form of
/// the "no disturbance in the observed distribution" monitoring condition.
pub fn distribution_distance(a: &QuadratureDistribution, b: &QuadratureDistribution) -> f64 {
    let (alo, ahi) = a.support_window();
    let (blo, bhi) = b.support_window();
    let window =
        Interval::new(alo.min(blo) - 2.0, ahi.max(bhi) + 2.0).expect("support windows are finite");
    let spec = QuadratureSpec::default();
    match integrate_1d(|x| (a.density(x) - b.density(x)).abs(), window, &spec) {
        Ok(v) => v,
        // |a-b| has kinks where the densities cross; if the budget runs out
        // the best estimate is still tolerance-grade for this use
        Err(Error::QuadratureDidNotConverge { estimate, .. }) => estimate,
        Err(_) => unreachable!("window and spec are valid by construction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::erfc;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn coherent_state_validation_and_phase_wrap() {
        assert!(CoherentState::new(-1.0, 0.0).is_err());
        assert!(CoherentState::new(f64::NAN, 0.0).is_err());
        assert!(CoherentState::new(1.0, f64::INFINITY).is_err());
        let s = CoherentState::new(1.0, 3.0 * PI).unwrap();
        assert!((s.phase() - (-PI)).abs() < 1e-12 || (s.phase() - PI).abs() < 1e-12);
        assert!(s.phase() >= -PI && s.phase() < PI);
        let s = CoherentState::new(1.0, -PI).unwrap();
        assert_eq!(s.phase(), -PI);
    }

    #[test]
    fn single_state_density_peak_and_mean() {
        // state |alpha> with alpha = 1 measured in its own quadrature: peak
        // sqrt(2/pi) at the mean
        let s = CoherentState::new(1.0, 0.0).unwrap();
        let d = quadrature_density(&s, 0.0);
        assert_eq!(d.terms().len(), 1);
        assert!((d.terms()[0].mean - 1.0).abs() < 1e-15);
        assert!((d.density(1.0) - (2.0 / PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn wrong_basis_state_is_centered() {
        let s = CoherentState::new(1.0, FRAC_PI_2).unwrap();
        let d = quadrature_density(&s, 0.0);
        assert!(d.terms()[0].mean.abs() < 1e-16);
    }

    #[test]
    fn diagonal_state_projects_to_unit_mean() {
        // amplitude sqrt(2) at phase pi/4 measured at phi = 0: mean
        // sqrt(2) cos(pi/4) = 1
        let s = CoherentState::new(SQRT_2, FRAC_PI_4).unwrap();
        let d = quadrature_density(&s, 0.0);
        assert!((d.terms()[0].mean - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        assert!(CoherentEnsemble::new(vec![]).is_err());
        let s = CoherentState::vacuum();
        assert!(CoherentEnsemble::new(vec![(0.7, s), (0.2, s)]).is_err());
        assert!(CoherentEnsemble::new(vec![(1.2, s), (-0.2, s)]).is_err());
        assert!(CoherentEnsemble::new(vec![(0.5, s), (0.5, s)]).is_ok());
    }

    #[test]
    fn correct_basis_density_matches_two_gaussian_form() {
        // 1/2 (|alpha><alpha| + |-alpha><-alpha|) at n = 1 measured on x1
        let ens = CoherentEnsemble::correct_basis_pair(1.0).unwrap();
        let d = ensemble_density(&ens, 0.0);
        let peak = (2.0 / PI).sqrt();
        for x in [-2.0f64, -1.0, -0.3, 0.0, 0.4, 1.0, 2.3] {
            let want = 0.5
                * peak
                * ((-2.0 * (x - 1.0) * (x - 1.0)).exp() + (-2.0 * (x + 1.0) * (x + 1.0)).exp());
            assert!((d.density(x) - want).abs() < 1e-14, "x = {x}");
        }
        // bimodal: peaks near +-1 beat the midpoint
        assert!(d.density(1.0) > d.density(0.0));
        assert!(d.density(-1.0) > d.density(0.0));
    }

    #[test]
    fn wrong_basis_density_is_centered_gaussian() {
        let ens = CoherentEnsemble::wrong_basis_pair(1.0).unwrap();
        let d = ensemble_density(&ens, 0.0);
        let peak = (2.0 / PI).sqrt();
        for x in [-1.5f64, 0.0, 0.7, 2.0] {
            let want = peak * (-2.0 * x * x).exp();
            assert!((d.density(x) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn four_state_vacuum_collapses_to_single_gaussian() {
        let ens = CoherentEnsemble::four_state(0.0).unwrap();
        let d = ensemble_density(&ens, 0.0);
        let peak = (2.0 / PI).sqrt();
        for x in [-1.0, 0.0, 0.5] {
            assert!((d.density(x) - peak * (-2.0 * x * x).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_mass_centered_split() {
        let d = quadrature_density(&CoherentState::vacuum(), 0.0);
        let (below, above) = d.tail_mass(0.0).unwrap();
        assert_eq!(below, 0.5);
        assert_eq!(above, 0.5);
    }

    #[test]
    fn tail_mass_matches_erfc_closed_form() {
        let n = 2.3f64;
        let x0 = 0.8;
        let d = quadrature_density(&CoherentState::from_intensity(n, 0.0).unwrap(), 0.0);
        let (below, above) = d.tail_mass(x0).unwrap();
        assert!((above - 0.5 * erfc(SQRT_2 * (x0 - n.sqrt())).unwrap()).abs() < 1e-15);
        assert!((below - 0.5 * erfc(SQRT_2 * (x0 + n.sqrt())).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn tail_mass_of_announced_pair_cross_checked_by_quadrature() {
        let ens = CoherentEnsemble::correct_basis_pair(1.0).unwrap();
        let d = ensemble_density(&ens, 0.0);
        let (below, above) = d.tail_mass(0.5).unwrap();
        let total = below + above;
        // frozen: 0.5*(erfc(sqrt2*1.5) + erfc(-sqrt2*0.5)) = 0.842694644100173
        assert!((total - 0.842694644100173).abs() < 1e-12, "{total}");
        let spec = QuadratureSpec::default();
        let above_q = integrate_1d(
            |x| d.density(x),
            Interval::new(0.5, f64::INFINITY).unwrap(),
            &spec,
        )
        .unwrap();
        let below_q = integrate_1d(
            |x| d.density(x),
            Interval::new(f64::NEG_INFINITY, -0.5).unwrap(),
            &spec,
        )
        .unwrap();
        assert!((above - above_q).abs() < 1e-9);
        assert!((below - below_q).abs() < 1e-9);
    }

    #[test]
    fn tail_mass_rejects_negative_threshold() {
        let d = quadrature_density(&CoherentState::vacuum(), 0.0);
        assert!(d.tail_mass(-0.1).is_err());
        assert!(d.tail_mass(f64::NAN).is_err());
    }

    #[test]
    fn distance_of_identical_distributions_is_zero() {
        let d = ensemble_density(&CoherentEnsemble::four_state(1.0).unwrap(), 0.0);
        assert_eq!(distribution_distance(&d, &d), 0.0);
    }

    #[test]
    fn distance_matches_two_gaussian_closed_form() {
        // means 0 and sqrt(n), variance 1/4: L1 = 2 erf(sqrt(n)/sqrt(2)),
        // cross-checked against a dense trapezoid grid
        for n in [1.0f64, 2.0] {
            let a = quadrature_density(&CoherentState::vacuum(), 0.0);
            let b = quadrature_density(&CoherentState::from_intensity(n, 0.0).unwrap(), 0.0);
            let got = distribution_distance(&a, &b);
            let closed = 2.0 * (1.0 - erfc((n / 2.0).sqrt()).unwrap());
            assert!((got - closed).abs() < 1e-9, "n = {n}: {got} vs {closed}");
            let grid = {
                let (lo, hi) = (-8.0, 8.0 + n.sqrt());
                let steps = 1_600_000usize;
                let h = (hi - lo) / steps as f64;
                let f = |x: f64| (a.density(x) - b.density(x)).abs();
                let mut s = 0.5 * (f(lo) + f(hi));
                for k in 1..steps {
                    s += f(lo + k as f64 * h);
                }
                s * h
            };
            assert!((got - grid).abs() < 1e-7, "n = {n}: {got} vs grid {grid}");
        }
    }

    #[test]
    fn attacked_wrong_basis_differs_from_ideal() {
        // the resend/diagonal mixture at n = 1 is visibly non-Gaussian
        let ideal = ensemble_density(&CoherentEnsemble::wrong_basis_pair(1.0).unwrap(), 0.0);
        let diag = CoherentEnsemble::new(vec![
            (0.5, CoherentState::new(1.0, FRAC_PI_4).unwrap()),
            (0.5, CoherentState::new(1.0, FRAC_PI_4 - PI).unwrap()),
        ])
        .unwrap();
        let observed = ensemble_density(&diag, 0.0);
        assert!(distribution_distance(&observed, &ideal) > 0.0);
    }

    fn arb_ensemble() -> impl Strategy<Value = CoherentEnsemble> {
        proptest::collection::vec((0.01f64..1.0, 0.0f64..2.0, -PI..PI), 1..4).prop_map(|raw| {
            let sum: f64 = raw.iter().map(|(w, _, _)| w).sum();
            let components = raw
                .into_iter()
                .map(|(w, a, p)| (w / sum, CoherentState::new(a, p).unwrap()))
                .collect::<Vec<_>>();
            // renormalized weights may miss 1 by an ulp; repair the first
            let mut components = components;
            let s: f64 = components.iter().map(|(w, _)| w).sum();
            components[0].0 += 1.0 - s;
            CoherentEnsemble::new(components).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn densities_are_normalized(ens in arb_ensemble(), angle in -PI..PI) {
            let d = ensemble_density(&ens, angle);
            let (below, above) = d.tail_mass(0.0).unwrap();
            prop_assert!((below + above - 1.0).abs() < 1e-12);
            let (lo, hi) = d.support_window();
            let mass = integrate_1d(
                |x| d.density(x),
                Interval::new(lo, hi).unwrap(),
                &QuadratureSpec::default(),
            ).unwrap();
            prop_assert!((mass - 1.0).abs() < 1e-9, "mass {}", mass);
        }

        #[test]
        fn mixture_density_is_linear_in_weights(
            w in 0.1f64..0.9,
            a1 in 0.0f64..2.0,
            a2 in 0.0f64..2.0,
            x in -3.0f64..3.0,
        ) {
            let s1 = CoherentState::new(a1, 0.3).unwrap();
            let s2 = CoherentState::new(a2, -1.1).unwrap();
            let mixed = CoherentEnsemble::new(vec![(w, s1), (1.0 - w, s2)]).unwrap();
            let dm = ensemble_density(&mixed, 0.0).density(x);
            let d1 = ensemble_density(&CoherentEnsemble::pure(s1), 0.0).density(x);
            let d2 = ensemble_density(&CoherentEnsemble::pure(s2), 0.0).density(x);
            prop_assert!((dm - (w * d1 + (1.0 - w) * d2)).abs() < 1e-12);
        }

        #[test]
        fn basis_rotation_consistency(
            amp in 0.0f64..2.0,
            theta in -PI..PI,
            phi in -PI..PI,
            x in -3.0f64..3.0,
        ) {
            let s = CoherentState::new(amp, theta).unwrap();
            let rotated = CoherentState::new(amp, theta - phi).unwrap();
            let d1 = quadrature_density(&s, phi);
            let d2 = quadrature_density(&rotated, 0.0);
            prop_assert!((d1.density(x) - d2.density(x)).abs() < 1e-12);
            // component projection route to the same mean
            let projected = amp * (theta.cos() * phi.cos() + theta.sin() * phi.sin());
            prop_assert!((s.quadrature_mean(phi) - projected).abs() < 1e-12);
        }

        #[test]
        fn l1_distance_is_a_metric(
            e1 in arb_ensemble(),
            e2 in arb_ensemble(),
            e3 in arb_ensemble(),
        ) {
            let a = ensemble_density(&e1, 0.0);
            let b = ensemble_density(&e2, 0.0);
            let c = ensemble_density(&e3, 0.0);
            let ab = distribution_distance(&a, &b);
            let ba = distribution_distance(&b, &a);
            prop_assert!((ab - ba).abs() < 1e-9);
            prop_assert!((0.0..=2.0 + 1e-12).contains(&ab));
            let ac = distribution_distance(&a, &c);
            let cb = distribution_distance(&c, &b);
            prop_assert!(ab <= ac + cb + 1e-8);
        }
    }
}
