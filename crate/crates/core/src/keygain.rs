//! Beam-splitting leakage, mutual information, and the secure key gain,
//! together with the optimization of threshold and pulse intensity against
//! channel loss.
//!
//! The loss model: an eavesdropper replaces the lossy channel with a lossless
//! one and taps the loss fraction with an asymmetric beam splitter, storing
//! her share until the basis announcement. Bob then works at intensity
//! `eta * n` while the tap carries `(1 - eta) * n`. The leakage is quantified
//! by the privacy-amplification fraction tau derived from the collision
//! probability of Eve's conditional distribution, and the net rate is
//!
//! `G = 1/2 * P(x0, eta n) * [I_AB(x0, eta n) - tau((1 - eta) n)]`
//!
//! in bits per transmitted signal. Raising the threshold extends the loss
//! range with positive gain at the cost of efficiency, so for every loss
//! there is an optimal `(x0, n)` pair.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::{integrate_1d, Interval, QuadratureSpec};
use crate::protocol::{postselection_efficiency, ProtocolParams};
use crate::signal::gaussian_peak;

/// The key-gain bundle at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyGainReport {
    pub params: ProtocolParams,
    /// Postselection efficiency P at Bob's received intensity.
    pub efficiency: f64,
    /// Mutual information I_AB between Alice's bits and Bob's postselected
    /// outcomes, in bits.
    pub mutual_info: f64,
    /// Privacy-amplification fraction tau for Eve's tapped intensity.
    pub tau: f64,
    /// Secure key gain G in bits per signal; negative when leakage wins.
    pub gain: f64,
}

/// log(exp(a) + exp(b)) without overflow for very negative arguments.
#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Privacy-amplification fraction tau(n) = 1 + log2(Pc) where Pc is the
/// relative expected collision probability of Eve's correct-basis homodyne
/// outcome at intensity `n`:
///
/// `Pc = sqrt(2/pi) * int_0^inf [e^{-4(x-e)^2} + e^{-4(x+e)^2}] /
///                              [e^{-2(x-e)^2} + e^{-2(x+e)^2}] dx`
///
/// with `e = sqrt(n)`. Monotone from tau(0) = 0 toward 1 as the two signal
/// Gaussians separate. The integrand is evaluated in log space so both
/// exponential sums can underflow without producing 0/0 in the far tail.
pub fn tau(intensity: f64) -> Result<f64> {
    if intensity.is_nan() || intensity < 0.0 {
        return Err(Error::OutOfRange {
            name: "intensity",
            constraint: ">= 0",
            value: intensity,
        });
    }
    if intensity == 0.0 {
        return Ok(0.0);
    }
    let e = intensity.sqrt();
    let ratio = move |x: f64| {
        let dm = x - e;
        let dp = x + e;
        let num = log_add_exp(-4.0 * dm * dm, -4.0 * dp * dp);
        let den = log_add_exp(-2.0 * dm * dm, -2.0 * dp * dp);
        (num - den).exp()
    };
    // the integrand lives within 19 units of the displacement: beyond that
    // the envelope e^{-2(x-e)^2} is below 1e-300
    let lower = (e - 19.0).max(0.0);
    let upper = e + 19.0;
    let collision = gaussian_peak()
        * integrate_1d(
            ratio,
            Interval::new(lower, upper)?,
            &QuadratureSpec::default(),
        )?;
    Ok((1.0 + collision.log2()).clamp(0.0, 1.0))
}

/// Binary entropy in bits of p = 1/(1 + e^{-t}), computed from the logit `t`
/// (t >= 0) so saturated probabilities underflow to zero entropy instead of
/// evaluating 0 * log 0.
#[inline]
fn binary_entropy_from_logit(t: f64) -> f64 {
    ((-t).exp().ln_1p() + t / (1.0 + t.exp())) / LN_2
}

/// Mutual information I_AB(x0, n) in bits between Alice's bit and Bob's
/// postselected soft outcome:
///
/// `I_AB = 1 - (1/P) int_{|x| > x0} Prob(x) h2(Prob(+|x)) dx`
///
/// where `Prob(+|x)` is the posterior of the positive state given outcome
/// `x`, a logistic in `x`. Zero at zero intensity (the posterior is flat) and
/// increasing toward 1 as the threshold grows.
pub fn mutual_information(threshold: f64, intensity: f64) -> Result<f64> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::OutOfRange {
            name: "threshold",
            constraint: ">= 0",
            value: threshold,
        });
    }
    if intensity.is_nan() || intensity < 0.0 {
        return Err(Error::OutOfRange {
            name: "intensity",
            constraint: ">= 0",
            value: intensity,
        });
    }
    if intensity == 0.0 {
        return Ok(0.0);
    }
    let e = intensity.sqrt();
    let peak = gaussian_peak();
    let efficiency = postselection_efficiency(threshold, intensity);
    let integrand = move |x: f64| {
        let dm = x - e;
        let dp = x + e;
        let prob = 0.5 * peak * ((-2.0 * dm * dm).exp() + (-2.0 * dp * dp).exp());
        prob * binary_entropy_from_logit(8.0 * e * x)
    };
    // all the positive-side mass lies within 8 units of the displacement
    let lower = threshold.max(e - 8.0);
    let upper = threshold.max(e) + 8.0;
    // the two half-lines contribute equally by symmetry
    let conditional_entropy = 2.0
        * integrate_1d(
            integrand,
            Interval::new(lower, upper)?,
            &QuadratureSpec::default(),
        )?;
    Ok((1.0 - conditional_entropy / efficiency).clamp(0.0, 1.0))
}

/// The key gain G and its ingredients at one operating point. Bob's side is
/// evaluated at the received intensity `eta * n`, Eve's fraction at the
/// tapped intensity `(1 - eta) * n`.
pub fn key_gain(params: &ProtocolParams) -> Result<KeyGainReport> {
    let received = params.transmission() * params.intensity();
    let tapped = params.loss() * params.intensity();
    let efficiency = postselection_efficiency(params.threshold(), received);
    let mutual_info = mutual_information(params.threshold(), received)?;
    let tau_value = tau(tapped)?;
    let gain = 0.5 * efficiency * (mutual_info - tau_value);
    Ok(KeyGainReport {
        params: *params,
        efficiency,
        mutual_info,
        tau: tau_value,
        gain,
    })
}

/// Search box and refinement tolerance for [`optimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSpec {
    /// Upper edge of the threshold box (lower edge is 0).
    pub x0_max: f64,
    /// Upper edge of the intensity box (lower edge is one coarse step).
    pub n_max: f64,
    /// Coarse grid step along both axes.
    pub coarse_step: f64,
    /// Parameter tolerance of the local refinement.
    pub refine_tol: f64,
}

impl Default for SearchSpec {
    fn default() -> Self {
        // All known optima sit well inside n <= 0.9, x0 <= 2.
        Self {
            x0_max: 4.0,
            n_max: 4.0,
            coarse_step: 0.05,
            refine_tol: 1e-3,
        }
    }
}

/// The maximizer found for a given loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub loss: f64,
    pub best_x0: f64,
    pub best_n: f64,
    pub best_gain: f64,
    /// False when no point of the search box achieves positive gain; the
    /// reported point is then the least-negative one.
    pub secure: bool,
}

fn gain_at(threshold: f64, received: f64, tau_value: f64) -> Result<f64> {
    let efficiency = postselection_efficiency(threshold, received);
    let mutual_info = mutual_information(threshold, received)?;
    Ok(0.5 * efficiency * (mutual_info - tau_value))
}

/// Maximizes G over `(x0, n)` for the given loss: a coarse grid scan over the
/// search box followed by a shrinking pattern search down to the refinement
/// tolerance. Grid columns are evaluated in parallel; the result is
/// deterministic regardless of thread count, with exact gain ties broken
/// toward the smallest threshold and then the smallest intensity.
pub fn optimize(loss: f64, search: &SearchSpec) -> Result<Optimum> {
    if !(0.0..1.0).contains(&loss) {
        return Err(Error::OutOfRange {
            name: "loss",
            constraint: "in [0, 1)",
            value: loss,
        });
    }
    for (name, v, ok) in [
        ("x0_max", search.x0_max, search.x0_max >= 0.0),
        ("n_max", search.n_max, search.n_max > 0.0),
        ("coarse_step", search.coarse_step, search.coarse_step > 0.0),
        ("refine_tol", search.refine_tol, search.refine_tol > 0.0),
    ] {
        if !ok {
            return Err(Error::OutOfRange {
                name,
                constraint: "positive",
                value: v,
            });
        }
    }
    let eta = 1.0 - loss;
    let step = search.coarse_step;
    let x0_count = (search.x0_max / step).round() as usize + 1;
    let n_count = (search.n_max / step).round() as usize;

    // coarse scan, one intensity column per task so tau is computed once per n
    let columns: Vec<(f64, f64, f64)> = (1..=n_count)
        .into_par_iter()
        .map(|j| -> Result<(f64, f64, f64)> {
            let n = j as f64 * step;
            let tau_value = tau(loss * n)?;
            let mut best = (f64::NEG_INFINITY, 0.0);
            for i in 0..x0_count {
                let x0 = i as f64 * step;
                let g = gain_at(x0, eta * n, tau_value)?;
                if g > best.0 {
                    best = (g, x0);
                }
            }
            Ok((best.0, best.1, n))
        })
        .collect::<Result<Vec<_>>>()?;

    let (mut best_gain, mut best_x0, mut best_n) = columns
        .into_iter()
        .reduce(|a, b| {
            if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                b
            } else {
                a
            }
        })
        .expect("search box contains at least one intensity column");

    // pattern search: shrink the step until it is below the tolerance, then
    // confirm local optimality at exactly the tolerance step
    let n_floor = search.refine_tol;
    let eval = |x0: f64, n: f64| -> Result<f64> { gain_at(x0, eta * n, tau(loss * n)?) };
    loop {
        let mut pattern = step / 2.0;
        while pattern >= search.refine_tol / 2.0 {
            let mut moved = false;
            for (dx, dn) in [
                (-pattern, 0.0),
                (pattern, 0.0),
                (0.0, -pattern),
                (0.0, pattern),
            ] {
                let x0 = (best_x0 + dx).clamp(0.0, search.x0_max);
                let n = (best_n + dn).clamp(n_floor, search.n_max);
                if x0 == best_x0 && n == best_n {
                    continue;
                }
                let g = eval(x0, n)?;
                if g > best_gain {
                    best_gain = g;
                    best_x0 = x0;
                    best_n = n;
                    moved = true;
                }
            }
            if !moved {
                pattern /= 2.0;
            }
        }
        let mut improved = false;
        'neighbors: for dx in [-1.0, 0.0, 1.0] {
            for dn in [-1.0, 0.0, 1.0] {
                if dx == 0.0 && dn == 0.0 {
                    continue;
                }
                let x0 = (best_x0 + dx * search.refine_tol).clamp(0.0, search.x0_max);
                let n = (best_n + dn * search.refine_tol).clamp(n_floor, search.n_max);
                let g = eval(x0, n)?;
                if g > best_gain {
                    best_gain = g;
                    best_x0 = x0;
                    best_n = n;
                    improved = true;
                    break 'neighbors;
                }
            }
        }
        if !improved {
            break;
        }
    }

    Ok(Optimum {
        loss,
        best_x0,
        best_n,
        best_gain,
        secure: best_gain > 0.0,
    })
}

/// Eve's residual Shannon information bound after discarding `s` bits in
/// privacy amplification: `2^-s / ln 2`.
pub fn privacy_amplification_bound(discarded_bits: u32) -> f64 {
    (-(discarded_bits as f64)).exp2() / LN_2
}

/// The largest loss at which the key gain stays positive for fixed
/// `(x0, n)`, found by bisection to 1e-6. The sign of G matches the sign of
/// `I_AB - tau` because the efficiency is always positive, and that
/// difference is strictly decreasing in the loss. Returns 0 when the gain is
/// not positive even on a lossless channel.
pub fn secure_region(threshold: f64, intensity: f64) -> Result<f64> {
    if intensity.is_nan() || intensity <= 0.0 {
        return Err(Error::OutOfRange {
            name: "intensity",
            constraint: "> 0",
            value: intensity,
        });
    }
    let margin = |loss: f64| -> Result<f64> {
        Ok(mutual_information(threshold, (1.0 - loss) * intensity)? - tau(loss * intensity)?)
    };
    if margin(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0 - 1e-9;
    if margin(hi)? > 0.0 {
        return Ok(hi);
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if margin(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn tau_vacuum_is_zero() {
        assert_eq!(tau(0.0).unwrap(), 0.0);
    }

    #[test]
    fn tau_matches_riemann_oracle_at_unit_intensity() {
        // brute-force midpoint sum on [0, 10], step 1e-5
        let e = 1.0f64;
        let step = 1e-5;
        let count = (10.0 / step) as usize;
        let mut sum = 0.0;
        for k in 0..count {
            let x = (k as f64 + 0.5) * step;
            let dm = x - e;
            let dp = x + e;
            let num = (-4.0 * dm * dm).exp() + (-4.0 * dp * dp).exp();
            let den = (-2.0 * dm * dm).exp() + (-2.0 * dp * dp).exp();
            sum += num / den * step;
        }
        let oracle = 1.0 + ((2.0 / PI).sqrt() * sum).log2();
        let got = tau(1.0).unwrap();
        assert!((got - oracle).abs() < 1e-9, "{got} vs oracle {oracle}");
        // frozen from the oracle run
        assert!((got - 0.949648918199889).abs() < 1e-11, "{got}");
    }

    #[test]
    fn tau_saturates_at_high_intensity() {
        let t = tau(100.0).unwrap();
        assert!(t > 0.999, "{t}");
        assert!(t <= 1.0);
    }

    #[test]
    fn tau_monotone_and_bounded() {
        let mut prev = -1.0;
        for k in 0..=50 {
            let n = 0.1 * k as f64;
            let t = tau(n).unwrap();
            assert!((0.0..=1.0).contains(&t));
            assert!(t >= prev - 1e-12, "tau not increasing at n = {n}");
            prev = t;
        }
    }

    #[test]
    fn mutual_information_vanishes_at_zero_intensity() {
        for x0 in [0.0, 0.5, 3.0] {
            assert_eq!(mutual_information(x0, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn mutual_information_saturates_with_threshold() {
        let i = mutual_information(3.0, 1.0).unwrap();
        assert!(i >= 0.999, "{i}");
        assert!(1.0 - i < 1e-3);
    }

    #[test]
    fn mutual_information_point_value() {
        // frozen from an independent quadrature of the defining integral
        let i = mutual_information(0.0, 1.0).unwrap();
        assert!((i - 0.9128222857744821).abs() < 1e-9, "{i}");
    }

    #[test]
    fn mutual_information_monotone_on_grid() {
        for &n in &[0.25, 0.5, 1.0, 2.0] {
            let mut prev = -1.0;
            for k in 0..=25 {
                let x0 = 0.12 * k as f64;
                let i = mutual_information(x0, n).unwrap();
                assert!((0.0..=1.0).contains(&i));
                assert!(
                    i >= prev - 1e-12,
                    "I_AB not increasing in x0 at ({x0}, {n})"
                );
                prev = i;
            }
        }
        for &x0 in &[0.0, 0.5, 1.0] {
            let mut prev = -1.0;
            for k in 1..=20 {
                let n = 0.2 * k as f64;
                let i = mutual_information(x0, n).unwrap();
                assert!(i >= prev - 1e-12, "I_AB not increasing in n at ({x0}, {n})");
                prev = i;
            }
        }
    }

    #[test]
    fn mutual_information_matches_empirical_estimate() {
        // Soft-decision oracle: histogram 1e7 simulated (bit, outcome) pairs
        // into fine bins and compute the plug-in mutual information. The
        // plug-in estimate is compared within 3 sigma plus its occupancy
        // bias.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9128);
        const BINS: usize = 1000;
        let lo = -5.0f64;
        let width = 10.0 / BINS as f64;
        let mut joint = vec![[0u64; 2]; BINS];
        let samples = 10_000_000u64;
        for _ in 0..samples {
            let bit = rng.gen::<bool>() as usize;
            let mean = if bit == 1 { 1.0 } else { -1.0 };
            let x: f64 = mean + 0.5 * rng.sample::<f64, _>(rand_distr::StandardNormal);
            let k = (((x - lo) / width) as isize).clamp(0, BINS as i64 as isize - 1) as usize;
            joint[k][bit] += 1;
        }
        let total = samples as f64;
        let pb = [0.5f64, 0.5];
        let mut mi = 0.0;
        let mut second_moment = 0.0;
        let mut occupied = 0usize;
        for cell in &joint {
            let px = (cell[0] + cell[1]) as f64 / total;
            for b in 0..2 {
                if cell[b] == 0 {
                    continue;
                }
                occupied += 1;
                let pj = cell[b] as f64 / total;
                let term = (pj / (px * pb[b])).log2();
                mi += pj * term;
                second_moment += pj * term * term;
            }
        }
        let sigma = ((second_moment - mi * mi) / total).sqrt();
        let bias = (occupied as f64 - 1.0) / (2.0 * total * LN_2);
        let analytic = mutual_information(0.0, 1.0).unwrap();
        assert!(
            (mi - analytic).abs() < 3.0 * sigma + bias,
            "empirical {mi} vs analytic {analytic} (3 sigma = {}, bias = {bias})",
            3.0 * sigma
        );
    }

    #[test]
    fn lossless_gain_is_half_mutual_information() {
        let params = ProtocolParams::new(1.0, 0.0, 1.0).unwrap();
        let report = key_gain(&params).unwrap();
        assert_eq!(report.tau, 0.0);
        assert_eq!(report.efficiency, 1.0);
        assert_eq!(report.gain, 0.5 * report.mutual_info);
        assert!(report.gain >= 0.0);
    }

    #[test]
    fn report_is_internally_consistent() {
        let params = ProtocolParams::new(0.89, 0.22, 0.9).unwrap();
        let report = key_gain(&params).unwrap();
        let recomputed = 0.5 * report.efficiency * (report.mutual_info - report.tau);
        assert_eq!(report.gain, recomputed);
    }

    #[test]
    fn quoted_operating_points() {
        // 10% loss at (x0, n) = (0.22, 0.89)
        let g = key_gain(&ProtocolParams::new(0.89, 0.22, 0.9).unwrap())
            .unwrap()
            .gain;
        assert!((g - 0.27).abs() < 0.01, "{g}");
        assert!((g - 0.2662778970627861).abs() < 1e-6, "{g}");
        // 50% loss at (0.64, 0.62)
        let g = key_gain(&ProtocolParams::new(0.62, 0.64, 0.5).unwrap())
            .unwrap()
            .gain;
        assert!((g - 0.040).abs() < 0.002, "{g}");
        assert!((g - 0.03964190724193002).abs() < 1e-6, "{g}");
        // 90% loss at (1.91, 0.59)
        let g = key_gain(&ProtocolParams::new(0.59, 1.91, 0.1).unwrap())
            .unwrap()
            .gain;
        assert!(g > 6.0e-6 / 1.5 && g < 6.0e-6 * 1.5, "{g}");
        assert!((g - 5.9423271053456e-6).abs() < 1e-9, "{g}");
    }

    #[test]
    fn privacy_amplification_bound_values() {
        assert!((privacy_amplification_bound(0) - 1.0 / LN_2).abs() < 1e-15);
        assert!((privacy_amplification_bound(10) - 2f64.powi(-10) / LN_2).abs() < 1e-18);
        // smallest s pushing the bound under 1e-6
        let s = (0..64)
            .find(|&s| privacy_amplification_bound(s) <= 1e-6)
            .unwrap();
        assert_eq!(s, 21);
    }

    #[test]
    fn secure_region_boundary_matches_dense_scan() {
        let boundary = secure_region(0.0, 1.0).unwrap();
        // frozen from the bisection cross-checked below
        assert!((boundary - 0.412011345682).abs() < 1e-5, "{boundary}");
        // dense scan oracle at step 1e-4
        let mut last_positive = 0.0;
        let mut loss = 0.0;
        while loss < 1.0 {
            let margin =
                mutual_information(0.0, (1.0 - loss) * 1.0).unwrap() - tau(loss * 1.0).unwrap();
            if margin > 0.0 {
                last_positive = loss;
            } else {
                break;
            }
            loss += 1e-4;
        }
        assert!(
            (boundary - last_positive).abs() <= 1e-4 + 1e-6,
            "{boundary} vs scan {last_positive}"
        );
    }

    #[test]
    fn secure_region_extends_with_threshold() {
        let thresholds = [0.0, 0.3, 0.5, 1.0, 1.5];
        let mut prev = -1.0;
        for &x0 in &thresholds {
            let b = secure_region(x0, 1.0).unwrap();
            assert!(
                b > prev,
                "boundary not increasing at x0 = {x0}: {b} <= {prev}"
            );
            prev = b;
        }
    }

    #[test]
    fn gain_positive_somewhere_when_tau_below_one() {
        // for every (n, eta) with tau < 0.99 some threshold in [0, 6] gives
        // G > 0
        for &(n, eta) in &[(0.5, 0.8), (1.0, 0.5), (2.0, 0.4), (1.0, 0.25)] {
            let t = tau((1.0 - eta) * n).unwrap();
            if t >= 0.99 {
                continue;
            }
            let found = (0..=60).any(|k| {
                let x0 = 0.1 * k as f64;
                let i = mutual_information(x0, eta * n).unwrap();
                let p = postselection_efficiency(x0, eta * n);
                0.5 * p * (i - t) > 0.0
            });
            assert!(
                found,
                "no positive gain for n = {n}, eta = {eta}, tau = {t}"
            );
        }
    }

    #[test]
    fn optimum_is_a_local_maximum() {
        let opt = optimize(0.5, &SearchSpec::default()).unwrap();
        assert!(opt.secure);
        for dx in [-1.0, 0.0, 1.0] {
            for dn in [-1.0, 0.0, 1.0] {
                if dx == 0.0 && dn == 0.0 {
                    continue;
                }
                let x0 = (opt.best_x0 + dx * 1e-3).max(0.0);
                let n = (opt.best_n + dn * 1e-3).max(1e-3);
                let g = key_gain(&ProtocolParams::new(n, x0, 0.5).unwrap())
                    .unwrap()
                    .gain;
                assert!(
                    g <= opt.best_gain,
                    "neighbor ({x0}, {n}) beats optimum: {g} > {}",
                    opt.best_gain
                );
            }
        }
    }

    #[test]
    fn optimum_survives_finer_grid() {
        let opt = optimize(0.5, &SearchSpec::default()).unwrap();
        let mut finer_best = f64::NEG_INFINITY;
        for i in -20..=20i32 {
            for j in -20..=20i32 {
                let x0 = (opt.best_x0 + i as f64 * 5e-4).max(0.0);
                let n = (opt.best_n + j as f64 * 5e-4).max(1e-4);
                let g = key_gain(&ProtocolParams::new(n, x0, 0.5).unwrap())
                    .unwrap()
                    .gain;
                finer_best = finer_best.max(g);
            }
        }
        assert!(
            finer_best - opt.best_gain <= 1e-4,
            "finer grid improves gain by {}",
            finer_best - opt.best_gain
        );
    }

    #[test]
    fn hopeless_loss_reports_no_secure_region() {
        let opt = optimize(0.999, &SearchSpec::default()).unwrap();
        assert!(!opt.secure);
        assert!(opt.best_gain <= 0.0);
    }

    #[test]
    fn optimize_is_deterministic_across_thread_counts() {
        let parallel = optimize(0.3, &SearchSpec::default()).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| optimize(0.3, &SearchSpec::default()).unwrap());
        assert_eq!(parallel, single);
    }

    #[test]
    fn optimize_rejects_bad_inputs() {
        assert!(optimize(1.0, &SearchSpec::default()).is_err());
        assert!(optimize(-0.1, &SearchSpec::default()).is_err());
        let bad = SearchSpec {
            coarse_step: 0.0,
            ..SearchSpec::default()
        };
        assert!(optimize(0.1, &bad).is_err());
    }
}
