//! Adaptive Gauss-Kronrod quadrature over finite, semi-infinite and infinite
//! intervals, plus iterated integrals over the four diagonal cone regions of
//! the plane.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// An integration interval. Endpoints may be infinite: `hi = +inf` and/or
/// `lo = -inf` select a variable substitution that maps the tail onto a
/// finite range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Creates an interval, requiring `lo <= hi`, no NaNs, and infinities
    /// only in the admissible direction (`lo != +inf`, `hi != -inf`).
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The whole real line.
    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Tolerance and budget settings for the adaptive integrator.
///
/// The integral is accepted once the accumulated error bound drops below
/// `max(abs_tol, rel_tol * |estimate|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        // Headline quantities are quoted to two significant figures; 1e-10
        // leaves eight guard digits.
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(Error::OutOfRange {
                name: "abs_tol",
                constraint: "> 0",
                value: self.abs_tol,
            });
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(Error::OutOfRange {
                name: "rel_tol",
                constraint: "> 0",
                value: self.rel_tol,
            });
        }
        Ok(())
    }
}

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights. Standard QUADPACK qk15 constants.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod evaluation on [a, b]: returns the K15 estimate and a
/// QUADPACK-style error bound derived from the K15/G7 difference.
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);

    let f_center = f(center);
    let mut result_gauss = f_center * WG[3];
    let mut result_kronrod = f_center * WGK[7];
    let mut result_abs = f_center.abs() * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for j in 0..7 {
        let dx = half_len * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        result_kronrod += WGK[j] * sum;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            // odd-index Kronrod nodes are the embedded Gauss nodes
            result_gauss += WG[j / 2] * sum;
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for (j, &w) in WGK.iter().enumerate().take(7) {
        result_asc += w * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let estimate = result_kronrod * half_len;
    let result_abs = result_abs * half_len.abs();
    let result_asc = result_asc * half_len.abs();
    let mut err = ((result_kronrod - result_gauss) * half_len).abs();
    if result_asc != 0.0 && err != 0.0 {
        err = result_asc * (200.0 * err / result_asc).powf(1.5).min(1.0);
    }
    let min_err = 50.0 * f64::EPSILON * result_abs;
    if min_err > f64::MIN_POSITIVE && err < min_err {
        err = min_err;
    }
    (estimate, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    estimate: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integration of `f` on a finite interval `[a, b]`.
fn integrate_finite<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    const INITIAL_PANELS: usize = 8;

    let mut heap = BinaryHeap::with_capacity(64);
    let mut total = 0.0;
    let mut total_err = 0.0;
    let width = (b - a) / INITIAL_PANELS as f64;
    for i in 0..INITIAL_PANELS {
        let pa = a + i as f64 * width;
        let pb = if i + 1 == INITIAL_PANELS {
            b
        } else {
            a + (i + 1) as f64 * width
        };
        let (est, err) = qk15(f, pa, pb);
        total += est;
        total_err += err;
        heap.push(Panel {
            a: pa,
            b: pb,
            estimate: est,
            error: err,
        });
    }

    let mut subdivisions = 0;
    while total_err > spec.abs_tol.max(spec.rel_tol * total.abs()) {
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureDidNotConverge {
                estimate: total,
                error_bound: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least the initial panels");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable at f64 resolution; accept as-is
            return Err(Error::QuadratureDidNotConverge {
                estimate: total,
                error_bound: total_err,
                subdivisions,
            });
        }
        let (e1, r1) = qk15(f, worst.a, mid);
        let (e2, r2) = qk15(f, mid, worst.b);
        total += e1 + e2 - worst.estimate;
        total_err += r1 + r2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            estimate: e1,
            error: r1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            estimate: e2,
            error: r2,
        });
        subdivisions += 1;
    }
    Ok(total)
}

/// Integrates `f` over `over`, to within `max(abs_tol, rel_tol * |value|)`.
///
/// Infinite endpoints are handled by rational variable substitution:
/// `(a, inf)` maps through `x = a + t/(1-t)` and the real line through
/// `x = t/(1-t^2)`. The integrand must decay fast enough (Gaussian tails
/// qualify) for the transformed integrand to stay bounded.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, over: Interval, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let (lo, hi) = (over.lo, over.hi);
    if lo == hi {
        return Ok(0.0);
    }
    match (lo.is_infinite(), hi.is_infinite()) {
        (false, false) => integrate_finite(&f, lo, hi, spec),
        (false, true) => {
            // x = lo + t/(1-t), dx = dt/(1-t)^2, t in [0,1)
            let g = |t: f64| {
                let u = 1.0 - t;
                let x = lo + t / u;
                stretch(f(x), 1.0 / (u * u))
            };
            integrate_finite(&g, 0.0, 1.0, spec)
        }
        (true, false) => {
            // x = hi - t/(1-t), mirrored
            let g = |t: f64| {
                let u = 1.0 - t;
                let x = hi - t / u;
                stretch(f(x), 1.0 / (u * u))
            };
            integrate_finite(&g, 0.0, 1.0, spec)
        }
        (true, true) => {
            // x = t/(1-t^2), dx = (1+t^2)/(1-t^2)^2 dt, t in (-1,1)
            let g = |t: f64| {
                let u = 1.0 - t * t;
                let x = t / u;
                stretch(f(x), (1.0 + t * t) / (u * u))
            };
            integrate_finite(&g, -1.0, 1.0, spec)
        }
    }
}

/// Multiplies a sample by the substitution Jacobian, avoiding 0 * inf = NaN
/// when the integrand has already underflowed to zero in the far tail.
#[inline]
fn stretch(value: f64, jacobian: f64) -> f64 {
    if value == 0.0 || !value.is_finite() {
        0.0
    } else {
        value * jacobian
    }
}

/// The four diagonal cone regions of the plane used by the simultaneous
/// measurement decision rule. Boundary strictness is quoted as in the
/// decision rule; it is irrelevant for the integrals themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeRegion {
    /// x >= |y|
    PositiveX,
    /// y > |x|
    PositiveY,
    /// -x >= |y|
    NegativeX,
    /// -y > |x|
    NegativeY,
}

/// Integrates `f(x, y)` over one cone region as an iterated integral: the
/// outer variable runs over the whole line and the inner one over the cone
/// cross-section at that point. Intended for normalized two-dimensional
/// Gaussian product densities; the four region integrals of such a density
/// sum to 1.
pub fn integrate_2d_region<F: Fn(f64, f64) -> f64>(
    f: F,
    region: ConeRegion,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    // The inner integral is evaluated two orders tighter so its error shows
    // up below the outer tolerance rather than as noise in the outer
    // integrand.
    let inner_spec = QuadratureSpec {
        abs_tol: (spec.abs_tol * 1e-2).max(1e-15),
        rel_tol: (spec.rel_tol * 1e-2).max(1e-15),
        max_subdivisions: spec.max_subdivisions,
    };

    let inner_failure = std::cell::RefCell::new(None);
    let inner = |outer: f64| -> f64 {
        let range = match region {
            ConeRegion::PositiveX | ConeRegion::PositiveY => {
                Interval::new(outer.abs(), f64::INFINITY)
            }
            ConeRegion::NegativeX | ConeRegion::NegativeY => {
                Interval::new(f64::NEG_INFINITY, -outer.abs())
            }
        }
        .expect("cone cross-section is a valid interval");
        let res = match region {
            ConeRegion::PositiveX | ConeRegion::NegativeX => {
                integrate_1d(|x| f(x, outer), range, &inner_spec)
            }
            ConeRegion::PositiveY | ConeRegion::NegativeY => {
                integrate_1d(|y| f(outer, y), range, &inner_spec)
            }
        };
        match res {
            Ok(v) => v,
            Err(e) => {
                let best = match e {
                    Error::QuadratureDidNotConverge { estimate, .. } => estimate,
                    _ => 0.0,
                };
                inner_failure.borrow_mut().get_or_insert(e);
                best
            }
        }
    };

    let outer = integrate_1d(inner, Interval::real_line(), spec)?;
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    Ok(outer)
}
