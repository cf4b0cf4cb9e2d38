//! Scalar special functions and numerical integration primitives.
//!
//! Everything downstream reduces to two ingredients: the complementary error
//! function (every Gaussian tail integral in the protocol has an erfc closed
//! form) and adaptive quadrature (for the few integrals that do not).

mod erf;
mod quad;

pub use quad::{integrate_1d, integrate_2d_region, ConeRegion, Interval, QuadratureSpec};

use crate::error::{Error, Result};

pub(crate) use erf::erfc as erfc_unchecked;

/// The complementary error function erfc(x) = (2/sqrt(pi)) * integral of
/// exp(-t^2) over [x, inf).
///
/// Accurate to a few ulps; strictly decreasing with erfc(x) + erfc(-x) = 2.
/// Non-finite input is a domain error.
pub fn erfc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            name: "x",
            value: x,
        });
    }
    Ok(erf::erfc(x))
}
