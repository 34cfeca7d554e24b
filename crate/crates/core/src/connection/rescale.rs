//! Changing the interval unit `ℓ → kℓ`: coordinates and curve parameters scale
//! by `1/k`, `ς` and `ξ` by `k²`, and metric components follow the same events.

use crate::algebra::{FiveVectorField, FIFTH};
use crate::error::{Error, Result};
use crate::field::Point;
use crate::metric::Constants;

fn check(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRescale(k))
    }
}

pub fn rescale_constants(c: &Constants, k: f64) -> Result<Constants> {
    check(k)?;
    Ok(Constants { xi: c.xi * k * k, varsigma: c.varsigma * k * k, ..*c })
}

/// Canonical field in rescaled coordinates: `u′^α(x′) = u^α(kx′)`, `u′⁵(x′) = k u⁵(kx′)`.
pub fn rescale_field(u: &FiveVectorField, k: f64) -> Result<FiveVectorField> {
    check(k)?;
    Ok(FiveVectorField(std::array::from_fn(|a| {
        let f = u.0[a].rescale_args(k);
        if a == FIFTH {
            f.scale(k)
        } else {
            f
        }
    })))
}

pub fn rescale_point(p: &Point, k: f64) -> Result<Point> {
    check(k)?;
    Ok(p.scaled(1.0 / k))
}
