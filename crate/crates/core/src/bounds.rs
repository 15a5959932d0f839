//! Scalar functions behind the flux bounds.
//!
//! | name here                   | role                                        |
//! |-----------------------------|---------------------------------------------|
//! | [`x_tanh_half`]             | `h(x) = x·tanh(x/2)`                        |
//! | [`inverse_x_tanh_half`]     | `g = h⁻¹` on `[0, ∞)`                       |
//! | [`flux_ratio_bound`]        | `B(x) = (x/g(x))² = tanh²(g(x)/2)`          |
//! | [`variance_ratio_bound`]    | `f(x) = 1/sinh²(g(x)/2)`                    |
//! | [`onsager_like`]            | `2r·artanh(r)`                              |
//!
//! `B(x)(1 + f(x)) = 1`, and `r² ≤ B(s)` holds exactly when
//! `2r·artanh(r) ≤ s`.

use crate::error::{Error, Result};
use crate::state::ExtendedReal;

/// Root-finder settings for [`inverse_x_tanh_half_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundFunctionConfig {
    /// Accepted `|h(g(x)) − x|`, relative to `max(1, x)`.
    pub root_tolerance: f64,
    pub max_iterations: usize,
    /// Factor applied to the upper bracket end until it encloses the root.
    pub bracket_growth: f64,
}

impl Default for BoundFunctionConfig {
    fn default() -> Self {
        BoundFunctionConfig {
            root_tolerance: 1e-12,
            max_iterations: 200,
            bracket_growth: 2.0,
        }
    }
}

impl BoundFunctionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.root_tolerance > 0.0) {
            return Err(Error::validation("root_tolerance", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::validation("max_iterations", "must be at least 1"));
        }
        if !(self.bracket_growth > 1.0) {
            return Err(Error::validation("bracket_growth", "must exceed 1"));
        }
        Ok(())
    }
}

fn check_nonnegative(function: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            argument: x,
        })
    }
}

/// `h(x) = x·tanh(x/2)`, strictly increasing on `[0, ∞)`.
pub fn x_tanh_half(x: f64) -> Result<f64> {
    check_nonnegative("x_tanh_half", x)?;
    Ok(h(x))
}

#[inline]
fn h(x: f64) -> f64 {
    x * (0.5 * x).tanh()
}

#[inline]
fn h_prime(x: f64) -> f64 {
    let half = 0.5 * x;
    let c = half.cosh();
    half.tanh() + half / (c * c)
}

/// `g(y)`: the `x ≥ 0` with `x·tanh(x/2) = y`.
pub fn inverse_x_tanh_half(y: f64) -> Result<f64> {
    inverse_x_tanh_half_with(y, &BoundFunctionConfig::default())
}

/// Guarded Newton iteration inside a bisection bracket.
///
/// The bracket starts at `[y, max(y + 2, √(2y) + 2)]` (`h(x) ≤ x` gives the
/// lower end) and the upper end grows until `h(hi) ≥ y`. Newton starts from
/// the midpoint; an iterate that leaves the bracket is replaced by the
/// bisection point.
pub fn inverse_x_tanh_half_with(y: f64, cfg: &BoundFunctionConfig) -> Result<f64> {
    check_nonnegative("inverse_x_tanh_half", y)?;
    cfg.validate()?;
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut lo = y;
    let mut hi = (y + 2.0).max((2.0 * y).sqrt() + 2.0);
    let mut grown = 0;
    while h(hi) < y {
        hi *= cfg.bracket_growth;
        grown += 1;
        if grown > cfg.max_iterations {
            return Err(Error::NotConverged {
                method: "inverse_x_tanh_half bracket",
                iterations: grown,
                residual: y - h(hi),
            });
        }
    }

    let accept = cfg.root_tolerance * y.max(1.0);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..cfg.max_iterations {
        let r = h(x) - y;
        if r == 0.0 {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = x - r / h_prime(x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 4.0 * f64::EPSILON * x || hi - lo <= 2.0 * f64::EPSILON * hi {
            let residual = (h(x) - y).abs();
            if residual <= accept {
                return Ok(x);
            }
            return Err(Error::NotConverged {
                method: "inverse_x_tanh_half",
                iterations: cfg.max_iterations,
                residual,
            });
        }
    }
    Err(Error::NotConverged {
        method: "inverse_x_tanh_half",
        iterations: cfg.max_iterations,
        residual: (h(x) - y).abs(),
    })
}

/// `B(x) = (x/g(x))²`, with `B(0) = 0` by continuity. Lies in `[0, 1)`.
pub fn flux_ratio_bound(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let gx = inverse_x_tanh_half(x)?;
    let ratio = x / gx;
    Ok(ratio * ratio)
}

/// `B` extended to an infinite argument, where it tends to 1.
pub fn flux_ratio_bound_ext(x: ExtendedReal) -> Result<f64> {
    match x {
        ExtendedReal::Finite(v) => flux_ratio_bound(v),
        ExtendedReal::Infinite => Ok(1.0),
    }
}

/// `f(x) = 1/sinh²(g(x)/2)`; diverges at 0.
pub fn variance_ratio_bound(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "variance_ratio_bound",
            argument: x,
        });
    }
    let s = (0.5 * inverse_x_tanh_half(x)?).sinh();
    Ok(1.0 / (s * s))
}

/// `f` extended to an infinite argument, where it tends to 0.
pub fn variance_ratio_bound_ext(x: ExtendedReal) -> Result<f64> {
    match x {
        ExtendedReal::Finite(v) => variance_ratio_bound(v),
        ExtendedReal::Infinite => Ok(0.0),
    }
}

/// `2r·artanh(r)` for `|r| ≤ 1`; infinite at `|r| = 1`. Never below `2r²`.
pub fn onsager_like(r: f64) -> Result<ExtendedReal> {
    if !(r.abs() <= 1.0) {
        return Err(Error::Domain {
            function: "onsager_like",
            argument: r,
        });
    }
    if r.abs() == 1.0 {
        return Ok(ExtendedReal::Infinite);
    }
    Ok(ExtendedReal::Finite(2.0 * r * r.atanh()))
}
