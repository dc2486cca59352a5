//! The three canonical sinusoidal coordinates and the x ↔ z maps.
//!
//! A real quadratic `Q` with `z'² = Q(z)` reduces, after at most an affine
//! shift of `z`, to one of:
//!
//! - constant: `z'² = γ > 0`, `z = √γ·x` on the full line
//! - linear: `z'² = βz`, `β > 0`, `z = (β/4)x²` on the open half line
//! - quadratic: `z'² = α(z² + δ)` with `δ ∈ {0, ±1}` for `α > 0`
//!   (`sinh`, `exp`, `cosh` maps) and `δ = −1` for `α < 0` (`sin` map on a
//!   finite interval).
//!
//! The sign of the square root in `x(z) = ∫ dz/√Q` is fixed to `+`; the
//! mirror-image branch is recovered by the parity operation in the verifier
//! rather than by a flag here. Domain endpoints are open: evaluation at an
//! endpoint is an error, not an extrapolation.

use serde::Serialize;

use crate::model::{Family, ModelSpec, PolyP, PolyQ};
use crate::{Error, Result};

/// Canonical coordinate forms, after the affine shift of `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CanonicalCoordinate {
    /// `z'² = γ > 0`, `z = √γ·x`, full line.
    Constant { gamma: f64 },
    /// `z'² = βz` with `β > 0`, `z = (β/4)x²`, open half line.
    Linear { beta: f64 },
    /// `z'² = α(z² + δ)`. For `α > 0`: `δ = +1` → `sinh(√α x)` on the full
    /// line, `δ = 0` → `exp(√α x)` on the full line, `δ = −1` → `cosh(√α x)`
    /// on the open half line. For `α < 0`: `δ = −1` → `sin(√|α| x)` on
    /// `√|α| x ∈ (−π/2, π/2)`.
    Quadratic { alpha: f64, delta: i8 },
}

/// Domain of the base variable x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Domain {
    FullLine,
    HalfLine,
    Interval { half_width: f64 },
}

impl CanonicalCoordinate {
    pub fn domain(&self) -> Domain {
        match self {
            CanonicalCoordinate::Constant { .. } => Domain::FullLine,
            CanonicalCoordinate::Linear { .. } => Domain::HalfLine,
            CanonicalCoordinate::Quadratic { alpha, delta } => {
                if *alpha > 0.0 {
                    match delta {
                        -1 => Domain::HalfLine,
                        _ => Domain::FullLine,
                    }
                } else {
                    Domain::Interval {
                        half_width: std::f64::consts::FRAC_PI_2 / (-alpha).sqrt(),
                    }
                }
            }
        }
    }

    /// Open interval of admissible x, with infinite ends as ±∞.
    pub fn x_bounds(&self) -> (f64, f64) {
        match self.domain() {
            Domain::FullLine => (f64::NEG_INFINITY, f64::INFINITY),
            Domain::HalfLine => (0.0, f64::INFINITY),
            Domain::Interval { half_width } => (-half_width, half_width),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.x_bounds();
        x > lo && x < hi && x.is_finite()
    }

    /// The canonical Q coefficients (α, β, γ) realised by this form.
    pub fn q_coefficients(&self) -> (f64, f64, f64) {
        match *self {
            CanonicalCoordinate::Constant { gamma } => (0.0, 0.0, gamma),
            CanonicalCoordinate::Linear { beta } => (0.0, beta, 0.0),
            CanonicalCoordinate::Quadratic { alpha, delta } => {
                (alpha, 0.0, alpha * delta as f64)
            }
        }
    }

    /// Natural inverse-length of the form, used for default grids.
    pub fn scale(&self) -> f64 {
        match *self {
            CanonicalCoordinate::Constant { gamma } => gamma.sqrt().sqrt(),
            CanonicalCoordinate::Linear { beta } => 0.5 * beta.sqrt(),
            CanonicalCoordinate::Quadratic { alpha, .. } => alpha.abs().sqrt(),
        }
    }

    fn out_of_domain(&self, x: f64) -> Error {
        let (lo, hi) = self.x_bounds();
        Error::OutOfDomain { x, lo, hi }
    }
}

/// Result of reducing a (real) Q to canonical form: the form plus the shift
/// `z̃ = z + shift` that was applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalReduction {
    pub form: CanonicalCoordinate,
    pub shift: f64,
}

/// A model rewritten in its canonical coordinate: shifted P coefficients,
/// canonical form, and the original metadata. All solvers work on this.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalModel {
    pub form: CanonicalCoordinate,
    pub p: PolyP,
    pub level_count: usize,
    pub family: Family,
    pub shift: f64,
}

impl CanonicalModel {
    pub fn q_poly(&self) -> PolyQ {
        let (a, b, g) = self.form.q_coefficients();
        PolyQ::real(a, b, g)
    }

    pub fn z_of_x(&self, x: f64) -> Result<f64> {
        z_of_x(&self.form, x)
    }

    pub fn x_of_z(&self, z: f64) -> Result<f64> {
        x_of_z(&self.form, z)
    }
}

const CANON_TOL: f64 = 1e-11;

/// Reduce a real Q to one of the three canonical forms. Non-canonical
/// quadratics are shifted by `z → z + β/(2α)` (linear ones by `γ/β`); a
/// quadratic whose shifted constant is not in `{−α, 0, +α}` is rejected
/// rather than rescaled.
pub fn canonical_coordinate(q: &PolyQ) -> Result<CanonicalReduction> {
    if q.imag_magnitude() > 0.0 {
        return Err(Error::NonCanonical(format!(
            "Q has complex coefficients (max imaginary part {:.3e})",
            q.imag_magnitude()
        )));
    }
    let (alpha, beta, gamma) = (q.alpha.re, q.beta.re, q.gamma.re);
    let scale = alpha.abs().max(beta.abs()).max(gamma.abs());
    if scale == 0.0 {
        return Err(Error::NonCanonical("Q is identically zero".into()));
    }
    let is_zero = |v: f64| v.abs() <= CANON_TOL * scale;

    if is_zero(alpha) {
        if is_zero(beta) {
            if gamma > 0.0 {
                return Ok(CanonicalReduction {
                    form: CanonicalCoordinate::Constant { gamma },
                    shift: 0.0,
                });
            }
            return Err(Error::NonCanonical(format!(
                "constant form needs gamma > 0, got {gamma}"
            )));
        }
        if beta < 0.0 {
            return Err(Error::NonCanonical(format!(
                "linear form needs beta > 0, got {beta}"
            )));
        }
        // beta z + gamma = beta (z + gamma/beta)
        return Ok(CanonicalReduction {
            form: CanonicalCoordinate::Linear { beta },
            shift: gamma / beta,
        });
    }

    let shift = beta / (2.0 * alpha);
    let gamma_shifted = gamma - beta * beta / (4.0 * alpha);
    let delta = if is_zero(gamma_shifted) {
        0
    } else if (gamma_shifted - alpha).abs() <= CANON_TOL * scale {
        1
    } else if (gamma_shifted + alpha).abs() <= CANON_TOL * scale {
        -1
    } else {
        return Err(Error::NonCanonical(format!(
            "shifted constant {gamma_shifted} is not in {{-alpha, 0, +alpha}} for alpha = {alpha}"
        )));
    };
    if alpha < 0.0 && delta != -1 {
        return Err(Error::NonCanonical(format!(
            "alpha < 0 admits only delta = -1, got delta = {delta}"
        )));
    }
    Ok(CanonicalReduction {
        form: CanonicalCoordinate::Quadratic { alpha, delta },
        shift,
    })
}

/// Rewrite a model in its canonical coordinate. The P coefficients are
/// shifted along with Q: `P̃(z̃) = P(z̃ − s)`.
pub fn canonicalize(spec: &ModelSpec) -> Result<CanonicalModel> {
    let red = canonical_coordinate(&spec.q)?;
    let s = red.shift;
    let p = if s == 0.0 {
        spec.p
    } else {
        PolyP::new(
            spec.p.a2,
            spec.p.a1 - spec.p.a2 * (2.0 * s),
            spec.p.a0 - spec.p.a1 * s + spec.p.a2 * (s * s),
        )
    };
    Ok(CanonicalModel {
        form: red.form,
        p,
        level_count: spec.level_count,
        family: spec.family,
        shift: s,
    })
}

/// The coordinate map z(x). Strictly monotone on the open domain.
pub fn z_of_x(form: &CanonicalCoordinate, x: f64) -> Result<f64> {
    if !form.contains(x) {
        return Err(form.out_of_domain(x));
    }
    Ok(match *form {
        CanonicalCoordinate::Constant { gamma } => gamma.sqrt() * x,
        CanonicalCoordinate::Linear { beta } => 0.25 * beta * x * x,
        CanonicalCoordinate::Quadratic { alpha, delta } => {
            if alpha > 0.0 {
                let t = alpha.sqrt() * x;
                match delta {
                    1 => t.sinh(),
                    0 => t.exp(),
                    _ => t.cosh(),
                }
            } else {
                ((-alpha).sqrt() * x).sin()
            }
        }
    })
}

/// The inverse map x(z); round-trips with `z_of_x` to 1e-12 relative.
pub fn x_of_z(form: &CanonicalCoordinate, z: f64) -> Result<f64> {
    let bad = || Error::OutOfImage { z };
    Ok(match *form {
        CanonicalCoordinate::Constant { gamma } => z / gamma.sqrt(),
        CanonicalCoordinate::Linear { beta } => {
            if z <= 0.0 {
                return Err(bad());
            }
            2.0 * (z / beta).sqrt()
        }
        CanonicalCoordinate::Quadratic { alpha, delta } => {
            if alpha > 0.0 {
                let s = alpha.sqrt();
                match delta {
                    1 => z.asinh() / s,
                    0 => {
                        if z <= 0.0 {
                            return Err(bad());
                        }
                        z.ln() / s
                    }
                    _ => {
                        if z <= 1.0 {
                            return Err(bad());
                        }
                        z.acosh() / s
                    }
                }
            } else {
                if !(-1.0..=1.0).contains(&z) {
                    return Err(bad());
                }
                z.asin() / (-alpha).sqrt()
            }
        }
    })
}

/// Interior sample points spanning the physically relevant part of the
/// domain, endpoint standoffs included. Used by validation and tests.
pub fn sample_xs(form: &CanonicalCoordinate, count: usize) -> Vec<f64> {
    let (lo, hi) = sample_box(form);
    let count = count.max(2);
    (0..count)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / count as f64)
        .collect()
}

/// A compact interior box per form (maps to z of order unity).
pub fn sample_box(form: &CanonicalCoordinate) -> (f64, f64) {
    match *form {
        CanonicalCoordinate::Constant { gamma } => {
            let w = 4.0 / gamma.sqrt();
            (-w, w)
        }
        CanonicalCoordinate::Linear { beta } => {
            let w = 4.0 / beta.sqrt();
            (0.02 * w, 2.0 * w)
        }
        CanonicalCoordinate::Quadratic { alpha, delta } => {
            if alpha > 0.0 {
                let w = 1.0 / alpha.sqrt();
                match delta {
                    1 => (-2.1 * w, 2.1 * w),
                    0 => (-3.0 * w, 3.0 * w),
                    _ => (0.05 * w, 3.0 * w),
                }
            } else {
                let hw = std::f64::consts::FRAC_PI_2 / (-alpha).sqrt();
                (-0.93 * hw, 0.93 * hw)
            }
        }
    }
}
