//! The prepotential `W₀`, the ground-state factor `φ₀ = e^{−W₀}` and the
//! endpoint behavior that decides normalizability.
//!
//! `W₀` solves `W₀'(x)·z'(x) = P(z(x))`, i.e. `W₀ = ∫ P/Q dz` along the
//! canonical branch. Closed forms are used for every canonical family; an
//! adaptive quadrature of the same integral is kept as the fallback and the
//! cross-check. The additive constant follows the conventional per-family
//! forms (e.g. `W₀(0) = 0` for the sinh family), which only matters for
//! golden comparisons — physical quantities use differences.

use num_complex::Complex64;
use serde::Serialize;

use crate::coords::{self, CanonicalCoordinate, CanonicalModel};
use crate::model::ModelSpec;
use crate::Result;

/// Closed-form evaluators for `W₀`, `W₀'` and `φ₀` of one model.
#[derive(Debug, Clone)]
pub struct Prepotential {
    model: CanonicalModel,
}

/// Build the closed-form prepotential for a model (any canonical family,
/// including `custom` specs once their Q reduces to a canonical form).
pub fn w0_closed_form(spec: &ModelSpec) -> Result<Prepotential> {
    Ok(Prepotential {
        model: coords::canonicalize(spec)?,
    })
}

/// Ground-state factor `φ₀(x) = e^{−W₀(x)}`.
pub fn phi0(spec: &ModelSpec, x: f64) -> Result<Complex64> {
    w0_closed_form(spec)?.phi0(x)
}

impl Prepotential {
    pub fn from_canonical(model: CanonicalModel) -> Self {
        Self { model }
    }

    pub fn model(&self) -> &CanonicalModel {
        &self.model
    }

    /// `W₀(x)`, complex-valued in general.
    pub fn w0(&self, x: f64) -> Result<Complex64> {
        let m = &self.model;
        let z = m.z_of_x(x)?;
        let (a2, a1, a0) = (m.p.a2, m.p.a1, m.p.a0);
        Ok(match m.form {
            CanonicalCoordinate::Constant { gamma } => {
                (a2 * (z * z * z / 3.0) + a1 * (z * z / 2.0) + a0 * z) / gamma
            }
            CanonicalCoordinate::Linear { beta } => {
                (a2 * (z * z / 2.0) + a1 * z) / beta + a0 * (2.0 / beta * x.ln())
            }
            CanonicalCoordinate::Quadratic { alpha, delta } => {
                if alpha > 0.0 {
                    let s = alpha.sqrt();
                    match delta {
                        1 => {
                            a2 * (z / alpha)
                                + a1 * ((z * z + 1.0).ln() / (2.0 * alpha))
                                + (a0 - a2) * (z.atan() / alpha)
                        }
                        0 => a2 * (z / alpha) + a1 * (s * x / alpha) - a0 / (alpha * z),
                        _ => {
                            a2 * (z / alpha)
                                + a1 * ((z * z - 1.0).ln() / (2.0 * alpha))
                                + (a2 + a0) * ((0.5 * s * x).tanh().ln() / alpha)
                        }
                    }
                } else {
                    let a = -alpha;
                    -a2 * (z / a) - a1 * ((1.0 - z * z).ln() / (2.0 * a))
                        + (a2 + a0) * (z.atanh() / a)
                }
            }
        })
    }

    /// `W₀'(x) = P(z(x)) / √Q(z(x))` on the positive branch.
    pub fn w0_prime(&self, x: f64) -> Result<Complex64> {
        let m = &self.model;
        let z = m.z_of_x(x)?;
        let q = m.q_poly();
        let qv = q.eval(Complex64::new(z, 0.0)).re;
        Ok(m.p.eval(Complex64::new(z, 0.0)) / qv.sqrt())
    }

    /// `φ₀(x) = e^{−W₀(x)}`.
    pub fn phi0(&self, x: f64) -> Result<Complex64> {
        Ok((-self.w0(x)?).exp())
    }

    /// `W₀(x)` by adaptive quadrature of `P/Q` in `z` from a fixed interior
    /// reference point, pinned to the closed-form value there. Fallback and
    /// cross-check for the closed forms.
    pub fn w0_quadrature(&self, x: f64) -> Result<Complex64> {
        let m = &self.model;
        let x_ref = reference_x(&m.form);
        let z_ref = m.z_of_x(x_ref)?;
        let z = m.z_of_x(x)?;
        let base = self.w0(x_ref)?;
        let p = m.p;
        let q = m.q_poly();
        let integrand =
            |t: f64| p.eval(Complex64::new(t, 0.0)) / q.eval(Complex64::new(t, 0.0)).re;
        Ok(base + adaptive_simpson(&integrand, z_ref, z, 1e-11, 28))
    }
}

fn reference_x(form: &CanonicalCoordinate) -> f64 {
    match *form {
        CanonicalCoordinate::Constant { .. } => 0.0,
        CanonicalCoordinate::Linear { beta } => 2.0 / beta.sqrt(), // z = 1
        CanonicalCoordinate::Quadratic { alpha, delta } => {
            if alpha > 0.0 {
                match delta {
                    1 | 0 => 0.0,
                    _ => 1.0 / alpha.sqrt(),
                }
            } else {
                0.0
            }
        }
    }
}

/// Composite adaptive Simpson rule for a complex integrand on a real
/// interval. Handles `a > b` by sign flip.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let m = 0.5 * (lo + hi);
    let (flo, fm, fhi) = (f(lo), f(m), f(hi));
    let whole = simpson(lo, hi, flo, fm, fhi);
    sign * simpson_rec(f, lo, hi, flo, fm, fhi, whole, tol, max_depth)
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

// ---------------------------------------------------------------------------
// Endpoint analysis
// ---------------------------------------------------------------------------

/// Leading rate descriptor of `|φ₀·p_N|` at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateClass {
    /// `exp(−c·e^{s|x|})` type (the coordinate exponential enters the rate).
    DoubleExponential,
    /// `exp(−c·|x|^k)` type, `k ≥ 1`.
    Exponential,
    /// Power law in the divergent scale (|z| at infinite ends, wall distance
    /// at finite ends).
    Power,
    /// No modulus variation at leading order.
    UnitModulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointVerdict {
    Decaying,
    Growing,
    PowerDivergent,
    Bounded,
}

/// Behavior of `|φ₀·p_N|` near one endpoint.
#[derive(Debug, Clone, Serialize)]
pub struct EndpointBehavior {
    pub label: String,
    pub class: RateClass,
    /// Signed decay rate of the leading term: positive decays.
    pub rate: f64,
    /// Some coefficient at or above the leading scale carries a nonzero
    /// imaginary part (unit-modulus oscillation).
    pub oscillatory: bool,
    pub verdict: EndpointVerdict,
    #[serde(skip)]
    soft: bool,
    #[serde(skip)]
    wall: WallRule,
}

/// Overall mode verdict. `QnmOutgoing` is the artifact's label for states
/// whose modulus is bounded-oscillatory or power-modulated with complex
/// phase structure — the regime where complex-energy ladders live; such
/// states carry no finite norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalizability {
    Normalizable,
    NonNormalizable,
    QnmOutgoing,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointAnalysis {
    pub endpoints: Vec<EndpointBehavior>,
    pub overall: Normalizability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
enum WallRule {
    /// Infinite endpoint.
    Infinite,
    /// Finite endpoint with a confining wall: the state must vanish there.
    RequireDecay,
    /// Finite endpoint admitting any square-integrable power (rate > −1/2).
    SquareIntegrable,
}

struct Tier {
    class: RateClass,
    rate: f64,
    imag: f64,
}

/// Endpoint behavior of `|φ₀·p|` where `p` has the given polynomial degree,
/// plus the overall verdict. The polynomial shifts power-law exponents by
/// its degree at endpoints where `z` diverges.
pub fn endpoint_analysis(spec: &ModelSpec, degree: usize) -> Result<EndpointAnalysis> {
    let model = coords::canonicalize(spec)?;
    Ok(endpoint_analysis_canonical(&model, degree))
}

pub(crate) fn endpoint_analysis_canonical(
    model: &CanonicalModel,
    degree: usize,
) -> EndpointAnalysis {
    let (a2, a1, a0) = (model.p.a2, model.p.a1, model.p.a0);
    let deg = degree as f64;

    let mut raw: Vec<(String, Vec<Tier>, WallRule)> = Vec::new();
    match model.form {
        CanonicalCoordinate::Constant { gamma } => {
            let s = gamma.sqrt();
            for sign in [-1.0, 1.0] {
                let label = if sign < 0.0 { "x->-inf" } else { "x->+inf" };
                raw.push((
                    label.into(),
                    vec![
                        Tier {
                            class: RateClass::Exponential,
                            rate: sign * a2.re * s / 3.0,
                            imag: a2.im,
                        },
                        Tier {
                            class: RateClass::Exponential,
                            rate: a1.re / 2.0,
                            imag: a1.im,
                        },
                        Tier {
                            class: RateClass::Exponential,
                            rate: sign * a0.re / s,
                            imag: a0.im,
                        },
                        Tier {
                            class: RateClass::Power,
                            rate: -deg,
                            imag: 0.0,
                        },
                    ],
                    WallRule::Infinite,
                ));
            }
        }
        CanonicalCoordinate::Linear { beta } => {
            raw.push((
                "x->0+".into(),
                vec![Tier {
                    class: RateClass::Power,
                    rate: -2.0 * a0.re / beta,
                    imag: a0.im,
                }],
                WallRule::SquareIntegrable,
            ));
            raw.push((
                "x->+inf".into(),
                vec![
                    Tier {
                        class: RateClass::Exponential,
                        rate: a2.re * beta / 32.0,
                        imag: a2.im,
                    },
                    Tier {
                        class: RateClass::Exponential,
                        rate: a1.re / 4.0,
                        imag: a1.im,
                    },
                    Tier {
                        class: RateClass::Power,
                        rate: 2.0 * a0.re / beta - 2.0 * deg,
                        imag: a0.im,
                    },
                ],
                WallRule::Infinite,
            ));
        }
        CanonicalCoordinate::Quadratic { alpha, delta } if alpha > 0.0 => {
            let s = alpha.sqrt();
            let ln_tier = Tier {
                class: RateClass::Exponential,
                rate: s * (a1.re / alpha - deg),
                imag: a1.im,
            };
            match delta {
                1 => {
                    for sign in [-1.0, 1.0] {
                        let label = if sign < 0.0 { "x->-inf" } else { "x->+inf" };
                        raw.push((
                            label.into(),
                            vec![
                                Tier {
                                    class: RateClass::DoubleExponential,
                                    rate: sign * a2.re / alpha,
                                    imag: a2.im,
                                },
                                Tier {
                                    class: RateClass::Exponential,
                                    rate: s * (a1.re / alpha - deg),
                                    imag: a1.im,
                                },
                            ],
                            WallRule::Infinite,
                        ));
                    }
                }
                0 => {
                    raw.push((
                        "x->-inf".into(),
                        vec![
                            Tier {
                                class: RateClass::DoubleExponential,
                                rate: -a0.re / alpha,
                                imag: a0.im,
                            },
                            Tier {
                                class: RateClass::Exponential,
                                rate: -s * a1.re / alpha,
                                imag: a1.im,
                            },
                        ],
                        WallRule::Infinite,
                    ));
                    raw.push((
                        "x->+inf".into(),
                        vec![
                            Tier {
                                class: RateClass::DoubleExponential,
                                rate: a2.re / alpha,
                                imag: a2.im,
                            },
                            ln_tier,
                        ],
                        WallRule::Infinite,
                    ));
                }
                _ => {
                    let sum = a2 + a1 + a0;
                    raw.push((
                        "x->0+".into(),
                        vec![Tier {
                            class: RateClass::Power,
                            rate: -sum.re / alpha,
                            imag: sum.im,
                        }],
                        WallRule::RequireDecay,
                    ));
                    raw.push((
                        "x->+inf".into(),
                        vec![
                            Tier {
                                class: RateClass::DoubleExponential,
                                rate: a2.re / alpha,
                                imag: a2.im,
                            },
                            ln_tier,
                        ],
                        WallRule::Infinite,
                    ));
                }
            }
        }
        CanonicalCoordinate::Quadratic { alpha, .. } => {
            // alpha < 0: finite interval, walls at ±π/(2√|α|).
            let a = -alpha;
            let left = a1 - a2 - a0;
            let right = a1 + a2 + a0;
            let hw = std::f64::consts::FRAC_PI_2 / a.sqrt();
            raw.push((
                format!("x->-{hw:.6}"),
                vec![Tier {
                    class: RateClass::Power,
                    rate: left.re / a,
                    imag: left.im,
                }],
                WallRule::RequireDecay,
            ));
            raw.push((
                format!("x->+{hw:.6}"),
                vec![Tier {
                    class: RateClass::Power,
                    rate: right.re / a,
                    imag: right.im,
                }],
                WallRule::RequireDecay,
            ));
        }
    }

    let endpoints: Vec<EndpointBehavior> = raw
        .into_iter()
        .map(|(label, tiers, wall)| judge_endpoint(label, &tiers, wall))
        .collect();

    let overall = overall_verdict(&endpoints);
    EndpointAnalysis { endpoints, overall }
}

fn judge_endpoint(label: String, tiers: &[Tier], wall: WallRule) -> EndpointBehavior {
    let scale = tiers
        .iter()
        .map(|t| t.rate.abs().max(t.imag.abs()))
        .fold(0.0f64, f64::max);
    let eps = 1e-10 * (1.0 + scale);

    let mut osc_seen = false;
    let mut leading: Option<&Tier> = None;
    for t in tiers {
        osc_seen |= t.imag.abs() > eps;
        if t.rate.abs() > eps {
            leading = Some(t);
            break;
        }
    }

    match leading {
        None => EndpointBehavior {
            label,
            class: RateClass::UnitModulus,
            rate: 0.0,
            oscillatory: osc_seen || tiers.iter().any(|t| t.imag.abs() > eps),
            verdict: EndpointVerdict::Bounded,
            soft: true,
            wall,
        },
        Some(t) => {
            let verdict = if t.rate > 0.0 {
                EndpointVerdict::Decaying
            } else if wall == WallRule::Infinite {
                EndpointVerdict::Growing
            } else {
                EndpointVerdict::PowerDivergent
            };
            EndpointBehavior {
                label,
                class: t.class,
                rate: t.rate,
                oscillatory: osc_seen,
                verdict,
                soft: osc_seen,
                wall,
            }
        }
    }
}

fn overall_verdict(endpoints: &[EndpointBehavior]) -> Normalizability {
    for e in endpoints {
        let wall_ok = match e.wall {
            WallRule::Infinite => true,
            WallRule::RequireDecay => e.verdict == EndpointVerdict::Decaying,
            WallRule::SquareIntegrable => e.rate > -0.5,
        };
        if !wall_ok {
            return Normalizability::NonNormalizable;
        }
    }

    let infinite: Vec<&EndpointBehavior> = endpoints
        .iter()
        .filter(|e| e.wall == WallRule::Infinite)
        .collect();
    let all_decaying = endpoints
        .iter()
        .all(|e| e.verdict == EndpointVerdict::Decaying || e.wall != WallRule::Infinite)
        && infinite
            .iter()
            .all(|e| e.verdict == EndpointVerdict::Decaying);
    if all_decaying {
        return Normalizability::Normalizable;
    }

    let qnm_compatible = infinite.iter().all(|e| match e.verdict {
        EndpointVerdict::Decaying | EndpointVerdict::Bounded => true,
        EndpointVerdict::Growing => e.soft,
        EndpointVerdict::PowerDivergent => false,
    });
    if qnm_compatible {
        Normalizability::QnmOutgoing
    } else {
        Normalizability::NonNormalizable
    }
}
