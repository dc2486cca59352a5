//! Potential assembly, complex energies, mode classification and
//! eigenfunction evaluators.
//!
//! Every level satisfies `H_N φ_N = 0` with `V_N(x) = V(x) − E`, so the
//! energy is minus the additive constant left once the x-dependent part of
//! `V_N` is written on the family's fixed shape-function basis (e.g.
//! `{cosh², sech², tanh·sech, sinh}` for the sinh family). With the gauged
//! level constant `Λ = 2A₁N − αN² + 2A₂Σz_k` this reduces to the single
//! relation `E = Λ − κ`, where `κ` is the basis constant of the root-free
//! part — the same `κ` for every level of a model.
//!
//! Mode labels use the `e^{−iEt}` time convention: `Im E < 0` decays,
//! `Im E > 0` grows. Eigenfunctions are never normalized; complex-energy
//! modes carry no finite norm.

use num_complex::Complex64;
use serde::Serialize;

use crate::bethe::{self, RootSet};
use crate::coords::{self, CanonicalCoordinate, CanonicalModel};
use crate::model::{self, ModelSpec, SolvabilityClass};
use crate::prepotential::{self, Normalizability, Prepotential};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Classification of one spectral level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeClass {
    BoundState,
    DecayingQnm,
    GrowingQnm,
    NonNormalizable,
}

impl ModeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeClass::BoundState => "bound-state",
            ModeClass::DecayingQnm => "decaying-qnm",
            ModeClass::GrowingQnm => "growing-qnm",
            ModeClass::NonNormalizable => "non-normalizable",
        }
    }
}

/// One named shape-function term of the assembled potential.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialTerm {
    pub name: &'static str,
    #[serde(with = "crate::model::complex_array")]
    pub coefficient: Complex64,
}

/// The potential split `V_N(x) = V(x) + C`: shape terms for the x-dependent
/// part (zero constant in the basis) plus the complex additive constant.
#[derive(Debug, Clone)]
pub struct PotentialAssembly {
    pub terms: Vec<PotentialTerm>,
    /// Additive constant `C = κ − Λ`; the level energy is `E = −C`.
    pub constant: Complex64,
    model: CanonicalModel,
}

impl PotentialAssembly {
    /// Real x-dependent potential (imaginary parts of validated
    /// coefficients are below tolerance and dropped here).
    pub fn v(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0;
        for term in &self.terms {
            acc += term.coefficient.re * shape_value(&self.model.form, term.name, x)?;
        }
        Ok(acc)
    }

    /// x-dependent part with complex coefficients kept (diagnostics).
    pub fn v_complex(&self, x: f64) -> Result<Complex64> {
        let mut acc = ZERO;
        for term in &self.terms {
            acc += term.coefficient * shape_value(&self.model.form, term.name, x)?;
        }
        Ok(acc)
    }

    /// Largest relative imaginary leakage over terms, with the offender.
    pub fn imaginary_leakage(&self) -> (f64, &'static str) {
        let mut worst = (0.0, "");
        for term in &self.terms {
            let rel = term.coefficient.im.abs() / (1.0 + term.coefficient.re.abs());
            if rel > worst.0 {
                worst = (rel, term.name);
            }
        }
        worst
    }
}

/// Basis constant κ of the root-free part of `V_N` on the family basis;
/// `E = Λ − κ` for every level.
pub fn kappa(model: &CanonicalModel) -> Complex64 {
    let (a2, a1, a0) = (model.p.a2, model.p.a1, model.p.a0);
    match model.form {
        CanonicalCoordinate::Constant { gamma } => a0 * a0 / gamma - a1,
        CanonicalCoordinate::Linear { beta } => a1 * a0 * (2.0 / beta) - a1 * 0.5,
        CanonicalCoordinate::Quadratic { alpha, delta } => {
            (a1 * a1 + a2 * a0 * 2.0 - a2 * a2 * (2.0 * delta as f64)) / alpha
        }
    }
}

/// Shape-term coefficients for the x-dependent part of `V_N` on the
/// family's fixed basis. Valid for any model whose Q reduces to that form.
pub fn shape_terms(model: &CanonicalModel) -> Vec<PotentialTerm> {
    let (a2, a1, a0) = (model.p.a2, model.p.a1, model.p.a0);
    let nf = model.level_count as f64;
    let term = |name: &'static str, coefficient: Complex64| PotentialTerm { name, coefficient };

    match model.form {
        CanonicalCoordinate::Constant { gamma } => {
            let s = gamma.sqrt();
            vec![
                term("x^4", a2 * a2 * gamma),
                term("x^3", a2 * a1 * (2.0 * s)),
                term("x^2", a1 * a1 + a2 * a0 * 2.0),
                term("x", (a1 * a0 / gamma - a2 * (nf + 1.0)) * (2.0 * s)),
            ]
        }
        CanonicalCoordinate::Linear { beta } => vec![
            term("x^6", a2 * a2 * (beta * beta / 64.0)),
            term("x^4", a2 * a1 * (beta / 8.0)),
            term(
                "x^2",
                (a1 * a1 + a2 * a0 * 2.0 - a2 * (0.5 * beta * (4.0 * nf + 3.0))) * 0.25,
            ),
            term("x^-2", a0 * (4.0 / beta) * (a0 / beta + 0.5)),
        ],
        CanonicalCoordinate::Quadratic { alpha, delta } if alpha > 0.0 => {
            let ratio = a1 * (2.0 / alpha);
            match delta {
                1 => vec![
                    term("cosh^2", a2 * a2 / alpha),
                    term(
                        "sech^2",
                        (a0 - a2) * (a0 - a2) / alpha - a1 * (a1 / alpha + 1.0),
                    ),
                    term("tanh*sech", (a0 - a2) * (ratio + 1.0)),
                    term("sinh", a2 * (ratio - (2.0 * nf + 1.0))),
                ],
                0 => vec![
                    term("exp+2", a2 * a2 / alpha),
                    term("exp+1", a2 * (ratio - (2.0 * nf + 1.0))),
                    term("exp-1", a0 * (ratio + 1.0)),
                    term("exp-2", a0 * a0 / alpha),
                ],
                _ => vec![
                    term("sinh^2", a2 * a2 / alpha),
                    term(
                        "cosech^2",
                        (a0 + a2) * (a0 + a2) / alpha + a1 * (a1 / alpha + 1.0),
                    ),
                    term("coth*cosech", (a0 + a2) * (ratio + 1.0)),
                    term("cosh", a2 * (ratio - (2.0 * nf + 1.0))),
                ],
            }
        }
        CanonicalCoordinate::Quadratic { alpha, .. } => {
            // alpha < 0: trigonometric family on the finite interval.
            let a = -alpha;
            let ratio = a1 * (2.0 / a);
            vec![
                term("cos^2", a2 * a2 / a),
                term("sec^2", (a0 + a2) * (a0 + a2) / a + a1 * (a1 / a - 1.0)),
                term("tan*sec", (a0 + a2) * (ratio - 1.0)),
                term("sin", -a2 * (ratio + (2.0 * nf + 1.0))),
            ]
        }
    }
}

fn shape_value(form: &CanonicalCoordinate, name: &str, x: f64) -> Result<f64> {
    let t = match *form {
        CanonicalCoordinate::Quadratic { alpha, .. } => alpha.abs().sqrt() * x,
        _ => x,
    };
    Ok(match name {
        "x^4" => x.powi(4),
        "x^3" => x.powi(3),
        "x^2" => x * x,
        "x" => x,
        "x^6" => x.powi(6),
        "x^-2" => 1.0 / (x * x),
        "cosh^2" => t.cosh() * t.cosh(),
        "sech^2" => {
            let c = t.cosh();
            1.0 / (c * c)
        }
        "tanh*sech" => t.tanh() / t.cosh(),
        "sinh" => t.sinh(),
        "exp+2" => (2.0 * t).exp(),
        "exp+1" => t.exp(),
        "exp-1" => (-t).exp(),
        "exp-2" => (-2.0 * t).exp(),
        "sinh^2" => t.sinh() * t.sinh(),
        "cosh" => t.cosh(),
        "cosech^2" => {
            let s = t.sinh();
            1.0 / (s * s)
        }
        "coth*cosech" => t.cosh() / (t.sinh() * t.sinh()),
        "cos^2" => t.cos() * t.cos(),
        "sec^2" => {
            let c = t.cos();
            1.0 / (c * c)
        }
        "tan*sec" => t.sin() / (t.cos() * t.cos()),
        "sin" => t.sin(),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown shape term `{other}`"
            )))
        }
    })
}

/// Root-free x-dependent part of `V_N`: `Ṽ(x) = V₀(z) − 2A₂Nz − κ`,
/// evaluated from the rational form of `V₀ = W₀'² − W₀''`. This is the
/// potential whose eigenvalues the energies are.
#[derive(Debug, Clone)]
pub struct RootFreePotential {
    model: CanonicalModel,
    kappa: Complex64,
}

impl RootFreePotential {
    pub fn eval_complex(&self, x: f64) -> Result<Complex64> {
        let m = &self.model;
        let z = Complex64::new(m.z_of_x(x)?, 0.0);
        let (alpha, beta, _) = m.form.q_coefficients();
        let p = m.p.eval(z);
        let dp = m.p.a2 * 2.0 * z + m.p.a1;
        let q = m.q_poly().eval(z);
        let dq = Complex64::new(2.0 * alpha, 0.0) * z + Complex64::new(beta, 0.0);
        let v0 = (p * p - q * dp + p * dq * 0.5) / q;
        Ok(v0 - m.p.a2 * (2.0 * m.level_count as f64) * z - self.kappa)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_complex(x)?.re)
    }
}

pub fn root_free_potential(model: &CanonicalModel) -> RootFreePotential {
    RootFreePotential {
        model: model.clone(),
        kappa: kappa(model),
    }
}

/// Assemble `V_N` for one level: shape terms, the complex constant
/// `C = κ − Λ`, and a reality check of the x-dependent part on 64 interior
/// points. Imaginary leakage beyond tolerance is reported as an error
/// naming the offending term.
pub fn assemble_potential(spec: &ModelSpec, level: &RootSet) -> Result<PotentialAssembly> {
    let model = coords::canonicalize(spec)?;
    let terms = shape_terms(&model);
    let constant = kappa(&model) - level.lambda;
    let assembly = PotentialAssembly {
        terms,
        constant,
        model,
    };

    let (leak, offender) = assembly.imaginary_leakage();
    if leak > model::REALITY_TOL {
        return Err(Error::InvalidInput(format!(
            "imaginary coefficient leakage {leak:.3e} in term `{offender}`"
        )));
    }
    for &x in &coords::sample_xs(&assembly.model.form, 64) {
        let v = assembly.v_complex(x)?;
        if v.im.abs() > model::REALITY_TOL * (1.0 + v.re.abs()) {
            return Err(Error::InvalidInput(format!(
                "imaginary potential leakage {:.3e} at x = {x:.6}",
                v.im
            )));
        }
    }
    Ok(assembly)
}

/// Level energy `E = Λ − κ`; equals `−C` of the assembled potential and the
/// closed per-family brackets.
pub fn level_energy(spec: &ModelSpec, level: &RootSet) -> Result<Complex64> {
    let model = coords::canonicalize(spec)?;
    Ok(level.lambda - kappa(&model))
}

/// One rung of a closed-form exact ladder.
#[derive(Debug, Clone, Serialize)]
pub struct ExactLevel {
    pub n: usize,
    #[serde(with = "crate::model::complex_array")]
    pub energy: Complex64,
    /// The parabola in n has turned over: past the physical bound range.
    pub beyond_turnover: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactSpectrum {
    pub levels: Vec<ExactLevel>,
    /// Present when another coordinate family shares this ladder.
    pub coincidence_note: Option<&'static str>,
}

/// Closed-form ladder `E_n = 2A₁n − αn² − κ` for exactly solvable models
/// (`A₂ = 0`). Rungs past the parabola's turnover are flagged, not dropped.
pub fn exact_spectrum(spec: &ModelSpec, n_max: usize) -> Result<ExactSpectrum> {
    let model = coords::canonicalize(spec)?;
    if model.p.a2.norm() != 0.0 {
        return Err(Error::NotExactlySolvable);
    }
    let (alpha, _, _) = model.form.q_coefficients();
    let k = kappa(&model);
    let real_params = model.p.a1.im == 0.0 && model.p.a0.im == 0.0;
    let levels = (0..=n_max)
        .map(|n| {
            let nf = n as f64;
            let lambda = model.p.a1 * (2.0 * nf) - Complex64::new(alpha * nf * nf, 0.0);
            ExactLevel {
                n,
                energy: lambda - k,
                beyond_turnover: alpha > 0.0 && real_params && nf > model.p.a1.re / alpha,
            }
        })
        .collect();
    let coincidence_note = match model.form {
        CanonicalCoordinate::Quadratic { alpha, delta } if alpha > 0.0 && delta != 0 => Some(
            "the sinh (Scarf II) and cosh (generalized Poschl-Teller) coordinate families \
             share this ladder; their potentials differ",
        ),
        _ => None,
    };
    Ok(ExactSpectrum {
        levels,
        coincidence_note,
    })
}

/// Eigenfunction evaluator `φ(x) = e^{−W₀(x)} · Π_k (z(x) − z_k)`.
/// No normalization is applied.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pre: Prepotential,
    roots: Vec<Complex64>,
}

impl Eigenfunction {
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        let z = Complex64::new(self.pre.model().z_of_x(x)?, 0.0);
        let mut acc = self.pre.phi0(x)?;
        for r in &self.roots {
            acc *= z - r;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Natural log of |φ| estimated without overflow.
    pub fn ln_abs(&self, x: f64) -> Result<f64> {
        let z = self.pre.model().z_of_x(x)?;
        let w0 = self.pre.w0(x)?;
        let mut acc = -w0.re;
        for r in &self.roots {
            acc += (Complex64::new(z, 0.0) - r).norm().max(1e-300).ln();
        }
        Ok(acc)
    }
}

pub fn eigenfunction(spec: &ModelSpec, level: &RootSet) -> Result<Eigenfunction> {
    let model = coords::canonicalize(spec)?;
    Ok(Eigenfunction {
        pre: Prepotential::from_canonical(model),
        roots: level.roots.clone(),
    })
}

/// Mode class of a level: bound states must be normalizable with real
/// energy; otherwise the sign of `Im E` under `e^{−iEt}` decides.
pub fn classify_mode(spec: &ModelSpec, level: &RootSet) -> Result<ModeClass> {
    let e = level_energy(spec, level)?;
    let tol = 1e-9 * (1.0 + e.re.abs());
    if e.im.abs() <= tol {
        let ea = prepotential::endpoint_analysis(spec, level.degree())?;
        if ea.overall == Normalizability::Normalizable {
            Ok(ModeClass::BoundState)
        } else {
            Ok(ModeClass::NonNormalizable)
        }
    } else if e.im < 0.0 {
        Ok(ModeClass::DecayingQnm)
    } else {
        Ok(ModeClass::GrowingQnm)
    }
}

/// One fully solved level.
#[derive(Debug, Clone)]
pub struct SpectralLevel {
    /// Position in the deterministic (Re Λ, Im Λ) ordering.
    pub index: usize,
    pub energy: Complex64,
    pub mode_class: ModeClass,
    pub root_set: RootSet,
}

impl SpectralLevel {
    pub fn degree(&self) -> usize {
        self.root_set.degree()
    }
}

/// Full solution of one model: classification, levels, shared shape terms.
#[derive(Debug, Clone)]
pub struct SpectrumSolution {
    pub class: SolvabilityClass,
    pub levels: Vec<SpectralLevel>,
    pub terms: Vec<PotentialTerm>,
    pub kappa: Complex64,
    pub normalizability: Normalizability,
}

/// Solve a model end to end: gauged eigenproblem, energies, mode classes
/// and potential terms. Deterministic ordering throughout.
pub fn solve_spectrum(spec: &ModelSpec) -> Result<SpectrumSolution> {
    let class = model::classify_solvability(&spec.p, &spec.q);
    if class.class == model::Solvability::HigherType {
        return Err(Error::Unsupported {
            m: class.m,
            n: class.n,
        });
    }
    let model = coords::canonicalize(spec)?;
    let level_sets = bethe::qes_levels(spec)?;
    let k = kappa(&model);
    let mut levels = Vec::with_capacity(level_sets.len());
    for (index, root_set) in level_sets.into_iter().enumerate() {
        let energy = root_set.lambda - k;
        let mode_class = classify_mode(spec, &root_set)?;
        levels.push(SpectralLevel {
            index,
            energy,
            mode_class,
            root_set,
        });
    }
    let terms = shape_terms(&model);
    let normalizability =
        prepotential::endpoint_analysis_canonical(&model, model.level_count).overall;
    Ok(SpectrumSolution {
        class,
        levels,
        terms,
        kappa: k,
        normalizability,
    })
}
