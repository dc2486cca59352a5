//! Defining polynomial data, the solvability classifier and model validation.
//!
//! A model is the pair `P(z) = A₂z² + A₁z + A₀`, `Q(z) = αz² + βz + γ`
//! together with a level count `N` and a family tag. Coefficients are exact
//! complex doubles supplied by the user; degree tests compare against zero
//! exactly by default, so "A₂ = 0" is a modeling statement rather than a
//! numerical accident.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coords;
use crate::{Error, Result};

/// serde adapter: one complex number as a two-element `[re, im]` array.
pub mod complex_array {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let [re, im]: [f64; 2] = Deserialize::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// The prepotential-driving quadratic `P(z) = A₂z² + A₁z + A₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyP {
    pub a2: Complex64,
    pub a1: Complex64,
    pub a0: Complex64,
}

impl PolyP {
    pub fn new(a2: Complex64, a1: Complex64, a0: Complex64) -> Self {
        Self { a2, a1, a0 }
    }

    pub fn real(a2: f64, a1: f64, a0: f64) -> Self {
        Self::new(
            Complex64::new(a2, 0.0),
            Complex64::new(a1, 0.0),
            Complex64::new(a0, 0.0),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a2 * z + self.a1) * z + self.a0
    }

    /// Degree under an exact zero test.
    pub fn degree(&self) -> usize {
        self.degree_with_tolerance(0.0)
    }

    /// Degree with `|coefficient| <= tol` treated as zero.
    pub fn degree_with_tolerance(&self, tol: f64) -> usize {
        if self.a2.norm() > tol {
            2
        } else if self.a1.norm() > tol {
            1
        } else {
            0
        }
    }
}

/// The coordinate-defining quadratic `Q(z) = αz² + βz + γ` with `z'² = Q(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyQ {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl PolyQ {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(
            Complex64::new(alpha, 0.0),
            Complex64::new(beta, 0.0),
            Complex64::new(gamma, 0.0),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.alpha * z + self.beta) * z + self.gamma
    }

    pub fn degree(&self) -> usize {
        self.degree_with_tolerance(0.0)
    }

    pub fn degree_with_tolerance(&self, tol: f64) -> usize {
        if self.alpha.norm() > tol {
            2
        } else if self.beta.norm() > tol {
            1
        } else {
            0
        }
    }

    /// Largest imaginary part over the three coefficients.
    pub fn imag_magnitude(&self) -> f64 {
        self.alpha
            .im
            .abs()
            .max(self.beta.im.abs())
            .max(self.gamma.im.abs())
    }
}

/// Model family tag. `Custom` marks raw user-supplied polynomials; the named
/// tags additionally enable the closed-form parameter checks of that family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Scarf2,
    Morse,
    GenPoschlTeller,
    ShiftedOsc,
    RadialOsc,
    Scarf1,
    Custom,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Scarf2 => "scarf2",
            Family::Morse => "morse",
            Family::GenPoschlTeller => "gen-poschl-teller",
            Family::ShiftedOsc => "shifted-osc",
            Family::RadialOsc => "radial-osc",
            Family::Scarf1 => "scarf1",
            Family::Custom => "custom",
        }
    }
}

/// The complete definition of a quantum system: the two quadratics, the
/// level count N and the family tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SpecDoc", from = "SpecDoc")]
pub struct ModelSpec {
    pub p: PolyP,
    pub q: PolyQ,
    pub level_count: usize,
    pub family: Family,
}

impl ModelSpec {
    pub fn new(family: Family, p: PolyP, q: PolyQ, level_count: usize) -> Self {
        Self {
            p,
            q,
            level_count,
            family,
        }
    }
}

/// Flat JSON document for `ModelSpec`: keys `family`, `A2`, `A1`, `A0`,
/// `alpha`, `beta`, `gamma`, `N`; complex numbers as `[re, im]` arrays.
#[derive(Serialize, Deserialize, Clone)]
struct SpecDoc {
    family: Family,
    #[serde(rename = "A2", with = "complex_array")]
    a2: Complex64,
    #[serde(rename = "A1", with = "complex_array")]
    a1: Complex64,
    #[serde(rename = "A0", with = "complex_array")]
    a0: Complex64,
    #[serde(with = "complex_array")]
    alpha: Complex64,
    #[serde(with = "complex_array")]
    beta: Complex64,
    #[serde(with = "complex_array")]
    gamma: Complex64,
    #[serde(rename = "N")]
    n: usize,
}

impl From<ModelSpec> for SpecDoc {
    fn from(s: ModelSpec) -> Self {
        SpecDoc {
            family: s.family,
            a2: s.p.a2,
            a1: s.p.a1,
            a0: s.p.a0,
            alpha: s.q.alpha,
            beta: s.q.beta,
            gamma: s.q.gamma,
            n: s.level_count,
        }
    }
}

impl From<SpecDoc> for ModelSpec {
    fn from(d: SpecDoc) -> Self {
        ModelSpec {
            p: PolyP::new(d.a2, d.a1, d.a0),
            q: PolyQ::new(d.alpha, d.beta, d.gamma),
            level_count: d.n,
            family: d.family,
        }
    }
}

/// Solvability kinds keyed on the degree pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solvability {
    ExactlySolvable,
    QesType1,
    HigherType,
}

/// Classification result: the kind plus the degree pair (m, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolvabilityClass {
    pub class: Solvability,
    pub m: usize,
    pub n: usize,
}

/// Pure classification rule on the degrees of P (m) and Q (n):
/// `max{m, n-1} <= 1` is exactly solvable, `= 2` is type-1 QES and
/// `>= 3` is a higher type that this engine reports but never generates.
pub fn classify_degrees(m: usize, n: usize) -> SolvabilityClass {
    let t = m.max(n.saturating_sub(1));
    let class = if t <= 1 {
        Solvability::ExactlySolvable
    } else if t == 2 {
        Solvability::QesType1
    } else {
        Solvability::HigherType
    };
    SolvabilityClass { class, m, n }
}

/// Classify a model from its polynomials with exact coefficient-zero tests.
pub fn classify_solvability(p: &PolyP, q: &PolyQ) -> SolvabilityClass {
    classify_with_tolerance(p, q, 0.0)
}

/// Classify with `|coefficient| <= tol` treated as zero.
pub fn classify_with_tolerance(p: &PolyP, q: &PolyQ, tol: f64) -> SolvabilityClass {
    classify_degrees(p.degree_with_tolerance(tol), q.degree_with_tolerance(tol))
}

/// One structured validation finding.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub check: String,
    pub detail: String,
    pub magnitude: f64,
}

/// Validation output: empty diagnostics means the model is accepted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
    pub sampled_points: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }

    fn push(&mut self, check: &str, detail: String, magnitude: f64) {
        self.diagnostics.push(Diagnostic {
            check: check.to_string(),
            detail,
            magnitude,
        });
    }
}

/// Relative imaginary-part tolerance for the potential reality checks.
pub const REALITY_TOL: f64 = 1e-9;

/// Validate a model: canonical-form structure, numerical reality of the
/// x-dependent part of the potential on 64 interior sample points, and the
/// closed-form coefficient constraints of the named families. Violations are
/// reported as diagnostics; this function never fails outright.
pub fn validate_model(spec: &ModelSpec) -> ValidationReport {
    let mut report = ValidationReport::default();

    let canon = match coords::canonicalize(spec) {
        Ok(c) => c,
        Err(e) => {
            report.push("canonical-form", e.to_string(), f64::NAN);
            return report;
        }
    };

    if let Some(expected) = family_form(spec.family) {
        if !form_matches(&canon.form, expected) {
            report.push(
                "family-form",
                format!(
                    "family `{}` expects the {} coordinate form, got {:?}",
                    spec.family.as_str(),
                    expected,
                    canon.form
                ),
                f64::NAN,
            );
            return report;
        }
    }

    // Reality of the x-dependent part of V_N (the additive constant may be
    // complex; it carries the mode frequency).
    let v = crate::spectrum::root_free_potential(&canon);
    let xs = coords::sample_xs(&canon.form, 64);
    report.sampled_points = xs.len();
    let mut worst = 0.0f64;
    let mut worst_x = f64::NAN;
    for &x in &xs {
        if let Ok(val) = v.eval_complex(x) {
            let rel = val.im.abs() / (1.0 + val.re.abs());
            if rel > worst {
                worst = rel;
                worst_x = x;
            }
        }
    }
    if worst > REALITY_TOL {
        report.push(
            "reality",
            format!(
                "Im V(x) / (1 + |Re V(x)|) = {worst:.3e} at x = {worst_x:.6} exceeds {REALITY_TOL:.0e}"
            ),
            worst,
        );
    }

    // Per-term reality of the family shape decomposition.
    let terms = crate::spectrum::shape_terms(&canon);
    for term in &terms {
        let rel = term.coefficient.im.abs() / (1.0 + term.coefficient.re.abs());
        if rel > REALITY_TOL {
            report.push(
                "term-reality",
                format!(
                    "coefficient of `{}` has imaginary part {:.3e}",
                    term.name, term.coefficient.im
                ),
                rel,
            );
        }
    }

    // Named-family balance condition: with A2 purely imaginary and nonzero
    // in a hyperbolic form, the linear z-term stays real only when
    // 2A1/alpha - 2N - 1 vanishes.
    if matches!(
        canon.form,
        coords::CanonicalCoordinate::Quadratic { delta: 1 | -1, .. }
    ) && spec.family != Family::Custom
    {
        let a2 = canon.p.a2;
        if a2.norm() > 0.0 && a2.re.abs() <= REALITY_TOL * a2.norm() {
            let alpha = match canon.form {
                coords::CanonicalCoordinate::Quadratic { alpha, .. } => alpha,
                _ => unreachable!(),
            };
            let w = canon.p.a1 * (2.0 / alpha)
                - Complex64::new(2.0 * canon.level_count as f64 + 1.0, 0.0);
            if w.norm() > 1e-9 * (1.0 + canon.p.a1.norm() / alpha.abs()) {
                report.push(
                    "qes-balance",
                    format!(
                        "imaginary A2 requires 2A1/alpha - 2N - 1 = 0, got {:.3e}{:+.3e}i",
                        w.re, w.im
                    ),
                    w.norm(),
                );
            }
        }
    }

    report
}

fn family_form(family: Family) -> Option<&'static str> {
    match family {
        Family::Scarf2 => Some("quadratic delta=+1 (alpha>0)"),
        Family::Morse => Some("quadratic delta=0 (alpha>0)"),
        Family::GenPoschlTeller => Some("quadratic delta=-1 (alpha>0)"),
        Family::ShiftedOsc => Some("constant (gamma>0)"),
        Family::RadialOsc => Some("linear (beta>0)"),
        Family::Scarf1 => Some("quadratic delta=-1 (alpha<0)"),
        Family::Custom => None,
    }
}

fn form_matches(form: &coords::CanonicalCoordinate, expected: &str) -> bool {
    use coords::CanonicalCoordinate as C;
    match (form, expected) {
        (C::Constant { .. }, "constant (gamma>0)") => true,
        (C::Linear { .. }, "linear (beta>0)") => true,
        (C::Quadratic { alpha, delta: 1 }, "quadratic delta=+1 (alpha>0)") => *alpha > 0.0,
        (C::Quadratic { alpha, delta: 0 }, "quadratic delta=0 (alpha>0)") => *alpha > 0.0,
        (C::Quadratic { alpha, delta: -1 }, "quadratic delta=-1 (alpha>0)") => *alpha > 0.0,
        (C::Quadratic { alpha, delta: -1 }, "quadratic delta=-1 (alpha<0)") => *alpha < 0.0,
        _ => false,
    }
}

/// Outcome of parsing a spec document: either a generatable model or a
/// higher-type classification report for polynomials beyond degree two.
#[derive(Debug, Clone)]
pub enum ParsedSpec {
    Model(ModelSpec),
    Higher(SolvabilityClass),
}

/// Parse a JSON spec document. Accepts the flat form produced by
/// `ModelSpec` serialization, a `{"spec": {...}}` wrapper (so a `solve`
/// output file can be fed back in), and an extended form with ascending
/// coefficient arrays `"P"` and `"Q"` whose degree may exceed two — those
/// are classified and reported as higher type, never generated.
pub fn parse_spec_document(text: &str) -> Result<ParsedSpec> {
    #[derive(Deserialize)]
    struct Extended {
        #[serde(rename = "P")]
        p: Vec<[f64; 2]>,
        #[serde(rename = "Q")]
        q: Vec<[f64; 2]>,
    }
    #[derive(Deserialize)]
    struct Wrapper {
        spec: ModelSpec,
    }

    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("spec document is not valid JSON: {e}")))?;

    if value.get("P").is_some() || value.get("Q").is_some() {
        let ext: Extended = serde_json::from_value(value)
            .map_err(|e| Error::InvalidInput(format!("bad extended spec: {e}")))?;
        let deg = |cs: &[[f64; 2]]| {
            cs.iter()
                .rposition(|c| c[0] != 0.0 || c[1] != 0.0)
                .unwrap_or(0)
        };
        let (m, n) = (deg(&ext.p), deg(&ext.q));
        let class = classify_degrees(m, n);
        if class.class == Solvability::HigherType {
            return Ok(ParsedSpec::Higher(class));
        }
        let at = |cs: &[[f64; 2]], i: usize| {
            cs.get(i)
                .map(|c| Complex64::new(c[0], c[1]))
                .unwrap_or_default()
        };
        return Ok(ParsedSpec::Model(ModelSpec::new(
            Family::Custom,
            PolyP::new(at(&ext.p, 2), at(&ext.p, 1), at(&ext.p, 0)),
            PolyQ::new(at(&ext.q, 2), at(&ext.q, 1), at(&ext.q, 0)),
            0,
        )));
    }

    if value.get("spec").is_some() {
        let w: Wrapper = serde_json::from_value(value)
            .map_err(|e| Error::InvalidInput(format!("bad wrapped spec: {e}")))?;
        return Ok(ParsedSpec::Model(w.spec));
    }

    let spec: ModelSpec = serde_json::from_value(value)
        .map_err(|e| Error::InvalidInput(format!("bad spec document: {e}")))?;
    Ok(ParsedSpec::Model(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exactly_solvable_when_a2_vanishes() {
        let class = classify_solvability(
            &PolyP::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
            &PolyQ::real(1.0, 0.0, 1.0),
        );
        assert_eq!(class.class, Solvability::ExactlySolvable);
        assert_eq!((class.m, class.n), (1, 2));
    }

    #[test]
    fn type1_when_a2_nonzero() {
        let class = classify_solvability(
            &PolyP::new(c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)),
            &PolyQ::real(1.0, 0.0, 1.0),
        );
        assert_eq!(class.class, Solvability::QesType1);
        assert_eq!((class.m, class.n), (2, 2));
    }

    #[test]
    fn degree_three_is_higher_type() {
        let class = classify_degrees(3, 2);
        assert_eq!(class.class, Solvability::HigherType);
    }

    #[test]
    fn exact_zero_test_by_default() {
        // A tiny but nonzero A2 still counts as degree 2 under the default.
        let p = PolyP::new(c(1e-300, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!(p.degree(), 2);
        assert_eq!(p.degree_with_tolerance(1e-200), 1);
    }

    #[test]
    fn exact_classification_for_random_real_and_complex_coefficients() {
        let mut rng = crate::rng::SplitMix64::new(17);
        for _ in 0..200 {
            let p = PolyP::new(
                c(0.0, 0.0),
                c(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0)),
                c(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0)),
            );
            let q = PolyQ::real(rng.range(0.1, 3.0), 0.0, rng.range(0.1, 3.0));
            assert_eq!(
                classify_solvability(&p, &q).class,
                Solvability::ExactlySolvable
            );
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ModelSpec::new(
            Family::Scarf2,
            PolyP::new(c(0.0, 1.0), c(1.5, 0.0), c(0.25, 1.0)),
            PolyQ::real(1.0, 0.0, 1.0),
            3,
        );
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"A2\":[0.0,1.0]"));
        assert!(text.contains("\"family\":\"scarf2\""));
        let back: ModelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn wrapped_and_extended_documents_parse() {
        let spec = ModelSpec::new(Family::Morse, PolyP::real(0.0, 1.0, -0.5), PolyQ::real(1.0, 0.0, 0.0), 2);
        let wrapped = format!("{{\"spec\": {}}}", serde_json::to_string(&spec).unwrap());
        match parse_spec_document(&wrapped).unwrap() {
            ParsedSpec::Model(m) => assert_eq!(m, spec),
            _ => panic!("expected model"),
        }

        let higher = r#"{"P": [[0,0],[1,0],[0,0],[2,0]], "Q": [[1,0],[0,0],[1,0]]}"#;
        match parse_spec_document(higher).unwrap() {
            ParsedSpec::Higher(class) => {
                assert_eq!(class.class, Solvability::HigherType);
                assert_eq!(class.m, 3);
            }
            _ => panic!("expected higher type"),
        }
    }

    #[test]
    fn validation_accepts_real_n0_model() {
        let spec = ModelSpec::new(
            Family::Scarf2,
            PolyP::real(0.0, 1.0, 0.5),
            PolyQ::real(1.0, 0.0, 1.0),
            0,
        );
        let report = validate_model(&spec);
        assert!(report.is_valid(), "{:?}", report.diagnostics);
    }

    #[test]
    fn validation_rejects_imaginary_balance_with_nonzero_d() {
        // A2 = ic with 2A1/alpha - 2N - 1 = id, d != 0: the linear term
        // stays real but the mixed terms cannot, whatever A0 does.
        let (n, cc, d) = (1usize, 1.0, 0.5);
        let a1 = 0.5 * (2.0 * n as f64 + 1.0);
        for a0 in [c(0.7, 0.0), c(0.0, cc), c(4.0 - 2.0 * d, cc)] {
            let spec = ModelSpec::new(
                Family::Scarf2,
                PolyP::new(c(0.0, cc), c(a1, 0.5 * d), a0),
                PolyQ::real(1.0, 0.0, 1.0),
                n,
            );
            let report = validate_model(&spec);
            assert!(!report.is_valid(), "A0 = {a0} should not validate");
        }
    }

    #[test]
    fn validation_rejects_unbalanced_imaginary_a2() {
        // A2 = i с, 2A1/alpha - 2N - 1 = 0.002 real and nonzero: the linear
        // sinh term picks up an imaginary coefficient.
        let n = 1usize;
        let a1 = 0.5 * (2.0 * n as f64 + 1.0 + 2e-3);
        let spec = ModelSpec::new(
            Family::Scarf2,
            PolyP::new(c(0.0, 1.0), c(a1, 0.0), c(1.0, 1.0)),
            PolyQ::real(1.0, 0.0, 1.0),
            n,
        );
        let report = validate_model(&spec);
        assert!(!report.is_valid());
        assert!(report.diagnostics.iter().any(|d| d.check == "qes-balance"));
    }
}
