//! Named, parameterized presets for every built-in family variant: the real
//! bound-state models, their complexified exactly solvable ladders, the
//! quasi-exact sectors (real and complex), and the negative results. Each
//! preset carries its parameter schema with ranges, the coefficient map, the
//! expected qualitative verdicts and, where one exists, the closed-form
//! energy ladder.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{Family, ModelSpec, PolyP, PolyQ, Solvability};
use crate::prepotential::Normalizability;
use crate::rng::SplitMix64;
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One schema parameter: name, default, human-readable constraint.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub constraint: &'static str,
}

/// A catalog entry.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Preset {
    pub id: &'static str,
    pub family: Family,
    pub citation: &'static str,
    pub params: &'static [ParamSpec],
    pub default_n: usize,
}

const fn p(name: &'static str, default: f64, constraint: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default,
        constraint,
    }
}

static PRESETS: &[Preset] = &[
    Preset {
        id: "scarf2-exact",
        family: Family::Scarf2,
        citation: "Scarf II hyperbolic potential, real parameters; fully solvable bound ladder",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("a1", 4.0, "a1 > 0"),
            p("a0", 0.5, "a0 real"),
        ],
        default_n: 3,
    },
    Preset {
        id: "scarf2-qnm",
        family: Family::Scarf2,
        citation: "Scarf II with imaginary parameter shift; exactly solvable complex-frequency ladder",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("c", 1.0, "c != 0"),
            p("d", 0.0, "d real"),
        ],
        default_n: 3,
    },
    Preset {
        id: "scarf2-qes-qnm",
        family: Family::Scarf2,
        citation: "Scarf II with imaginary A2 and asymmetric tilt; quasi-exact complex-frequency sector",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("c", 1.0, "c != 0"),
            p("a", 1.0, "a != 0"),
        ],
        default_n: 2,
    },
    Preset {
        id: "scarf2-singular",
        family: Family::Scarf2,
        citation: "inverted cosh-squared well with imaginary A2 = A0; quasi-exact sector with real energies",
        params: &[p("alpha", 1.0, "alpha > 0"), p("c", 1.0, "c != 0")],
        default_n: 3,
    },
    Preset {
        id: "scarf2-qes-real-none",
        family: Family::Scarf2,
        citation: "Scarf II with real A2; negative result: no admissible bound sector",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("a2", 1.0, "a2 != 0"),
            p("a1", 1.0, "a1 real"),
            p("a0", 0.0, "a0 real"),
        ],
        default_n: 2,
    },
    Preset {
        id: "morse-exact",
        family: Family::Morse,
        citation: "Morse potential, real parameters; bound ladder",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("a1", 4.0, "a1 > 0"),
            p("a0", -1.0, "a0 < 0"),
        ],
        default_n: 3,
    },
    Preset {
        id: "morse-qnm",
        family: Family::Morse,
        citation: "falling-exponential Morse variant with imaginary A0; exactly solvable complex-frequency ladder",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("c", 1.0, "c != 0"),
            p("d", 1.0, "d real"),
        ],
        default_n: 3,
    },
    Preset {
        id: "morse-qes-real",
        family: Family::Morse,
        citation: "Morse-type potential with real A2 > 0; quasi-exact bound sector",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("a2", 1.0, "a2 > 0"),
            p("a1", 2.0, "a1 real"),
            p("a0", -1.0, "a0 < 0"),
        ],
        default_n: 2,
    },
    Preset {
        id: "morse-qes-qnm",
        family: Family::Morse,
        citation: "Morse-type potential with imaginary A2; the first quasi-exact complex-frequency sector",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("b", 1.0, "b != 0"),
            p("d", 1.0, "d real"),
        ],
        default_n: 2,
    },
    Preset {
        id: "morse-qnm-mirror",
        family: Family::Morse,
        citation: "rising-exponential mirror of the falling Morse complex-frequency model",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("c", 1.0, "c != 0"),
            p("d", 0.0, "d real"),
        ],
        default_n: 2,
    },
    Preset {
        id: "genpt-exact",
        family: Family::GenPoschlTeller,
        citation: "generalized Poschl-Teller potential, real parameters; bound ladder",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("a1", 2.0, "a1 > 0"),
            p("a0", -3.0, "a1 + a0 < 0"),
        ],
        default_n: 1,
    },
    Preset {
        id: "genpt-qnm",
        family: Family::GenPoschlTeller,
        citation: "generalized Poschl-Teller with imaginary parameter shift; complex-frequency ladder",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("c", 1.0, "c != 0"),
            p("d", 0.0, "d real"),
        ],
        default_n: 3,
    },
    Preset {
        id: "genpt-qes-real",
        family: Family::GenPoschlTeller,
        citation: "generalized Poschl-Teller with real A2 > 0; quasi-exact bound sector",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("a2", 1.0, "a2 > 0"),
            p("a1", 1.0, "a1 real"),
            p("a0", -3.0, "a2 + a1 + a0 < 0"),
        ],
        default_n: 2,
    },
    Preset {
        id: "genpt-qes-qnm",
        family: Family::GenPoschlTeller,
        citation: "generalized Poschl-Teller with imaginary A2; quasi-exact complex-frequency sector",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("c", 1.0, "c != 0"),
            p("a", 2.0, "a > N + 1/2"),
        ],
        default_n: 1,
    },
    Preset {
        id: "shifted-osc",
        family: Family::ShiftedOsc,
        citation: "shifted harmonic oscillator; bound ladder (no quasi-exact sector exists for a2 != 0)",
        params: &[
            p("gamma", 4.0, "gamma > 0"),
            p("a2", 0.0, "a2 real"),
            p("a1", 1.0, "a1 > 0 when a2 = 0"),
            p("a0", 0.0, "a0 real"),
        ],
        default_n: 2,
    },
    Preset {
        id: "shifted-osc-qnm",
        family: Family::ShiftedOsc,
        citation: "inverted oscillator via imaginary A1; complex-frequency ladder",
        params: &[p("gamma", 4.0, "gamma > 0"), p("c", 1.0, "c != 0")],
        default_n: 3,
    },
    Preset {
        id: "radial-osc",
        family: Family::RadialOsc,
        citation: "radial oscillator; bound ladder",
        params: &[
            p("beta", 4.0, "beta > 0"),
            p("a1", 2.0, "a1 > 0"),
            p("a0", -2.0, "a0 <= 0"),
        ],
        default_n: 2,
    },
    Preset {
        id: "sextic-qes",
        family: Family::RadialOsc,
        citation: "sextic oscillator; the first quasi-exactly solvable potential",
        params: &[p("a", 1.0, "a > 0"), p("b", 1.0, "b real")],
        default_n: 2,
    },
    Preset {
        id: "radial-osc-qnm",
        family: Family::RadialOsc,
        citation: "inverted radial oscillator via imaginary A1; complex-frequency ladder",
        params: &[
            p("a", 1.0, "a != 0"),
            p("gamma-param", 1.0, "gamma-param > 0"),
        ],
        default_n: 3,
    },
    Preset {
        id: "scarf1",
        family: Family::Scarf1,
        citation: "trigonometric Scarf I on a finite interval; no complex-frequency modes, and no bound quasi-exact sector for a2 != 0",
        params: &[
            p("alpha", 1.0, "alpha > 0"),
            p("a2", 1.0, "a2 real"),
            p("a1", 0.5, "a1 <= |a2 + a0| when a2 != 0"),
            p("a0", 0.5, "a0 real"),
        ],
        default_n: 1,
    },
];

/// All presets, in catalog order.
pub fn list_presets() -> &'static [Preset] {
    PRESETS
}

/// Look a preset up by id.
pub fn find(id: &str) -> Result<&'static Preset> {
    PRESETS
        .iter()
        .find(|p| p.id == id)
        .ok_or_else(|| Error::UnknownPreset(id.to_string()))
}

/// User-supplied parameter overrides for a preset.
#[derive(Debug, Clone, Default)]
pub struct PresetParams {
    pub n: Option<usize>,
    values: BTreeMap<String, f64>,
}

impl PresetParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_n(n: usize) -> Self {
        Self {
            n: Some(n),
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, name: &str, value: f64) -> &mut Self {
        self.values.insert(name.to_string(), value);
        self
    }
}

/// A fully resolved preset instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: &'static str,
    pub spec: ModelSpec,
    pub n: usize,
    pub resolved: BTreeMap<&'static str, f64>,
}

impl Instance {
    pub fn value(&self, name: &str) -> f64 {
        self.resolved[name]
    }
}

/// Instantiate a preset: defaults merged with overrides, constraints
/// enforced (violations name the constraint), coefficient map applied.
pub fn instantiate(id: &str, params: &PresetParams) -> Result<ModelSpec> {
    Ok(instantiate_full(id, params)?.spec)
}

/// Instantiate, keeping the resolved parameter values alongside the spec.
pub fn instantiate_full(id: &str, params: &PresetParams) -> Result<Instance> {
    let preset = find(id)?;
    let mut resolved: BTreeMap<&'static str, f64> = BTreeMap::new();
    for spec in preset.params {
        resolved.insert(spec.name, spec.default);
    }
    for (name, value) in &params.values {
        let known = preset.params.iter().find(|p| p.name == name);
        match known {
            Some(ps) => {
                resolved.insert(ps.name, *value);
            }
            None => {
                return Err(Error::UnknownParam {
                    preset: id.to_string(),
                    name: name.clone(),
                })
            }
        }
    }
    let n = params.n.unwrap_or(preset.default_n);

    let fail = |name: &str, value: f64, constraint: &str| -> Error {
        Error::Constraint {
            preset: id.to_string(),
            name: name.to_string(),
            value,
            constraint: constraint.to_string(),
        }
    };
    let positive = |resolved: &BTreeMap<&str, f64>, name: &str| -> Result<f64> {
        let v = resolved[name];
        if v > 0.0 {
            Ok(v)
        } else {
            Err(fail(name, v, &format!("{name} > 0")))
        }
    };
    let nonzero = |resolved: &BTreeMap<&str, f64>, name: &str| -> Result<f64> {
        let v = resolved[name];
        if v != 0.0 {
            Ok(v)
        } else {
            Err(fail(name, v, &format!("{name} != 0")))
        }
    };
    let get = |resolved: &BTreeMap<&str, f64>, name: &str| resolved[name];

    let spec = match id {
        "scarf2-exact" => {
            let alpha = positive(&resolved, "alpha")?;
            let a1 = positive(&resolved, "a1")?;
            let a0 = get(&resolved, "a0");
            ModelSpec::new(
                Family::Scarf2,
                PolyP::real(0.0, a1, a0),
                PolyQ::real(alpha, 0.0, alpha),
                n,
            )
        }
        "scarf2-qnm" => {
            let alpha = positive(&resolved, "alpha")?;
            let cc = nonzero(&resolved, "c")?;
            let d = get(&resolved, "d");
            ModelSpec::new(
                Family::Scarf2,
                PolyP::new(c(0.0, 0.0), c(-alpha / 2.0, -cc / 2.0), c(0.0, -d / 2.0)),
                PolyQ::real(alpha, 0.0, alpha),
                n,
            )
        }
        "scarf2-qes-qnm" => {
            let alpha = positive(&resolved, "alpha")?;
            let cc = nonzero(&resolved, "c")?;
            let a = nonzero(&resolved, "a")?;
            ModelSpec::new(
                Family::Scarf2,
                PolyP::new(
                    c(0.0, cc),
                    c((n as f64 + 0.5) * alpha, 0.0),
                    c(a * alpha, cc),
                ),
                PolyQ::real(alpha, 0.0, alpha),
                n,
            )
        }
        "scarf2-singular" => {
            let alpha = positive(&resolved, "alpha")?;
            let cc = nonzero(&resolved, "c")?;
            ModelSpec::new(
                Family::Scarf2,
                PolyP::new(c(0.0, cc), c((n as f64 + 0.5) * alpha, 0.0), c(0.0, cc)),
                PolyQ::real(alpha, 0.0, alpha),
                n,
            )
        }
        "scarf2-qes-real-none" => {
            let alpha = positive(&resolved, "alpha")?;
            let a2 = nonzero(&resolved, "a2")?;
            ModelSpec::new(
                Family::Scarf2,
                PolyP::real(a2, get(&resolved, "a1"), get(&resolved, "a0")),
                PolyQ::real(alpha, 0.0, alpha),
                n,
            )
        }
        "morse-exact" => {
            let alpha = positive(&resolved, "alpha")?;
            let a1 = positive(&resolved, "a1")?;
            let a0 = get(&resolved, "a0");
            if a0 >= 0.0 {
                return Err(fail("a0", a0, "a0 < 0"));
            }
            ModelSpec::new(
                Family::Morse,
                PolyP::real(0.0, a1, a0),
                PolyQ::real(alpha, 0.0, 0.0),
                n,
            )
        }
        "morse-qnm" => {
            let alpha = positive(&resolved, "alpha")?;
            let cc = nonzero(&resolved, "c")?;
            let d = get(&resolved, "d");
            ModelSpec::new(
                Family::Morse,
                PolyP::new(
                    c(0.0, 0.0),
                    c(-alpha / 2.0, -alpha * d / 2.0),
                    c(0.0, cc),
                ),
                PolyQ::real(alpha, 0.0, 0.0),
                n,
            )
        }
        "morse-qes-real" => {
            let alpha = positive(&resolved, "alpha")?;
            let a2 = positive(&resolved, "a2")?;
            let a0 = get(&resolved, "a0");
            if a0 >= 0.0 {
                return Err(fail("a0", a0, "a0 < 0"));
            }
            ModelSpec::new(
                Family::Morse,
                PolyP::real(a2, get(&resolved, "a1"), a0),
                PolyQ::real(alpha, 0.0, 0.0),
                n,
            )
        }
        "morse-qes-qnm" => {
            let alpha = positive(&resolved, "alpha")?;
            let b = nonzero(&resolved, "b")?;
            let d = get(&resolved, "d");
            ModelSpec::new(
                Family::Morse,
                PolyP::new(
                    c(0.0, -b / 2.0),
                    c((n as f64 + 0.5) * alpha, 0.0),
                    c(-d / 2.0, 0.0),
                ),
                PolyQ::real(alpha, 0.0, 0.0),
                n,
            )
        }
        "morse-qnm-mirror" => {
            let alpha = positive(&resolved, "alpha")?;
            let cc = nonzero(&resolved, "c")?;
            let d = get(&resolved, "d");
            ModelSpec::new(
                Family::Morse,
                PolyP::new(
                    c(0.0, -cc),
                    c((n as f64 + 0.5) * alpha, alpha * d / 2.0),
                    c(0.0, 0.0),
                ),
                PolyQ::real(alpha, 0.0, 0.0),
                n,
            )
        }
        "genpt-exact" => {
            let alpha = positive(&resolved, "alpha")?;
            let a1 = positive(&resolved, "a1")?;
            let a0 = get(&resolved, "a0");
            if a1 + a0 >= 0.0 {
                return Err(fail("a0", a0, "a1 + a0 < 0"));
            }
            ModelSpec::new(
                Family::GenPoschlTeller,
                PolyP::real(0.0, a1, a0),
                PolyQ::real(alpha, 0.0, -alpha),
                n,
            )
        }
        "genpt-qnm" => {
            let alpha = positive(&resolved, "alpha")?;
            let cc = nonzero(&resolved, "c")?;
            let d = get(&resolved, "d");
            ModelSpec::new(
                Family::GenPoschlTeller,
                PolyP::new(c(0.0, 0.0), c(-alpha / 2.0, -cc / 2.0), c(0.0, -d / 2.0)),
                PolyQ::real(alpha, 0.0, -alpha),
                n,
            )
        }
        "genpt-qes-real" => {
            let alpha = positive(&resolved, "alpha")?;
            let a2 = positive(&resolved, "a2")?;
            let a1 = get(&resolved, "a1");
            let a0 = get(&resolved, "a0");
            if a2 + a1 + a0 >= 0.0 {
                return Err(fail("a0", a0, "a2 + a1 + a0 < 0"));
            }
            ModelSpec::new(
                Family::GenPoschlTeller,
                PolyP::real(a2, a1, a0),
                PolyQ::real(alpha, 0.0, -alpha),
                n,
            )
        }
        "genpt-qes-qnm" => {
            let alpha = positive(&resolved, "alpha")?;
            let cc = nonzero(&resolved, "c")?;
            let a = get(&resolved, "a");
            if a <= n as f64 + 0.5 {
                return Err(fail("a", a, "a > N + 1/2"));
            }
            ModelSpec::new(
                Family::GenPoschlTeller,
                PolyP::new(
                    c(0.0, cc),
                    c((n as f64 + 0.5) * alpha, 0.0),
                    c(-a * alpha, -cc),
                ),
                PolyQ::real(alpha, 0.0, -alpha),
                n,
            )
        }
        "shifted-osc" => {
            let gamma = positive(&resolved, "gamma")?;
            let a2 = get(&resolved, "a2");
            let a1 = get(&resolved, "a1");
            if a2 == 0.0 && a1 <= 0.0 {
                return Err(fail("a1", a1, "a1 > 0 when a2 = 0"));
            }
            ModelSpec::new(
                Family::ShiftedOsc,
                PolyP::real(a2, a1, get(&resolved, "a0")),
                PolyQ::real(0.0, 0.0, gamma),
                n,
            )
        }
        "shifted-osc-qnm" => {
            let gamma = positive(&resolved, "gamma")?;
            let cc = nonzero(&resolved, "c")?;
            ModelSpec::new(
                Family::ShiftedOsc,
                PolyP::new(c(0.0, 0.0), c(0.0, -cc / 2.0), c(0.0, 0.0)),
                PolyQ::real(0.0, 0.0, gamma),
                n,
            )
        }
        "radial-osc" => {
            let beta = positive(&resolved, "beta")?;
            let a1 = positive(&resolved, "a1")?;
            let a0 = get(&resolved, "a0");
            if a0 > 0.0 {
                return Err(fail("a0", a0, "a0 <= 0"));
            }
            ModelSpec::new(
                Family::RadialOsc,
                PolyP::real(0.0, a1, a0),
                PolyQ::real(0.0, beta, 0.0),
                n,
            )
        }
        "sextic-qes" => {
            let a = positive(&resolved, "a")?;
            let b = get(&resolved, "b");
            ModelSpec::new(
                Family::RadialOsc,
                PolyP::real(2.0 * a, 2.0 * b, 0.0),
                PolyQ::real(0.0, 4.0, 0.0),
                n,
            )
        }
        "radial-osc-qnm" => {
            let a = nonzero(&resolved, "a")?;
            let gp = positive(&resolved, "gamma-param")?;
            ModelSpec::new(
                Family::RadialOsc,
                PolyP::new(c(0.0, 0.0), c(0.0, -2.0 * a), c(-2.0 * gp, 0.0)),
                PolyQ::real(0.0, 4.0, 0.0),
                n,
            )
        }
        "scarf1" => {
            let alpha = positive(&resolved, "alpha")?;
            let a2 = get(&resolved, "a2");
            let a1 = get(&resolved, "a1");
            let a0 = get(&resolved, "a0");
            if a2 != 0.0 && a1 > (a2 + a0).abs() {
                return Err(fail("a1", a1, "a1 <= |a2 + a0| when a2 != 0"));
            }
            ModelSpec::new(
                Family::Scarf1,
                PolyP::real(a2, a1, a0),
                PolyQ::real(-alpha, 0.0, alpha),
                n,
            )
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };

    Ok(Instance {
        id: find(id)?.id,
        spec,
        n,
        resolved,
    })
}

/// Expected qualitative verdicts for an instance, derived from the
/// closed-form parameter relations of the family (independent of the
/// numerical pipeline).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedOutcome {
    pub solvability: Solvability,
    pub normalizability: Normalizability,
    /// Some(true): every level energy real; Some(false): at least one
    /// complex; None: not asserted.
    pub energies_real: Option<bool>,
}

pub fn expected_outcome(inst: &Instance) -> ExpectedOutcome {
    use Normalizability::*;
    use Solvability::*;
    let v = |name: &str| inst.value(name);
    let n = inst.n as f64;
    match inst.id {
        "scarf2-exact" | "morse-exact" => ExpectedOutcome {
            solvability: ExactlySolvable,
            normalizability: if n < v("a1") / v("alpha") {
                Normalizable
            } else {
                NonNormalizable
            },
            energies_real: Some(true),
        },
        "genpt-exact" => ExpectedOutcome {
            solvability: ExactlySolvable,
            normalizability: if n < v("a1") / v("alpha") {
                Normalizable
            } else {
                NonNormalizable
            },
            energies_real: Some(true),
        },
        "scarf2-qnm" | "genpt-qnm" => ExpectedOutcome {
            solvability: ExactlySolvable,
            normalizability: QnmOutgoing,
            energies_real: Some(false),
        },
        "morse-qnm" => ExpectedOutcome {
            solvability: ExactlySolvable,
            normalizability: if v("d") == 0.0 {
                NonNormalizable
            } else {
                QnmOutgoing
            },
            energies_real: Some(v("d") == 0.0),
        },
        "morse-qnm-mirror" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: if v("d") == 0.0 {
                NonNormalizable
            } else {
                QnmOutgoing
            },
            energies_real: Some(v("d") == 0.0),
        },
        "scarf2-qes-qnm" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: Normalizable,
            energies_real: None,
        },
        "scarf2-singular" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: Normalizable,
            energies_real: Some(true),
        },
        "scarf2-qes-real-none" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: NonNormalizable,
            energies_real: None,
        },
        "morse-qes-real" | "genpt-qes-real" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: Normalizable,
            energies_real: Some(true),
        },
        "morse-qes-qnm" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: if v("d") > 0.0 {
                Normalizable
            } else {
                NonNormalizable
            },
            energies_real: None,
        },
        "genpt-qes-qnm" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: Normalizable,
            energies_real: None,
        },
        "shifted-osc" => ExpectedOutcome {
            solvability: if v("a2") != 0.0 {
                QesType1
            } else {
                ExactlySolvable
            },
            normalizability: if v("a2") != 0.0 {
                NonNormalizable
            } else {
                Normalizable
            },
            energies_real: if v("a2") != 0.0 { None } else { Some(true) },
        },
        "shifted-osc-qnm" | "radial-osc-qnm" => ExpectedOutcome {
            solvability: ExactlySolvable,
            normalizability: QnmOutgoing,
            energies_real: Some(false),
        },
        "radial-osc" => ExpectedOutcome {
            solvability: ExactlySolvable,
            normalizability: Normalizable,
            energies_real: Some(true),
        },
        "sextic-qes" => ExpectedOutcome {
            solvability: QesType1,
            normalizability: Normalizable,
            energies_real: Some(true),
        },
        "scarf1" => {
            let (a2, a1, a0) = (v("a2"), v("a1"), v("a0"));
            let bound = a2 == 0.0 && a1 > a0.abs();
            ExpectedOutcome {
                solvability: if a2 == 0.0 { ExactlySolvable } else { QesType1 },
                normalizability: if bound { Normalizable } else { NonNormalizable },
                energies_real: if bound { Some(true) } else { None },
            }
        }
        _ => unreachable!("expected_outcome covers every preset id"),
    }
}

/// Closed-form energies `E_0..E_N` where the family has them; `None` for the
/// quasi-exact sectors whose energies come from the roots.
pub fn expected_energies(inst: &Instance) -> Option<Vec<Complex64>> {
    let v = |name: &str| inst.value(name);
    let n = inst.n;
    let ladder = |f: &dyn Fn(f64) -> Complex64| -> Vec<Complex64> {
        (0..=n).map(|k| f(k as f64)).collect()
    };
    match inst.id {
        "scarf2-exact" | "morse-exact" | "genpt-exact" => {
            let (alpha, a1) = (v("alpha"), v("a1"));
            Some(ladder(&|k| {
                c(2.0 * a1 * k - alpha * k * k - a1 * a1 / alpha, 0.0)
            }))
        }
        "scarf2-qnm" | "genpt-qnm" => {
            let (alpha, cc) = (v("alpha"), v("c"));
            Some(ladder(&|k| {
                c(
                    cc * cc / (4.0 * alpha) - (k + 0.5) * (k + 0.5) * alpha,
                    -cc * (k + 0.5),
                )
            }))
        }
        "morse-qnm" | "morse-qnm-mirror" => {
            let (alpha, d) = (v("alpha"), v("d"));
            Some(ladder(&|k| {
                c(
                    alpha * ((d * d - 1.0) / 4.0 - k * k - k),
                    -alpha * d * (k + 0.5),
                )
            }))
        }
        "shifted-osc-qnm" => {
            let cc = v("c");
            Some(ladder(&|k| c(0.0, -cc * (k + 0.5))))
        }
        "radial-osc-qnm" => {
            let (a, gp) = (v("a"), v("gamma-param"));
            Some(ladder(&|k| c(0.0, -a * (4.0 * k + 2.0 * gp + 1.0))))
        }
        "shifted-osc" if v("a2") == 0.0 => {
            let (gamma, a1, a0) = (v("gamma"), v("a1"), v("a0"));
            Some(ladder(&|k| {
                c(2.0 * a1 * (k + 0.5) - a0 * a0 / gamma, 0.0)
            }))
        }
        "radial-osc" => {
            let (beta, a1, a0) = (v("beta"), v("a1"), v("a0"));
            Some(ladder(&|k| {
                c(a1 * (2.0 * k + 0.5 - 2.0 * a0 / beta), 0.0)
            }))
        }
        "scarf1" if v("a2") == 0.0 => {
            let (alpha, a1) = (v("alpha"), v("a1"));
            Some(ladder(&|k| {
                c(2.0 * a1 * k + alpha * k * k + a1 * a1 / alpha, 0.0)
            }))
        }
        _ => None,
    }
}

/// Draw one in-range parameter set for property sweeps (deterministic
/// given the rng state). The bound-regime presets sample parameters that
/// keep every level inside the bound range.
pub fn sample_params(id: &str, rng: &mut SplitMix64, n: usize) -> PresetParams {
    let mut params = PresetParams::with_n(n);
    let sign = |rng: &mut SplitMix64| if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
    match id {
        "scarf2-exact" | "morse-exact" => {
            let alpha = rng.range(0.4, 2.0);
            params.set("alpha", alpha);
            params.set("a1", alpha * (n as f64 + rng.range(0.5, 2.5)));
            match id {
                "scarf2-exact" => params.set("a0", rng.range(-1.0, 1.0)),
                _ => params.set("a0", -rng.range(0.3, 2.0)),
            };
        }
        "genpt-exact" => {
            let alpha = rng.range(0.4, 2.0);
            let a1 = alpha * (n as f64 + rng.range(0.5, 2.5));
            params.set("alpha", alpha);
            params.set("a1", a1);
            params.set("a0", -a1 - rng.range(0.3, 2.0));
        }
        "scarf2-qnm" | "genpt-qnm" | "morse-qnm" => {
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("c", sign(rng) * rng.range(0.4, 2.0));
            params.set("d", rng.range(0.2, 1.8));
        }
        "scarf2-qes-qnm" => {
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("c", sign(rng) * rng.range(0.4, 2.0));
            params.set("a", sign(rng) * rng.range(0.4, 2.0));
        }
        "scarf2-singular" => {
            params.set("alpha", rng.range(0.3, 2.2));
            params.set("c", rng.range(0.3, 2.2));
        }
        "scarf2-qes-real-none" => {
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("a2", sign(rng) * rng.range(0.4, 1.6));
            params.set("a1", rng.range(-1.0, 1.5));
            params.set("a0", rng.range(-1.0, 1.0));
        }
        "morse-qes-real" => {
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("a2", rng.range(0.3, 1.5));
            params.set("a1", rng.range(-1.0, 2.0));
            params.set("a0", -rng.range(0.3, 2.0));
        }
        "morse-qes-qnm" => {
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("b", sign(rng) * rng.range(0.4, 1.6));
            params.set("d", rng.range(0.3, 1.8));
        }
        "morse-qnm-mirror" => {
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("c", sign(rng) * rng.range(0.4, 2.0));
            params.set("d", rng.range(0.0, 2.0));
        }
        "genpt-qes-real" => {
            let a2 = rng.range(0.3, 1.5);
            let a1 = rng.range(-1.0, 1.0);
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("a2", a2);
            params.set("a1", a1);
            params.set("a0", -(a2 + a1) - rng.range(0.3, 2.0));
        }
        "genpt-qes-qnm" => {
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("c", sign(rng) * rng.range(0.4, 2.0));
            params.set("a", n as f64 + 0.5 + rng.range(0.3, 2.0));
        }
        "shifted-osc" => {
            params.set("gamma", rng.range(0.5, 4.0));
            if rng.uniform() < 0.5 {
                params.set("a2", 0.0);
                params.set("a1", rng.range(0.4, 2.0));
            } else {
                params.set("a2", sign(rng) * rng.range(0.4, 1.5));
                params.set("a1", rng.range(-1.0, 2.0));
            }
            params.set("a0", rng.range(-1.0, 1.0));
        }
        "shifted-osc-qnm" => {
            params.set("gamma", rng.range(0.5, 4.0));
            params.set("c", sign(rng) * rng.range(0.4, 2.0));
        }
        "radial-osc" => {
            params.set("beta", rng.range(1.0, 5.0));
            params.set("a1", rng.range(0.4, 2.0));
            params.set("a0", -rng.range(0.0, 1.5));
        }
        "sextic-qes" => {
            params.set("a", rng.range(0.4, 1.6));
            params.set("b", rng.range(-1.0, 1.5));
        }
        "radial-osc-qnm" => {
            params.set("a", sign(rng) * rng.range(0.4, 1.8));
            params.set("gamma-param", rng.range(0.5, 2.5));
        }
        "scarf1" => {
            let a2 = sign(rng) * rng.range(0.5, 1.5);
            let a0 = a2.signum() * rng.range(0.0, 1.0);
            params.set("alpha", rng.range(0.4, 2.0));
            params.set("a2", a2);
            params.set("a0", a0);
            params.set("a1", rng.range(-0.9, 0.9) * (a2 + a0).abs());
        }
        _ => {}
    }
    params
}

/// A coefficient perturbation that must break validation: a 1e-3 imaginary
/// bump on A1 for real presets, a 1e-3 real bump for complexified ones
/// (breaking the balance that kept the potential real).
pub fn validation_perturbation(id: &str, spec: &ModelSpec) -> ModelSpec {
    let real_presets = [
        "scarf2-exact",
        "scarf2-qes-real-none",
        "morse-exact",
        "morse-qes-real",
        "genpt-exact",
        "genpt-qes-real",
        "shifted-osc",
        "radial-osc",
        "sextic-qes",
        "scarf1",
    ];
    let mut out = spec.clone();
    if real_presets.contains(&id) {
        out.p.a1 += c(0.0, 1e-3);
    } else {
        out.p.a1 += c(1e-3, 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_model;

    #[test]
    fn listing_contains_exactly_the_catalog_ids() {
        let ids: Vec<&str> = list_presets().iter().map(|p| p.id).collect();
        let expect = [
            "scarf2-exact",
            "scarf2-qnm",
            "scarf2-qes-qnm",
            "scarf2-singular",
            "scarf2-qes-real-none",
            "morse-exact",
            "morse-qnm",
            "morse-qes-real",
            "morse-qes-qnm",
            "morse-qnm-mirror",
            "genpt-exact",
            "genpt-qnm",
            "genpt-qes-real",
            "genpt-qes-qnm",
            "shifted-osc",
            "shifted-osc-qnm",
            "radial-osc",
            "sextic-qes",
            "radial-osc-qnm",
            "scarf1",
        ];
        assert_eq!(ids, expect);
    }

    #[test]
    fn scarf2_qnm_coefficient_map() {
        // alpha=1, c=2, d=0: A1 = -(ic + alpha)/2 = -0.5 - i.
        let mut params = PresetParams::with_n(1);
        params.set("alpha", 1.0).set("c", 2.0).set("d", 0.0);
        let spec = instantiate("scarf2-qnm", &params).unwrap();
        assert!((spec.p.a1 - c(-0.5, -1.0)).norm() < 1e-15);
        assert_eq!(spec.p.a0, c(0.0, 0.0));
        assert_eq!(spec.p.a2, c(0.0, 0.0));
    }

    #[test]
    fn sextic_coefficient_map() {
        let mut params = PresetParams::with_n(2);
        params.set("a", 1.0).set("b", 1.0);
        let spec = instantiate("sextic-qes", &params).unwrap();
        assert_eq!(spec.p.a2, c(2.0, 0.0));
        assert_eq!(spec.p.a1, c(2.0, 0.0));
        assert_eq!(spec.p.a0, c(0.0, 0.0));
        assert_eq!(spec.q.beta, c(4.0, 0.0));
    }

    #[test]
    fn genpt_qes_qnm_rejects_small_a() {
        let mut params = PresetParams::with_n(1);
        params.set("a", 1.0);
        match instantiate("genpt-qes-qnm", &params) {
            Err(Error::Constraint {
                name, constraint, ..
            }) => {
                assert_eq!(name, "a");
                assert!(constraint.contains("N + 1/2"));
            }
            other => panic!("expected constraint violation, got {other:?}"),
        }
        params.set("a", 1.6);
        assert!(instantiate("genpt-qes-qnm", &params).is_ok());
    }

    #[test]
    fn unknown_preset_and_parameter_are_rejected() {
        assert!(matches!(
            instantiate("nope", &PresetParams::new()),
            Err(Error::UnknownPreset(_))
        ));
        let mut params = PresetParams::new();
        params.set("zeta", 1.0);
        assert!(matches!(
            instantiate("scarf2-exact", &params),
            Err(Error::UnknownParam { .. })
        ));
    }

    #[test]
    fn every_preset_default_instance_validates() {
        for preset in list_presets() {
            let inst = instantiate_full(preset.id, &PresetParams::new()).unwrap();
            let report = validate_model(&inst.spec);
            assert!(
                report.is_valid(),
                "{}: {:?}",
                preset.id,
                report.diagnostics
            );
        }
    }

    #[test]
    fn perturbed_presets_fail_validation() {
        for preset in list_presets() {
            let inst = instantiate_full(preset.id, &PresetParams::new()).unwrap();
            let bad = validation_perturbation(preset.id, &inst.spec);
            let report = validate_model(&bad);
            assert!(
                !report.is_valid(),
                "{}: perturbation slipped through",
                preset.id
            );
        }
    }

    #[test]
    fn sampled_instances_validate() {
        let mut rng = SplitMix64::new(2024);
        for preset in list_presets() {
            for _ in 0..10 {
                let params = sample_params(preset.id, &mut rng, 2);
                let inst = instantiate_full(preset.id, &params).unwrap();
                let report = validate_model(&inst.spec);
                assert!(
                    report.is_valid(),
                    "{} with {:?}: {:?}",
                    preset.id,
                    inst.resolved,
                    report.diagnostics
                );
            }
        }
    }
}
