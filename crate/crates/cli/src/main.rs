//! `qnm` — command-line front end for the spectral engine.
//!
//! Subcommands: `catalog`, `solve`, `potential`, `verify`, `spectrum`.
//! Output is machine-readable (JSON, CSV with 17 significant digits) and
//! byte-stable for identical configuration. Exit codes: 0 success,
//! 2 invalid input, 3 verification failure, 4 unsupported (higher-type
//! polynomial degrees).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use qnm_core::catalog::{self, Instance, PresetParams};
use qnm_core::model::{parse_spec_document, ModelSpec, ParsedSpec, SolvabilityClass};
use qnm_core::prepotential::Normalizability;
use qnm_core::spectrum::{self, SpectrumSolution};
use qnm_core::verify::{self, Grid, VerifyOptions};
use qnm_core::{bethe, Error};

#[derive(Parser)]
#[command(
    name = "qnm",
    version,
    about = "Bound states and quasinormal ladders of solvable 1-D Schrodinger families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the preset catalog (id, citation, parameter schema) as JSON.
    Catalog,
    /// Solve a model: level constants, Bethe roots, complex energies,
    /// mode classes and potential terms.
    Solve(ModelArgs),
    /// Tabulate the potential V(x) as CSV; `--terms` emits the shape-term
    /// breakdown JSON instead.
    Potential(PotentialArgs),
    /// Run the verification battery; exits 3 if any check fails.
    Verify(VerifyArgs),
    /// Closed-form exact ladder (A2 = 0 models only).
    Spectrum(SpectrumArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Preset id from `qnm catalog`.
    #[arg(long)]
    preset: Option<String>,
    /// JSON spec document (flat spec, `{"spec": ...}` wrapper, or extended
    /// ascending-coefficient arrays "P"/"Q").
    #[arg(long)]
    spec_file: Option<PathBuf>,
    /// Level count N.
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a2: Option<f64>,
    #[arg(long = "gamma-param", allow_negative_numbers = true)]
    gamma_param: Option<f64>,
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PotentialArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    x_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_hi: Option<f64>,
    /// Emit the term-breakdown JSON instead of the CSV table.
    #[arg(long)]
    terms: bool,
    /// Also dump the eigenfunction of this level index: CSV columns become
    /// x, V, Re phi, Im phi.
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    grid_points: Option<usize>,
    /// Scale factor applied to every verification tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Also write per-level residual profiles |r(x)| as CSV.
    #[arg(long)]
    residual_profile: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Highest rung of the ladder (defaults to N).
    #[arg(long)]
    n_max: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::Unsupported { .. } => ExitCode::from(4),
        Error::EigensolveFailed { .. } => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Catalog => {
            emit(
                &None,
                &serde_json::to_string_pretty(catalog::list_presets()).unwrap(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => cmd_solve(args),
        Command::Potential(args) => cmd_potential(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Spectrum(args) => cmd_spectrum(args),
    }
}

/// Resolve a model from `--preset` plus parameter flags or `--spec-file`.
fn resolve_model(args: &ModelArgs) -> Result<(ModelSpec, Option<Instance>), Error> {
    if args.preset.is_some() && args.spec_file.is_some() {
        return Err(Error::InvalidInput(
            "pass either --preset or --spec-file, not both".into(),
        ));
    }
    if let Some(path) = &args.spec_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        return match parse_spec_document(&text)? {
            ParsedSpec::Model(mut spec) => {
                if let Some(n) = args.n {
                    spec.level_count = n;
                }
                Ok((spec, None))
            }
            ParsedSpec::Higher(class) => Err(Error::Unsupported {
                m: class.m,
                n: class.n,
            }),
        };
    }
    let Some(id) = &args.preset else {
        return Err(Error::InvalidInput(
            "provide --preset <id> or --spec-file <path>".into(),
        ));
    };
    let mut params = PresetParams::new();
    params.n = args.n;
    let pairs: [(&str, Option<f64>); 11] = [
        ("alpha", args.alpha),
        ("beta", args.beta),
        ("gamma", args.gamma),
        ("c", args.c),
        ("d", args.d),
        ("a", args.a),
        ("b", args.b),
        ("a0", args.a0),
        ("a1", args.a1),
        ("a2", args.a2),
        ("gamma-param", args.gamma_param),
    ];
    for (name, value) in pairs {
        if let Some(v) = value {
            params.set(name, v);
        }
    }
    let inst = catalog::instantiate_full(id, &params)?;
    Ok((inst.spec.clone(), Some(inst)))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct LevelDoc {
    n: usize,
    degree: usize,
    #[serde(rename = "E")]
    energy: [f64; 2],
    mode_class: &'static str,
    lambda: [f64; 2],
    roots: Vec<[f64; 2]>,
    residual_max: f64,
    flags: Vec<String>,
}

#[derive(Serialize)]
struct SolveDoc<'a> {
    spec: &'a ModelSpec,
    solvability: &'a SolvabilityClass,
    normalizability: Normalizability,
    kappa: [f64; 2],
    potential_terms: BTreeMap<&'static str, [f64; 2]>,
    levels: Vec<LevelDoc>,
}

fn solve_doc<'a>(spec: &'a ModelSpec, solution: &'a SpectrumSolution) -> SolveDoc<'a> {
    SolveDoc {
        spec,
        solvability: &solution.class,
        normalizability: solution.normalizability,
        kappa: pair(solution.kappa),
        potential_terms: solution
            .terms
            .iter()
            .map(|t| (t.name, pair(t.coefficient)))
            .collect(),
        levels: solution
            .levels
            .iter()
            .map(|l| LevelDoc {
                n: l.index,
                degree: l.degree(),
                energy: pair(l.energy),
                mode_class: l.mode_class.as_str(),
                lambda: pair(l.root_set.lambda),
                roots: l.root_set.roots.iter().map(|z| pair(*z)).collect(),
                residual_max: l.root_set.residual_max(),
                flags: l
                    .root_set
                    .flags
                    .iter()
                    .map(|f| {
                        serde_json::to_value(f)
                            .unwrap()
                            .as_str()
                            .unwrap()
                            .to_string()
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn cmd_solve(args: ModelArgs) -> Result<ExitCode, Error> {
    let (spec, _) = resolve_model(&args)?;
    let solution = spectrum::solve_spectrum(&spec)?;
    let doc = solve_doc(&spec, &solution);
    emit(&args.out, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_potential(args: PotentialArgs) -> Result<ExitCode, Error> {
    let (spec, _) = resolve_model(&args.model)?;
    let levels = bethe::qes_levels(&spec)?;
    let ground = &levels[0];
    let assembly = spectrum::assemble_potential(&spec, ground)?;

    let points = args.grid_points.unwrap_or(2001);
    let grid = match (args.x_lo, args.x_hi) {
        (Some(lo), Some(hi)) => Grid::new(lo, hi, points)?,
        (None, None) => verify::default_grid(&spec, ground, points)?,
        _ => {
            return Err(Error::InvalidInput(
                "provide both --x-lo and --x-hi, or neither".into(),
            ))
        }
    };

    #[derive(Serialize)]
    struct TermsDoc {
        family: String,
        terms: BTreeMap<&'static str, [f64; 2]>,
        kappa: [f64; 2],
        /// Per-level additive constants C with V_N = V(x) + C.
        constants: Vec<[f64; 2]>,
    }
    let kappa = assembly.constant + ground.lambda;
    let terms_doc = TermsDoc {
        family: spec.family.as_str().to_string(),
        terms: assembly
            .terms
            .iter()
            .map(|t| (t.name, pair(t.coefficient)))
            .collect(),
        kappa: pair(kappa),
        constants: levels.iter().map(|l| pair(kappa - l.lambda)).collect(),
    };

    if args.terms {
        emit(
            &args.model.out,
            &serde_json::to_string_pretty(&terms_doc).unwrap(),
        )?;
        return Ok(ExitCode::SUCCESS);
    }

    let csv = match args.level {
        None => {
            let mut csv = String::from("x,V\n");
            for x in grid.xs() {
                let v = assembly.v(x)?;
                csv.push_str(&format!("{x:.16e},{v:.16e}\n"));
            }
            csv
        }
        Some(index) => {
            let level = levels.get(index).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "level index {index} out of range (0..{})",
                    levels.len() - 1
                ))
            })?;
            let phi = spectrum::eigenfunction(&spec, level)?;
            let mut csv = String::from("x,V,re_phi,im_phi\n");
            for x in grid.xs() {
                let v = assembly.v(x)?;
                let p = phi.eval(x)?;
                csv.push_str(&format!(
                    "{x:.16e},{v:.16e},{:.16e},{:.16e}\n",
                    p.re, p.im
                ));
            }
            csv
        }
    };
    match &args.model.out {
        Some(path) => {
            std::fs::write(path, csv.as_bytes()).map_err(|e| {
                Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
            })?;
            // CSV went to the file; the term breakdown goes to stdout.
            println!("{}", serde_json::to_string_pretty(&terms_doc).unwrap());
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let (spec, instance) = resolve_model(&args.model)?;
    let mut opts = VerifyOptions {
        grid_points: args.grid_points.unwrap_or(2001),
        tol_scale: args.tol.unwrap_or(1.0),
        ..Default::default()
    };
    if let Some(inst) = &instance {
        let expected = catalog::expected_outcome(inst);
        opts.expected = Some(expected.normalizability);
        opts.expected_energies = catalog::expected_energies(inst);
    }
    let report = verify::verify_model(&spec, &opts)?;
    let passed = report.passed;

    if let Some(path) = &args.residual_profile {
        let levels = bethe::qes_levels(&spec)?;
        let grid = verify::default_grid(&spec, &levels[0], opts.grid_points)?;
        let profiles: Vec<Vec<(f64, f64)>> = levels
            .iter()
            .map(|l| verify::residual_profile(&spec, l, &grid))
            .collect::<Result<_, _>>()?;
        let mut csv = String::from("x");
        for i in 0..profiles.len() {
            csv.push_str(&format!(",abs_r{i}"));
        }
        csv.push('\n');
        for row in 0..profiles[0].len() {
            csv.push_str(&format!("{:.16e}", profiles[0][row].0));
            for profile in &profiles {
                csv.push_str(&format!(",{:.16e}", profile[row].1));
            }
            csv.push('\n');
        }
        std::fs::write(path, csv.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }

    emit(&args.model.out, &serde_json::to_string_pretty(&report).unwrap())?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<ExitCode, Error> {
    let (spec, _) = resolve_model(&args.model)?;
    let n_max = args.n_max.unwrap_or(spec.level_count);
    let ladder = spectrum::exact_spectrum(&spec, n_max)?;

    #[derive(Serialize)]
    struct SpectrumDoc<'a> {
        spec: &'a ModelSpec,
        levels: &'a [spectrum::ExactLevel],
        note: Option<&'static str>,
    }
    let doc = SpectrumDoc {
        spec: &spec,
        levels: &ladder.levels,
        note: ladder.coincidence_note,
    };
    emit(&args.model.out, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(ExitCode::SUCCESS)
}
