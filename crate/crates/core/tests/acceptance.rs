//! Acceptance suite. One test per criterion; each prints a pass/fail line
//! with the worst measured deviation. Criterion 10 (CLI determinism and
//! exit codes) lives in the CLI crate's own acceptance test.

use num_complex::Complex64;

use qnm_core::bethe::{self, LevelFlag};
use qnm_core::catalog::{self, PresetParams};
use qnm_core::linalg;
use qnm_core::model::{Family, ModelSpec, PolyP, PolyQ};
use qnm_core::prepotential::Normalizability;
use qnm_core::rng::SplitMix64;
use qnm_core::spectrum::{self, ModeClass};
use qnm_core::verify;
use qnm_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance criterion {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Greedy set match: every `got` value pairs with a distinct `want` value;
/// returns the worst pairing distance.
fn set_match(got: &[Complex64], want: &[Complex64]) -> f64 {
    assert_eq!(got.len(), want.len(), "set size mismatch");
    let mut used = vec![false; want.len()];
    let mut worst = 0.0f64;
    for g in got {
        let mut best = f64::MAX;
        let mut arg = usize::MAX;
        for (j, w) in want.iter().enumerate() {
            if !used[j] {
                let d = (g - w).norm();
                if d < best {
                    best = d;
                    arg = j;
                }
            }
        }
        used[arg] = true;
        worst = worst.max(best);
    }
    worst
}

fn solved_energies(spec: &ModelSpec) -> Vec<Complex64> {
    bethe::qes_levels(spec)
        .unwrap()
        .iter()
        .map(|l| spectrum::level_energy(spec, l).unwrap())
        .collect()
}

#[test]
fn criterion_1_exact_ladder_reproduction() {
    let mut rng = SplitMix64::new(101);
    let n = 8usize;
    let mut worst_matrix = 0.0f64;
    let mut worst_energy = 0.0f64;
    for _ in 0..100 {
        let alpha = rng.range(0.1, 3.0);
        let a1 = rng.range(0.1, 3.0);
        let a0 = rng.range(-2.0, 2.0);
        let spec = ModelSpec::new(
            Family::Scarf2,
            PolyP::real(0.0, a1, a0),
            PolyQ::real(alpha, 0.0, alpha),
            n,
        );

        // Gauged-matrix spectrum against the closed ladder of level constants.
        let gauged = bethe::algebraize(&spec).unwrap();
        let eigs = linalg::hessenberg_eigenvalues(&gauged.matrix).unwrap();
        let ladder: Vec<Complex64> = (0..=n)
            .map(|j| c(j as f64 * (2.0 * a1 - alpha * j as f64), 0.0))
            .collect();
        worst_matrix = worst_matrix.max(set_match(&eigs, &ladder));

        // Spectrum-module energies against E_n = 2 A1 n - alpha n^2 - A1^2/alpha.
        let energies = solved_energies(&spec);
        let expect: Vec<Complex64> = (0..=n)
            .map(|j| {
                let jf = j as f64;
                c(2.0 * a1 * jf - alpha * jf * jf - a1 * a1 / alpha, 0.0)
            })
            .collect();
        worst_energy = worst_energy.max(set_match(&energies, &expect));
    }
    let pass = worst_matrix < 1e-10 && worst_energy < 1e-10;
    report(
        "1 (exact-ladder reproduction)",
        pass,
        &format!("matrix dev {worst_matrix:.2e}, energy dev {worst_energy:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_qnm_formula_reproduction() {
    let n = 5usize;
    let grid3 = [0.5, 1.0, 2.0];
    let mut worst = 0.0f64;

    for preset in ["scarf2-qnm", "genpt-qnm"] {
        for &alpha in &grid3 {
            for &cc in &grid3 {
                for d in [0.0, 1.0] {
                    let mut params = PresetParams::with_n(n);
                    params.set("alpha", alpha).set("c", cc).set("d", d);
                    let inst = catalog::instantiate_full(preset, &params).unwrap();
                    let expect = catalog::expected_energies(&inst).unwrap();
                    worst = worst.max(set_match(&solved_energies(&inst.spec), &expect));
                }
            }
        }
    }

    for &alpha in &grid3 {
        for &cc in &grid3 {
            for d in [0.0, 1.0, 2.0] {
                let mut params = PresetParams::with_n(n);
                params.set("alpha", alpha).set("c", cc).set("d", d);
                let inst = catalog::instantiate_full("morse-qnm", &params).unwrap();
                let expect = catalog::expected_energies(&inst).unwrap();
                worst = worst.max(set_match(&solved_energies(&inst.spec), &expect));
            }
        }
    }

    for &cc in &grid3 {
        let mut params = PresetParams::with_n(n);
        params.set("c", cc);
        let inst = catalog::instantiate_full("shifted-osc-qnm", &params).unwrap();
        let expect = catalog::expected_energies(&inst).unwrap();
        worst = worst.max(set_match(&solved_energies(&inst.spec), &expect));
    }

    for &a in &grid3 {
        for &gp in &grid3 {
            let mut params = PresetParams::with_n(n);
            params.set("a", a).set("gamma-param", gp);
            let inst = catalog::instantiate_full("radial-osc-qnm", &params).unwrap();
            let expect = catalog::expected_energies(&inst).unwrap();
            worst = worst.max(set_match(&solved_energies(&inst.spec), &expect));
        }
    }

    let pass = worst < 1e-10;
    report(
        "2 (QNM formula reproduction)",
        pass,
        &format!("worst energy deviation {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_singular_real_energy_theorem() {
    let mut rng = SplitMix64::new(303);
    let mut worst_resum = 0.0f64;
    let mut worst_im = 0.0f64;
    let mut closures = true;
    for n in 1..=10usize {
        for _ in 0..3 {
            let mut params = PresetParams::with_n(n);
            params
                .set("alpha", rng.range(0.3, 2.5))
                .set("c", rng.range(0.3, 2.5));
            let inst = catalog::instantiate_full("scarf2-singular", &params).unwrap();
            for level in bethe::qes_levels(&inst.spec).unwrap() {
                worst_resum = worst_resum.max(level.root_sum().re.abs());
                let e = spectrum::level_energy(&inst.spec, &level).unwrap();
                worst_im = worst_im.max(e.im.abs());
                let (closed, _) = bethe::conjugation_closure(&level.roots);
                closures &= closed;
            }
        }
    }
    let pass = worst_resum < 1e-10 && worst_im < 1e-9 && closures;
    report(
        "3 (singular-model real-energy property)",
        pass,
        &format!(
            "max |Re sum z| {worst_resum:.2e}, max |Im E| {worst_im:.2e}, closure {closures}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_parity_equivalence() {
    let mut worst_e = 0.0f64;
    let mut worst_bae = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let mut all = true;
    for n in 0..=5usize {
        for cc in [0.5, 1.0, 2.0] {
            for d in [0.0, 1.0, 2.0] {
                let mut params = PresetParams::with_n(n);
                params.set("alpha", 1.0).set("c", cc).set("d", d);
                let inst = catalog::instantiate_full("morse-qnm-mirror", &params).unwrap();
                let rep = verify::parity_equivalence(&inst.spec).unwrap();
                worst_e = worst_e.max(rep.max_energy_deviation);
                worst_bae = worst_bae.max(rep.max_mapped_bae_residual);
                worst_ratio = worst_ratio.max(rep.max_ratio_deviation);
                all &= rep.passed();
            }
        }
    }
    report(
        "4 (parity equivalence)",
        all,
        &format!(
            "energy dev {worst_e:.2e}, mapped-BAE residual {worst_bae:.2e}, ratio dev {worst_ratio:.2e}"
        ),
    );
    assert!(all);
}

#[test]
fn criterion_5_bae_cross_validation_over_catalog() {
    let mut rng = SplitMix64::new(505);
    let mut worst_ratio = 0.0f64;
    let mut worst_identity = 0.0f64;
    for preset in catalog::list_presets() {
        let mut instances = vec![catalog::instantiate_full(preset.id, &PresetParams::new()).unwrap()];
        for _ in 0..2 {
            let n = rng.range_usize(1, 3);
            let params = catalog::sample_params(preset.id, &mut rng, n);
            instances.push(catalog::instantiate_full(preset.id, &params).unwrap());
        }
        for inst in &instances {
            for level in bethe::qes_levels(&inst.spec).unwrap() {
                worst_ratio = worst_ratio.max(level.residual_max() / level.scale);
                if level.degree() >= 2 && !level.has_flag(LevelFlag::ClusteredRoots) {
                    let ids = verify::summation_identities(&level.roots);
                    worst_identity = worst_identity
                        .max(ids.per_root_max)
                        .max(ids.double_sum_deviation);
                }
            }
        }
    }
    let pass = worst_ratio < 1e-9 && worst_identity < 1e-10;
    report(
        "5 (BAE cross-validation)",
        pass,
        &format!(
            "worst residual/scale {worst_ratio:.2e}, worst identity dev {worst_identity:.2e}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_oracle_agreement_for_sextic() {
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=3usize {
        let start = std::time::Instant::now();
        let mut params = PresetParams::with_n(n);
        params.set("a", 1.0).set("b", 1.0);
        let inst = catalog::instantiate_full("sextic-qes", &params).unwrap();
        let levels = bethe::qes_levels(&inst.spec).unwrap();
        let grid = verify::oracle_grid(&inst.spec, &levels[0], 4001).unwrap();
        let oracle = verify::fd_oracle(&inst.spec, &grid, 4 * (n + 1) + 8).unwrap();
        let mut worst = 0.0f64;
        for level in &levels {
            let e = spectrum::level_energy(&inst.spec, level).unwrap();
            assert!(e.im.abs() < 1e-9, "sextic energies must be real");
            let best = oracle
                .eigenvalues
                .iter()
                .map(|l| (l - e.re).abs() / (1.0 + e.re.abs()))
                .fold(f64::MAX, f64::min);
            worst = worst.max(best);
        }
        let elapsed = start.elapsed().as_secs_f64();
        let ok = worst < 1e-3 && oracle.sensitivity_ok && elapsed < 10.0;
        pass &= ok;
        detail.push_str(&format!(
            "N={n}: dev {worst:.2e}, sens {}, {elapsed:.2}s; ",
            oracle.sensitivity_ok
        ));
    }
    report("6 (finite-difference oracle, sextic)", pass, detail.trim_end());
    assert!(pass);
}

#[test]
fn criterion_7_residual_convergence_order() {
    let mut rng = SplitMix64::new(707);
    let mut worst_low = f64::MAX;
    let mut worst_high = f64::MIN;
    let mut pass = true;
    let mut failures = String::new();
    for preset in catalog::list_presets() {
        let n = 3.min(catalog::find(preset.id).unwrap().default_n);
        let params = catalog::sample_params(preset.id, &mut rng, n);
        let inst = catalog::instantiate_full(preset.id, &params).unwrap();
        for level in bethe::qes_levels(&inst.spec).unwrap() {
            let grid = verify::default_grid(&inst.spec, &level, 2001).unwrap();
            let order = verify::convergence_order(&inst.spec, &level, &grid).unwrap();
            worst_low = worst_low.min(order.order);
            worst_high = worst_high.max(order.order);
            if !(1.7..=2.3).contains(&order.order) {
                pass = false;
                failures.push_str(&format!(
                    "{} deg {} order {:.3}; ",
                    preset.id,
                    level.degree(),
                    order.order
                ));
            }
        }
    }
    report(
        "7 (stencil convergence order)",
        pass,
        &format!("order range [{worst_low:.3}, {worst_high:.3}] {failures}"),
    );
    assert!(pass);
}

#[test]
fn criterion_8_verdict_reproduction() {
    let mut pass = true;
    let mut detail = String::new();

    // Negative presets: all three must come out non-normalizable.
    let negatives: [(&str, Vec<(&str, f64)>); 3] = [
        ("scarf2-qes-real-none", vec![]),
        ("shifted-osc", vec![("a2", 1.0)]),
        ("scarf1", vec![("a2", 1.0)]),
    ];
    for (id, overrides) in negatives {
        let mut params = PresetParams::new();
        for (k, v) in overrides {
            params.set(k, v);
        }
        let inst = catalog::instantiate_full(id, &params).unwrap();
        let sol = spectrum::solve_spectrum(&inst.spec).unwrap();
        let ok = sol.normalizability == Normalizability::NonNormalizable;
        pass &= ok;
        detail.push_str(&format!("{id}: {:?}; ", sol.normalizability));
    }

    // genpt-qes-real with the wall condition satisfied: real bound states.
    let inst = catalog::instantiate_full("genpt-qes-real", &PresetParams::new()).unwrap();
    let sol = spectrum::solve_spectrum(&inst.spec).unwrap();
    let bound = sol.levels.iter().all(|l| {
        l.mode_class == ModeClass::BoundState && l.energy.im.abs() < 1e-9 * (1.0 + l.energy.re.abs())
    });
    pass &= bound;
    detail.push_str(&format!("genpt-qes-real bound {bound}; "));

    // genpt-qes-qnm boundary parameter: a <= N + 1/2 rejected, above accepted.
    let mut reject = PresetParams::with_n(1);
    reject.set("a", 1.5);
    let rejected = matches!(
        catalog::instantiate("genpt-qes-qnm", &reject),
        Err(Error::Constraint { .. })
    );
    let mut accept = PresetParams::with_n(1);
    accept.set("a", 1.6);
    let accepted = catalog::instantiate("genpt-qes-qnm", &accept).is_ok();
    pass &= rejected && accepted;
    detail.push_str(&format!("a<=N+1/2 rejected {rejected}, a>N+1/2 accepted {accepted}"));

    report("8 (verdict reproduction)", pass, &detail);
    assert!(pass);
}

#[test]
fn criterion_9_ladder_coincidence() {
    let mut rng = SplitMix64::new(909);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let alpha = rng.range(0.3, 2.5);
        let a1 = rng.range(0.3, 3.0);
        let scarf = ModelSpec::new(
            Family::Scarf2,
            PolyP::real(0.0, a1, rng.range(-1.0, 1.0)),
            PolyQ::real(alpha, 0.0, alpha),
            0,
        );
        let genpt = ModelSpec::new(
            Family::GenPoschlTeller,
            PolyP::real(0.0, a1, -a1 - rng.range(0.2, 1.5)),
            PolyQ::real(alpha, 0.0, -alpha),
            0,
        );
        let l1 = spectrum::exact_spectrum(&scarf, 8).unwrap();
        let l2 = spectrum::exact_spectrum(&genpt, 8).unwrap();
        for (a, b) in l1.levels.iter().zip(l2.levels.iter()) {
            worst = worst.max((a.energy - b.energy).norm());
        }
    }
    let pass = worst < 1e-12;
    report(
        "9 (sinh/cosh ladder coincidence)",
        pass,
        &format!("worst deviation {worst:.2e}"),
    );
    assert!(pass);
}
