//! Algebraization of the gauged operator and Bethe-root extraction.
//!
//! Acting on `φ = e^{−W₀} p(z)` and demanding `(−d²/dx² + V_N)φ = 0` turns
//! the polynomial part into the eigenproblem `T p = Λ p` for the gauged
//! operator `T = −Q ∂² + (2P − Q'/2) ∂ − 2A₂N z` on the monomial basis
//! `1, z, …, z^N`. Column `j` of the matrix carries exactly four bands:
//!
//! - `2A₂(j−N)` into row `j+1`
//! - `j(2A₁ − αj)` into row `j`
//! - `j(2A₀ − β(j−½))` into row `j−1`
//! - `−γ j(j−1)` into row `j−2`
//!
//! so the matrix is upper Hessenberg from the start, and for `A₂ = 0` it is
//! triangular with diagonal `j(2A₁ − αj)` — the exactly solvable ladder.
//! The eigenvalue fixes the level constant `Λ = 2A₁N − αN² + 2A₂Σz_k`; the
//! eigenvector, read as polynomial coefficients, fixes `p_N` whose zeros are
//! the Bethe roots. The classical Bethe equations are kept as an independent
//! residual check on every root set, never as the primary solver.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::coords::{self, CanonicalModel};
use crate::linalg::{self, CMatrix};
use crate::model::{self, ModelSpec, Solvability};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The gauged operator on the degree-≤N monomial basis.
#[derive(Debug, Clone)]
pub struct GaugedMatrix {
    pub matrix: CMatrix,
    pub level_count: usize,
}

/// Build the gauged matrix for a model. Rejects higher-type degree pairs.
pub fn algebraize(spec: &ModelSpec) -> Result<GaugedMatrix> {
    let class = model::classify_solvability(&spec.p, &spec.q);
    if class.class == Solvability::HigherType {
        return Err(Error::Unsupported {
            m: class.m,
            n: class.n,
        });
    }
    let canon = coords::canonicalize(spec)?;
    Ok(algebraize_canonical(&canon))
}

pub(crate) fn algebraize_canonical(canon: &CanonicalModel) -> GaugedMatrix {
    let n = canon.level_count;
    let dim = n + 1;
    let (alpha, beta, gamma) = canon.form.q_coefficients();
    let (a2, a1, a0) = (canon.p.a2, canon.p.a1, canon.p.a0);

    let mut m = CMatrix::zeros(dim);
    for j in 0..dim {
        let jf = j as f64;
        if j + 1 < dim {
            m.set(j + 1, j, a2 * (2.0 * (jf - n as f64)));
        }
        m.set(j, j, (a1 * 2.0 - Complex64::new(alpha * jf, 0.0)) * jf);
        if j >= 1 {
            m.set(j - 1, j, (a0 * 2.0 - Complex64::new(beta * (jf - 0.5), 0.0)) * jf);
        }
        if j >= 2 {
            m.set(j - 2, j, Complex64::new(-gamma * jf * (jf - 1.0), 0.0));
        }
    }
    GaugedMatrix {
        matrix: m,
        level_count: n,
    }
}

/// Flags attached to a solved level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelFlag {
    /// The level constant coincides with another level's within tolerance.
    Degenerate,
    /// The eigenvector residual stayed above tolerance (defective block).
    Defective,
    /// Two roots closer than the clustering threshold; residuals unreliable.
    ClusteredRoots,
}

/// One solved level: the level constant Λ, the Bethe roots (zeros of the
/// eigenvector polynomial), their Bethe-equation residuals, and the raw
/// polynomial coefficients (ascending).
#[derive(Debug, Clone)]
pub struct RootSet {
    pub lambda: Complex64,
    pub roots: Vec<Complex64>,
    pub residuals: Vec<Complex64>,
    pub coefficients: Vec<Complex64>,
    pub flags: Vec<LevelFlag>,
    /// Residual scale: `max(1, max|z_k|² · max coefficient)`.
    pub scale: f64,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn root_sum(&self) -> Complex64 {
        self.roots.iter().sum()
    }

    pub fn residual_max(&self) -> f64 {
        self.residuals.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn has_flag(&self, flag: LevelFlag) -> bool {
        self.flags.contains(&flag)
    }
}

impl Serialize for RootSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            lambda: [f64; 2],
            roots: Vec<[f64; 2]>,
            residual_max: f64,
            flags: &'a [LevelFlag],
        }
        Doc {
            lambda: [self.lambda.re, self.lambda.im],
            roots: self.roots.iter().map(|z| [z.re, z.im]).collect(),
            residual_max: self.residual_max(),
            flags: &self.flags,
        }
        .serialize(s)
    }
}

fn sort_key(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Solve all N+1 levels of a model. For `A₂ = 0` the matrix is triangular
/// and the ladder is read off directly (the level of diagonal index `j`
/// carries a degree-`j` polynomial); otherwise the Hessenberg eigenproblem
/// is solved by shifted QR and each eigenvector is reconstructed by the
/// exact backward recurrence from its monic top coefficient.
///
/// Levels are ordered by ascending (Re Λ, Im Λ); roots within a level by
/// ascending (Re z, Im z). Output is deterministic for a fixed input.
pub fn qes_levels(spec: &ModelSpec) -> Result<Vec<RootSet>> {
    let canon = coords::canonicalize(spec)?;
    let class = model::classify_solvability(&spec.p, &spec.q);
    if class.class == Solvability::HigherType {
        return Err(Error::Unsupported {
            m: class.m,
            n: class.n,
        });
    }
    let gauged = algebraize_canonical(&canon);
    let m = &gauged.matrix;
    let dim = m.dim();
    let lambda_scale = 1.0 + m.frobenius_norm();

    let mut levels: Vec<RootSet> = Vec::with_capacity(dim);

    let lower_triangular = (0..dim).all(|j| {
        (j == 0 || m.get(j - 1, j).norm() == 0.0) && (j < 2 || m.get(j - 2, j).norm() == 0.0)
    });

    if canon.p.a2.norm() == 0.0 {
        for j in 0..dim {
            let lambda = m.get(j, j);
            let mut coeffs = vec![ZERO; j + 1];
            coeffs[j] = ONE;
            let mut degenerate = false;
            for i in (0..j).rev() {
                let mut rhs = ZERO;
                if i < j {
                    rhs += m.get(i, i + 1) * coeffs[i + 1];
                }
                if i + 2 <= j {
                    rhs += m.get(i, i + 2) * coeffs[i + 2];
                }
                let denom = lambda - m.get(i, i);
                if denom.norm() <= 1e-12 * lambda_scale {
                    degenerate = true;
                    coeffs[i] = ZERO;
                } else {
                    coeffs[i] = rhs / denom;
                }
            }
            let mut flags = Vec::new();
            if degenerate {
                flags.push(LevelFlag::Degenerate);
            }
            levels.push(build_root_set(&canon, lambda, coeffs, flags)?);
        }
    } else if lower_triangular {
        // Vanishing superdiagonals (e.g. the rising-exponential mirror
        // family): eigenvalues on the diagonal; the eigenvector of the m-th
        // one starts with m exact zero coefficients, so its polynomial is
        // z^m times a degree-(N-m) factor.
        for j in 0..dim {
            let lambda = m.get(j, j);
            let mut coeffs = vec![ZERO; dim];
            coeffs[j] = ONE;
            let mut degenerate = false;
            for i in j + 1..dim {
                let denom = lambda - m.get(i, i);
                if denom.norm() <= 1e-12 * lambda_scale {
                    degenerate = true;
                    coeffs[i] = ZERO;
                } else {
                    coeffs[i] = m.get(i, i - 1) * coeffs[i - 1] / denom;
                }
            }
            while coeffs.len() > j + 1 && coeffs.last().unwrap().norm() == 0.0 {
                coeffs.pop();
            }
            let mut flags = Vec::new();
            if degenerate {
                flags.push(LevelFlag::Degenerate);
            }
            levels.push(build_root_set(&canon, lambda, coeffs, flags)?);
        }
    } else {
        let mut eigs = linalg::hessenberg_eigenvalues(m)?;
        eigs.sort_by(sort_key);
        for (idx, &lambda) in eigs.iter().enumerate() {
            let mut flags = Vec::new();
            let near_degenerate = eigs
                .iter()
                .enumerate()
                .any(|(k, l)| k != idx && (l - lambda).norm() <= 1e-10 * lambda_scale);
            if near_degenerate {
                flags.push(LevelFlag::Degenerate);
            }
            let (coeffs, residual) = eigenvector_monic(m, lambda);
            if residual > 1e-8 {
                flags.push(LevelFlag::Defective);
            }
            levels.push(build_root_set(&canon, lambda, coeffs, flags)?);
        }
    }

    levels.sort_by(|a, b| sort_key(&a.lambda, &b.lambda));
    Ok(levels)
}

/// Eigenvector of the Hessenberg gauged matrix for eigenvalue `lambda`,
/// normalized monic (top coefficient 1), via the backward recurrence on the
/// rows; one inverse-iteration pass polishes it when the recurrence residual
/// is poor. Returns (ascending coefficients, relative residual).
#[allow(clippy::needless_range_loop)]
fn eigenvector_monic(m: &CMatrix, lambda: Complex64) -> (Vec<Complex64>, f64) {
    let dim = m.dim();
    let mut v = vec![ZERO; dim];
    v[dim - 1] = ONE;
    for j in (1..dim).rev() {
        let mut acc = lambda * v[j];
        for k in j..(j + 3).min(dim) {
            acc -= m.get(j, k) * v[k];
        }
        v[j - 1] = acc / m.get(j, j - 1);
    }
    let mut best_res = eigen_residual(m, &v, lambda);

    // Inverse iteration sharpens the recurrence seed; the backward pass is
    // exact row-wise but accumulates cancellation for larger N. The tiny
    // diagonal shift keeps the solve regular at the exact eigenvalue.
    let dim_f = 1.0 + m.frobenius_norm();
    for _ in 0..2 {
        let mut shifted = m.clone();
        for i in 0..dim {
            let d = shifted.get(i, i) - lambda - Complex64::new(1e-14 * dim_f, 1e-14 * dim_f);
            shifted.set(i, i, d);
        }
        let Ok(w) = linalg::lu_solve(shifted, &v) else {
            break;
        };
        if w[dim - 1].norm() == 0.0 {
            break;
        }
        let scale = w[dim - 1];
        let polished: Vec<Complex64> = w.iter().map(|c| c / scale).collect();
        let res = eigen_residual(m, &polished, lambda);
        if res < best_res {
            best_res = res;
            v = polished;
        } else {
            break;
        }
    }
    (v, best_res)
}

fn eigen_residual(m: &CMatrix, v: &[Complex64], lambda: Complex64) -> f64 {
    let mv = m.apply(v);
    let vmax = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = (1.0 + m.frobenius_norm()) * vmax.max(f64::MIN_POSITIVE);
    mv.iter()
        .zip(v.iter())
        .map(|(a, b)| (a - lambda * b).norm())
        .fold(0.0, f64::max)
        / scale
}

fn build_root_set(
    canon: &CanonicalModel,
    lambda: Complex64,
    coeffs: Vec<Complex64>,
    mut flags: Vec<LevelFlag>,
) -> Result<RootSet> {
    let mut roots = if coeffs.len() > 1 {
        linalg::polynomial_roots(&coeffs)?
    } else {
        Vec::new()
    };
    roots.sort_by(sort_key);

    let root_scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut clustered = false;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (roots[i] - roots[j]).norm() <= 1e-10 * (1.0 + root_scale) {
                clustered = true;
            }
        }
    }
    if clustered {
        flags.push(LevelFlag::ClusteredRoots);
    }

    let residuals = bae_residuals_canonical(canon, &roots);
    let scale = residual_scale(canon, &roots);
    Ok(RootSet {
        lambda,
        roots,
        residuals,
        coefficients: coeffs,
        flags,
        scale,
    })
}

/// Residual scale for accepting Bethe residuals:
/// `max(1, max|z_k|² · max coefficient magnitude)`.
pub fn residual_scale(canon: &CanonicalModel, roots: &[Complex64]) -> f64 {
    let (alpha, beta, gamma) = canon.form.q_coefficients();
    let coeff_mag = canon
        .p
        .a2
        .norm()
        .max(canon.p.a1.norm())
        .max(canon.p.a0.norm())
        .max(alpha.abs())
        .max(beta.abs())
        .max(gamma.abs());
    let zmax = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (zmax * zmax * coeff_mag).max(1.0)
}

/// Bethe-equation residuals for a root multiset under a model's canonical
/// coefficients:
/// `r_k = A₂z_k² + (A₁−α/2)z_k + A₀ − β/4 − Σ_{l≠k} Q(z_k)/(z_k−z_l)`.
pub fn bae_residuals(spec: &ModelSpec, roots: &[Complex64]) -> Result<Vec<Complex64>> {
    let canon = coords::canonicalize(spec)?;
    Ok(bae_residuals_canonical(&canon, roots))
}

pub(crate) fn bae_residuals_canonical(
    canon: &CanonicalModel,
    roots: &[Complex64],
) -> Vec<Complex64> {
    let (alpha, beta, _) = canon.form.q_coefficients();
    let q = canon.q_poly();
    let (a2, a1, a0) = (canon.p.a2, canon.p.a1, canon.p.a0);
    roots
        .iter()
        .enumerate()
        .map(|(k, &zk)| {
            let mut r = a2 * zk * zk + (a1 - Complex64::new(0.5 * alpha, 0.0)) * zk + a0
                - Complex64::new(0.25 * beta, 0.0);
            let qz = q.eval(zk);
            for (l, &zl) in roots.iter().enumerate() {
                if l == k {
                    continue;
                }
                let d = zk - zl;
                if d.norm() == 0.0 {
                    // Exactly coincident roots: with Q vanishing there too
                    // (the z^m factor of a gauged-matrix level, possible only
                    // when gamma = 0) the confluent pair contributes nothing;
                    // otherwise the configuration is genuinely singular.
                    if qz.norm() == 0.0 {
                        continue;
                    }
                    return Complex64::new(f64::INFINITY, 0.0);
                }
                r -= qz / d;
            }
            r
        })
        .collect()
}

/// Level constant recomputed from a root multiset of the given degree:
/// `Λ = 2A₁·deg − α·deg² + 2A₂·Σz_k`. Exact identity of the last matrix
/// row; cross-validates the eigen route against the roots route.
pub fn lambda_from_roots(spec: &ModelSpec, roots: &[Complex64]) -> Result<Complex64> {
    let canon = coords::canonicalize(spec)?;
    let (alpha, _, _) = canon.form.q_coefficients();
    let d = roots.len() as f64;
    let sum: Complex64 = roots.iter().sum();
    Ok(canon.p.a1 * (2.0 * d) - Complex64::new(alpha * d * d, 0.0) + canon.p.a2 * 2.0 * sum)
}

/// Check invariance of a root multiset under `z → −z̄` to 1e−9, returning
/// the pairing (self-paired indices mark purely imaginary roots).
pub fn conjugation_closure(roots: &[Complex64]) -> (bool, Vec<(usize, usize)>) {
    let tol = 1e-9;
    let n = roots.len();
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    for k in 0..n {
        if used[k] {
            continue;
        }
        let target = -roots[k].conj();
        let mut best = f64::MAX;
        let mut arg = usize::MAX;
        for (j, &zj) in roots.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (zj - target).norm();
            if d < best {
                best = d;
                arg = j;
            }
        }
        if best <= tol * (1.0 + roots[k].norm()) {
            used[k] = true;
            used[arg] = true;
            pairs.push((k, arg));
        } else {
            return (false, pairs);
        }
    }
    (true, pairs)
}
