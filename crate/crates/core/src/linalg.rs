//! Small dense complex linear algebra: eigenvalues of upper-Hessenberg
//! matrices by shifted QR, polynomial roots via companion matrix plus
//! Aberth-Ehrlich polishing, an LU solver for inverse iteration, and a
//! Sturm-bisection eigensolver for real symmetric tridiagonal matrices.
//!
//! Everything here targets desk-scale problems (dimension up to a few
//! hundred); no blocking, no packing, plain row-major storage.

use num_complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// y = M x
    #[allow(clippy::needless_range_loop)]
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = vec![ZERO; n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = ZERO;
            for (m, xv) in row.iter().zip(x.iter()) {
                acc += m * xv;
            }
            y[i] = acc;
        }
        y
    }
}

/// Eigenvalues of a 2x2 complex matrix [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5) * ((a - d) * 0.5) + b * c;
    let s = disc.sqrt();
    (half_tr + s, half_tr - s)
}

/// All eigenvalues of an upper-Hessenberg complex matrix, by explicit
/// single-shift QR with Wilkinson shifts and deflation. The input must
/// have zero entries below the first subdiagonal; entries there are
/// ignored. Returned order is unspecified; callers sort as needed.
pub fn hessenberg_eigenvalues(h: &CMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut h = h.clone();
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigs);
    }

    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let negligible = |h: &CMatrix, k: usize| -> bool {
        let v = h.get(k, k - 1).norm();
        let local = h.get(k - 1, k - 1).norm() + h.get(k, k).norm();
        v <= eps * local + eps * scale * 1e-2
    };

    let mut hi = n; // active block is rows/cols [lo, hi)
    let mut stalled = 0usize;
    let mut total_iters = 0usize;
    let max_iters = 60 * n + 200;

    while hi > 0 {
        // Find the start of the trailing unreduced block.
        let mut lo = hi - 1;
        while lo > 0 && !negligible(&h, lo) {
            lo -= 1;
        }

        if lo == hi - 1 {
            eigs.push(h.get(lo, lo));
            hi -= 1;
            stalled = 0;
            continue;
        }
        if lo == hi - 2 {
            let (l1, l2) = eig2(
                h.get(lo, lo),
                h.get(lo, lo + 1),
                h.get(lo + 1, lo),
                h.get(lo + 1, lo + 1),
            );
            eigs.push(l1);
            eigs.push(l2);
            hi -= 2;
            stalled = 0;
            continue;
        }

        total_iters += 1;
        if total_iters > max_iters {
            return Err(Error::EigensolveFailed { n });
        }

        // Wilkinson shift from the trailing 2x2; exceptional shift when stuck.
        let p = hi - 1;
        let mut mu = {
            let (l1, l2) = eig2(
                h.get(p - 1, p - 1),
                h.get(p - 1, p),
                h.get(p, p - 1),
                h.get(p, p),
            );
            let d = h.get(p, p);
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        stalled += 1;
        if stalled.is_multiple_of(12) {
            let kick = h.get(p, p - 1).norm() + h.get(p - 1, p - 2).norm();
            mu += Complex64::new(0.751 * kick, 0.521 * kick);
        }

        qr_step(&mut h, lo, hi, mu);
    }

    Ok(eigs)
}

/// One explicit shifted QR sweep on the block [lo, hi).
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: Complex64) {
    for k in lo..hi {
        let v = h.get(k, k) - mu;
        h.set(k, k, v);
    }

    // Left rotations zeroing the subdiagonal: rows (k, k+1).
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let f = h.get(k, k);
        let g = h.get(k + 1, k);
        let w = (f.norm_sqr() + g.norm_sqr()).sqrt();
        let (a, b) = if w == 0.0 {
            (Complex64::new(1.0, 0.0), ZERO)
        } else {
            (f / w, g / w)
        };
        rots.push((a, b));
        for j in k..hi {
            let r1 = h.get(k, j);
            let r2 = h.get(k + 1, j);
            h.set(k, j, a.conj() * r1 + b.conj() * r2);
            h.set(k + 1, j, -b * r1 + a * r2);
        }
    }

    // Right rotations: columns (k, k+1).
    for (idx, (a, b)) in rots.iter().enumerate() {
        let k = lo + idx;
        let top = (k + 2).min(hi);
        for i in lo..top {
            let c1 = h.get(i, k);
            let c2 = h.get(i, k + 1);
            h.set(i, k, c1 * a + c2 * b);
            h.set(i, k + 1, -c1 * b.conj() + c2 * a.conj());
        }
    }

    for k in lo..hi {
        let v = h.get(k, k) + mu;
        h.set(k, k, v);
    }
}

/// Solve M x = b by LU with partial pivoting. M is consumed as workspace.
#[allow(clippy::needless_range_loop)]
pub fn lu_solve(mut m: CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = m.dim();
    let mut x: Vec<Complex64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        let mut pivot = col;
        let mut best = m.get(perm[col], col).norm();
        for (r, &pr) in perm.iter().enumerate().skip(col + 1) {
            let v = m.get(pr, col).norm();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return Err(Error::InvalidInput("singular matrix in lu_solve".into()));
        }
        perm.swap(col, pivot);
        let prow = perm[col];
        let d = m.get(prow, col);
        for &r in &perm[col + 1..] {
            let factor = m.get(r, col) / d;
            if factor != ZERO {
                for j in col..n {
                    let v = m.get(r, j) - factor * m.get(prow, j);
                    m.set(r, j, v);
                }
                let bv = x[r] - factor * x[prow];
                x[r] = bv;
            }
        }
    }

    let mut out = vec![ZERO; n];
    for col in (0..n).rev() {
        let prow = perm[col];
        let mut acc = x[prow];
        for j in col + 1..n {
            acc -= m.get(prow, j) * out[j];
        }
        out[col] = acc / m.get(prow, col);
    }
    Ok(out)
}

/// Evaluate a polynomial (ascending coefficients) and its derivative.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth-Ehrlich simultaneous refinement of all roots of a polynomial
/// with ascending coefficients. `roots` holds the starting guesses and is
/// updated in place. Stops when every correction is below `tol * (1+|z|)`.
pub fn aberth_polish(coeffs: &[Complex64], roots: &mut [Complex64], tol: f64, max_iter: usize) {
    let m = roots.len();
    if m == 0 {
        return;
    }
    for _ in 0..max_iter {
        let mut worst = 0.0f64;
        let snapshot = roots.to_vec();
        for k in 0..m {
            let zk = snapshot[k];
            let (p, dp) = horner(coeffs, zk);
            if p == ZERO {
                continue;
            }
            if dp == ZERO {
                continue;
            }
            let newton = p / dp;
            let mut rep = ZERO;
            let mut degenerate = false;
            for (l, &zl) in snapshot.iter().enumerate() {
                if l == k {
                    continue;
                }
                let d = zk - zl;
                if d == ZERO {
                    degenerate = true;
                    break;
                }
                rep += Complex64::new(1.0, 0.0) / d;
            }
            if degenerate {
                continue;
            }
            let denom = Complex64::new(1.0, 0.0) - newton * rep;
            let step = if denom == ZERO { newton } else { newton / denom };
            roots[k] = zk - step;
            worst = worst.max(step.norm() / (1.0 + zk.norm()));
        }
        if worst <= tol {
            break;
        }
    }
}

/// All complex roots of a polynomial with ascending coefficients
/// `c0 + c1 z + ... + cm z^m`. Exact zero roots (vanishing low-order
/// coefficients) are split off first; the rest go through a companion
/// matrix followed by Aberth polishing to ~1e-13 relative.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let maxc = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if maxc == 0.0 {
        return Err(Error::InvalidInput(
            "root extraction of the zero polynomial".into(),
        ));
    }
    let tiny = 1e-14 * maxc;

    let mut hi = coeffs.len() - 1;
    while hi > 0 && coeffs[hi].norm() <= tiny {
        hi -= 1;
    }
    let mut lo = 0usize;
    while lo < hi && coeffs[lo].norm() <= tiny {
        lo += 1;
    }

    let mut roots: Vec<Complex64> = vec![ZERO; lo];
    let work = &coeffs[lo..=hi];
    let deg = work.len() - 1;

    match deg {
        0 => {}
        1 => roots.push(-work[0] / work[1]),
        2 => {
            // Stable quadratic: avoid cancellation in the small root.
            let (a, b, c) = (work[2], work[1], work[0]);
            let disc = (b * b - a * c * 4.0).sqrt();
            let q = if (b + disc).norm() >= (b - disc).norm() {
                -(b + disc) * 0.5
            } else {
                -(b - disc) * 0.5
            };
            if q == ZERO {
                roots.push(ZERO);
                roots.push(ZERO);
            } else {
                roots.push(q / a);
                roots.push(c / q);
            }
        }
        _ => {
            let lead = work[deg];
            let monic: Vec<Complex64> = work.iter().map(|c| c / lead).collect();
            let mut comp = CMatrix::zeros(deg);
            for i in 1..deg {
                comp.set(i, i - 1, Complex64::new(1.0, 0.0));
            }
            for (i, c) in monic.iter().take(deg).enumerate() {
                comp.set(i, deg - 1, -c);
            }
            let mut found = hessenberg_eigenvalues(&comp)?;
            aberth_polish(&monic, &mut found, 1e-14, 48);
            roots.extend(found);
        }
    }
    Ok(roots)
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly
/// below `x`, counted through the signs of the LDLᵀ pivots.
pub fn tridiag_count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let safe = if q.abs() < 1e-300 {
            if q >= 0.0 {
                1e-300
            } else {
                -1e-300
            }
        } else {
            q
        };
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues of a real symmetric tridiagonal matrix,
/// by Sturm bisection inside Gershgorin bounds. Ascending order.
pub fn tridiag_lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    let k = k.min(n);
    if k == 0 {
        return Vec::new();
    }

    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    lo -= 1.0;
    hi += 1.0;

    let mut out = Vec::with_capacity(k);
    for idx in 0..k {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (b - a) < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if tridiag_count_below(diag, off, mid) <= idx {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}
