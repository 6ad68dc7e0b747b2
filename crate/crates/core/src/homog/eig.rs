//! Eigen-decomposition of small complex matrices.
//!
//! Householder reduction to Hessenberg form, then single-shift complex QR
//! with Wilkinson shifts and exceptional shifts every ten stalled sweeps.
//! Eigenvectors are recovered by inverse iteration on the original matrix.
//! Numerically repeated eigenvalues that are semisimple get independent
//! eigenvectors by Gram–Schmidt within the cluster.

use num_complex::Complex64;

use super::{CMat4, CVec4};
use crate::error::{Error, Result};

pub const DEFAULT_EIG_TOL: f64 = 1e-12;
pub const DEFAULT_EIG_MAX_ITER: usize = 400;

const N: usize = 4;
const INVERSE_ITERATIONS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    /// Unit-norm eigenvector.
    pub vector: CVec4,
    /// `‖C v − λ v‖` for the unit vector.
    pub residual: f64,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Eigenpairs of a complex 4×4 matrix.
///
/// Fails only if the QR sweep does not deflate within `max_iter` iterations.
/// For diagonalizable input every returned pair satisfies
/// `‖C v − λ v‖ ≤ tol·‖C‖`; a defective eigenvalue gets its single
/// eigenvector repeated, and the residual field records how well it fits.
pub fn eig_small(c: &CMat4, tol: f64, max_iter: usize) -> Result<Vec<EigenPair>> {
    let norm = c.norm();
    if norm == 0.0 || !norm.is_finite() {
        if !norm.is_finite() {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        return Ok((0..N)
            .map(|k| {
                let mut v = [czero(); N];
                v[k] = Complex64::new(1.0, 0.0);
                EigenPair { value: czero(), vector: v, residual: 0.0 }
            })
            .collect());
    }
    let values = eigenvalues(c, tol, max_iter)?;
    Ok(eigenvectors(c, &values, tol))
}

fn hessenberg(c: &CMat4) -> [[Complex64; N]; N] {
    let mut h = c.0;
    for k in 0..N - 2 {
        let alpha_norm = (k + 1..N).map(|i| h[i][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * alpha_norm;
        let mut v = [czero(); N];
        for i in k + 1..N {
            v[i] = h[i][k];
        }
        v[k + 1] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← (I − 2vv*) H
        for col in 0..N {
            let s: Complex64 = (k + 1..N).map(|i| v[i].conj() * h[i][col]).sum();
            for i in k + 1..N {
                h[i][col] -= v[i] * s * 2.0;
            }
        }
        // H ← H (I − 2vv*)
        for row in h.iter_mut() {
            let s: Complex64 = (k + 1..N).map(|j| row[j] * v[j]).sum();
            for j in k + 1..N {
                row[j] -= s * v[j].conj() * 2.0;
            }
        }
        for i in k + 2..N {
            h[i][k] = czero();
        }
    }
    h
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, czero());
    }
    if an == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let phase = a / an;
    (an / r, phase * b.conj() / r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let e1 = mean + disc;
    let e2 = mean - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

fn eigenvalues(c: &CMat4, tol: f64, max_iter: usize) -> Result<[Complex64; N]> {
    let mut h = hessenberg(c);
    let hnorm = c.norm();
    let mut values = [czero(); N];
    let mut hi = N - 1;
    let mut total = 0usize;
    let mut stalled = 0usize;
    loop {
        if hi == 0 {
            values[0] = h[0][0];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let scale = h[l][l].norm() + h[l - 1][l - 1].norm();
            let scale = if scale == 0.0 { hnorm } else { scale };
            if h[l][l - 1].norm() <= tol * scale {
                h[l][l - 1] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            values[hi] = h[hi][hi];
            hi -= 1;
            stalled = 0;
            continue;
        }
        total += 1;
        stalled += 1;
        if total > max_iter {
            let residual = (1..=hi).map(|i| h[i][i - 1].norm()).fold(0.0, f64::max) / hnorm;
            return Err(Error::EigenNoConvergence { iterations: max_iter, residual });
        }
        let shift = if stalled.is_multiple_of(10) {
            h[hi][hi] + Complex64::new(0.75 * h[hi][hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        for i in l..=hi {
            h[i][i] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (cs, sn) = givens(h[k][k], h[k + 1][k]);
            for col in k..=hi {
                let x = h[k][col];
                let y = h[k + 1][col];
                h[k][col] = x * cs + sn * y;
                h[k + 1][col] = -sn.conj() * x + y * cs;
            }
            rots.push((k, cs, sn));
        }
        for &(k, cs, sn) in &rots {
            let top = (k + 2).min(hi);
            for row in h.iter_mut().take(top + 1).skip(l) {
                let x = row[k];
                let y = row[k + 1];
                row[k] = x * cs + y * sn.conj();
                row[k + 1] = -x * sn + y * cs;
            }
        }
        for i in l..=hi {
            h[i][i] += shift;
        }
    }
    Ok(values)
}

/// Solves `(C − σ I) y = v` by partial-pivoting elimination, replacing
/// vanishing pivots by `floor`.
fn shifted_solve(c: &CMat4, sigma: Complex64, v: &CVec4, floor: f64) -> CVec4 {
    let mut a = c.0;
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= sigma;
    }
    let mut b = *v;
    for k in 0..N {
        let p = (k..N).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        if p != k {
            a.swap(p, k);
            b.swap(p, k);
        }
        if a[k][k].norm() < floor {
            a[k][k] = Complex64::new(floor, 0.0);
        }
        for i in k + 1..N {
            let f = a[i][k] / a[k][k];
            for j in k..N {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut y = [czero(); N];
    for k in (0..N).rev() {
        let s: Complex64 = (k + 1..N).map(|j| a[k][j] * y[j]).sum();
        y[k] = (b[k] - s) / a[k][k];
    }
    y
}

fn vnorm(v: &CVec4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(u: &CVec4, v: &CVec4) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn normalized(v: CVec4) -> Option<CVec4> {
    let n = vnorm(&v);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(v.map(|z| z / n))
}

fn start_vector(seed: usize) -> CVec4 {
    let s = seed as f64;
    let mut v = [czero(); N];
    for (r, z) in v.iter_mut().enumerate() {
        let rf = r as f64;
        *z = Complex64::new(
            1.0 + 0.371 * rf + 0.113 * s * (rf + 1.0).sqrt(),
            0.231 * (rf + 1.0) * (s + 1.0) - 0.5 * (rf * s).sin(),
        );
    }
    v
}

fn rayleigh(c: &CMat4, v: &CVec4) -> (Complex64, f64) {
    let cv = c.apply(v);
    let lambda = inner(v, &cv);
    let r: CVec4 = std::array::from_fn(|i| cv[i] - lambda * v[i]);
    (lambda, vnorm(&r))
}

fn inverse_iteration(
    c: &CMat4,
    sigma: Complex64,
    seed: usize,
    against: &[CVec4],
    tol: f64,
) -> Option<EigenPair> {
    let cnorm = c.norm();
    let floor = f64::EPSILON * cnorm;
    let mut v = normalized(start_vector(seed))?;
    let mut best: Option<EigenPair> = None;
    for _ in 0..INVERSE_ITERATIONS {
        let mut y = shifted_solve(c, sigma, &v, floor);
        for u in against {
            let p = inner(u, &y);
            for i in 0..N {
                y[i] -= p * u[i];
            }
        }
        v = normalized(y)?;
        let (lambda, residual) = rayleigh(c, &v);
        let pair = EigenPair { value: lambda, vector: v, residual };
        if best.is_none_or(|b| residual < b.residual) {
            best = Some(pair);
        }
        if residual <= 0.1 * tol * cnorm {
            break;
        }
    }
    best
}

fn eigenvectors(c: &CMat4, values: &[Complex64; N], tol: f64) -> Vec<EigenPair> {
    let cnorm = c.norm();
    let cluster = 1e-6 * cnorm;
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(N);
    for (k, &sigma) in values.iter().enumerate() {
        let plain = inverse_iteration(c, sigma, k, &[], tol);
        let near: Vec<CVec4> = pairs
            .iter()
            .filter(|p| (p.value - sigma).norm() <= cluster)
            .map(|p| p.vector)
            .collect();
        let parallel = |v: &CVec4| near.iter().any(|u| inner(u, v).norm() > 1.0 - 1e-6);
        let chosen = match plain {
            Some(p) if !parallel(&p.vector) => Some(p),
            other => {
                let basis = orthonormal(&near);
                match inverse_iteration(c, sigma, k + N, &basis, tol) {
                    Some(q) if q.residual <= tol * cnorm || other.is_none() => Some(q),
                    _ => other,
                }
            }
        };
        let pair = chosen.unwrap_or_else(|| {
            // The shifted system annihilated every start vector; fall back to
            // the nearest accepted vector.
            let v = near.first().copied().unwrap_or_else(|| start_vector(k));
            let v = normalized(v).unwrap_or(v);
            let (_, residual) = rayleigh(c, &v);
            EigenPair { value: sigma, vector: v, residual }
        });
        pairs.push(pair);
    }
    pairs
}

fn orthonormal(vs: &[CVec4]) -> Vec<CVec4> {
    let mut out: Vec<CVec4> = Vec::new();
    for v in vs {
        let mut w = *v;
        for u in &out {
            let p = inner(u, &w);
            for i in 0..N {
                w[i] -= p * u[i];
            }
        }
        if let Some(w) = normalized(w) {
            if vnorm(&w) > 0.5 {
                out.push(w);
            }
        }
    }
    out
}
