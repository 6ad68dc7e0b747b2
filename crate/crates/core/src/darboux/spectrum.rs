//! Multipliers of the monodromy, closed transforms and resonance search.
//!
//! The complexified monodromy `C` of a quaternionic matrix commutes with the
//! right `j` action, so its spectrum is closed under conjugation: an
//! eigenvector `v` for `h` gives `vj` for `h̄`, and both span the same
//! quaternionic line. Multipliers are reported by their representative with
//! `Im h ≥ 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{darboux_transform, DarbouxResult};
use crate::connection::{check_nondegenerate_all, monodromy};
use crate::curve::PolarisedCurve;
use crate::error::{Error, Result};
use crate::homog::{
    decomplexify_vector, eig_small, same_line, EigenPair, HVec2, DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL,
};
use crate::quat::{eps_zero, Quaternion};

/// Multipliers coincide when the relative spread of the spectrum is below
/// this.
pub const RESONANCE_TOL: f64 = 1e-8;

const GOLDEN_TOL: f64 = 1e-10;
const SAME_LINE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiplierSpectrum {
    /// Canonical multipliers, one per eigenline.
    pub multipliers: Vec<Complex64>,
    /// Eigen-sections at the base vertex, gauged frame, unit norm.
    pub sections: Vec<HVec2>,
    /// All four eigenvalues of the complexified monodromy.
    pub eigenvalues: Vec<Complex64>,
    /// Largest `‖Mφ − φh‖/‖M‖` over the returned sections.
    pub max_residual: f64,
    pub mu: f64,
    pub base_vertex: usize,
    /// `max |λ_a − λ_b| / max |λ|` over the complex spectrum.
    pub gap: f64,
    pub resonant: bool,
}

fn canonical(h: Complex64) -> Complex64 {
    if h.im < 0.0 {
        h.conj()
    } else {
        h
    }
}

/// Relative spread of a spectrum.
pub fn multiplier_gap(values: &[Complex64]) -> f64 {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut spread: f64 = 0.0;
    for (a, x) in values.iter().enumerate() {
        for y in &values[a + 1..] {
            spread = spread.max((x - y).norm());
        }
    }
    spread / scale
}

/// Pairs each eigenvalue with the one closest to its conjugate.
fn conjugate_pairs(pairs: &[EigenPair]) -> Vec<(usize, usize)> {
    let mut used = vec![false; pairs.len()];
    let mut out = Vec::new();
    for a in 0..pairs.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        let target = pairs[a].value.conj();
        let partner = (0..pairs.len())
            .filter(|&b| !used[b])
            .min_by(|&x, &y| (pairs[x].value - target).norm().total_cmp(&(pairs[y].value - target).norm()));
        if let Some(b) = partner {
            used[b] = true;
            out.push((a, b));
        }
    }
    out
}

/// Eigen-analysis of the monodromy based at `base_vertex`.
pub fn multiplier_spectrum(curve: &PolarisedCurve, mu: f64, base_vertex: usize) -> Result<MultiplierSpectrum> {
    let mono = monodromy(curve, mu, base_vertex)?;
    let mnorm = mono.matrix.norm();
    let pairs = eig_small(&mono.matrix.complexify(), DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITER)?;
    let eigenvalues: Vec<Complex64> = pairs.iter().map(|p| p.value).collect();
    let gap = multiplier_gap(&eigenvalues);

    let section = |p: &EigenPair| {
        let v = decomplexify_vector(&p.vector);
        v.scale(1.0 / v.norm())
    };
    let residual = |phi: HVec2, h: Complex64| {
        (mono.matrix.apply(phi) - phi.scale_right(Quaternion::from_complex(h))).norm() / mnorm.max(f64::MIN_POSITIVE)
    };

    let mut multipliers = Vec::new();
    let mut sections: Vec<HVec2> = Vec::new();
    for (a, b) in conjugate_pairs(&pairs) {
        let h = canonical(pairs[a].value);
        // Prefer the member of the pair, then any eigenvector with the same
        // multiplier, whose line is new.
        let mut candidates: Vec<&EigenPair> = vec![&pairs[a], &pairs[b]];
        candidates.extend(pairs.iter().filter(|p| {
            (canonical(p.value) - h).norm() <= 1e-6 * h.norm().max(1.0)
        }));
        candidates.sort_by(|x, y| x.residual.total_cmp(&y.residual));
        let fresh = candidates
            .iter()
            .map(|p| section(p))
            .find(|phi| sections.iter().all(|s| !same_line(*s, *phi, SAME_LINE_TOL)));
        let phi = fresh.unwrap_or_else(|| section(candidates[0]));
        multipliers.push(h);
        sections.push(phi);
    }
    let max_residual = multipliers
        .iter()
        .zip(&sections)
        .map(|(h, phi)| residual(*phi, *h))
        .fold(0.0, f64::max);

    Ok(MultiplierSpectrum {
        multipliers,
        sections,
        eigenvalues,
        max_residual,
        mu,
        base_vertex,
        gap,
        resonant: gap <= RESONANCE_TOL,
    })
}

/// Closed transforms from the eigen-sections of the monodromy at vertex 0.
///
/// A section `(a, b)` with `|b| ≤ εzero` passes through infinity at the base
/// vertex and is returned with `hit_infinity` set and no vertices.
pub fn closed_transforms(curve: &PolarisedCurve, mu: f64) -> Result<(MultiplierSpectrum, Vec<DarbouxResult>)> {
    let spectrum = multiplier_spectrum(curve, mu, 0)?;
    let mut results = Vec::with_capacity(spectrum.sections.len());
    for phi in &spectrum.sections {
        if phi.bottom.norm_sqr() <= eps_zero() {
            results.push(DarbouxResult {
                transform: PolarisedCurve::from_parts_unchecked(Vec::new(), Vec::new(), false),
                mu,
                max_cross_ratio_residual: 0.0,
                max_concircularity_residual: 0.0,
                max_riccati_residual: 0.0,
                sphere_residual: None,
                bicycle_residual: None,
                hit_infinity: true,
                closed: false,
                closure_error: None,
                endpoint: None,
                start_vertex: 0,
                periods: 1,
            });
            continue;
        }
        let xhat0 = phi.top * phi.bottom.try_inv()?;
        results.push(darboux_transform(curve, mu, xhat0, 0)?);
    }
    Ok((spectrum, results))
}

fn gap_at(curve: &PolarisedCurve, mu: f64) -> Result<f64> {
    Ok(multiplier_spectrum(curve, mu, 0)?.gap)
}

/// Values of `μ` in `[lo, hi]` where the multipliers coincide.
///
/// The gap is sampled on `grid_steps + 1` points; every local minimum is
/// refined by golden-section search to width 1e-10 and kept if the gap there
/// is within [`RESONANCE_TOL`] plus what the bracket width can explain.
pub fn find_resonances(curve: &PolarisedCurve, lo: f64, hi: f64, grid_steps: usize) -> Result<Vec<f64>> {
    if !curve.is_closed() {
        return Err(Error::OpenCurve);
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!("bad μ range [{lo}, {hi}]")));
    }
    if let Some(&m) = curve.weights().iter().find(|&&m| m >= lo && m <= hi) {
        return Err(Error::InvalidParameter(format!("μ range [{lo}, {hi}] contains the edge weight {m}")));
    }
    check_nondegenerate_all(curve, lo)?;
    if lo == hi || grid_steps == 0 {
        return Ok(if gap_at(curve, lo)? <= RESONANCE_TOL { vec![lo] } else { Vec::new() });
    }

    let h = (hi - lo) / grid_steps as f64;
    let grid: Vec<f64> = (0..=grid_steps).map(|k| lo + h * k as f64).collect();
    let gaps = grid.iter().map(|&mu| gap_at(curve, mu)).collect::<Result<Vec<_>>>()?;
    let slope = gaps.windows(2).map(|w| (w[1] - w[0]).abs() / h).fold(0.0, f64::max);

    let mut found: Vec<f64> = Vec::new();
    for k in 0..=grid_steps {
        let left = if k == 0 { f64::INFINITY } else { gaps[k - 1] };
        let right = if k == grid_steps { f64::INFINITY } else { gaps[k + 1] };
        if !(gaps[k] <= left && gaps[k] < right) {
            continue;
        }
        let a = grid[k.saturating_sub(1)];
        let b = grid[(k + 1).min(grid_steps)];
        let (mu, g) = golden_min(|x| gap_at(curve, x), a, b)?;
        if g <= RESONANCE_TOL + slope * GOLDEN_TOL && found.iter().all(|f| (f - mu).abs() > 2.0 * GOLDEN_TOL) {
            found.push(mu);
        }
    }
    Ok(found)
}

fn golden_min(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [(mid, f(mid)?), (c, fc), (d, fd)];
    Ok(candidates.into_iter().min_by(|x, y| x.1.total_cmp(&y.1)).unwrap())
}
