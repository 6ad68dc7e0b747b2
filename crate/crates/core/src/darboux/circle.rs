//! Closed forms on discrete circles.
//!
//! With `ω = e^{2πi/M}` and `s = √(1 − 4μ)` the parallel sections of the
//! circle `x_n = j ωⁿ` are built from the powers of
//! `½(ω(1 ± s) + (1 ∓ s))` and `½(ω̄(1 ∓ s) + (1 ± s))`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{closure_tolerance, cross_ratio, DarbouxResult};
use crate::curve::{circle_weight, make_planar_circle, PolarisedCurve};
use crate::error::{Error, Result};
use crate::homog::HVec2;
use crate::quat::Quaternion;

/// Denominators below this count as zero in the closed forms.
const DENOM_TOL: f64 = 1e-14;

/// `√(1 − 4μ)` on the principal branch, `+i√(4μ − 1)` for `μ > 1/4`.
pub fn circle_s(mu: f64) -> Complex64 {
    let d = 1.0 - 4.0 * mu;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

fn omega(m: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / m as f64)
}

/// `μ = ¼(1 − cot²(π/M)·tan²(kπ/(ℓM)))`, where the multipliers of the circle
/// over its `ℓ`-fold cover coincide.
pub fn circle_resonance_mu(m: usize, k: i64, l: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("M must be at least 3, got {m}")));
    }
    if l == 0 {
        return Err(Error::InvalidParameter("ℓ must be at least 1".into()));
    }
    // kπ/(ℓM) an odd multiple of π/2
    let lm = (l * m) as i64;
    if (2 * k) % lm == 0 && ((2 * k) / lm) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "kπ/(ℓM) is an odd multiple of π/2 for (M, k, ℓ) = ({m}, {k}, {l})"
        )));
    }
    let cot = 1.0 / (PI / m as f64).tan();
    let tan = (k as f64 * PI / (l * m) as f64).tan();
    Ok(0.25 * (1.0 - cot * cot * tan * tan))
}

/// Constants of integration of a circle section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleConstants {
    pub c0m: Complex64,
    pub c0p: Complex64,
    pub c1m: Complex64,
    pub c1p: Complex64,
}

/// The parallel section `(a_n, b_n)` of `D^μ` over `x_n = j ωⁿ`, in the
/// ambient frame. `x̂_n = x_n + a_n b_n⁻¹`.
pub fn circle_section(m: usize, mu: f64, c: &CircleConstants, n: usize) -> HVec2 {
    let w = omega(m);
    let s = circle_s(mu);
    let one = Complex64::new(1.0, 0.0);
    let nn = n as i32;
    let a0m = ((w.conj() * (one + s) + (one - s)) * 0.5).powi(nn);
    let a0p = ((w.conj() * (one - s) + (one + s)) * 0.5).powi(nn);
    let a1m = ((w * (one - s) + (one + s)) * 0.5).powi(nn);
    let a1p = ((w * (one + s) + (one - s)) * 0.5).powi(nn);
    let wn = w.powi(nn);
    let a = Quaternion::from_complex(c.c0m * a0m + c.c0p * a0p) + Quaternion::j_times(c.c1m * a1m + c.c1p * a1p);
    let b0 = -(c.c1m * (one - s) * a1m + c.c1p * (one + s) * a1p) * wn.conj() * 0.5;
    let b1 = (c.c0m * (one + s) * a0m + c.c0p * (one - s) * a0p) * wn * 0.5;
    HVec2::new(a, Quaternion::from_complex(b0) + Quaternion::j_times(b1))
}

/// The jk-plane Darboux transform of the discrete circle `x_n = j ωⁿ` with
/// `c0± = 0`:
/// `x̂_n = j·(−ωⁿ(c1⁺(1−s)A⁺ⁿ + c1⁻(1+s)A⁻ⁿ) / (c1⁺(1+s)A⁺ⁿ + c1⁻(1−s)A⁻ⁿ))`
/// with `A± = ½(ω(1±s) + (1∓s))`.
pub fn circle_closed_form(m: usize, mu: f64, c1m: Complex64, c1p: Complex64, n: usize) -> Result<Quaternion> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("M must be at least 3, got {m}")));
    }
    let w = omega(m);
    let s = circle_s(mu);
    let one = Complex64::new(1.0, 0.0);
    let nn = n as i32;
    let ap = ((w * (one + s) + (one - s)) * 0.5).powi(nn);
    let am = ((w * (one - s) + (one + s)) * 0.5).powi(nn);
    let num = -w.powi(nn) * (c1p * (one - s) * ap + c1m * (one + s) * am);
    let den = c1p * (one + s) * ap + c1m * (one - s) * am;
    if den.norm() <= DENOM_TOL * num.norm().max(1.0) {
        return Err(Error::HitsInfinity { vertex: n });
    }
    Ok(Quaternion::j_times(num / den))
}

/// Which closed form a planar circleton uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircletonBranch {
    /// Generic: two exponentials mixed by `χ`.
    Chi(Complex64),
    /// `c⁻ = 0`, reached when `2√μ = e^{iτ}(1 + s)`.
    Single,
}

/// `χ = (−2√μ + e^{iτ}(1−s)) / (2√μ − e^{iτ}(1+s))`, or the single-exponential
/// branch when the denominator vanishes.
pub fn circleton_chi(mu: f64, tau: f64) -> Result<CircletonBranch> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("circletons need μ > 0, got {mu}")));
    }
    let s = circle_s(mu);
    let one = Complex64::new(1.0, 0.0);
    let e = Complex64::from_polar(1.0, tau);
    let r = 2.0 * mu.sqrt();
    let num = -r + e * (one - s);
    let den = r - e * (one + s);
    if den.norm() <= 1e-12 {
        return Ok(CircletonBranch::Single);
    }
    Ok(CircletonBranch::Chi(num / den))
}

/// Bicycle transform of the planar circle `x_n = ωⁿ` with `|x̂ − x|² = 1/μ`:
/// `x̂_n = −ωⁿ(χ(1−s)A⁺ⁿ + (1+s)A⁻ⁿ) / (χ(1+s)A⁺ⁿ + (1−s)A⁻ⁿ)`.
pub fn circleton_closed_form(m: usize, mu: f64, tau: f64, n: usize) -> Result<Complex64> {
    let w = omega(m);
    let s = circle_s(mu);
    let one = Complex64::new(1.0, 0.0);
    let nn = n as i32;
    let wn = w.powi(nn);
    match circleton_chi(mu, tau)? {
        CircletonBranch::Single => Ok(-wn * (one - s) / (one + s)),
        CircletonBranch::Chi(chi) => {
            let ap = ((w * (one + s) + (one - s)) * 0.5).powi(nn);
            let am = ((w * (one - s) + (one + s)) * 0.5).powi(nn);
            let num = -wn * (chi * (one - s) * ap + (one + s) * am);
            let den = chi * (one + s) * ap + (one - s) * am;
            if den.norm() <= DENOM_TOL * num.norm().max(1.0) {
                return Err(Error::HitsInfinity { vertex: n });
            }
            Ok(num / den)
        }
    }
}

/// The discrete circleton over the `ℓ`-fold cover of the planar circle
/// `x_n = ωⁿ`, at `μ = circle_resonance_mu(M, k, ℓ)`.
pub fn discrete_circleton(m: usize, k: i64, l: usize, tau: f64) -> Result<DarbouxResult> {
    if !(k > 0 && (l as i64) > k) {
        return Err(Error::InvalidParameter(format!("circletons need ℓ > k > 0, got (k, ℓ) = ({k}, {l})")));
    }
    if !tau.is_finite() {
        return Err(Error::InvalidParameter("τ must be finite".into()));
    }
    let mu = circle_resonance_mu(m, k, l)?;
    let base = make_planar_circle(m)?;
    let cover = base.cover(l)?;
    let total = l * m;
    let xhat = (0..=total)
        .map(|n| circleton_closed_form(m, mu, tau, n).map(Quaternion::from_complex))
        .collect::<Result<Vec<_>>>()?;

    let weight = circle_weight(m);
    let mut max_cr: f64 = 0.0;
    let mut max_concircular: f64 = 0.0;
    let mut bicycle: f64 = 0.0;
    for n in 0..total {
        let (xi, xj) = (cover.vertex(n), cover.vertex(n + 1));
        let cr = cross_ratio(xi, xj, xhat[n + 1], xhat[n])?;
        max_cr = max_cr.max((cr - Quaternion::real(mu / weight)).norm());
        max_concircular = max_concircular.max(cr.imag().norm());
        bicycle = bicycle.max(((xhat[n] - xi).norm_sqr() - 1.0 / mu).abs());
        bicycle = bicycle.max(((xhat[n + 1] - xhat[n]).norm_sqr() - 1.0 / weight).abs());
    }
    let closure_error = (xhat[total] - xhat[0]).norm();
    let closed = closure_error <= closure_tolerance(&base);
    let transform = PolarisedCurve::from_parts_unchecked(xhat[..total].to_vec(), vec![weight; total], true);
    Ok(DarbouxResult {
        transform,
        mu,
        max_cross_ratio_residual: max_cr,
        max_concircularity_residual: max_concircular,
        max_riccati_residual: 0.0,
        sphere_residual: None,
        bicycle_residual: Some(bicycle),
        hit_infinity: false,
        closed,
        closure_error: Some(closure_error),
        endpoint: Some(xhat[total]),
        start_vertex: 0,
        periods: l,
    })
}
