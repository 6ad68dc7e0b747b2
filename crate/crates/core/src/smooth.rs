//! Smooth curves as an oracle for the discrete theory.
//!
//! A parallel section `(α, β)` of the smooth connection solves
//! `α′ = −x′β`, `β′ = −μ(x^d)′α` with `(x^d)′ = (1/m)(x′)⁻¹`, equivalently
//! `α″ = x″(x′)⁻¹α′ + (μ/m)α`. Its projection `x̂ = x + αβ⁻¹` solves the
//! Riccati equation `x̂′ = μ(x̂ − x)(x^d)′(x̂ − x)`.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;

use crate::darboux::{circle_s, circleton_chi, CircletonBranch};
use crate::error::{Error, Result};
use crate::homog::HVec2;
use crate::quat::{eps_zero, Quaternion};

/// `|T|` above this aborts RK4 integration.
pub const BLOW_UP_THRESHOLD: f64 = 1e6;

type QFn = Arc<dyn Fn(f64) -> Quaternion + Send + Sync>;
type RFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A curve given by analytic callbacks for `x`, `x′`, `x″` and the
/// polarisation `m`.
#[derive(Clone)]
pub struct AnalyticCurve {
    pub x: QFn,
    pub dx: QFn,
    pub ddx: QFn,
    pub m: RFn,
}

impl AnalyticCurve {
    pub fn new(x: QFn, dx: QFn, ddx: QFn, m: RFn) -> Self {
        AnalyticCurve { x, dx, ddx, m }
    }

    /// `x = j e^{it}`, `m = 1`.
    pub fn circle() -> Self {
        let e = |t: f64| Complex64::from_polar(1.0, t);
        AnalyticCurve {
            x: Arc::new(move |t| Quaternion::j_times(e(t))),
            dx: Arc::new(move |t| Quaternion::j_times(Complex64::i() * e(t))),
            ddx: Arc::new(move |t| Quaternion::j_times(-e(t))),
            m: Arc::new(|_| 1.0),
        }
    }

    /// `x = e^{it}` in `span{1, i}`, `m = 1`.
    pub fn planar_circle() -> Self {
        let e = |t: f64| Complex64::from_polar(1.0, t);
        AnalyticCurve {
            x: Arc::new(move |t| Quaternion::from_complex(e(t))),
            dx: Arc::new(move |t| Quaternion::from_complex(Complex64::i() * e(t))),
            ddx: Arc::new(move |t| Quaternion::from_complex(-e(t))),
            m: Arc::new(|_| 1.0),
        }
    }

    /// `(x^d)′ = (1/m)(x′)⁻¹`.
    pub fn dual_derivative(&self, t: f64) -> Result<Quaternion> {
        let d = (self.dx)(t);
        let inv = d.try_inv().map_err(|_| Error::Degenerate("x′"))?;
        Ok(inv / (self.m)(t))
    }
}

impl std::fmt::Debug for AnalyticCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("AnalyticCurve")
    }
}

/// `(α′, α″)` with `α″ = x″(x′)⁻¹α′ + (μ/m)α`.
pub fn smooth_parallel_rhs(
    t: f64,
    alpha: Quaternion,
    dalpha: Quaternion,
    mu: f64,
    curve: &AnalyticCurve,
) -> Result<(Quaternion, Quaternion)> {
    let inv = (curve.dx)(t).try_inv().map_err(|_| Error::Degenerate("x′"))?;
    Ok((dalpha, (curve.ddx)(t) * inv * dalpha + alpha * (mu / (curve.m)(t))))
}

/// `(α′, β′) = (−x′β, −μ(x^d)′α)`.
pub fn section_rhs(t: f64, phi: HVec2, mu: f64, curve: &AnalyticCurve) -> Result<HVec2> {
    Ok(HVec2::new(-((curve.dx)(t) * phi.bottom), -(curve.dual_derivative(t)? * phi.top) * mu))
}

/// `x̂′ = μ(x̂ − x)(x^d)′(x̂ − x)`.
pub fn riccati_rhs(t: f64, xhat: Quaternion, mu: f64, curve: &AnalyticCurve) -> Result<Quaternion> {
    let d = xhat - (curve.x)(t);
    Ok(d * curve.dual_derivative(t)? * d * mu)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid(format!("need at least two points, got {}", grid.len())));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid point".into()));
    }
    if let Some(k) = grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!("grid not strictly increasing at index {}", k + 1)));
    }
    Ok(())
}

/// `n + 1` equally spaced points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..=n).map(|k| if k == n { b } else { a + h * k as f64 }).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub points: Vec<Quaternion>,
    /// Integration stopped early because `|x̂ − x|` exceeded
    /// [`BLOW_UP_THRESHOLD`].
    pub blew_up: bool,
}

/// Classical RK4 for the Riccati equation on `grid`, starting from
/// `x̂(grid[0]) = xhat0`.
pub fn rk4_darboux(curve: &AnalyticCurve, mu: f64, xhat0: Quaternion, grid: &[f64]) -> Result<Trajectory> {
    check_grid(grid)?;
    let f = |t: f64, y: Quaternion| riccati_rhs(t, y, mu, curve);
    let mut y = xhat0;
    let mut points = vec![y];
    let mut blew_up = false;
    for w in grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let k1 = f(t, y)?;
        let k2 = f(t + h / 2.0, y + k1 * (h / 2.0))?;
        let k3 = f(t + h / 2.0, y + k2 * (h / 2.0))?;
        let k4 = f(t + h, y + k3 * h)?;
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if !y.is_finite() || (y - (curve.x)(w[1])).norm() > BLOW_UP_THRESHOLD {
            blew_up = true;
            break;
        }
        points.push(y);
    }
    Ok(Trajectory { t: grid[..points.len()].to_vec(), points, blew_up })
}

/// RK4 for the first-order section system.
pub fn rk4_section(curve: &AnalyticCurve, mu: f64, phi0: HVec2, grid: &[f64]) -> Result<Vec<HVec2>> {
    check_grid(grid)?;
    let f = |t: f64, y: HVec2| section_rhs(t, y, mu, curve);
    let mut y = phi0;
    let mut out = vec![y];
    for w in grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let k1 = f(t, y)?;
        let k2 = f(t + h / 2.0, y + k1.scale(h / 2.0))?;
        let k3 = f(t + h / 2.0, y + k2.scale(h / 2.0))?;
        let k4 = f(t + h, y + k3.scale(h))?;
        y = y + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
        out.push(y);
    }
    Ok(out)
}

/// Constants of integration for parallel sections over the circle
/// `x = j e^{it}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothCircleParams {
    pub mu: f64,
    pub c0m: Complex64,
    pub c0p: Complex64,
    pub c1m: Complex64,
    pub c1p: Complex64,
}

impl SmoothCircleParams {
    /// Constants with `c0± = 0`, giving transforms in the jk-plane.
    pub fn planar(mu: f64, c1m: Complex64, c1p: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        SmoothCircleParams { mu, c0m: z, c0p: z, c1m, c1p }
    }

    pub fn s(&self) -> Complex64 {
        circle_s(self.mu)
    }

    /// `Re(c0⁻c̄1⁻ − c0⁺c̄1⁺)`, which vanishes for transforms in `Im H`.
    pub fn im_h_defect(&self) -> f64 {
        (self.c0m * self.c1m.conj() - self.c0p * self.c1p.conj()).re
    }
}

/// The parallel section `(α, β)` at `t`.
pub fn smooth_circle_section(t: f64, p: &SmoothCircleParams) -> HVec2 {
    let s = p.s();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let a0m = (i * 0.5 * (-one - s) * t).exp();
    let a0p = (i * 0.5 * (-one + s) * t).exp();
    let a1m = (i * 0.5 * (one - s) * t).exp();
    let a1p = (i * 0.5 * (one + s) * t).exp();
    let e = Complex64::from_polar(1.0, t);
    let alpha = Quaternion::from_complex(p.c0m * a0m + p.c0p * a0p) + Quaternion::j_times(p.c1m * a1m + p.c1p * a1p);
    let b0 = -(p.c1m * (one - s) * a1m + p.c1p * (one + s) * a1p) * e.conj() * 0.5;
    let b1 = (p.c0m * (one + s) * a0m + p.c0p * (one - s) * a0p) * e * 0.5;
    HVec2::new(alpha, Quaternion::from_complex(b0) + Quaternion::j_times(b1))
}

/// `x̂(t) = x(t) + αβ⁻¹` over the circle `x = j e^{it}`. With `c0± = 0` this
/// is `j·(−e^{it}(c1⁺(1−s)e^{ist} + c1⁻(1+s)) / (c1⁺(1+s)e^{ist} + c1⁻(1−s)))`.
pub fn smooth_circle_darboux(t: f64, p: &SmoothCircleParams) -> Result<Quaternion> {
    let phi = smooth_circle_section(t, p);
    if phi.bottom.norm_sqr() <= eps_zero() * phi.top.norm_sqr().max(1.0) {
        return Err(Error::HitsInfinity { vertex: 0 });
    }
    let x = Quaternion::j_times(Complex64::from_polar(1.0, t));
    Ok(x + phi.top * phi.bottom.try_inv()?)
}

/// Smooth resonances of the circle: `μ = (1 − k²)/4`.
pub fn smooth_circle_resonance_mu(k: i64) -> f64 {
    (1.0 - (k * k) as f64) / 4.0
}

/// Circletons over the `ℓ`-fold cover: `μ = (ℓ² − k²)/(4ℓ²)`.
pub fn smooth_circleton_mu(k: i64, l: usize) -> f64 {
    let l2 = (l * l) as f64;
    (l2 - (k * k) as f64) / (4.0 * l2)
}

/// The bicycle transform of the planar circle `x = e^{it}`:
/// `x̂(t) = e^{it}(χ(s−1)e^{ist} − (s+1)) / (χ(s+1)e^{ist} − (s−1))`,
/// with `|x̂ − x|² = 1/μ`.
pub fn smooth_circleton(t: f64, mu: f64, tau: f64) -> Result<Complex64> {
    let s = circle_s(mu);
    let one = Complex64::new(1.0, 0.0);
    let e = Complex64::from_polar(1.0, t);
    match circleton_chi(mu, tau)? {
        CircletonBranch::Single => Ok(e * (s - one) / (s + one)),
        CircletonBranch::Chi(chi) => {
            let es = (Complex64::i() * s * t).exp();
            let num = chi * (s - one) * es - (s + one);
            let den = chi * (s + one) * es - (s - one);
            if den.norm() <= 1e-14 * num.norm().max(1.0) {
                return Err(Error::HitsInfinity { vertex: 0 });
            }
            Ok(e * num / den)
        }
    }
}

/// Writes `t,w,x,y,z` rows.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["t", "w", "x", "y", "z"])?;
    for (t, q) in traj.t.iter().zip(&traj.points) {
        w.serialize((t, q.w, q.x, q.y, q.z))?;
    }
    w.flush()?;
    Ok(())
}

/// Samples of a closed-form curve `f` on `grid` as a trajectory.
pub fn sample(grid: &[f64], f: impl Fn(f64) -> Result<Quaternion>) -> Result<Trajectory> {
    let points = grid.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { t: grid.to_vec(), points, blew_up: false })
}

/// Period of the `ℓ`-fold cover of the unit-speed circle.
pub fn cover_period(l: usize) -> f64 {
    2.0 * PI * l as f64
}
