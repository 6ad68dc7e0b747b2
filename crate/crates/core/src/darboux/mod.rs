//! Darboux transforms of discrete polarised curves.
//!
//! A transform is carried by `T_n = x̂_n − x_n`, which obeys the discrete
//! Riccati recurrence `T_j = (T_i + dx)(1 + μ dxd T_i)⁻¹`. Every quad
//! `(x_i, x_j, x̂_j, x̂_i)` then has real cross-ratio `μ/m`.

mod bicycle;
mod circle;
mod sphere;
mod spectrum;

use serde::{Deserialize, Serialize};

use crate::connection::{check_nondegenerate, traversal_steps};
use crate::curve::{edge_data, EdgeData, PolarisedCurve};
use crate::error::{Error, Result};
use crate::quat::{eps_zero, Quaternion};

pub use bicycle::{bicycle_transform, bicycle_transform_with, bicycle_residuals, BicycleResiduals};
pub use circle::{
    circle_closed_form, circle_resonance_mu, circle_s, circle_section, circleton_chi, circleton_closed_form,
    discrete_circleton, CircleConstants, CircletonBranch,
};
pub use spectrum::{
    closed_transforms, find_resonances, multiplier_gap, multiplier_spectrum, MultiplierSpectrum,
    RESONANCE_TOL,
};
pub use sphere::{sphere_membership, CoordinatePlane, SphereReport};

/// Relative closure tolerance, scaled by `max(1, diameter)` of the base curve.
pub const CLOSURE_TOL: f64 = 1e-8;

/// Coordinates within this of zero count as zero when deciding whether the
/// base curve lies in `Im H`.
pub const IMAGINARY_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct DarbouxResult {
    /// `x̂`, carrying the weights of `x`. Vertex `n` sits over vertex `n` of
    /// the base curve (or of its cover, if more than one period was
    /// traversed). Partial if `hit_infinity`.
    pub transform: PolarisedCurve,
    pub mu: f64,
    /// `max |cr − μ/m|` over all quads.
    pub max_cross_ratio_residual: f64,
    /// `max |Im cr|`, concircularity defect.
    pub max_concircularity_residual: f64,
    /// `max ‖T_i − T_j + dx − μ T_j dxd T_i‖`.
    pub max_riccati_residual: f64,
    /// `max |Re x̂_n|` when the base curve lies in `Im H`.
    pub sphere_residual: Option<f64>,
    /// Bicycle conservation defect, set by the bicycle constructors.
    pub bicycle_residual: Option<f64>,
    pub hit_infinity: bool,
    /// Closed curves only: `|x̂_end − x̂_start| ≤ closure tolerance`.
    pub closed: bool,
    pub closure_error: Option<f64>,
    /// The propagated point after the full traversal of a closed curve,
    /// which equals `x̂` at the start vertex when the transform closes.
    pub endpoint: Option<Quaternion>,
    pub start_vertex: usize,
    pub periods: usize,
}

/// The diagnostics object emitted alongside a transform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub mu: f64,
    pub max_cross_ratio_residual: f64,
    pub sphere_residual: Option<f64>,
    pub hit_infinity: bool,
    pub closed: bool,
    pub closure_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bicycle_residual: Option<f64>,
}

impl DarbouxResult {
    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            mu: self.mu,
            max_cross_ratio_residual: self.max_cross_ratio_residual,
            sphere_residual: self.sphere_residual,
            hit_infinity: self.hit_infinity,
            closed: self.closed,
            closure_error: self.closure_error,
            bicycle_residual: self.bicycle_residual,
        }
    }

    pub fn vertices(&self) -> &[Quaternion] {
        self.transform.vertices()
    }
}

/// `|x̂_end − x̂_0|` tolerance for a transform of `curve`.
pub fn closure_tolerance(curve: &PolarisedCurve) -> f64 {
    CLOSURE_TOL * curve.diameter().max(1.0)
}

/// One step of the discrete Riccati recurrence along `edge`.
pub fn riccati_step(t_i: Quaternion, edge: &EdgeData, mu: f64) -> Result<Quaternion> {
    let num = t_i + edge.dx;
    let den = Quaternion::ONE + edge.dxd * t_i * mu;
    if den.norm() <= eps_zero() * num.norm().max(1.0) {
        return Err(Error::HitsInfinity { vertex: edge.j });
    }
    Ok(num * den.try_inv()?)
}

/// `‖T_i − T_j + dx − μ T_j dxd T_i‖`.
pub fn riccati_residual(t_i: Quaternion, t_j: Quaternion, edge: &EdgeData, mu: f64) -> f64 {
    (t_i - t_j + edge.dx - t_j * edge.dxd * t_i * mu).norm()
}

/// `(x_i − x_j)(x_j − x̂_j)⁻¹(x̂_j − x̂_i)(x̂_i − x_i)⁻¹`.
pub fn cross_ratio(xi: Quaternion, xj: Quaternion, xhj: Quaternion, xhi: Quaternion) -> Result<Quaternion> {
    let inv = |q: Quaternion, what: &'static str| q.try_inv().map_err(|_| Error::Degenerate(what));
    let a = xi - xj;
    if a.norm_sqr() < eps_zero() {
        return Err(Error::Degenerate("x_i − x_j"));
    }
    Ok(a * inv(xj - xhj, "x_j − x̂_j")? * (xhj - xhi) * inv(xhi - xi, "x̂_i − x_i")?)
}

/// Propagates `x̂_start` around one period (closed curves) or to the end of
/// the curve (open curves).
pub fn darboux_transform(
    curve: &PolarisedCurve,
    mu: f64,
    xhat_start: Quaternion,
    start_vertex: usize,
) -> Result<DarbouxResult> {
    darboux_transform_with(curve, mu, xhat_start, start_vertex, 1)
}

/// As [`darboux_transform`], traversing `periods` periods of a closed curve.
pub fn darboux_transform_with(
    curve: &PolarisedCurve,
    mu: f64,
    xhat_start: Quaternion,
    start_vertex: usize,
    periods: usize,
) -> Result<DarbouxResult> {
    if !mu.is_finite() || !xhat_start.is_finite() {
        return Err(Error::InvalidParameter("μ and the initial point must be finite".into()));
    }
    if curve.is_closed() && periods == 0 {
        return Err(Error::InvalidParameter("at least one period is needed".into()));
    }
    let steps = traversal_steps(curve, start_vertex, periods)?;
    let n = curve.vertex_count();
    let edge_of = |s: usize| if curve.is_closed() { (start_vertex + s) % n } else { start_vertex + s };
    for s in 0..steps.min(curve.edge_count()) {
        check_nondegenerate(curve, edge_of(s), mu)?;
    }
    let t0 = xhat_start - curve.vertex(start_vertex);
    if t0.norm_sqr() < eps_zero() {
        return Err(Error::InvalidParameter(format!(
            "initial point coincides with base vertex {start_vertex}"
        )));
    }

    let mut path = Vec::with_capacity(steps + 1);
    path.push(xhat_start);
    let mut t = t0;
    let mut hit_infinity = false;
    let mut max_cr: f64 = 0.0;
    let mut max_concircular: f64 = 0.0;
    let mut max_riccati: f64 = 0.0;
    for s in 0..steps {
        let e = edge_data(curve, edge_of(s))?;
        let t_next = match riccati_step(t, &e, mu) {
            Ok(v) => v,
            Err(Error::HitsInfinity { .. }) => {
                hit_infinity = true;
                break;
            }
            Err(other) => return Err(other),
        };
        max_riccati = max_riccati.max(riccati_residual(t, t_next, &e, mu));
        let (xi, xj) = (curve.vertex(e.i), curve.vertex(e.j));
        let (xhi, xhj) = (xi + t, xj + t_next);
        match cross_ratio(xi, xj, xhj, xhi) {
            Ok(cr) => {
                max_cr = max_cr.max((cr - Quaternion::real(mu / e.m)).norm());
                max_concircular = max_concircular.max(cr.imag().norm());
            }
            Err(_) => {
                max_cr = f64::INFINITY;
                max_concircular = f64::INFINITY;
            }
        }
        path.push(xhj);
        t = t_next;
    }

    let sphere_residual = curve
        .is_imaginary(IMAGINARY_TOL)
        .then(|| path.iter().map(|v| v.w.abs()).fold(0.0, f64::max));

    let (closure_error, closed) = if curve.is_closed() && !hit_infinity {
        let err = (path[steps] - path[0]).norm();
        (Some(err), err <= closure_tolerance(curve))
    } else {
        (None, false)
    };

    let transform = assemble(curve, &path, start_vertex, periods, hit_infinity);
    Ok(DarbouxResult {
        transform,
        mu,
        max_cross_ratio_residual: max_cr,
        max_concircularity_residual: max_concircular,
        max_riccati_residual: max_riccati,
        sphere_residual,
        bicycle_residual: None,
        hit_infinity,
        closed,
        closure_error,
        endpoint: (curve.is_closed() && !hit_infinity).then(|| path[steps]),
        start_vertex,
        periods: if curve.is_closed() { periods } else { 1 },
    })
}

/// Packs a propagated path into a curve indexed like the base curve.
fn assemble(
    curve: &PolarisedCurve,
    path: &[Quaternion],
    start: usize,
    periods: usize,
    partial: bool,
) -> PolarisedCurve {
    let n = curve.vertex_count();
    if curve.is_closed() && !partial {
        // Drop the repeated endpoint and rotate so that index k sits over
        // vertex k of the cover.
        let total = periods * n;
        let mut vertices = vec![Quaternion::ZERO; total];
        for (s, v) in path[..total].iter().enumerate() {
            vertices[(start + s) % total] = *v;
        }
        let weights = (0..total).map(|e| curve.weight(e)).collect();
        return PolarisedCurve::from_parts_unchecked(vertices, weights, true);
    }
    let weights = (0..path.len().saturating_sub(1)).map(|s| curve.weight(start + s)).collect();
    PolarisedCurve::from_parts_unchecked(path.to_vec(), weights, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_discrete_circle, make_torus_knot_samples};
    use proptest::prelude::*;

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
    }

    #[test]
    fn cross_ratio_of_collinear_points() {
        let cr = cross_ratio(0.0.into(), 1.0.into(), 2.0.into(), 3.0.into()).unwrap();
        assert!((cr - Quaternion::real(-1.0 / 3.0)).norm() < 1e-15);
        assert!(cross_ratio(0.0.into(), 1.0.into(), 1.0.into(), 3.0.into()).is_err());
    }

    #[test]
    fn mu_zero_gives_constant_transform() {
        let c = make_torus_knot_samples(2, 3, 30, (2.0, 1.0)).unwrap();
        let p = Quaternion::new(0.0, 5.0, 5.0, 5.0);
        let r = darboux_transform(&c, 0.0, p, 0).unwrap();
        assert!(r.closed);
        assert!(r.vertices().iter().all(|v| (*v - p).norm() < 1e-12));
    }

    #[test]
    fn start_vertex_indexing() {
        let c = make_discrete_circle(12).unwrap();
        let mu = -0.7;
        let p = c.vertex(0) + Quaternion::new(0.0, 0.1, 0.3, -0.2);
        let a = darboux_transform(&c, mu, p, 0).unwrap();
        let b = darboux_transform(&c, mu, a.vertices()[5], 5).unwrap();
        for n in 5..12 {
            assert!((a.vertices()[n] - b.vertices()[n]).norm() < 1e-10);
        }
    }

    #[test]
    fn open_curve_transform() {
        let vs: Vec<_> = (0..6).map(|k| Quaternion::new(0.0, k as f64, (k * k) as f64 * 0.1, 0.0)).collect();
        let c = PolarisedCurve::new(vs, vec![1.0; 5], false).unwrap();
        let r = darboux_transform(&c, 0.3, Quaternion::new(0.0, 0.0, 1.0, 0.5), 1).unwrap();
        assert_eq!(r.vertices().len(), 5);
        assert!(r.closure_error.is_none());
        assert!(r.max_cross_ratio_residual < 1e-11);
    }

    #[test]
    fn hitting_infinity_is_reported() {
        // 1 + μ dxd T = 0 with dxd = i/2 (dx = −i, m = 2): T = 2i/μ.
        let c = PolarisedCurve::new(vec![Quaternion::ZERO, Quaternion::I], vec![2.0], false).unwrap();
        let e = edge_data(&c, 0).unwrap();
        assert!(matches!(riccati_step(Quaternion::I * 2.0, &e, 1.0), Err(Error::HitsInfinity { vertex: 1 })));
        let r = darboux_transform(&c, 1.0, Quaternion::I * 2.0, 0).unwrap();
        assert!(r.hit_infinity);
        assert_eq!(r.vertices().len(), 1);
    }

    #[test]
    fn initial_point_on_curve_is_rejected() {
        let c = make_discrete_circle(6).unwrap();
        assert!(darboux_transform(&c, 0.5, c.vertex(0), 0).is_err());
    }

    #[test]
    fn diagnostics_json_fields() {
        let c = make_discrete_circle(8).unwrap();
        let r = darboux_transform(&c, 0.0, Quaternion::new(0.0, 1.0, 0.0, 0.0), 0).unwrap();
        let v = serde_json::to_value(r.diagnostics()).unwrap();
        for key in ["mu", "max_cross_ratio_residual", "sphere_residual", "hit_infinity", "closed", "closure_error"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    proptest! {
        #[test]
        fn riccati_back_substitution(a in quat(), b in quat(), t in quat(), m in 0.2f64..5.0, mu in -5.0f64..5.0) {
            prop_assume!((a - b).norm() > 0.1 && t.norm() > 0.1);
            let c = PolarisedCurve::new(vec![a, b], vec![m], false).unwrap();
            let e = edge_data(&c, 0).unwrap();
            if let Ok(tj) = riccati_step(t, &e, mu) {
                let scale = 1.0 + t.norm() * tj.norm() * e.dxd.norm() * mu.abs();
                prop_assert!(riccati_residual(t, tj, &e, mu) < 1e-12 * scale.max(tj.norm()));
            }
        }

        #[test]
        fn quad_cross_ratio(a in quat(), b in quat(), t in quat(), m in 0.2f64..5.0, mu in -5.0f64..5.0) {
            prop_assume!((a - b).norm() > 0.3 && t.norm() > 0.3);
            prop_assume!((mu - m).abs() > 0.1);
            let c = PolarisedCurve::new(vec![a, b], vec![m], false).unwrap();
            let e = edge_data(&c, 0).unwrap();
            let tj = riccati_step(t, &e, mu).unwrap();
            prop_assume!(tj.norm() > 1e-2 && tj.norm() < 1e3 && (a + t - b - tj).norm() > 1e-2);
            let cr = cross_ratio(a, b, b + tj, a + t).unwrap();
            // Independent oracle: real cross-ratio μ/m with a tolerance scaled by
            // the conditioning of the inverses involved.
            let cond = (a - b).norm() * (b + tj - a - t).norm() / (tj.norm() * t.norm());
            prop_assert!((cr - Quaternion::real(mu / m)).norm() < 1e-11 * (1.0 + cond) * (1.0 + tj.norm() + t.norm()));
        }

        #[test]
        fn cross_ratio_translation_and_scaling(p in prop::array::uniform4(quat()), shift in quat(), s in 0.1f64..10.0) {
            let [a, b, c, d] = p;
            if let Ok(cr) = cross_ratio(a, b, c, d) {
                prop_assume!(cr.norm() < 1e6 && (b - c).norm() > 1e-2 && (d - a).norm() > 1e-2);
                let t = cross_ratio(a + shift, b + shift, c + shift, d + shift).unwrap();
                let sc = cross_ratio(a * s, b * s, c * s, d * s).unwrap();
                let sneg = cross_ratio(a * -s, b * -s, c * -s, d * -s).unwrap();
                let tol = 1e-9 * (1.0 + cr.norm());
                prop_assert!((t - cr).norm() < tol);
                prop_assert!((sc - cr).norm() < tol);
                prop_assert!((sneg - cr).norm() < tol);
            }
        }
    }
}
