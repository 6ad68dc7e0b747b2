//! Bicycle correspondences: Darboux transforms of arc-length polarised
//! curves with `|x̂ − x|² = 1/μ`.

use super::{darboux_transform_with, DarbouxResult};
use crate::curve::{arclength_deviation, PolarisedCurve};
use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Relative tolerance on `||dx|² − 1/m|` for accepting a curve as arc-length
/// polarised, and on `|d| − 1` for the initial direction.
const ARCLENGTH_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BicycleResiduals {
    /// `max_n ||T_n|² − 1/μ|`
    pub rod: f64,
    /// `max ||dx̂|² − 1/m|`
    pub edge: f64,
}

pub fn bicycle_residuals(curve: &PolarisedCurve, result: &DarbouxResult) -> BicycleResiduals {
    let xh = result.transform.vertices();
    let mut rod: f64 = 0.0;
    let mut edge: f64 = 0.0;
    let offset = result.start_vertex;
    let closed = result.transform.is_closed();
    for (k, v) in xh.iter().enumerate() {
        let base = if closed { k } else { offset + k };
        rod = rod.max(((*v - curve.vertex(base)).norm_sqr() - 1.0 / result.mu).abs());
    }
    if closed {
        // Traversal order starts at the start vertex and ends at the
        // propagated endpoint rather than wrapping.
        let len = xh.len();
        for s in 0..len {
            let from = xh[(offset + s) % len];
            let to = if s + 1 == len { result.endpoint.unwrap_or(xh[offset % len]) } else { xh[(offset + s + 1) % len] };
            edge = edge.max(((to - from).norm_sqr() - 1.0 / result.transform.weight(offset + s)).abs());
        }
    } else {
        for k in 0..xh.len().saturating_sub(1) {
            edge = edge.max(((xh[k + 1] - xh[k]).norm_sqr() - 1.0 / result.transform.weight(k)).abs());
        }
    }
    BicycleResiduals { rod, edge }
}

/// Bicycle transform with `T_0 = direction/√μ` at vertex 0, one period.
pub fn bicycle_transform(curve: &PolarisedCurve, mu: f64, direction: Quaternion) -> Result<DarbouxResult> {
    bicycle_transform_with(curve, mu, direction, 0, 1)
}

pub fn bicycle_transform_with(
    curve: &PolarisedCurve,
    mu: f64,
    direction: Quaternion,
    start_vertex: usize,
    periods: usize,
) -> Result<DarbouxResult> {
    if let Some((edge, deviation)) = arclength_deviation(curve) {
        let scale = curve.weights().iter().map(|m| 1.0 / m.abs()).fold(1.0, f64::max);
        if deviation > ARCLENGTH_TOL * scale {
            return Err(Error::NotArcLength { edge, deviation });
        }
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("bicycle transforms need μ > 0, got {mu}")));
    }
    if (direction.norm() - 1.0).abs() > ARCLENGTH_TOL {
        return Err(Error::InvalidParameter(format!(
            "initial direction must be a unit quaternion, |d| = {}",
            direction.norm()
        )));
    }
    let t0 = direction / mu.sqrt();
    let mut result = darboux_transform_with(curve, mu, curve.vertex(start_vertex) + t0, start_vertex, periods)?;
    let r = bicycle_residuals(curve, &result);
    result.bicycle_residual = Some(r.rod.max(r.edge));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_discrete_circle, make_planar_circle, make_torus_knot_samples};
    use crate::darboux::circle_resonance_mu;

    #[test]
    fn conserves_rod_length_on_knot() {
        let c = make_torus_knot_samples(2, 3, 80, (2.0, 1.0)).unwrap();
        let d = Quaternion::new(0.0, 0.6, 0.0, 0.8);
        let r = bicycle_transform(&c, 4.0, d).unwrap();
        let res = bicycle_residuals(&c, &r);
        assert!(res.rod < 1e-10 && res.edge < 1e-10, "{res:?}");
    }

    #[test]
    fn circleton_cover_closes() {
        let c = make_planar_circle(36).unwrap();
        let mu = circle_resonance_mu(36, 1, 2).unwrap();
        let r = bicycle_transform_with(&c, mu, -Quaternion::ONE, 0, 2).unwrap();
        assert_eq!(r.vertices().len(), 72);
        assert!(r.closed, "{:?}", r.closure_error);
        assert!(r.bicycle_residual.unwrap() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        let c = make_discrete_circle(12).unwrap();
        let d = Quaternion::J;
        assert!(bicycle_transform(&c, -1.0, d).is_err());
        assert!(bicycle_transform(&c, 0.0, d).is_err());
        assert!(bicycle_transform(&c, 1.0, d * 2.0).is_err());
        let mut w = c.weights().to_vec();
        w[2] *= 2.0;
        let skewed = PolarisedCurve::new(c.vertices().to_vec(), w, true).unwrap();
        assert!(matches!(bicycle_transform(&skewed, 1.0, d), Err(Error::NotArcLength { edge: 2, .. })));
    }

    #[test]
    fn wrong_rod_length_breaks_conservation() {
        use crate::darboux::darboux_transform;
        let c = make_planar_circle(36).unwrap();
        let mu = 0.2;
        let r = darboux_transform(&c, mu, c.vertex(0) + Quaternion::real(2.0 / mu.sqrt()), 0).unwrap();
        let res = bicycle_residuals(&c, &r);
        assert!(res.edge > 1e-3);
    }
}
