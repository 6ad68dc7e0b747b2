//! Sphere and plane membership of transforms of space curves.
//!
//! For a curve in `Im H` the Hermitian form of a parallel section scales by
//! the real factor `1 − μ/m` along each edge, so a transform with one vertex
//! in `Im H` has all of them there. The same holds for a curve and transform
//! in a common coordinate 2-plane.

use serde::{Deserialize, Serialize};

use super::DarbouxResult;
use crate::curve::PolarisedCurve;
use crate::quat::Quaternion;

/// A plane spanned by two of the basis elements `1, i, j, k`, given by their
/// coordinate indices (0 = real part).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinatePlane(pub usize, pub usize);

impl CoordinatePlane {
    pub fn name(&self) -> String {
        const B: [&str; 4] = ["1", "i", "j", "k"];
        format!("{}{}", B[self.0], B[self.1])
    }

    fn off_plane(&self, q: Quaternion) -> f64 {
        let a = q.to_array();
        (0..4).filter(|&c| c != self.0 && c != self.1).map(|c| a[c].abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereReport {
    pub curve_imaginary: bool,
    /// `max_n |Re x̂_n|`
    pub imaginary_residual: f64,
    pub transform_imaginary: bool,
    /// The coordinate plane containing the base curve, if any.
    pub plane: Option<CoordinatePlane>,
    pub plane_residual: Option<f64>,
    pub transform_in_plane: Option<bool>,
    /// False if some vertices satisfy a membership and others do not, which
    /// cannot happen for an exact transform.
    pub consistent: bool,
}

fn plane_of(curve: &PolarisedCurve, tol: f64) -> Option<CoordinatePlane> {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    // Prefer planes inside Im H.
    let mut ordered = pairs;
    ordered.sort_by_key(|&(a, _)| a == 0);
    ordered
        .into_iter()
        .map(|(a, b)| CoordinatePlane(a, b))
        .find(|p| curve.vertices().iter().all(|v| p.off_plane(*v) <= tol))
}

/// Reports whether `result.transform` stays in `Im H` and in the coordinate
/// plane of `curve`.
pub fn sphere_membership(curve: &PolarisedCurve, result: &DarbouxResult, tol: f64) -> SphereReport {
    let xh = result.transform.vertices();
    let curve_imaginary = curve.is_imaginary(tol);
    let re: Vec<f64> = xh.iter().map(|v| v.w.abs()).collect();
    let imaginary_residual = re.iter().copied().fold(0.0, f64::max);
    let transform_imaginary = imaginary_residual <= tol;
    let mut consistent = true;
    if curve_imaginary && re.iter().any(|&r| r <= tol) && !transform_imaginary {
        consistent = false;
    }

    let plane = plane_of(curve, tol);
    let (plane_residual, transform_in_plane) = match plane {
        Some(p) => {
            let off: Vec<f64> = xh.iter().map(|v| p.off_plane(*v)).collect();
            let worst = off.iter().copied().fold(0.0, f64::max);
            if off.iter().any(|&o| o <= tol) && worst > tol {
                consistent = false;
            }
            (Some(worst), Some(worst <= tol))
        }
        None => (None, None),
    };

    SphereReport {
        curve_imaginary,
        imaginary_residual,
        transform_imaginary,
        plane,
        plane_residual,
        transform_in_plane,
        consistent,
    }
}
