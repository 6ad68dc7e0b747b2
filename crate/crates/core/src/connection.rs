//! The connection family `D^λ`, its gauge `d^λ = id + λη`, parallel
//! transport and the monodromy of closed curves.
//!
//! A section in the ambient frame is `φ = (a, b)ᵀ` with
//! `a_j = a_i + dx b_i`, `b_j = b_i + λ dxd a_i`. The gauge
//! `G = [[1, x], [0, 1]]` maps it to `(a + x b, b)ᵀ`, whose projection is the
//! transform point `x + a b⁻¹` directly.

use serde::{Deserialize, Serialize};

use crate::curve::{edge_data, EdgeData, PolarisedCurve};
use crate::error::{Error, Result};
use crate::homog::{HMat2, HVec2};
use crate::quat::Quaternion;

/// `|μ − m| ≤ NONDEGENERACY_TOL·max(1, |m|)` counts as `μ = m`.
pub const NONDEGENERACY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Ambient,
    Gauged,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionEdgeMatrix {
    pub matrix: HMat2,
    pub lambda: f64,
    pub edge: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyMatrix {
    pub matrix: HMat2,
    pub mu: f64,
    pub base_vertex: usize,
}

fn cal_d_from(e: &EdgeData, lambda: f64) -> HMat2 {
    HMat2::new(Quaternion::ONE, e.dx, e.dxd * lambda, Quaternion::ONE)
}

fn gauged_d_from(e: &EdgeData, xi: Quaternion, xj: Quaternion, lambda: f64) -> HMat2 {
    let xj_dxd = xj * e.dxd;
    let dxd_xi = e.dxd * xi;
    HMat2::new(
        Quaternion::ONE + xj_dxd * lambda,
        -(xj_dxd * xi) * lambda,
        e.dxd * lambda,
        Quaternion::ONE - dxd_xi * lambda,
    )
}

/// `D^λ_{ji} = [[1, dx], [λ dxd, 1]]` on edge `e`, oriented `i → j`.
pub fn cal_d(curve: &PolarisedCurve, edge: usize, lambda: f64) -> Result<HMat2> {
    Ok(cal_d_from(&edge_data(curve, edge)?, lambda))
}

/// `D^λ_{ij}`, the same edge traversed backwards (`dx` changes sign, `m`
/// does not).
pub fn cal_d_reverse(curve: &PolarisedCurve, edge: usize, lambda: f64) -> Result<HMat2> {
    let e = edge_data(curve, edge)?;
    Ok(HMat2::new(Quaternion::ONE, -e.dx, -e.dxd * lambda, Quaternion::ONE))
}

pub fn cal_d_edge(curve: &PolarisedCurve, edge: usize, lambda: f64) -> Result<ConnectionEdgeMatrix> {
    Ok(ConnectionEdgeMatrix { matrix: cal_d(curve, edge, lambda)?, lambda, edge })
}

/// `d^λ_{ji} = id + λη_{ji}` with
/// `η = [[x_j dxd, −x_j dxd x_i], [dxd, −dxd x_i]]`.
pub fn gauged_d(curve: &PolarisedCurve, edge: usize, lambda: f64) -> Result<HMat2> {
    let e = edge_data(curve, edge)?;
    Ok(gauged_d_from(&e, curve.vertex(e.i), curve.vertex(e.j), lambda))
}

/// `η_{ji}`; kernel `ψ_i H`, image `ψ_j H`.
pub fn eta(curve: &PolarisedCurve, edge: usize) -> Result<HMat2> {
    let e = edge_data(curve, edge)?;
    let (xi, xj) = (curve.vertex(e.i), curve.vertex(e.j));
    Ok(HMat2::new(xj * e.dxd, -(xj * e.dxd * xi), e.dxd, -(e.dxd * xi)))
}

/// `G = (e ψ) = [[1, x], [0, 1]]`.
pub fn gauge(x: Quaternion) -> HMat2 {
    HMat2::new(Quaternion::ONE, x, Quaternion::ZERO, Quaternion::ONE)
}

pub fn gauge_inverse(x: Quaternion) -> HMat2 {
    gauge(-x)
}

/// Rejects `μ` equal to the weight of `edge`.
pub fn check_nondegenerate(curve: &PolarisedCurve, edge: usize, mu: f64) -> Result<()> {
    let m = curve.weight(edge);
    if (mu - m).abs() <= NONDEGENERACY_TOL * m.abs().max(1.0) {
        return Err(Error::NonDegeneracy { edge, mu, weight: m });
    }
    Ok(())
}

pub fn check_nondegenerate_all(curve: &PolarisedCurve, mu: f64) -> Result<()> {
    (0..curve.edge_count()).try_for_each(|e| check_nondegenerate(curve, e, mu))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportOptions {
    pub frame: Frame,
    /// Number of periods to traverse on a closed curve. Ignored for open
    /// curves, which are traversed from `start` to the last vertex.
    pub periods: usize,
    /// Divide by `|φ|` after each step.
    pub renormalize: bool,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions { frame: Frame::Ambient, periods: 1, renormalize: false }
    }
}

/// Parallel transport of `φ0` from `start`, one period for closed curves.
/// Entry `n` of the result sits at vertex `start + n`.
pub fn transport(curve: &PolarisedCurve, mu: f64, start: usize, phi0: HVec2, frame: Frame) -> Result<Vec<HVec2>> {
    transport_with(curve, mu, start, phi0, TransportOptions { frame, ..Default::default() })
}

pub fn transport_with(
    curve: &PolarisedCurve,
    mu: f64,
    start: usize,
    phi0: HVec2,
    opts: TransportOptions,
) -> Result<Vec<HVec2>> {
    let steps = traversal_steps(curve, start, opts.periods)?;
    let mut out = Vec::with_capacity(steps + 1);
    let mut phi = phi0;
    out.push(phi);
    for s in 0..steps {
        let edge = if curve.is_closed() { (start + s) % curve.vertex_count() } else { start + s };
        check_nondegenerate(curve, edge, mu)?;
        let e = edge_data(curve, edge)?;
        let mat = match opts.frame {
            Frame::Ambient => cal_d_from(&e, mu),
            Frame::Gauged => gauged_d_from(&e, curve.vertex(e.i), curve.vertex(e.j), mu),
        };
        phi = mat.apply(phi);
        if opts.renormalize {
            let n = phi.norm();
            if n > 0.0 {
                phi = phi.scale(1.0 / n);
            }
        }
        out.push(phi);
    }
    Ok(out)
}

pub(crate) fn traversal_steps(curve: &PolarisedCurve, start: usize, periods: usize) -> Result<usize> {
    if start >= curve.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "start vertex {start} out of range (curve has {} vertices)",
            curve.vertex_count()
        )));
    }
    Ok(if curve.is_closed() { periods * curve.vertex_count() } else { curve.vertex_count() - 1 - start })
}

/// Ambient section to gauged section at vertex `x`.
pub fn to_gauged(x: Quaternion, phi: HVec2) -> HVec2 {
    HVec2::new(phi.top + x * phi.bottom, phi.bottom)
}

pub fn to_ambient(x: Quaternion, phi: HVec2) -> HVec2 {
    HVec2::new(phi.top - x * phi.bottom, phi.bottom)
}

/// `∏ d^μ` over one period from `base_vertex`, later edges on the left.
pub fn monodromy(curve: &PolarisedCurve, mu: f64, base_vertex: usize) -> Result<MonodromyMatrix> {
    if !curve.is_closed() {
        return Err(Error::OpenCurve);
    }
    let n = curve.vertex_count();
    if base_vertex >= n {
        return Err(Error::InvalidParameter(format!("base vertex {base_vertex} out of range (period {n})")));
    }
    check_nondegenerate_all(curve, mu)?;
    let mut matrix = HMat2::IDENTITY;
    for s in 0..n {
        let e = edge_data(curve, (base_vertex + s) % n)?;
        matrix = gauged_d_from(&e, curve.vertex(e.i), curve.vertex(e.j), mu) * matrix;
    }
    Ok(MonodromyMatrix { matrix, mu, base_vertex })
}

impl MonodromyMatrix {
    /// Monodromy of the `periods`-fold cover.
    pub fn power(&self, periods: usize) -> MonodromyMatrix {
        let mut matrix = HMat2::IDENTITY;
        for _ in 0..periods {
            matrix = self.matrix * matrix;
        }
        MonodromyMatrix { matrix, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_discrete_circle, make_torus_knot_samples};
    use crate::homog::{affine_lift, herm_form};
    use proptest::prelude::*;

    fn segment(a: Quaternion, b: Quaternion, m: f64) -> PolarisedCurve {
        PolarisedCurve::new(vec![a, b], vec![m], false).unwrap()
    }

    #[test]
    fn lambda_zero() {
        let c = make_discrete_circle(7).unwrap();
        for e in 0..7 {
            let dx = c.vertex(e) - c.vertex(e + 1);
            let d = cal_d(&c, e, 0.0).unwrap();
            assert_eq!(d.b, dx);
            assert_eq!((d.a, d.c, d.d), (Quaternion::ONE, Quaternion::ZERO, Quaternion::ONE));
            assert_eq!(gauged_d(&c, e, 0.0).unwrap(), HMat2::IDENTITY);
        }
    }

    #[test]
    fn one_step_example() {
        let c = segment(Quaternion::ZERO, Quaternion::I, 2.0);
        let path = transport(&c, 1.0, 0, HVec2::E, Frame::Ambient).unwrap();
        assert_eq!(path.len(), 2);
        assert!((path[1].top - Quaternion::ONE).norm() < 1e-15);
        assert!((path[1].bottom - Quaternion::I * 0.5).norm() < 1e-15);
    }

    #[test]
    fn mu_zero_transport_unrolls() {
        let c = make_torus_knot_samples(2, 3, 20, (2.0, 1.0)).unwrap();
        let a0 = Quaternion::new(0.3, -1.0, 0.2, 0.5);
        let b0 = Quaternion::new(1.0, 0.4, -0.7, 0.1);
        let path = transport(&c, 0.0, 0, HVec2::new(a0, b0), Frame::Ambient).unwrap();
        for (n, phi) in path.iter().enumerate() {
            assert!((phi.bottom - b0).norm() < 1e-14);
            let expected = a0 + (c.vertex(0) - c.vertex(n)) * b0;
            assert!((phi.top - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn nondegeneracy_names_edge() {
        let c = make_discrete_circle(12).unwrap();
        let m = c.weights()[0];
        let err = transport(&c, m, 0, HVec2::E, Frame::Ambient).unwrap_err();
        assert!(matches!(err, Error::NonDegeneracy { edge: 0, .. }));
        assert!(matches!(monodromy(&c, m, 0), Err(Error::NonDegeneracy { .. })));
    }

    #[test]
    fn monodromy_requires_closed_curve() {
        let c = segment(Quaternion::ZERO, Quaternion::I, 1.0);
        assert!(matches!(monodromy(&c, 0.5, 0), Err(Error::OpenCurve)));
    }

    #[test]
    fn monodromy_mu_zero_is_identity() {
        let c = make_discrete_circle(12).unwrap();
        let m = monodromy(&c, 0.0, 3).unwrap();
        assert_eq!(m.matrix, HMat2::IDENTITY);
    }

    #[test]
    fn monodromy_matches_transport() {
        let c = make_torus_knot_samples(2, 3, 30, (2.0, 1.0)).unwrap();
        let mu = 0.37;
        let phi0 = HVec2::new(Quaternion::new(0.1, 0.2, -0.3, 0.4), Quaternion::new(-0.5, 0.6, 0.7, 0.8));
        let path =
            transport_with(&c, mu, 4, phi0, TransportOptions { frame: Frame::Gauged, ..Default::default() }).unwrap();
        let m = monodromy(&c, mu, 4).unwrap();
        let direct = m.matrix.apply(phi0);
        let last = path.last().unwrap();
        assert!((direct - *last).norm() <= 1e-12 * last.norm());
    }

    #[test]
    fn frames_agree_projectively() {
        let c = make_torus_knot_samples(3, 2, 25, (3.0, 1.0)).unwrap();
        let mu = -0.8;
        let phi0 = HVec2::new(Quaternion::new(0.3, 0.1, 0.0, -0.2), Quaternion::ONE);
        let ambient = transport(&c, mu, 0, phi0, Frame::Ambient).unwrap();
        let gauged = transport(&c, mu, 0, to_gauged(c.vertex(0), phi0), Frame::Gauged).unwrap();
        for (n, (a, g)) in ambient.iter().zip(&gauged).enumerate() {
            let converted = to_gauged(c.vertex(n), *a);
            assert!((converted - *g).norm() <= 1e-10 * g.norm().max(1.0), "vertex {n}");
            assert_eq!(to_ambient(c.vertex(n), converted).top.norm() > 0.0, a.top.norm() > 0.0);
        }
    }

    #[test]
    fn renormalized_transport_is_projectively_equal() {
        let c = make_discrete_circle(40).unwrap();
        let phi0 = HVec2::new(Quaternion::new(0.0, 0.3, 0.5, 0.0), Quaternion::ONE);
        let plain = transport(&c, -2.0, 0, phi0, Frame::Ambient).unwrap();
        let opts = TransportOptions { renormalize: true, periods: 1, frame: Frame::Ambient };
        let normed = transport_with(&c, -2.0, 0, phi0, opts).unwrap();
        for (p, q) in plain.iter().zip(&normed).skip(1) {
            assert!((q.norm() - 1.0).abs() < 1e-14);
            assert!(crate::homog::same_line(*p, *q, 1e-10));
        }
    }

    #[test]
    fn hermitian_scaling_on_imaginary_curve() {
        let c = make_torus_knot_samples(2, 3, 40, (2.0, 1.0)).unwrap();
        let mu = 1.3;
        let phi0 = HVec2::new(Quaternion::new(0.2, 0.1, -0.4, 0.3), Quaternion::new(0.5, 0.0, 0.2, 1.0));
        let path = transport(&c, mu, 0, phi0, Frame::Ambient).unwrap();
        for n in 0..40 {
            let m = c.weight(n);
            let lhs = herm_form(path[n + 1], path[n + 1]);
            let rhs = herm_form(path[n], path[n]) * (1.0 - mu / m);
            assert!((lhs - rhs).norm() <= 1e-11 * path[n + 1].norm_sqr(), "edge {n}");
        }
    }

    #[test]
    fn monodromy_spectrum_invariant_under_base_change() {
        use crate::homog::{eig_small, DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL};
        let c = make_torus_knot_samples(2, 3, 24, (2.0, 1.0)).unwrap();
        let mu = 0.6;
        let spec = |base| {
            let m = monodromy(&c, mu, base).unwrap();
            eig_small(&m.matrix.complexify(), DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITER)
                .unwrap()
                .into_iter()
                .map(|p| p.value)
                .collect::<Vec<_>>()
        };
        let s0 = spec(0);
        let scale = s0.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for base in [5, 11, 23] {
            let mut pool = spec(base);
            for a in &s0 {
                let (idx, d) = pool
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (i, (a - b).norm()))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .unwrap();
                assert!(d < 1e-9 * scale, "base {base}: {d}");
                pool.remove(idx);
            }
        }
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
    }

    proptest! {
        #[test]
        fn composition_identity(a in quat(), b in quat(), m in 0.1f64..10.0, lambda in -10.0f64..10.0) {
            prop_assume!((a - b).norm() > 1e-2);
            let c = segment(a, b, m);
            let prod = cal_d_reverse(&c, 0, lambda).unwrap() * cal_d(&c, 0, lambda).unwrap();
            prop_assert!((prod - HMat2::scalar(1.0 - lambda / m)).norm() < 1e-12);
        }

        #[test]
        fn ambient_recurrence(a in quat(), b in quat(), m in 0.1f64..10.0, mu in -10.0f64..10.0, ai in quat(), bi in quat()) {
            prop_assume!((a - b).norm() > 1e-2);
            let c = segment(a, b, m);
            let e = edge_data(&c, 0).unwrap();
            let phi = cal_d(&c, 0, mu).unwrap().apply(HVec2::new(ai, bi));
            prop_assert!((phi.top - (ai + e.dx * bi)).norm() < 1e-12);
            prop_assert!((phi.bottom - (bi + e.dxd * ai * mu)).norm() < 1e-10);
        }

        #[test]
        fn kernel_and_image(a in quat(), b in quat(), m in 0.1f64..10.0, lambda in -10.0f64..10.0) {
            prop_assume!((a - b).norm() > 0.1);
            let c = segment(a, b, m);
            let eta = eta(&c, 0).unwrap();
            let (psi_i, psi_j) = (affine_lift(a), affine_lift(b));
            prop_assert!(eta.apply(psi_i).norm() < 1e-12 * (1.0 + a.norm_sqr()));
            let d = gauged_d(&c, 0, lambda).unwrap();
            prop_assert!((d.apply(psi_i) - psi_i).norm() < 1e-12 * (1.0 + a.norm_sqr()));
            let expected = psi_j.scale((m - lambda) / m);
            prop_assert!((d.apply(psi_j) - expected).norm() < 1e-11 * (1.0 + b.norm_sqr()));
        }

        #[test]
        fn gauge_relation(a in quat(), b in quat(), m in 0.1f64..10.0, lambda in -10.0f64..10.0) {
            prop_assume!((a - b).norm() > 0.1);
            let c = segment(a, b, m);
            let via = gauge(b) * cal_d(&c, 0, lambda).unwrap() * gauge_inverse(a);
            let d = gauged_d(&c, 0, lambda).unwrap();
            prop_assert!((via - d).norm() < 1e-11 * (1.0 + d.norm()));
        }
    }
}
