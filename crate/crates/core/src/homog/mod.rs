//! Homogeneous coordinates on `HP¹`, 2×2 quaternionic matrices and their
//! complex 4×4 representation.
//!
//! `H²` is a right quaternionic vector space: points of `HP¹` are lines
//! `φH`, matrices act from the left. For eigen-analysis a quaternion
//! `w0 + j w1` is represented by the complex block `[[w0, −w̄1], [w1, w̄0]]`,
//! which is left multiplication on `H = C ⊕ jC` viewed as a right complex
//! vector space. An `HVec2` `(a, b)` becomes the complex 4-vector
//! `(a.z0, a.z1, b.z0, b.z1)`.

mod eig;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quat::{eps_zero, join, split, Quaternion};

pub use eig::{eig_small, EigenPair, DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL};

/// A vector `(top, bottom)ᵀ` in `H²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HVec2 {
    pub top: Quaternion,
    pub bottom: Quaternion,
}

/// A 2×2 quaternionic matrix `[[a, b], [c, d]]` acting from the left.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HMat2 {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
    pub d: Quaternion,
}

/// A point of `HP¹` in the affine chart `x ↦ (x, 1)ᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjPoint {
    Affine(Quaternion),
    Infinity,
}

pub type CVec4 = [Complex64; 4];

/// Complex 4×4 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4(pub [[Complex64; 4]; 4]);

impl HVec2 {
    pub const fn new(top: Quaternion, bottom: Quaternion) -> Self {
        HVec2 { top, bottom }
    }

    /// `e = (1, 0)ᵀ`.
    pub const E: HVec2 = HVec2::new(Quaternion::ONE, Quaternion::ZERO);

    /// Right scaling `(top·h, bottom·h)`; represents the same projective point.
    pub fn scale_right(self, h: Quaternion) -> Self {
        HVec2::new(self.top * h, self.bottom * h)
    }

    pub fn scale(self, s: f64) -> Self {
        HVec2::new(self.top * s, self.bottom * s)
    }

    pub fn norm_sqr(self) -> f64 {
        self.top.norm_sqr() + self.bottom.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn project(self) -> ProjPoint {
        project(self)
    }
}

impl Add for HVec2 {
    type Output = HVec2;
    fn add(self, o: HVec2) -> HVec2 {
        HVec2::new(self.top + o.top, self.bottom + o.bottom)
    }
}

impl Sub for HVec2 {
    type Output = HVec2;
    fn sub(self, o: HVec2) -> HVec2 {
        HVec2::new(self.top - o.top, self.bottom - o.bottom)
    }
}

impl HMat2 {
    pub const fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        HMat2 { a, b, c, d }
    }

    pub const IDENTITY: HMat2 = HMat2::new(
        Quaternion::ONE,
        Quaternion::ZERO,
        Quaternion::ZERO,
        Quaternion::ONE,
    );

    pub fn scalar(s: f64) -> Self {
        HMat2::IDENTITY.scale(s)
    }

    pub fn apply(&self, v: HVec2) -> HVec2 {
        mat_apply(self, v)
    }

    pub fn scale(&self, s: f64) -> HMat2 {
        HMat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn complexify(&self) -> CMat4 {
        complexify(self)
    }
}

impl Add for HMat2 {
    type Output = HMat2;
    fn add(self, o: HMat2) -> HMat2 {
        HMat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for HMat2 {
    type Output = HMat2;
    fn sub(self, o: HMat2) -> HMat2 {
        HMat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Mul for HMat2 {
    type Output = HMat2;
    fn mul(self, o: HMat2) -> HMat2 {
        mat_mul(&self, &o)
    }
}

impl Mul<HVec2> for HMat2 {
    type Output = HVec2;
    fn mul(self, v: HVec2) -> HVec2 {
        mat_apply(&self, v)
    }
}

pub fn mat_apply(m: &HMat2, v: HVec2) -> HVec2 {
    HVec2::new(m.a * v.top + m.b * v.bottom, m.c * v.top + m.d * v.bottom)
}

pub fn mat_mul(l: &HMat2, r: &HMat2) -> HMat2 {
    HMat2::new(
        l.a * r.a + l.b * r.c,
        l.a * r.b + l.b * r.d,
        l.c * r.a + l.d * r.c,
        l.c * r.b + l.d * r.d,
    )
}

/// `(x, 1)ᵀ`.
pub fn affine_lift(x: Quaternion) -> HVec2 {
    HVec2::new(x, Quaternion::ONE)
}

/// `top·bottom⁻¹`, or infinity when `|bottom|²` is below `eps_zero` relative
/// to `|v|²`.
pub fn project(v: HVec2) -> ProjPoint {
    let scale = v.norm_sqr().max(1.0);
    if v.bottom.norm_sqr() <= eps_zero() * scale {
        return ProjPoint::Infinity;
    }
    let inv = v.bottom.conj() / v.bottom.norm_sqr();
    ProjPoint::Affine(v.top * inv)
}

/// The hermitian form `((a, b), (c, d)) = ā d + b̄ c`.
pub fn herm_form(u: HVec2, v: HVec2) -> Quaternion {
    u.top.conj() * v.bottom + u.bottom.conj() * v.top
}

fn quat_block(q: Quaternion) -> [[Complex64; 2]; 2] {
    let p = split(q);
    [[p.z0, -p.z1.conj()], [p.z1, p.z0.conj()]]
}

pub fn complexify(m: &HMat2) -> CMat4 {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 4]; 4];
    for (bi, row) in [[m.a, m.b], [m.c, m.d]].iter().enumerate() {
        for (bj, q) in row.iter().enumerate() {
            let blk = quat_block(*q);
            for r in 0..2 {
                for c in 0..2 {
                    out[2 * bi + r][2 * bj + c] = blk[r][c];
                }
            }
        }
    }
    CMat4(out)
}

pub fn complexify_vector(v: HVec2) -> CVec4 {
    let t = split(v.top);
    let b = split(v.bottom);
    [t.z0, t.z1, b.z0, b.z1]
}

pub fn decomplexify_vector(v: &CVec4) -> HVec2 {
    HVec2::new(join(v[0], v[1]), join(v[2], v[3]))
}

/// The complex-antilinear map `v ↦ v·j` expressed on complex 4-vectors.
/// It sends eigenvectors with eigenvalue `λ` to eigenvectors with `λ̄`.
pub fn right_j(v: &CVec4) -> CVec4 {
    [-v[1].conj(), v[0].conj(), -v[3].conj(), v[2].conj()]
}

/// True when `u` and `v` span the same quaternionic line, measured by the
/// complex volume of `{u, uj, v, vj}` relative to `|u|²|v|²`.
pub fn same_line(u: HVec2, v: HVec2, tol: f64) -> bool {
    let cu = complexify_vector(u);
    let cv = complexify_vector(v);
    let cols = [cu, right_j(&cu), cv, right_j(&cv)];
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..4 {
            m[r][c] = col[r];
        }
    }
    let det = CMat4(m).det().norm();
    det <= tol * u.norm_sqr() * v.norm_sqr()
}

impl CMat4 {
    pub fn zeros() -> Self {
        CMat4([[Complex64::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.0[i][i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(d: [Complex64; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn apply(&self, v: &CVec4) -> CVec4 {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.0[r][c] * v[c]).sum();
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let mut a = self.0;
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..4 {
            let p = (k..4)
                .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
                .unwrap();
            if a[p][k].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..4 {
                let f = a[i][k] / a[k][k];
                for j in k..4 {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
        det
    }
}

impl Mul for CMat4 {
    type Output = CMat4;
    fn mul(self, o: CMat4) -> CMat4 {
        let mut out = CMat4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = (0..4).map(|k| self.0[r][k] * o.0[k][c]).sum();
            }
        }
        out
    }
}

impl Add for CMat4 {
    type Output = CMat4;
    fn add(self, o: CMat4) -> CMat4 {
        let mut out = self;
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] += o.0[r][c];
            }
        }
        out
    }
}

impl Sub for CMat4 {
    type Output = CMat4;
    fn sub(self, o: CMat4) -> CMat4 {
        let mut out = self;
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] -= o.0[r][c];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
    }

    fn hvec() -> impl Strategy<Value = HVec2> {
        (quat(), quat()).prop_map(|(a, b)| HVec2::new(a, b))
    }

    fn hmat() -> impl Strategy<Value = HMat2> {
        (quat(), quat(), quat(), quat()).prop_map(|(a, b, c, d)| HMat2::new(a, b, c, d))
    }

    fn cmat_close(a: &CMat4, b: &CMat4, tol: f64) -> bool {
        (*a - *b).norm() <= tol
    }

    #[test]
    fn identity_and_swap() {
        let v = HVec2::new(Quaternion::new(1.0, 2.0, 3.0, 4.0), J);
        assert_eq!(HMat2::IDENTITY * v, v);
        let swap = HMat2::new(Quaternion::ZERO, Quaternion::ONE, Quaternion::ONE, Quaternion::ZERO);
        assert_eq!(swap * v, HVec2::new(v.bottom, v.top));
    }

    #[test]
    fn projection_examples() {
        let q = Quaternion::new(0.5, -1.0, 2.0, 0.25);
        assert_eq!(project(affine_lift(q)), ProjPoint::Affine(q));
        match project(HVec2::new(J, Quaternion::real(2.0))) {
            ProjPoint::Affine(p) => assert!((p - J * 0.5).norm() < 1e-15),
            ProjPoint::Infinity => panic!("finite point projected to infinity"),
        }
        assert_eq!(project(HVec2::E), ProjPoint::Infinity);
    }

    #[test]
    fn herm_form_examples() {
        let u = HVec2::new(I, Quaternion::ONE);
        assert_eq!(herm_form(u, u), Quaternion::ZERO);
        let v = HVec2::new(Quaternion::ONE, Quaternion::ONE);
        assert_eq!(herm_form(v, v), Quaternion::real(2.0));
    }

    #[test]
    fn complexify_examples() {
        // scalar j as a 1×1 block
        let blk = quat_block(J);
        assert_eq!(blk, [[c(0.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        assert_eq!(complexify(&HMat2::IDENTITY), CMat4::identity());
    }

    #[test]
    fn decomplexify_examples() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert_eq!(
            decomplexify_vector(&[one, zero, zero, zero]),
            HVec2::new(Quaternion::ONE, Quaternion::ZERO)
        );
        assert_eq!(decomplexify_vector(&[zero, one, zero, zero]), HVec2::new(J, Quaternion::ZERO));
    }

    #[test]
    fn same_line_detects_right_multiples() {
        let u = HVec2::new(Quaternion::new(1.0, 2.0, 0.0, -1.0), Quaternion::new(0.0, 1.0, 1.0, 0.0));
        let h = Quaternion::new(0.3, -0.2, 1.1, 0.4);
        assert!(same_line(u, u.scale_right(h), 1e-10));
        assert!(!same_line(u, HVec2::E, 1e-10));
    }

    proptest! {
        #[test]
        fn right_linearity(m in hmat(), v in hvec(), h in quat()) {
            let lhs = m * v.scale_right(h);
            let rhs = (m * v).scale_right(h);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + m.norm() * v.norm() * h.norm()));
        }

        #[test]
        fn herm_form_is_sesquilinear(u in hvec(), v in hvec(), l in quat(), m in quat()) {
            let lhs = herm_form(u.scale_right(l), v.scale_right(m));
            let rhs = l.conj() * herm_form(u, v) * m;
            let scale = 1.0 + u.norm() * v.norm() * l.norm() * m.norm();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }

        #[test]
        fn herm_form_is_hermitian(u in hvec(), v in hvec()) {
            let d = herm_form(u, v) - herm_form(v, u).conj();
            prop_assert!(d.norm() <= 1e-12 * (1.0 + u.norm() * v.norm()));
        }

        #[test]
        fn project_inverts_affine_lift(q in quat()) {
            match project(affine_lift(q)) {
                ProjPoint::Affine(p) => prop_assert!((p - q).norm() <= 1e-14 * (1.0 + q.norm())),
                ProjPoint::Infinity => prop_assert!(false),
            }
        }

        #[test]
        fn complexify_is_an_algebra_homomorphism(a in hmat(), b in hmat(), s in -3.0f64..3.0) {
            let scale = 1.0 + a.norm() * b.norm();
            prop_assert!(cmat_close(&complexify(&(a * b)), &(complexify(&a) * complexify(&b)), 1e-12 * scale));
            prop_assert!(cmat_close(&complexify(&(a + b)), &(complexify(&a) + complexify(&b)), 1e-12 * scale));
            let sa = complexify(&a.scale(s));
            let mut expected = complexify(&a);
            for row in expected.0.iter_mut() {
                for z in row.iter_mut() {
                    *z *= s;
                }
            }
            prop_assert!(cmat_close(&sa, &expected, 1e-12 * scale));
        }

        #[test]
        fn complexified_action_matches(a in hmat(), v in hvec()) {
            let lhs = decomplexify_vector(&complexify(&a).apply(&complexify_vector(v)));
            prop_assert!((lhs - a * v).norm() <= 1e-12 * (1.0 + a.norm() * v.norm()));
            prop_assert_eq!(decomplexify_vector(&complexify_vector(v)), v);
        }

        #[test]
        fn right_j_is_right_multiplication_by_j(v in hvec()) {
            let lhs = decomplexify_vector(&right_j(&complexify_vector(v)));
            prop_assert!((lhs - v.scale_right(J)).norm() <= 1e-14 * (1.0 + v.norm()));
        }
    }
}
