//! Real quaternions and the complex split `H = C ⊕ jC`.
//!
//! The multiplication table is fixed as
//!
//! | ·     | 1 | i  | j  | k  |
//! |-------|---|----|----|----|
//! | **1** | 1 | i  | j  | k  |
//! | **i** | i | −1 | k  | −j |
//! | **j** | j | −k | −1 | i  |
//! | **k** | k | j  | −i | −1 |
//!
//! so `ij = k`, `ji = −k` and `i² = j² = k² = ijk = −1`. Complex numbers are
//! embedded through the `{1, i}` slot, and every quaternion is written
//! uniquely as `q = z0 + j z1` with `z0 = w + ix`, `z1 = y − iz`. With this
//! table `j z = z̄ j` for every complex `z`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default threshold on `|q|²` below which a quaternion is treated as zero.
pub const DEFAULT_EPS_ZERO: f64 = 1e-13;

static EPS_ZERO_BITS: AtomicU64 = AtomicU64::new(DEFAULT_EPS_ZERO.to_bits());

/// Current invertibility threshold used by [`Quaternion::try_inv`] and the
/// projective helpers.
pub fn eps_zero() -> f64 {
    f64::from_bits(EPS_ZERO_BITS.load(Ordering::Relaxed))
}

/// Overrides the global invertibility threshold.
pub fn set_eps_zero(eps: f64) {
    assert!(eps.is_finite() && eps >= 0.0, "eps_zero must be finite and nonnegative");
    EPS_ZERO_BITS.store(eps.to_bits(), Ordering::Relaxed);
}

/// A real quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// The pair `(z0, z1)` with `q = z0 + j z1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPair {
    pub z0: Complex64,
    pub z1: Complex64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Embeds a complex number through the `{1, i}` slot.
    pub fn from_complex(c: Complex64) -> Self {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }

    /// `j·c` for a complex `c`, i.e. `join(0, c)`.
    pub fn j_times(c: Complex64) -> Self {
        join(Complex64::new(0.0, 0.0), c)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of the coefficient 4-vectors, `Re(a b̄)`.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Imaginary part `x i + y j + z k`.
    pub fn imag(self) -> Self {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    /// `q̄ / |q|²`, failing when `|q|²` is below [`eps_zero`].
    pub fn try_inv(self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n >= eps_zero()) || !n.is_finite() {
            return Err(Error::Degenerate("quaternion"));
        }
        Ok(self.conj() / n)
    }

    pub fn split(self) -> ComplexPair {
        split(self)
    }

    pub fn is_imaginary(self, tol: f64) -> bool {
        is_imaginary(self, tol)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Hamilton product under the fixed basis convention.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion {
        w: p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        x: p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        y: p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        z: p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    }
}

pub fn qconj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn qnormsq(q: Quaternion) -> f64 {
    q.norm_sqr()
}

pub fn qinv(q: Quaternion) -> Result<Quaternion> {
    q.try_inv()
}

pub fn split(q: Quaternion) -> ComplexPair {
    ComplexPair {
        z0: Complex64::new(q.w, q.x),
        z1: Complex64::new(q.y, -q.z),
    }
}

pub fn join(z0: Complex64, z1: Complex64) -> Quaternion {
    Quaternion::new(z0.re, z0.im, z1.re, -z1.im)
}

/// True iff `|Re q| ≤ tol`.
pub fn is_imaginary(q: Quaternion, tol: f64) -> bool {
    q.w.abs() <= tol
}

impl ComplexPair {
    pub fn join(self) -> Quaternion {
        join(self.z0, self.z1)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        qmul(self, o)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Quaternion::from_complex(c)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}
