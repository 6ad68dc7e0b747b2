//! Independent oracles for the integration and acceptance tests.
//!
//! Nothing here calls into the library's arithmetic: quaternions are handled
//! as real 4×4 left-multiplication matrices and eigenvalues come from the
//! characteristic polynomial.
#![allow(dead_code)]

use darboux_core::{Complex64, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_quat(rng: &mut ChaCha8Rng, r: f64) -> Quaternion {
    Quaternion::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

pub fn random_imag(rng: &mut ChaCha8Rng, r: f64) -> Quaternion {
    Quaternion::new(0.0, rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let q = random_quat(rng, 1.0);
        let n = q.to_array().iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.1 {
            let a = q.to_array();
            return Quaternion::new(a[0] / n, a[1] / n, a[2] / n, a[3] / n);
        }
    }
}

/// Quaternions as real 4×4 left-multiplication matrices.
pub mod qmat {
    use super::Quaternion;

    pub type M4 = [[f64; 4]; 4];

    pub fn left(q: Quaternion) -> M4 {
        let [w, x, y, z] = q.to_array();
        [[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]]
    }

    pub fn mul(a: &M4, b: &M4) -> M4 {
        let mut c = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }

    /// `L(q)⁻¹ = L(q)ᵀ / |q|²`.
    pub fn inv(a: &M4) -> M4 {
        let n2: f64 = (0..4).map(|i| a[i][0] * a[i][0]).sum();
        let mut c = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] = a[j][i] / n2;
            }
        }
        c
    }

    pub fn sub(p: Quaternion, q: Quaternion) -> M4 {
        let (a, b) = (p.to_array(), q.to_array());
        left(Quaternion::new(a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))
    }

    /// First column of a left-multiplication matrix.
    pub fn value(a: &M4) -> [f64; 4] {
        [a[0][0], a[1][0], a[2][0], a[3][0]]
    }

    /// `(a − b)(b − c)⁻¹(c − d)(d − a)⁻¹`.
    pub fn cross_ratio(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> [f64; 4] {
        let m = mul(&mul(&mul(&sub(a, b), &inv(&sub(b, c))), &sub(c, d)), &inv(&sub(d, a)));
        value(&m)
    }
}

pub type C4 = [[Complex64; 4]; 4];

pub fn cmatvec(m: &C4, v: &[Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|i| (0..4).map(|k| m[i][k] * v[k]).sum())
}

pub fn cnorm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn cmat_norm(m: &C4) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Coefficients `c_0..c_4` (`c_4 = 1`) of `det(zI − A)` by Faddeev–LeVerrier.
pub fn char_poly(a: &C4) -> [Complex64; 5] {
    let zero = Complex64::new(0.0, 0.0);
    let mut coeffs = [zero; 5];
    coeffs[4] = Complex64::new(1.0, 0.0);
    let mut m = [[zero; 4]; 4];
    for k in 1..=4 {
        // M_k = A M_{k−1} + c_{n−k+1} I
        let mut next = [[zero; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|l| a[i][l] * m[l][j]).sum();
            }
            next[i][i] += coeffs[4 - k + 1];
        }
        m = next;
        let am: Complex64 = (0..4).map(|i| (0..4).map(|l| a[i][l] * m[l][i]).sum::<Complex64>()).sum();
        coeffs[4 - k] = -am / k as f64;
    }
    coeffs
}

/// All roots of a monic quartic by Durand–Kerner.
pub fn durand_kerner(c: &[Complex64; 5]) -> [Complex64; 4] {
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * z + k);
    let radius = 1.0 + c[..4].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: [Complex64; 4] = std::array::from_fn(|k| seed.powu(k as u32) * radius);
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..4 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta <= 1e-15 * radius {
            break;
        }
    }
    roots
}

/// Largest distance in a greedy nearest-neighbour matching of two spectra.
pub fn spectrum_mismatch(got: &[Complex64], want: &[Complex64]) -> f64 {
    let mut pool = got.to_vec();
    let mut worst: f64 = 0.0;
    for w in want {
        let Some((idx, d)) =
            pool.iter().enumerate().map(|(i, g)| (i, (g - w).norm())).min_by(|a, b| a.1.total_cmp(&b.1))
        else {
            return f64::INFINITY;
        };
        pool.remove(idx);
        worst = worst.max(d);
    }
    worst
}

/// `¼(1 − cot²(π/M)·tan²(kπ/(ℓM)))`, written out separately from the library.
pub fn resonance_oracle(m: usize, k: i64, l: usize) -> f64 {
    let a = std::f64::consts::PI / m as f64;
    let b = std::f64::consts::PI * k as f64 / (l * m) as f64;
    let ratio = b.tan() / a.tan();
    0.25 * (1.0 - ratio * ratio)
}

/// Eigenvalues of `a` as roots of its characteristic polynomial, computed
/// on `a/‖a‖` and scaled back.
pub fn oracle_eigenvalues(a: &C4) -> [Complex64; 4] {
    let s = cmat_norm(a);
    if s == 0.0 {
        return [Complex64::new(0.0, 0.0); 4];
    }
    let scaled: C4 = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] / s));
    durand_kerner(&char_poly(&scaled)).map(|z| z * s)
}
