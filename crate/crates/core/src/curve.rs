//! Discrete polarised curves.
//!
//! Edge `e_n` joins vertex `n` to `n + 1` (wrapping for closed curves) and is
//! oriented `i = n → j = n + 1`, so `dx = x_i − x_j`. The polarisation is
//! stored per unoriented edge as the weight `m`, with `1/m` the quadratic
//! differential. The dual 1-form is `dxd = (1/m) dx⁻¹`.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

#[derive(Clone, Debug, PartialEq)]
pub struct PolarisedCurve {
    vertices: Vec<Quaternion>,
    weights: Vec<f64>,
    closed: bool,
}

/// Per-edge data for the oriented edge `i → j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeData {
    pub index: usize,
    pub i: usize,
    pub j: usize,
    /// `x_i − x_j`
    pub dx: Quaternion,
    /// `(1/m) dx⁻¹`
    pub dxd: Quaternion,
    pub m: f64,
}

impl PolarisedCurve {
    /// Builds a curve after checking every invariant.
    pub fn new(vertices: Vec<Quaternion>, weights: Vec<f64>, closed: bool) -> Result<Self> {
        let curve = PolarisedCurve { vertices, weights, closed };
        curve.validate()?;
        Ok(curve)
    }

    /// Builds a curve without the distinct-vertex check. Used for transforms,
    /// which may legitimately be constant (`μ = 0`).
    pub(crate) fn from_parts_unchecked(vertices: Vec<Quaternion>, weights: Vec<f64>, closed: bool) -> Self {
        PolarisedCurve { vertices, weights, closed }
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n < 2 {
            return Err(Error::InvalidCurve(format!("need at least 2 vertices, got {n}")));
        }
        let expected = if self.closed { n } else { n - 1 };
        if self.weights.len() != expected {
            return Err(Error::InvalidCurve(format!(
                "{} curve with {n} vertices needs {expected} weights, got {}",
                if self.closed { "closed" } else { "open" },
                self.weights.len()
            )));
        }
        if let Some(v) = self.vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidCurve(format!("vertex {v} is not finite")));
        }
        check_weights(&self.weights)?;
        for e in 0..self.edge_count() {
            let (i, j) = self.edge_endpoints(e);
            if (self.vertices[i] - self.vertices[j]).norm_sqr() < crate::quat::eps_zero() {
                return Err(Error::DuplicateVertices { index: i, next: j });
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Quaternion] {
        &self.vertices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Period `M` of a closed curve.
    pub fn period(&self) -> Option<usize> {
        self.closed.then_some(self.vertices.len())
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn vertex(&self, n: usize) -> Quaternion {
        if self.closed {
            self.vertices[n % self.vertices.len()]
        } else {
            self.vertices[n]
        }
    }

    /// Weight of edge `e`, wrapping for closed curves.
    pub fn weight(&self, e: usize) -> f64 {
        if self.closed {
            self.weights[e % self.weights.len()]
        } else {
            self.weights[e]
        }
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let n = self.vertices.len();
        if self.closed {
            (e % n, (e + 1) % n)
        } else {
            (e, e + 1)
        }
    }

    pub fn edge_data(&self, e: usize) -> Result<EdgeData> {
        edge_data(self, e)
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (a, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[a + 1..] {
                d = d.max((*p - *q).norm());
            }
        }
        d
    }

    /// True iff every vertex has `|Re x| ≤ tol`.
    pub fn is_imaginary(&self, tol: f64) -> bool {
        self.vertices.iter().all(|v| v.w.abs() <= tol)
    }

    /// The curve traversed `periods` times, as one closed curve with
    /// `periods·M` vertices.
    pub fn cover(&self, periods: usize) -> Result<PolarisedCurve> {
        if !self.closed {
            return Err(Error::OpenCurve);
        }
        if periods == 0 {
            return Err(Error::InvalidParameter("cover needs at least one period".into()));
        }
        let vertices = self.vertices.iter().copied().cycle().take(periods * self.vertices.len()).collect();
        let weights = self.weights.iter().copied().cycle().take(periods * self.weights.len()).collect();
        Ok(PolarisedCurve::from_parts_unchecked(vertices, weights, true))
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    for (index, &value) in weights.iter().enumerate() {
        if value == 0.0 || !value.is_finite() {
            return Err(Error::ZeroWeight { index, value });
        }
    }
    if let Some(&first) = weights.first() {
        if let Some(index) = weights.iter().position(|w| w.signum() != first.signum()) {
            return Err(Error::MixedSignWeights { index, value: weights[index] });
        }
    }
    Ok(())
}

pub fn edge_data(curve: &PolarisedCurve, e: usize) -> Result<EdgeData> {
    if e >= curve.edge_count() {
        return Err(Error::InvalidParameter(format!(
            "edge {e} out of range (curve has {} edges)",
            curve.edge_count()
        )));
    }
    let (i, j) = curve.edge_endpoints(e);
    let dx = curve.vertices[i] - curve.vertices[j];
    let m = curve.weights[e];
    let inv = dx.try_inv().map_err(|_| Error::DegenerateEdge { edge: e })?;
    Ok(EdgeData { index: e, i, j, dx, dxd: inv / m, m })
}

fn unit_root(m: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * n as f64 / m as f64)
}

/// `m = |1 − e^{2πi/M}|⁻² = 1/(2 − 2cos(2π/M))`.
pub fn circle_weight(m: usize) -> f64 {
    1.0 / (2.0 - 2.0 * (2.0 * PI / m as f64).cos())
}

/// The discrete circle `x_n = j e^{2πin/M}` in the jk-plane, arc-length
/// polarised.
pub fn make_discrete_circle(m: usize) -> Result<PolarisedCurve> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("circle needs M ≥ 3, got {m}")));
    }
    let vertices = (0..m).map(|n| Quaternion::j_times(unit_root(m, n))).collect();
    PolarisedCurve::new(vertices, vec![circle_weight(m); m], true)
}

/// The discrete circle `x_n = e^{2πin/M}` in `span{1, i}`.
pub fn make_planar_circle(m: usize) -> Result<PolarisedCurve> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("circle needs M ≥ 3, got {m}")));
    }
    let vertices = (0..m).map(|n| Quaternion::from_complex(unit_root(m, n))).collect();
    PolarisedCurve::new(vertices, vec![circle_weight(m); m], true)
}

/// A `(p, q)` torus knot on the torus with radii `(major, minor)`, sampled at
/// `M` equally spaced parameters, embedded in `Im H`.
pub fn make_torus_knot_samples(p: i32, q: i32, m: usize, radii: (f64, f64)) -> Result<PolarisedCurve> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("torus knot needs M ≥ 3, got {m}")));
    }
    let (major, minor) = radii;
    if !(major > 0.0 && minor > 0.0) || minor >= major {
        return Err(Error::InvalidParameter(format!(
            "torus radii must satisfy 0 < minor < major, got ({major}, {minor})"
        )));
    }
    let samples = (0..m)
        .map(|n| {
            let t = 2.0 * PI * n as f64 / m as f64;
            let r = major + minor * (q as f64 * t).cos();
            Quaternion::new(0.0, r * (p as f64 * t).cos(), r * (p as f64 * t).sin(), minor * (q as f64 * t).sin())
        })
        .collect();
    make_sampled_curve(samples, None)
}

/// A closed curve through `samples`. Without explicit weights the curve is
/// arc-length polarised, `m = 1/|dx|²`.
pub fn make_sampled_curve(samples: Vec<Quaternion>, weights: Option<Vec<f64>>) -> Result<PolarisedCurve> {
    if samples.len() < 3 {
        return Err(Error::InvalidCurve(format!(
            "a closed sampled curve needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len();
    for i in 0..n {
        let j = (i + 1) % n;
        if (samples[i] - samples[j]).norm_sqr() < crate::quat::eps_zero() {
            return Err(Error::DuplicateVertices { index: i, next: j });
        }
    }
    let weights = match weights {
        Some(w) => w,
        None => (0..n).map(|i| 1.0 / (samples[i] - samples[(i + 1) % n]).norm_sqr()).collect(),
    };
    PolarisedCurve::new(samples, weights, true)
}

/// True iff `||dx|² − 1/m| ≤ tol` on every edge.
pub fn is_arclength_polarised(curve: &PolarisedCurve, tol: f64) -> bool {
    arclength_deviation(curve).is_none_or(|(_, d)| d <= tol)
}

/// The edge with the largest `||dx|² − 1/m|` and that deviation.
pub fn arclength_deviation(curve: &PolarisedCurve) -> Option<(usize, f64)> {
    (0..curve.edge_count())
        .map(|e| {
            let (i, j) = curve.edge_endpoints(e);
            let d = ((curve.vertices[i] - curve.vertices[j]).norm_sqr() - 1.0 / curve.weights[e]).abs();
            (e, d)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

/// On-disk curve document.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub closed: bool,
    pub vertices: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
}

impl From<&PolarisedCurve> for CurveDocument {
    fn from(c: &PolarisedCurve) -> Self {
        CurveDocument {
            closed: c.closed,
            vertices: c.vertices.iter().map(|v| v.to_array()).collect(),
            weights: c.weights.clone(),
        }
    }
}

impl TryFrom<CurveDocument> for PolarisedCurve {
    type Error = Error;
    fn try_from(doc: CurveDocument) -> Result<Self> {
        let vertices = doc.vertices.into_iter().map(Quaternion::from_array).collect();
        PolarisedCurve::new(vertices, doc.weights, doc.closed)
    }
}

/// Writes the curve document. `serde_json` prints shortest round-trip
/// representations, so decoded values are bit-identical.
pub fn save_curve<W: Write>(curve: &PolarisedCurve, sink: W) -> Result<()> {
    serde_json::to_writer_pretty(sink, &CurveDocument::from(curve)).map_err(|e| {
        if e.is_io() {
            Error::Io(e.into())
        } else {
            Error::Schema(e.to_string())
        }
    })
}

pub fn load_curve<R: Read>(source: R) -> Result<PolarisedCurve> {
    let doc: CurveDocument = serde_json::from_reader(source).map_err(|e| {
        if e.is_io() {
            Error::Io(e.into())
        } else {
            Error::Schema(e.to_string())
        }
    })?;
    PolarisedCurve::try_from(doc)
}

pub fn curve_to_json(curve: &PolarisedCurve) -> String {
    serde_json::to_string_pretty(&CurveDocument::from(curve)).expect("curve documents always serialize")
}

pub fn curve_from_json(s: &str) -> Result<PolarisedCurve> {
    load_curve(s.as_bytes())
}
