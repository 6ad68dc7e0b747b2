//! SVG polyline plots of curve documents.

use std::fmt::Write as _;
use std::str::FromStr;

use darboux_core::{PolarisedCurve, Quaternion};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const AXES: [char; 4] = ['w', 'x', 'y', 'z'];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Pick a coordinate plane if every curve lies in one, otherwise drop `w`.
    Auto,
    /// Orthographic onto two coordinate axes.
    Axes(usize, usize),
    /// Drop one coordinate and view the remaining three obliquely.
    Drop(usize),
}

impl FromStr for Projection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let axis = |c: char| AXES.iter().position(|&a| a == c);
        if s == "auto" {
            return Ok(Projection::Auto);
        }
        if let Some(c) = s.strip_prefix("drop-") {
            let mut chars = c.chars();
            if let (Some(a), None) = (chars.next(), chars.next()) {
                if let Some(k) = axis(a) {
                    return Ok(Projection::Drop(k));
                }
            }
        }
        let chars: Vec<char> = s.chars().collect();
        if let [a, b] = chars[..] {
            if let (Some(i), Some(j)) = (axis(a), axis(b)) {
                if i != j {
                    return Ok(Projection::Axes(i, j));
                }
            }
        }
        Err(format!("unknown projection `{s}`; use auto, drop-<w|x|y|z> or two axes such as yz"))
    }
}

impl Projection {
    pub fn name(&self) -> String {
        match *self {
            Projection::Auto => "auto".into(),
            Projection::Axes(i, j) => format!("{}{}", AXES[i], AXES[j]),
            Projection::Drop(k) => format!("drop-{}", AXES[k]),
        }
    }

    /// Resolves `Auto` against the curves to be drawn.
    pub fn resolve(self, curves: &[PolarisedCurve]) -> Projection {
        if self != Projection::Auto {
            return self;
        }
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for v in curves.iter().flat_map(|c| c.vertices()) {
            for (k, c) in v.to_array().into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let scale = (0..4).map(|k| hi[k] - lo[k]).fold(0.0, f64::max).max(1e-300);
        let varying: Vec<usize> = (0..4).filter(|&k| hi[k] - lo[k] > 1e-12 * scale).collect();
        match varying[..] {
            [i, j] => Projection::Axes(i, j),
            [i] => Projection::Axes(i, if i == 0 { 1 } else { 0 }),
            _ => Projection::Drop(0),
        }
    }

    fn apply(&self, q: Quaternion) -> (f64, f64) {
        let a = q.to_array();
        match *self {
            Projection::Axes(i, j) => (a[i], a[j]),
            Projection::Drop(k) => {
                let rest: Vec<f64> = (0..4).filter(|&i| i != k).map(|i| a[i]).collect();
                let (c, s) = (PI6.cos(), PI6.sin());
                ((rest[0] - rest[1]) * c, rest[2] - (rest[0] + rest[1]) * s)
            }
            Projection::Auto => unreachable!("resolve before projecting"),
        }
    }
}

const PI6: f64 = std::f64::consts::PI / 6.0;

/// One polyline per curve, the first in black. Closed curves repeat their
/// first point.
pub fn render_svg(curves: &[PolarisedCurve], projection: Projection) -> Result<String, String> {
    if curves.is_empty() {
        return Err("nothing to render".into());
    }
    let projection = projection.resolve(curves);
    let paths: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|c| {
            let mut pts: Vec<(f64, f64)> = c.vertices().iter().map(|v| projection.apply(*v)).collect();
            if c.is_closed() {
                pts.push(pts[0]);
            }
            pts
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in paths.iter().flatten() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let k = (WIDTH - 2.0 * MARGIN) / span;
    let w = (x1 - x0) * k + 2.0 * MARGIN;
    let h = (y1 - y0) * k + 2.0 * MARGIN;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.3} {h:.3}">"#
    )
    .unwrap();
    for (n, pts) in paths.iter().enumerate() {
        let color = if n == 0 { "#000000" } else { PALETTE[(n - 1) % PALETTE.len()] };
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", (x - x0) * k + MARGIN, (y1 - y) * k + MARGIN))
            .collect();
        writeln!(
            out,
            r#"  <polyline fill="none" stroke="{color}" stroke-width="{}" points="{}"/>"#,
            if n == 0 { 1.5 } else { 1.0 },
            coords.join(" ")
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
