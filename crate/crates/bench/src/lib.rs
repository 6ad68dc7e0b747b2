//! Benchmarks live in `benches/`; run with `cargo bench -p darboux-bench`.

use darboux_core::curve::make_torus_knot_samples;
use darboux_core::PolarisedCurve;

/// The (2, 3) torus knot with `m` samples used across benches.
pub fn knot(m: usize) -> PolarisedCurve {
    make_torus_knot_samples(2, 3, m, (2.0, 1.0)).expect("valid knot parameters")
}
