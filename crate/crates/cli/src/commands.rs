use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use darboux_core::curve::{
    load_curve, make_discrete_circle, make_planar_circle, make_torus_knot_samples, save_curve, CurveDocument,
};
use darboux_core::darboux::{
    bicycle_transform_with, circle_closed_form, darboux_transform_with, discrete_circleton, find_resonances, multiplier_spectrum,
    DarbouxResult,
};
use darboux_core::smooth::{
    cover_period, rk4_darboux, sample, smooth_circle_darboux, smooth_circleton, smooth_circleton_mu, uniform_grid,
    write_trajectory_csv, AnalyticCurve, SmoothCircleParams, Trajectory,
};
use darboux_core::{monodromy, Complex64, PolarisedCurve, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::failure::{CliResult, Failure};
use crate::render::render_svg;
use crate::{finite, BicycleArgs, CircletonArgs, Command, GenerateKind, MonodromyArgs, RenderArgs, ResonanceArgs};
use crate::{SmoothKind, TransformArgs};

pub fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Generate { kind } => generate(kind),
        Command::Transform(a) => transform(a),
        Command::Monodromy(a) => cmd_monodromy(a),
        Command::Resonances(a) => resonances(a),
        Command::Bicycle(a) => bicycle(a),
        Command::Circleton(a) => circleton(a),
        Command::Render(a) => render(a),
        Command::Smooth { kind } => smooth(kind),
    }
}

/// A closed stdout (e.g. piped into `head`) is not an error.
fn quiet_pipe(r: io::Result<()>) -> CliResult<()> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn emit(value: &Value) -> CliResult<()> {
    let mut out = io::stdout().lock();
    quiet_pipe(serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from).and_then(|_| writeln!(out)))
}

fn read_curve(path: &Path) -> CliResult<PolarisedCurve> {
    let f = File::open(path).map_err(|e| Failure::input(path, e))?;
    load_curve(BufReader::new(f)).map_err(|e| Failure::input(path, e))
}

fn write_curve(path: &Path, curve: &PolarisedCurve) -> CliResult<()> {
    let f = File::create(path).map_err(|e| Failure::input(path, e))?;
    let mut w = BufWriter::new(f);
    save_curve(curve, &mut w).map_err(|e| Failure::input(path, e))?;
    w.flush().map_err(|e| Failure::input(path, e))
}

fn curve_summary(curve: &PolarisedCurve) -> Value {
    json!({
        "vertices": curve.vertex_count(),
        "closed": curve.is_closed(),
        "diameter": curve.diameter(),
    })
}

/// Writes the curve to `output` if given, otherwise embeds its document in
/// `report` under `curve`.
fn attach_curve(report: &mut Value, curve: &PolarisedCurve, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(p) => {
            write_curve(p, curve)?;
            report["output"] = json!(p.display().to_string());
        }
        None => report["curve"] = serde_json::to_value(CurveDocument::from(curve)).expect("serializable"),
    }
    Ok(())
}

fn quat(name: &str, v: &[f64]) -> CliResult<Quaternion> {
    finite(name, v)?;
    Ok(Quaternion::new(v[0], v[1], v[2], v[3]))
}

fn generate(kind: GenerateKind) -> CliResult<u8> {
    let (curve, output) = match kind {
        GenerateKind::Circle { m, output } => (make_discrete_circle(m)?, output),
        GenerateKind::PlanarCircle { m, output } => (make_planar_circle(m)?, output),
        GenerateKind::TorusKnot { p, q, m, major, minor, output } => {
            finite("major", &[major, minor])?;
            (make_torus_knot_samples(p, q, m, (major, minor))?, output)
        }
        GenerateKind::FromFile { input, output } => (read_curve(&input)?, output),
    };
    match output {
        Some(p) => {
            write_curve(&p, &curve)?;
            let mut report = curve_summary(&curve);
            report["output"] = json!(p.display().to_string());
            emit(&report)?;
        }
        // A bare document, so that stdout can be redirected into a curve file.
        None => emit(&serde_json::to_value(CurveDocument::from(&curve)).expect("serializable"))?,
    }
    Ok(0)
}

fn transform_report(result: &DarbouxResult) -> Value {
    let mut report = serde_json::to_value(result.diagnostics()).expect("serializable");
    report["start_vertex"] = json!(result.start_vertex);
    report["periods"] = json!(result.periods);
    report["max_riccati_residual"] = json!(result.max_riccati_residual);
    report["vertices"] = json!(result.vertices().len());
    if result.mu == 0.0 {
        report["note"] = json!("mu = 0 is degenerate: the transform is constant");
    }
    report
}

fn transform(a: TransformArgs) -> CliResult<u8> {
    finite("mu", &[a.mu])?;
    finite("radius", &[a.radius])?;
    let curve = read_curve(&a.curve)?;
    if let Some(n) = a.sweep {
        return sweep(&curve, &a, n, a.seed.expect("clap enforces --seed"));
    }
    let x0 = match (&a.x0, &a.circle_c1) {
        (Some(x0), None) => quat("x0", x0)?,
        (None, Some(c)) => {
            finite("circle-c1", c)?;
            let m = curve.period().ok_or_else(|| Failure::Usage("--circle-c1 needs a closed circle".into()))?;
            circle_closed_form(m, a.mu, Complex64::new(c[0], 0.0), Complex64::new(c[1], 0.0), a.start)?
        }
        _ => return Err(Failure::Usage("give one of --x0, --circle-c1 or --sweep".into())),
    };
    let result = darboux_transform_with(&curve, a.mu, x0, a.start, a.periods)?;
    let mut report = transform_report(&result);
    attach_curve(&mut report, &result.transform, a.output.as_deref())?;
    emit(&report)?;
    Ok(if result.hit_infinity { 2 } else { 0 })
}

fn sweep(curve: &PolarisedCurve, a: &TransformArgs, n: usize, seed: u64) -> CliResult<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = a.radius;
    let centre = curve.vertex(a.start);
    let mut runs = Vec::with_capacity(n);
    let (mut closed, mut infinite) = (0, 0);
    for _ in 0..n {
        let offset = Quaternion::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r));
        let x0 = centre + offset;
        let result = darboux_transform_with(curve, a.mu, x0, a.start, a.periods)?;
        closed += result.closed as usize;
        infinite += result.hit_infinity as usize;
        runs.push(json!({
            "x0": x0.to_array(),
            "closed": result.closed,
            "closure_error": result.closure_error,
            "hit_infinity": result.hit_infinity,
            "max_cross_ratio_residual": result.max_cross_ratio_residual,
        }));
    }
    emit(&json!({
        "mu": a.mu,
        "seed": seed,
        "samples": n,
        "closed": closed,
        "hit_infinity": infinite,
        "runs": runs,
    }))?;
    Ok(0)
}

fn cmd_monodromy(a: MonodromyArgs) -> CliResult<u8> {
    finite("mu", &[a.mu])?;
    let curve = read_curve(&a.curve)?;
    let h = monodromy(&curve, a.mu, a.base)?;
    let spectrum = multiplier_spectrum(&curve, a.mu, a.base)?;
    emit(&json!({ "monodromy": h, "spectrum": spectrum }))?;
    Ok(0)
}

fn resonances(a: ResonanceArgs) -> CliResult<u8> {
    finite("lo", &[a.lo, a.hi])?;
    let curve = read_curve(&a.curve)?;
    let found = find_resonances(&curve, a.lo, a.hi, a.grid)?;
    emit(&json!({ "lo": a.lo, "hi": a.hi, "grid": a.grid, "resonances": found }))?;
    Ok(0)
}

fn bicycle(a: BicycleArgs) -> CliResult<u8> {
    finite("mu", &[a.mu])?;
    let direction = quat("direction", &a.direction)?;
    let curve = read_curve(&a.curve)?;
    let result = bicycle_transform_with(&curve, a.mu, direction, a.start, a.periods)?;
    let mut report = transform_report(&result);
    attach_curve(&mut report, &result.transform, a.output.as_deref())?;
    emit(&report)?;
    Ok(if result.hit_infinity { 2 } else { 0 })
}

fn circleton(a: CircletonArgs) -> CliResult<u8> {
    finite("tau", &[a.tau])?;
    let result = discrete_circleton(a.m, a.k, a.l, a.tau)?;
    let mut report = transform_report(&result);
    report["M"] = json!(a.m);
    report["k"] = json!(a.k);
    report["l"] = json!(a.l);
    report["tau"] = json!(a.tau);
    attach_curve(&mut report, &result.transform, a.output.as_deref())?;
    emit(&report)?;
    Ok(if result.hit_infinity { 2 } else { 0 })
}

fn render(a: RenderArgs) -> CliResult<u8> {
    let curves = a.inputs.iter().map(|p| read_curve(p)).collect::<CliResult<Vec<_>>>()?;
    let projection = a.projection.resolve(&curves);
    let svg = render_svg(&curves, projection).map_err(Failure::Usage)?;
    match a.output {
        Some(p) => {
            std::fs::write(&p, svg).map_err(|e| Failure::input(&p, e))?;
            emit(&json!({
                "output": p.display().to_string(),
                "curves": curves.len(),
                "projection": projection.name(),
            }))?;
        }
        None => quiet_pipe(io::stdout().lock().write_all(svg.as_bytes()))?,
    }
    Ok(0)
}

fn write_csv(traj: &Trajectory, output: Option<&Path>, mut report: Value) -> CliResult<u8> {
    match output {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::input(p, e))?;
            write_trajectory_csv(traj, BufWriter::new(f)).map_err(|e| Failure::input(p, e))?;
            report["output"] = json!(p.display().to_string());
            report["rows"] = json!(traj.points.len());
            report["blew_up"] = json!(traj.blew_up);
            emit(&report)?;
        }
        None => {
            let mut buf = Vec::new();
            write_trajectory_csv(traj, &mut buf)?;
            quiet_pipe(io::stdout().lock().write_all(&buf))?;
        }
    }
    Ok(if traj.blew_up { 2 } else { 0 })
}

fn samples_grid(samples: usize, end: f64) -> CliResult<Vec<f64>> {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    Ok(uniform_grid(0.0, end, samples))
}

fn smooth(kind: SmoothKind) -> CliResult<u8> {
    match kind {
        SmoothKind::Circle { mu, c1m, c1p, samples, periods, output } => {
            finite("mu", &[mu, c1m, c1p])?;
            let p = SmoothCircleParams::planar(mu, Complex64::new(c1m, 0.0), Complex64::new(c1p, 0.0));
            let grid = samples_grid(samples, cover_period(periods))?;
            let traj = sample(&grid, |t| smooth_circle_darboux(t, &p))?;
            write_csv(&traj, output.as_deref(), json!({ "mu": mu }))
        }
        SmoothKind::Rk4 { mu, c1m, c1p, steps, periods, output } => {
            finite("mu", &[mu, c1m, c1p])?;
            let p = SmoothCircleParams::planar(mu, Complex64::new(c1m, 0.0), Complex64::new(c1p, 0.0));
            let grid = samples_grid(steps, cover_period(periods))?;
            let traj = rk4_darboux(&AnalyticCurve::circle(), mu, smooth_circle_darboux(0.0, &p)?, &grid)?;
            let mut err: f64 = 0.0;
            for (t, q) in traj.t.iter().zip(&traj.points) {
                err = err.max((smooth_circle_darboux(*t, &p)? - *q).norm());
            }
            write_csv(&traj, output.as_deref(), json!({ "mu": mu, "steps": steps, "max_error": err }))
        }
        SmoothKind::Circleton { k, l, tau, samples, output } => {
            finite("tau", &[tau])?;
            if l == 0 {
                return Err(Failure::Usage("--l must be positive".into()));
            }
            let mu = smooth_circleton_mu(k, l);
            let grid = samples_grid(samples, cover_period(l))?;
            let traj = sample(&grid, |t| smooth_circleton(t, mu, tau).map(Quaternion::from_complex))?;
            write_csv(&traj, output.as_deref(), json!({ "mu": mu, "k": k, "l": l, "tau": tau }))
        }
    }
}
