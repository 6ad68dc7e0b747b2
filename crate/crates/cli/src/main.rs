use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod failure;
mod render;

use failure::Failure;
use render::Projection;

#[derive(Parser, Debug)]
#[command(name = "darboux", version, about = "Darboux transforms and bicycle correspondences of discrete polarised curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a curve document
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Darboux transform from an initial point
    Transform(TransformArgs),
    /// Monodromy and multiplier spectrum at one spectral parameter
    Monodromy(MonodromyArgs),
    /// Resonance points in a spectral parameter range
    Resonances(ResonanceArgs),
    /// Bicycle correspondence of an arc-length polarised curve
    Bicycle(BicycleArgs),
    /// Discrete circleton over the ℓ-fold cover of the planar circle
    Circleton(CircletonArgs),
    /// SVG polyline plot of one or more curve documents
    Render(RenderArgs),
    /// CSV samples of smooth closed forms or RK4 trajectories
    Smooth {
        #[command(subcommand)]
        kind: SmoothKind,
    },
}

#[derive(Subcommand, Debug)]
enum GenerateKind {
    /// Circle `j e^{2πin/M}` in the jk-plane
    Circle {
        #[arg(long = "M")]
        m: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Circle `e^{2πin/M}` in the 1i-plane
    PlanarCircle {
        #[arg(long = "M")]
        m: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// (p, q) torus knot samples, arc-length polarised
    TorusKnot {
        #[arg(long)]
        p: i32,
        #[arg(long)]
        q: i32,
        #[arg(long = "M")]
        m: usize,
        #[arg(long, default_value_t = 2.0)]
        major: f64,
        #[arg(long, default_value_t = 1.0)]
        minor: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate and rewrite an existing document
    FromFile {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    /// Initial point `w x y z`
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["W", "X", "Y", "Z"],
          conflicts_with_all = ["circle_c1", "sweep"])]
    x0: Option<Vec<f64>>,
    /// Initial point from the discrete circle closed form with real
    /// constants `c1⁻ c1⁺`; the curve must be `generate circle`
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["C1M", "C1P"], conflicts_with = "sweep")]
    circle_c1: Option<Vec<f64>>,
    /// Run this many transforms from seeded random initial points
    #[arg(long, requires = "seed")]
    sweep: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Half-width of the box around the start vertex for sweep points
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, default_value_t = 1)]
    periods: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MonodromyArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    base: usize,
}

#[derive(Args, Debug)]
struct ResonanceArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, allow_negative_numbers = true)]
    hi: f64,
    #[arg(long, default_value_t = 400)]
    grid: usize,
}

#[derive(Args, Debug)]
struct BicycleArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    /// Unit quaternion `w x y z`; the rod is `direction/√μ`
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["W", "X", "Y", "Z"])]
    direction: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, default_value_t = 1)]
    periods: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CircletonArgs {
    #[arg(long = "M")]
    m: usize,
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[arg(long = "l")]
    l: usize,
    #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
    tau: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// auto, drop-<w|x|y|z>, or two axes such as yz
    #[arg(long, default_value = "auto")]
    projection: Projection,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SmoothKind {
    /// Closed-form transform of the circle `j e^{it}` with `c0± = 0`
    Circle {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        c1m: f64,
        #[arg(long, allow_negative_numbers = true)]
        c1p: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        periods: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// RK4 for the Riccati equation over the circle, started on the closed form
    Rk4 {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        c1m: f64,
        #[arg(long, allow_negative_numbers = true)]
        c1p: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        periods: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smooth circleton over the ℓ-fold cover of the planar circle
    Circleton {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long = "l")]
        l: usize,
        #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            let _ = writeln!(std::io::stdout(), "{}", f.to_json());
            ExitCode::from(f.code() as u8)
        }
    }
}

/// Rejects non-finite numeric flags.
fn finite(name: &str, values: &[f64]) -> Result<(), Failure> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Failure::Usage(format!("--{name} must be finite, got {v}"))),
        None => Ok(()),
    }
}
