//! Command-line surface of the `gpr` binary.
//!
//! Exit codes: 0 success, 1 error (reported as JSON on stderr), 2 a solve
//! stage failed, 3 calibration failed under `--strict-calibration`, 4 a
//! `verify` check failed.

pub mod verify;

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gabor::{sample_spectrogram, LatticeWindows, Signal, SpectrogramSamples, WindowParams};
use crate::graph::{candidate_radii, default_radius_cap, r_star, signal_graph};
use crate::io::{self, Provenance};
use crate::pipeline::{
    certificates, check_calibration, reconstruct, write_trace, PipelineConfig, RunReport, SignalData, Step2Tolerance,
};
use crate::sdp::SolverConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SOLVE_FAILED: i32 = 2;
pub const EXIT_CALIBRATION: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

pub const GRAPH_HEADER: [&str; 4] = ["r", "lambda2", "c_stab", "selected"];

#[derive(Debug, Parser)]
#[command(name = "gpr", version, about = "Gabor phase retrieval from spectrogram samples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random signal with coefficients uniform on the complex unit disk.
    Gen(GenArgs),
    /// Spectrogram samples of a signal on Ω, with optional uniform noise.
    Sample(SampleArgs),
    /// Full reconstruction: writes report.json and trace.csv.
    Reconstruct(ReconstructArgs),
    /// Spectral gap and C_stab of the signal graph over candidate radii.
    AnalyzeGraph(GraphArgs),
    /// Runs the built-in oracle suite.
    Verify,
}

/// Window parameters; defaults give a 5×5 Λ.
#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct WindowArgs {
    /// Half-width in time of Λ.
    #[arg(long = "T", default_value_t = 2.0 * FRAC_1_SQRT_2)]
    #[serde(rename = "T")]
    pub t: f64,
    /// Half-width in frequency of Λ.
    #[arg(long = "S", default_value_t = 2.0 * FRAC_1_SQRT_2)]
    #[serde(rename = "S")]
    pub s_half: f64,
    /// Sampling margin around Λ.
    #[arg(long = "R", default_value_t = 1.0)]
    #[serde(rename = "R")]
    pub margin: f64,
    /// Band radius.
    #[arg(long = "r", default_value_t = 1.01)]
    pub r: f64,
    /// Sampling step on Ω.
    #[arg(long = "s", default_value_t = 0.25)]
    pub s: f64,
}

impl WindowArgs {
    pub fn params(&self) -> WindowParams {
        WindowParams {
            t: self.t,
            s_half: self.s_half,
            margin: self.margin,
            r: self.r,
            s: self.s,
        }
    }

    pub fn windows(&self) -> Result<LatticeWindows> {
        LatticeWindows::new(self.params())
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Lattice step of the signal.
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub a: f64,
    /// Half-width in time of the coefficient box Ξ.
    #[arg(long, default_value_t = 1.0)]
    pub box_x: f64,
    /// Half-width in frequency of the coefficient box Ξ.
    #[arg(long, default_value_t = 1.0)]
    pub box_y: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub window: WindowArgs,
    /// Noise amplitude: σ = Sf + uniform[-ν, ν].
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub samples: PathBuf,
    /// Ground truth; enables certificates and the f columns of the trace.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub window: WindowArgs,
    /// Step-1 tolerance ε.
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Completion tolerance ε′; defaults to 10ε.
    #[arg(long)]
    pub eps_prime: Option<f64>,
    /// Use the calibrated ε′ formula instead of 10ε.
    #[arg(long, conflicts_with = "eps_prime")]
    pub calibrated_eps_prime: bool,
    /// Solver configuration JSON applied to both steps.
    #[arg(long)]
    pub solver_config: Option<PathBuf>,
    /// Exit with code 3 when the calibration conditions fail.
    #[arg(long)]
    pub strict_calibration: bool,
    /// Half-width of the certificate interval; defaults to T - 1.5 (or T/2).
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub window: WindowArgs,
    /// Comma-separated radii; defaults to lattice distances + 0.01 up to --radius-cap.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long, default_value_t = default_radius_cap())]
    pub radius_cap: f64,
    /// Also export the graph at r* as JSON.
    #[arg(long)]
    pub graph_json: Option<PathBuf>,
}

/// Value of `GPR_THREADS`. Computation is single-threaded, so any positive
/// cap is honoured; the value is validated and echoed in provenance.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("GPR_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Parameter(format!(
                "GPR_THREADS must be a positive integer, got {v:?}"
            ))),
        },
    }
}

fn provenance(command: &str, args: &impl Serialize, seeds: Vec<u64>) -> Result<Provenance> {
    let mut config = serde_json::to_value(args)?;
    if let Some(obj) = config.as_object_mut() {
        obj.insert("command".into(), json!(command));
        obj.insert("threads".into(), json!(thread_cap()?));
    }
    Ok(Provenance::new(config, seeds))
}

pub fn cmd_gen(args: &GenArgs) -> Result<Signal> {
    let f = Signal::random(args.a, args.box_x, args.box_y, args.seed)?;
    f.write_with(&args.out, &provenance("gen", args, vec![args.seed])?)?;
    Ok(f)
}

pub fn cmd_sample(args: &SampleArgs) -> Result<SpectrogramSamples> {
    let f = Signal::read(&args.signal)?;
    let w = args.window.windows()?;
    let samples = sample_spectrogram(&f, &w.omega, args.nu, args.seed)?;
    samples.write_csv(&args.out, &provenance("sample", args, vec![args.seed])?)?;
    Ok(samples)
}

fn read_solver_config(path: &Path) -> Result<SolverConfig> {
    let text = io::read_text(path)?;
    let cfg: SolverConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: format!("{}: line {}, column {}", path.display(), e.line(), e.column()),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the pipeline and writes `report.json` (always) and `trace.csv`
/// (when coefficients were recovered) into `args.out`. Returns the exit code.
pub fn cmd_reconstruct(args: &ReconstructArgs) -> Result<i32> {
    let samples = SpectrogramSamples::read_csv(&args.samples)?;
    let windows = args.window.windows()?;
    let solver = match &args.solver_config {
        Some(p) => read_solver_config(p)?,
        None => SolverConfig::default(),
    };
    let cfg = PipelineConfig {
        step1: solver,
        step2: solver,
        step2_tolerance: match (args.eps_prime, args.calibrated_eps_prime) {
            (Some(v), _) => Step2Tolerance::Explicit(v),
            (None, true) => Step2Tolerance::Calibrated,
            (None, false) => Step2Tolerance::default(),
        },
        normalize: true,
    };
    let signal = args.signal.as_deref().map(Signal::read).transpose()?;
    std::fs::create_dir_all(&args.out)?;
    let mut config = serde_json::to_value(args)?;
    config["pipeline"] = serde_json::to_value(cfg)?;
    let prov = provenance("reconstruct", &config, vec![samples.seed])?;

    if args.strict_calibration {
        if let Some(f) = &signal {
            // Pre-check with the true spectrogram before any solve.
            let g = signal_graph(f, &windows.lambda, windows.params.r)?;
            let scale = samples.max_value();
            if scale > 0.0 && g.len() >= 2 {
                let data = SignalData {
                    norm_sq: g.total_weight() / scale,
                    lambda2: g.spectral_gap()? / scale,
                    lambda_len: g.len(),
                };
                let cal = check_calibration(&windows.params, args.eps / scale, &data, None)?;
                if !cal.all_pass() {
                    let report = json!({
                        "provenance": prov,
                        "status": "calibration-failed",
                        "calibration": cal,
                    });
                    std::fs::write(
                        args.out.join("report.json"),
                        serde_json::to_string_pretty(&report)? + "\n",
                    )?;
                    return Ok(EXIT_CALIBRATION);
                }
            }
        }
    }

    let result = reconstruct(&samples, &windows, args.eps, &cfg)?;
    let certs = match (&signal, result.succeeded()) {
        (Some(f), true) => Some(certificates(&result, f, &windows, args.tau)?),
        _ => None,
    };
    if result.succeeded() {
        let reference = signal.as_ref().zip(certs.as_ref().map(|c| c.theta));
        write_trace(&args.out.join("trace.csv"), &prov, &result, reference, windows.params.t)?;
    }
    let calibration_ok = match &certs {
        Some(c) => c.calibration.all_pass(),
        None => result.calibration.as_ref().is_some_and(|c| c.all_pass()),
    };
    let code = if !result.succeeded() {
        EXIT_SOLVE_FAILED
    } else if args.strict_calibration && !calibration_ok {
        EXIT_CALIBRATION
    } else {
        EXIT_OK
    };
    let report = RunReport {
        provenance: prov,
        result,
        certificates: certs,
    };
    report.write(&args.out.join("report.json"))?;
    Ok(code)
}

pub fn cmd_analyze_graph(args: &GraphArgs) -> Result<crate::graph::RadiusSelection> {
    let f = Signal::read(&args.signal)?;
    let w = args.window.windows()?;
    let radii = match &args.radii {
        Some(r) => r.clone(),
        None => candidate_radii(args.radius_cap),
    };
    if radii.is_empty() {
        return Err(Error::Parameter("no candidate radii".into()));
    }
    let weights: Vec<f64> = w.lambda.iter().map(|&p| f.spectrogram(p)).collect();
    let sel = r_star(&w.lambda, &weights, &radii)?;
    let prov = provenance("analyze-graph", args, vec![f.seed()])?;
    let rows = sel.rows.iter().map(|row| {
        vec![
            row.r,
            row.lambda2,
            row.c_stab,
            if Some(row.r) == sel.r_star { 1.0 } else { 0.0 },
        ]
    });
    io::write_csv(&args.out, &prov, &GRAPH_HEADER, rows)?;
    if let (Some(path), Some(r)) = (&args.graph_json, sel.r_star) {
        signal_graph(&f, &w.lambda, r)?.write_json(path, &prov)?;
    }
    Ok(sel)
}

pub fn cmd_verify(out: &mut impl std::io::Write) -> Result<bool> {
    Ok(verify::run_checks(&verify::checks(), out)?)
}

/// Dispatches a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(&a).map(|_| EXIT_OK),
        Command::Sample(a) => cmd_sample(&a).map(|_| EXIT_OK),
        Command::Reconstruct(a) => cmd_reconstruct(&a),
        Command::AnalyzeGraph(a) => cmd_analyze_graph(&a).map(|sel| {
            if sel.r_star.is_none() {
                eprintln!("graph is disconnected at every candidate radius");
            }
            EXIT_OK
        }),
        Command::Verify => cmd_verify(&mut std::io::stdout()).map(|ok| if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            EXIT_ERROR
        }
    }
}
