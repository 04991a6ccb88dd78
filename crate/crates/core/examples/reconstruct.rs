//! End-to-end phase retrieval from spectrogram samples with theorem
//! certificates against the known truth.
//!
//! Usage: `cargo run --release --example reconstruct [iterations] [nu]`.
//! The defaults (single atom, 3×3 patch, 4000 iterations) take about ten
//! seconds.

use gabor_phase::gabor::{sample_spectrogram, LatticeWindows, Signal, WindowParams, LATTICE_STEP};
use gabor_phase::pipeline::{certificates, reconstruct, PipelineConfig};
use gabor_phase::sdp::SolverConfig;
use num_complex::Complex64;

fn main() -> gabor_phase::Result<()> {
    let mut args = std::env::args().skip(1);
    let iterations: usize = args.next().map_or(4000, |a| a.parse().expect("iterations"));
    let nu: f64 = args.next().map_or(0.0, |a| a.parse().expect("noise level"));

    let f = Signal::atom(LATTICE_STEP, [0, 0], Complex64::from_polar(1.0, 0.4));
    let w = LatticeWindows::new(WindowParams {
        t: LATTICE_STEP,
        s_half: LATTICE_STEP,
        margin: 1.0,
        r: 1.01,
        s: 0.25,
    })?;
    let samples = sample_spectrogram(&f, &w.omega, nu, 1)?;
    let cfg = PipelineConfig {
        step1: SolverConfig {
            max_iter: iterations,
            ..Default::default()
        },
        ..Default::default()
    };
    let eps = nu + 1e-4;
    let start = std::time::Instant::now();
    let res = reconstruct(&samples, &w, eps, &cfg)?;
    println!("solved in {:.1} s", start.elapsed().as_secs_f64());
    if let Some(fail) = &res.failure {
        println!("{:?} failed: {}", fail.stage, fail.message);
        return Ok(());
    }
    for warning in &res.warnings {
        println!("warning: {warning}");
    }
    println!(
        "eps = {eps:.1e}, eps' = {:.1e}, relative eigen gap {:.2e}",
        res.eps_prime, res.relative_gap
    );

    let cert = certificates(&res, &f, &w, None)?;
    println!(
        "tau = {:.3}, lambda2 = {:.3e}, C_stab = {:.3e}",
        cert.tau, cert.lambda2, cert.c_stab
    );
    println!(
        "coefficients: {:.3e} <= {:.3e}",
        cert.coefficients.measured, cert.coefficients.bound
    );
    println!(
        "synthesis:    {:.3e} <= {:.3e}",
        cert.synthesis.measured, cert.synthesis.bound
    );
    println!(
        "end to end:   {:.3e} <= {:.3e} (relative {:.2e})",
        cert.end_to_end.measured,
        cert.end_to_end.bound,
        cert.end_to_end.measured / cert.signal_norm
    );
    println!("outside guaranteed regime: {}", cert.outside_guaranteed_regime);
    Ok(())
}
