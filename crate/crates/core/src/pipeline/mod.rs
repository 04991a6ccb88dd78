//! The full reconstruction: calibration checks, both convex programs,
//! de-lifting, phase-aligned error metrics and theorem certificates.

mod calibration;
mod certificates;
mod reconstruct;

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use calibration::{
    calibrated_eps_prime, check_calibration, eps_bound, max_sampling_step, min_margin, omega_count, CalibrationReport,
    Condition, SignalData,
};
pub use certificates::{
    certificates, coefficient_bound, end_to_end_bound, synthesis_bound, Bound, Certificates, L2_STEP,
};
pub use reconstruct::{
    complete, fit_ansatz, reconstruct, AnsatzFit, Failure, PipelineConfig, ReconstructionResult, Stage, Step2Tolerance,
    EIGEN_GAP_WARNING,
};

use crate::error::Result;
use crate::gabor::Signal;
use crate::io::{self, Provenance};

pub const TRACE_HEADER: [&str; 5] = ["t", "re_f", "im_f", "re_f_star", "im_f_star"];
/// Sampling step of the trace CSV.
pub const TRACE_STEP: f64 = 0.01;

/// Returns `θ` with `e^{iθ} a ≈ b`, i.e. `θ = arg Σ conj(a_k) b_k`, and
/// `min_θ |b - e^{iθ} a|`. Orthogonal inputs give `θ = 0`.
pub fn align_phase(a: &[Complex64], b: &[Complex64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len(), "align_phase needs equal lengths");
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let theta = if ip.norm() > 0.0 { ip.arg() } else { 0.0 };
    let rot = Complex64::from_polar(1.0, theta);
    let err = a
        .iter()
        .zip(b)
        .map(|(x, y)| (y - rot * x).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (theta, err)
}

/// `T - 1.5`, or `T/2` when that is not positive.
pub fn default_tau(t: f64) -> f64 {
    if t > 1.5 {
        t - 1.5
    } else {
        t / 2.0
    }
}

/// JSON report of one reconstruction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub result: ReconstructionResult,
    pub certificates: Option<Certificates>,
}

impl RunReport {
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&io::read_text(path)?)?)
    }
}

/// `t, Re f, Im f, Re f*, Im f*` on `[-half, half]`, with `f` multiplied by
/// `e^{iθ}`. Without a reference signal the `f` columns are NaN.
pub fn write_trace(
    path: &Path,
    provenance: &Provenance,
    result: &ReconstructionResult,
    reference: Option<(&Signal, f64)>,
    half: f64,
) -> Result<()> {
    let n = (2.0 * half / TRACE_STEP).round() as usize;
    let rows = (0..=n).map(|i| {
        let t = -half + TRACE_STEP * i as f64;
        let fs = result.synthesize(t);
        let f = match reference {
            Some((sig, theta)) => sig.evaluate(t) * Complex64::from_polar(1.0, theta),
            None => Complex64::new(f64::NAN, f64::NAN),
        };
        vec![t, f.re, f.im, fs.re, fs.im]
    });
    io::write_csv(path, provenance, &TRACE_HEADER, rows)
}
