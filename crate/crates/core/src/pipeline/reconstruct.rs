use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::calibration::{calibrated_eps_prime, check_calibration, CalibrationReport, SignalData};
use crate::ansatz::{build_predictor, EntireFunction, PredictorTable};
use crate::error::{Error, Result};
use crate::gabor::{synthesize, LatticeWindows, Point, SpectrogramSamples};
use crate::graph::build_graph;
use crate::numerics::{hermitian_eig, HermitianMatrix};
use crate::sdp::{build_step1, build_step2, solve, SolveReport, SolveStatus, SolverConfig};

/// Relative top-eigenvalue gap below which a warning is raised.
pub const EIGEN_GAP_WARNING: f64 = 1e-6;

/// Tolerance of the completion step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step2Tolerance {
    /// `(3.1×10⁴) √ε e^{17π/32 r²}`.
    Calibrated,
    /// A fixed value in the units of the samples.
    Explicit(f64),
    /// `k·ε`.
    ScaledEpsilon(f64),
}

impl Default for Step2Tolerance {
    fn default() -> Self {
        Step2Tolerance::ScaledEpsilon(10.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub step1: SolverConfig,
    pub step2: SolverConfig,
    pub step2_tolerance: Step2Tolerance,
    /// Divide the samples by their maximum before solving.
    pub normalize: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            step1: SolverConfig::default(),
            step2: SolverConfig::default(),
            step2_tolerance: Step2Tolerance::default(),
            normalize: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Step1,
    Step2,
    Delift,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub message: String,
    /// Solver reported the constraints infeasible.
    pub infeasible: bool,
}

/// Output of [`reconstruct`]. Matrices and coefficients are in the units of
/// the input samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub lambda: Vec<Point>,
    pub r: f64,
    pub eps: f64,
    /// Completion-step tolerance in force.
    pub eps_prime: f64,
    /// Divisor applied to the samples before solving.
    pub scale: f64,
    pub step1: Option<SolveReport>,
    pub step2: Option<SolveReport>,
    #[serde(skip)]
    pub a_star: Option<HermitianMatrix>,
    #[serde(skip)]
    pub predictor: Option<PredictorTable>,
    #[serde(skip)]
    pub y: Option<HermitianMatrix>,
    pub trace_y: f64,
    pub top_eigenvalues: Vec<f64>,
    /// `(η₁ - η₂) / η₁`.
    pub relative_gap: f64,
    /// Unit top eigenvector `v`.
    pub eigenvector: Vec<Complex64>,
    /// `√trace(Y) · v`.
    pub coefficients: Vec<Complex64>,
    /// Spectral gap of the graph weighted by the predicted diagonal, entries
    /// at or below `ε′` counted as zero.
    pub estimated_lambda2: Option<f64>,
    /// Calibration evaluated on the predicted diagonal in normalized units.
    pub calibration: Option<CalibrationReport>,
    pub outside_guaranteed_regime: bool,
    pub failure: Option<Failure>,
    pub warnings: Vec<String>,
}

impl ReconstructionResult {
    /// `f*(t) = Σ_λ c_λ π(λ)ψ(t)`.
    pub fn synthesize(&self, t: f64) -> Complex64 {
        synthesize(&self.lambda, &self.coefficients, t)
    }

    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

fn accepted(rep: &SolveReport, tol: f64) -> bool {
    match rep.status {
        SolveStatus::Solved => true,
        SolveStatus::MaxIterations => rep.max_residual <= tol,
        SolveStatus::InfeasibleDetected => false,
    }
}

fn stage_failure(stage: Stage, rep: &SolveReport) -> Failure {
    Failure {
        stage,
        message: format!(
            "solver stopped with status {:?} after {} iterations, max residual {:.3e}",
            rep.status, rep.iterations, rep.max_residual
        ),
        infeasible: rep.status == SolveStatus::InfeasibleDetected,
    }
}

/// Step 1 outcome, reusable across band radii.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzFit {
    pub gamma: Vec<Point>,
    /// Ansatz matrix for the normalized samples.
    pub a: HermitianMatrix,
    pub eps: f64,
    /// Divisor applied to the samples before solving.
    pub scale: f64,
    pub report: SolveReport,
    pub accepted: bool,
    pub warnings: Vec<String>,
}

/// Step 1: fits the Ansatz to the samples.
///
/// A solve that hits its iteration cap is accepted, with a warning, when its
/// largest constraint violation is within `ε`.
pub fn fit_ansatz(
    samples: &SpectrogramSamples,
    windows: &LatticeWindows,
    eps: f64,
    cfg: &PipelineConfig,
) -> Result<AnsatzFit> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::parameter(format!("ε must be positive, got {eps}")));
    }
    if samples.is_empty() {
        return Err(Error::parameter("no spectrogram samples"));
    }
    cfg.step1.validate()?;
    let peak = samples.max_value();
    if cfg.normalize && !(peak > 0.0) {
        return Err(Error::parameter("spectrogram samples carry no energy"));
    }
    let scale = if cfg.normalize { peak } else { 1.0 };
    let eps_n = eps / scale;
    let normalized = SpectrogramSamples {
        values: samples.values.iter().map(|v| v / scale).collect(),
        ..samples.clone()
    };
    let problem = build_step1(&windows.gamma, &normalized, eps_n)?;
    let (a_ext, report) = solve(&problem, &cfg.step1)?;
    let accepted = accepted(&report, eps_n);
    let mut warnings = Vec::new();
    if accepted && report.status != SolveStatus::Solved {
        warnings.push(format!(
            "step 1 reached {} iterations without certifying optimality; feasible to {:.3e}",
            report.iterations, report.max_residual
        ));
    }
    Ok(AnsatzFit {
        gamma: windows.gamma.clone(),
        a: a_ext.leading_block(windows.gamma.len()),
        eps,
        scale,
        report,
        accepted,
        warnings,
    })
}

/// Runs both convex programs and de-lifts the completed matrix.
///
/// Invalid inputs are errors. A solver that fails to produce an acceptable
/// point yields a partial result with [`ReconstructionResult::failure`] set.
pub fn reconstruct(
    samples: &SpectrogramSamples,
    windows: &LatticeWindows,
    eps: f64,
    cfg: &PipelineConfig,
) -> Result<ReconstructionResult> {
    complete(&fit_ansatz(samples, windows, eps, cfg)?, windows, cfg)
}

/// Steps 2 and 3 from a Step 1 fit: predictor on the band of radius
/// `windows.params.r`, completion, de-lifting.
///
/// A completion that hits its iteration cap is accepted, with a warning,
/// when its largest violation is within `ε′`.
pub fn complete(fit: &AnsatzFit, windows: &LatticeWindows, cfg: &PipelineConfig) -> Result<ReconstructionResult> {
    if fit.gamma != windows.gamma {
        return Err(Error::parameter(
            "Step 1 fit was computed on a different Ansatz support",
        ));
    }
    cfg.step2.validate()?;
    let scale = fit.scale;
    let r = windows.params.r;
    let eps_n = fit.eps / scale;
    let eps_prime_n = match cfg.step2_tolerance {
        Step2Tolerance::Calibrated => calibrated_eps_prime(eps_n, r),
        Step2Tolerance::Explicit(v) => v / scale,
        Step2Tolerance::ScaledEpsilon(k) => k * eps_n,
    };
    if !(eps_prime_n.is_finite() && eps_prime_n > 0.0) {
        return Err(Error::parameter(format!(
            "ε′ must be positive, got {}",
            eps_prime_n * scale
        )));
    }

    let mut result = ReconstructionResult {
        lambda: windows.lambda.clone(),
        r,
        eps: fit.eps,
        eps_prime: eps_prime_n * scale,
        scale,
        step1: Some(fit.report.clone()),
        step2: None,
        a_star: None,
        predictor: None,
        y: None,
        trace_y: 0.0,
        top_eigenvalues: Vec::new(),
        relative_gap: 0.0,
        eigenvector: Vec::new(),
        coefficients: Vec::new(),
        estimated_lambda2: None,
        calibration: None,
        outside_guaranteed_regime: true,
        failure: None,
        warnings: fit.warnings.clone(),
    };
    let mut a = fit.a.clone();
    a.scale(scale);
    result.a_star = Some(a);
    if !fit.accepted {
        result.failure = Some(stage_failure(Stage::Step1, &fit.report));
        return Ok(result);
    }

    let ansatz = EntireFunction::Ansatz {
        a: &fit.a,
        gamma: &fit.gamma,
    };
    let table = build_predictor(&ansatz, &windows.lambda, r)?;
    let step2 = build_step2(&table, eps_prime_n)?;
    let (mut y, rep2) = solve(&step2, &cfg.step2)?;
    let ok2 = accepted(&rep2, eps_prime_n);
    if ok2 && rep2.status != SolveStatus::Solved {
        result.warnings.push(format!(
            "step 2 reached {} iterations; feasible to {:.3e}",
            rep2.iterations, rep2.max_residual
        ));
    }
    result.step2 = Some(rep2.clone());

    let diag: Vec<f64> = table
        .diagonal()
        .into_iter()
        .map(|d| if d > eps_prime_n { d } else { 0.0 })
        .collect();
    if windows.lambda.len() >= 2 {
        let lambda2 = build_graph(&windows.lambda, &diag, r)?.spectral_gap()?;
        result.estimated_lambda2 = Some(lambda2);
        let data = SignalData {
            norm_sq: diag.iter().sum(),
            lambda2,
            lambda_len: windows.lambda.len(),
        };
        let cal = check_calibration(&windows.params, eps_n, &data, Some(eps_prime_n))?;
        result.outside_guaranteed_regime = !cal.all_pass();
        result.calibration = Some(cal);
    }
    result.predictor = Some(rescale_table(table, scale));

    if !ok2 {
        result.failure = Some(stage_failure(Stage::Step2, &rep2));
        y.scale(scale);
        result.y = Some(y);
        return Ok(result);
    }

    let eig = hermitian_eig(&y)?;
    let trace = y.trace();
    let (top, v) = eig.top();
    let second = if eig.values.len() >= 2 {
        eig.values[eig.values.len() - 2]
    } else {
        0.0
    };
    result.top_eigenvalues = eig.values.iter().rev().take(2).map(|l| l * scale).collect();
    result.relative_gap = if top > 0.0 { (top - second) / top } else { 0.0 };
    if result.relative_gap < EIGEN_GAP_WARNING {
        result.warnings.push(format!(
            "top eigenvalue is not separated: relative gap {:.3e}",
            result.relative_gap
        ));
    }
    result.eigenvector = v.to_vec();
    result.trace_y = trace * scale;
    if !(trace > 0.0) {
        result.failure = Some(Failure {
            stage: Stage::Delift,
            message: format!("completed matrix has trace {trace:.3e}"),
            infeasible: false,
        });
    } else {
        let amp = (trace * scale).sqrt();
        result.coefficients = v.iter().map(|z| z * amp).collect();
    }
    y.scale(scale);
    result.y = Some(y);
    Ok(result)
}

fn rescale_table(mut table: PredictorTable, scale: f64) -> PredictorTable {
    for e in &mut table.entries {
        e.value *= scale;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::{sample_spectrogram, Signal, WindowParams, LATTICE_STEP};
    use crate::pipeline::align_phase;

    fn windows(t: f64, s_half: f64, r: f64, s: f64) -> LatticeWindows {
        LatticeWindows::new(WindowParams {
            t,
            s_half,
            margin: 1.0,
            r,
            s,
        })
        .unwrap()
    }

    fn config(iters: usize) -> PipelineConfig {
        PipelineConfig {
            step1: SolverConfig {
                max_iter: iters,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    fn truth(f: &Signal, w: &LatticeWindows) -> Vec<Complex64> {
        w.lambda.iter().map(|&z| f.gabor_transform(z)).collect()
    }

    #[test]
    fn single_atom_small_patch() {
        let w = windows(LATTICE_STEP, LATTICE_STEP, 1.0, 0.5);
        let f = Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(0.6, -0.8));
        let samples = sample_spectrogram(&f, &w.omega, 0.0, 0).unwrap();
        let res = reconstruct(&samples, &w, 1e-4, &config(4000)).unwrap();
        assert!(res.succeeded(), "{:?}", res.failure);
        let (_, err) = align_phase(&truth(&f, &w), &res.coefficients);
        assert!(err <= 1e-3, "aligned error {err:e}");

        let norm: f64 = res.eigenvector.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(res.trace_y >= 0.0);

        // Completion constraints and trace consistency.
        let y = res.y.as_ref().unwrap();
        let table = res.predictor.as_ref().unwrap();
        assert_eq!(res.step2.as_ref().unwrap().status, SolveStatus::Solved);
        assert!(table.max_deviation(y) <= res.eps_prime + 1e-7);
        let diag_sum: f64 = table.diagonal().iter().sum();
        assert!((res.trace_y - diag_sum).abs() <= w.lambda.len() as f64 * res.eps_prime);
    }

    #[test]
    fn deterministic_and_phase_blind() {
        let w = windows(LATTICE_STEP, LATTICE_STEP, 1.0, 0.5);
        let f = Signal::new(
            LATTICE_STEP,
            vec![[0, 0], [1, 0]],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.4)],
        )
        .unwrap();
        let g = f.scaled(Complex64::from_polar(1.0, 1.3));
        let sf = sample_spectrogram(&f, &w.omega, 1e-6, 9).unwrap();
        let sg = sample_spectrogram(&g, &w.omega, 1e-6, 9).unwrap();
        for (a, b) in sf.values.iter().zip(&sg.values) {
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        }

        let cfg = config(400);
        let a = reconstruct(&sf, &w, 3e-6, &cfg).unwrap();
        let again = reconstruct(&sf, &w, 3e-6, &cfg).unwrap();
        assert_eq!(a, again);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&again).unwrap()
        );

        let b = reconstruct(&sg, &w, 3e-6, &cfg).unwrap();
        assert_eq!(a.succeeded(), b.succeeded());
        if a.succeeded() {
            let (_, ef) = align_phase(&truth(&f, &w), &a.coefficients);
            let (_, eg) = align_phase(&truth(&g, &w), &b.coefficients);
            assert!((ef - eg).abs() <= 1e-9, "{ef:e} vs {eg:e}");
        }
    }

    #[test]
    fn separated_atoms_need_bridging_radius() {
        // Opposite atoms at ±2𝔞: the spectrogram vanishes on the column x = 0.
        let f = Signal::new(
            LATTICE_STEP,
            vec![[-2, 0], [2, 0]],
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        )
        .unwrap();
        let narrow = windows(2.0 * LATTICE_STEP, 0.1, 1.01, 0.5);
        let wide = windows(2.0 * LATTICE_STEP, 0.1, 1.42, 0.5);
        assert_eq!(narrow.lambda.len(), 5);
        let samples = sample_spectrogram(&f, &narrow.omega, 0.0, 0).unwrap();
        let cfg = config(3000);
        let fit = fit_ansatz(&samples, &narrow, 1e-3, &cfg).unwrap();
        assert!(fit.accepted, "{:?}", fit.report);

        let split = complete(&fit, &narrow, &cfg).unwrap();
        assert!(split.estimated_lambda2.unwrap() <= 1e-10);
        assert!(split.outside_guaranteed_regime);
        let joined = complete(&fit, &wide, &cfg).unwrap();
        assert!(joined.estimated_lambda2.unwrap() > 1e-3);

        let x = truth(&f, &narrow);
        let (_, e_split) = align_phase(&x, &split.coefficients);
        let (_, e_joined) = align_phase(&x, &joined.coefficients);
        assert!(e_joined * 10.0 <= e_split, "{e_joined:e} vs {e_split:e}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let w = windows(LATTICE_STEP, LATTICE_STEP, 1.0, 0.5);
        let f = Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(1.0, 0.0));
        let samples = sample_spectrogram(&f, &w.omega, 0.0, 0).unwrap();
        assert!(reconstruct(&samples, &w, 0.0, &config(10)).is_err());
        let zero = SpectrogramSamples {
            values: vec![0.0; samples.len()],
            ..samples.clone()
        };
        assert!(reconstruct(&zero, &w, 1e-6, &config(10)).is_err());
        let other = windows(LATTICE_STEP, LATTICE_STEP, 1.0, 0.5);
        let fit = fit_ansatz(&samples, &w, 1e-3, &config(10)).unwrap();
        let shifted = LatticeWindows::new(WindowParams {
            margin: 2.0,
            ..other.params
        })
        .unwrap();
        assert!(complete(&fit, &shifted, &config(10)).is_err());
    }

    #[test]
    fn step1_failure_is_tagged() {
        let w = windows(LATTICE_STEP, LATTICE_STEP, 1.0, 0.5);
        let f = Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(1.0, 0.0));
        let samples = sample_spectrogram(&f, &w.omega, 0.0, 0).unwrap();
        let res = reconstruct(&samples, &w, 1e-9, &config(5)).unwrap();
        assert_eq!(res.failure.as_ref().map(|f| f.stage), Some(Stage::Step1));
        assert!(res.coefficients.is_empty() && res.a_star.is_some());
    }
}
