use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::calibration::{check_calibration, CalibrationReport, SignalData};
use super::reconstruct::ReconstructionResult;
use super::{align_phase, default_tau};
use crate::error::{Error, Result};
use crate::gabor::{eta, kappa_s, synthesize, LatticeWindows, Signal, SmoothnessGrid};
use crate::graph::{c_stab, signal_graph};
use crate::numerics::integrate_fn;

/// Quadrature step for `L²(-τ, τ)` norms.
pub const L2_STEP: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub measured: f64,
    pub bound: f64,
}

impl Bound {
    pub fn holds(&self) -> bool {
        self.measured <= self.bound
    }
}

/// Theorem right-hand sides next to the measured errors, for a run with
/// known ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    pub tau: f64,
    pub eps: f64,
    /// `‖𝒢f‖²_{ℓ²(Λ)}`.
    pub norm_sq: f64,
    pub lambda2: f64,
    pub c_stab: f64,
    /// `Σ |𝓛(u,v)|`.
    pub coupling_sum: f64,
    /// `16 r² ‖𝒢f‖²`.
    pub coupling_bound: f64,
    pub kappa_s: f64,
    pub eta: f64,
    /// Phase aligning `𝒢f|_Λ` to the recovered coefficients.
    pub theta: f64,
    /// Aligned coefficient error against `177 C_stab ε^{1/4}`.
    pub coefficients: Bound,
    /// `‖f - R_Λ(c)‖_{L²(-τ,τ)}` for the aligned coefficients against the
    /// incomplete-data reconstruction bound.
    pub synthesis: Bound,
    /// `min_θ ‖f* - e^{iθ}f‖_{L²(-τ,τ)}` against the end-to-end bound.
    pub end_to_end: Bound,
    /// `‖f‖_{L²(-τ,τ)}`, for relative errors.
    pub signal_norm: f64,
    /// Calibration with the true `‖𝒢f‖²` and `λ₂`, in units where the
    /// samples peak at one.
    pub calibration: CalibrationReport,
    pub outside_guaranteed_regime: bool,
}

/// `177 C_stab ε^{1/4}`, for a signal with `‖Sf‖_∞ ≤ 1`.
pub fn coefficient_bound(c_stab: f64, eps: f64) -> f64 {
    177.0 * c_stab * eps.powf(0.25)
}

/// `6.82 (coef_err + √(T+1) κ_S + √(τ+1) e^{-π/√2 (T-τ)} η)`.
pub fn synthesis_bound(coef_err: f64, t: f64, tau: f64, kappa: f64, eta: f64) -> f64 {
    6.82 * (coef_err + (t + 1.0).sqrt() * kappa + (tau + 1.0).sqrt() * (-PI / SQRT_2 * (t - tau)).exp() * eta)
}

/// `18 [177 C_stab ε^{1/4} + (2T+2) κ_S + 2√S (τ+1) e^{-π/2 (T-τ)}]`, for `‖Sf‖_∞ ≤ 1`.
pub fn end_to_end_bound(c_stab: f64, eps: f64, t: f64, s_half: f64, tau: f64, kappa: f64) -> f64 {
    18.0 * (coefficient_bound(c_stab, eps)
        + (2.0 * t + 2.0) * kappa
        + 2.0 * s_half.sqrt() * (tau + 1.0) * (-PI / 2.0 * (t - tau)).exp())
}

/// `(‖a‖², ‖b‖², ∫ a conj b)` on `(-τ, τ)`.
fn l2_products(a: impl Fn(f64) -> Complex64, b: impl Fn(f64) -> Complex64, tau: f64) -> (f64, f64, Complex64) {
    let aa = integrate_fn(-tau, tau, L2_STEP, |t| a(t).norm_sqr());
    let bb = integrate_fn(-tau, tau, L2_STEP, |t| b(t).norm_sqr());
    let ab = integrate_fn(-tau, tau, L2_STEP, |t| a(t) * b(t).conj());
    (aa, bb, ab)
}

/// Evaluates the three theorem bounds for `result` against the true signal.
///
/// The bounds stated for `‖Sf‖_∞ ≤ 1` are applied to `f/√scale` with
/// `ε/scale` and multiplied back by `√scale`. `tau` defaults to
/// [`default_tau`].
pub fn certificates(
    result: &ReconstructionResult,
    f: &Signal,
    windows: &LatticeWindows,
    tau: Option<f64>,
) -> Result<Certificates> {
    if result.coefficients.len() != windows.lambda.len() {
        return Err(Error::parameter("reconstruction has no coefficients to certify"));
    }
    let p = windows.params;
    let tau = tau.unwrap_or_else(|| default_tau(p.t));
    if !(tau > 0.0 && tau < p.t) {
        return Err(Error::parameter(format!("τ must lie in (0, T), got {tau}")));
    }
    let scale = result.scale;
    let root = scale.sqrt();
    let eps_n = result.eps / scale;

    let graph = signal_graph(f, &windows.lambda, p.r)?;
    let norm_sq = graph.total_weight();
    let lambda2 = if graph.len() >= 2 { graph.spectral_gap()? } else { 0.0 };
    let cs = c_stab(norm_sq, lambda2, p.r);
    let grid = SmoothnessGrid::for_half_width(p.t);
    let kappa = kappa_s(f, p.s_half, &grid);
    let eta_f = eta(f, &grid);

    let truth: Vec<Complex64> = windows.lambda.iter().map(|&z| f.gabor_transform(z)).collect();
    let (theta, coef_err) = align_phase(&truth, &result.coefficients);
    let rot = Complex64::from_polar(1.0, theta);
    let aligned_c: Vec<Complex64> = result.coefficients.iter().map(|c| c / rot).collect();
    let synth_err = {
        let (ff, gg, fg) = l2_products(|t| f.evaluate(t), |t| synthesize(&windows.lambda, &aligned_c, t), tau);
        (ff + gg - 2.0 * fg.re).max(0.0).sqrt()
    };
    let (ss, ff, sf) = l2_products(|t| result.synthesize(t), |t| f.evaluate(t), tau);
    let end_err = (ss + ff - 2.0 * sf.norm()).max(0.0).sqrt();

    let data = SignalData {
        norm_sq: norm_sq / scale,
        lambda2: lambda2 / scale,
        lambda_len: windows.lambda.len(),
    };
    let calibration = check_calibration(&p, eps_n, &data, Some(result.eps_prime / scale))?;

    Ok(Certificates {
        tau,
        eps: result.eps,
        norm_sq,
        lambda2,
        c_stab: cs,
        coupling_sum: graph.coupling_sum(),
        coupling_bound: graph.coupling_bound(),
        kappa_s: kappa,
        eta: eta_f,
        theta,
        coefficients: Bound {
            measured: coef_err,
            bound: root * coefficient_bound(cs, eps_n),
        },
        synthesis: Bound {
            measured: synth_err,
            bound: synthesis_bound(coef_err, p.t, tau, kappa, eta_f),
        },
        end_to_end: Bound {
            measured: end_err,
            bound: root * end_to_end_bound(cs, eps_n, p.t, p.s_half, tau, kappa / root),
        },
        signal_norm: ff.max(0.0).sqrt(),
        outside_guaranteed_regime: !calibration.all_pass(),
        calibration,
    })
}
