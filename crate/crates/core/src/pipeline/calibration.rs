use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::WindowParams;
use crate::graph::GAP_TOL;

/// Measured quantities of the signal entering the calibration conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalData {
    /// `‖𝒢f‖²_{ℓ²(Λ)}`.
    pub norm_sq: f64,
    pub lambda2: f64,
    /// `|Λ|`.
    pub lambda_len: usize,
}

/// One inequality `lhs ≤ rhs` (or `lhs ≥ rhs` for the margin condition).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Condition {
    fn at_most(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    fn at_least(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub eps: f64,
    /// `ε` against its upper bound.
    pub eps_condition: Condition,
    /// False when the bound on `ε` is zero (disconnected graph or no energy).
    pub eps_satisfiable: bool,
    /// `(3.1×10⁴) √ε e^{17π/32 r²}`.
    pub eps_prime: f64,
    /// The tolerance actually used in the completion step against the formula value.
    pub eps_prime_condition: Condition,
    pub s_condition: Condition,
    pub margin_condition: Condition,
    /// `|Ω|` for the given `T, S, R, s`.
    pub sample_count: usize,
    /// `|Ω|` at the largest admissible `s` and smallest admissible `R`.
    pub required_sample_count: usize,
}

impl CalibrationReport {
    pub fn all_pass(&self) -> bool {
        self.eps_condition.holds
            && self.eps_prime_condition.holds
            && self.s_condition.holds
            && self.margin_condition.holds
    }
}

/// `e^{17π/32 r²}`.
fn growth(r: f64) -> f64 {
    (17.0 * PI / 32.0 * r * r).exp()
}

/// Zero when `λ₂` is numerically zero, otherwise
/// `[e^{-17π/32 r²} / 1.33e5 · min{‖𝒢f‖²/|Λ|², λ₂/(192 r²)}]²`.
pub fn eps_bound(r: f64, data: &SignalData) -> f64 {
    if data.lambda2 <= GAP_TOL {
        return 0.0;
    }
    let n = data.lambda_len as f64;
    let m = (data.norm_sq / (n * n)).min(data.lambda2 / (192.0 * r * r));
    (m.max(0.0) / (growth(r) * 1.33e5)).powi(2)
}

/// `ε′ = (3.1×10⁴) √ε e^{17π/32 r²}`.
pub fn calibrated_eps_prime(eps: f64, r: f64) -> f64 {
    3.1e4 * eps.sqrt() * growth(r)
}

/// `0.3 / √ln(2/(3ε))`.
pub fn max_sampling_step(eps: f64) -> f64 {
    0.3 / (2.0 / (3.0 * eps)).ln().sqrt()
}

/// `max{2.1 + 0.9 √ln(1/ε), (r + 1/s)/2}`.
pub fn min_margin(eps: f64, r: f64, s: f64) -> f64 {
    (2.1 + 0.9 * (1.0 / eps).ln().sqrt()).max((r + 1.0 / s) / 2.0)
}

/// `|sℤ² ∩ [-T-R, T+R] × [-S-R, S+R]|`.
pub fn omega_count(t: f64, s_half: f64, margin: f64, s: f64) -> usize {
    let side = |h: f64| 2 * ((h + 1e-9) / s).floor() as usize + 1;
    side(t + margin) * side(s_half + margin)
}

/// Evaluates the four calibration conditions. `eps_prime_used` is the
/// completion-step tolerance actually in force; `None` means the formula value.
pub fn check_calibration(
    params: &WindowParams,
    eps: f64,
    data: &SignalData,
    eps_prime_used: Option<f64>,
) -> Result<CalibrationReport> {
    let WindowParams {
        t,
        s_half,
        margin,
        r,
        s,
    } = *params;
    for (name, v) in [("T", t), ("S", s_half), ("R", margin), ("r", r), ("s", s), ("ε", eps)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::parameter(format!("{name} must be positive, got {v}")));
        }
    }
    if data.lambda_len == 0 {
        return Err(Error::parameter("Λ is empty"));
    }
    let bound = eps_bound(r, data);
    let eps_prime = calibrated_eps_prime(eps, r);
    let used = eps_prime_used.unwrap_or(eps_prime);
    let s_max = max_sampling_step(eps);
    let r_min = min_margin(eps, r, s);
    // The required count uses the smallest margin compatible with the largest step.
    let r_req = min_margin(eps, r, s_max);
    Ok(CalibrationReport {
        eps,
        eps_condition: Condition::at_most(eps, bound),
        eps_satisfiable: bound > 0.0,
        eps_prime,
        eps_prime_condition: Condition {
            lhs: used,
            rhs: eps_prime,
            holds: (used - eps_prime).abs() <= 1e-12 * eps_prime,
        },
        s_condition: Condition::at_most(s, s_max),
        margin_condition: Condition::at_least(margin, r_min),
        sample_count: omega_count(t, s_half, margin, s),
        required_sample_count: omega_count(t, s_half, r_req, s_max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r: f64) -> WindowParams {
        WindowParams {
            t: 1.0,
            s_half: 1.0,
            margin: 1.0,
            r,
            s: 0.5,
        }
    }

    #[test]
    fn eps_bound_double_evaluation() {
        let data = SignalData {
            norm_sq: 10.0,
            lambda2: 0.5,
            lambda_len: 25,
        };
        // min{10/625, 0.5/192} = 0.5/192.
        let inner = (-17.0 * std::f64::consts::PI / 32.0).exp() / 1.33e5 * (0.5 / 192.0);
        let expect = inner * inner;
        let got = eps_bound(1.0, &data);
        assert!((got - expect).abs() <= 1e-14 * expect);

        let rep = check_calibration(&params(1.0), 1e-20, &data, None).unwrap();
        assert!(rep.eps_condition.holds && rep.eps_satisfiable);
        let rep = check_calibration(&params(1.0), 1e-16, &data, None).unwrap();
        assert!(!rep.eps_condition.holds);
    }

    #[test]
    fn s_bound() {
        let expect = 0.3 / (2.0f64 / 3e-4).ln().sqrt();
        assert!((max_sampling_step(1e-4) - expect).abs() < 1e-15);
        assert!(((2.0f64 / 3e-4).ln() - 8.8049).abs() < 1e-4);
    }

    #[test]
    fn eps_prime_ratio() {
        for r in [0.5, 1.0, 1.6] {
            for eps in [1e-4, 1e-9] {
                let ratio = calibrated_eps_prime(eps, r) / eps.sqrt();
                let expect = 3.1e4 * (17.0 * std::f64::consts::PI / 32.0 * r * r).exp();
                assert!((ratio - expect).abs() <= 1e-12 * expect);
            }
        }
    }

    #[test]
    fn disconnected_is_unsatisfiable() {
        let data = SignalData {
            norm_sq: 10.0,
            lambda2: 0.0,
            lambda_len: 9,
        };
        let rep = check_calibration(&params(1.0), 1e-30, &data, None).unwrap();
        assert!(!rep.eps_satisfiable && !rep.eps_condition.holds && !rep.all_pass());
    }

    #[test]
    fn passing_fixture_and_sample_count() {
        let data = SignalData {
            norm_sq: 1e8,
            lambda2: 1e8,
            lambda_len: 9,
        };
        let eps = 1e-6;
        let s = max_sampling_step(eps);
        let r = 1.0;
        let p = WindowParams {
            t: 1.0,
            s_half: 1.0,
            margin: min_margin(eps, r, s),
            r,
            s,
        };
        let rep = check_calibration(&p, eps, &data, None).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.sample_count, rep.required_sample_count);
        let rep = check_calibration(&p, eps, &data, Some(10.0 * eps)).unwrap();
        assert!(!rep.eps_prime_condition.holds);
        assert_eq!(omega_count(1.0, 1.0, 1.0, 0.5), 81);
    }
}
