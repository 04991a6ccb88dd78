use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::transform::{window, Point};
use crate::numerics::theta3;

/// Series terms below this are dropped.
const SERIES_CUTOFF: f64 = 1e-14;
/// Spacing of the cached table.
const CACHE_STEP: f64 = 1.0 / 512.0;
/// The table covers `[-CACHE_HALF_WIDTH, CACHE_HALF_WIDTH]`; outside, ψ is
/// evaluated from the series.
const CACHE_HALF_WIDTH: f64 = 16.0;

/// Canonical dual window of the Gaussian Gabor frame on `𝔞ℤ²`, `𝔞 = 1/√2`:
///
/// ```text
/// ψ(t) = 1 / (2 θ₃(√2 π t, e^{-π})) · Σ_k c_k φ(t - √2 k)
/// c_k  = Σ_{m≥0} (-1)^{k+m} e^{-π(m+½)(2|k|+m+½)} / Σ_{n∈ℤ} (-1)^n (n+½) e^{-π(n+½)²}
/// ```
#[derive(Debug)]
pub struct DualWindow {
    /// `c_0, c_1, ...`; `c_{-k} = c_k`.
    coeffs: Vec<f64>,
    table: Vec<f64>,
}

impl DualWindow {
    /// Shared instance, built on first use.
    pub fn global() -> &'static DualWindow {
        static CELL: OnceLock<DualWindow> = OnceLock::new();
        CELL.get_or_init(DualWindow::build)
    }

    fn build() -> Self {
        let mut den = 0.0;
        for n in 0i32.. {
            // n and -n-1 contribute equally.
            let h = n as f64 + 0.5;
            let term = 2.0 * h * (-PI * h * h).exp();
            if term < SERIES_CUTOFF {
                break;
            }
            den += if n % 2 == 0 { term } else { -term };
        }
        let mut coeffs = Vec::new();
        for k in 0usize.. {
            let mut num = 0.0;
            for m in 0usize.. {
                let h = m as f64 + 0.5;
                let term = (-PI * h * (2.0 * k as f64 + h)).exp();
                if term < SERIES_CUTOFF {
                    break;
                }
                num += if (k + m) % 2 == 0 { term } else { -term };
            }
            let c = num / den;
            if c.abs() < SERIES_CUTOFF {
                break;
            }
            coeffs.push(c);
        }
        let mut w = Self {
            coeffs,
            table: Vec::new(),
        };
        let n = (CACHE_HALF_WIDTH / CACHE_STEP).round() as usize;
        w.table = (0..=2 * n)
            .map(|i| w.eval_exact(-CACHE_HALF_WIDTH + CACHE_STEP * i as f64))
            .collect();
        w
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// ψ(t) from the series.
    pub fn eval_exact(&self, t: f64) -> f64 {
        let theta = theta3(SQRT_2 * PI * t, (-PI).exp()).expect("q in (0,1)");
        let mut sum = self.coeffs[0] * window(t);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            let shift = SQRT_2 * k as f64;
            sum += c * (window(t - shift) + window(t + shift));
        }
        sum / (2.0 * theta)
    }

    /// ψ(t) by linear interpolation in the cached table.
    pub fn eval(&self, t: f64) -> f64 {
        let u = (t + CACHE_HALF_WIDTH) / CACHE_STEP;
        if !(u >= 0.0 && u < (self.table.len() - 1) as f64) {
            return self.eval_exact(t);
        }
        let i = u.floor() as usize;
        let frac = u - i as f64;
        self.table[i] * (1.0 - frac) + self.table[i + 1] * frac
    }
}

/// ψ(t), cached.
pub fn dual_window(t: f64) -> f64 {
    DualWindow::global().eval(t)
}

/// `R_Λ(c)(t) = Σ c_λ e^{2πibt} ψ(t - a)` using the cached window.
pub fn synthesize(points: &[Point], coeffs: &[Complex64], t: f64) -> Complex64 {
    synthesize_with(points, coeffs, t, |x| DualWindow::global().eval(x))
}

/// As [`synthesize`], with ψ evaluated from the series.
pub fn synthesize_exact(points: &[Point], coeffs: &[Complex64], t: f64) -> Complex64 {
    synthesize_with(points, coeffs, t, |x| DualWindow::global().eval_exact(x))
}

fn synthesize_with(points: &[Point], coeffs: &[Complex64], t: f64, psi: impl Fn(f64) -> f64) -> Complex64 {
    debug_assert_eq!(points.len(), coeffs.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for (&[a, b], c) in points.iter().zip(coeffs) {
        acc += c * Complex64::from_polar(psi(t - a), 2.0 * PI * b * t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::{box_points, Signal, LATTICE_STEP};

    #[test]
    fn coefficients() {
        let c = DualWindow::global().coefficients();
        assert!((c[0] - 1.00376).abs() < 1e-5);
        assert!((c[1] + 0.043457).abs() < 1e-6);
        assert!((c[2] - 0.001878).abs() < 1e-6);
    }

    #[test]
    fn decay_bound_and_symmetry() {
        let w = DualWindow::global();
        for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
            assert!(w.eval_exact(t).abs() <= (-PI * t / SQRT_2).exp());
        }
        for i in 0..200 {
            let t = 0.037 * i as f64;
            assert!((w.eval_exact(t) - w.eval_exact(-t)).abs() < 1e-15);
        }
    }

    #[test]
    fn interpolation_error() {
        let w = DualWindow::global();
        let worst = (0..4000)
            .map(|i| -8.0 + 0.004_001 * i as f64)
            .map(|t| (w.eval(t) - w.eval_exact(t)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 5e-6, "{worst}");
    }

    #[test]
    fn frame_reconstruction_of_window() {
        // φ = Σ 𝒢φ(λ) π(λ)ψ over the whole lattice.
        let grid = box_points(LATTICE_STEP, 8.0, 8.0);
        let f = Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(1.0, 0.0));
        let c: Vec<Complex64> = grid.iter().map(|&p| f.gabor_transform(p)).collect();
        for t in [-1.0, -0.3, 0.0, 0.7, 1.9] {
            let rec = synthesize_exact(&grid, &c, t);
            assert!((rec - window(t)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_and_single() {
        let pts = [[0.5, 1.0], [1.0, -0.5]];
        assert_eq!(
            synthesize(&pts, &[Complex64::new(0.0, 0.0); 2], 0.3),
            Complex64::new(0.0, 0.0)
        );
        let one = [Complex64::new(1.0, 0.0)];
        for t in [-1.0, 0.2, 2.5] {
            let v = synthesize(&pts[..1], &one, t);
            assert!((v.norm() - dual_window(t - 0.5).abs()).abs() < 1e-15);
        }
    }
}
