use std::f64::consts::PI;

use num_complex::Complex64;

use super::signal::Signal;
use crate::numerics::integrate_fn;

/// Grid for the sup-over-x functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub x_step: f64,
    /// Step of the inner (ω or t) quadrature.
    pub inner_step: f64,
    /// Length of the truncated inner integration range.
    pub tail: f64,
}

impl SmoothnessGrid {
    /// x over `[-T-4, T+4]` with step 0.05, inner step 0.01, tail 6.
    pub fn for_half_width(t: f64) -> Self {
        Self {
            x_lo: -t - 4.0,
            x_hi: t + 4.0,
            x_step: 0.05,
            inner_step: 0.01,
            tail: 6.0,
        }
    }

    fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        let n = ((self.x_hi - self.x_lo) / self.x_step).round() as usize;
        (0..=n).map(move |i| self.x_lo + self.x_step * i as f64)
    }
}

/// `κ_S(f) = sup_x (∫_{|ω|>S} |𝒢f(x,ω)|² dω)^{1/2}`, with the ω-integral
/// truncated at `S + tail`.
pub fn kappa_s(f: &Signal, s_half: f64, grid: &SmoothnessGrid) -> f64 {
    let (lo, hi) = (s_half, s_half + grid.tail);
    grid.xs()
        .map(|x| {
            let up = integrate_fn(lo, hi, grid.inner_step, |w| f.spectrogram([x, w]));
            let down = integrate_fn(lo, hi, grid.inner_step, |w| f.spectrogram([x, -w]));
            (up + down).max(0.0).sqrt()
        })
        .fold(0.0, f64::max)
}

/// `η(f) = 2^{1/8} sup_x (∫ |f(t)|² e^{-π(t-x)²} dt)^{1/2}`, the t-integral
/// over `x ± tail`.
pub fn eta(f: &Signal, grid: &SmoothnessGrid) -> f64 {
    let sup = grid
        .xs()
        .map(|x| {
            integrate_fn(x - grid.tail, x + grid.tail, grid.inner_step, |t| {
                f.evaluate(t).norm_sqr() * (-PI * (t - x) * (t - x)).exp()
            })
        })
        .fold(0.0, f64::max);
    2f64.powf(0.125) * sup.sqrt()
}

/// `‖f - g‖_{L²(lo, hi)}` by composite Simpson with spacing ≤ `step`.
pub fn l2_distance(f: impl Fn(f64) -> Complex64, g: impl Fn(f64) -> Complex64, lo: f64, hi: f64, step: f64) -> f64 {
    integrate_fn(lo, hi, step, |t| (f(t) - g(t)).norm_sqr()).max(0.0).sqrt()
}

pub fn l2_norm(f: impl Fn(f64) -> Complex64, lo: f64, hi: f64, step: f64) -> f64 {
    integrate_fn(lo, hi, step, |t| f(t).norm_sqr()).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::LATTICE_STEP;

    fn phi() -> Signal {
        Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(1.0, 0.0))
    }

    #[test]
    fn kappa_of_window_is_tiny_and_monotone() {
        let g = SmoothnessGrid::for_half_width(1.0);
        assert!(kappa_s(&phi(), 4.0, &g) < 1e-10);
        let f = Signal::random(LATTICE_STEP, 1.0, 1.0, 4).unwrap();
        let ks: Vec<f64> = [0.5, 1.0, 1.5, 2.0].iter().map(|&s| kappa_s(&f, s, &g)).collect();
        for w in ks.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(ks.iter().all(|&k| k >= 0.0));
    }

    #[test]
    fn eta_of_window_closed_form() {
        // ∫ √2 e^{-2πt²} e^{-πt²} dt = √(2/3), maximal at x = 0, which is on the grid.
        let expect = 2f64.powf(0.125) * (2.0f64 / 3.0).powf(0.25);
        let got = eta(&phi(), &SmoothnessGrid::for_half_width(1.0));
        assert!((got - expect).abs() < 1e-6, "{got} vs {expect}");
    }

    #[test]
    fn eta_homogeneous() {
        let g = SmoothnessGrid::for_half_width(0.5);
        let f = Signal::random(LATTICE_STEP, 0.8, 0.8, 2).unwrap();
        let c = Complex64::new(-1.5, 2.0);
        assert!((eta(&f.scaled(c), &g) - 2.5 * eta(&f, &g)).abs() < 1e-12);
        let zero = f.scaled(Complex64::new(0.0, 0.0));
        assert_eq!(eta(&zero, &g), 0.0);
    }
}
