use std::ops::{Add, Mul};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Simpson,
    /// Used when the sample count is even.
    Trapezoid,
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub rule: Rule,
}

/// Composite Simpson rule over samples on a uniform grid with spacing `step`.
///
/// An even number of samples falls back to the trapezoid rule, reported in
/// [`Integral::rule`].
pub fn integrate_composite<T>(samples: &[T], step: f64) -> Result<Integral<T>>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = samples.len();
    if n < 2 {
        return Err(Error::parameter(format!(
            "quadrature needs at least 2 samples, got {n}"
        )));
    }
    if n.is_multiple_of(2) {
        let mut acc = (samples[0] + samples[n - 1]) * 0.5;
        for &s in &samples[1..n - 1] {
            acc = acc + s;
        }
        return Ok(Integral {
            value: acc * step,
            rule: Rule::Trapezoid,
        });
    }
    let mut odd = T::default();
    let mut even = T::default();
    for (i, &s) in samples.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd = odd + s;
        } else {
            even = even + s;
        }
    }
    let value = (samples[0] + samples[n - 1] + odd * 4.0 + even * 2.0) * (step / 3.0);
    Ok(Integral {
        value,
        rule: Rule::Simpson,
    })
}

/// Samples `f` on `lo, lo + step, ...` up to `hi` and integrates.
///
/// The node count is forced odd by shrinking `step` slightly.
pub fn integrate_fn<T>(lo: f64, hi: f64, step: f64, mut f: impl FnMut(f64) -> T) -> T
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let mut intervals = ((hi - lo) / step).ceil().max(2.0) as usize;
    if intervals % 2 == 1 {
        intervals += 1;
    }
    let h = (hi - lo) / intervals as f64;
    let samples: Vec<T> = (0..=intervals).map(|i| f(lo + h * i as f64)).collect();
    integrate_composite(&samples, h).expect("at least three nodes").value
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn grid(lo: f64, step: f64, n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(lo + step * i as f64)).collect()
    }

    #[test]
    fn constant() {
        let r = integrate_composite(&[1.0; 5], 0.25).unwrap();
        assert_eq!(r.rule, Rule::Simpson);
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sine_half_period() {
        let h = PI / 100.0;
        let r = integrate_composite(&grid(0.0, h, 101, f64::sin), h).unwrap();
        // Simpson's leading error term is h⁴/180 · [f'''(0) - f'''(π)] = h⁴/90.
        let predicted = h.powi(4) / 90.0;
        assert!((r.value - 2.0 - predicted).abs() < 1e-11);
        assert!((r.value - 2.0).abs() < 1.1e-8);
    }

    #[test]
    fn gaussian() {
        let r = integrate_composite(&grid(-6.0, 0.01, 1201, |t| (-PI * t * t).exp()), 0.01).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn even_count_falls_back() {
        let r = integrate_composite(&[1.0, 1.0, 1.0, 1.0], 0.5).unwrap();
        assert_eq!(r.rule, Rule::Trapezoid);
        assert!((r.value - 1.5).abs() < 1e-15);
        assert!(integrate_composite::<f64>(&[1.0], 0.5).is_err());
    }

    #[test]
    fn complex_samples() {
        let v = integrate_fn(0.0, 1.0, 0.01, |t| Complex64::new(t, 2.0 * t));
        assert!((v - Complex64::new(0.5, 1.0)).norm() < 1e-14);
    }
}
