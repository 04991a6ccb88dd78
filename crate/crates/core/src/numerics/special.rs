use crate::error::{Error, Result};

/// Terms with `q^{k²}` below this are dropped.
const THETA_CUTOFF: f64 = 1e-16;

/// Jacobi theta function `θ₃(z, q) = Σ_k q^{k²} e^{2ikz}` for real `z`.
///
/// The imaginary parts cancel pairwise, leaving `1 + 2 Σ_{k≥1} q^{k²} cos(2kz)`.
pub fn theta3(z: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("theta3 needs 0 < q < 1, got {q}")));
    }
    let lnq = q.ln();
    let mut sum = 1.0;
    for k in 1.. {
        let kf = k as f64;
        let w = (lnq * kf * kf).exp();
        if w < THETA_CUTOFF {
            break;
        }
        sum += 2.0 * w * (2.0 * kf * z).cos();
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn tabulated_values() {
        let q = (-PI).exp();
        assert!((theta3(0.0, q).unwrap() - 1.08643).abs() < 5e-6);
        // Truncated, not rounded: 1.4194954...
        let t = theta3(0.0, (-PI / 2.0).exp()).unwrap();
        assert!(((t * 1e5).floor() / 1e5 - 1.41949).abs() < 1e-9);
        assert!((theta3(PI / 2.0, q).unwrap() - 0.9135).abs() < 1e-3);
    }

    #[test]
    fn product_identity_at_half_pi() {
        // θ₃(0,q) + θ₃(π/2,q) = 2 θ₃(0,q⁴), since odd k cancel.
        let q: f64 = 0.3;
        let lhs = theta3(0.0, q).unwrap() + theta3(PI / 2.0, q).unwrap();
        let rhs = 2.0 * theta3(0.0, q.powi(4)).unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn domain() {
        for q in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            assert!(matches!(theta3(0.0, q), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn even_and_decreasing() {
        for q in [(-PI).exp(), (-PI / 2.0).exp(), 0.5] {
            let mut prev = f64::INFINITY;
            for i in 0..=100 {
                let z = PI / 2.0 * i as f64 / 100.0;
                let v = theta3(z, q).unwrap();
                assert_eq!(v, theta3(-z, q).unwrap());
                assert!(v < prev);
                prev = v;
            }
        }
    }
}
