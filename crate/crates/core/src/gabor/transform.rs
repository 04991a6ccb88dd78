use std::f64::consts::PI;

use num_complex::Complex64;

/// A point `(x, ω)` of the time-frequency plane.
pub type Point = [f64; 2];

/// Gaussian window `φ(t) = 2^{1/4} e^{-πt²}`, unit L² norm.
pub fn window(t: f64) -> f64 {
    std::f64::consts::SQRT_2.sqrt() * (-PI * t * t).exp()
}

/// Gabor transform of the time-frequency shifted window `π(λ)φ` at `z`:
/// `e^{-πi(x+a)(ω-b)} e^{-π/2 |z-λ|²}` for `λ = (a, b)`, `z = (x, ω)`.
pub fn gabor_atom(lambda: Point, z: Point) -> Complex64 {
    let [a, b] = lambda;
    let [x, w] = z;
    let dx = x - a;
    let dw = w - b;
    let modulus = (-0.5 * PI * (dx * dx + dw * dw)).exp();
    Complex64::from_polar(modulus, -PI * (x + a) * (w - b))
}

/// `π(λ)φ(t) = e^{2πibt} φ(t - a)`.
pub fn shifted_window(lambda: Point, t: f64) -> Complex64 {
    let [a, b] = lambda;
    Complex64::from_polar(window(t - a), 2.0 * PI * b * t)
}

pub fn dist2(p: Point, q: Point) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}
