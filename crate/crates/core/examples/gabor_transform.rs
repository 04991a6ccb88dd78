//! Closed-form Gabor transform, the canonical dual window, and linear
//! reconstruction from a full box of lattice coefficients.

use std::f64::consts::PI;

use gabor_phase::gabor::{
    box_points, dual_window, l2_distance, l2_norm, synthesize_exact, window, Signal, LATTICE_STEP,
};
use gabor_phase::numerics::integrate_fn;

fn main() -> gabor_phase::Result<()> {
    let f = Signal::random(LATTICE_STEP, 1.0, 1.0, 3)?;
    println!("signal: {} atoms on the 𝔞-lattice", f.len());

    println!("\n{:>8} {:>8}  {:>24}  {:>10}", "x", "omega", "Gf(x, omega)", "vs quad");
    for z in [[0.0, 0.0], [0.3, -0.7], [1.2, 0.4], [-2.0, 1.5]] {
        let closed = f.gabor_transform(z);
        let quad = integrate_fn(z[0] - 9.0, z[0] + 9.0, 0.002, |t| {
            f.evaluate(t) * window(t - z[0]) * num_complex::Complex64::from_polar(1.0, -2.0 * PI * z[1] * t)
        });
        println!(
            "{:>8.3} {:>8.3}  {:>24.6}  {:>10.2e}",
            z[0],
            z[1],
            closed,
            (closed - quad).norm()
        );
    }

    println!("\ndual window psi(t) against the envelope e^(-pi|t|/sqrt 2):");
    for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
        println!(
            "  t = {t:>3}: {:>12.4e}  <= {:>10.4e}",
            dual_window(t),
            (-PI * t / 2f64.sqrt()).exp()
        );
    }
    let norm = integrate_fn(-10.0, 10.0, 0.002, |t| dual_window(t).powi(2)).sqrt();
    println!("  ||psi||_2 = {norm:.5}");

    let big = box_points(LATTICE_STEP, 6.0, 6.0);
    let coeffs: Vec<_> = big.iter().map(|&z| f.gabor_transform(z)).collect();
    let err = l2_distance(
        |t| f.evaluate(t),
        |t| synthesize_exact(&big, &coeffs, t),
        -2.0,
        2.0,
        0.01,
    );
    let norm_f = l2_norm(|t| f.evaluate(t), -2.0, 2.0, 0.01);
    println!(
        "\nreconstruction from {} coefficients: relative L2(-2,2) error {:.2e}",
        big.len(),
        err / norm_f
    );
    Ok(())
}
