//! The evaluation operator turns an entire extension of a spectrogram into
//! relative phases. With the true spectrogram the predictor table is exactly
//! the band of `x x*`; with a perturbed Ansatz matrix it is close to it.

use gabor_phase::ansatz::{build_predictor, EntireFunction};
use gabor_phase::gabor::{box_points, Signal, LATTICE_STEP};
use gabor_phase::numerics::{HermitianMatrix, SplitMix64};
use num_complex::Complex64;

fn main() -> gabor_phase::Result<()> {
    let f = Signal::random(LATTICE_STEP, 1.5, 1.5, 5)?;
    let lambda = box_points(LATTICE_STEP, 1.0, 1.0);
    let x: Vec<Complex64> = lambda.iter().map(|&z| f.gabor_transform(z)).collect();
    let truth = HermitianMatrix::outer(&x);

    for r in [0.72, 1.01, 1.42] {
        let table = build_predictor(&EntireFunction::SpectrogramOf(&f), &lambda, r)?;
        println!(
            "r = {r}: {} band entries, max |T - x x*| = {:.2e}",
            table.len(),
            table.max_deviation(&truth)
        );
    }

    // The Ansatz with A = c c* reproduces the spectrogram of f exactly.
    let gamma = f.points();
    let mut rng = SplitMix64::new(9);
    for delta in [0.0, 1e-6, 1e-3] {
        let noisy: Vec<Complex64> = f.coeffs().iter().map(|c| c + delta * rng.unit_disk()).collect();
        let a = HermitianMatrix::outer(&noisy);
        let table = build_predictor(&EntireFunction::Ansatz { a: &a, gamma: &gamma }, &lambda, 1.01)?;
        println!(
            "Ansatz with coefficients perturbed by {delta:.0e}: max |T - x x*| = {:.2e}",
            table.max_deviation(&truth)
        );
    }

    let table = build_predictor(&EntireFunction::SpectrogramOf(&f), &lambda, 1.01)?;
    println!("\nfirst entries (row, col, T):");
    for e in table.entries.iter().take(6) {
        println!("  ({}, {}) {:.6}", e.row, e.col, e.value);
    }
    Ok(())
}
