use num_complex::Complex64;

use super::problem::{Constraint, Functional, SdpProblem};
use crate::ansatz::{weight_vector, PredictorTable};
use crate::error::{Error, Result};
use crate::gabor::{Point, SpectrogramSamples};

/// Step 1: `min max_γ A_γγ` over `A ⪰ 0` on `Γ` subject to
/// `|F_A(ω) - σ_ω| ≤ ε` for every sample point `ω`.
///
/// The constraint at `ω` is the rank-one functional `⟨A, W_ω⟩`; the result
/// has dimension `|Γ| + 1`, the last index being the slack.
pub fn build_step1(gamma: &[Point], samples: &SpectrogramSamples, eps: f64) -> Result<SdpProblem> {
    if samples.is_empty() {
        return Err(Error::parameter("no spectrogram samples"));
    }
    if gamma.is_empty() {
        return Err(Error::parameter("empty Ansatz support"));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::parameter(format!("ε must be positive, got {eps}")));
    }
    let constraints = samples
        .points
        .iter()
        .zip(&samples.values)
        .map(|(&w, &sigma)| {
            let v: Vec<Complex64> = weight_vector(gamma, w).iter().map(|z| z.conj()).collect();
            Constraint::interval(Functional::RankOne(v), sigma, eps)
        })
        .collect();
    Ok(SdpProblem::min_max_diagonal(gamma.len(), constraints))
}

/// Step 2: find `Y ⪰ 0` on `Λ` with `|Y_p - T_p| ≤ ε′` on the band.
///
/// Diagonal pairs give one real constraint with tolerance `ε′`. Off-diagonal
/// pairs give a real and an imaginary constraint with tolerance `ε′/√2` each,
/// so that the complex deviation stays within `ε′`.
pub fn build_step2(table: &PredictorTable, eps_prime: f64) -> Result<SdpProblem> {
    if !(eps_prime.is_finite() && eps_prime > 0.0) {
        return Err(Error::parameter(format!("ε′ must be positive, got {eps_prime}")));
    }
    let side = eps_prime * std::f64::consts::FRAC_1_SQRT_2;
    let mut constraints = Vec::new();
    for e in &table.entries {
        if e.row == e.col {
            constraints.push(Constraint::interval(
                Functional::real_part(e.row, e.row),
                e.value.re,
                eps_prime,
            ));
        } else {
            constraints.push(Constraint::interval(
                Functional::real_part(e.row, e.col),
                e.value.re,
                side,
            ));
            constraints.push(Constraint::interval(
                Functional::imag_part(e.row, e.col),
                e.value.im,
                side,
            ));
        }
    }
    Ok(SdpProblem::feasibility(table.points.len(), constraints))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{band_pairs, PredictorEntry};
    use crate::gabor::{box_points, sample_spectrogram, Signal, LATTICE_STEP};
    use crate::numerics::HermitianMatrix;
    use crate::sdp::{solve, solve_warm, SolveStatus, SolverConfig};

    #[test]
    fn step1_shape() {
        let gamma = box_points(LATTICE_STEP, 1.0, 1.0);
        let grid = box_points(0.5, 1.0, 1.0);
        let f = Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(1.0, 0.0));
        let s = sample_spectrogram(&f, &grid, 0.0, 0).unwrap();
        let p = build_step1(&gamma, &s, 1e-6).unwrap();
        assert_eq!(p.dim, gamma.len() + 1);
        assert_eq!(p.constraints.len(), grid.len() + gamma.len());

        // Trace of W_ω is Σ_λ e^{-π|ω-λ|²}.
        let w = grid[3];
        let expect: f64 = gamma
            .iter()
            .map(|l| (-std::f64::consts::PI * crate::gabor::dist2(*l, w)).exp())
            .sum();
        let trace = p.constraints[3].functional.to_matrix(p.dim).trace();
        assert!((trace - expect).abs() < 1e-12);

        let empty = SpectrogramSamples {
            points: vec![],
            values: vec![],
            noise_level: 0.0,
            seed: 0,
        };
        assert!(build_step1(&gamma, &empty, 1e-6).is_err());
    }

    #[test]
    fn step1_true_coefficients_are_feasible() {
        let gamma = box_points(LATTICE_STEP, 1.5, 1.5);
        let f = Signal::random(LATTICE_STEP, 0.8, 0.8, 3).unwrap();
        let s = sample_spectrogram(&f, &box_points(0.5, 1.2, 1.2), 0.0, 0).unwrap();
        let p = build_step1(&gamma, &s, 1e-6).unwrap();
        // Coefficients of f placed on Γ, slack set to the max diagonal.
        let n = gamma.len();
        let mut a = vec![Complex64::new(0.0, 0.0); n + 1];
        for (pt, c) in f.points().iter().zip(f.coeffs()) {
            let k = gamma
                .iter()
                .position(|g| (g[0] - pt[0]).abs() < 1e-9 && (g[1] - pt[1]).abs() < 1e-9)
                .unwrap();
            a[k] = *c;
        }
        let mut x = HermitianMatrix::outer(&a);
        let mx = (0..n).map(|j| x[(j, j)].re).fold(0.0, f64::max);
        x[(n, n)] = Complex64::new(mx, 0.0);
        assert!(p.max_violation(&x) < 1e-12);
    }

    fn rank_one_table(x: &[Complex64], points: &[Point], r: f64) -> PredictorTable {
        PredictorTable {
            points: points.to_vec(),
            r,
            entries: band_pairs(points, r)
                .into_iter()
                .map(|(row, col)| PredictorEntry {
                    row,
                    col,
                    value: x[row] * x[col].conj(),
                })
                .collect(),
        }
    }

    #[test]
    fn step2_counts() {
        let pts = box_points(LATTICE_STEP, 0.8, 0.8);
        let x = vec![Complex64::new(1.0, 0.0); pts.len()];
        let t = rank_one_table(&x, &pts, 1.0);
        let p = build_step2(&t, 1e-6).unwrap();
        // 3×3 grid at r = 1: 12 edges at distance 𝔞 and 8 diagonal pairs at distance 1.
        let off = 12 + 8;
        assert_eq!(p.constraints.len(), pts.len() + 2 * off);
        let diag = &p.constraints[0];
        assert_eq!(diag.functional, Functional::real_part(0, 0));
        assert!((diag.upper - diag.lower - 2e-6).abs() < 1e-15);
    }

    #[test]
    fn step2_rank_one_feasible_and_warm_start() {
        let pts = box_points(LATTICE_STEP, 1.5, 1.5);
        let f = Signal::random(LATTICE_STEP, 1.0, 1.0, 7).unwrap();
        let x: Vec<Complex64> = pts.iter().map(|&p| f.gabor_transform(p)).collect();
        let t = rank_one_table(&x, &pts, 1.0);
        let p = build_step2(&t, 1e-6).unwrap();
        let truth = HermitianMatrix::outer(&x);
        assert!(p.max_violation(&truth) < 1e-15);

        let (y, rep) = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Solved, "{rep:?}");
        assert!(rep.max_residual <= 1e-9);
        assert!(rep.min_eigenvalue >= -1e-7);
        assert!(t.max_deviation(&y) <= 1e-6 + 1e-9);

        let (_, warm) = solve_warm(&p, &SolverConfig::default(), Some(&truth)).unwrap();
        assert_eq!(warm.status, SolveStatus::Solved);
        assert!(warm.iterations <= 5);
    }
}
