//! Rank-one completion: given noisy entries of `x x*` on a band, solve the
//! completion SDP, take the top eigenvector, and compare with `x` up to a
//! global phase. Also runs the small SDP examples.

use gabor_phase::ansatz::{build_predictor, EntireFunction};
use gabor_phase::gabor::{box_points, Signal, LATTICE_STEP};
use gabor_phase::graph::signal_graph;
use gabor_phase::numerics::hermitian_eig;
use gabor_phase::pipeline::align_phase;
use gabor_phase::sdp::{build_step2, solve, Constraint, Functional, SdpProblem, SolverConfig};
use num_complex::Complex64;

fn main() -> gabor_phase::Result<()> {
    let cfg = SolverConfig::default();

    let trace = Functional::Sparse(vec![(0, 0, Complex64::new(1.0, 0.0)), (1, 1, Complex64::new(1.0, 0.0))]);
    let p = SdpProblem::min_max_diagonal(2, vec![Constraint::interval(trace, 1.0, 1e-9)]);
    let (_, rep) = solve(&p, &cfg)?;
    println!(
        "min max diagonal under unit trace: {:.8} ({:?}, {} iterations)",
        rep.objective, rep.status, rep.iterations
    );

    let f = Signal::random(LATTICE_STEP, 1.5, 1.5, 21)?;
    let lambda = box_points(LATTICE_STEP, 1.5, 1.5);
    let x: Vec<Complex64> = lambda.iter().map(|&z| f.gabor_transform(z)).collect();
    let graph = signal_graph(&f, &lambda, 1.01)?;
    println!(
        "\n|Lambda| = {}, spectral gap {:.4e}",
        lambda.len(),
        graph.spectral_gap()?
    );

    let table = build_predictor(&EntireFunction::SpectrogramOf(&f), &lambda, 1.01)?;
    for eps_prime in [1e-8, 1e-6, 1e-4] {
        let (y, rep) = solve(&build_step2(&table, eps_prime)?, &cfg)?;
        let eig = hermitian_eig(&y)?;
        let (top, v) = eig.top();
        let second = eig.values.iter().rev().nth(1).copied().unwrap_or(0.0);
        let est: Vec<Complex64> = v.iter().map(|z| z * y.trace().sqrt()).collect();
        let (_, err) = align_phase(&x, &est);
        println!(
            "eps' = {eps_prime:.0e}: {:?} after {} iterations, eigenvalues {top:.4} / {second:.2e}, aligned error {err:.2e}",
            rep.status, rep.iterations
        );
    }
    Ok(())
}
