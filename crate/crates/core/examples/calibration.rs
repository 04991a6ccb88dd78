//! How far realistic parameters are from the calibrated regime, and how many
//! samples the calibration would demand.

use gabor_phase::gabor::{LatticeWindows, Signal, WindowParams, LATTICE_STEP};
use gabor_phase::graph::signal_graph;
use gabor_phase::pipeline::{
    calibrated_eps_prime, check_calibration, eps_bound, max_sampling_step, min_margin, SignalData,
};

fn main() -> gabor_phase::Result<()> {
    let f = Signal::random(LATTICE_STEP, 1.0, 1.0, 2)?;
    let params = WindowParams {
        t: 2.0 * LATTICE_STEP,
        s_half: 2.0 * LATTICE_STEP,
        margin: 1.0,
        r: 1.01,
        s: 0.25,
    };
    let w = LatticeWindows::new(params)?;
    let g = signal_graph(&f, &w.lambda, params.r)?;
    let data = SignalData {
        norm_sq: g.total_weight(),
        lambda2: g.spectral_gap()?,
        lambda_len: g.len(),
    };
    println!("||Gf||^2 = {:.4}, lambda2 = {:.4e}", data.norm_sq, data.lambda2);

    let bound = eps_bound(params.r, &data);
    println!("largest admissible eps: {bound:.3e}");
    println!(
        "\n{:>8} {:>10} {:>8} {:>8} {:>10}  conditions eps/eps'/s/R",
        "eps", "eps'", "s max", "R min", "|Omega|"
    );
    for eps in [1e-6, 1e-12, bound] {
        let s = max_sampling_step(eps);
        let r_min = min_margin(eps, params.r, s);
        let rep = check_calibration(
            &WindowParams {
                s,
                margin: r_min,
                ..params
            },
            eps,
            &data,
            None,
        )?;
        println!(
            "{eps:>8.1e} {:>10.3e} {s:>8.4} {r_min:>8.3} {:>10}  {}/{}/{}/{}",
            calibrated_eps_prime(eps, params.r),
            rep.sample_count,
            rep.eps_condition.holds,
            rep.eps_prime_condition.holds,
            rep.s_condition.holds,
            rep.margin_condition.holds
        );
    }
    let rep = check_calibration(&params, 1e-6, &data, Some(1e-5))?;
    println!(
        "\ndesk parameters (s = 0.25, R = 1, eps = 1e-6, eps' = 1e-5): all pass = {}, |Omega| = {} vs {} required",
        rep.all_pass(),
        rep.sample_count,
        rep.required_sample_count
    );
    Ok(())
}
