//! Random test signals and noisy spectrogram samples on the sampling grid,
//! written in the same formats as `gpr gen` and `gpr sample`.

use gabor_phase::gabor::{sample_spectrogram, LatticeWindows, Signal, WindowParams, LATTICE_STEP};
use gabor_phase::io::Provenance;
use serde_json::json;

fn main() -> gabor_phase::Result<()> {
    let seed = 17;
    let f = Signal::random(LATTICE_STEP, 1.0, 1.0, seed)?;
    let params = WindowParams {
        t: 2.0 * LATTICE_STEP,
        s_half: 2.0 * LATTICE_STEP,
        margin: 1.0,
        r: 1.01,
        s: 0.25,
    };
    let w = LatticeWindows::new(params)?;
    println!(
        "|Lambda| = {}, |Omega| = {}, |Gamma| = {}",
        w.lambda.len(),
        w.omega.len(),
        w.gamma.len()
    );

    for nu in [0.0, 1e-5, 1e-3] {
        let s = sample_spectrogram(&f, &w.omega, nu, seed)?;
        let dev = s
            .points
            .iter()
            .zip(&s.values)
            .map(|(p, v)| (v - f.spectrogram(*p)).abs())
            .fold(0.0, f64::max);
        println!(
            "nu = {nu:>7.0e}: peak {:.4}, max deviation from |Gf|^2 {dev:.2e}",
            s.max_value()
        );
    }

    let dir = std::env::temp_dir().join("gabor-phase-sampling");
    std::fs::create_dir_all(&dir)?;
    let prov = Provenance::new(json!({"example": "sampling", "nu": 1e-5}), vec![seed]);
    f.write_with(&dir.join("signal.json"), &prov)?;
    sample_spectrogram(&f, &w.omega, 1e-5, seed)?.write_csv(&dir.join("samples.csv"), &prov)?;
    println!("wrote {}/signal.json and samples.csv", dir.display());
    Ok(())
}
