//! Signals built from time-frequency shifted Gaussians, their Gabor
//! transforms in closed form, noisy spectrogram sampling, the canonical dual
//! window and the smoothness functionals κ_S and η.

mod dual;
mod lattice;
mod samples;
mod signal;
mod smoothness;
mod transform;

pub use dual::{dual_window, synthesize, synthesize_exact, DualWindow};
pub use lattice::{box_indices, box_points, LatticeWindows, WindowParams};
pub use samples::{sample_spectrogram, SpectrogramSamples, SAMPLES_HEADER};
pub use signal::Signal;
pub use smoothness::{eta, kappa_s, l2_distance, l2_norm, SmoothnessGrid};
pub use transform::{dist2, gabor_atom, shifted_window, window, Point};

/// Step `𝔞 = 1/√2` of the critical square lattice.
pub const LATTICE_STEP: f64 = std::f64::consts::FRAC_1_SQRT_2;
