use std::path::Path;

use serde::{Deserialize, Serialize};

use super::signal::Signal;
use super::transform::Point;
use crate::error::{Error, Result};
use crate::io::{self, Provenance};
use crate::numerics::SplitMix64;

pub const SAMPLES_HEADER: [&str; 3] = ["x", "omega", "sigma"];

/// Noisy spectrogram values `σ_ω = |𝒢f(ω)|² + η_ω` on a point grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrogramSamples {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub noise_level: f64,
    pub seed: u64,
}

/// Samples the spectrogram of `f` on `grid` with noise i.i.d. uniform on
/// `[-ν, ν]`, drawn from [`SplitMix64`] with `seed` in grid order. With
/// `ν = 0` no draws are made and the values are exact.
pub fn sample_spectrogram(f: &Signal, grid: &[Point], nu: f64, seed: u64) -> Result<SpectrogramSamples> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::parameter(format!("noise level must be ≥ 0, got {nu}")));
    }
    let mut rng = SplitMix64::new(seed);
    let values = grid
        .iter()
        .map(|&z| {
            let s = f.spectrogram(z);
            if nu > 0.0 {
                s + rng.uniform(-nu, nu)
            } else {
                s
            }
        })
        .collect();
    Ok(SpectrogramSamples {
        points: grid.to_vec(),
        values,
        noise_level: nu,
        seed,
    })
}

impl SpectrogramSamples {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_csv(&self, path: &Path, provenance: &Provenance) -> Result<()> {
        io::write_csv(
            path,
            provenance,
            &SAMPLES_HEADER,
            self.points.iter().zip(&self.values).map(|(p, v)| vec![p[0], p[1], *v]),
        )
    }

    /// Reads a samples CSV. Noise level and seed come from the provenance
    /// line when present (`config.nu`, first seed), else zero.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let csv = io::read_csv(path, &SAMPLES_HEADER)?;
        let (nu, seed) = csv
            .provenance
            .as_ref()
            .map(|p| {
                (
                    p.config.get("nu").and_then(|v| v.as_f64()).unwrap_or(0.0),
                    p.seeds.first().copied().unwrap_or(0),
                )
            })
            .unwrap_or((0.0, 0));
        Ok(Self {
            points: csv.rows.iter().map(|r| [r[0], r[1]]).collect(),
            values: csv.rows.iter().map(|r| r[2]).collect(),
            noise_level: nu,
            seed,
        })
    }
}
