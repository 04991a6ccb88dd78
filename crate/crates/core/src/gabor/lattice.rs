use serde::{Deserialize, Serialize};

use super::transform::Point;
use super::LATTICE_STEP;
use crate::error::{Error, Result};

/// Slack on box membership so that points exactly on the boundary count.
const BOX_TOL: f64 = 1e-9;

/// Integer pairs `(i, j)` with `step·(i, j)` in `[-hx, hx] × [-hy, hy]`, lexicographic.
pub fn box_indices(step: f64, hx: f64, hy: f64) -> Vec<[i64; 2]> {
    let ni = ((hx + BOX_TOL) / step).floor() as i64;
    let nj = ((hy + BOX_TOL) / step).floor() as i64;
    let mut out = Vec::with_capacity(((2 * ni + 1) * (2 * nj + 1)).max(0) as usize);
    for i in -ni..=ni {
        for j in -nj..=nj {
            out.push([i, j]);
        }
    }
    out
}

pub fn box_points(step: f64, hx: f64, hy: f64) -> Vec<Point> {
    box_indices(step, hx, hy)
        .into_iter()
        .map(|[i, j]| [step * i as f64, step * j as f64])
        .collect()
}

/// Parameters of the reconstruction windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowParams {
    /// Half-width in time of the reconstruction box.
    #[serde(rename = "T")]
    pub t: f64,
    /// Half-width in frequency of the reconstruction box.
    #[serde(rename = "S")]
    pub s_half: f64,
    /// Margin added around the box for sampling (once) and for the Ansatz support (twice).
    #[serde(rename = "R")]
    pub margin: f64,
    /// Band radius of the completion step.
    pub r: f64,
    /// Sampling step of the spectrogram grid.
    pub s: f64,
}

/// The three index sets of the pipeline.
///
/// * `lambda`: `[-T,T]×[-S,S] ∩ 𝔞ℤ²`, where coefficients are recovered;
/// * `omega`: `[-T-R,T+R]×[-S-R,S+R] ∩ sℤ²`, where the spectrogram is sampled;
/// * `gamma`: `[-T-2R,T+2R]×[-S-2R,S+2R] ∩ 𝔞ℤ²`, the Ansatz support.
///
/// All point lists are in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeWindows {
    pub params: WindowParams,
    pub lambda: Vec<Point>,
    pub omega: Vec<Point>,
    pub gamma: Vec<Point>,
}

impl LatticeWindows {
    pub fn new(params: WindowParams) -> Result<Self> {
        let WindowParams {
            t,
            s_half,
            margin,
            r,
            s,
        } = params;
        for (name, v) in [("T", t), ("S", s_half), ("R", margin), ("r", r), ("s", s)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::parameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            params,
            lambda: box_points(LATTICE_STEP, t, s_half),
            omega: box_points(s, t + margin, s_half + margin),
            gamma: box_points(LATTICE_STEP, t + 2.0 * margin, s_half + 2.0 * margin),
        })
    }

    /// Position of each `lambda` point inside `gamma`.
    pub fn lambda_in_gamma(&self) -> Vec<usize> {
        self.lambda
            .iter()
            .map(|p| {
                self.gamma
                    .iter()
                    .position(|q| (p[0] - q[0]).abs() < BOX_TOL && (p[1] - q[1]).abs() < BOX_TOL)
                    .expect("Λ ⊂ Γ")
            })
            .collect()
    }
}
