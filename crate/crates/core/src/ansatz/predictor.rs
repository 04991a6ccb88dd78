use std::path::Path;

use num_complex::Complex64;

use super::functions::{eval_operator, EntireFunction};
use crate::error::{Error, Result};
use crate::gabor::{dist2, Point};
use crate::io::{self, Provenance};
use crate::numerics::HermitianMatrix;

/// Slack on `|λ - λ'| ≤ r`.
const PAIR_TOL: f64 = 1e-9;

pub const PREDICTOR_HEADER: [&str; 6] = [
    "lambda_x",
    "lambda_y",
    "lambda_prime_x",
    "lambda_prime_y",
    "re_T",
    "im_T",
];

/// Estimate of one entry of the lifted matrix: `Y[row, col] ≈ value` with
/// `row ≤ col`. The mirrored entry is `conj(value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorEntry {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// Predicted relative phases `T_{λ',λ}` on the band `{|λ - λ'| ≤ r}`, one
/// entry per unordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorTable {
    pub points: Vec<Point>,
    pub r: f64,
    pub entries: Vec<PredictorEntry>,
}

/// Unordered pairs `row ≤ col` of `points` at distance at most `r`, in row-major order.
pub fn band_pairs(points: &[Point], r: f64) -> Vec<(usize, usize)> {
    let r2 = (r + PAIR_TOL) * (r + PAIR_TOL);
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i..points.len() {
            if dist2(points[i], points[j]) <= r2 {
                out.push((i, j));
            }
        }
    }
    out
}

/// `T_{λ',λ} = E[F_A](λ, λ' - λ)` for `(λ, λ')` in the band.
///
/// The entry for `row ≤ col` predicts `Y[row, col] ≈ x_row conj(x_col)`, so
/// it is evaluated with `λ' = points[row]`, `λ = points[col]`.
pub fn build_predictor(g: &EntireFunction<'_>, points: &[Point], r: f64) -> Result<PredictorTable> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::parameter(format!("band radius must be positive, got {r}")));
    }
    let entries = band_pairs(points, r)
        .into_iter()
        .map(|(row, col)| {
            let lam = points[col];
            let lam_p = points[row];
            let mut value = eval_operator(g, lam, [lam_p[0] - lam[0], lam_p[1] - lam[1]]);
            if row == col {
                value.im = 0.0;
            }
            PredictorEntry { row, col, value }
        })
        .collect();
    Ok(PredictorTable {
        points: points.to_vec(),
        r,
        entries,
    })
}

impl PredictorTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.points.len()];
        for e in self.entries.iter().filter(|e| e.row == e.col) {
            d[e.row] = e.value.re;
        }
        d
    }

    /// Largest `|Y[row, col] - value|` over the table.
    pub fn max_deviation(&self, y: &HermitianMatrix) -> f64 {
        self.entries
            .iter()
            .map(|e| (y[(e.row, e.col)] - e.value).norm())
            .fold(0.0, f64::max)
    }

    /// One row per unordered pair: `λ = points[col]`, `λ' = points[row]`, `T_{λ',λ}`.
    pub fn write_csv(&self, path: &Path, provenance: &Provenance) -> Result<()> {
        io::write_csv(
            path,
            provenance,
            &PREDICTOR_HEADER,
            self.entries.iter().map(|e| {
                let l = self.points[e.col];
                let lp = self.points[e.row];
                vec![l[0], l[1], lp[0], lp[1], e.value.re, e.value.im]
            }),
        )
    }
}
