//! The vertex-weighted graph of a signal on `Λ`, its Laplacian, spectral gap
//! and the stability functional `C_stab`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::{dist2, Point, Signal, LATTICE_STEP};
use crate::io::Provenance;
use crate::numerics::{hermitian_eig, hermitian_eigenvalues, HermitianMatrix};

/// Edges need `|u - v| < r - EDGE_TOL`.
const EDGE_TOL: f64 = 1e-9;
/// Spectral gaps at or below this count as disconnected.
pub const GAP_TOL: f64 = 1e-10;
/// Offset added to lattice distances to form candidate radii.
pub const RADIUS_NUDGE: f64 = 0.01;

/// Vertices `Λ` with weights `α`, and edges between distinct vertices closer than `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeightedGraph {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub r: f64,
    /// Pairs `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
}

pub fn build_graph(points: &[Point], weights: &[f64], r: f64) -> Result<VertexWeightedGraph> {
    if points.len() != weights.len() {
        return Err(Error::Dimension {
            expected: points.len(),
            got: weights.len(),
        });
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::parameter(format!("radius must be positive, got {r}")));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::parameter(format!("vertex weights must be ≥ 0, got {w}")));
    }
    let cut = (r - EDGE_TOL).max(0.0).powi(2);
    let mut edges = Vec::new();
    for u in 0..points.len() {
        for v in u + 1..points.len() {
            let d = dist2(points[u], points[v]);
            if d > 0.0 && d < cut {
                edges.push((u, v));
            }
        }
    }
    Ok(VertexWeightedGraph {
        points: points.to_vec(),
        weights: weights.to_vec(),
        r,
        edges,
    })
}

/// Graph on `Λ` weighted by the spectrogram of `f`.
pub fn signal_graph(f: &Signal, lambda: &[Point], r: f64) -> Result<VertexWeightedGraph> {
    let weights: Vec<f64> = lambda.iter().map(|&p| f.spectrogram(p)).collect();
    build_graph(lambda, &weights, r)
}

impl VertexWeightedGraph {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// `Σ_v α_v`, which equals `‖𝒢f‖²_{ℓ²(Λ)}` for a signal graph.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `𝓛(u,u) = Σ_{z∼u} α_z`, `𝓛(u,v) = -√(α_u α_v)` for `u ∼ v`.
    pub fn laplacian(&self) -> HermitianMatrix {
        let n = self.len();
        let mut l = HermitianMatrix::zeros(n);
        for &(u, v) in &self.edges {
            let (au, av) = (self.weights[u], self.weights[v]);
            l[(u, u)].re += av;
            l[(v, v)].re += au;
            let off = -(au * av).sqrt();
            l[(u, v)].re = off;
            l[(v, u)].re = off;
        }
        l
    }

    /// Second-smallest Laplacian eigenvalue, clamped at zero.
    pub fn spectral_gap(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::parameter("spectral gap needs at least two vertices"));
        }
        Ok(hermitian_eigenvalues(&self.laplacian())?[1].max(0.0))
    }

    /// Laplacian spectrum, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(&self.laplacian())?.values)
    }

    /// `B = Σ_{u,v} |𝓛(u,v)|`.
    pub fn coupling_sum(&self) -> f64 {
        self.laplacian().as_slice().iter().map(|z| z.norm()).sum()
    }

    /// The a-priori bound `16 r² Σ α` on [`coupling_sum`](Self::coupling_sum).
    pub fn coupling_bound(&self) -> f64 {
        16.0 * self.r * self.r * self.total_weight()
    }

    pub fn to_json(&self, provenance: &Provenance) -> Result<serde_json::Value> {
        #[derive(Serialize)]
        struct Vertex {
            x: f64,
            y: f64,
            weight: f64,
        }
        let lambda2 = if self.len() >= 2 {
            Some(self.spectral_gap()?)
        } else {
            None
        };
        Ok(serde_json::json!({
            "provenance": provenance,
            "r": self.r,
            "lambda2": lambda2,
            "vertices": self.points.iter().zip(&self.weights)
                .map(|(p, w)| Vertex { x: p[0], y: p[1], weight: *w })
                .collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
        }))
    }

    pub fn write_json(&self, path: &Path, provenance: &Provenance) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json(provenance)?)? + "\n")?;
        Ok(())
    }
}

/// `C_stab = e^{0.84 r²} (1 + 20 r √(‖𝒢f‖² / λ₂))`, infinite when `λ₂ ≤ 1e-10`.
pub fn c_stab(norm_sq: f64, lambda2: f64, r: f64) -> f64 {
    if lambda2 <= GAP_TOL {
        if r == 0.0 {
            return 1.0;
        }
        return f64::INFINITY;
    }
    (0.84 * r * r).exp() * (1.0 + 20.0 * r * (norm_sq / lambda2).sqrt())
}

/// Distinct lattice distances `𝔞√(i²+j²) > 0` not exceeding `cap - 0.01`,
/// each shifted by `+0.01`, ascending.
pub fn candidate_radii(cap: f64) -> Vec<f64> {
    let limit = cap - RADIUS_NUDGE + EDGE_TOL;
    let kmax = (limit / LATTICE_STEP).ceil() as i64 + 1;
    let mut sq: Vec<i64> = Vec::new();
    for i in 0..=kmax {
        for j in 0..=i {
            let s = i * i + j * j;
            if s > 0 && LATTICE_STEP * (s as f64).sqrt() <= limit {
                sq.push(s);
            }
        }
    }
    sq.sort_unstable();
    sq.dedup();
    sq.into_iter()
        .map(|s| LATTICE_STEP * (s as f64).sqrt() + RADIUS_NUDGE)
        .collect()
}

/// Default cap on candidate radii, `√(5/2) + 0.01`.
pub fn default_radius_cap() -> f64 {
    2.5f64.sqrt() + RADIUS_NUDGE
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub r: f64,
    pub lambda2: f64,
    pub c_stab: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSelection {
    /// Minimizing radius; `None` when every candidate is disconnected.
    pub r_star: Option<f64>,
    pub rows: Vec<RadiusRow>,
}

/// Evaluates `C_stab` at each radius (sorted ascending) and picks the
/// minimizer, ties going to the smaller radius.
pub fn r_star(points: &[Point], weights: &[f64], radii: &[f64]) -> Result<RadiusSelection> {
    let mut radii = radii.to_vec();
    radii.sort_by(f64::total_cmp);
    let norm_sq: f64 = weights.iter().sum();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in &radii {
        let g = build_graph(points, weights, r)?;
        let lambda2 = g.spectral_gap()?;
        rows.push(RadiusRow {
            r,
            lambda2,
            c_stab: c_stab(norm_sq, lambda2, r),
        });
    }
    let mut best: Option<RadiusRow> = None;
    for row in &rows {
        if row.c_stab.is_finite() && best.is_none_or(|b| row.c_stab < b.c_stab) {
            best = Some(*row);
        }
    }
    Ok(RadiusSelection {
        r_star: best.map(|b| b.r),
        rows,
    })
}
