use num_complex::Complex64;

use crate::numerics::HermitianMatrix;

/// A real linear functional `X ↦ ⟨X, F⟩_F = Re Σ X_jk conj(F_jk)` on Hermitian
/// matrices, given by a Hermitian `F`.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// `F = w w^H`, so `⟨X, F⟩ = w^H X w`.
    RankOne(Vec<Complex64>),
    /// `F` from its upper-triangle entries `(j, k, F_jk)` with `j ≤ k`;
    /// the lower triangle is implied by symmetry.
    Sparse(Vec<(usize, usize, Complex64)>),
}

impl Functional {
    /// `Re X_jk` (`j ≤ k`) as `⟨X, ½(E_jk + E_kj)⟩`.
    pub fn real_part(j: usize, k: usize) -> Self {
        let v = if j == k { 1.0 } else { 0.5 };
        Functional::Sparse(vec![(j, k, Complex64::new(v, 0.0))])
    }

    /// `Im X_jk` (`j < k`) as `⟨X, (1/2i)(E_kj - E_jk)⟩`.
    pub fn imag_part(j: usize, k: usize) -> Self {
        assert!(j < k, "imaginary part of a diagonal entry is zero");
        Functional::Sparse(vec![(j, k, Complex64::new(0.0, 0.5))])
    }

    pub fn apply(&self, x: &HermitianMatrix) -> f64 {
        match self {
            Functional::RankOne(w) => x.quadratic_form(w),
            Functional::Sparse(entries) => entries
                .iter()
                .map(|&(j, k, f)| {
                    let p = x[(j, k)] * f.conj();
                    if j == k {
                        p.re
                    } else {
                        2.0 * p.re
                    }
                })
                .sum(),
        }
    }

    /// Entry `F_jk` for any `j, k`.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        match self {
            Functional::RankOne(w) => w[j] * w[k].conj(),
            Functional::Sparse(entries) => {
                let (a, b, flip) = if j <= k { (j, k, false) } else { (k, j, true) };
                let v: Complex64 = entries.iter().filter(|e| e.0 == a && e.1 == b).map(|e| e.2).sum();
                if flip {
                    v.conj()
                } else {
                    v
                }
            }
        }
    }

    pub fn to_matrix(&self, dim: usize) -> HermitianMatrix {
        match self {
            Functional::RankOne(w) => HermitianMatrix::outer(w),
            Functional::Sparse(entries) => {
                let mut m = HermitianMatrix::zeros(dim);
                for &(j, k, f) in entries {
                    if j == k {
                        m[(j, j)] += Complex64::new(f.re, 0.0);
                    } else {
                        m[(j, k)] += f;
                        m[(k, j)] += f.conj();
                    }
                }
                m
            }
        }
    }

    /// `⟨F, G⟩_F`.
    pub fn inner(&self, other: &Functional) -> f64 {
        match (self, other) {
            (Functional::RankOne(w), Functional::RankOne(v)) => {
                let ip: Complex64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
                ip.norm_sqr()
            }
            (Functional::Sparse(entries), g) | (g, Functional::Sparse(entries)) => entries
                .iter()
                .map(|&(j, k, f)| {
                    let p = (g.entry(j, k) * f.conj()).re;
                    if j == k {
                        p
                    } else {
                        2.0 * p
                    }
                })
                .sum(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }
}

/// `lower ≤ ⟨X, F⟩ ≤ upper`; either side may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub functional: Functional,
    pub lower: f64,
    pub upper: f64,
}

impl Constraint {
    /// `|⟨X, F⟩ - target| ≤ tol`.
    pub fn interval(functional: Functional, target: f64, tol: f64) -> Self {
        Self {
            functional,
            lower: target - tol,
            upper: target + tol,
        }
    }

    pub fn at_most(functional: Functional, bound: f64) -> Self {
        Self {
            functional,
            lower: f64::NEG_INFINITY,
            upper: bound,
        }
    }

    /// Distance of `value` from the interval.
    pub fn violation(&self, value: f64) -> f64 {
        (self.lower - value).max(value - self.upper).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Feasibility,
    /// Minimize `max_j X_jj` over the leading `dim - 1` indices. The last
    /// index holds the slack `μ`; the problem minimizes `X_{μμ}` and carries
    /// the rows `X_jj - μ ≤ 0`.
    MinMaxDiagonal,
}

/// PSD-constrained problem over Hermitian `X` of size `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
}

impl SdpProblem {
    pub fn feasibility(dim: usize, constraints: Vec<Constraint>) -> Self {
        Self {
            dim,
            constraints,
            objective: Objective::Feasibility,
        }
    }

    /// `min max_j X_jj` over `X ⪰ 0` of size `n` subject to `constraints`
    /// (stated for size `n`), lifted to size `n + 1` with the slack.
    pub fn min_max_diagonal(n: usize, constraints: Vec<Constraint>) -> Self {
        let mut lifted: Vec<Constraint> = constraints
            .into_iter()
            .map(|c| Constraint {
                functional: match c.functional {
                    Functional::RankOne(mut w) => {
                        w.push(Complex64::new(0.0, 0.0));
                        Functional::RankOne(w)
                    }
                    sparse => sparse,
                },
                ..c
            })
            .collect();
        for j in 0..n {
            lifted.push(Constraint::at_most(
                Functional::Sparse(vec![
                    (j, j, Complex64::new(1.0, 0.0)),
                    (n, n, Complex64::new(-1.0, 0.0)),
                ]),
                0.0,
            ));
        }
        Self {
            dim: n + 1,
            constraints: lifted,
            objective: Objective::MinMaxDiagonal,
        }
    }

    /// Size of the matrix the caller cares about (without the slack).
    pub fn primary_dim(&self) -> usize {
        match self.objective {
            Objective::Feasibility => self.dim,
            Objective::MinMaxDiagonal => self.dim - 1,
        }
    }

    /// Largest constraint violation of `x`.
    pub fn max_violation(&self, x: &HermitianMatrix) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.violation(c.functional.apply(x)))
            .fold(0.0, f64::max)
    }

    /// Objective value: `max_j X_jj` over the primary block, or 0.
    pub fn objective_value(&self, x: &HermitianMatrix) -> f64 {
        match self.objective {
            Objective::Feasibility => 0.0,
            Objective::MinMaxDiagonal => (0..self.dim - 1)
                .map(|j| x[(j, j)].re)
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}
