//! ADMM for PSD-constrained interval problems.
//!
//! The problem `min ⟨C, X⟩ s.t. l ≤ 𝒜X ≤ u, X ⪰ 0` is split as `𝒜X = y`,
//! `X = Z` with `y` in the box and `Z` in the PSD cone. Each iteration
//!
//! 1. solves `(I + 𝒜ᵀ𝒜) X = 𝒜ᵀ(y - w) + (Z - U) - C/ρ` through the Woodbury
//!    identity with a cached Cholesky factor of `I + 𝒜𝒜ᵀ`;
//! 2. over-relaxes with `α = 1.6`;
//! 3. clips `y` to the box and projects `Z` onto the PSD cone by eigenvalue
//!    clipping;
//! 4. updates the scaled duals `w`, `U`.
//!
//! Rows of `𝒜` are normalized to unit Frobenius norm. The box is tightened by
//! `min(primal_tol, width/4)` so that iterates approaching it from inside
//! satisfy the original intervals. `ρ` doubles or halves every 50 iterations
//! when the primal and dual residuals differ by more than 10×; the system
//! matrix does not depend on `ρ`, so no refactorization is needed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cholesky::Cholesky;
use super::problem::{Functional, Objective, SdpProblem};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, hermitian_eigenvalues, HermitianMatrix};

const RELAXATION: f64 = 1.6;
const ADAPT_EVERY: usize = 50;
const ADAPT_RATIO: f64 = 10.0;
const RESYNC_EVERY: usize = 100;
/// Slack on the original intervals for status `solved`.
pub const FEASIBILITY_SLACK: f64 = 1e-9;
const PLATEAU_WINDOW: usize = 500;
const PLATEAU_RATIO: f64 = 0.99;
/// Primal residuals below this never count as an infeasibility plateau.
const PLATEAU_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iter: usize,
    pub primal_tol: f64,
    pub dual_tol: f64,
    pub rho: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            primal_tol: 1e-7,
            dual_tol: 1e-7,
            rho: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::parameter("max_iter must be positive"));
        }
        for (name, v) in [
            ("primal_tol", self.primal_tol),
            ("dual_tol", self.dual_tol),
            ("rho", self.rho),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::parameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Solved,
    InfeasibleDetected,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub iterations: usize,
    /// Largest violation of the original intervals by the returned matrix.
    pub max_residual: f64,
    pub min_eigenvalue: f64,
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub rho: f64,
    /// Primal plus dual residual after each iteration.
    #[serde(skip)]
    pub history: Vec<f64>,
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to zero.
pub fn psd_project(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(hermitian_eig(m)?.reassemble(|l| l.max(0.0)))
}

enum Row {
    /// Offset into the flat rank-one storage.
    RankOne(usize),
    Sparse(Vec<(usize, usize, Complex64)>),
}

/// The row-normalized constraint map with its factored Gram system.
struct ConstraintMap {
    n: usize,
    rows: Vec<Row>,
    rank_one: Vec<Complex64>,
    gram: Vec<f64>,
    chol: Cholesky,
}

impl ConstraintMap {
    fn new(n: usize, functionals: &[Functional]) -> Result<(Self, Vec<f64>)> {
        let mut norms = Vec::with_capacity(functionals.len());
        let mut scaled = Vec::with_capacity(functionals.len());
        for f in functionals {
            let norm = f.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::parameter("constraint functional with zero norm"));
            }
            norms.push(norm);
            scaled.push(match f {
                Functional::RankOne(w) => {
                    if w.len() != n {
                        return Err(Error::Dimension {
                            expected: n,
                            got: w.len(),
                        });
                    }
                    let s = 1.0 / norm.sqrt();
                    Functional::RankOne(w.iter().map(|z| z * s).collect())
                }
                Functional::Sparse(e) => {
                    if let Some(&(j, k, _)) = e.iter().find(|&&(j, k, _)| j > k || k >= n) {
                        return Err(Error::parameter(format!(
                            "sparse entry ({j}, {k}) outside upper triangle of size {n}"
                        )));
                    }
                    Functional::Sparse(e.iter().map(|&(j, k, v)| (j, k, v / norm)).collect())
                }
            });
        }
        let m = scaled.len();
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let g = scaled[i].inner(&scaled[j]);
                gram[i * m + j] = g;
                gram[j * m + i] = g;
            }
        }
        let mut k = gram.clone();
        for i in 0..m {
            k[i * m + i] += 1.0;
        }
        let chol =
            Cholesky::new(m, &k).ok_or_else(|| Error::parameter("constraint Gram system not positive definite"))?;

        let mut rank_one = Vec::new();
        let rows = scaled
            .into_iter()
            .map(|f| match f {
                Functional::RankOne(w) => {
                    let off = rank_one.len();
                    rank_one.extend(w);
                    Row::RankOne(off)
                }
                Functional::Sparse(e) => Row::Sparse(e),
            })
            .collect();
        Ok((
            Self {
                n,
                rows,
                rank_one,
                gram,
                chol,
            },
            norms,
        ))
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn apply(&self, x: &HermitianMatrix) -> Vec<f64> {
        let n = self.n;
        let data = x.as_slice();
        self.rows
            .iter()
            .map(|row| match row {
                Row::RankOne(off) => {
                    let w = &self.rank_one[*off..*off + n];
                    let mut diag = 0.0;
                    let mut off_diag = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        let xr = &data[j * n..(j + 1) * n];
                        diag += xr[j].re * w[j].norm_sqr();
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in j + 1..n {
                            acc += xr[k] * w[k];
                        }
                        off_diag += w[j].conj() * acc;
                    }
                    diag + 2.0 * off_diag.re
                }
                Row::Sparse(e) => e
                    .iter()
                    .map(|&(j, k, f)| {
                        let p = (data[j * n + k] * f.conj()).re;
                        if j == k {
                            p
                        } else {
                            2.0 * p
                        }
                    })
                    .sum(),
            })
            .collect()
    }

    /// `Σ_i t_i F_i`.
    fn adjoint(&self, t: &[f64]) -> HermitianMatrix {
        let n = self.n;
        let mut out = HermitianMatrix::zeros(n);
        let data = out.as_mut_slice();
        for (row, &ti) in self.rows.iter().zip(t) {
            if ti == 0.0 {
                continue;
            }
            match row {
                Row::RankOne(off) => {
                    let w = &self.rank_one[*off..*off + n];
                    for j in 0..n {
                        let a = w[j] * ti;
                        let xr = &mut data[j * n..(j + 1) * n];
                        for k in j..n {
                            xr[k] += a * w[k].conj();
                        }
                    }
                }
                Row::Sparse(e) => {
                    for &(j, k, f) in e {
                        if j == k {
                            data[j * n + j] += Complex64::new(f.re * ti, 0.0);
                        } else {
                            data[j * n + k] += f * ti;
                        }
                    }
                }
            }
        }
        for j in 0..n {
            data[j * n + j].im = 0.0;
            for k in j + 1..n {
                data[k * n + j] = data[j * n + k].conj();
            }
        }
        out
    }

    fn gram_mul(&self, v: &[f64]) -> Vec<f64> {
        let m = self.m();
        (0..m)
            .map(|i| self.gram[i * m..(i + 1) * m].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves from a zero start. See [`solve_warm`].
pub fn solve(p: &SdpProblem, cfg: &SolverConfig) -> Result<(HermitianMatrix, SolveReport)> {
    solve_warm(p, cfg, None)
}

/// Runs ADMM, optionally starting from `warm` (projected onto the PSD cone).
///
/// Status `solved` means the returned matrix is PSD and meets every original
/// interval to within `1e-9`; for min-max problems the dual residual must
/// also be below `dual_tol`. Feasibility problems return as soon as that
/// holds. Otherwise the least-violating PSD iterate (feasibility) or the last
/// one (min-max) is returned.
pub fn solve_warm(
    p: &SdpProblem,
    cfg: &SolverConfig,
    warm: Option<&HermitianMatrix>,
) -> Result<(HermitianMatrix, SolveReport)> {
    cfg.validate()?;
    let n = p.dim;
    if p.constraints.is_empty() {
        return Err(Error::parameter("problem has no constraints"));
    }
    let functionals: Vec<Functional> = p.constraints.iter().map(|c| c.functional.clone()).collect();
    let (map, norms) = ConstraintMap::new(n, &functionals)?;
    let m = map.m();

    // Tightened box in scaled units.
    let mut lo = Vec::with_capacity(m);
    let mut hi = Vec::with_capacity(m);
    for (c, &nrm) in p.constraints.iter().zip(&norms) {
        let width = c.upper - c.lower;
        let margin = if width.is_finite() {
            cfg.primal_tol.min(width / 4.0)
        } else {
            cfg.primal_tol
        };
        lo.push((c.lower + margin) / nrm);
        hi.push((c.upper - margin) / nrm);
    }
    let violation = |az: &[f64]| -> f64 {
        p.constraints
            .iter()
            .zip(az.iter().zip(&norms))
            .map(|(c, (&v, &nrm))| c.violation(v * nrm))
            .fold(0.0, f64::max)
    };

    let cost = match p.objective {
        Objective::Feasibility => None,
        Objective::MinMaxDiagonal => {
            let mut c = HermitianMatrix::zeros(n);
            c[(n - 1, n - 1)] = Complex64::new(1.0, 0.0);
            Some(c)
        }
    };
    let ac = cost.as_ref().map(|c| map.apply(c)).unwrap_or_else(|| vec![0.0; m]);

    let mut z = match warm {
        Some(x0) => {
            if x0.dim() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: x0.dim(),
                });
            }
            psd_project(x0)?
        }
        None => HermitianMatrix::zeros(n),
    };
    let mut u = HermitianMatrix::zeros(n);
    let mut az = map.apply(&z);
    let mut au = vec![0.0; m];
    let mut y: Vec<f64> = az
        .iter()
        .zip(lo.iter().zip(&hi))
        .map(|(v, (l, h))| v.clamp(*l, *h))
        .collect();
    let mut w = vec![0.0; m];
    let mut rho = cfg.rho;

    let finish =
        |x: HermitianMatrix, status, iterations, rp, rd, rho, history| -> Result<(HermitianMatrix, SolveReport)> {
            let max_residual = p.max_violation(&x);
            let min_eigenvalue = hermitian_eigenvalues(&x)?.first().copied().unwrap_or(0.0);
            let report = SolveReport {
                status,
                iterations,
                max_residual,
                min_eigenvalue,
                objective: p.objective_value(&x),
                primal_residual: rp,
                dual_residual: rd,
                rho,
                history,
            };
            Ok((x, report))
        };

    let start_violation = violation(&az);
    if p.objective == Objective::Feasibility && start_violation <= FEASIBILITY_SLACK && warm.is_some() {
        return finish(z, SolveStatus::Solved, 0, 0.0, 0.0, rho, Vec::new());
    }

    let mut best = (start_violation, z.clone());
    let mut history = Vec::with_capacity(cfg.max_iter.min(1 << 20));
    let mut primal_hist = Vec::with_capacity(cfg.max_iter.min(1 << 20));
    let (mut rp, mut rd) = (f64::INFINITY, f64::INFINITY);

    for iter in 1..=cfg.max_iter {
        // x-update.
        let q = sub(&y, &w);
        let gq = map.gram_mul(&q);
        let ab: Vec<f64> = (0..m).map(|i| gq[i] + az[i] - au[i] - ac[i] / rho).collect();
        let s = map.chol.solve(&ab);
        let t = sub(&q, &s);
        let gs = map.gram_mul(&s);
        let ax = sub(&ab, &gs);
        let mut x = z.sub(&u);
        if let Some(c) = &cost {
            x.add_scaled(-1.0 / rho, c);
        }
        x.add_scaled(1.0, &map.adjoint(&t));

        // Relaxation.
        let axh: Vec<f64> = (0..m).map(|i| RELAXATION * ax[i] + (1.0 - RELAXATION) * y[i]).collect();
        let axh_z: Vec<f64> = (0..m)
            .map(|i| RELAXATION * ax[i] + (1.0 - RELAXATION) * az[i])
            .collect();
        let mut xh = x.clone();
        xh.scale(RELAXATION);
        xh.add_scaled(1.0 - RELAXATION, &z);

        // Box and cone projections, dual updates.
        let y_new: Vec<f64> = (0..m).map(|i| (axh[i] + w[i]).clamp(lo[i], hi[i])).collect();
        for i in 0..m {
            w[i] += axh[i] - y_new[i];
        }
        let mut v = xh.clone();
        v.add_scaled(1.0, &u);
        let z_new = psd_project(&v)?;
        u.add_scaled(1.0, &xh);
        u.add_scaled(-1.0, &z_new);
        let az_new = map.apply(&z_new);
        if iter % RESYNC_EVERY == 0 {
            au = map.apply(&u);
        } else {
            for i in 0..m {
                au[i] += axh_z[i] - az_new[i];
            }
        }

        let r_box = ax.iter().zip(&y_new).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        rp = r_box.max(x.sub(&z_new).frobenius_norm());
        let dy = norm2(&sub(&y_new, &y));
        let dz = z_new.sub(&z).frobenius_norm();
        rd = rho * (dy * dy + dz * dz).sqrt();
        history.push(rp + rd);
        primal_hist.push(rp);

        y = y_new;
        z = z_new;
        az = az_new;

        let viol = violation(&az);
        let feasible = viol <= FEASIBILITY_SLACK;
        match p.objective {
            Objective::Feasibility => {
                if viol < best.0 {
                    best = (viol, z.clone());
                }
                if feasible {
                    return finish(z, SolveStatus::Solved, iter, rp, rd, rho, history);
                }
            }
            Objective::MinMaxDiagonal => {
                if feasible && rp <= cfg.primal_tol && rd <= cfg.dual_tol {
                    return finish(z, SolveStatus::Solved, iter, rp, rd, rho, history);
                }
            }
        }

        if iter >= 2 * PLATEAU_WINDOW && iter % PLATEAU_WINDOW == 0 {
            let before = primal_hist[iter - 1 - PLATEAU_WINDOW];
            if rp > PLATEAU_FLOOR && rp >= PLATEAU_RATIO * before {
                let x = match p.objective {
                    Objective::Feasibility => best.1,
                    Objective::MinMaxDiagonal => z,
                };
                return finish(x, SolveStatus::InfeasibleDetected, iter, rp, rd, rho, history);
            }
        }

        if iter % ADAPT_EVERY == 0 {
            let factor = if rp > ADAPT_RATIO * rd {
                2.0
            } else if rd > ADAPT_RATIO * rp {
                0.5
            } else {
                1.0
            };
            if factor != 1.0 {
                rho *= factor;
                w.iter_mut().for_each(|x| *x /= factor);
                u.scale(1.0 / factor);
                au.iter_mut().for_each(|x| *x /= factor);
            }
        }
    }

    let x = match p.objective {
        Objective::Feasibility => best.1,
        Objective::MinMaxDiagonal => z,
    };
    finish(x, SolveStatus::MaxIterations, cfg.max_iter, rp, rd, rho, history)
}
