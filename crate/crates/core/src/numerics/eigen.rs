//! Dense Hermitian eigensolvers.
//!
//! [`hermitian_eig`] reduces to real tridiagonal form with complex Householder
//! reflectors, makes the subdiagonal real with a diagonal phase similarity and
//! finishes with the implicit QL iteration. [`symmetric_eig`] is a cyclic
//! Jacobi solver for real symmetric input, kept as an independent check.

use num_complex::Complex64;

use super::hermitian::{HermitianMatrix, SymmetricMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Components below this modulus are skipped when fixing the eigenvector phase.
const PHASE_TOL: f64 = 1e-10;

/// Eigenvalues ascending; `vectors[k]` is the unit eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Largest eigenvalue with its eigenvector.
    pub fn top(&self) -> (f64, &[Complex64]) {
        let k = self.values.len() - 1;
        (self.values[k], &self.vectors[k])
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `Σ f(λ_k) v_k v_k^H`.
    pub fn reassemble(&self, mut f: impl FnMut(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let mut out = HermitianMatrix::zeros(n);
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            let w = f(*lam);
            if w == 0.0 {
                continue;
            }
            let data = out.as_mut_slice();
            for i in 0..n {
                let vi = v[i] * w;
                let row = &mut data[i * n..(i + 1) * n];
                for (j, r) in row.iter_mut().enumerate().skip(i) {
                    *r += vi * v[j].conj();
                }
            }
        }
        // Only the upper triangle was accumulated.
        let data = out.as_mut_slice();
        for i in 0..n {
            data[i * n + i].im = 0.0;
            for j in i + 1..n {
                data[j * n + i] = data[i * n + j].conj();
            }
        }
        out
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Each eigenvector is scaled so that its first component with modulus above
/// `1e-10` is real and positive.
pub fn hermitian_eig(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let scale = m.max_abs().max(1.0);
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = m.dim();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: vec![],
        });
    }

    let (d, e, q) = tridiagonalize(m);

    // Columns of `qd` are the Householder basis times the phase diagonal.
    let mut e_real = vec![0.0; n];
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    for i in 1..n {
        let r = e[i].norm();
        e_real[i] = r;
        phase[i] = if r > 0.0 {
            phase[i - 1] * (e[i] / r)
        } else {
            phase[i - 1]
        };
    }

    let mut d = d;
    let mut zt = identity_rows(n);
    tql2(&mut d, &mut e_real, &mut zt);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &k in &order {
        values.push(d[k]);
        let z = &zt[k];
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (row, vr) in v.iter_mut().enumerate() {
            let qrow = &q[row * n..(row + 1) * n];
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += qrow[i] * phase[i] * z[i];
            }
            *vr = acc;
        }
        normalize_phase(&mut v);
        vectors.push(v);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m)?.values)
}

fn identity_rows(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            r
        })
        .collect()
}

fn normalize_phase(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .find(|z| z.norm() > PHASE_TOL * norm)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let rot = pivot.conj() / (pivot.norm() * norm);
    for z in v.iter_mut() {
        *z *= rot;
    }
}

/// Reduces `m` to `Q^H M Q = tridiag(e, d, conj(e))`.
///
/// Returns the real diagonal, the complex subdiagonal (`e[i]` couples `i-1`
/// and `i`, `e[0] = 0`) and `Q` row-major.
fn tridiagonalize(m: &HermitianMatrix) -> (Vec<f64>, Vec<Complex64>, Vec<Complex64>) {
    let n = m.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut a = m.as_slice().to_vec();
    let mut q = vec![zero; n * n];
    for i in 0..n {
        q[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let mut v = vec![zero; n];
    let mut w = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let s = k + 1;
        let p = n - s;
        let xnorm = (s..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let tail: f64 = (s + 1..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[s * n + k];
        let unit = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -unit * xnorm;

        for i in 0..p {
            v[i] = a[(s + i) * n + k];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v[..p].iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // w = tau B v on the trailing block B.
        for i in 0..p {
            let row = &a[(s + i) * n + s..(s + i) * n + n];
            let mut acc = zero;
            for j in 0..p {
                acc += row[j] * v[j];
            }
            w[i] = acc * tau;
        }
        let vhw: Complex64 = (0..p).map(|i| v[i].conj() * w[i]).sum();
        let kappa = 0.5 * tau * vhw.re;
        for i in 0..p {
            w[i] -= v[i] * kappa;
        }
        // B -= v w^H + w v^H
        for i in 0..p {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut a[(s + i) * n + s..(s + i) * n + n];
            for j in 0..p {
                row[j] -= vi * w[j].conj() + wi * v[j].conj();
            }
        }
        a[s * n + k] = alpha;
        a[k * n + s] = alpha.conj();
        for i in s + 1..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }

        // Q <- Q (I - tau v v^H) on columns s..n.
        for r in 0..n {
            let row = &mut q[r * n + s..r * n + n];
            let mut acc = zero;
            for j in 0..p {
                acc += row[j] * v[j];
            }
            acc *= tau;
            for j in 0..p {
                row[j] -= acc * v[j].conj();
            }
        }
    }

    let d = (0..n).map(|i| a[i * n + i].re).collect();
    let mut e = vec![zero; n];
    for i in 1..n {
        e[i] = a[i * n + i - 1];
    }
    (d, e, q)
}

/// Implicit QL on a real symmetric tridiagonal matrix.
///
/// `e[i]` couples `i-1` and `i`. On return `d` holds the eigenvalues and
/// `zt[k]` the eigenvector (in the tridiagonal basis) belonging to `d[k]`.
fn tql2(d: &mut [f64], e: &mut [f64], zt: &mut [Vec<f64>]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 300 {
                    break;
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = zt.split_at_mut(i + 1);
                    let zi = &mut lo[i];
                    let zi1 = &mut hi[0];
                    for k in 0..n {
                        let hk = zi1[k];
                        zi1[k] = s * zi[k] + c * hk;
                        zi[k] = c * zi[k] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Real symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Eigenvalues ascending; `vectors[k]` is a unit eigenvector with its first
/// significant component positive.
pub fn symmetric_eig(m: &SymmetricMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut vt = identity_rows(n);
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * norm.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                let (lo, hi) = vt.split_at_mut(q);
                let vp = &mut lo[p];
                let vq = &mut hi[0];
                for k in 0..n {
                    let x = vp[k];
                    let y = vq[k];
                    vp[k] = c * x - s * y;
                    vq[k] = s * x + c * y;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let mut v = vt[i].clone();
            if let Some(first) = v.iter().find(|x| x.abs() > PHASE_TOL) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            v
        })
        .collect();
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian::real_embed;
    use crate::numerics::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        let mut g = SplitMix64::new(seed);
        HermitianMatrix::from_upper_fn(n, |_, _| c(g.normal(), g.normal()))
    }

    fn check_decomposition(m: &HermitianMatrix, tol: f64) {
        let eig = hermitian_eig(m).unwrap();
        let n = m.dim();
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for a in 0..n {
            for b in 0..n {
                let ip: Complex64 = (0..n).map(|i| eig.vectors[a][i].conj() * eig.vectors[b][i]).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).norm() < 1e-10, "orthonormality {a} {b}: {ip}");
            }
        }
        let back = eig.reassemble(|x| x);
        let err = back.sub(m).max_abs();
        assert!(err <= tol * m.max_abs().max(1.0), "reconstruction error {err}");
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&HermitianMatrix::identity(3)).unwrap();
        for v in eig.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_one_top_vector_is_phase_aligned() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = vec![c(s, 0.0), c(0.0, s)];
        let eig = hermitian_eig(&HermitianMatrix::outer(&x)).unwrap();
        assert!(eig.values[0].abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let (_, top) = eig.top();
        assert!((top[0] - x[0]).norm() < 1e-14);
        assert!((top[1] - x[1]).norm() < 1e-14);
    }

    #[test]
    fn random_reconstruction() {
        check_decomposition(&random_hermitian(5, 1), 1e-10);
        for (n, seed) in [(1, 2), (2, 3), (17, 4), (64, 5)] {
            check_decomposition(&random_hermitian(n, seed), 1e-10);
        }
    }

    #[test]
    fn degenerate_and_tridiagonal_inputs() {
        check_decomposition(&HermitianMatrix::from_real_diagonal(&[3.0, -1.0, 3.0, 0.0]), 1e-12);
        let mut m = HermitianMatrix::zeros(4);
        m[(0, 1)] = c(0.0, 1.0);
        m[(1, 0)] = c(0.0, -1.0);
        m[(2, 3)] = c(1.0, 1.0);
        m[(3, 2)] = c(1.0, -1.0);
        check_decomposition(&m, 1e-12);
        check_decomposition(&HermitianMatrix::zeros(3), 1e-12);
    }

    #[test]
    fn trace_and_psd_invariants() {
        let m = random_hermitian(12, 9);
        let eig = hermitian_eig(&m).unwrap();
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - m.trace()).abs() <= 1e-10 * m.trace().abs().max(1.0));

        let psd = eig.reassemble(|x| x * x);
        assert!(hermitian_eig(&psd).unwrap().min_value() >= -1e-10);
    }

    #[test]
    fn rejects_broken_symmetry() {
        let mut m = HermitianMatrix::identity(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn jacobi_agrees_on_embedding() {
        let mut m = HermitianMatrix::zeros(2);
        m[(0, 1)] = c(0.0, 1.0);
        m[(1, 0)] = c(0.0, -1.0);
        let (vals, _) = symmetric_eig(&real_embed(&m));
        for (got, want) in vals.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        let m = random_hermitian(6, 11);
        let complex = hermitian_eig(&m).unwrap().values;
        let (real, vecs) = symmetric_eig(&real_embed(&m));
        for (k, lam) in complex.iter().enumerate() {
            assert!((real[2 * k] - lam).abs() < 1e-10);
            assert!((real[2 * k + 1] - lam).abs() < 1e-10);
        }
        let e = real_embed(&m);
        for (lam, v) in real.iter().zip(&vecs) {
            for i in 0..12 {
                let mv: f64 = (0..12).map(|j| e[(i, j)] * v[j]).sum();
                assert!((mv - lam * v[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn embedding_preserves_min_eigenvalue() {
        let m = random_hermitian(5, 13);
        let (real, _) = symmetric_eig(&real_embed(&m));
        let min_m = hermitian_eig(&m).unwrap().min_value();
        assert!(real[0] >= min_m - 1e-12);
    }
}
