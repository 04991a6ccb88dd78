use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|M[j,k] - conj(M[k,j])|` accepted by [`HermitianMatrix::from_rows`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex Hermitian matrix, row-major.
///
/// Constructors enforce Hermitian symmetry and zero the imaginary part of the
/// diagonal. Mutable indexing is available for kernels that maintain the
/// symmetry themselves; call [`HermitianMatrix::symmetrize`] afterwards when in
/// doubt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds from row-major entries, rejecting non-Hermitian input.
    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: data.len(),
            });
        }
        let mut m = Self { dim, data };
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        m.symmetrize();
        Ok(m)
    }

    /// Fills the upper triangle (including the diagonal) from `f` and mirrors it.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(f(i, i).re, 0.0);
            for j in i + 1..dim {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        m
    }

    /// `v ⊗ v̄`, i.e. entries `v_j conj(v_k)`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_upper_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            dev = dev.max(self[(i, i)].im.abs());
            for j in i + 1..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Replaces the matrix by `(M + M*)/2`.
    pub fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in i + 1..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    /// Real Frobenius inner product `Re Σ X_jk conj(Y_jk)`; exact for Hermitian pairs.
    pub fn frobenius_inner(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&mut self, s: f64) {
        for z in &mut self.data {
            *z *= s;
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: f64, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum::<Complex64>())
            .collect()
    }

    /// `v^H M v`, real for Hermitian `M`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> f64 {
        let mv = self.matvec(v);
        v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Principal submatrix on the first `k` indices.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k <= self.dim);
        Self::from_upper_fn(k, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for HermitianMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SymmetricMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// `[[Re M, -Im M], [Im M, Re M]]`.
///
/// `M ⪰ 0` iff the embedding is, and the spectrum of the embedding is that of
/// `M` with every multiplicity doubled.
pub fn real_embed(m: &HermitianMatrix) -> SymmetricMatrix {
    let n = m.dim();
    let mut out = SymmetricMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
        }
    }
    out
}
