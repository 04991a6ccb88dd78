use std::f64::consts::PI;

use num_complex::Complex64;

use crate::gabor::{gabor_atom, Point, Signal};
use crate::numerics::HermitianMatrix;

/// A point of `ℂ²`.
pub type ComplexPoint2 = [Complex64; 2];

fn real_point(p: Point) -> ComplexPoint2 {
    [Complex64::new(p[0], 0.0), Complex64::new(p[1], 0.0)]
}

/// `Φ_{λ,μ}(z) = C(λ,μ) e^{iπ zᵀ𝒥(λ-μ)} e^{-π(z-(λ+μ)/2)²}` with
/// `𝒥 = [[0,1],[-1,0]]`, `C(λ,μ) = exp{-π/4|λ-μ|² + πi(λ₁λ₂ - μ₁μ₂)}` and the
/// square taken without conjugation.
pub fn ansatz_phi(lambda: Point, mu: Point, z: ComplexPoint2) -> Complex64 {
    let d = [lambda[0] - mu[0], lambda[1] - mu[1]];
    let m = [0.5 * (lambda[0] + mu[0]), 0.5 * (lambda[1] + mu[1])];
    let c = Complex64::new(
        -PI / 4.0 * (d[0] * d[0] + d[1] * d[1]),
        PI * (lambda[0] * lambda[1] - mu[0] * mu[1]),
    );
    let zjd = z[0] * d[1] - z[1] * d[0];
    let w0 = z[0] - m[0];
    let w1 = z[1] - m[1];
    let sq = w0 * w0 + w1 * w1;
    (c + Complex64::i() * PI * zjd - PI * sq).exp()
}

/// `v_λ = 𝒢[π(λ)φ](p)` for `λ ∈ Γ`.
pub fn weight_vector(gamma: &[Point], p: Point) -> Vec<Complex64> {
    gamma.iter().map(|&l| gabor_atom(l, p)).collect()
}

/// The rank-one `W_p` with `⟨A, W_p⟩_F = F_A(p)` under `⟨X, Y⟩_F = Re Σ X_jk conj(Y_jk)`.
///
/// Its entries are `conj(v_j) v_k`, i.e. the outer product of `conj(v)`.
pub fn weight_matrix(gamma: &[Point], p: Point) -> HermitianMatrix {
    let w: Vec<Complex64> = weight_vector(gamma, p).iter().map(|v| v.conj()).collect();
    HermitianMatrix::outer(&w)
}

/// `F_A(z) = Σ_{λ,μ∈Γ} A_{λ,μ} Φ_{λ,μ}(z)`.
pub fn evaluate_fa(a: &HermitianMatrix, gamma: &[Point], z: ComplexPoint2) -> Complex64 {
    let n = gamma.len();
    assert_eq!(a.dim(), n, "A must be indexed by Γ");
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &lj) in gamma.iter().enumerate() {
        let row = a.row(j);
        for (k, &lk) in gamma.iter().enumerate() {
            if row[k] != Complex64::new(0.0, 0.0) {
                acc += row[k] * ansatz_phi(lj, lk, z);
            }
        }
    }
    acc
}

/// `L(p, u) = p + ½ [[1, -i], [i, 1]] u`.
pub fn eval_l(p: Point, u: Point) -> ComplexPoint2 {
    [
        Complex64::new(p[0] + 0.5 * u[0], -0.5 * u[1]),
        Complex64::new(p[1] + 0.5 * u[1], 0.5 * u[0]),
    ]
}

/// `Q(p, u) = -π/2 |u|² - πi(2p₁ + u₁)u₂`.
pub fn eval_q(p: Point, u: Point) -> Complex64 {
    Complex64::new(
        -0.5 * PI * (u[0] * u[0] + u[1] * u[1]),
        -PI * (2.0 * p[0] + u[0]) * u[1],
    )
}

/// Entire functions on `ℂ²` that the evaluation operator accepts.
#[derive(Debug, Clone, Copy)]
pub enum EntireFunction<'a> {
    /// `F_A` for a matrix `A` indexed by `Γ`.
    Ansatz { a: &'a HermitianMatrix, gamma: &'a [Point] },
    /// Entire extension of the spectrogram of a known signal `g`, evaluated
    /// in factored form `Σ_λ a_λ h_λ(z) · Σ_μ conj(a_μ) h̃_μ(z)` where `h_λ`,
    /// `h̃_μ` continue `𝒢[π(λ)φ]` and its conjugate off the real plane.
    SpectrogramOf(&'a Signal),
}

impl EntireFunction<'_> {
    pub fn eval(&self, z: ComplexPoint2) -> Complex64 {
        match *self {
            EntireFunction::Ansatz { a, gamma } => evaluate_fa(a, gamma, z),
            EntireFunction::SpectrogramOf(g) => {
                let mut left = Complex64::new(0.0, 0.0);
                let mut right = Complex64::new(0.0, 0.0);
                for (p, c) in g.points().into_iter().zip(g.coeffs()) {
                    let d0 = z[0] - p[0];
                    let d1 = z[1] - p[1];
                    let gauss = -0.5 * PI * (d0 * d0 + d1 * d1);
                    let i = Complex64::i();
                    left += c * (gauss - i * PI * (z[0] + p[0]) * (z[1] - p[1])).exp();
                    right += c.conj() * (gauss + i * PI * (z[0] + p[0]) * (z[1] - p[1])).exp();
                }
                left * right
            }
        }
    }

    pub fn eval_real(&self, p: Point) -> Complex64 {
        self.eval(real_point(p))
    }
}

/// `E[G](p, u) = G(L(p, u)) e^{Q(p, u)}`.
pub fn eval_operator(g: &EntireFunction<'_>, p: Point, u: Point) -> Complex64 {
    g.eval(eval_l(p, u)) * eval_q(p, u).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::{box_points, LATTICE_STEP};
    use crate::numerics::{hermitian_eig, SplitMix64};

    fn rp(rng: &mut SplitMix64, w: f64) -> Point {
        [rng.uniform(-w, w), rng.uniform(-w, w)]
    }

    fn random_psd(n: usize, rng: &mut SplitMix64) -> HermitianMatrix {
        let mut a = HermitianMatrix::zeros(n);
        for _ in 0..3 {
            let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
            a.add_scaled(1.0, &HermitianMatrix::outer(&v));
        }
        a
    }

    #[test]
    fn phi_diagonal_is_one() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..10 {
            let l = rp(&mut rng, 3.0);
            assert!((ansatz_phi(l, l, real_point(l)) - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn phi_extends_atom_products() {
        let mut rng = SplitMix64::new(2);
        for _ in 0..50 {
            let (l, m, p) = (rp(&mut rng, 2.0), rp(&mut rng, 2.0), rp(&mut rng, 2.0));
            let expect = gabor_atom(l, p) * gabor_atom(m, p).conj();
            assert!((ansatz_phi(l, m, real_point(p)) - expect).norm() < 1e-10);
            assert!((ansatz_phi(m, l, real_point(p)) - expect.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn weight_matrix_properties() {
        let gamma = box_points(LATTICE_STEP, 1.5, 1.5);
        let mut rng = SplitMix64::new(3);
        let p = rp(&mut rng, 1.0);
        let w = weight_matrix(&gamma, p);
        for (k, l) in gamma.iter().enumerate() {
            let d = (p[0] - l[0]).powi(2) + (p[1] - l[1]).powi(2);
            assert!((w[(k, k)].re - (-PI * d).exp()).abs() < 1e-14);
        }
        let eig = hermitian_eig(&w).unwrap();
        assert!(eig.values[eig.dim() - 2].abs() <= 1e-12);

        for _ in 0..20 {
            let a = random_psd(gamma.len(), &mut rng);
            let p = rp(&mut rng, 1.5);
            let fa = evaluate_fa(&a, &gamma, real_point(p));
            assert!(fa.im.abs() < 1e-9 * fa.re.abs().max(1.0));
            assert!((a.frobenius_inner(&weight_matrix(&gamma, p)) - fa.re).abs() < 1e-9);
        }
    }

    #[test]
    fn fa_of_rank_one_is_spectrogram() {
        let g = Signal::random(LATTICE_STEP, 1.0, 1.0, 4).unwrap();
        let gamma = g.points();
        let a = HermitianMatrix::outer(g.coeffs());
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let p = rp(&mut rng, 2.0);
            assert!((evaluate_fa(&a, &gamma, real_point(p)) - g.spectrogram(p)).norm() < 1e-9);
        }
    }

    #[test]
    fn fa_linear_and_matches_factored_backend() {
        let g = Signal::random(LATTICE_STEP, 0.8, 0.8, 6).unwrap();
        let gamma = g.points();
        let a = HermitianMatrix::outer(g.coeffs());
        let mut rng = SplitMix64::new(7);
        let b = random_psd(gamma.len(), &mut rng);
        let mut sum = a.clone();
        sum.add_scaled(1.0, &b);
        for _ in 0..10 {
            let z = [
                Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
                Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
            ];
            let lhs = evaluate_fa(&sum, &gamma, z);
            let rhs = evaluate_fa(&a, &gamma, z) + evaluate_fa(&b, &gamma, z);
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0));
            let direct = EntireFunction::SpectrogramOf(&g).eval(z);
            assert!((evaluate_fa(&a, &gamma, z) - direct).norm() < 1e-9 * direct.norm().max(1.0));
        }
        assert_eq!(
            evaluate_fa(&HermitianMatrix::zeros(gamma.len()), &gamma, real_point([0.1, 0.2])),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn l_and_q() {
        let p = [0.3, -1.2];
        assert_eq!(eval_l(p, [0.0, 0.0]), real_point(p));
        assert_eq!(eval_q(p, [0.0, 0.0]), Complex64::new(0.0, 0.0));
        let l = eval_l([0.0, 0.0], [1.0, 0.0]);
        assert_eq!(l, [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)]);
        let mut rng = SplitMix64::new(8);
        for _ in 0..20 {
            let (p, u) = (rp(&mut rng, 3.0), rp(&mut rng, 2.0));
            assert!((eval_q(p, u).re + PI / 2.0 * (u[0] * u[0] + u[1] * u[1])).abs() < 1e-14);
        }
    }

    #[test]
    fn evaluation_operator_identity() {
        let phi = Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(1.0, 0.0));
        let e = eval_operator(&EntireFunction::SpectrogramOf(&phi), [0.0, 0.0], [1.0, 0.0]);
        assert!((e - (-PI / 2.0).exp()).norm() < 1e-14);

        let g = Signal::random(LATTICE_STEP, 1.0, 1.0, 9).unwrap();
        let gamma = g.points();
        let a = HermitianMatrix::outer(g.coeffs());
        let fa = EntireFunction::Ansatz { a: &a, gamma: &gamma };
        let mut rng = SplitMix64::new(10);
        for _ in 0..30 {
            let p = rp(&mut rng, 1.5);
            let u = rp(&mut rng, 1.4);
            let expect = g.gabor_transform([p[0] + u[0], p[1] + u[1]]) * g.gabor_transform(p).conj();
            assert!((eval_operator(&fa, p, u) - expect).norm() < 1e-8);
            assert!((eval_operator(&fa, p, [0.0, 0.0]) - fa.eval_real(p)).norm() < 1e-12);
        }
    }
}
