use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::box_indices;
use super::transform::{gabor_atom, shifted_window, Point};
use crate::error::{Error, Result};
use crate::numerics::SplitMix64;

/// `f = Σ c_λ π(λ)φ` over finitely many points `λ = a·(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    a: f64,
    indices: Vec<[i64; 2]>,
    coeffs: Vec<Complex64>,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct SignalFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    version: Option<String>,
    a: f64,
    points: Vec<[i64; 2]>,
    coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<crate::io::Provenance>,
}

impl Signal {
    pub fn new(a: f64, indices: Vec<[i64; 2]>, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::parameter(format!("lattice step must be positive, got {a}")));
        }
        if indices.len() != coeffs.len() {
            return Err(Error::Dimension {
                expected: indices.len(),
                got: coeffs.len(),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::parameter(format!("non-finite coefficient {c}")));
        }
        Ok(Self {
            a,
            indices,
            coeffs,
            seed: 0,
        })
    }

    /// One atom with coefficient `c` at `a·index`.
    pub fn atom(a: f64, index: [i64; 2], c: Complex64) -> Self {
        Self::new(a, vec![index], vec![c]).expect("valid atom")
    }

    /// I.i.d. coefficients uniform on the complex unit disk over the lattice
    /// points of `[-half_x, half_x] × [-half_y, half_y]`.
    pub fn random(a: f64, half_x: f64, half_y: f64, seed: u64) -> Result<Self> {
        let indices = box_indices(a, half_x, half_y);
        let mut rng = SplitMix64::new(seed);
        let coeffs = indices.iter().map(|_| rng.unit_disk()).collect();
        let mut s = Self::new(a, indices, coeffs)?;
        s.seed = seed;
        Ok(s)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn lattice_step(&self) -> f64 {
        self.a
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn indices(&self) -> &[[i64; 2]] {
        &self.indices
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn points(&self) -> Vec<Point> {
        self.indices
            .iter()
            .map(|&[i, j]| [self.a * i as f64, self.a * j as f64])
            .collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// Coefficient lattice shifted by `a·offset`; equals `π(a·offset) f` up to
    /// one unimodular phase per atom.
    pub fn shifted(&self, offset: [i64; 2]) -> Self {
        let mut out = self.clone();
        for idx in &mut out.indices {
            idx[0] += offset[0];
            idx[1] += offset[1];
        }
        out
    }

    pub fn gabor_transform(&self, z: Point) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&[i, j], c) in self.indices.iter().zip(&self.coeffs) {
            acc += c * gabor_atom([self.a * i as f64, self.a * j as f64], z);
        }
        acc
    }

    pub fn spectrogram(&self, z: Point) -> f64 {
        self.gabor_transform(z).norm_sqr()
    }

    /// `f(t)`.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&[i, j], c) in self.indices.iter().zip(&self.coeffs) {
            acc += c * shifted_window([self.a * i as f64, self.a * j as f64], t);
        }
        acc
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        self.to_json_with(None)
    }

    /// As [`to_json`](Self::to_json), embedding a provenance record.
    pub fn to_json_with(&self, provenance: Option<&crate::io::Provenance>) -> Result<String> {
        let file = SignalFile {
            version: Some(crate::io::VERSION.to_string()),
            a: self.a,
            points: self.indices.clone(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            seed: self.seed,
            provenance: provenance.cloned(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SignalFile = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        if file.points.len() != file.coeffs.len() {
            return Err(Error::parse(
                "coeffs",
                format!("{} points but {} coefficients", file.points.len(), file.coeffs.len()),
            ));
        }
        let coeffs = file.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let s = Self::new(file.a, file.points, coeffs).map_err(|e| Error::parse("a/coeffs", e.to_string()))?;
        Ok(s.with_seed(file.seed))
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = crate::io::read_text(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn write_with(&self, path: &std::path::Path, provenance: &crate::io::Provenance) -> Result<()> {
        std::fs::write(path, self.to_json_with(Some(provenance))? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::LATTICE_STEP;

    #[test]
    fn single_atom_transform() {
        let f = Signal::atom(LATTICE_STEP, [0, 0], Complex64::new(1.0, 0.0));
        for z in [[0.0, 0.0], [0.4, -1.1]] {
            assert_eq!(f.gabor_transform(z), gabor_atom([0.0, 0.0], z));
        }
        assert!((f.spectrogram([0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linearity() {
        let f = Signal::random(LATTICE_STEP, 1.0, 1.0, 3).unwrap();
        let g = f.scaled(Complex64::new(2.0, 0.0));
        let z = [0.3, 0.2];
        assert!((g.gabor_transform(z) - 2.0 * f.gabor_transform(z)).norm() < 1e-15);
    }

    #[test]
    fn random_coefficients_in_disk() {
        let f = Signal::random(LATTICE_STEP, 3.0, 3.0, 11).unwrap();
        assert_eq!(f.len(), 81);
        assert!(f.coeffs().iter().all(|c| c.norm() <= 1.0));
        let again = Signal::random(LATTICE_STEP, 3.0, 3.0, 11).unwrap();
        assert_eq!(f.to_json().unwrap(), again.to_json().unwrap());
    }

    #[test]
    fn unit_disk_second_moment() {
        let mut rng = SplitMix64::new(2024);
        let m: f64 = (0..10_000).map(|_| rng.unit_disk().norm_sqr()).sum::<f64>() / 10_000.0;
        assert!((m - 0.5).abs() < 0.02, "{m}");
    }

    #[test]
    fn json_round_trip() {
        let f = Signal::random(LATTICE_STEP, 1.0, 0.8, 5).unwrap();
        let back = Signal::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn json_errors_name_the_field() {
        let bad = r#"{"a": 0.7, "points": [[0,0],[1,0]], "coeffs": [[1,0]], "seed": 1}"#;
        match Signal::from_json(bad) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "coeffs"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Signal::from_json("{\"a\": 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sup_norm_bound() {
        let f = Signal::random(LATTICE_STEP, 1.5, 1.5, 8).unwrap();
        let bound = f.l1_norm().powi(2);
        for i in -40..=40 {
            for j in -40..=40 {
                assert!(f.spectrogram([0.1 * i as f64, 0.1 * j as f64]) <= bound);
            }
        }
    }
}
