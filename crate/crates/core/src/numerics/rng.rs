//! Portable pseudo-random stream.
//!
//! The generator is SplitMix64 used in counter mode: the `k`-th output
//! (`k = 0, 1, ...`) for seed `s` is
//!
//! ```text
//! z = s + (k + 1) * 0x9E3779B97F4A7C15            (wrapping, u64)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9         (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB         (wrapping)
//! z =  z ^ (z >> 31)
//! ```
//!
//! and a uniform double on `[0, 1)` is `(z >> 11) * 2^-53`. Any language with
//! 64-bit unsigned wrapping arithmetic reproduces the stream bit for bit.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    seed: u64,
    counter: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    /// Output number `k` of the stream, independent of the cursor.
    pub fn at(seed: u64, k: u64) -> u64 {
        let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = Self::at(self.seed, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller (consumes two outputs).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform on the closed complex unit disk, by rejection from the square.
    pub fn unit_disk(&mut self) -> num_complex::Complex64 {
        loop {
            let re = self.uniform(-1.0, 1.0);
            let im = self.uniform(-1.0, 1.0);
            if re * re + im * im <= 1.0 {
                return num_complex::Complex64::new(re, im);
            }
        }
    }
}
