//! Seeded randomness. Every random choice in the crate flows from a `u64` seed.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::linalg::Matrix;

pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Independent stream for sub-task `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> SeededRng {
    let mut rng = SeededRng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform sample from `[lo, hi)`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Matrix with independent standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data: Vec<Vec<f64>> = (0..rows).map(|_| gaussian_vector(rng, cols)).collect();
    Matrix::from_rows(&data).expect("finite gaussian entries")
}

/// Random orthogonal matrix (QR of a Gaussian matrix, signs fixed by `R`).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let g = gaussian_matrix(rng, n, n).to_nalgebra();
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    Matrix::from_nalgebra(&q)
}

/// Random symmetric positive definite matrix `A Aᵀ / n + I / 2`.
pub fn random_gram<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let a = gaussian_matrix(rng, n, n);
    let mut g = a.mul(&a.transpose()).scaled(1.0 / n as f64);
    for i in 0..n {
        g.set(i, i, g.get(i, i) + 0.5);
    }
    // exact symmetry
    for i in 0..n {
        for j in 0..i {
            let v = g.get(i, j);
            g.set(j, i, v);
        }
    }
    g
}
