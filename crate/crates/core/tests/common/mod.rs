#![allow(dead_code)]

use gadkit_core::linalg::{Matrix, Scalar, Vector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub trait Draw: Scalar {
    fn draw(rng: &mut ChaCha8Rng) -> Self;
}

impl Draw for f64 {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Draw for Complex64 {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<T: Draw>(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::draw(rng))
}

pub fn gaussian_vec<T: Draw>(rng: &mut ChaCha8Rng, len: usize) -> Vector<T> {
    Vector::from_fn(len, |_, _| T::draw(rng))
}

/// Product of Gaussian factors: rank `min(rank, rows, cols)` exactly.
pub fn low_rank<T: Draw>(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Matrix<T> {
    gaussian::<T>(rng, rows, rank) * gaussian::<T>(rng, rank, cols)
}

pub fn max_abs<T: Scalar>(x: &Matrix<T>) -> f64 {
    x.iter().map(|v| v.modulus()).fold(0.0, f64::max)
}
