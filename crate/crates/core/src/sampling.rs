//! Seeded random sampling of matrices.
//!
//! Everything draws from `ChaCha8Rng` seeded explicitly, so a given seed
//! reproduces the same sample stream on every platform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::linalg::{CMatrix, ONE};

pub type LabRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts independent with
/// variance 1/2 each, so `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid sigma");
    Complex64::new(normal.sample(rng), normal.sample(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn real_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let normal = Normal::new(0.0, 1.0).expect("valid sigma");
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(normal.sample(rng), 0.0))
}

/// Random Hermitian matrix `(G + G*) / 2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.adjoint()).map(|z| z * 0.5)
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random permutation matrix times a diagonal of unit phases. These are the
/// unitaries that also preserve the induced ℓ1 and ℓ∞ norms.
pub fn monomial_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = CMatrix::zeros(n, n);
    for (row, &col) in perm.iter().enumerate() {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        m[(row, col)] = Complex64::from_polar(1.0, theta);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(1);
        for n in 1..5 {
            let u = unitary(&mut rng, n);
            let err = (u.adjoint() * &u - CMatrix::identity(n, n)).norm();
            assert!(err < 1e-12, "n={n} err={err}");
        }
    }

    #[test]
    fn monomial_unitary_has_one_entry_per_row() {
        let mut rng = rng_from_seed(2);
        let u = monomial_unitary(&mut rng, 4);
        for i in 0..4 {
            let nonzero = (0..4).filter(|&j| u[(i, j)].norm() > 0.0).count();
            assert_eq!(nonzero, 1);
        }
        assert!((u.adjoint() * &u - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = gaussian_matrix(&mut rng_from_seed(9), 3, 3);
        let b = gaussian_matrix(&mut rng_from_seed(9), 3, 3);
        assert_eq!(a, b);
    }
}
