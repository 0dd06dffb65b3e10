//! Dense complex linear algebra used throughout the crate.
//!
//! Eigenvalues come from a complex Hessenberg reduction followed by
//! single-shift QR sweeps with Wilkinson shifts. Matrices at desk scale are
//! at most 16x16, so nothing here is blocked or parallel.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

const EIG_EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("QR iteration failed to converge after {0} sweeps")]
    NoConvergence(usize),
}

/// The n x n matrix unit with a one at `(row, col)`.
pub fn matrix_unit(n: usize, row: usize, col: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(row, col)] = ONE;
    m
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a complex matrix from row-major `(re, im)` entries.
pub fn from_rows(rows: &[&[(f64, f64)]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i][j].0, rows[i][j].1))
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i][j], 0.0))
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(entries))
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Column-stacking vectorization.
pub fn vec_of(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Singular values sorted in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn largest_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest singular value of a tall (or square) matrix; zero when the
/// matrix has more columns than rows.
pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.ncols() > m.nrows() {
        return 0.0;
    }
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Orthonormal basis (as columns) of the null space of `m`.
///
/// A singular value counts as zero when it is at most `rel_tol` times
/// `max(σ_max, 1)`, so a matrix that is zero up to round-off has a full
/// null space.
pub fn null_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    // Pad so the thin SVD returns a full right factor.
    let padded = if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), m.shape()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma = &svd.singular_values;
    let scale = sigma.iter().copied().fold(0.0_f64, f64::max);
    let cutoff = rel_tol * scale.max(1.0);
    let null_rows: Vec<usize> = (0..sigma.len()).filter(|&k| sigma[k] <= cutoff).collect();
    let mut basis = CMatrix::zeros(cols, null_rows.len());
    for (out, &k) in null_rows.iter().enumerate() {
        for j in 0..cols {
            basis[(j, out)] = v_t[(k, j)].conj();
        }
    }
    basis
}

/// Minimum-norm least-squares solution of `a x = b` together with the
/// residual norm `‖a x − b‖₂`.
pub fn least_squares(a: &CMatrix, b: &CVector) -> (CVector, f64) {
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(b, 1e-13 * largest_singular_value(a).max(f64::MIN_POSITIVE))
        .expect("both singular factors were computed");
    let r = (a * &x - b).norm();
    (x, r)
}

/// Real least squares, same contract as [`least_squares`].
pub fn least_squares_real(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let x = svd
        .solve(b, 1e-13 * smax.max(f64::MIN_POSITIVE))
        .expect("both singular factors were computed");
    let r = (a * &x - b).norm();
    (x, r)
}

/// Reduces a square matrix to upper Hessenberg form with Householder
/// reflections. Columns already in Hessenberg shape are left untouched, so
/// triangular input passes through exactly.
pub fn hessenberg(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut h = m.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let tail: f64 = (k + 2..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = CVector::zeros(n - k - 1);
        v[0] = x0 - alpha;
        for i in k + 2..n {
            v[i - k - 1] = h[(i, k)];
        }
        let vnorm = v.norm();
        if vnorm == 0.0 {
            continue;
        }
        v /= Complex64::new(vnorm, 0.0);
        // H <- (I - 2vv*) H
        for j in 0..n {
            let mut dot = ZERO;
            for i in 0..v.len() {
                dot += v[i].conj() * h[(k + 1 + i, j)];
            }
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= 2.0 * v[i] * dot;
            }
        }
        // H <- H (I - 2vv*)
        for i in 0..n {
            let mut dot = ZERO;
            for j in 0..v.len() {
                dot += h[(i, k + 1 + j)] * v[j];
            }
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= 2.0 * dot * v[j].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// All eigenvalues of a square complex matrix, read off the diagonal of the final triangular form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>, LinalgError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    let n = rows;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(m);
    let scale = h.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let max_sweeps = 60 * n.max(1);

    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(lo, lo - 1)].norm() <= EIG_EPS * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(LinalgError::NoConvergence(sweeps));
        }

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok((0..n).map(|k| h[(k, k)]).collect())
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the active block `lo..=hi`.
fn qr_sweep(h: &mut CMatrix, lo: usize, hi: usize, shift: Complex64) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (1.0, ZERO)
        } else if x.norm() == 0.0 {
            (0.0, ONE)
        } else {
            (x.norm() / r, (x / x.norm()) * y.conj() / r)
        };
        for j in k..=hi {
            let h1 = h[(k, j)];
            let h2 = h[(k + 1, j)];
            h[(k, j)] = h1 * c + s * h2;
            h[(k + 1, j)] = -s.conj() * h1 + h2 * c;
        }
        h[(k + 1, k)] = ZERO;
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let last = (k + 2).min(hi);
        for i in lo..=last {
            let h1 = h[(i, k)];
            let h2 = h[(i, k + 1)];
            h[(i, k)] = h1 * c + h2 * s.conj();
            h[(i, k + 1)] = -h1 * s + h2 * c;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}
