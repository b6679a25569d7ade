//! Small dense routines on [`BlockMatrix`]: a Taylor scaling-and-squaring
//! matrix exponential and a cyclic Jacobi eigensolver for complex Hermitian
//! matrices. Both are self-contained so they can serve as independent oracles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::BlockMatrix;

/// Scaled matrices are brought below this 1-norm before the Taylor sum.
const EXPM_SCALED_NORM: f64 = 0.5;
/// Truncation remainder accepted for the scaled series.
const EXPM_REMAINDER_TOL: f64 = 1e-18;
const EXPM_MAX_TERMS: usize = 40;

/// `exp(M)` by scaling and squaring with a truncated Taylor series.
///
/// The series on `X = M / 2^s` stops once the tail bound
/// `‖X‖^(k+1) / (k+1)! · 1 / (1 - ‖X‖/(k+2))` drops under `1e-18`.
pub fn expm(m: &BlockMatrix) -> Result<BlockMatrix> {
    let norm = m.norm_one();
    if !norm.is_finite() || m.entries().iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
        return Err(Error::ExponentialNoConvergence { terms: 0, remainder: f64::INFINITY });
    }
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > EXPM_SCALED_NORM {
        squarings += 1;
    }
    let x = m.scale(Complex64::from(2f64.powi(-(squarings as i32))));
    let x_norm = norm / 2f64.powi(squarings as i32);

    let mut sum = BlockMatrix::identity(m.two_j());
    let mut term = BlockMatrix::identity(m.two_j());
    let mut bound_pow = 1.0; // ‖X‖^k / k!
    let mut converged = x_norm == 0.0;
    let mut remainder = 0.0;
    let mut k = 0;
    while !converged {
        k += 1;
        if k > EXPM_MAX_TERMS {
            return Err(Error::ExponentialNoConvergence { terms: k - 1, remainder });
        }
        term = term.matmul(&x)?.scale(Complex64::from(1.0 / k as f64));
        sum = &sum + &term;
        bound_pow *= x_norm / k as f64;
        remainder = bound_pow * x_norm / (k + 1) as f64 / (1.0 - x_norm / (k + 2) as f64);
        converged = remainder <= EXPM_REMAINDER_TOL;
    }

    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector of `values[k]`.
    pub vectors: BlockMatrix,
    pub sweeps: usize,
}

pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm target, relative to `max(1, ‖A‖_F)`.
pub const JACOBI_OFF_TOL: f64 = 1e-12;

fn off_diagonal_norm(a: &BlockMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Each rotation first removes the phase of `a[p][q]` with a diagonal unitary,
/// then applies the real symmetric Jacobi rotation that zeroes it. Only a
/// private copy of the input is modified.
pub fn jacobi_eigh(matrix: &BlockMatrix) -> Result<HermitianEigen> {
    let n = matrix.dim();
    let mut a = matrix.clone();
    let mut v = BlockMatrix::identity(matrix.two_j());
    let scale = matrix.entries().iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = JACOBI_OFF_TOL * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off >= tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = BlockMatrix::from_fn(matrix.two_j(), |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors, sweeps })
}

fn rotate(a: &mut BlockMatrix, v: &mut BlockMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    // U = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let u_pp = Complex64::from(c);
    let u_pq = Complex64::from(s);
    let u_qp = -s * phase.conj();
    let u_qq = c * phase.conj();

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}
