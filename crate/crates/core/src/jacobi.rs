//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each `(p, q)` step first removes the phase of `a_pq` with a diagonal unitary and then applies
//! the classical real Jacobi rotation to the resulting real symmetric 2x2 block. Sweeps run over
//! the upper triangle in row-major order, so the result is a deterministic function of the input.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sweep cap before [`Error::ConvergenceFailure`] is reported.
pub const MAX_SWEEPS: usize = 100;

/// Target for the off-diagonal Frobenius norm, relative to `max(1, ‖A‖_F)`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Frobenius norm of the strictly off-diagonal part.
pub fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues (descending) and eigenvectors (matching columns) of a Hermitian matrix.
///
/// Only the Hermitian part of `a` is meaningful; the caller is responsible for symmetrizing.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }

    let mut work = a.clone();
    let mut vecs = DMatrix::<Complex64>::identity(n, n);
    let scale = a.norm().max(1.0);
    let target = OFF_DIAGONAL_TOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&work) <= target {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut work, &mut vecs, p, q);
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&work);
        if off_norm > target {
            return Err(Error::ConvergenceFailure {
                sweeps: MAX_SWEEPS,
                off_norm,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep their sweep order
    order.sort_by(|&i, &j| work[(j, j)].re.total_cmp(&work[(i, i)].re));

    let values = order.iter().map(|&i| work[(i, i)].re).collect();
    let sorted = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    Ok((values, sorted))
}

fn rotate(a: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) · [[c, s], [-s, c]] restricted to rows/cols (p, q)
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
