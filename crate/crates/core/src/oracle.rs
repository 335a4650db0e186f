//! Independent reference path for certifying the decomposition engine.
//!
//! The fit is LSQR-style Golub-Kahan bidiagonalization started from zero,
//! with full reorthogonalization. Iterates stay in the range of `A^H`, so
//! the limit is the minimum-norm least-squares solution. Nothing here calls
//! the SVD-based kernels of [`crate::linalg`].

use crate::error::{invalid, Error, Result};
use crate::linalg::{Matrix, Scalar, Vector};

pub const DEFAULT_ORACLE_TOL: f64 = 1e-12;

/// Relative size (against `||A||_F`) at which a new Krylov direction
/// counts as exhausted.
const BREAKDOWN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T: Scalar> {
    /// Padded to the full column budget.
    pub theta_hat: Vector<T>,
    /// Mean squared error over training and prediction rows.
    pub risk: f64,
    pub risk_prediction_only: f64,
    /// `||y_T - M_TM theta_hat_M||`.
    pub residual_train: f64,
}

fn frobenius<T: Scalar>(a: &Matrix<T>) -> f64 {
    a.iter().map(|v| v.modulus_squared()).sum::<f64>().sqrt()
}

fn orthogonalize<T: Scalar>(p: &mut Vector<T>, basis: &[Vector<T>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(p);
            p.axpy(-c, q, T::one());
        }
    }
}

/// Solves `min ||beta1 e1 - B y||` for the lower bidiagonal `B` with
/// diagonal `alphas[..k]` and subdiagonal `betas[1..=k]` by Givens rotations.
fn bidiagonal_solve(alphas: &[f64], betas: &[f64], k: usize) -> Vec<f64> {
    let mut rho = vec![0.0; k];
    let mut theta = vec![0.0; k];
    let mut phi = vec![0.0; k];
    let mut rho_bar = alphas[0];
    let mut phi_bar = betas[0];
    for i in 0..k {
        let beta_next = betas.get(i + 1).copied().unwrap_or(0.0);
        let r = rho_bar.hypot(beta_next);
        let (c, s) = if r > 0.0 {
            (rho_bar / r, beta_next / r)
        } else {
            (1.0, 0.0)
        };
        let alpha_next = if i + 1 < k { alphas[i + 1] } else { 0.0 };
        rho[i] = r;
        theta[i] = s * alpha_next;
        rho_bar = -c * alpha_next;
        phi[i] = c * phi_bar;
        phi_bar *= s;
    }
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let carry = if i + 1 < k { theta[i] * y[i + 1] } else { 0.0 };
        y[i] = if rho[i] > 0.0 {
            (phi[i] - carry) / rho[i]
        } else {
            0.0
        };
    }
    y
}

/// Minimum-norm least-squares solution of `a x = b`.
///
/// Converged when `||A^H r|| <= tol ||A||_F ||r||` or the system is solved
/// to `||r|| <= tol ||A||_F ||x||`; running out of Krylov directions also
/// ends the iteration, with the exact answer in exact arithmetic.
pub fn oracle_fit<T: Scalar>(
    a: &Matrix<T>,
    b: &Vector<T>,
    iterations: usize,
    tol: f64,
) -> Result<Vector<T>> {
    let (rows, cols) = a.shape();
    if b.len() != rows {
        return Err(invalid(format!(
            "right-hand side has length {}, expected {rows}",
            b.len()
        )));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite_scalar()) {
        return Err(invalid("non-finite input to oracle_fit"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(invalid(format!("tol must be positive, got {tol}")));
    }
    let norm_a = frobenius(a);
    let beta1 = b.norm();
    if norm_a == 0.0 || beta1 == 0.0 || cols == 0 {
        return Ok(Vector::zeros(cols));
    }
    let floor = BREAKDOWN * norm_a;

    let mut us = vec![b.unscale(beta1)];
    let mut w = a.adjoint() * &us[0];
    let alpha1 = w.norm();
    if alpha1 <= floor {
        // b is orthogonal to the range of A
        return Ok(Vector::zeros(cols));
    }
    w.unscale_mut(alpha1);
    let mut vs = vec![w];
    let mut alphas = vec![alpha1];
    let mut betas = vec![beta1];

    let mut last_ratio = f64::INFINITY;
    for k in 1..=iterations.max(1) {
        let mut p = a * &vs[k - 1] - us[k - 1].scale(alphas[k - 1]);
        orthogonalize(&mut p, &us);
        let beta = p.norm();
        let mut exhausted = beta <= floor;
        if !exhausted {
            p.unscale_mut(beta);
            let mut q = a.adjoint() * &p - vs[k - 1].scale(beta);
            us.push(p);
            orthogonalize(&mut q, &vs);
            let alpha = q.norm();
            betas.push(beta);
            if alpha <= floor || vs.len() == cols {
                exhausted = true;
            } else {
                q.unscale_mut(alpha);
                vs.push(q);
                alphas.push(alpha);
            }
        }

        let y = bidiagonal_solve(&alphas, &betas, k);
        let mut x = Vector::zeros(cols);
        for (vi, yi) in vs.iter().zip(&y) {
            x.axpy(T::from_real(*yi), vi, T::one());
        }
        let r = b - a * &x;
        let r_norm = r.norm();
        let normal = (a.adjoint() * &r).norm();
        let ratio = if r_norm > 0.0 {
            normal / (norm_a * r_norm)
        } else {
            0.0
        };
        last_ratio = ratio;
        if exhausted || ratio <= tol || r_norm <= tol * norm_a * x.norm() {
            return Ok(x);
        }
    }
    Err(Error::NotConverged {
        iterations,
        residual: last_ratio,
    })
}

/// Mean squared prediction error over all rows and over prediction rows.
pub fn oracle_risk<T: Scalar>(
    m_full: &Matrix<T>,
    theta_true: &Vector<T>,
    theta_hat: &Vector<T>,
    n_train: usize,
) -> Result<(f64, f64)> {
    let (rows, cols) = m_full.shape();
    if theta_true.len() != cols || theta_hat.len() != cols {
        return Err(invalid(format!(
            "parameter vectors must have length {cols}"
        )));
    }
    if n_train > rows {
        return Err(invalid(format!("n_train = {n_train} exceeds {rows} rows")));
    }
    let y = m_full * theta_true;
    let y_hat = m_full * theta_hat;
    let sq: Vec<f64> = y
        .iter()
        .zip(y_hat.iter())
        .map(|(a, b)| (*a - *b).modulus_squared())
        .collect();
    let all = if rows == 0 {
        0.0
    } else {
        sq.iter().sum::<f64>() / rows as f64
    };
    let v = rows - n_train;
    let pred = if v == 0 {
        0.0
    } else {
        sq[n_train..].iter().sum::<f64>() / v as f64
    };
    Ok((all, pred))
}

/// Fits the first `m` columns to the training labels of `theta_true` and
/// scores the fit.
pub fn oracle_run<T: Scalar>(
    m_full: &Matrix<T>,
    n_train: usize,
    m: usize,
    theta_true: &Vector<T>,
    tol: f64,
) -> Result<OracleResult<T>> {
    let (rows, cols) = m_full.shape();
    if m == 0 || m > cols || n_train == 0 || n_train > rows {
        return Err(invalid(format!(
            "invalid split n_train = {n_train}, m = {m}"
        )));
    }
    if theta_true.len() != cols {
        return Err(invalid(format!(
            "theta has length {}, expected {cols}",
            theta_true.len()
        )));
    }
    let m_t = m_full.rows(0, n_train).into_owned();
    let y_t = &m_t * theta_true;
    let m_tm = m_t.columns(0, m).into_owned();
    let fit = oracle_fit(&m_tm, &y_t, 4 * (n_train + m), tol)?;
    let residual_train = (&y_t - &m_tm * &fit).norm();
    let mut theta_hat = Vector::zeros(cols);
    theta_hat.rows_mut(0, m).copy_from(&fit);
    let (risk, risk_prediction_only) = oracle_risk(m_full, theta_true, &theta_hat, n_train)?;
    Ok(OracleResult {
        theta_hat,
        risk,
        risk_prediction_only,
        residual_train,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_system() {
        let a = Matrix::<f64>::identity(4, 4);
        let b = dvector![1.0, -2.0, 3.0, 0.5];
        let x = oracle_fit(&a, &b, 20, DEFAULT_ORACLE_TOL).unwrap();
        assert!((x - b).amax() < 1e-14);
    }

    #[test]
    fn underdetermined_min_norm() {
        let a = dmatrix![1.0, 1.0];
        let x = oracle_fit(&a, &dvector![2.0], 10, DEFAULT_ORACLE_TOL).unwrap();
        assert!((x - dvector![1.0, 1.0]).amax() < 1e-14);
    }

    #[test]
    fn overdetermined_normal_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Matrix::<f64>::from_fn(30, 5, |_, _| rng.random_range(-1.0..1.0));
        let b = Vector::<f64>::from_fn(30, |_, _| rng.random_range(-1.0..1.0));
        let x = oracle_fit(&a, &b, 50, DEFAULT_ORACLE_TOL).unwrap();
        let normal = a.transpose() * (&b - &a * &x);
        assert!(normal.amax() < 1e-12);
    }

    #[test]
    fn rank_deficient_min_norm() {
        // duplicated column: min-norm splits the weight evenly
        let a = dmatrix![1.0, 1.0, 0.0; 2.0, 2.0, 0.0; 0.0, 0.0, 1.0];
        let x = oracle_fit(&a, &dvector![2.0, 4.0, 3.0], 20, DEFAULT_ORACLE_TOL).unwrap();
        assert!((x - dvector![1.0, 1.0, 3.0]).amax() < 1e-13);
    }

    #[test]
    fn complex_system() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let a = dmatrix![one, i; i, one];
        let b = dvector![one, one];
        let x = oracle_fit(&a, &b, 20, DEFAULT_ORACLE_TOL).unwrap();
        assert!((&a * &x - &b).norm() < 1e-14);
    }

    #[test]
    fn zero_right_hand_side() {
        let a = dmatrix![1.0, 2.0; 3.0, 4.0];
        assert_eq!(
            oracle_fit(&a, &dvector![0.0, 0.0], 5, 1e-12).unwrap(),
            dvector![0.0, 0.0]
        );
    }

    #[test]
    fn risk_examples() {
        let m = dmatrix![1.0, 0.0; 0.0, 2.0; 1.0, 1.0];
        let theta = dvector![1.0, 1.0];
        assert_eq!(oracle_risk(&m, &theta, &theta, 1).unwrap(), (0.0, 0.0));
        let (all, pred) = oracle_risk(&m, &theta, &dvector![0.0, 0.0], 1).unwrap();
        assert!((all - (1.0 + 4.0 + 4.0) / 3.0).abs() < 1e-15);
        assert!((pred - 4.0).abs() < 1e-15);
    }

    #[test]
    fn iteration_cap_reports_not_converged() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = Matrix::<f64>::from_fn(40, 40, |_, _| rng.random_range(-1.0..1.0));
        let b = Vector::<f64>::from_fn(40, |_, _| rng.random_range(-1.0..1.0));
        match oracle_fit(&a, &b, 2, 1e-14) {
            Err(Error::NotConverged {
                iterations: 2,
                residual,
            }) => assert!(residual > 0.0),
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }
}
