//! Block partition of the extended operator and the aliasing decomposition.
//!
//! Rows of the full matrix are training points followed by prediction
//! points; columns are the ordered basis functions, of which the first `m`
//! are modeled. With `A = M_TM^+ M_TU` and `B = M_TM^+ M_TM` the inferred
//! parameters are `theta_hat_M = B theta_M + A theta_U`, and the parameter
//! error splits into `E_A = [[0, -A], [0, 0]]` and
//! `E_B = blockdiag(I - B, I_U)`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bases::{Basis, DesignMatrix};
use crate::designs::{make_theta, ParameterSpec, SampleDesign};
use crate::error::{invalid, Error, Result};
use crate::linalg::{
    append_report, check_rel_tol, singular_values, spectral_norm, svd, Matrix, Scalar, SvdResult,
    Vector,
};

/// Relative tolerance on the identity `y_hat = M (B theta_M + A theta_U)`.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Relative tolerance on the ridge spectrum `sigma~ = sqrt(sigma^2 + n lambda)`.
pub const RIDGE_SPECTRUM_TOL: f64 = 1e-9;

/// The four blocks of the extended operator at model size `m`.
#[derive(Debug, Clone)]
pub struct OperatorPanel<T: Scalar> {
    pub m: usize,
    pub m_tm: Matrix<T>,
    pub m_tu: Matrix<T>,
    pub m_vm: Matrix<T>,
    pub m_vu: Matrix<T>,
    pub rank_tm: usize,
    pub rel_tol: f64,
    svd_tm: SvdResult<T>,
}

impl<T: Scalar> OperatorPanel<T> {
    pub fn n_train(&self) -> usize {
        self.m_tm.nrows()
    }

    pub fn n_prediction(&self) -> usize {
        self.m_vm.nrows()
    }

    /// Total number of columns `J_max`.
    pub fn budget(&self) -> usize {
        self.m + self.m_tu.ncols()
    }

    pub fn svd_tm(&self) -> &SvdResult<T> {
        &self.svd_tm
    }

    /// `dim K = m - rank(M_TM)`.
    pub fn kernel_dim(&self) -> usize {
        self.m - self.rank_tm
    }

    /// `dim U = J_max - m`.
    pub fn nescience_dim(&self) -> usize {
        self.m_tu.ncols()
    }

    /// `||M_TM^+||`, zero at rank 0.
    pub fn norm_pinv_tm(&self) -> f64 {
        match self.svd_tm.sigma_min_nonzero() {
            s if s > 0.0 => 1.0 / s,
            _ => 0.0,
        }
    }

    pub fn pinv_tm(&self) -> Matrix<T> {
        Solver::plain(self).apply(&Matrix::identity(self.n_train(), self.n_train()))
    }

    /// Restacks the blocks into the full matrix.
    pub fn full(&self) -> Matrix<T> {
        let (n, v, m, j) = (self.n_train(), self.n_prediction(), self.m, self.budget());
        let mut out = Matrix::zeros(n + v, j);
        out.view_mut((0, 0), (n, m)).copy_from(&self.m_tm);
        out.view_mut((0, m), (n, j - m)).copy_from(&self.m_tu);
        out.view_mut((n, 0), (v, m)).copy_from(&self.m_vm);
        out.view_mut((n, m), (v, j - m)).copy_from(&self.m_vu);
        out
    }
}

/// Splits `m_full` after `n_train` rows and `m` columns.
pub fn build_panels<T: Scalar>(
    m_full: &Matrix<T>,
    n_train: usize,
    m: usize,
    rel_tol: f64,
) -> Result<OperatorPanel<T>> {
    check_rel_tol(rel_tol)?;
    let (rows, budget) = m_full.shape();
    if m == 0 || m > budget {
        return Err(invalid(format!("m = {m} outside 1..={budget}")));
    }
    if n_train == 0 || n_train > rows {
        return Err(invalid(format!("n_train = {n_train} outside 1..={rows}")));
    }
    let v = rows - n_train;
    let m_tm = m_full.view((0, 0), (n_train, m)).into_owned();
    let svd_tm = svd(&m_tm, rel_tol)?;
    Ok(OperatorPanel {
        m,
        m_tu: m_full.view((0, m), (n_train, budget - m)).into_owned(),
        m_vm: m_full.view((n_train, 0), (v, m)).into_owned(),
        m_vu: m_full.view((n_train, m), (v, budget - m)).into_owned(),
        rank_tm: svd_tm.numerical_rank,
        rel_tol,
        m_tm,
        svd_tm,
    })
}

/// Applies `M~^+ [rhs; 0]` as `V diag(1/s) W^H rhs`, where `W` holds the
/// first `n` rows of the left singular vectors. Without ridge this is the
/// plain pseudoinverse.
struct Solver<T: Scalar> {
    v: Matrix<T>,
    w: Matrix<T>,
    inv_sigma: Vec<f64>,
    ridge: bool,
}

impl<T: Scalar> Solver<T> {
    fn plain(panel: &OperatorPanel<T>) -> Self {
        Self::from_svd(&panel.svd_tm, panel.n_train(), false)
    }

    fn from_svd(dec: &SvdResult<T>, n: usize, ridge: bool) -> Self {
        let r = dec.numerical_rank;
        Solver {
            v: dec.right_vectors.columns(0, r).into_owned(),
            w: dec.left_vectors.view((0, 0), (n, r)).into_owned(),
            inv_sigma: dec.singular_values[..r].iter().map(|s| 1.0 / s).collect(),
            ridge,
        }
    }

    fn coefficients(&self, rhs: &Matrix<T>) -> Matrix<T> {
        let mut c = T::adjoint_mul(&self.w, rhs);
        for (i, s) in self.inv_sigma.iter().enumerate() {
            c.row_mut(i).scale_mut(*s);
        }
        c
    }

    fn apply(&self, rhs: &Matrix<T>) -> Matrix<T> {
        &self.v * self.coefficients(rhs)
    }

    fn apply_vec(&self, rhs: &Vector<T>) -> Vector<T> {
        let mut c = self.w.adjoint() * rhs;
        for (ci, s) in c.iter_mut().zip(&self.inv_sigma) {
            *ci = ci.scale(*s);
        }
        &self.v * c
    }

    fn pinv_norm(&self) -> f64 {
        self.inv_sigma.iter().copied().fold(0.0, f64::max)
    }

    /// `||M~^+ [rhs; 0]||`, using that `V` has orthonormal columns.
    fn applied_norm(&self, rhs: &Matrix<T>) -> Result<f64> {
        spectral_norm(&self.coefficients(rhs))
    }

    /// `B theta_M`; the plain case projects directly onto the row space.
    fn b_times(&self, m_tm: &Matrix<T>, theta_m: &Vector<T>) -> Vector<T> {
        if self.ridge {
            self.apply_vec(&(m_tm * theta_m))
        } else {
            &self.v * (self.v.adjoint() * theta_m)
        }
    }

    fn b_matrix(&self, m_tm: &Matrix<T>) -> Matrix<T> {
        if self.ridge {
            self.apply(m_tm)
        } else {
            &self.v * self.v.adjoint()
        }
    }
}

/// `A = M_TM^+ M_TU`, shape `m x (J_max - m)`.
pub fn aliasing_operator<T: Scalar>(panel: &OperatorPanel<T>) -> Matrix<T> {
    Solver::plain(panel).apply(&panel.m_tu)
}

/// `B = M_TM^+ M_TM`, the orthogonal projector onto the row space of `M_TM`.
pub fn b_operator<T: Scalar>(panel: &OperatorPanel<T>) -> Matrix<T> {
    Solver::plain(panel).b_matrix(&panel.m_tm)
}

fn block_operators<T: Scalar>(m: usize, a: &Matrix<T>, b: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let u = a.ncols();
    let j = m + u;
    let mut e_a = Matrix::zeros(j, j);
    e_a.view_mut((0, m), (m, u)).copy_from(&(-a));
    let mut e_b = Matrix::identity(j, j);
    e_b.view_mut((0, 0), (m, m))
        .copy_from(&(Matrix::identity(m, m) - b));
    (e_a, e_b)
}

/// `E_A = [[0, -A], [0, 0]]` on the full parameter space.
pub fn aliasing_error_operator<T: Scalar>(panel: &OperatorPanel<T>) -> Matrix<T> {
    block_operators(panel.m, &aliasing_operator(panel), &b_operator(panel)).0
}

/// `E_B = blockdiag(I - B, I_U)`; its norm is 1 whenever `dim U >= 1`.
pub fn invertibility_operator<T: Scalar>(panel: &OperatorPanel<T>) -> Matrix<T> {
    block_operators(panel.m, &aliasing_operator(panel), &b_operator(panel)).1
}

/// `E_theta = E_A + E_B`, so that `theta - theta_hat = E_theta theta`.
pub fn parameter_error_operator<T: Scalar>(panel: &OperatorPanel<T>) -> Matrix<T> {
    let (e_a, e_b) = block_operators(panel.m, &aliasing_operator(panel), &b_operator(panel));
    e_a + e_b
}

/// Minimum-norm least-squares fit `(M_TM^+ y_T, 0)`, padded to `J_max`.
pub fn infer_theta<T: Scalar>(panel: &OperatorPanel<T>, y_t: &Vector<T>) -> Result<Vector<T>> {
    if y_t.len() != panel.n_train() {
        return Err(invalid(format!(
            "y_T has length {}, expected {}",
            y_t.len(),
            panel.n_train()
        )));
    }
    let mut theta = Vector::zeros(panel.budget());
    theta
        .rows_mut(0, panel.m)
        .copy_from(&Solver::plain(panel).apply_vec(y_t));
    Ok(theta)
}

/// Risk and the error terms of one fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskBreakdown {
    /// Mean squared error over training and prediction rows together.
    pub risk_all: f64,
    /// Mean squared error over prediction rows only.
    pub risk_prediction_only: f64,
    /// `||A theta_U||`.
    pub alias_error: f64,
    /// `||(I - B) theta_M||`.
    pub bias_error: f64,
    /// `||theta_U||`.
    pub nescience_error: f64,
    /// Scaled residual of the decomposition identity.
    pub identity_residual: f64,
}

fn vector_of<T: Scalar>(values: &[f64]) -> Vector<T> {
    Vector::from_iterator(values.len(), values.iter().map(|&v| T::from_real(v)))
}

fn breakdown<T: Scalar>(
    panel: &OperatorPanel<T>,
    solver: &Solver<T>,
    theta: &Vector<T>,
) -> Result<RiskBreakdown> {
    if theta.len() != panel.budget() {
        return Err(invalid(format!(
            "theta has length {}, expected {}",
            theta.len(),
            panel.budget()
        )));
    }
    let m = panel.m;
    let theta_m = theta.rows(0, m).into_owned();
    let theta_u = theta.rows(m, panel.nescience_dim()).into_owned();
    let signal_m = &panel.m_tm * &theta_m;
    let noise = &panel.m_tu * &theta_u;
    let y_t = &signal_m + &noise;
    let y_v = &panel.m_vm * &theta_m + &panel.m_vu * &theta_u;

    let theta_hat = solver.apply_vec(&y_t);
    let b_theta = solver.b_times(&panel.m_tm, &theta_m);
    let a_theta = solver.apply_vec(&noise);
    let split = &b_theta + &a_theta;

    let err_t = (&y_t - &panel.m_tm * &theta_hat).norm_squared();
    let err_v = (&y_v - &panel.m_vm * &theta_hat).norm_squared();
    let (n, v) = (panel.n_train(), panel.n_prediction());

    let m_rows_norm = (panel.m_tm.norm_squared() + panel.m_vm.norm_squared()).sqrt();
    let y_hat_gap = (&panel.m_tm * (&theta_hat - &split)).norm_squared()
        + (&panel.m_vm * (&theta_hat - &split)).norm_squared();
    let y_hat_norm = ((&panel.m_tm * &theta_hat).norm_squared()
        + (&panel.m_vm * &theta_hat).norm_squared())
    .sqrt();
    let scale = y_hat_norm.max(
        m_rows_norm
            * (theta_m.norm()
                + solver.pinv_norm() * (panel.m_tm.norm() * theta_m.norm() + noise.norm())),
    );
    let identity_residual = if scale > 0.0 {
        y_hat_gap.sqrt() / scale
    } else {
        0.0
    };
    if identity_residual.is_nan() || identity_residual > IDENTITY_TOL {
        return Err(Error::DecompositionMismatch {
            m,
            residual: identity_residual,
            tolerance: IDENTITY_TOL,
        });
    }
    Ok(RiskBreakdown {
        risk_all: (err_t + err_v) / (n + v) as f64,
        risk_prediction_only: if v == 0 { 0.0 } else { err_v / v as f64 },
        alias_error: a_theta.norm(),
        bias_error: (&theta_m - &b_theta).norm(),
        nescience_error: theta_u.norm(),
        identity_residual,
    })
}

/// Labels are synthesized as `y = M theta`; the fit sees only `y_T`.
pub fn risk_and_errors<T: Scalar>(
    panel: &OperatorPanel<T>,
    theta: &Vector<T>,
) -> Result<RiskBreakdown> {
    breakdown(panel, &Solver::plain(panel), theta)
}

/// Ridge strength; `lambda = 0` is the unregularized fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeConfig {
    pub lambda: f64,
    /// Training size in the `sqrt(n lambda)` scaling.
    pub n: usize,
}

impl RidgeConfig {
    pub fn new(lambda: f64, n: usize) -> Result<Self> {
        let ridge = RidgeConfig { lambda, n };
        ridge.validate()?;
        Ok(ridge)
    }

    pub fn off(n: usize) -> Self {
        RidgeConfig { lambda: 0.0, n }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(invalid(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.n == 0 {
            return Err(invalid("ridge n must be >= 1"));
        }
        Ok(())
    }

    /// `sqrt(n lambda)`.
    pub fn shift(&self) -> f64 {
        (self.n as f64 * self.lambda).sqrt()
    }

    pub fn is_off(&self) -> bool {
        self.lambda == 0.0
    }
}

/// `M~ = [M_TM; sqrt(n lambda) I_m]` and its decomposition.
#[derive(Debug, Clone)]
pub struct RidgePanel<T: Scalar> {
    pub augmented: Matrix<T>,
    /// `||M~^+||`.
    pub pinv_norm: f64,
    pub singular_values: Vec<f64>,
    svd: SvdResult<T>,
}

/// Builds the augmented matrix and checks `sigma~_i = sqrt(sigma_i^2 + n lambda)`.
pub fn ridge_panels<T: Scalar>(
    panel: &OperatorPanel<T>,
    ridge: &RidgeConfig,
) -> Result<RidgePanel<T>> {
    ridge.validate()?;
    let (n, m) = (panel.n_train(), panel.m);
    let shift = ridge.shift();
    let mut augmented = Matrix::zeros(n + m, m);
    augmented.view_mut((0, 0), (n, m)).copy_from(&panel.m_tm);
    for i in 0..m {
        augmented[(n + i, i)] = T::from_real(shift);
    }
    let dec = svd(&augmented, panel.rel_tol)?;

    let nl = shift * shift;
    let sigma = &panel.svd_tm.singular_values;
    let mut expected: Vec<f64> = (0..m)
        .map(|i| (sigma.get(i).map_or(0.0, |s| s * s) + nl).sqrt())
        .collect();
    expected.sort_by(|a, b| b.total_cmp(a));
    let floor = expected.first().copied().unwrap_or(0.0) * f64::EPSILON;
    let worst = expected
        .iter()
        .zip(&dec.singular_values)
        .map(|(e, s)| (e - s).abs() / e.max(floor).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    // at lambda = 0 the zero singular values carry no relative information
    if !ridge.is_off() && worst > RIDGE_SPECTRUM_TOL {
        return Err(Error::DecompositionMismatch {
            m,
            residual: worst,
            tolerance: RIDGE_SPECTRUM_TOL,
        });
    }
    let pinv_norm = match dec.sigma_min_nonzero() {
        s if s > 0.0 => 1.0 / s,
        _ => 0.0,
    };
    Ok(RidgePanel {
        augmented,
        pinv_norm,
        singular_values: dec.singular_values.clone(),
        svd: dec,
    })
}

impl<T: Scalar> RidgePanel<T> {
    fn solver(&self, n: usize) -> Solver<T> {
        Solver::from_svd(&self.svd, n, true)
    }
}

/// Ridge aliasing operator `M~^+ [M_TU; 0]`.
pub fn ridge_aliasing_operator<T: Scalar>(
    panel: &OperatorPanel<T>,
    ridge: &RidgePanel<T>,
) -> Matrix<T> {
    ridge.solver(panel.n_train()).apply(&panel.m_tu)
}

/// Ridge `B~ = M~^+ [M_TM; 0]`; no longer a projector when `lambda > 0`.
pub fn ridge_b_operator<T: Scalar>(panel: &OperatorPanel<T>, ridge: &RidgePanel<T>) -> Matrix<T> {
    ridge.solver(panel.n_train()).b_matrix(&panel.m_tm)
}

/// Ridge `E_B = blockdiag(I - B~, I_U)`.
pub fn ridge_invertibility_operator<T: Scalar>(
    panel: &OperatorPanel<T>,
    ridge: &RidgePanel<T>,
) -> Matrix<T> {
    let b = ridge_b_operator(panel, ridge);
    let a = Matrix::zeros(panel.m, panel.nescience_dim());
    block_operators(panel.m, &a, &b).1
}

/// Ridge fit `M~^+ [y_T; 0]`, padded to `J_max`.
pub fn ridge_infer_theta<T: Scalar>(
    panel: &OperatorPanel<T>,
    ridge: &RidgePanel<T>,
    y_t: &Vector<T>,
) -> Result<Vector<T>> {
    if y_t.len() != panel.n_train() {
        return Err(invalid(format!(
            "y_T has length {}, expected {}",
            y_t.len(),
            panel.n_train()
        )));
    }
    let mut theta = Vector::zeros(panel.budget());
    theta
        .rows_mut(0, panel.m)
        .copy_from(&ridge.solver(panel.n_train()).apply_vec(y_t));
    Ok(theta)
}

pub fn ridge_risk_and_errors<T: Scalar>(
    panel: &OperatorPanel<T>,
    ridge: &RidgePanel<T>,
    theta: &Vector<T>,
) -> Result<RiskBreakdown> {
    breakdown(panel, &ridge.solver(panel.n_train()), theta)
}

/// `E ||E_B theta||^2 = sigma^2 (dim K + dim U)` for i.i.d. `theta`.
pub fn expected_unstructured_error(sigma2: f64, dim_k: usize, dim_u: usize) -> f64 {
    sigma2 * (dim_k + dim_u) as f64
}

/// One model size of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub m: usize,
    pub norm_a: f64,
    pub norm_pinv_tm: f64,
    pub norm_m_tu: f64,
    pub alias_error: f64,
    pub bias_error: f64,
    pub nescience_error: f64,
    pub risk_all: f64,
    pub risk_prediction_only: f64,
    pub rank_tm: usize,
    pub new_col_independent: bool,
    pub lambda: f64,
    pub identity_residual: f64,
    /// Set when this `m` failed; numeric fields are then NaN.
    pub error: Option<String>,
}

impl SweepRecord {
    fn failed(m: usize, lambda: f64, err: &Error) -> Self {
        SweepRecord {
            m,
            norm_a: f64::NAN,
            norm_pinv_tm: f64::NAN,
            norm_m_tu: f64::NAN,
            alias_error: f64::NAN,
            bias_error: f64::NAN,
            nescience_error: f64::NAN,
            risk_all: f64::NAN,
            risk_prediction_only: f64::NAN,
            rank_tm: 0,
            new_col_independent: false,
            lambda,
            identity_residual: f64::NAN,
            error: Some(err.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

fn record_at<T: Scalar>(
    m_full: &Matrix<T>,
    n_train: usize,
    m: usize,
    theta: &Vector<T>,
    ridge: &RidgeConfig,
    rel_tol: f64,
) -> Result<(SweepRecord, Vec<f64>)> {
    let panel = build_panels(m_full, n_train, m, rel_tol)?;
    let norm_m_tu = spectral_norm(&panel.m_tu)?;
    let (solver, norm_pinv_tm) = if ridge.is_off() {
        (Solver::plain(&panel), panel.norm_pinv_tm())
    } else {
        let rp = ridge_panels(&panel, ridge)?;
        (rp.solver(n_train), rp.pinv_norm)
    };
    let norm_a = solver.applied_norm(&panel.m_tu)?;
    let parts = breakdown(&panel, &solver, theta)?;
    let record = SweepRecord {
        m,
        norm_a,
        norm_pinv_tm,
        norm_m_tu,
        alias_error: parts.alias_error,
        bias_error: parts.bias_error,
        nescience_error: parts.nescience_error,
        risk_all: parts.risk_all,
        risk_prediction_only: parts.risk_prediction_only,
        rank_tm: panel.rank_tm,
        new_col_independent: false,
        lambda: ridge.lambda,
        identity_residual: parts.identity_residual,
        error: None,
    };
    Ok((record, panel.svd_tm.singular_values))
}

/// Sweeps model sizes `m_values` over a prebuilt full matrix.
///
/// Each `m` is computed independently (in parallel on the current rayon
/// pool). The independence flag compares the spectra of `M_TM` at `m - 1`
/// and `m` as [`crate::linalg::append_column`] does. A failing `m` yields a
/// record carrying the error instead of aborting the sweep. Output is
/// sorted by `m`.
pub fn sweep_matrix<T: Scalar>(
    m_full: &Matrix<T>,
    n_train: usize,
    theta: &[f64],
    m_values: &[usize],
    ridge: &RidgeConfig,
    rel_tol: f64,
) -> Result<Vec<SweepRecord>> {
    check_rel_tol(rel_tol)?;
    ridge.validate()?;
    let budget = m_full.ncols();
    if theta.len() != budget {
        return Err(invalid(format!(
            "theta has length {}, expected {budget}",
            theta.len()
        )));
    }
    if n_train == 0 || n_train > m_full.nrows() {
        return Err(invalid(format!(
            "n_train = {n_train} outside 1..={}",
            m_full.nrows()
        )));
    }
    if let Some(bad) = m_values.iter().find(|&&m| m == 0 || m > budget) {
        return Err(invalid(format!("m = {bad} outside 1..={budget}")));
    }
    let mut ms = m_values.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let theta = vector_of::<T>(theta);

    // each record travels with the spectrum of its M_TM
    type Computed = (usize, Result<(SweepRecord, Vec<f64>)>);
    let results: Vec<Computed> = ms
        .par_iter()
        .map(|&m| (m, record_at(m_full, n_train, m, &theta, ridge, rel_tol)))
        .collect();

    let mut spectra: HashMap<usize, Vec<f64>> = HashMap::new();
    spectra.insert(0, Vec::new());
    for (m, res) in &results {
        if let Ok((_, sv)) = res {
            spectra.insert(*m, sv.clone());
        }
    }
    let missing: Vec<usize> = ms
        .iter()
        .map(|m| m - 1)
        .filter(|p| !spectra.contains_key(p))
        .collect();
    let extra: Vec<(usize, Result<Vec<f64>>)> = missing
        .par_iter()
        .map(|&p| {
            (
                p,
                singular_values(&m_full.view((0, 0), (n_train, p)).into_owned()),
            )
        })
        .collect();
    for (p, sv) in extra {
        if let Ok(sv) = sv {
            spectra.insert(p, sv);
        }
    }

    Ok(results
        .into_iter()
        .map(|(m, res)| match res {
            Ok((mut record, sv)) => {
                if let Some(prev) = spectra.get(&(m - 1)) {
                    record.new_col_independent =
                        append_report(prev, &sv, n_train, m, rel_tol).was_independent;
                }
                record
            }
            Err(err) => SweepRecord::failed(m, ridge.lambda, &err),
        })
        .collect())
}

/// Evaluates `basis` on the design and sweeps `m_values`.
pub fn sweep(
    basis: &Basis,
    design: &SampleDesign,
    theta_spec: &ParameterSpec,
    m_values: &[usize],
    ridge: &RidgeConfig,
    rel_tol: f64,
) -> Result<Vec<SweepRecord>> {
    if theta_spec.length != basis.budget() {
        return Err(invalid(format!(
            "theta length {} does not match the column budget {}",
            theta_spec.length,
            basis.budget()
        )));
    }
    let theta = make_theta(theta_spec)?;
    let n = design.n_train();
    match basis.evaluate(&design.all_points(), 0..basis.budget())? {
        DesignMatrix::Real(x) => sweep_matrix(&x, n, &theta, m_values, ridge, rel_tol),
        DesignMatrix::Complex(x) => sweep_matrix(&x, n, &theta, m_values, ridge, rel_tol),
    }
}
