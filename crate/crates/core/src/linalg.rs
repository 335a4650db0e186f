//! Dense linear-algebra kernels over real and complex matrices.
//!
//! Everything here is generic over [`Scalar`], which is implemented for `f64`
//! and `Complex64`. Wherever a real formula uses a transpose, the complex
//! path uses the conjugate transpose (`adjoint`).
//!
//! Numerical rank is decided with the scale-aware threshold
//! `rel_tol * sigma_max * max(rows, cols)`; a singular value exactly at the
//! threshold counts as zero.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

pub type Matrix<T> = DMatrix<T>;
pub type Vector<T> = DVector<T>;

/// The scalar field a matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

/// Scalars the kernels operate on: `f64` and `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    const FIELD: Field;

    fn is_finite_scalar(&self) -> bool;

    /// Thin SVD `(U, sigma, V)` with `sigma` nonincreasing; vectors are
    /// empty when not requested. `None` if the iteration fails.
    fn raw_svd(x: &Matrix<Self>, vectors: bool) -> Option<RawSvd<Self>>;

    /// `a^H b`.
    fn adjoint_mul(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self>;
}

type RawSvd<T> = (Matrix<T>, Vec<f64>, Matrix<T>);

// nalgebra's SVD loses orthogonality on some exactly rank-deficient inputs,
// so the decomposition itself comes from faer.
fn faer_svd<E>(x: &Matrix<E>, vectors: bool, re: fn(&E) -> f64) -> Option<RawSvd<E>>
where
    E: faer::traits::ComplexField<Real = f64> + nalgebra::Scalar + Copy,
{
    let (rows, cols) = x.shape();
    let f = faer::Mat::<E>::from_fn(rows, cols, |i, j| x[(i, j)]);
    if !vectors {
        let sv = f.singular_values().ok()?;
        return Some((
            Matrix::from_vec(0, 0, Vec::new()),
            sv,
            Matrix::from_vec(0, 0, Vec::new()),
        ));
    }
    let dec = f.thin_svd().ok()?;
    let (u, s, v) = (dec.U(), dec.S().column_vector(), dec.V());
    Some((
        Matrix::from_fn(rows, u.ncols(), |i, j| u[(i, j)]),
        (0..s.nrows()).map(|i| re(&s[i])).collect(),
        Matrix::from_fn(cols, v.ncols(), |i, j| v[(i, j)]),
    ))
}

// nalgebra multiplies complex matrices with scalar loops; faer is much faster.
fn faer_adjoint_mul<E>(a: &Matrix<E>, b: &Matrix<E>) -> Matrix<E>
where
    E: faer::traits::ComplexField + nalgebra::Scalar + Copy,
{
    let fa = faer::MatRef::from_column_major_slice(a.as_slice(), a.nrows(), a.ncols());
    let fb = faer::MatRef::from_column_major_slice(b.as_slice(), b.nrows(), b.ncols());
    let c = fa.adjoint() * fb;
    Matrix::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)])
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }

    fn raw_svd(x: &Matrix<Self>, vectors: bool) -> Option<RawSvd<Self>> {
        faer_svd(x, vectors, |v| *v)
    }

    fn adjoint_mul(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        a.tr_mul(b)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn is_finite_scalar(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn raw_svd(x: &Matrix<Self>, vectors: bool) -> Option<RawSvd<Self>> {
        faer_svd(x, vectors, |v| v.re)
    }

    fn adjoint_mul(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        faer_adjoint_mul(a, b)
    }
}

/// Thin SVD `X = U diag(sigma) V^H` with the numerical rank attached.
#[derive(Debug, Clone)]
pub struct SvdResult<T: Scalar> {
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub left_vectors: Matrix<T>,
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// `cols x k` with orthonormal columns (this is `V`, not `V^H`).
    pub right_vectors: Matrix<T>,
    pub numerical_rank: usize,
    pub rel_tol: f64,
}

impl<T: Scalar> SvdResult<T> {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value counted in the numerical rank, or 0 at rank 0.
    pub fn sigma_min_nonzero(&self) -> f64 {
        match self.numerical_rank {
            0 => 0.0,
            r => self.singular_values[r - 1],
        }
    }

    /// `U diag(sigma) V^H`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let mut scaled = self.left_vectors.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*s);
        }
        scaled * self.right_vectors.adjoint()
    }

    /// Leading `numerical_rank` left singular vectors.
    pub fn range_basis(&self) -> Matrix<T> {
        self.left_vectors
            .columns(0, self.numerical_rank)
            .into_owned()
    }

    /// Leading `numerical_rank` right singular vectors.
    pub fn row_space_basis(&self) -> Matrix<T> {
        self.right_vectors
            .columns(0, self.numerical_rank)
            .into_owned()
    }
}

pub(crate) fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "rel_tol must lie in (0, 1), got {rel_tol}"
        )))
    }
}

pub fn ensure_finite<T: Scalar>(x: &Matrix<T>) -> Result<()> {
    match x.iter().position(|v| !v.is_finite_scalar()) {
        None => Ok(()),
        Some(idx) => {
            let (r, c) = (idx % x.nrows(), idx / x.nrows());
            Err(invalid(format!("non-finite entry at ({r}, {c})")))
        }
    }
}

/// Absolute cutoff below which a singular value is treated as zero.
pub fn rank_threshold(sigma_max: f64, rows: usize, cols: usize, rel_tol: f64) -> f64 {
    rel_tol * sigma_max * rows.max(cols) as f64
}

fn count_above(values: &[f64], threshold: f64) -> usize {
    values.iter().take_while(|&&s| s > threshold).count()
}

pub fn svd<T: Scalar>(x: &Matrix<T>, rel_tol: f64) -> Result<SvdResult<T>> {
    check_rel_tol(rel_tol)?;
    ensure_finite(x)?;
    let (rows, cols) = x.shape();
    if rows == 0 || cols == 0 {
        return Ok(SvdResult {
            left_vectors: Matrix::zeros(rows, 0),
            singular_values: Vec::new(),
            right_vectors: Matrix::zeros(cols, 0),
            numerical_rank: 0,
            rel_tol,
        });
    }
    let (left_vectors, singular_values, right_vectors) =
        T::raw_svd(x, true).ok_or(Error::NoConvergence { algorithm: "svd" })?;
    let threshold = rank_threshold(singular_values[0], rows, cols, rel_tol);
    Ok(SvdResult {
        numerical_rank: count_above(&singular_values, threshold),
        left_vectors,
        singular_values,
        right_vectors,
        rel_tol,
    })
}

/// Singular values only, nonincreasing.
pub fn singular_values<T: Scalar>(x: &Matrix<T>) -> Result<Vec<f64>> {
    ensure_finite(x)?;
    if x.is_empty() {
        return Ok(Vec::new());
    }
    let (_, sv, _) = T::raw_svd(x, false).ok_or(Error::NoConvergence { algorithm: "svd" })?;
    Ok(sv)
}

pub fn numerical_rank<T: Scalar>(x: &Matrix<T>, rel_tol: f64) -> Result<usize> {
    check_rel_tol(rel_tol)?;
    let sv = singular_values(x)?;
    let threshold = rank_threshold(
        sv.first().copied().unwrap_or(0.0),
        x.nrows(),
        x.ncols(),
        rel_tol,
    );
    Ok(count_above(&sv, threshold))
}

/// Moore-Penrose pseudoinverse with sub-threshold singular values truncated.
pub fn pseudoinverse<T: Scalar>(x: &Matrix<T>, rel_tol: f64) -> Result<Matrix<T>> {
    let dec = svd(x, rel_tol)?;
    Ok(pinv_from_svd(&dec))
}

pub(crate) fn pinv_from_svd<T: Scalar>(dec: &SvdResult<T>) -> Matrix<T> {
    let r = dec.numerical_rank;
    let mut v1 = dec.right_vectors.columns(0, r).into_owned();
    for j in 0..r {
        v1.column_mut(j).scale_mut(1.0 / dec.singular_values[j]);
    }
    v1 * dec.left_vectors.columns(0, r).adjoint()
}

/// Largest singular value. Zero for empty matrices.
pub fn spectral_norm<T: Scalar>(x: &Matrix<T>) -> Result<f64> {
    if x.is_empty() {
        ensure_finite(x)?;
        return Ok(0.0);
    }
    Ok(singular_values(x)?[0])
}

/// Orthogonal projector onto the numerical null space of `x` (`cols x cols`).
pub fn kernel_projector<T: Scalar>(x: &Matrix<T>, rel_tol: f64) -> Result<Matrix<T>> {
    let dec = svd(x, rel_tol)?;
    let v1 = dec.row_space_basis();
    Ok(Matrix::identity(x.ncols(), x.ncols()) - &v1 * v1.adjoint())
}

/// Outcome of adjoining one column to a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendReport {
    pub was_independent: bool,
    /// Smallest singular value counted in the old rank (0 at rank 0).
    pub old_min_singular: f64,
    /// Smallest singular value counted in the new rank.
    pub new_min_singular: f64,
    pub old_rank: usize,
    pub new_rank: usize,
}

impl AppendReport {
    /// Checks the smallest-singular-value inequalities for a column append:
    /// an independent column cannot raise the smallest nonzero singular
    /// value and a dependent one cannot lower it.
    pub fn satisfies_bounds(&self, rel_tol: f64) -> bool {
        if self.old_rank == 0 {
            return true;
        }
        let slack = rel_tol * self.old_min_singular.max(self.new_min_singular);
        if self.was_independent {
            self.new_min_singular <= self.old_min_singular + slack
        } else {
            self.new_min_singular + slack >= self.old_min_singular
        }
    }
}

/// Returns `[x | phi]` and how its smallest nonzero singular value and rank
/// moved. Both ranks are measured against the threshold of the widened
/// matrix, so `new_rank - old_rank` is always 0 or 1.
pub fn append_column<T: Scalar>(
    x: &Matrix<T>,
    phi: &Vector<T>,
    rel_tol: f64,
) -> Result<(Matrix<T>, AppendReport)> {
    check_rel_tol(rel_tol)?;
    if phi.len() != x.nrows() {
        return Err(invalid(format!(
            "column length {} does not match {} rows",
            phi.len(),
            x.nrows()
        )));
    }
    let mut widened = x.clone().insert_column(x.ncols(), T::zero());
    widened.set_column(x.ncols(), phi);
    let old_sv = singular_values(x)?;
    let new_sv = singular_values(&widened)?;
    let report = append_report(&old_sv, &new_sv, widened.nrows(), widened.ncols(), rel_tol);
    Ok((widened, report))
}

/// The [`AppendReport`] for a column append, given the sorted singular
/// values before and after and the shape of the widened matrix. Lets callers
/// that already hold both spectra skip the decompositions in [`append_column`].
pub fn append_report(
    old_sv: &[f64],
    new_sv: &[f64],
    rows: usize,
    cols: usize,
    rel_tol: f64,
) -> AppendReport {
    let threshold = rank_threshold(new_sv.first().copied().unwrap_or(0.0), rows, cols, rel_tol);
    let old_rank = count_above(old_sv, threshold);
    let new_rank = count_above(new_sv, threshold);
    let min_at = |sv: &[f64], r: usize| if r == 0 { 0.0 } else { sv[r - 1] };
    AppendReport {
        was_independent: new_rank > old_rank,
        old_min_singular: min_at(old_sv, old_rank),
        new_min_singular: min_at(new_sv, new_rank),
        old_rank,
        new_rank,
    }
}

fn check_hermitian<T: Scalar>(h: &Matrix<T>) -> Result<()> {
    ensure_finite(h)?;
    if !h.is_square() {
        return Err(invalid(format!(
            "matrix is {}x{}, not square",
            h.nrows(),
            h.ncols()
        )));
    }
    let scale = h
        .iter()
        .map(|v| v.modulus())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let skew = (h - h.adjoint())
        .iter()
        .map(|v| v.modulus())
        .fold(0.0_f64, f64::max);
    if skew > 1e-9 * scale {
        return Err(invalid(format!(
            "matrix is not Hermitian (max |H - H^H| = {skew:.3e})"
        )));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix in nonincreasing order.
pub fn hermitian_eigenvalues<T: Scalar>(h: &Matrix<T>) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    if h.is_empty() {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, 0).ok_or(Error::NoConvergence {
        algorithm: "hermitian eigensolver",
    })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interleaving {
    pub eigs_before: Vec<f64>,
    pub eigs_after: Vec<f64>,
    pub holds: bool,
}

/// Spectra of `H` and `H + c c^H`, and whether
/// `after[0] >= before[0] >= after[1] >= ... >= after[n-1] >= before[n-1]`
/// holds to `1e-9 * scale`.
pub fn interleaving_check<T: Scalar>(h: &Matrix<T>, c: &Vector<T>) -> Result<Interleaving> {
    if c.len() != h.nrows() {
        return Err(invalid(format!(
            "update vector length {} does not match {} rows",
            c.len(),
            h.nrows()
        )));
    }
    let before = hermitian_eigenvalues(h)?;
    let updated = h + c * c.adjoint();
    let after = hermitian_eigenvalues(&updated)?;
    let scale = before
        .iter()
        .chain(after.iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let holds = interlaced_above(&before, &after, 1e-9 * scale);
    Ok(Interleaving {
        eigs_before: before,
        eigs_after: after,
        holds,
    })
}

/// True when `upper` interlaces `lower` from above:
/// `upper[0] >= lower[0] >= upper[1] >= lower[1] >= ...`.
pub fn interlaced_above(lower: &[f64], upper: &[f64], tol: f64) -> bool {
    if lower.len() != upper.len() {
        return false;
    }
    let n = lower.len();
    (0..n).all(|i| upper[i] + tol >= lower[i] && (i + 1 == n || lower[i] + tol >= upper[i + 1]))
}
