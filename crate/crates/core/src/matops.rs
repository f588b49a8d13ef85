//! Dense real-matrix utilities: Kronecker products, (half-)vectorization,
//! rank-revealing nullspaces, least squares and spectra.
//!
//! Everything here is a pure function over `nalgebra` dense matrices; the
//! decompositions are delegated to `faer`.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Default relative threshold for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;


/// A square matrix that has been made exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat(Mat);

impl SymMat {
    /// Symmetrizes `m` as `(m + mᵀ)/2`.
    pub fn new(m: Mat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        ensure_finite(&m, "symmetric matrix")?;
        let t = m.transpose();
        Ok(SymMat((m + t) * 0.5))
    }

    pub fn identity(n: usize) -> Self {
        SymMat(Mat::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vector {
        let ev = to_faer(&self.0)
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .expect("symmetric eigensolver converges on finite input");
        Vector::from_vec(ev)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        let ev = self.eigenvalues();
        ev[ev.len() - 1]
    }
}

pub fn ensure_finite(m: &Mat, what: &str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Builds a matrix from row slices; rows must share a length.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<Mat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::DimensionMismatch("matrix must be non-empty".into()));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "row {i} has {} entries, expected {ncols}",
            rows[i].len()
        )));
    }
    let m = Mat::from_fn(nrows, ncols, |i, j| rows[i][j]);
    ensure_finite(&m, "matrix")?;
    Ok(m)
}

pub fn to_rows(m: &Mat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Symmetric part times two: `m + mᵀ`.
pub fn he(m: &Mat) -> Mat {
    m + m.transpose()
}

/// Elementary matrix with a single one at `(i, j)`.
pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Mat {
    let mut e = Mat::zeros(rows, cols);
    e[(i, j)] = 1.0;
    e
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Column-stacking vectorization.
pub fn vec(a: &Mat) -> Vector {
    Vector::from_column_slice(a.as_slice())
}

/// Inverse of [`vec`].
pub fn unvec(v: &Vector, rows: usize, cols: usize) -> Result<Mat> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape length {} into {rows}x{cols}",
            v.len()
        )));
    }
    Ok(Mat::from_column_slice(rows, cols, v.as_slice()))
}

pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Half-vectorization: the lower triangle, column by column, unscaled.
pub fn svec(s: &SymMat) -> Vector {
    let n = s.dim();
    let m = s.as_mat();
    let mut out = Vec::with_capacity(svec_len(n));
    for j in 0..n {
        for i in j..n {
            out.push(m[(i, j)]);
        }
    }
    Vector::from_vec(out)
}

/// Inverse of [`svec`].
pub fn smat(v: &Vector) -> Result<SymMat> {
    let n = svec_dim(v.len())?;
    let mut m = Mat::zeros(n, n);
    let mut idx = 0;
    for j in 0..n {
        for i in j..n {
            m[(i, j)] = v[idx];
            m[(j, i)] = v[idx];
            idx += 1;
        }
    }
    Ok(SymMat(m))
}

fn svec_dim(len: usize) -> Result<usize> {
    let n = ((((8 * len + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
    if svec_len(n) != len || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "length {len} is not a triangular number"
        )));
    }
    Ok(n)
}

/// The symmetric matrices selected by each svec coordinate, in svec order.
pub fn svec_basis(n: usize) -> Vec<Mat> {
    let mut out = Vec::with_capacity(svec_len(n));
    for j in 0..n {
        for i in j..n {
            let mut e = Mat::zeros(n, n);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            out.push(e);
        }
    }
    out
}

/// The n² × n(n+1)/2 matrix taking svec coordinates to vec coordinates.
pub fn svec_to_vec_map(n: usize) -> Mat {
    let basis = svec_basis(n);
    let mut m = Mat::zeros(n * n, basis.len());
    for (c, e) in basis.iter().enumerate() {
        m.set_column(c, &vec(e));
    }
    m
}

/// Singular value decomposition `A = U Σ Vᵀ`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Mat,
    pub singular_values: Vector,
    pub v_t: Mat,
}

fn to_faer(a: &Mat) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, f64>) -> Mat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn faer_svd(a: &Mat, thin: bool) -> Result<Svd> {
    ensure_finite(a, "svd input")?;
    let fa = to_faer(a);
    let dec = if thin { fa.thin_svd() } else { fa.svd() }.map_err(|_| Error::NoConvergence)?;
    let k = a.nrows().min(a.ncols());
    let s = dec.S().column_vector();
    Ok(Svd {
        u: from_faer(dec.U()),
        singular_values: Vector::from_fn(k, |i, _| s[i]),
        v_t: from_faer(dec.V()).transpose(),
    })
}

/// Thin SVD: `U` is m × min(m,n), `Vᵀ` is min(m,n) × n.
pub fn svd(a: &Mat) -> Result<Svd> {
    faer_svd(a, true)
}

/// Full SVD with square `U` and `Vᵀ`.
pub fn svd_full(a: &Mat) -> Result<Svd> {
    faer_svd(a, false)
}

pub fn singular_values(a: &Mat) -> Result<Vector> {
    ensure_finite(a, "svd input")?;
    let sv = to_faer(a).singular_values().map_err(|_| Error::NoConvergence)?;
    Ok(Vector::from_vec(sv))
}

/// 2-norm condition number; `f64::INFINITY` for singular input.
pub fn condition_number(a: &Mat) -> Result<f64> {
    let sv = singular_values(a)?;
    let (max, min) = (sv[0], sv[sv.len() - 1]);
    if min <= 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(max / min)
    }
}

/// Orthonormal basis (columns) of the numerical nullspace of `a`.
///
/// Right singular vectors with singular value ≤ `tol · σ_max` are kept; a
/// zero matrix yields the full identity. The result may have zero columns.
pub fn nullspace(a: &Mat, tol: f64) -> Result<Mat> {
    nullspace_scaled(a, tol, 0.0)
}

/// [`nullspace`] with the threshold `tol · max(σ_max, scale)`.
///
/// Useful when `a` is a projection of an operator of norm `scale`: a
/// projection that is entirely roundoff then counts as zero.
pub fn nullspace_scaled(a: &Mat, tol: f64, scale: f64) -> Result<Mat> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Ok(Mat::identity(n, n));
    }
    // A tall input already yields a square Vᵀ from the thin factorization.
    let svd = if a.nrows() >= n { svd(a)? } else { svd_full(a)? };
    let sigma_max = svd.singular_values.iter().copied().fold(scale, f64::max);
    // Right vectors past min(m, n) have an implicit zero singular value.
    let cols: Vec<Vector> = (0..n)
        .filter(|&i| {
            let s = svd.singular_values.get(i).copied().unwrap_or(0.0);
            sigma_max == 0.0 || s <= tol * sigma_max
        })
        .map(|i| svd.v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        return Ok(Mat::zeros(n, 0));
    }
    Ok(Mat::from_columns(&cols))
}

/// Orthonormal basis (columns) of the numerical column space of `a`.
pub fn range_basis(a: &Mat, tol: f64) -> Result<Mat> {
    let m = a.nrows();
    if a.ncols() == 0 {
        return Ok(Mat::zeros(m, 0));
    }
    let svd = svd(a)?;
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max > 0.0 && s > tol * sigma_max)
        .map(|(i, _)| svd.u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        return Ok(Mat::zeros(m, 0));
    }
    Ok(Mat::from_columns(&cols))
}

pub fn rank(a: &Mat, tol: f64) -> Result<usize> {
    Ok(range_basis(a, tol)?.ncols())
}

/// All eigenvalues of a square matrix.
pub fn eigenvalues(a: &Mat) -> Result<Vec<Complex<f64>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    ensure_finite(a, "eigenvalue input")?;
    let ev = to_faer(a).eigenvalues().map_err(|_| Error::NoConvergence)?;
    Ok(ev.into_iter().map(|z| Complex::new(z.re, z.im)).collect())
}

/// Spectral abscissa: the largest real part over all eigenvalues.
pub fn eig_max_real(a: &Mat) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Least-squares fit of `target` in the span of `basis`.
///
/// Returns the coefficients and the Frobenius norm of the residual.
pub fn lstsq_residual(basis: &[Mat], target: &Mat) -> Result<(Vector, f64)> {
    if let Some(b) = basis.iter().find(|b| b.shape() != target.shape()) {
        return Err(Error::DimensionMismatch(format!(
            "basis element is {:?}, target is {:?}",
            b.shape(),
            target.shape()
        )));
    }
    if basis.is_empty() {
        return Ok((Vector::zeros(0), target.norm()));
    }
    let cols: Vec<Vector> = basis.iter().map(vec).collect();
    let design = Mat::from_columns(&cols);
    let rhs = vec(target);
    let svd = svd(&design)?;
    let cutoff = DEFAULT_RANK_TOL * svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut projected = svd.u.transpose() * &rhs;
    for (p, &s) in projected.iter_mut().zip(svd.singular_values.iter()) {
        *p = if s > cutoff { *p / s } else { 0.0 };
    }
    let coeffs = svd.v_t.transpose() * projected;
    let residual = (rhs - design * &coeffs).norm();
    Ok((coeffs, residual))
}

/// Dense inverse via LU; `None` when the matrix is numerically singular.
pub fn inverse(a: &Mat) -> Option<Mat> {
    a.clone().lu().try_inverse()
}

/// Solves `A P + P Aᵀ + Q = 0` by Kronecker lifting.
pub fn solve_lyapunov(a: &Mat, q: &Mat) -> Result<Mat> {
    let n = a.nrows();
    if !a.is_square() || q.shape() != (n, n) {
        return Err(Error::DimensionMismatch("lyapunov operands must be n x n".into()));
    }
    let eye = Mat::identity(n, n);
    let op = kron(&eye, a) + kron(a, &eye);
    let rhs = -vec(q);
    let sol = op
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidArgument("lyapunov operator is singular".into()))?;
    let p = unvec(&sol, n, n)?;
    Ok((&p + p.transpose()) * 0.5)
}
