//! Dense complex linear algebra shared by every other module.
//!
//! Matrices are stored row-major. Superoperators use the column-stacking
//! convention `vec(X)[i + j*d] = X[i][j]`, so that `vec(A X B) = (B^T ⊗ A) vec(X)`.
//! Factorizations are delegated to `faer`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::linalg::solvers::{Solve, SolveLstsq};
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default cutoff below which eigenvalues are treated as outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Tolerance used by the Hermitian contract checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting wrong counts and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidEntries(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        self.diag().into_iter().sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of an off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    best = best.max(self[(i, j)].norm());
                }
            }
        }
        best
    }

    /// `max |m_ij - conj(m_ji)|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(m + m^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Column-stacked vectorization.
    pub fn vec(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    /// Inverse of [`CMatrix::vec`] for a `d x d` matrix.
    pub fn unvec(v: &[C64], d: usize) -> Self {
        assert_eq!(v.len(), d * d, "unvec length mismatch");
        Self::from_fn(d, d, |i, j| v[i + j * d])
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub(crate) fn to_faer(&self) -> Mat<C64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub(crate) fn from_faer(m: faer::MatRef<'_, C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidEntries("non-finite entry".into()))
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for z in self.row(i) {
                write!(f, " {:+.4e}{:+.4e}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sum dimension mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "difference dimension mismatch"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows, b.cols);
    let mut out = CMatrix::zeros(a.rows * br, a.cols * bc);
    let out_cols = out.cols;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                let base = (i * br + k) * out_cols + j * bc;
                for l in 0..bc {
                    out.data[base + l] = s * b.data[k * bc + l];
                }
            }
        }
    }
    out
}

/// `out += s * (a ⊗ b)` without materializing the product.
pub fn kron_accumulate(out: &mut CMatrix, s: C64, a: &CMatrix, b: &CMatrix) {
    let (br, bc) = (b.rows, b.cols);
    assert_eq!(
        (out.rows, out.cols),
        (a.rows * br, a.cols * bc),
        "kron_accumulate dimension mismatch"
    );
    let out_cols = out.cols;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let f = s * a[(i, j)];
            if f == ZERO {
                continue;
            }
            for k in 0..br {
                let base = (i * br + k) * out_cols + j * bc;
                for l in 0..bc {
                    let v = b.data[k * bc + l];
                    if v != ZERO {
                        out.data[base + l] += f * v;
                    }
                }
            }
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V^dag`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.values.len();
        let fv: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n, n);
        for k in 0..n {
            if fv[k] == ZERO {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * fv[k];
                for j in 0..n {
                    out[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| C64::new(x, 0.0))
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        })
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    check_square(m)?;
    let defect = m.hermiticity_defect();
    if defect <= HERMITIAN_TOL * m.max_abs().max(1.0) {
        Ok(())
    } else {
        Err(Error::NotHermitian(defect))
    }
}

/// Eigendecomposition of a Hermitian matrix; values ascending.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    m.check_finite()?;
    let h = m.hermitian_part().to_faer();
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver: {e:?}")))?;
    let values: Vec<f64> = (0..m.rows).map(|i| evd.S()[i].re).collect();
    Ok(HermitianEigen {
        values,
        vectors: CMatrix::from_faer(evd.U()),
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    m.check_finite()?;
    m.hermitian_part()
        .to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver: {e:?}")))
}

/// Matrix logarithm restricted to the support of a PSD matrix.
#[derive(Clone, Debug)]
pub struct SupportLog {
    /// `V diag(ln λ_i for λ_i > cutoff, else 0) V^dag`.
    pub log: CMatrix,
    /// Orthogonal projector onto the span of eigenvectors with `λ_i > cutoff`.
    pub projector: CMatrix,
    pub rank: usize,
}

/// Natural logarithm of a Hermitian PSD matrix on its support.
pub fn matrix_log_support(m: &CMatrix, cutoff: f64) -> Result<SupportLog> {
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.values.first() {
        if min < -cutoff {
            return Err(Error::NotPositive(min));
        }
    }
    let log = eig.apply(|x| if x > cutoff { C64::new(x.ln(), 0.0) } else { ZERO });
    let projector = eig.apply(|x| if x > cutoff { ONE } else { ZERO });
    let rank = eig.values.iter().filter(|&&x| x > cutoff).count();
    Ok(SupportLog {
        log,
        projector,
        rank,
    })
}

/// Partial trace keeping the factors listed in `keep` (in their original
/// order). `dims` lists the tensor factor dimensions in Kronecker order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    check_square(m)?;
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} do not match a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let mut keep_mask = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || keep_mask[k] {
            return Err(Error::DimensionMismatch(format!(
                "invalid kept subsystem list {keep:?} for dims {dims:?}"
            )));
        }
        keep_mask[k] = true;
    }

    // split every composite index into (kept index, traced index)
    let kept_dim: usize = dims.iter().zip(&keep_mask).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let split: Vec<(usize, usize)> = (0..total)
        .map(|mut idx| {
            let (mut kept, mut traced) = (0, 0);
            let (mut kstride, mut tstride) = (1, 1);
            for (f, &d) in dims.iter().enumerate().rev() {
                let digit = idx % d;
                idx /= d;
                if keep_mask[f] {
                    kept += digit * kstride;
                    kstride *= d;
                } else {
                    traced += digit * tstride;
                    tstride *= d;
                }
            }
            (kept, traced)
        })
        .collect();

    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    for i in 0..total {
        let (ki, ti) = split[i];
        for j in 0..total {
            let (kj, tj) = split[j];
            if ti == tj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// `‖m‖₁` for Hermitian `m`: the sum of absolute eigenvalues.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

/// Solution of a bordered (constrained null-space) linear system.
#[derive(Clone, Debug)]
pub struct BorderedSolution {
    pub x: Vec<C64>,
    /// Euclidean norm of the stacked residual `[a x; c·x - r]`.
    pub residual: f64,
}

fn stacked_residual(a: &CMatrix, row: &[C64], rhs: C64, x: &[C64]) -> f64 {
    let ax = a.matvec(x);
    let cx: C64 = row.iter().zip(x).map(|(c, v)| c * v).sum();
    (ax.iter().map(|z| z.norm_sqr()).sum::<f64>() + (cx - rhs).norm_sqr()).sqrt()
}

fn check_bordered(a: &CMatrix, row: &[C64]) -> Result<()> {
    check_square(a)?;
    if row.len() != a.cols {
        return Err(Error::DimensionMismatch(format!(
            "constraint row has {} entries, matrix has {} columns",
            row.len(),
            a.cols
        )));
    }
    a.check_finite()
}

/// Least-squares solution of `a x = 0` subject to `row · x = rhs`, via a
/// column-pivoted QR of the stacked `(n+1) x n` system.
pub fn solve_bordered(a: &CMatrix, row: &[C64], rhs: C64) -> Result<BorderedSolution> {
    check_bordered(a, row)?;
    let n = a.cols;
    let stacked = Mat::from_fn(n + 1, n, |i, j| if i < n { a[(i, j)] } else { row[j] });
    let mut b = Mat::<C64>::zeros(n + 1, 1);
    b[(n, 0)] = rhs;

    let qr = stacked.col_piv_qr();
    let r = qr.R();
    let diag: Vec<f64> = (0..n).map(|i| r[(i, i)].norm()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || min <= 1e-11 * max {
        return Err(Error::Degenerate(format!(
            "stacked system is rank deficient (|R| ratio {:e})",
            if max == 0.0 { 0.0 } else { min / max }
        )));
    }
    let sol = qr.solve_lstsq(&b);
    let x: Vec<C64> = (0..n).map(|i| sol[(i, 0)]).collect();
    let residual = stacked_residual(a, row, rhs, &x);
    Ok(BorderedSolution { x, residual })
}

/// Square variant of [`solve_bordered`]: equation `replace` of `a x = 0` is
/// swapped for the constraint and the result solved by partial-pivot LU.
/// Valid when that equation is redundant, which holds for every diagonal
/// row of a trace-preserving Liouvillian.
pub fn solve_bordered_replacing(
    a: &CMatrix,
    row: &[C64],
    rhs: C64,
    replace: usize,
) -> Result<BorderedSolution> {
    check_bordered(a, row)?;
    let n = a.cols;
    if replace >= n {
        return Err(Error::DimensionMismatch(format!(
            "replacement row {replace} out of range for {n} equations"
        )));
    }
    let sys = Mat::from_fn(n, n, |i, j| if i == replace { row[j] } else { a[(i, j)] });
    let mut b = Mat::<C64>::zeros(n, 1);
    b[(replace, 0)] = rhs;

    let lu = sys.partial_piv_lu();
    let u = lu.U();
    let diag: Vec<f64> = (0..n).map(|i| u[(i, i)].norm()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || min <= 1e-14 * max {
        return Err(Error::Degenerate(format!(
            "bordered system is singular (pivot ratio {:e})",
            if max == 0.0 { 0.0 } else { min / max }
        )));
    }
    let sol = lu.solve(&b);
    let x: Vec<C64> = (0..n).map(|i| sol[(i, 0)]).collect();
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Degenerate("bordered solve produced non-finite values".into()));
    }
    let residual = stacked_residual(a, row, rhs, &x);
    Ok(BorderedSolution { x, residual })
}

/// Eigenvalues of a general complex square matrix.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    check_square(m)?;
    m.check_finite()?;
    m.to_faer()
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))
}
