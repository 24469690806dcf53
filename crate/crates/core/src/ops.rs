//! Bosonic and spin-1 operators, multipartite embedding, and the validated
//! [`DensityMatrix`] type.
//!
//! Composite bases follow the Kronecker order of `dims`. The spin-1 basis is
//! ordered by energy level `(E1, E2, E3)`, i.e. `m = -1, 0, +1`, so the pair
//! driven by `S_z S_+ + S_- S_z` is index pair `(1, 2)`.

use crate::error::{Error, Result};
use crate::linalg::{self, kron, CMatrix, C64, ONE, ZERO};

/// Tolerance for the density-matrix invariants.
pub const STATE_TOL: f64 = 1e-9;

/// Operators on a truncated Fock space `|0>, ..., |N-1>`.
#[derive(Clone, Debug)]
pub struct BosonOps {
    pub a: CMatrix,
    pub a_dag: CMatrix,
    pub number: CMatrix,
    pub identity: CMatrix,
}

pub fn boson_ops(cutoff: usize) -> Result<BosonOps> {
    if cutoff < 2 {
        return Err(Error::param("cutoff", format!("Fock cutoff must be >= 2, got {cutoff}")));
    }
    let mut a = CMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let number = CMatrix::from_diag(&(0..cutoff).map(|n| n as f64).collect::<Vec<_>>());
    Ok(BosonOps {
        a,
        a_dag,
        number,
        identity: CMatrix::identity(cutoff),
    })
}

/// Spin-1 operators in the `(m=-1, m=0, m=+1)` basis.
#[derive(Clone, Debug)]
pub struct Spin1Ops {
    pub s_plus: CMatrix,
    pub s_minus: CMatrix,
    pub s_z: CMatrix,
    pub s_y: CMatrix,
    pub identity: CMatrix,
}

/// Basis index of magnetic quantum number `m` (−1, 0 or +1).
pub const fn spin1_index(m: i32) -> usize {
    (m + 1) as usize
}

pub fn spin1_ops() -> Spin1Ops {
    let r2 = C64::new(2f64.sqrt(), 0.0);
    let mut s_plus = CMatrix::zeros(3, 3);
    s_plus[(spin1_index(0), spin1_index(-1))] = r2;
    s_plus[(spin1_index(1), spin1_index(0))] = r2;
    let s_minus = s_plus.adjoint();
    let s_z = CMatrix::from_diag(&[-1.0, 0.0, 1.0]);
    let s_y = (&s_plus - &s_minus).scale(C64::new(0.0, -0.5));
    Spin1Ops {
        s_plus,
        s_minus,
        s_z,
        s_y,
        identity: CMatrix::identity(3),
    }
}

/// `I ⊗ ... ⊗ op ⊗ ... ⊗ I` with `op` at position `site`.
pub fn embed(op: &CMatrix, site: usize, dims: &[usize]) -> Result<CMatrix> {
    if site >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "site {site} out of range for dims {dims:?}"
        )));
    }
    if !op.is_square() || op.rows() != dims[site] {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, site {site} has dimension {}",
            op.rows(),
            op.cols(),
            dims[site]
        )));
    }
    let mut out = CMatrix::identity(1);
    for (k, &d) in dims.iter().enumerate() {
        let factor = if k == site { op.clone() } else { CMatrix::identity(d) };
        out = kron(&out, &factor);
    }
    Ok(out)
}

/// Hermitian, unit-trace, positive semidefinite matrix tagged with its
/// subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates the three state invariants.
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || total != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} do not match a {}x{} matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = linalg::hermitian_eigenvalues(&matrix)
            .map_err(|e| Error::InvalidState(e.to_string()))?[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { matrix, dims })
    }

    /// Single-system state.
    pub fn single(matrix: CMatrix) -> Result<Self> {
        let d = matrix.rows();
        Self::new(matrix, vec![d])
    }

    /// `|psi><psi|` after normalizing `psi`.
    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&psi, &psi), dims)
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(CMatrix::from_diag(populations), dims)
    }

    pub fn basis_state(index: usize, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(Error::DimensionMismatch(format!("basis index {index} >= {d}")));
        }
        let mut p = vec![0.0; d];
        p[index] = 1.0;
        Self::diagonal(&p, dims)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    /// Diagonal entries `rho_jj` (real parts).
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diag().iter().map(|z| z.re).collect()
    }

    /// Eigenvalues, ascending, with tiny negative values clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
            .expect("density matrix is Hermitian by construction")
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    }

    /// Reduced state on the listed subsystems.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        DensityMatrix::new(m, dims)
    }

    /// Same matrix regarded with a different subsystem split.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix.clone(), dims)
    }

    /// `<psi|rho|psi>` for normalized `psi`.
    pub fn overlap(&self, psi: &[C64]) -> f64 {
        let rp = self.matrix.matvec(psi);
        psi.iter().zip(&rp).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }

    /// Trusted constructor for internal results already known to be valid.
    pub(crate) fn from_parts_unchecked(matrix: CMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { matrix, dims }
    }
}

/// Off-diagonal entries removed in the composite basis.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let m = rho.matrix();
    let d = m.rows();
    let out = CMatrix::from_fn(d, d, |i, j| if i == j { C64::new(m[(i, i)].re, 0.0) } else { ZERO });
    DensityMatrix::from_parts_unchecked(out, rho.dims().to_vec())
}

/// `Tr[rho op]`.
pub fn expectation(rho: &DensityMatrix, op: &CMatrix) -> Result<C64> {
    let m = rho.matrix();
    if !op.is_square() || op.rows() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, state is {}x{}",
            op.rows(),
            op.cols(),
            m.rows(),
            m.cols()
        )));
    }
    let d = m.rows();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += m[(i, j)] * op[(j, i)];
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).max_abs()
    }

    fn ket(d: usize, k: usize) -> Vec<C64> {
        let mut v = vec![ZERO; d];
        v[k] = ONE;
        v
    }

    #[test]
    fn boson_qubit_truncation() {
        let b = boson_ops(2).unwrap();
        assert_eq!(b.a, CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
        assert!(boson_ops(1).is_err());
    }

    #[test]
    fn boson_number_operator() {
        let b = boson_ops(4).unwrap();
        let n = &b.a_dag * &b.a;
        let out = n.matvec(&ket(4, 3));
        let expected = [ZERO, ZERO, ZERO, C64::new(3.0, 0.0)];
        assert!(out.iter().zip(expected).all(|(x, y)| (x - y).norm() < 1e-14));
        assert!(max_diff(&n, &b.number) < 1e-14);
    }

    #[test]
    fn boson_commutator_truncation_artifact() {
        let b = boson_ops(10).unwrap();
        let comm = &b.a.commutator(&b.a_dag) - &CMatrix::identity(10);
        for i in 0..10 {
            for j in 0..10 {
                if i == 9 && j == 9 {
                    // [a, a^dag] = 1 - N |N-1><N-1| on the truncated space
                    assert!((comm[(i, j)].re + 10.0).abs() < 1e-12);
                } else {
                    assert!(comm[(i, j)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn spin1_algebra() {
        let s = spin1_ops();
        let r2 = 2f64.sqrt();
        let up = s.s_plus.matvec(&ket(3, spin1_index(0)));
        assert!((up[spin1_index(1)].re - r2).abs() < 1e-15);
        assert!(max_diff(&s.s_plus.commutator(&s.s_minus), &s.s_z.scale_real(2.0)) < 1e-14);
        assert!(max_diff(&s.s_z.commutator(&s.s_plus), &s.s_plus) < 1e-12);
        assert!(max_diff(&s.s_z.commutator(&s.s_minus), &s.s_minus.scale_real(-1.0)) < 1e-12);

        let casimir = &(&(&s.s_plus * &s.s_minus) + &(&s.s_minus * &s.s_plus))
            + &(&s.s_z * &s.s_z).scale_real(2.0);
        assert!(max_diff(&casimir, &CMatrix::identity(3).scale_real(4.0)) < 1e-13);
        assert!(s.s_y.is_hermitian(1e-15));
    }

    #[test]
    fn spin1_local_drive_couples_middle_and_top_levels() {
        let s = spin1_ops();
        let drive = &(&s.s_z * &s.s_plus) + &(&s.s_minus * &s.s_z);
        let out = drive.matvec(&ket(3, spin1_index(0)));
        assert!((out[spin1_index(1)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!(out[spin1_index(-1)].norm() < 1e-15);
        // E1 (m = -1) is untouched
        let out = drive.matvec(&ket(3, spin1_index(-1)));
        assert!(out.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn embed_examples() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(embed(&x, 0, &[2, 2]).unwrap(), kron(&x, &CMatrix::identity(2)));
        let b = boson_ops(4).unwrap();
        assert_eq!(embed(&b.a, 1, &[3, 4]).unwrap(), kron(&CMatrix::identity(3), &b.a));
        let s = spin1_ops();
        let lhs = &embed(&s.s_plus, 0, &[3, 3]).unwrap() * &embed(&s.s_minus, 1, &[3, 3]).unwrap();
        assert!(max_diff(&lhs, &kron(&s.s_plus, &s.s_minus)) < 1e-14);
        assert!(embed(&x, 0, &[3, 2]).is_err());
        assert!(embed(&x, 2, &[2, 2]).is_err());
    }

    #[test]
    fn density_matrix_rejects_invalid() {
        assert!(DensityMatrix::single(CMatrix::from_diag(&[0.5, 0.4])).is_err());
        assert!(DensityMatrix::single(CMatrix::from_diag(&[1.2, -0.2])).is_err());
        let nh = CMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(DensityMatrix::single(nh).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(4).scale_real(0.25), vec![2, 3]).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(4).scale_real(0.25), vec![2, 2]).is_ok());
    }

    #[test]
    fn dephase_examples() {
        let s = 0.5f64.sqrt();
        let plus = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)], vec![2]).unwrap();
        let d = dephase(&plus);
        assert!(max_diff(d.matrix(), &CMatrix::identity(2).scale_real(0.5)) < 1e-15);

        let diag = DensityMatrix::diagonal(&[0.2, 0.8], vec![2]).unwrap();
        assert_eq!(dephase(&diag), diag);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let rho = random_density(&mut rng, &[3, 3]);
            let once = dephase(&rho);
            assert_eq!(dephase(&once), once);
            for site in 0..2 {
                let a = dephase(&once.marginal(&[site]).unwrap());
                let b = dephase(&rho.marginal(&[site]).unwrap());
                let c = once.marginal(&[site]).unwrap();
                assert!(max_diff(a.matrix(), b.matrix()) < 1e-12);
                assert!(max_diff(c.matrix(), b.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_density(&mut rng, &[4]);
        assert!((expectation(&rho, &CMatrix::identity(4)).unwrap() - ONE).norm() < 1e-13);

        let b = boson_ops(3).unwrap();
        let one = DensityMatrix::basis_state(1, vec![3]).unwrap();
        assert!((expectation(&one, &b.number).unwrap() - ONE).norm() < 1e-15);

        let op = CMatrix::from_fn(4, 4, |i, j| C64::new(i as f64 - j as f64, (i * j) as f64));
        let mut oracle = ZERO;
        for i in 0..4 {
            for j in 0..4 {
                oracle += rho.matrix()[(i, j)] * op[(j, i)];
            }
        }
        assert!((expectation(&rho, &op).unwrap() - oracle).norm() < 1e-13);
        assert!(expectation(&rho, &CMatrix::identity(3)).is_err());
    }
}
