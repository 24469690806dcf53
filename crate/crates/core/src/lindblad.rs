//! Liouvillian superoperators, steady states, a Runge-Kutta propagator and
//! spectral diagnostics.
//!
//! `D[O]ρ = O ρ O† − ½ O†O ρ − ½ ρ O†O`, vectorized with column stacking:
//! `rate · [ (O*⊗O) − ½ (I⊗O†O) − ½ ((O†O)ᵀ⊗I) ]`.

use crate::error::{Error, Result};
use crate::linalg::{self, kron_accumulate, CMatrix, C64, I, ONE, ZERO};
use crate::ops::DensityMatrix;

/// Eigenvalues of a numerical steady state in `(-CLIP_TOL, 0)` are set to zero.
pub const CLIP_TOL: f64 = 1e-10;

/// Relative residual bound `‖L vec ρ‖ ≤ RESIDUAL_TOL · ‖L‖_F`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Jump operator with a nonnegative rate.
#[derive(Clone, Debug)]
pub struct DissipatorTerm {
    pub operator: CMatrix,
    pub rate: f64,
}

impl DissipatorTerm {
    pub fn new(operator: CMatrix, rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::param("rate", format!("must be finite and >= 0, got {rate}")));
        }
        if !operator.is_square() {
            return Err(Error::NotSquare {
                rows: operator.rows(),
                cols: operator.cols(),
            });
        }
        Ok(DissipatorTerm { operator, rate })
    }
}

/// `d² x d²` generator acting on column-stacked operators.
#[derive(Clone, Debug)]
pub struct Superoperator {
    matrix: CMatrix,
    hilbert_dims: Vec<usize>,
}

impl Superoperator {
    pub fn zero(hilbert_dims: Vec<usize>) -> Self {
        let d: usize = hilbert_dims.iter().product();
        Superoperator {
            matrix: CMatrix::zeros(d * d, d * d),
            hilbert_dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn hilbert_dims(&self) -> &[usize] {
        &self.hilbert_dims
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.hilbert_dims.iter().product()
    }

    /// `unvec(L vec(x))`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.dim();
        assert_eq!((x.rows(), x.cols()), (d, d), "superoperator applied to wrong shape");
        CMatrix::unvec(&self.matrix.matvec(&x.vec()), d)
    }

    /// `max_j |Σ_k L[(k,k), j]|`: deviation of `vec(I)† L` from zero.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim();
        let n = d * d;
        let mut worst = 0.0f64;
        for j in 0..n {
            let s: C64 = (0..d).map(|k| self.matrix[(k + k * d, j)]).sum();
            worst = worst.max(s.norm());
        }
        worst
    }

    fn add(&mut self, other: &Superoperator) {
        self.matrix = &self.matrix + &other.matrix;
    }
}

fn accumulate_dissipator(out: &mut CMatrix, term: &DissipatorTerm) {
    if term.rate == 0.0 {
        return;
    }
    let o = &term.operator;
    let d = o.rows();
    let id = CMatrix::identity(d);
    let odo = &o.adjoint() * o;
    let r = C64::new(term.rate, 0.0);
    kron_accumulate(out, r, &o.conj(), o);
    kron_accumulate(out, -0.5 * r, &id, &odo);
    kron_accumulate(out, -0.5 * r, &odo.transpose(), &id);
}

/// Superoperator of `rate · D[O]` on a single space of dimension `dim O`.
pub fn dissipator_super(term: &DissipatorTerm) -> Result<Superoperator> {
    if !term.rate.is_finite() || term.rate < 0.0 {
        return Err(Error::param("rate", format!("must be finite and >= 0, got {}", term.rate)));
    }
    let mut s = Superoperator::zero(vec![term.operator.rows()]);
    accumulate_dissipator(&mut s.matrix, term);
    Ok(s)
}

/// `L = −i (I⊗H − Hᵀ⊗I) + Σ rate·D[O]`.
pub fn liouvillian(h: &CMatrix, terms: &[DissipatorTerm], dims: &[usize]) -> Result<Superoperator> {
    let d: usize = dims.iter().product();
    if dims.is_empty() || !h.is_square() || h.rows() != d {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian is {}x{}, dims {dims:?}",
            h.rows(),
            h.cols()
        )));
    }
    if let Some(t) = terms.iter().find(|t| t.operator.rows() != d || !t.operator.is_square()) {
        return Err(Error::DimensionMismatch(format!(
            "jump operator is {}x{}, Hilbert space has dimension {d}",
            t.operator.rows(),
            t.operator.cols()
        )));
    }
    if let Some(t) = terms.iter().find(|t| !t.rate.is_finite() || t.rate < 0.0) {
        return Err(Error::param("rate", format!("must be finite and >= 0, got {}", t.rate)));
    }
    let mut l = Superoperator::zero(dims.to_vec());
    let id = CMatrix::identity(d);
    kron_accumulate(&mut l.matrix, -I, &id, h);
    kron_accumulate(&mut l.matrix, I, &h.transpose(), &id);
    for t in terms {
        accumulate_dissipator(&mut l.matrix, t);
    }
    Ok(l)
}

/// Steady state together with its solver residual `‖L vec ρ‖₂`.
#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    pub residual: f64,
}

/// Unique steady state of a trace-preserving Liouvillian.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    solve_steady_state(l).map(|s| s.rho)
}

/// Bordered solve of `L x = 0`, `Tr x = 1`: one diagonal row of `L` (the
/// one with the largest diagonal entry) is replaced by the trace row.
pub fn solve_steady_state(l: &Superoperator) -> Result<SteadyState> {
    let d = l.dim();
    let diag: Vec<usize> = (0..d).map(|k| k + k * d).collect();
    let x = bordered_null_vector(&l.matrix, &diag)?;
    let rho = finalize_state(CMatrix::unvec(&x, d), &l.hilbert_dims)?;
    let residual = checked_residual(&l.matrix, &rho.matrix().vec())?;
    Ok(SteadyState { rho, residual })
}

fn bordered_null_vector(m: &CMatrix, diag: &[usize]) -> Result<Vec<C64>> {
    let mut trace_row = vec![ZERO; m.cols()];
    let mut replace = diag[0];
    let mut best = -1.0;
    for &idx in diag {
        trace_row[idx] = ONE;
        let mag = m[(idx, idx)].norm();
        if mag > best {
            best = mag;
            replace = idx;
        }
    }
    Ok(linalg::solve_bordered_replacing(m, &trace_row, ONE, replace)?.x)
}

/// Symmetrizes, clips tiny negative eigenvalues and renormalizes.
fn finalize_state(raw: CMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    let raw = raw.hermitian_part();
    let eig = linalg::hermitian_eig(&raw)?;
    let min = eig.values[0];
    if min < -CLIP_TOL {
        return Err(Error::NotPositive(min));
    }
    let rho = if min < 0.0 {
        eig.apply(|x| C64::new(x.max(0.0), 0.0)).hermitian_part()
    } else {
        raw
    };
    let tr = rho.trace().re;
    DensityMatrix::new(rho.scale_real(1.0 / tr), dims.to_vec())
}

fn checked_residual(m: &CMatrix, x: &[C64]) -> Result<f64> {
    let residual = m.matvec(x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = m.frobenius_norm();
    if residual > RESIDUAL_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!(
            "steady-state residual {residual:e} exceeds {RESIDUAL_TOL:e}·‖L‖_F = {:e}",
            RESIDUAL_TOL * scale
        )));
    }
    Ok(residual)
}

type SparseLines = Vec<Vec<(usize, C64)>>;

/// Nonzeros grouped by column and by row.
fn sparse_lines(m: &CMatrix) -> (SparseLines, SparseLines) {
    let mut cols = vec![Vec::new(); m.cols()];
    let mut rows = vec![Vec::new(); m.rows()];
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if v != ZERO {
                cols[j].push((i, v));
                rows[i].push((j, v));
            }
        }
    }
    (cols, rows)
}

/// Charge transferred by `m`, or `None` if `m` mixes charge differences.
fn definite_charge(m: &CMatrix, charges: &[i64]) -> Option<i64> {
    let mut found = None;
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if v != ZERO {
                let q = charges[i] - charges[j];
                match found {
                    None => found = Some(q),
                    Some(f) if f != q => return None,
                    _ => {}
                }
            }
        }
    }
    Some(found.unwrap_or(0))
}

/// Steady state using a conserved integer charge `Q` (one value per basis
/// state). When `H` commutes with `Q` and each jump operator shifts `Q` by a
/// fixed amount, `L` maps operators with `Q_i − Q_j = k` into themselves and
/// a unique steady state lies in the `k = 0` block, which is all that gets
/// assembled and solved. Returns `None` when the symmetry does not hold.
pub fn solve_steady_state_sector(
    h: &CMatrix,
    terms: &[DissipatorTerm],
    dims: &[usize],
    charges: &[i64],
) -> Result<Option<SteadyState>> {
    let d: usize = dims.iter().product();
    if h.rows() != d || !h.is_square() || charges.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian {}x{}, {} charges, dims {dims:?}",
            h.rows(),
            h.cols(),
            charges.len()
        )));
    }
    if terms.iter().any(|t| t.operator.rows() != d) {
        return Err(Error::DimensionMismatch("jump operator on the wrong space".into()));
    }
    if definite_charge(h, charges) != Some(0) {
        return Ok(None);
    }
    if terms.iter().any(|t| definite_charge(&t.operator, charges).is_none()) {
        return Ok(None);
    }

    const NONE: usize = usize::MAX;
    let mut pos = vec![NONE; d * d];
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if charges[i] == charges[j] {
                pos[i * d + j] = pairs.len();
                pairs.push((i, j));
            }
        }
    }
    let n = pairs.len();
    let mut m = CMatrix::zeros(n, n);
    let put = |m: &mut CMatrix, r: usize, c: usize, s: usize, v: C64| -> Result<()> {
        match pos[r * d + c] {
            NONE => Err(Error::Numerical("charge sector is not invariant".into())),
            p => {
                m[(p, s)] += v;
                Ok(())
            }
        }
    };

    let (h_cols, h_rows) = sparse_lines(h);
    let jumps: Vec<_> = terms
        .iter()
        .filter(|t| t.rate > 0.0)
        .map(|t| {
            let k = &t.operator.adjoint() * &t.operator;
            let (o_cols, _) = sparse_lines(&t.operator);
            let (k_cols, k_rows) = sparse_lines(&k);
            (t.rate, o_cols, k_cols, k_rows)
        })
        .collect();

    for (s, &(i, j)) in pairs.iter().enumerate() {
        // L acting on |i><j|
        for &(r, v) in &h_cols[i] {
            put(&mut m, r, j, s, -I * v)?;
        }
        for &(c, v) in &h_rows[j] {
            put(&mut m, i, c, s, I * v)?;
        }
        for (rate, o_cols, k_cols, k_rows) in &jumps {
            for &(r, a) in &o_cols[i] {
                for &(c, b) in &o_cols[j] {
                    put(&mut m, r, c, s, a * b.conj() * *rate)?;
                }
            }
            for &(r, v) in &k_cols[i] {
                put(&mut m, r, j, s, v * (-0.5 * rate))?;
            }
            for &(c, v) in &k_rows[j] {
                put(&mut m, i, c, s, v * (-0.5 * rate))?;
            }
        }
    }

    let diag: Vec<usize> = (0..d).map(|k| pos[k * d + k]).collect();
    let x = bordered_null_vector(&m, &diag)?;
    let mut raw = CMatrix::zeros(d, d);
    for (&(i, j), v) in pairs.iter().zip(&x) {
        raw[(i, j)] = *v;
    }
    let rho = finalize_state(raw, dims)?;
    let y: Vec<C64> = pairs.iter().map(|&(i, j)| rho.entry(i, j)).collect();
    let residual = checked_residual(&m, &y)?;
    Ok(Some(SteadyState { rho, residual }))
}

/// Compressed-row copy of a superoperator for repeated products.
struct SparseRows {
    starts: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseRows {
    fn from_dense(m: &CMatrix) -> Self {
        let mut starts = Vec::with_capacity(m.rows() + 1);
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        starts.push(0);
        for i in 0..m.rows() {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != ZERO {
                    cols.push(j);
                    vals.push(v);
                }
            }
            starts.push(cols.len());
        }
        SparseRows { starts, cols, vals }
    }

    fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.starts[i]..self.starts[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }
}

/// Classical fourth-order Runge-Kutta integration of `vec ρ̇ = L vec ρ`,
/// renormalizing the trace after every step.
pub fn evolve_rk4(rho0: &DensityMatrix, l: &Superoperator, t_final: f64, dt: f64) -> Result<DensityMatrix> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::param("dt", format!("must be > 0, got {dt}")));
    }
    if !t_final.is_finite() || t_final < 0.0 {
        return Err(Error::param("t_final", format!("must be >= 0, got {t_final}")));
    }
    let d = l.dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs superoperator dimension {d}",
            rho0.dim()
        )));
    }
    let steps = (t_final / dt).ceil() as usize;
    let mut x = rho0.matrix().vec();
    if steps == 0 {
        return Ok(rho0.clone());
    }
    let h = t_final / steps as f64;
    let sparse = SparseRows::from_dense(&l.matrix);
    let n = x.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    let diag: Vec<usize> = (0..d).map(|k| k + k * d).collect();

    for _ in 0..steps {
        sparse.apply_into(&x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + k1[i] * (0.5 * h);
        }
        sparse.apply_into(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + k2[i] * (0.5 * h);
        }
        sparse.apply_into(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + k3[i] * h;
        }
        sparse.apply_into(&tmp, &mut k4);
        for i in 0..n {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        let tr: C64 = diag.iter().map(|&k| x[k]).sum();
        let drift = (tr - ONE).norm();
        if drift > 1e-3 || !drift.is_finite() {
            return Err(Error::Unstable { dt: h, drift });
        }
        x.iter_mut().for_each(|z| *z /= tr);
    }
    let m = CMatrix::unvec(&x, d).hermitian_part();
    DensityMatrix::new(m, l.hilbert_dims.to_vec())
}

fn sparse_mul(s: &SparseRows, x: &CMatrix) -> CMatrix {
    let n = x.cols();
    let mut out = CMatrix::zeros(s.starts.len() - 1, n);
    for i in 0..s.starts.len() - 1 {
        for k in s.starts[i]..s.starts[i + 1] {
            let (v, row) = (s.vals[k], x.row(s.cols[k]));
            for (j, &x) in row.iter().enumerate() {
                out[(i, j)] += v * x;
            }
        }
    }
    out
}

fn row_sum_norm(m: &CMatrix) -> f64 {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// RK4 step well inside the stability region, from a norm bound
/// `‖L‖ ≤ 2‖H‖ + 2 Σ rate ‖O†O‖` (row-sum norms).
pub fn stable_rk4_step(h: &CMatrix, terms: &[DissipatorTerm]) -> f64 {
    let bound = 2.0 * row_sum_norm(h)
        + terms
            .iter()
            .map(|t| 2.0 * t.rate * row_sum_norm(&(&t.operator.adjoint() * &t.operator)))
            .sum::<f64>();
    if bound == 0.0 {
        1.0
    } else {
        1.5 / bound
    }
}

/// [`evolve_rk4`] on `d x d` operators, never forming the superoperator:
/// `ρ̇ = −i (H_eff ρ − ρ H_eff†) + Σ rate O ρ O†` with
/// `H_eff = H − (i/2) Σ rate O†O`.
pub fn evolve_rk4_lindblad(
    rho0: &DensityMatrix,
    h: &CMatrix,
    terms: &[DissipatorTerm],
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::param("dt", format!("must be > 0, got {dt}")));
    }
    if !t_final.is_finite() || t_final < 0.0 {
        return Err(Error::param("t_final", format!("must be >= 0, got {t_final}")));
    }
    let d = rho0.dim();
    if h.rows() != d || terms.iter().any(|t| t.operator.rows() != d) {
        return Err(Error::DimensionMismatch(format!("operators do not act on dimension {d}")));
    }
    let mut h_eff = h.clone();
    for t in terms {
        let k = &t.operator.adjoint() * &t.operator;
        h_eff = &h_eff - &k.scale(I * (0.5 * t.rate));
    }
    let h_eff = SparseRows::from_dense(&h_eff);
    let jumps: Vec<(f64, SparseRows)> = terms
        .iter()
        .filter(|t| t.rate > 0.0)
        .map(|t| (t.rate, SparseRows::from_dense(&t.operator)))
        .collect();
    // X B† = (B X†)†, so every product is sparse-times-dense.
    let rhs = |x: &CMatrix| -> CMatrix {
        let xd = x.adjoint();
        let left = sparse_mul(&h_eff, x);
        let right = sparse_mul(&h_eff, &xd).adjoint();
        let mut out = (&right - &left).scale(I);
        for (rate, o) in &jumps {
            let oxd = sparse_mul(o, &xd);
            out = &out + &sparse_mul(o, &oxd.adjoint()).scale_real(*rate);
        }
        out
    };

    let steps = (t_final / dt).ceil() as usize;
    let step = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let mut x = rho0.matrix().clone();
    for _ in 0..steps {
        let k1 = rhs(&x);
        let k2 = rhs(&(&x + &k1.scale_real(0.5 * step)));
        let k3 = rhs(&(&x + &k2.scale_real(0.5 * step)));
        let k4 = rhs(&(&x + &k3.scale_real(step)));
        let incr = &(&k1 + &k4) + &(&k2 + &k3).scale_real(2.0);
        x = &x + &incr.scale_real(step / 6.0);
        let tr = x.trace();
        let drift = (tr - ONE).norm();
        if drift > 1e-3 || !drift.is_finite() {
            return Err(Error::Unstable { dt: step, drift });
        }
        x = x.scale(ONE / tr);
    }
    DensityMatrix::new(x.hermitian_part(), rho0.dims().to_vec())
}

/// Second-smallest `|Re λ|` over the Liouvillian spectrum; zero signals a
/// degenerate steady state.
pub fn spectral_gap(l: &Superoperator) -> Result<f64> {
    let mut re: Vec<f64> = linalg::eigenvalues(&l.matrix)?.iter().map(|z| z.re.abs()).collect();
    re.sort_by(|a, b| a.total_cmp(b));
    Ok(re.get(1).copied().unwrap_or(0.0))
}

/// Sum of several superoperators on the same space.
pub fn sum(parts: &[Superoperator]) -> Result<Superoperator> {
    let first = parts
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty superoperator sum".into()))?;
    let mut out = first.clone();
    for p in &parts[1..] {
        if p.hilbert_dims != out.hilbert_dims {
            return Err(Error::DimensionMismatch("superoperators on different spaces".into()));
        }
        out.add(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_norm_hermitian;
    use crate::random::{ginibre, random_density};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sigma_minus() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    fn sigma_z() -> CMatrix {
        CMatrix::from_diag(&[1.0, -1.0])
    }

    fn plus_state() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)], vec![2]).unwrap()
    }

    fn decay_with_drive(drive: f64) -> Superoperator {
        let h = CMatrix::from_real_rows(&[&[0.0, drive], &[drive, 0.0]]);
        liouvillian(&h, &[DissipatorTerm::new(sigma_minus(), 1.0).unwrap()], &[2]).unwrap()
    }

    #[test]
    fn negative_rate_rejected() {
        assert!(DissipatorTerm::new(sigma_minus(), -0.1).is_err());
        let bad = DissipatorTerm {
            operator: sigma_minus(),
            rate: -1.0,
        };
        assert!(dissipator_super(&bad).is_err());
    }

    #[test]
    fn amplitude_damping_relaxes_to_ground() {
        let l = dissipator_super(&DissipatorTerm::new(sigma_minus(), 1.0).unwrap()).unwrap();
        let rho = steady_state(&l).unwrap();
        assert!((rho.entry(0, 0).re - 1.0).abs() < 1e-12);
        assert!(rho.entry(1, 1).norm() < 1e-12);
    }

    #[test]
    fn identity_jump_is_zero() {
        let l = dissipator_super(&DissipatorTerm::new(CMatrix::identity(3), 2.0).unwrap()).unwrap();
        assert!(l.matrix().max_abs() < 1e-15);
    }

    #[test]
    fn dissipator_matches_matrix_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let o = ginibre(&mut rng, 3, 3);
        let rho = random_density(&mut rng, &[3]);
        let l = dissipator_super(&DissipatorTerm::new(o.clone(), 0.7).unwrap()).unwrap();
        let r = rho.matrix();
        let odo = &o.adjoint() * &o;
        let direct = &(&(&(&o * r) * &o.adjoint()).scale_real(2.0) - &(&odo * r)) - &(r * &odo);
        let direct = direct.scale_real(0.35);
        assert!((&l.apply(r) - &direct).max_abs() < 1e-12);
    }

    #[test]
    fn zero_liouvillian() {
        let l = liouvillian(&CMatrix::zeros(2, 2), &[], &[2]).unwrap();
        assert_eq!(l.matrix().max_abs(), 0.0);
        assert!(liouvillian(&CMatrix::zeros(2, 2), &[], &[3]).is_err());
    }

    #[test]
    fn hamiltonian_part_is_commutator() {
        let l = liouvillian(&sigma_z(), &[], &[2]).unwrap();
        let rho = plus_state();
        let expected = sigma_z().commutator(rho.matrix()).scale(-I);
        assert!((&l.apply(rho.matrix()) - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn trace_and_hermiticity_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let h = ginibre(&mut rng, 4, 4).hermitian_part();
        let terms: Vec<_> = (0..3)
            .map(|k| DissipatorTerm::new(ginibre(&mut rng, 4, 4), 0.3 * (k + 1) as f64).unwrap())
            .collect();
        let l = liouvillian(&h, &terms, &[2, 2]).unwrap();
        assert!(l.trace_defect() < 1e-9);
        for _ in 0..100 {
            let rho = random_density(&mut rng, &[2, 2]);
            let out = l.apply(rho.matrix());
            assert!(out.trace().norm() < 1e-10);
            assert!(out.is_hermitian(1e-10));
        }
    }

    #[test]
    fn steady_state_matches_rk4_for_driven_decay() {
        let l = decay_with_drive(0.2);
        let ss = steady_state(&l).unwrap();
        let rk = evolve_rk4(&DensityMatrix::basis_state(1, vec![2]).unwrap(), &l, 60.0, 0.01).unwrap();
        let diff = trace_norm_hermitian(&(rk.matrix() - ss.matrix())).unwrap();
        assert!(diff < 1e-6, "diff {diff:e}");
    }

    #[test]
    fn degenerate_steady_state_is_an_error() {
        // pure Hamiltonian dynamics: every diagonal state is stationary
        let l = liouvillian(&sigma_z(), &[], &[2]).unwrap();
        assert!(matches!(solve_steady_state(&l), Err(Error::Degenerate(_))));
    }

    #[test]
    fn rk4_trivial_and_rabi() {
        let rho = plus_state();
        let zero = Superoperator::zero(vec![2]);
        let still = evolve_rk4(&rho, &zero, 3.0, 0.1).unwrap();
        assert!((still.matrix() - rho.matrix()).max_abs() < 1e-15);

        // H = σ_z/2 rotates |+> into |-> after t = π
        let l = liouvillian(&sigma_z().scale_real(0.5), &[], &[2]).unwrap();
        let out = evolve_rk4(&rho, &l, std::f64::consts::PI, 1e-3).unwrap();
        let minus = CMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        assert!((out.matrix() - &minus).max_abs() < 1e-8);
    }

    #[test]
    fn rk4_rejects_bad_steps() {
        let rho = plus_state();
        let l = decay_with_drive(0.1);
        assert!(evolve_rk4(&rho, &l, 1.0, 0.0).is_err());
        assert!(evolve_rk4(&rho, &l, -1.0, 0.1).is_err());
        let stiff = liouvillian(
            &CMatrix::zeros(2, 2),
            &[DissipatorTerm::new(sigma_minus(), 1e4).unwrap()],
            &[2],
        )
        .unwrap();
        assert!(matches!(
            evolve_rk4(&DensityMatrix::basis_state(1, vec![2]).unwrap(), &stiff, 1.0, 0.1),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn operator_form_rk4_matches_superoperator_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = ginibre(&mut rng, 3, 3).hermitian_part();
        let terms = vec![
            DissipatorTerm::new(ginibre(&mut rng, 3, 3), 0.4).unwrap(),
            DissipatorTerm::new(ginibre(&mut rng, 3, 3), 0.1).unwrap(),
        ];
        let l = liouvillian(&h, &terms, &[3]).unwrap();
        let rho = random_density(&mut rng, &[3]);
        let dt = stable_rk4_step(&h, &terms);
        let a = evolve_rk4(&rho, &l, 2.0, dt).unwrap();
        let b = evolve_rk4_lindblad(&rho, &h, &terms, 2.0, dt).unwrap();
        assert!((a.matrix() - b.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn driven_vdp_relaxes_to_steady_state() {
        use crate::models::ModelSpec;
        let m = ModelSpec::default_for("driven_vdp").unwrap();
        let built = m.build().unwrap();
        let ss = steady_state(&built.liouvillian().unwrap()).unwrap();
        let vac = DensityMatrix::basis_state(0, built.dims.clone()).unwrap();
        let dt = stable_rk4_step(&built.hamiltonian, &built.terms);
        let t = 50.0 / m.reference_rate();
        let rk = evolve_rk4_lindblad(&vac, &built.hamiltonian, &built.terms, t, dt).unwrap();
        let diff = trace_norm_hermitian(&(rk.matrix() - ss.matrix())).unwrap();
        assert!(diff < 1e-6, "{diff:e}");
    }

    #[test]
    fn spectral_gap_examples() {
        let l = dissipator_super(&DissipatorTerm::new(sigma_minus(), 1.0).unwrap()).unwrap();
        assert!((spectral_gap(&l).unwrap() - 0.5).abs() < 1e-10);
        assert_eq!(spectral_gap(&Superoperator::zero(vec![2])).unwrap(), 0.0);
        let spin = crate::models::ModelSpec::from_params("driven_spin1", [("drive", 0.0), ("detuning", 0.0)]).unwrap();
        assert!(spectral_gap(&spin.liouvillian().unwrap()).unwrap() > 0.1);
    }
}
