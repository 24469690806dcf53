//! Relative-entropy (`Ω_R`) and trace-distance (`Ω_D`) synchronization
//! measures: the distance from a steady state to the closest member of a
//! family of limit-cycle states.
//!
//! Closed forms by family:
//! - diagonal, possibly correlated: `Ω_R = S_coh(ρ)`;
//! - diagonal product: `Ω_R = S_coh(ρ) + I_c(ρ)`;
//! - arbitrary product: `Ω_R = I(A:B)`;
//! - partially coherent product: `Ω_R = −S(ρ) − ω_A − ω_B`, where
//!   `ω_α = max Tr ρ_α ln σ_α` over qutrit states whose only coherence is on
//!   one declared level pair.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, CMatrix, C64};
use crate::measures::{
    bipartite, classical_mutual_information, l1_coherence, mutual_information, relative_entropy, s_coh, shannon,
    vn_entropy,
};
use crate::ops::{dephase, DensityMatrix};
use crate::optimize::{nelder_mead_max_2d, project_simplex};
use crate::random::{dirichlet, random_unitary};

/// Family of limit-cycle reference states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum LimitCycleClass {
    /// Any state diagonal in the composite energy basis.
    DiagonalCorrelated,
    /// Products of diagonal single-subsystem states.
    DiagonalProduct,
    /// Products of arbitrary single-subsystem states.
    MarginalProduct,
    /// Products of qutrit states with coherence only on `pairs[α]` (0-based
    /// basis indices) of subsystem `α`.
    PartiallyCoherentProduct { pairs: Vec<(usize, usize)> },
}

impl LimitCycleClass {
    /// The driven-transition family for two spin-1 atoms: coherence between
    /// `m = 0` and `m = +1` on each side.
    pub fn spin_pair_default() -> Self {
        LimitCycleClass::PartiallyCoherentProduct {
            pairs: vec![(1, 2), (1, 2)],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            LimitCycleClass::DiagonalCorrelated => "diagonal_correlated",
            LimitCycleClass::DiagonalProduct => "diagonal_product",
            LimitCycleClass::MarginalProduct => "marginal_product",
            LimitCycleClass::PartiallyCoherentProduct { .. } => "partially_coherent_product",
        }
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        match self {
            LimitCycleClass::DiagonalCorrelated => Ok(()),
            LimitCycleClass::DiagonalProduct | LimitCycleClass::MarginalProduct => {
                if rho.dims().len() == 2 {
                    Ok(())
                } else {
                    Err(Error::ClassMismatch(format!(
                        "{} needs two subsystems, state has dims {:?}",
                        self.label(),
                        rho.dims()
                    )))
                }
            }
            LimitCycleClass::PartiallyCoherentProduct { pairs } => {
                if rho.dims() != [3, 3] {
                    return Err(Error::ClassMismatch(format!(
                        "partially coherent class needs two qutrits, state has dims {:?}",
                        rho.dims()
                    )));
                }
                if pairs.len() != 2 {
                    return Err(Error::ClassMismatch(format!(
                        "expected one coherent pair per subsystem, got {}",
                        pairs.len()
                    )));
                }
                for &pair in pairs {
                    check_pair(pair)?;
                }
                Ok(())
            }
        }
    }
}

fn check_pair((a, b): (usize, usize)) -> Result<usize> {
    if a >= 3 || b >= 3 || a == b {
        return Err(Error::ClassMismatch(format!(
            "coherent pair ({a}, {b}) must name two distinct qutrit levels"
        )));
    }
    Ok(3 - a - b)
}

/// Optimizer state for one partially coherent qutrit
/// `σ = U diag(q) U†`, `U = 1 ⊕ e^{−iθ₁σ_z} e^{−iθ₂σ_x} e^{−iθ₃σ_z}`.
///
/// `q[0]` sits on the incoherent level, `q[1]` and `q[2]` on `pair.0` and
/// `pair.1`, which span the subspace the 2x2 block of `U` acts on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialCoherentParams {
    pub q: [f64; 3],
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub pair: (usize, usize),
    /// The incoherent level carries all population; angles are arbitrary.
    pub degenerate: bool,
}

impl PartialCoherentParams {
    fn levels(&self) -> [usize; 3] {
        let (a, b) = self.pair;
        [3 - a - b, a, b]
    }

    /// The 3x3 unitary `1 ⊕ u`.
    pub fn unitary(&self) -> CMatrix {
        let (c, s) = (self.theta2.cos(), self.theta2.sin());
        let (t1, t3) = (self.theta1, self.theta3);
        let e = |x: f64| C64::from_polar(1.0, x);
        let u = [
            [e(-(t1 + t3)) * c, C64::new(0.0, -1.0) * e(-(t1 - t3)) * s],
            [C64::new(0.0, -1.0) * e(t1 - t3) * s, e(t1 + t3) * c],
        ];
        let [k, a, b] = self.levels();
        let mut full = CMatrix::zeros(3, 3);
        full[(k, k)] = C64::new(1.0, 0.0);
        full[(a, a)] = u[0][0];
        full[(a, b)] = u[0][1];
        full[(b, a)] = u[1][0];
        full[(b, b)] = u[1][1];
        full
    }

    /// The limit-cycle state `U diag(q) U†`.
    pub fn state(&self) -> Result<DensityMatrix> {
        let [k, a, b] = self.levels();
        let mut pops = [0.0; 3];
        pops[k] = self.q[0];
        pops[a] = self.q[1];
        pops[b] = self.q[2];
        let u = self.unitary();
        let m = &(&u * &CMatrix::from_diag(&pops)) * &u.adjoint();
        DensityMatrix::new(m.hermitian_part(), vec![3])
    }

    /// `Σ_k ⟨k|U† ρ U|k⟩ ln q_k` evaluated directly from the matrices.
    pub fn objective(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.dim() != 3 {
            return Err(Error::DimensionMismatch(format!("expected a qutrit, got dimension {}", rho.dim())));
        }
        let u = self.unitary();
        let rotated = &(&u.adjoint() * rho.matrix()) * &u;
        let [k, a, b] = self.levels();
        Ok([k, a, b]
            .iter()
            .zip(self.q)
            .map(|(&lvl, q)| xlny(rotated[(lvl, lvl)].re.max(0.0), q))
            .sum())
    }
}

/// `x ln y` with `0 ln 0 = 0`.
fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Result of a synchronization-measure evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaResult {
    pub value: f64,
    pub class: LimitCycleClass,
    /// Per-subsystem `ω_α` optimizers for the partially coherent class.
    pub optimizer_state: Option<Vec<PartialCoherentParams>>,
    /// `oracle minimum − value` when an oracle was run.
    pub certificate: Option<f64>,
}

/// Grid resolution per axis for the `ω_α` search.
pub const OMEGA_ALPHA_GRID: usize = 64;
/// Parameter tolerance of the `ω_α` refinement.
pub const OMEGA_ALPHA_TOL: f64 = 1e-8;

/// Level populations and coherence of a qutrit ordered as
/// (incoherent, pair.0, pair.1).
struct PairView {
    r11: f64,
    r22: f64,
    r33: f64,
    r23: C64,
}

fn pair_view(rho: &DensityMatrix, pair: (usize, usize)) -> Result<PairView> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch(format!("expected a qutrit, got dimension {}", rho.dim())));
    }
    let k = check_pair(pair)?;
    let (a, b) = pair;
    Ok(PairView {
        r11: rho.entry(k, k).re,
        r22: rho.entry(a, a).re,
        r33: rho.entry(b, b).re,
        r23: rho.entry(a, b),
    })
}

/// `ω_α = max_σ Tr ρ ln σ` over qutrit states coherent only on `pair`.
///
/// With `q₁ = ρ₁₁` and `θ₁` chosen so the coherence enters with its full
/// modulus, what remains is
/// `ρ₁₁ ln ρ₁₁ + max_{q₂,θ₂} { A ln q₂ + B ln(1 − ρ₁₁ − q₂) }` with
/// `A = cos²θ₂ ρ₂₂ + sin²θ₂ ρ₃₃ + sin 2θ₂ |ρ₂₃|`, `B = ρ₂₂ + ρ₃₃ − A`,
/// searched on a 64x64 grid over `(0, 1 − ρ₁₁) x [0, π)` and refined with a
/// bounded simplex search. Grid ties go to the smallest `(q₂, θ₂)` cell.
pub fn omega_alpha(rho_alpha: &DensityMatrix, pair: (usize, usize)) -> Result<(f64, PartialCoherentParams)> {
    let v = pair_view(rho_alpha, pair)?;
    let s = 1.0 - v.r11;
    if s <= 1e-12 {
        let params = PartialCoherentParams {
            q: [1.0, 0.0, 0.0],
            theta1: 0.0,
            theta2: 0.0,
            theta3: 0.0,
            pair,
            degenerate: true,
        };
        return Ok((0.0, params));
    }
    let (r22, r33) = (v.r22.max(0.0), v.r33.max(0.0));
    let m23 = v.r23.norm();
    let base = xlny(v.r11, v.r11);
    let reduced = |p: [f64; 2]| -> f64 {
        let (q2, t2) = (p[0], p[1]);
        let (sn, cs) = t2.sin_cos();
        let a = (cs * cs * r22 + sn * sn * r33 + (2.0 * t2).sin() * m23).max(0.0);
        let b = (sn * sn * r22 + cs * cs * r33 - (2.0 * t2).sin() * m23).max(0.0);
        xlny(a, q2) + xlny(b, s - q2)
    };

    let n = OMEGA_ALPHA_GRID;
    let (dq, dt) = (s / n as f64, PI / n as f64);
    let mut best = ([dq * 0.5, 0.0], f64::NEG_INFINITY);
    for i in 0..n {
        for j in 0..n {
            let p = [dq * (i as f64 + 0.5), dt * j as f64];
            let val = reduced(p);
            if val > best.1 {
                best = (p, val);
            }
        }
    }
    let lo = [s * 1e-15, best.0[1] - dt];
    let hi = [s * (1.0 - 1e-15), best.0[1] + dt];
    let (refined, val) = nelder_mead_max_2d(reduced, best.0, [0.5 * dq, 0.5 * dt], lo, hi, OMEGA_ALPHA_TOL, 10_000);
    let (p, val) = if val >= best.1 { (refined, val) } else { best };

    let phi = v.r23.arg();
    let params = PartialCoherentParams {
        q: [v.r11, p[0], s - p[0]],
        theta1: (PI / 4.0 - phi / 2.0).rem_euclid(2.0 * PI),
        theta2: p[1].rem_euclid(PI),
        theta3: 0.0,
        pair,
        degenerate: false,
    };
    Ok((base + val, params))
}

/// Independent cross-check for [`omega_alpha`]: the maximum equals
/// `ρ₁₁ ln ρ₁₁ + Σ λ ln λ` over the eigenvalues of the 2x2 block on `pair`.
pub fn omega_alpha_eigen(rho_alpha: &DensityMatrix, pair: (usize, usize)) -> Result<f64> {
    let v = pair_view(rho_alpha, pair)?;
    let block = CMatrix::from_row_major(2, 2, vec![C64::new(v.r22, 0.0), v.r23, v.r23.conj(), C64::new(v.r33, 0.0)])?;
    let lambdas = linalg::hermitian_eigenvalues(&block)?;
    Ok(xlny(v.r11, v.r11) + lambdas.iter().map(|&l| xlny(l.max(0.0), l.max(0.0))).sum::<f64>())
}

/// Exhaustive `n³` grid over `(q₂, θ₁, θ₂)` of the unreduced objective with
/// `q₁ = ρ₁₁`, evaluated through explicit unitaries.
pub fn omega_alpha_brute_force(rho_alpha: &DensityMatrix, pair: (usize, usize), n: usize) -> Result<f64> {
    let v = pair_view(rho_alpha, pair)?;
    let s = 1.0 - v.r11;
    if s <= 1e-12 {
        return Ok(0.0);
    }
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let q2 = s * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            for k in 0..n {
                let params = PartialCoherentParams {
                    q: [v.r11, q2, s - q2],
                    theta1: PI * j as f64 / n as f64,
                    theta2: PI * k as f64 / n as f64,
                    theta3: 0.0,
                    pair,
                    degenerate: false,
                };
                best = best.max(params.objective(rho_alpha)?);
            }
        }
    }
    Ok(best)
}

/// Relative entropy of synchronization for `class`.
pub fn omega_r(rho: &DensityMatrix, class: &LimitCycleClass) -> Result<OmegaResult> {
    class.check(rho)?;
    let mut optimizer_state = None;
    let value = match class {
        LimitCycleClass::DiagonalCorrelated => s_coh(rho),
        LimitCycleClass::DiagonalProduct => s_coh(rho) + classical_mutual_information(rho)?,
        LimitCycleClass::MarginalProduct => mutual_information(rho)?,
        LimitCycleClass::PartiallyCoherentProduct { pairs } => {
            let (a, b) = bipartite(rho)?;
            let (wa, pa) = omega_alpha(&a, pairs[0])?;
            let (wb, pb) = omega_alpha(&b, pairs[1])?;
            optimizer_state = Some(vec![pa, pb]);
            -vn_entropy(rho) - wa - wb
        }
    };
    Ok(OmegaResult {
        value,
        class: class.clone(),
        optimizer_state,
        certificate: None,
    })
}

/// The minimizing limit-cycle state implied by the closed form.
pub fn closed_form_minimizer(rho: &DensityMatrix, class: &LimitCycleClass) -> Result<DensityMatrix> {
    class.check(rho)?;
    let dims = rho.dims().to_vec();
    let product = |a: &DensityMatrix, b: &DensityMatrix| DensityMatrix::new(kron(a.matrix(), b.matrix()), dims.clone());
    match class {
        LimitCycleClass::DiagonalCorrelated => Ok(dephase(rho)),
        LimitCycleClass::DiagonalProduct => {
            let (a, b) = bipartite(rho)?;
            product(&dephase(&a), &dephase(&b))
        }
        LimitCycleClass::MarginalProduct => {
            let (a, b) = bipartite(rho)?;
            product(&a, &b)
        }
        LimitCycleClass::PartiallyCoherentProduct { .. } => {
            let result = omega_r(rho, class)?;
            let params = result.optimizer_state.expect("partially coherent result carries its optimizer");
            let sa = params[0].state()?;
            let sb = params[1].state()?;
            product(&sa, &sb)
        }
    }
}

/// `Tr ρ ln σ` for a sampled limit-cycle state, using its product or
/// diagonal structure.
enum Sample {
    Diagonal(Vec<f64>),
    Product(DensityMatrix, DensityMatrix),
}

fn draw(rng: &mut ChaCha8Rng, rho: &DensityMatrix, class: &LimitCycleClass) -> Result<Sample> {
    let dims = rho.dims();
    let local = |rng: &mut ChaCha8Rng, d: usize, coherent: Option<(usize, usize)>| -> Result<DensityMatrix> {
        let q = dirichlet(rng, d);
        let u = match coherent {
            None => random_unitary(rng, d),
            Some((a, b)) => {
                let small = random_unitary(rng, 2);
                let mut full = CMatrix::identity(d);
                full[(a, a)] = small[(0, 0)];
                full[(a, b)] = small[(0, 1)];
                full[(b, a)] = small[(1, 0)];
                full[(b, b)] = small[(1, 1)];
                full
            }
        };
        let m = &(&u * &CMatrix::from_diag(&q)) * &u.adjoint();
        DensityMatrix::new(m.hermitian_part(), vec![d])
    };
    Ok(match class {
        LimitCycleClass::DiagonalCorrelated => Sample::Diagonal(dirichlet(rng, rho.dim())),
        LimitCycleClass::DiagonalProduct => {
            let qa = dirichlet(rng, dims[0]);
            let qb = dirichlet(rng, dims[1]);
            Sample::Product(DensityMatrix::diagonal(&qa, vec![dims[0]])?, DensityMatrix::diagonal(&qb, vec![dims[1]])?)
        }
        LimitCycleClass::MarginalProduct => Sample::Product(local(rng, dims[0], None)?, local(rng, dims[1], None)?),
        LimitCycleClass::PartiallyCoherentProduct { pairs } => {
            Sample::Product(local(rng, 3, Some(pairs[0]))?, local(rng, 3, Some(pairs[1]))?)
        }
    })
}

fn cross_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    // Tr ρ ln σ, or −∞ on a support violation
    let s = relative_entropy(rho, sigma)?;
    Ok(-vn_entropy(rho) - s)
}

/// Smallest `S(ρ‖σ)` over `samples` random members of `class`. Product
/// classes draw single products (Dirichlet populations, Haar unitaries on
/// the allowed subspaces); deterministic in `seed`.
pub fn oracle_min(rho: &DensityMatrix, class: &LimitCycleClass, samples: usize, seed: u64) -> Result<f64> {
    oracle_min_with(rho, class, samples, seed, &[])
}

/// [`oracle_min`] with extra candidate states appended to the sample set.
pub fn oracle_min_with(
    rho: &DensityMatrix,
    class: &LimitCycleClass,
    samples: usize,
    seed: u64,
    extra: &[DensityMatrix],
) -> Result<f64> {
    class.check(rho)?;
    if samples == 0 {
        return Err(Error::param("samples", "must be >= 1"));
    }
    let s_rho = vn_entropy(rho);
    let pops = rho.populations();
    let marginals = match class {
        LimitCycleClass::DiagonalCorrelated => None,
        _ => Some(bipartite(rho)?),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let cross = match draw(&mut rng, rho, class)? {
            Sample::Diagonal(q) => pops
                .iter()
                .zip(&q)
                .map(|(&p, &qj)| if p > 0.0 { p * qj.ln() } else { 0.0 })
                .sum::<f64>(),
            Sample::Product(sa, sb) => {
                let (ra, rb) = marginals.as_ref().expect("product classes carry marginals");
                cross_entropy(ra, &sa)? + cross_entropy(rb, &sb)?
            }
        };
        best = best.min(-s_rho - cross);
    }
    for sigma in extra {
        best = best.min(relative_entropy(rho, sigma)?);
    }
    Ok(best)
}

/// Attaches `oracle_min − value` to `result`.
pub fn certify(rho: &DensityMatrix, result: &mut OmegaResult, samples: usize, seed: u64) -> Result<()> {
    let oracle = oracle_min(rho, &result.class, samples, seed)?;
    result.certificate = Some(oracle - result.value);
    Ok(())
}

/// Projected-subgradient iterations for `Ω_D`.
pub const OMEGA_D_ITERATIONS: usize = 2000;
const OMEGA_D_CERTIFICATE_SAMPLES: usize = 256;

fn diag_distance(rho: &CMatrix, q: &[f64]) -> Result<(f64, Vec<f64>)> {
    let mut x = rho.clone();
    for (j, &qj) in q.iter().enumerate() {
        x[(j, j)] -= C64::new(qj, 0.0);
    }
    let eig = linalg::hermitian_eig(&x)?;
    let value = eig.values.iter().map(|l| l.abs()).sum();
    // ∂/∂q_j ‖ρ − diag q‖₁ = −Σ_i sign(λ_i) |V_ji|²
    let grad = (0..q.len())
        .map(|j| {
            -eig.values
                .iter()
                .enumerate()
                .map(|(i, &l)| if l == 0.0 { 0.0 } else { l.signum() * eig.vectors[(j, i)].norm_sqr() })
                .sum::<f64>()
        })
        .collect();
    Ok((value, grad))
}

fn subgradient_descent(rho: &CMatrix, q0: &[f64]) -> Result<(f64, Vec<f64>)> {
    let (f0, mut grad) = diag_distance(rho, q0)?;
    let mut best = (f0, q0.to_vec());
    if f0 == 0.0 {
        return Ok(best);
    }
    let scale = 0.5 * f0;
    let mut q = q0.to_vec();
    for k in 1..=OMEGA_D_ITERATIONS {
        // remove the component that leaves the simplex plane
        let mean = grad.iter().sum::<f64>() / grad.len() as f64;
        let g: Vec<f64> = grad.iter().map(|x| x - mean).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        let step = scale / (k as f64).sqrt() / norm;
        let trial: Vec<f64> = q.iter().zip(&g).map(|(a, b)| a - step * b).collect();
        q = project_simplex(&trial);
        let (f, next) = diag_distance(rho, &q)?;
        if f < best.0 {
            best = (f, q.clone());
        }
        grad = next;
    }
    Ok(best)
}

/// Trace-distance synchronization `min_q ‖ρ − diag(q)‖₁` (diagonal class
/// only). The descent runs on both `ρ` and `ρ*`, which share the minimum,
/// and keeps the better value so `Ω_D(ρ*) = Ω_D(ρ)` holds exactly; the
/// certificate compares against random and locally perturbed populations.
pub fn omega_d(rho: &DensityMatrix, class: &LimitCycleClass) -> Result<OmegaResult> {
    if *class != LimitCycleClass::DiagonalCorrelated {
        return Err(Error::ClassMismatch(format!(
            "trace-distance measure is implemented for the diagonal class only, got {}",
            class.label()
        )));
    }
    let m = rho.matrix();
    let q0 = rho.populations();
    let direct = subgradient_descent(m, &q0)?;
    let mirrored = subgradient_descent(&m.conj(), &q0)?;
    let (value, q_best) = if mirrored.0 < direct.0 { mirrored } else { direct };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut sampled = f64::INFINITY;
    for k in 0..OMEGA_D_CERTIFICATE_SAMPLES {
        let q = if k % 2 == 0 {
            dirichlet(&mut rng, q0.len())
        } else {
            let width = 1e-3 * value.max(1e-12);
            let trial: Vec<f64> = q_best.iter().map(|x| x + width * (rng.random::<f64>() - 0.5)).collect();
            project_simplex(&trial)
        };
        sampled = sampled.min(diag_distance(m, &q)?.0);
    }
    Ok(OmegaResult {
        value,
        class: class.clone(),
        optimizer_state: None,
        certificate: Some(sampled - value),
    })
}

/// `Ω_D` bounds: `C_l1(ρ)` and `‖ρ − dephase ρ‖₁`.
pub fn omega_d_upper_bounds(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let dephased = dephase(rho);
    Ok((l1_coherence(rho), linalg::trace_norm_hermitian(&(rho.matrix() - dephased.matrix()))?))
}

/// Shannon entropy of the populations; exported for the diagonal-ansatz
/// comparison of `ω_α`.
pub fn diagonal_ansatz_omega(rho_alpha: &DensityMatrix) -> f64 {
    -shannon(&rho_alpha.populations())
}
