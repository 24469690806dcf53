//! Entropies, coherence quantifiers, distances and phase-space diagnostics.
//!
//! Logarithms are natural throughout. A relative entropy with a support
//! violation is `f64::INFINITY`, not an error.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, SUPPORT_CUTOFF, ZERO};
use crate::ops::{boson_ops, expectation, DensityMatrix, STATE_TOL};

/// Probability vector: nonnegative entries summing to one within `STATE_TOL`.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationVector(Vec<f64>);

impl PopulationVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidState("empty population vector".into()));
        }
        if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < -STATE_TOL) {
            return Err(Error::InvalidState(format!("population {x} is negative or non-finite")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("populations sum to {total}")));
        }
        Ok(PopulationVector(p.into_iter().map(|x| x.max(0.0)).collect()))
    }

    /// Diagonal of a density matrix.
    pub fn of(rho: &DensityMatrix) -> Self {
        PopulationVector(rho.populations())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `−Σ p ln p` with `0 ln 0 = 0`; nonpositive entries are skipped.
pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>()
}

pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    shannon(&rho.eigenvalues())
}

fn same_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// `Tr ρ (ln ρ − ln σ)`, infinite when `ρ` has weight outside `supp σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(rho, sigma)?;
    let log = linalg::matrix_log_support(sigma.matrix(), SUPPORT_CUTOFF)?;
    let inside: f64 = (&log.projector * rho.matrix()).trace().re;
    if 1.0 - inside > SUPPORT_CUTOFF.sqrt() {
        return Ok(f64::INFINITY);
    }
    let cross = (rho.matrix() * &log.log).trace().re;
    Ok(-vn_entropy(rho) - cross)
}

/// Relative entropy of coherence `S(dephase ρ) − S(ρ)`.
pub fn s_coh(rho: &DensityMatrix) -> f64 {
    // exactly zero for incoherent states, where the eigensolver adds roundoff
    if rho.matrix().max_off_diagonal() == 0.0 {
        return 0.0;
    }
    (shannon(&rho.populations()) - vn_entropy(rho)).max(0.0)
}

/// `Σ_{j≠k} |ρ_jk|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let mut total = 0.0;
    for i in 0..m.rows() {
        for (j, z) in m.row(i).iter().enumerate() {
            if i != j {
                total += z.norm();
            }
        }
    }
    total
}

/// `Σ p ln(p/q)`, infinite when some `p_j > 0` meets `q_j = 0`.
pub fn kl_populations(p: &PopulationVector, q: &PopulationVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} populations", p.len(), q.len())));
    }
    let mut total = 0.0;
    for (&pj, &qj) in p.0.iter().zip(&q.0) {
        if pj > 0.0 {
            if qj <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += pj * (pj / qj).ln();
        }
    }
    Ok(total)
}

/// `‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(rho, sigma)?;
    linalg::trace_norm_hermitian(&(rho.matrix() - sigma.matrix()))
}

pub(crate) fn bipartite(rho: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected two subsystems, got dims {:?}",
            rho.dims()
        )));
    }
    Ok((rho.marginal(&[0])?, rho.marginal(&[1])?))
}

/// `S(ρ_A) + S(ρ_B) − S(ρ)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let (a, b) = bipartite(rho)?;
    Ok(vn_entropy(&a) + vn_entropy(&b) - vn_entropy(rho))
}

/// Mutual information of the dephased state.
pub fn classical_mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let (a, b) = bipartite(rho)?;
    let joint = shannon(&rho.populations());
    Ok((shannon(&a.populations()) + shannon(&b.populations()) - joint).max(0.0))
}

fn site_operator(rho: &DensityMatrix, site: usize) -> Result<DensityMatrix> {
    if site >= rho.dims().len() {
        return Err(Error::DimensionMismatch(format!(
            "site {site} out of range for dims {:?}",
            rho.dims()
        )));
    }
    if rho.dims().len() == 1 {
        Ok(rho.clone())
    } else {
        rho.marginal(&[site])
    }
}

/// `|⟨a⟩| / √⟨a†a⟩` on the oscillator at `site`; zero for an empty mode.
pub fn c1_measure(rho: &DensityMatrix, site: usize) -> Result<f64> {
    let local = site_operator(rho, site)?;
    let ops = boson_ops(local.dim())?;
    let n = expectation(&local, &ops.number)?.re;
    if n < 1e-14 {
        return Ok(0.0);
    }
    Ok(expectation(&local, &ops.a)?.norm() / n.sqrt())
}

pub const DEFAULT_N_THETA: usize = 181;
pub const DEFAULT_N_PHI: usize = 360;

/// Phase distribution of a spin-1 from its Husimi function,
/// `S(φ) = ∫₀^π sinθ Q(θ, φ) dθ − 1/(2π)` with
/// `Q = (3/4π) ⟨θ,φ|ρ|θ,φ⟩`, maximized over `n_phi` equally spaced angles.
/// The θ integral uses `n_theta`-point Gauss-Legendre quadrature.
pub fn s_phase_spin1(rho: &DensityMatrix, site: usize, n_theta: usize, n_phi: usize) -> Result<f64> {
    let curve = s_phase_curve(rho, site, n_theta, n_phi)?;
    Ok(curve.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `S(φ_k)` at `φ_k = 2πk / n_phi`.
pub fn s_phase_curve(rho: &DensityMatrix, site: usize, n_theta: usize, n_phi: usize) -> Result<Vec<f64>> {
    let local = site_operator(rho, site)?;
    if local.dim() != 3 {
        return Err(Error::DimensionMismatch(format!("site {site} has dimension {}, not 3", local.dim())));
    }
    let nodes = NonZeroUsize::new(n_theta).ok_or_else(|| Error::param("n_theta", "must be >= 1"))?;
    if n_phi == 0 {
        return Err(Error::param("n_phi", "must be >= 1"));
    }
    // |θ,φ> = Σ_m e^{i(1−m)φ} a_m(θ) |m>, basis index k = m + 1
    let amp = |theta: f64| {
        let (h_sin, h_cos) = (0.5 * theta).sin_cos();
        [h_sin * h_sin, theta.sin() / 2f64.sqrt(), h_cos * h_cos]
    };
    let rule = GaussLegendre::new(nodes);
    let mut moments = [[0.0f64; 3]; 3];
    for (j, row) in moments.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell = rule.integrate(0.0, PI, |t| {
                let a = amp(t);
                t.sin() * a[j] * a[k]
            });
        }
    }
    let norm = 3.0 / (4.0 * PI);
    Ok((0..n_phi)
        .map(|s| {
            let phi = 2.0 * PI * s as f64 / n_phi as f64;
            let mut total = 0.0;
            for (j, row) in moments.iter().enumerate() {
                for (k, &mjk) in row.iter().enumerate() {
                    let phase = C64::from_polar(1.0, (j as f64 - k as f64) * phi);
                    total += (local.entry(j, k) * phase).re * mjk;
                }
            }
            norm * total - 1.0 / (2.0 * PI)
        })
        .collect())
}

/// Wigner function on a rectangular grid (`values[ip][ix]` at `(xs[ix], ps[ip])`).
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    /// Set when the padded displacement operator lost more than `1e-10` of
    /// norm at some grid radius; values there are unreliable.
    pub truncation_warning: bool,
}

/// `W(α) = (2/π) Tr[ρ D(α) Π D(α)†]` at `α = x + i p`, so the vacuum is
/// `(2/π) exp(−2|α|²)` and the grid integrates to one over `dx dp`.
///
/// `D(r)` for real `r` is the exponential of `r (a† − a)` in a Fock space
/// padded beyond the state's cutoff; complex `α` follows by conjugating with
/// `e^{iφ a†a}`.
pub fn wigner_grid(rho: &DensityMatrix, site: usize, xs: &[f64], ps: &[f64]) -> Result<WignerGrid> {
    let local = site_operator(rho, site)?;
    let n = local.dim();
    if xs.iter().chain(ps).any(|v| !v.is_finite()) {
        return Err(Error::param("grid", "coordinates must be finite"));
    }
    let r_max = xs
        .iter()
        .flat_map(|x| ps.iter().map(move |p| x.hypot(*p)))
        .fold(0.0, f64::max);
    let m = n + (r_max * r_max + 10.0 * r_max + 20.0).ceil() as usize;

    // i(a† − a) is Hermitian; exp(r(a† − a)) = V diag(e^{−i r g}) V†
    let pad = boson_ops(m)?;
    let generator = (&pad.a_dag - &pad.a).scale(C64::new(0.0, 1.0));
    let eig = linalg::hermitian_eig(&generator)?;
    let v = &eig.vectors;
    let v_top = CMatrix::from_fn(n, m, |i, k| v[(i, k)]);
    let v_adj = v.adjoint();

    let mut cache: HashMap<u64, (CMatrix, bool)> = HashMap::new();
    let mut parity_at = |r: f64| -> (CMatrix, bool) {
        let key = r.to_bits();
        if let Some(hit) = cache.get(&key) {
            return hit.clone();
        }
        // rows 0..n of D(r): V_top · diag · V†
        let scaled = CMatrix::from_fn(n, m, |i, k| v_top[(i, k)] * C64::from_polar(1.0, -r * eig.values[k]));
        let d_top = &scaled * &v_adj;
        // columns of D(r) restricted to the first n rows: D(r)|k> for all k;
        // the displaced parity block needs Σ_k D_ik (−1)^k conj(D_jk)
        let mut b = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..m {
                    let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                    acc += d_top[(i, k)] * d_top[(j, k)].conj() * s;
                }
                b[(i, j)] = acc;
            }
        }
        // norm lost from D(r)^† |i> for i < n: rows of the unitary block
        let lost = (0..n)
            .map(|i| 1.0 - (0..m).map(|k| d_top[(i, k)].norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max);
        let tail = (0..n)
            .map(|i| (m.saturating_sub(4)..m).map(|k| d_top[(i, k)].norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max);
        let entry = (b, lost.abs() > 1e-10 || tail > 1e-10);
        cache.insert(key, entry.clone());
        entry
    };

    let rho_m = local.matrix();
    let mut warning = false;
    let mut values = Vec::with_capacity(ps.len());
    for &p in ps {
        let mut row = Vec::with_capacity(xs.len());
        for &x in xs {
            let r = x.hypot(p);
            let phi = p.atan2(x);
            let (b, warn) = parity_at(r);
            warning |= warn;
            // Tr[R† ρ R B] with R = diag(e^{iφ k})
            let mut acc = ZERO;
            for i in 0..n {
                for j in 0..n {
                    let phase = C64::from_polar(1.0, phi * (j as f64 - i as f64));
                    acc += rho_m[(i, j)] * phase * b[(j, i)];
                }
            }
            row.push(2.0 / PI * acc.re);
        }
        values.push(row);
    }
    Ok(WignerGrid {
        xs: xs.to_vec(),
        ps: ps.to_vec(),
        values,
        truncation_warning: warning,
    })
}

/// `count` equally spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![min],
        _ => (0..count)
            .map(|k| {
                if k == count - 1 {
                    max
                } else {
                    min + (max - min) * k as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Trapezoidal integral of a grid over `dx dp`.
pub fn integrate_grid(grid: &WignerGrid) -> f64 {
    let weights = |v: &[f64]| -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|k| {
                let left = if k > 0 { v[k] - v[k - 1] } else { 0.0 };
                let right = if k + 1 < n { v[k + 1] - v[k] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect()
    };
    let (wx, wp) = (weights(&grid.xs), weights(&grid.ps));
    grid.values
        .iter()
        .zip(&wp)
        .map(|(row, w)| w * row.iter().zip(&wx).map(|(v, u)| v * u).sum::<f64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::ops::dephase;
    use crate::random::{dirichlet, random_density, random_ket};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::LN_2;

    fn plus() -> DensityMatrix {
        DensityMatrix::single(CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap()
    }

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::diagonal(p, vec![p.len()]).unwrap()
    }

    fn bell() -> DensityMatrix {
        let s = C64::new(0.5f64.sqrt(), 0.0);
        DensityMatrix::pure(&[s, ZERO, ZERO, s], vec![2, 2]).unwrap()
    }

    fn product(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new(kron(a.matrix(), b.matrix()), vec![a.dim(), b.dim()]).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!(vn_entropy(&plus()).abs() < 1e-14);
        assert!((vn_entropy(&diag(&[0.5, 0.5])) - LN_2).abs() < 1e-14);
        let h = -0.25 * 0.25f64.ln() - 0.75 * 0.75f64.ln();
        assert!((vn_entropy(&diag(&[0.25, 0.75])) - h).abs() < 1e-14);
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(&mut rng, &[3]);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        assert!((relative_entropy(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5])).unwrap() - LN_2).abs() < 1e-14);
        assert_eq!(relative_entropy(&diag(&[0.5, 0.5]), &diag(&[1.0, 0.0])).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&rho, &diag(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(s_coh(&diag(&[0.2, 0.8])), 0.0);
        assert!((s_coh(&plus()) - LN_2).abs() < 1e-14);
        assert_eq!(l1_coherence(&diag(&[0.2, 0.8])), 0.0);
        assert!((l1_coherence(&plus()) - 1.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density(&mut rng, &[4]);
        let mut looped = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                if j != k {
                    looped += rho.entry(j, k).norm();
                }
            }
        }
        assert!((l1_coherence(&rho) - looped).abs() < 1e-14);
        let via_rel = relative_entropy(&rho, &dephase(&rho)).unwrap();
        assert!((s_coh(&rho) - via_rel).abs() < 1e-10);
    }

    #[test]
    fn kl_examples() {
        let p = PopulationVector::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(kl_populations(&p, &p).unwrap(), 0.0);
        let one = PopulationVector::new(vec![1.0, 0.0]).unwrap();
        let half = PopulationVector::new(vec![0.5, 0.5]).unwrap();
        assert!((kl_populations(&one, &half).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(kl_populations(&half, &one).unwrap(), f64::INFINITY);
        assert!(PopulationVector::new(vec![0.5, 0.6]).is_err());
        assert!(PopulationVector::new(vec![1.1, -0.1]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (a, b) = (dirichlet(&mut rng, 5), dirichlet(&mut rng, 5));
        let kl = kl_populations(&PopulationVector::new(a.clone()).unwrap(), &PopulationVector::new(b.clone()).unwrap());
        let rel = relative_entropy(&diag(&a), &diag(&b)).unwrap();
        assert!((kl.unwrap() - rel).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_examples() {
        let rho = plus();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-14);
        assert!((trace_distance(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn mutual_information_examples() {
        let a = diag(&[0.3, 0.7]);
        assert!(mutual_information(&product(&a, &plus())).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell()).unwrap() - 2.0 * LN_2).abs() < 1e-12);
        assert!(mutual_information(&a).is_err());

        let classical = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], vec![2, 2]).unwrap();
        assert!((classical_mutual_information(&classical).unwrap() - LN_2).abs() < 1e-14);
        assert!(classical_mutual_information(&product(&a, &diag(&[0.1, 0.9]))).unwrap().abs() < 1e-14);
    }

    #[test]
    fn c1_examples() {
        assert_eq!(c1_measure(&diag(&[0.2, 0.3, 0.5]), 0).unwrap(), 0.0);
        // coherent state |α>, α = 0.8, in 30 Fock levels
        let alpha: f64 = 0.8;
        let mut psi = Vec::new();
        let mut coef = (-alpha * alpha / 2.0).exp();
        for k in 0..30 {
            if k > 0 {
                coef *= alpha / (k as f64).sqrt();
            }
            psi.push(C64::new(coef, 0.0));
        }
        let rho = DensityMatrix::pure(&psi, vec![30]).unwrap();
        assert!((c1_measure(&rho, 0).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn s_phase_of_diagonal_states_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let p = dirichlet(&mut rng, 3);
            let v = s_phase_spin1(&diag(&p), 0, DEFAULT_N_THETA, DEFAULT_N_PHI).unwrap();
            assert!(v.abs() < 1e-10, "{v:e}");
        }
    }

    #[test]
    fn s_phase_grows_with_coherence() {
        let values: Vec<f64> = [0.05, 0.1, 0.2]
            .iter()
            .map(|&c| {
                let mut m = CMatrix::from_diag(&[0.2, 0.4, 0.4]);
                m[(1, 2)] = C64::new(c, 0.0);
                m[(2, 1)] = C64::new(c, 0.0);
                s_phase_spin1(&DensityMatrix::single(m).unwrap(), 0, DEFAULT_N_THETA, DEFAULT_N_PHI).unwrap()
            })
            .collect();
        assert!(values[0] > 0.0 && values[0] < values[1] && values[1] < values[2], "{values:?}");
    }

    #[test]
    fn s_phase_quadrature_is_resolved() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_density(&mut rng, &[3]);
        let coarse = s_phase_curve(&rho, 0, DEFAULT_N_THETA, 8).unwrap();
        let fine = s_phase_curve(&rho, 0, 2 * DEFAULT_N_THETA, 8).unwrap();
        assert!(coarse.iter().zip(&fine).all(|(a, b)| (a - b).abs() < 1e-12));
        // the Husimi function is normalized over the sphere
        let total: f64 = s_phase_curve(&rho, 0, 64, 64).unwrap().iter().sum::<f64>() * 2.0 * PI / 64.0;
        assert!(total.abs() < 1e-12, "{total:e}");
    }

    #[test]
    fn wigner_of_vacuum() {
        let vac = DensityMatrix::basis_state(0, vec![6]).unwrap();
        let g = wigner_grid(&vac, 0, &[0.0, 0.5], &[0.0, -0.3]).unwrap();
        assert!((g.values[0][0] - 2.0 / PI).abs() < 1e-6);
        let expected = 2.0 / PI * (-2.0 * (0.25 + 0.09f64)).exp();
        assert!((g.values[1][1] - expected).abs() < 1e-9);
        assert!(!g.truncation_warning);
    }

    #[test]
    fn wigner_of_fock_state_is_rotation_invariant() {
        let one = DensityMatrix::basis_state(1, vec![4]).unwrap();
        let r: f64 = 0.7;
        let g = wigner_grid(&one, 0, &[r, 0.0, -r / 2f64.sqrt()], &[0.0, r, r / 2f64.sqrt()]).unwrap();
        // W_1(α) = −(2/π)(1 − 4|α|²) e^{−2|α|²}
        let exact = -(2.0 / PI) * (1.0 - 4.0 * r * r) * (-2.0 * r * r).exp();
        for (ip, row) in g.values.iter().enumerate() {
            assert!((row[ip] - exact).abs() < 1e-9, "{} vs {exact}", row[ip]);
        }
    }

    #[test]
    fn wigner_integrates_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density(&mut rng, &[4]);
        let axis = linspace(-4.5, 4.5, 61);
        let g = wigner_grid(&rho, 0, &axis, &axis).unwrap();
        assert!((integrate_grid(&g) - 1.0).abs() < 0.02);
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(-2.0, 2.0, 5), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(linspace(0.3, 0.7, 1), vec![0.3]);
    }

    fn state_strategy(dims: Vec<usize>) -> impl Strategy<Value = DensityMatrix> {
        any::<u64>().prop_map(move |seed| random_density(&mut ChaCha8Rng::seed_from_u64(seed), &dims))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn relative_entropy_decomposes_over_diagonal_references(rho in state_strategy(vec![4]), seed in any::<u64>()) {
            let q = dirichlet(&mut ChaCha8Rng::seed_from_u64(seed), 4);
            let sigma = diag(&q);
            let lhs = relative_entropy(&rho, &sigma).unwrap();
            let kl = kl_populations(&PopulationVector::of(&rho), &PopulationVector::new(q).unwrap()).unwrap();
            prop_assert!((lhs - s_coh(&rho) - kl).abs() < 1e-10);
        }

        #[test]
        fn relative_entropy_nonnegative_and_faithful(rho in state_strategy(vec![3]), sigma in state_strategy(vec![3])) {
            let s = relative_entropy(&rho, &sigma).unwrap();
            prop_assert!(s >= -1e-10);
            let close = trace_distance(&rho, &sigma).unwrap() < 1e-8;
            prop_assert_eq!(s.abs() < 1e-12, close);
        }

        #[test]
        fn mutual_information_is_relative_entropy_to_marginals(rho in state_strategy(vec![2, 3])) {
            let (a, b) = bipartite(&rho).unwrap();
            let rel = relative_entropy(&rho, &product(&a, &b)).unwrap();
            prop_assert!((mutual_information(&rho).unwrap() - rel).abs() < 1e-10);
            let rel_diag = relative_entropy(&rho, &product(&dephase(&a), &dephase(&b))).unwrap();
            let split = s_coh(&rho) + classical_mutual_information(&rho).unwrap();
            prop_assert!((split - rel_diag).abs() < 1e-10);
        }

        #[test]
        fn trace_distance_bounded_by_entrywise_sums(rho in state_strategy(vec![3]), sigma in state_strategy(vec![3])) {
            let mut bound = 0.0;
            for j in 0..3 {
                for k in 0..3 {
                    bound += (rho.entry(j, k) - sigma.entry(j, k)).norm();
                }
            }
            prop_assert!(trace_distance(&rho, &sigma).unwrap() <= bound + 1e-12);
        }

        #[test]
        fn coherence_measures_vanish_together(seed in any::<u64>(), mix in 0.01f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_density(&mut rng, &[3]);
            let partly = DensityMatrix::new(
                &dephase(&rho).matrix().scale_real(1.0 - mix) + &rho.matrix().scale_real(mix),
                vec![3],
            ).unwrap();
            let d = dephase(&partly);
            prop_assert_eq!(s_coh(&d), 0.0);
            prop_assert_eq!(l1_coherence(&d), 0.0);
            prop_assert!(s_coh(&partly) > 0.0);
            prop_assert!(l1_coherence(&partly) > 0.0);
        }

        #[test]
        fn pure_state_entropy_vanishes(seed in any::<u64>()) {
            let psi = random_ket(&mut ChaCha8Rng::seed_from_u64(seed), 5);
            let rho = DensityMatrix::pure(&psi, vec![5]).unwrap();
            prop_assert!(vn_entropy(&rho).abs() < 1e-10);
        }
    }
}
