//! Seeded random states, unitaries and simplex points for oracles and tests.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{CMatrix, C64, ZERO};
use crate::ops::DensityMatrix;

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Full-rank mixed state `G G^dag / Tr(G G^dag)`.
pub fn random_density(rng: &mut impl Rng, dims: &[usize]) -> DensityMatrix {
    let d: usize = dims.iter().product();
    let g = ginibre(rng, d, d);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    let m = m.scale_real(1.0 / tr).hermitian_part();
    DensityMatrix::new(m, dims.to_vec()).expect("Ginibre state is valid")
}

/// Haar unitary from the QR (Gram-Schmidt) of a Ginibre matrix, with the
/// diagonal phases of R absorbed.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for prev in done.iter() {
            let proj: C64 = prev.iter().zip(col.iter()).map(|(p, c)| p.conj() * c).sum();
            for (c, p) in col.iter_mut().zip(prev) {
                *c -= proj * p;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Uniform point on the probability simplex (flat Dirichlet).
pub fn dirichlet(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Random pure state vector of unit norm.
pub fn random_ket(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        v[0] = C64::new(1.0, 0.0);
        return v;
    }
    v.iter_mut().for_each(|z| *z /= norm);
    v.into_iter().map(|z| if z.norm() < 1e-300 { ZERO } else { z }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_unitary(&mut rng, 5);
        let uu = &u.adjoint() * &u;
        assert!((&uu - &CMatrix::identity(5)).max_abs() < 1e-12);
    }

    #[test]
    fn dirichlet_on_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = dirichlet(&mut rng, 7);
        assert!(p.iter().all(|&x| x >= 0.0));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn seeded_states_repeat() {
        let a = random_density(&mut ChaCha8Rng::seed_from_u64(9), &[2, 3]);
        let b = random_density(&mut ChaCha8Rng::seed_from_u64(9), &[2, 3]);
        assert_eq!(a, b);
    }
}
