//! Seeded generators for test instances: Ginibre matrices, Haar-distributed
//! unitaries, isometries, and Dirichlet-uniform probability vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{CMatrix, C64, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent sub-seed for item `index` of a run seeded with `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Matrix of i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = ginibre(rng, n, n);
    (&g + &g.dagger()).scale_real(0.5)
}

/// Orthonormalizes the columns of `m` (rows >= cols) by modified Gram-Schmidt,
/// run twice. The implied R factor has a positive real diagonal, which is the
/// phase fix that makes QR of a Ginibre matrix Haar distributed.
pub fn orthonormal_columns(m: &CMatrix) -> CMatrix {
    assert!(m.rows() >= m.cols(), "need rows >= cols");
    let mut cols: Vec<Vec<C64>> = (0..m.cols()).map(|j| m.col(j)).collect();
    for j in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(j);
        let c = &mut rest[0];
        for _ in 0..2 {
            for b in done.iter() {
                let proj: C64 = b.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
                for (x, y) in c.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in c.iter_mut() {
            *x /= nrm;
        }
    }
    let mut out = CMatrix::zeros(m.rows(), m.cols());
    for (j, c) in cols.iter().enumerate() {
        out.set_col(j, c);
    }
    out
}

pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    orthonormal_columns(&ginibre(rng, n, n))
}

/// `rows × cols` matrix with orthonormal columns (`V†V = I`).
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    orthonormal_columns(&ginibre(rng, rows, cols))
}

/// Uniform sample from the probability simplex.
pub fn dirichlet_uniform<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Random matrix with singular values drawn from `[lo, hi]`.
pub fn conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> CMatrix {
    let u = haar_unitary(rng, n);
    let v = haar_unitary(rng, n);
    let s: Vec<C64> = (0..n).map(|_| C64::new(rng.random_range(lo..=hi), 0.0)).collect();
    u.dot(&CMatrix::diag(&s)).dot(&v.dagger())
}

/// Column vector with a single one at `i`.
pub fn basis_vector(n: usize, i: usize) -> CMatrix {
    let mut v = vec![ZERO; n];
    v[i] = C64::new(1.0, 0.0);
    CMatrix::column(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro_dist;

    #[test]
    fn unitary_and_isometry_are_orthonormal() {
        let mut r = rng(3);
        let u = haar_unitary(&mut r, 5);
        assert!(fro_dist(&u.dagger().dot(&u), &CMatrix::identity(5)).unwrap() < 1e-13);
        assert!(fro_dist(&u.dot(&u.dagger()), &CMatrix::identity(5)).unwrap() < 1e-13);
        let v = isometry(&mut r, 6, 2);
        assert!(fro_dist(&v.dagger().dot(&v), &CMatrix::identity(2)).unwrap() < 1e-13);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        assert_eq!(ginibre(&mut rng(9), 3, 2), ginibre(&mut rng(9), 3, 2));
        assert_ne!(ginibre(&mut rng(9), 3, 2), ginibre(&mut rng(10), 3, 2));
        assert_ne!(sub_seed(1, 0), sub_seed(1, 1));
    }

    #[test]
    fn dirichlet_sums_to_one() {
        let p = dirichlet_uniform(&mut rng(1), 7);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(p.iter().all(|&x| x >= 0.0));
    }
}
