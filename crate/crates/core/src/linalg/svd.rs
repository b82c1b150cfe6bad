//! Thin SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of a working copy `W = A·V` are rotated pairwise until they are
//! mutually orthogonal to working precision. The singular values are then the
//! column norms and `U` is the normalized `W`. Relative accuracy is good even
//! for small singular values, which matters for rank decisions.

use super::{CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// `m = u · diag(singular_values) · v†` with `r = min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> CMatrix {
        let sigma: Vec<C64> = self.singular_values.iter().map(|&s| C64::new(s, 0.0)).collect();
        self.u.dot(&CMatrix::diag(&sigma)).dot(&self.v.dagger())
    }
}

pub fn svd(m: &CMatrix) -> Result<SvdFactors> {
    if m.rows() < m.cols() {
        let t = tall_svd(&m.dagger())?;
        return Ok(SvdFactors {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    tall_svd(m)
}

/// Column-major scratch storage; each column is a contiguous slice.
struct Columns {
    len: usize,
    data: Vec<C64>,
}

impl Columns {
    fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for j in 0..m.cols() {
            data.extend(m.col(j));
        }
        Self {
            len: m.rows(),
            data,
        }
    }

    fn identity(n: usize) -> Self {
        Self::from_matrix(&CMatrix::identity(n))
    }

    fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.len..(j + 1) * self.len]
    }

    fn pair_mut(&mut self, p: usize, q: usize) -> (&mut [C64], &mut [C64]) {
        debug_assert!(p < q);
        let (lo, hi) = self.data.split_at_mut(q * self.len);
        (&mut lo[p * self.len..(p + 1) * self.len], &mut hi[..self.len])
    }

    /// Applies `[w_p, w_q] ← [c·w_p − s·ph·w_q, s·w_p + c·ph·w_q]`.
    fn rotate(&mut self, p: usize, q: usize, c: f64, s: f64, ph: C64) {
        let (wp, wq) = self.pair_mut(p, q);
        for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
            let yq = *y * ph;
            let xp = *x;
            *x = xp * c - yq * s;
            *y = xp * s + yq * c;
        }
    }
}

fn dotc(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

fn tall_svd(a: &CMatrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    if n == 0 {
        return Ok(SvdFactors {
            u: CMatrix::zeros(m, 0),
            singular_values: Vec::new(),
            v: CMatrix::zeros(0, 0),
        });
    }

    let mut w = Columns::from_matrix(a);
    let mut v = Columns::identity(n);
    let eps = f64::EPSILON;
    // Columns below this squared norm are roundoff; rotating them never settles.
    let floor = (eps * a.fro_norm()).powi(2);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = norm_sqr(w.col(p));
                let beta = norm_sqr(w.col(q));
                let gamma = dotc(w.col(p), w.col(q));
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= floor || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Phase so that w_p† (ph·w_q) is real and positive.
                let ph = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                w.rotate(p, q, c, s, ph);
                v.rotate(p, q, c, s, ph);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "svd",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, norm_sqr(w.col(j)).sqrt())).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));

    let mut u = CMatrix::zeros(m, n);
    let mut vm = CMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (k, &(j, sigma)) in order.iter().enumerate() {
        singular_values.push(sigma);
        vm.set_col(k, v.col(j));
        let col = if sigma > 0.0 {
            let mut c: Vec<C64> = w.col(j).iter().map(|z| z / sigma).collect();
            if orthogonalize(&mut c, &basis) < 0.5 {
                complete(m, &basis)
            } else {
                c
            }
        } else {
            complete(m, &basis)
        };
        u.set_col(k, &col);
        basis.push(col);
    }

    Ok(SvdFactors {
        u,
        singular_values,
        v: vm,
    })
}

/// Two passes of Gram-Schmidt against `basis`; returns the norm before renormalizing.
fn orthogonalize(c: &mut [C64], basis: &[Vec<C64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let proj = dotc(b, c);
            for (x, y) in c.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
    }
    let nrm = norm_sqr(c).sqrt();
    if nrm > 0.0 {
        for x in c.iter_mut() {
            *x /= nrm;
        }
    }
    nrm
}

/// A unit vector orthogonal to `basis`: the standard basis vector with the
/// largest component outside its span (at least `sqrt((m - k)/m)` for `k`
/// basis vectors), orthogonalized.
fn complete(m: usize, basis: &[Vec<C64>]) -> Vec<C64> {
    assert!(basis.len() < m, "basis of size {} already spans C^{m}", basis.len());
    let outside = |e: usize| 1.0 - basis.iter().map(|b| b[e].norm_sqr()).sum::<f64>();
    let best = (0..m)
        .max_by(|&x, &y| outside(x).total_cmp(&outside(y)))
        .expect("m > 0");
    let mut c = vec![ZERO; m];
    c[best] = ONE;
    orthogonalize(&mut c, basis);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro_dist;

    fn check_factors(m: &CMatrix, s: &SvdFactors) {
        let r = m.rows().min(m.cols());
        assert_eq!(s.u.shape(), (m.rows(), r));
        assert_eq!(s.v.shape(), (m.cols(), r));
        assert!(fro_dist(&s.u.dagger().dot(&s.u), &CMatrix::identity(r)).unwrap() < 1e-12);
        assert!(fro_dist(&s.v.dagger().dot(&s.v), &CMatrix::identity(r)).unwrap() < 1e-12);
        assert!(fro_dist(&s.reconstruct(), m).unwrap() < 1e-12);
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn completion_spans_larger_spaces() {
        // Rank one in C^8: seven completed columns, where no standard basis
        // vector keeps more than half its norm outside the span of the first.
        let x = CMatrix::column(vec![C64::new(1.0, 0.0); 8]);
        let m = x.dot(&x.dagger());
        let s = svd(&m).unwrap();
        check_factors(&m, &s);
    }

    #[test]
    fn diag_with_zero() {
        let m = CMatrix::diag_real(&[3., 0.]);
        let s = svd(&m).unwrap();
        assert_eq!(s.singular_values, vec![3.0, 0.0]);
        check_factors(&m, &s);
    }

    #[test]
    fn unitary_has_unit_singular_values() {
        let h = 1.0 / 2f64.sqrt();
        let u = CMatrix::new(
            2,
            2,
            vec![C64::new(h, 0.), C64::new(0., h), C64::new(0., h), C64::new(h, 0.)],
        )
        .unwrap();
        let s = svd(&u).unwrap();
        for sv in &s.singular_values {
            assert!((sv - 1.0).abs() < 1e-14);
        }
        check_factors(&u, &s);
    }

    #[test]
    fn nilpotent_jordan_block() {
        // m†m = diag(0, 1), so the singular values are {1, 0}.
        let m = CMatrix::from_real(2, 2, &[0., 1., 0., 0.]).unwrap();
        let s = svd(&m).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-15);
        assert!(s.singular_values[1].abs() < 1e-15);
        check_factors(&m, &s);
    }

    #[test]
    fn wide_and_tall_and_empty() {
        let m = CMatrix::from_fn(2, 4, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        check_factors(&m, &svd(&m).unwrap());
        let t = m.dagger();
        check_factors(&t, &svd(&t).unwrap());
        let z = CMatrix::zeros(3, 2);
        let s = svd(&z).unwrap();
        assert_eq!(s.singular_values, vec![0.0, 0.0]);
        check_factors(&z, &s);
        let e = svd(&CMatrix::zeros(0, 0)).unwrap();
        assert!(e.singular_values.is_empty());
    }
}
