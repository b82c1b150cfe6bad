//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use super::{CMatrix, Tolerances, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order; `vectors` holds the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    pub fn reconstruct(&self) -> CMatrix {
        let d = CMatrix::diag_real(&self.values);
        self.vectors.dot(&d).dot(&self.vectors.dagger())
    }
}

pub fn eigh(h: &CMatrix, tol: &Tolerances) -> Result<Eigh> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let residual = h.hermitian_residual();
    if residual > tol.residual_atol {
        return Err(Error::NotHermitian { residual });
    }
    let n = h.rows();
    // Symmetrize so rounding-level asymmetry does not leak into the rotations.
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);

    let scale = a.fro_norm();
    let mut converged = n < 2 || scale == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let ph = apq.conj() / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, &mut v, p, q, c, s, ph);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= f64::EPSILON * scale;
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "eigh",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_col(dst, &v.col(src));
    }
    Ok(Eigh { values, vectors })
}

/// `A ← G† A G`, `V ← V G` for `G = [[c, s], [−s·ph, c·ph]]` on rows/cols (p, q).
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let n = a.rows();
    for i in 0..n {
        let x = a[(i, p)];
        let y = a[(i, q)] * ph;
        a[(i, p)] = x * c - y * s;
        a[(i, q)] = x * s + y * c;
    }
    let phc = ph.conj();
    for j in 0..n {
        let x = a[(p, j)];
        let y = a[(q, j)] * phc;
        a[(p, j)] = x * c - y * s;
        a[(q, j)] = x * s + y * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for i in 0..v.rows() {
        let x = v[(i, p)];
        let y = v[(i, q)] * ph;
        v[(i, p)] = x * c - y * s;
        v[(i, q)] = x * s + y * c;
    }
}
