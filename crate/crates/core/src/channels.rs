//! Linear maps on operator space, stored as superoperators.
//!
//! Operators are vectorized by stacking columns, so conjugation `ρ ↦ KρK†`
//! has superoperator `conj(K) ⊗ K`. A channel from a `d_in`-dimensional system
//! to a `d_out`-dimensional one is a `d_out² × d_in²` matrix; Kraus operators
//! are cached alongside when they are known.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, fro_dist, kron, CMatrix, Tolerances, C64, ONE, ZERO};
use crate::random;

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    d_in: usize,
    d_out: usize,
    superop: CMatrix,
    kraus: Option<Vec<CMatrix>>,
}

impl Channel {
    /// `Σ conj(K_i) ⊗ K_i`; the list must be nonempty with uniform shapes.
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus list".into()))?;
        let (d_out, d_in) = first.shape();
        if let Some(bad) = kraus.iter().find(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators must all be {d_out}x{d_in}, found {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        let superop = superop_of_kraus(&kraus);
        Ok(Self {
            d_in,
            d_out,
            superop,
            kraus: Some(kraus),
        })
    }

    pub fn from_superop(superop: CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if superop.shape() != (d_out * d_out, d_in * d_in) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator for d_in={d_in}, d_out={d_out} must be {}x{}, got {}x{}",
                d_out * d_out,
                d_in * d_in,
                superop.rows(),
                superop.cols()
            )));
        }
        Ok(Self {
            d_in,
            d_out,
            superop,
            kraus: None,
        })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn superop(&self) -> &CMatrix {
        &self.superop
    }

    pub fn kraus(&self) -> Option<&[CMatrix]> {
        self.kraus.as_deref()
    }

    pub fn is_endomap(&self) -> bool {
        self.d_in == self.d_out
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "channel expects a {0}x{0} input, got {1}x{2}",
                self.d_in,
                rho.rows(),
                rho.cols()
            )));
        }
        unvec(&self.superop.dot(&vec(rho)), self.d_out, self.d_out)
    }

    /// Channel that applies `self` first and then `next`.
    pub fn then(&self, next: &Channel) -> Result<Channel> {
        if self.d_out != next.d_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot follow a channel into dimension {} with one from dimension {}",
                self.d_out, next.d_in
            )));
        }
        let kraus = match (&self.kraus, &next.kraus) {
            (Some(a), Some(b)) => Some(
                b.iter()
                    .flat_map(|kb| a.iter().map(move |ka| kb.dot(ka)))
                    .collect(),
            ),
            _ => None,
        };
        Ok(Channel {
            d_in: self.d_in,
            d_out: next.d_out,
            superop: next.superop.dot(&self.superop),
            kraus,
        })
    }

    /// Hilbert-Schmidt adjoint; Kraus operators become `K_i†`.
    pub fn adjoint(&self) -> Channel {
        Channel {
            d_in: self.d_out,
            d_out: self.d_in,
            superop: self.superop.dagger(),
            kraus: self
                .kraus
                .as_ref()
                .map(|ks| ks.iter().map(CMatrix::dagger).collect()),
        }
    }

    /// Drops cached Kraus operators, e.g. before comparing superoperators only.
    pub fn without_kraus(mut self) -> Channel {
        self.kraus = None;
        self
    }
}

pub fn superop_of_kraus(kraus: &[CMatrix]) -> CMatrix {
    let (r, c) = kraus[0].shape();
    kraus.iter().fold(CMatrix::zeros(r * r, c * c), |acc, k| {
        &acc + &kron(&k.conj(), k)
    })
}

/// Column-stacking vectorization.
pub fn vec(m: &CMatrix) -> CMatrix {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for j in 0..m.cols() {
        out.extend(m.col(j));
    }
    CMatrix::column(out)
}

pub fn unvec(v: &CMatrix, rows: usize, cols: usize) -> Result<CMatrix> {
    if v.cols() != 1 || v.rows() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape a {}x{} vector into {rows}x{cols}",
            v.rows(),
            v.cols()
        )));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| v[(j * rows + i, 0)]))
}

pub fn kraus_to_channel(kraus: Vec<CMatrix>) -> Result<Channel> {
    Channel::from_kraus(kraus)
}

pub fn apply(ch: &Channel, rho: &CMatrix) -> Result<CMatrix> {
    ch.apply(rho)
}

pub fn adjoint_channel(ch: &Channel) -> Channel {
    ch.adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: CMatrix,
    pub d_in: usize,
    pub d_out: usize,
}

/// `J = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`, of size `d_in·d_out`.
pub fn choi(ch: &Channel) -> ChoiMatrix {
    let (di, dout) = (ch.d_in, ch.d_out);
    let mut j = CMatrix::zeros(di * dout, di * dout);
    for a in 0..di {
        for b in 0..di {
            // Φ(|a⟩⟨b|) is column b·d_in + a of the superoperator, unvectorized.
            let col = b * di + a;
            for c in 0..dout {
                for d in 0..dout {
                    j[(a * dout + c, b * dout + d)] = ch.superop[(d * dout + c, col)];
                }
            }
        }
    }
    ChoiMatrix {
        matrix: j,
        d_in: di,
        d_out: dout,
    }
}

/// Kraus operators from the spectral decomposition of a PSD Choi matrix.
pub fn choi_to_kraus(j: &ChoiMatrix, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let e = eigh(&j.matrix, tol)?;
    let min = e.values.first().copied().unwrap_or(0.0);
    if min < -tol.psd_atol {
        return Err(Error::NotCp(min));
    }
    let mut kraus = Vec::new();
    for (idx, &lambda) in e.values.iter().enumerate().rev() {
        if lambda <= tol.psd_atol {
            continue;
        }
        let s = lambda.sqrt();
        kraus.push(CMatrix::from_fn(j.d_out, j.d_in, |a, i| {
            e.vectors[(i * j.d_out + a, idx)] * s
        }));
    }
    if kraus.is_empty() {
        kraus.push(CMatrix::zeros(j.d_out, j.d_in));
    }
    Ok(kraus)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpVerdict {
    pub verdict: bool,
    pub min_choi_eigenvalue: f64,
    /// `‖J − J†‖_F`; a non-Hermitian Choi matrix is never CP.
    pub hermitian_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualVerdict {
    pub verdict: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub cp: CpVerdict,
    pub tp: ResidualVerdict,
    pub unital: ResidualVerdict,
}

impl PropertyReport {
    pub fn is_ucptp(&self) -> bool {
        self.cp.verdict && self.tp.verdict && self.unital.verdict
    }
}

pub fn is_cp(ch: &Channel, tol: &Tolerances) -> Result<CpVerdict> {
    let j = choi(ch).matrix;
    let hermitian_residual = j.hermitian_residual();
    let hermitian_part = (&j + &j.dagger()).scale_real(0.5);
    let e = eigh(&hermitian_part, tol)?;
    let min_choi_eigenvalue = e.values.first().copied().unwrap_or(0.0);
    Ok(CpVerdict {
        verdict: hermitian_residual <= tol.residual_atol && min_choi_eigenvalue >= -tol.psd_atol,
        min_choi_eigenvalue,
        hermitian_residual,
    })
}

/// `‖S†·vec(I_out) − vec(I_in)‖`: zero exactly when `Tr Φ(ρ) = Tr ρ` for all ρ.
pub fn tp_residual(superop: &CMatrix, d_in: usize, d_out: usize) -> f64 {
    let lhs = superop.dagger().dot(&vec(&CMatrix::identity(d_out)));
    fro_dist(&lhs, &vec(&CMatrix::identity(d_in))).expect("superoperator shape")
}

/// `‖S·vec(I_in) − vec(I_out)‖`: zero exactly when `Φ(I) = I`.
pub fn unital_residual(superop: &CMatrix, d_in: usize, d_out: usize) -> f64 {
    let lhs = superop.dot(&vec(&CMatrix::identity(d_in)));
    fro_dist(&lhs, &vec(&CMatrix::identity(d_out))).expect("superoperator shape")
}

pub fn is_tp(ch: &Channel, tol: &Tolerances) -> ResidualVerdict {
    let residual = tp_residual(&ch.superop, ch.d_in, ch.d_out);
    ResidualVerdict {
        verdict: residual <= tol.residual_atol,
        residual,
    }
}

pub fn is_unital(ch: &Channel, tol: &Tolerances) -> ResidualVerdict {
    let residual = unital_residual(&ch.superop, ch.d_in, ch.d_out);
    ResidualVerdict {
        verdict: residual <= tol.residual_atol,
        residual,
    }
}

pub fn property_report(ch: &Channel, tol: &Tolerances) -> Result<PropertyReport> {
    Ok(PropertyReport {
        cp: is_cp(ch, tol)?,
        tp: is_tp(ch, tol),
        unital: is_unital(ch, tol),
    })
}

pub fn identity_channel(d: usize) -> Channel {
    Channel::from_kraus(vec![CMatrix::identity(d)]).expect("identity Kraus operator")
}

/// `D_a(ρ) = (1 − a)ρ + (a/d)·Tr(ρ)·I`.
pub fn depolarizing(d: usize, a: f64) -> Channel {
    let v = vec(&CMatrix::identity(d));
    let superop = &CMatrix::identity(d * d).scale_real(1.0 - a) + &v.dot(&v.dagger()).scale_real(a / d as f64);
    Channel::from_superop(superop, d, d).expect("depolarizing shape")
}

/// `ρ ↦ FρF†`.
pub fn conjugation_channel(f: &CMatrix) -> Channel {
    Channel::from_kraus(vec![f.clone()]).expect("single Kraus operator")
}

/// `ρ ↦ Σ p_i U_i ρ U_i†`.
pub fn mixed_unitary(unitaries: &[CMatrix], probs: &[f64], tol: &Tolerances) -> Result<Channel> {
    if unitaries.is_empty() || unitaries.len() != probs.len() {
        return Err(Error::InvalidArgument(format!(
            "{} unitaries and {} probabilities",
            unitaries.len(),
            probs.len()
        )));
    }
    if probs.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::InvalidArgument("probabilities must be non-negative".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > tol.residual_atol {
        return Err(Error::InvalidArgument(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    let d = unitaries[0].rows();
    for (i, u) in unitaries.iter().enumerate() {
        if u.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "unitary {i} is {}x{}, expected {d}x{d}",
                u.rows(),
                u.cols()
            )));
        }
        let r = fro_dist(&u.dagger().dot(u), &CMatrix::identity(d))?;
        if r > tol.residual_atol {
            return Err(Error::InvalidArgument(format!(
                "member {i} is not unitary (residual {r:.3e})"
            )));
        }
    }
    let kraus = unitaries
        .iter()
        .zip(probs)
        .map(|(u, &p)| u.scale_real(p.sqrt()))
        .collect();
    Channel::from_kraus(kraus)
}

/// Diagonal projectors onto the blocks of `⊕ C^{d_i}`, as Kraus operators.
pub fn block_projectors(block_dims: &[usize]) -> Result<Vec<CMatrix>> {
    if block_dims.is_empty() || block_dims.contains(&0) {
        return Err(Error::InvalidArgument(
            "need at least one block, each of positive dimension".into(),
        ));
    }
    let d: usize = block_dims.iter().sum();
    let mut start = 0;
    let mut out = Vec::with_capacity(block_dims.len());
    for &b in block_dims {
        let diag: Vec<C64> = (0..d)
            .map(|i| if (start..start + b).contains(&i) { ONE } else { ZERO })
            .collect();
        out.push(CMatrix::diag(&diag));
        start += b;
    }
    Ok(out)
}

pub fn projector_channel(block_dims: &[usize]) -> Result<Channel> {
    Channel::from_kraus(block_projectors(block_dims)?)
}

/// Kraus `{[[1,0],[0,√(1−γ)]], [[0,√γ],[0,0]]}`.
pub fn amplitude_damping(gamma: f64) -> Channel {
    let k0 = CMatrix::from_real(2, 2, &[1., 0., 0., (1.0 - gamma).sqrt()]).expect("2x2");
    let k1 = CMatrix::from_real(2, 2, &[0., gamma.sqrt(), 0., 0.]).expect("2x2");
    Channel::from_kraus(vec![k0, k1]).expect("uniform shapes")
}

/// Kraus `{|i⟩⟨i|}`: kills every off-diagonal entry.
pub fn completely_dephasing(d: usize) -> Channel {
    projector_channel(&vec![1; d]).expect("d >= 1")
}

/// Stinespring construction: an isometry `V: C^{d_in} → C^{env} ⊗ C^{d_out}`
/// sliced into Kraus operators `K_i = (⟨i| ⊗ I)·V`. Trace preserving by construction.
pub fn random_cptp(d_in: usize, d_out: usize, env_dim: usize, seed: u64) -> Result<Channel> {
    if d_in == 0 || d_out == 0 || env_dim == 0 {
        return Err(Error::InvalidArgument("dimensions must be positive".into()));
    }
    if env_dim * d_out < d_in {
        return Err(Error::InvalidArgument(format!(
            "env_dim·d_out = {} is smaller than d_in = {d_in}; no isometry exists",
            env_dim * d_out
        )));
    }
    let mut rng = random::rng(seed);
    let v = random::isometry(&mut rng, env_dim * d_out, d_in);
    let kraus = (0..env_dim)
        .map(|i| CMatrix::from_fn(d_out, d_in, |r, c| v[(i * d_out + r, c)]))
        .collect();
    Channel::from_kraus(kraus)
}

/// Mixed-unitary channel with Haar unitaries and Dirichlet-uniform weights.
pub fn random_ucptp(d: usize, n_unitaries: usize, seed: u64) -> Result<Channel> {
    if d == 0 || n_unitaries == 0 {
        return Err(Error::InvalidArgument("dimensions must be positive".into()));
    }
    let mut rng = random::rng(seed);
    let unitaries: Vec<CMatrix> = (0..n_unitaries)
        .map(|_| random::haar_unitary(&mut rng, d))
        .collect();
    let probs = random::dirichlet_uniform(&mut rng, n_unitaries);
    mixed_unitary(&unitaries, &probs, &Tolerances::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    First,
    Second,
}

/// Traces out one factor of a `(d1·d2)`-dimensional operator.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), which: Subsystem) -> Result<CMatrix> {
    let (d1, d2) = dims;
    if m.shape() != (d1 * d2, d1 * d2) {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over {d1}x{d2} needs a {0}x{0} matrix, got {1}x{2}",
            d1 * d2,
            m.rows(),
            m.cols()
        )));
    }
    Ok(match which {
        Subsystem::First => CMatrix::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
        Subsystem::Second => CMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
    })
}
