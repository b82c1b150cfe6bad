//! Moore-Penrose, Drazin, group and dagger-Drazin inverses.
//!
//! Each inverse is returned together with the Frobenius residuals of its
//! defining axioms, so a result certifies itself. Axioms are written for
//! matrices acting on column vectors (`f;g` is `G·F`):
//!
//! | kind          | axioms                                                           |
//! |---------------|------------------------------------------------------------------|
//! | Moore-Penrose | `FGF = F`, `GFG = G`, `(FG)† = FG`, `(GF)† = GF`                 |
//! | Drazin        | `G·A^{k+1} = A^k`, `GAG = G`, `AG = GA`                          |
//! | group         | `AGA = A`, `GAG = G`, `AG = GA`                                  |
//! | dagger-Drazin | `GF(F†F)^k = (F†F)^k` and `(FF†)^k FG = (FF†)^k`, `GFG = G`, `(GF)† = GF`, `(FG)† = FG` |

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{fro_dist, matpow, rank_at_scale, rank_from_singular_values, svd, CMatrix, Tolerances};

pub type Residuals = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseKind {
    MoorePenrose,
    Drazin,
    Group,
    DaggerDrazin,
}

impl InverseKind {
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Self::MoorePenrose => &["MP1", "MP2", "MP3", "MP4"],
            Self::Drazin => &["D1", "D2", "D3"],
            Self::Group => &["G1", "G2", "G3"],
            Self::DaggerDrazin => &["Dd1", "Dd2", "Dd3", "Dd4"],
        }
    }
}

/// Residuals of every axiom of one kind, plus the exponent used for the
/// power axiom (`D1` / `Dd1`) when the kind has one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub residuals: Residuals,
    pub k: Option<usize>,
}

impl AxiomCheck {
    pub fn max_residual(&self) -> f64 {
        max_of(&self.residuals)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrazinResult {
    #[serde(with = "crate::json::matrix")]
    pub inverse: CMatrix,
    pub index: usize,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GinvReport {
    pub kind: InverseKind,
    #[serde(with = "crate::json::matrix")]
    pub inverse: CMatrix,
    pub residuals: Residuals,
    /// Drazin index (drazin and group kinds).
    pub index: Option<usize>,
    /// Exponent satisfying the dagger-Drazin power axiom.
    pub witness_k: Option<usize>,
}

impl GinvReport {
    pub fn max_residual(&self) -> f64 {
        max_of(&self.residuals)
    }

    /// First axiom whose residual exceeds `residual_atol`.
    pub fn first_violation(&self, tol: &Tolerances) -> Option<(&str, f64)> {
        self.residuals
            .iter()
            .find(|(_, &r)| !(r <= tol.residual_atol))
            .map(|(k, &r)| (k.as_str(), r))
    }
}

fn max_of(r: &Residuals) -> f64 {
    r.values().copied().fold(0.0, f64::max)
}

fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    fro_dist(a, b).expect("axiom operands have matching shapes")
}

fn require_square(a: &CMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// Moore-Penrose inverse `V · Σ⁺ · U†`, singular values at or below the rank cutoff treated as zero.
pub fn pinv(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    pinv_at_scale(m, None, tol)
}

/// `pinv` with the rank cutoff taken relative to `scale` when given.
fn pinv_at_scale(m: &CMatrix, scale: Option<f64>, tol: &Tolerances) -> Result<CMatrix> {
    if m.is_zero_sized() {
        return Ok(CMatrix::zeros(m.cols(), m.rows()));
    }
    let s = svd(m)?;
    let max_dim = m.rows().max(m.cols());
    let r = match scale {
        Some(scale) => rank_at_scale(&s.singular_values, max_dim, scale, tol),
        None => rank_from_singular_values(&s.singular_values, max_dim, tol),
    };
    let mut out = CMatrix::zeros(m.cols(), m.rows());
    for k in 0..r {
        let inv = 1.0 / s.singular_values[k];
        for i in 0..m.cols() {
            let vik = s.v[(i, k)] * inv;
            for j in 0..m.rows() {
                out[(i, j)] += vik * s.u[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

pub fn mp_inverse(m: &CMatrix, tol: &Tolerances) -> Result<GinvReport> {
    let inverse = pinv(m, tol)?;
    let check = verify_axioms(InverseKind::MoorePenrose, m, &inverse, tol)?;
    Ok(GinvReport {
        kind: InverseKind::MoorePenrose,
        inverse,
        residuals: check.residuals,
        index: None,
        witness_k: None,
    })
}

/// Smallest `k` with `rank(a^k) == rank(a^{k+1})`; zero exactly when `a` is invertible.
///
/// The rank of `a^p` is judged against `σ_max(a)^p`, the roundoff floor of the
/// computed power, rather than against `σ_max(a^p)`: for a nilpotent `a` the
/// computed `a^p` is pure roundoff, which a self-relative cutoff would count
/// as full rank.
pub fn drazin_index(a: &CMatrix, tol: &Tolerances) -> Result<usize> {
    require_square(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok(0);
    }
    let smax = svd(a)?.singular_values[0];
    let mut prev_rank = n;
    let mut power = CMatrix::identity(n);
    for k in 0..=n {
        power = power.dot(a);
        let sv = svd(&power)?.singular_values;
        let r = rank_at_scale(&sv, n, smax.powi(k as i32 + 1), tol);
        if r == prev_rank {
            return Ok(k);
        }
        prev_rank = r;
    }
    // Ranks strictly decrease until they stabilize, so this is unreachable.
    Ok(n)
}

/// Drazin inverse via `A^D = A^k (A^{2k+1})⁺ A^k` with `k` the Drazin index.
pub fn drazin_inverse(a: &CMatrix, tol: &Tolerances) -> Result<DrazinResult> {
    require_square(a)?;
    let index = drazin_index(a, tol)?;
    let inverse = drazin_from_index(a, index, tol)?;
    let check = verify_axioms(InverseKind::Drazin, a, &inverse, tol)?;
    gate(&check.residuals, tol)?;
    Ok(DrazinResult {
        inverse,
        index,
        residuals: check.residuals,
    })
}

fn drazin_from_index(a: &CMatrix, k: usize, tol: &Tolerances) -> Result<CMatrix> {
    if k == 0 {
        return pinv(a, tol);
    }
    let ak = matpow(a, k)?;
    let smax = svd(a)?.singular_values[0];
    let core = pinv_at_scale(&matpow(a, 2 * k + 1)?, Some(smax.powi(2 * k as i32 + 1)), tol)?;
    Ok(ak.dot(&core).dot(&ak))
}

fn gate(residuals: &Residuals, tol: &Tolerances) -> Result<()> {
    for (axiom, &r) in residuals {
        if !(r <= tol.residual_atol) {
            return Err(Error::ResidualCheck {
                axiom: axiom.clone(),
                residual: r,
                tolerance: tol.residual_atol,
            });
        }
    }
    Ok(())
}

/// Drazin inverse re-certified as a group inverse; fails with
/// [`Error::IndexTooLarge`] when the index exceeds one.
pub fn group_inverse(a: &CMatrix, tol: &Tolerances) -> Result<GinvReport> {
    require_square(a)?;
    let d = drazin_inverse(a, tol)?;
    if d.index > 1 {
        return Err(Error::IndexTooLarge(d.index));
    }
    let check = verify_axioms(InverseKind::Group, a, &d.inverse, tol)?;
    gate(&check.residuals, tol)?;
    // a^{DD} = a holds exactly in the index <= 1 case.
    let dd = drazin_inverse(&d.inverse, tol)?;
    let r = dist(&dd.inverse, a);
    if !(r <= tol.residual_atol) {
        return Err(Error::ResidualCheck {
            axiom: "double_inverse".into(),
            residual: r,
            tolerance: tol.residual_atol,
        });
    }
    Ok(GinvReport {
        kind: InverseKind::Group,
        inverse: d.inverse,
        residuals: check.residuals,
        index: Some(d.index),
        witness_k: None,
    })
}

/// Both closed forms of the dagger-Drazin inverse: `(F†F)^D F†` and `F† (FF†)^D`.
pub fn dagger_drazin_formulas(f: &CMatrix, tol: &Tolerances) -> Result<(CMatrix, CMatrix, usize)> {
    let fd = f.dagger();
    let left_gram = drazin_inverse(&fd.dot(f), tol)?;
    let right_gram = drazin_inverse(&f.dot(&fd), tol)?;
    let via_left = left_gram.inverse.dot(&fd);
    let via_right = fd.dot(&right_gram.inverse);
    Ok((via_left, via_right, left_gram.index))
}

pub fn dagger_drazin(f: &CMatrix, tol: &Tolerances) -> Result<GinvReport> {
    if f.is_zero_sized() {
        return Ok(GinvReport {
            kind: InverseKind::DaggerDrazin,
            inverse: CMatrix::zeros(f.cols(), f.rows()),
            residuals: InverseKind::DaggerDrazin
                .labels()
                .iter()
                .map(|l| (l.to_string(), 0.0))
                .collect(),
            index: None,
            witness_k: Some(0),
        });
    }
    let (inverse, alternative, gram_index) = dagger_drazin_formulas(f, tol)?;
    let disagreement = dist(&inverse, &alternative);
    if !(disagreement <= tol.residual_atol) {
        return Err(Error::FormulaDisagreement(disagreement));
    }
    let check = verify_axioms(InverseKind::DaggerDrazin, f, &inverse, tol)?;
    Ok(GinvReport {
        kind: InverseKind::DaggerDrazin,
        inverse,
        residuals: check.residuals,
        index: None,
        witness_k: Some(gram_index),
    })
}

/// Residual of every axiom of `kind` for the candidate inverse `g` of `f`.
///
/// Nothing is thresholded. For the power axioms the exponent is searched from
/// 0 to the dimension; the smallest exponent within `residual_atol` is
/// reported, or the minimizing one when none qualifies.
pub fn verify_axioms(
    kind: InverseKind,
    f: &CMatrix,
    g: &CMatrix,
    tol: &Tolerances,
) -> Result<AxiomCheck> {
    let transposed = (f.cols(), f.rows());
    match kind {
        InverseKind::MoorePenrose | InverseKind::DaggerDrazin => {
            if g.shape() != transposed {
                return Err(Error::DimensionMismatch(format!(
                    "inverse of a {}x{} map must be {}x{}, got {}x{}",
                    f.rows(),
                    f.cols(),
                    f.cols(),
                    f.rows(),
                    g.rows(),
                    g.cols()
                )));
            }
        }
        InverseKind::Drazin | InverseKind::Group => {
            require_square(f)?;
            if g.shape() != f.shape() {
                return Err(Error::DimensionMismatch(format!(
                    "Drazin inverse of a {n}x{n} map must be {n}x{n}",
                    n = f.rows()
                )));
            }
        }
    }

    let fg = f.dot(g);
    let gf = g.dot(f);
    let mut residuals = Residuals::new();
    let mut put = |label: &str, r: f64| {
        residuals.insert(label.to_string(), r);
    };
    let mut k = None;
    match kind {
        InverseKind::MoorePenrose => {
            put("MP1", dist(&fg.dot(f), f));
            put("MP2", dist(&gf.dot(g), g));
            put("MP3", dist(&fg.dagger(), &fg));
            put("MP4", dist(&gf.dagger(), &gf));
        }
        InverseKind::Drazin => {
            let (best_k, r) = search_drazin_power(f, g, tol);
            k = Some(best_k);
            put("D1", r);
            put("D2", dist(&gf.dot(g), g));
            put("D3", dist(&fg, &gf));
        }
        InverseKind::Group => {
            put("G1", dist(&fg.dot(f), f));
            put("G2", dist(&gf.dot(g), g));
            put("G3", dist(&fg, &gf));
        }
        InverseKind::DaggerDrazin => {
            let fd = f.dagger();
            let left = fd.dot(f);
            let right = f.dot(&fd);
            let n = left.rows().max(right.rows());
            let mut left_pow = CMatrix::identity(left.rows());
            let mut right_pow = CMatrix::identity(right.rows());
            let mut best = (0, f64::INFINITY);
            for j in 0..=n {
                let r = dist(&gf.dot(&left_pow), &left_pow)
                    .max(dist(&right_pow.dot(&fg), &right_pow));
                if r <= tol.residual_atol {
                    best = (j, r);
                    break;
                }
                if r < best.1 {
                    best = (j, r);
                }
                left_pow = left_pow.dot(&left);
                right_pow = right_pow.dot(&right);
            }
            k = Some(best.0);
            put("Dd1", best.1);
            put("Dd2", dist(&gf.dot(g), g));
            put("Dd3", dist(&gf.dagger(), &gf));
            put("Dd4", dist(&fg.dagger(), &fg));
        }
    }
    Ok(AxiomCheck { residuals, k })
}

/// Walks `k = 0..=n` comparing `G·A^{k+1}` with `A^k`; returns the first
/// exponent within tolerance, else the minimizer.
fn search_drazin_power(a: &CMatrix, g: &CMatrix, tol: &Tolerances) -> (usize, f64) {
    let mut power = CMatrix::identity(a.rows());
    let mut best = (0, f64::INFINITY);
    for k in 0..=a.rows() {
        let next = power.dot(a);
        let r = dist(&g.dot(&next), &power);
        if r <= tol.residual_atol {
            return (k, r);
        }
        if r < best.1 {
            best = (k, r);
        }
        power = next;
    }
    best
}

/// Whether `f^{∂∂} = f`, and if so how far `f^∂` is from the Moore-Penrose inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpDaggerCheck {
    pub holds: bool,
    /// `‖f^{∂∂} − f‖_F`
    pub residual: f64,
    /// `‖f^∂ − f^◦‖_F`, computed when `holds`.
    pub mp_distance: Option<f64>,
}

impl MpDaggerCheck {
    /// True when the double-inverse law holds and `f^∂` coincides with `f^◦`.
    pub fn coincides(&self, tol: &Tolerances) -> bool {
        self.holds && self.mp_distance.is_some_and(|d| d <= tol.residual_atol)
    }
}

pub fn is_mp_of_dagger_drazin(f: &CMatrix, tol: &Tolerances) -> Result<MpDaggerCheck> {
    let once = dagger_drazin(f, tol)?;
    let twice = dagger_drazin(&once.inverse, tol)?;
    let residual = dist(&twice.inverse, f);
    let holds = residual <= tol.residual_atol;
    let mp_distance = if holds {
        Some(dist(&once.inverse, &pinv(f, tol)?))
    } else {
        None
    };
    Ok(MpDaggerCheck {
        holds,
        residual,
        mp_distance,
    })
}
