//! Executable checks of the structural results about generalized inverses of
//! channels: TP/unital preservation, loss of complete positivity,
//! commuting-square propagation, and orthogonal-sum laws.
//!
//! A "verified" verdict is empirical: the report states how many instances
//! were examined and the worst residual seen.

use serde::{Deserialize, Serialize};

use crate::channels::{
    self, amplitude_damping, depolarizing, is_cp, projector_channel, random_cptp, random_ucptp,
    tp_residual, unital_residual, vec, Channel,
};
use crate::error::{Error, Result};
use crate::ginv::{self, dagger_drazin, drazin_inverse, mp_inverse, GinvReport, InverseKind};
use crate::json::ChannelFile;
use crate::linalg::{fro_dist, CMatrix, Tolerances, C64, ONE};
use crate::random::{self, sub_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Falsified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub instances: usize,
    pub max_residual: f64,
    pub verdict: Verdict,
    pub witness: Option<ChannelFile>,
    /// Largest defining-axiom residual of any inverse computed for this report.
    #[serde(skip)]
    pub max_axiom_residual: f64,
}

impl TheoremReport {
    fn single(id: &str, residual: f64, verdict: Verdict) -> Self {
        Self {
            theorem_id: id.to_string(),
            instances: usize::from(verdict != Verdict::Inconclusive),
            max_residual: residual,
            verdict,
            witness: None,
            max_axiom_residual: 0.0,
        }
    }

    fn judged(id: &str, residual: f64, tol: &Tolerances) -> Self {
        let verdict = if residual <= tol.residual_atol {
            Verdict::Verified
        } else {
            Verdict::Falsified
        };
        Self::single(id, residual, verdict)
    }

    fn inconclusive(id: &str, residual: f64) -> Self {
        Self::single(id, residual, Verdict::Inconclusive)
    }

    fn with_axioms(mut self, reports: &[&GinvReport]) -> Self {
        for r in reports {
            self.max_axiom_residual = self.max_axiom_residual.max(r.max_residual());
        }
        self
    }

    fn with_axiom_residual(mut self, r: f64) -> Self {
        self.max_axiom_residual = self.max_axiom_residual.max(r);
        self
    }

    fn with_witness(mut self, ch: &Channel) -> Self {
        self.witness = Some(ChannelFile::from_channel(ch));
        self
    }

    /// Folds per-instance reports into one. Inconclusive instances are not
    /// counted; any falsified instance falsifies the whole and supplies the
    /// witness; fewer than `requested` informative instances is inconclusive.
    pub fn aggregate(id: &str, requested: usize, parts: impl IntoIterator<Item = TheoremReport>) -> Self {
        let mut out = Self {
            theorem_id: id.to_string(),
            instances: 0,
            max_residual: 0.0,
            verdict: Verdict::Verified,
            witness: None,
            max_axiom_residual: 0.0,
        };
        let mut falsified = false;
        for p in parts {
            out.max_axiom_residual = out.max_axiom_residual.max(p.max_axiom_residual);
            if p.verdict == Verdict::Inconclusive {
                continue;
            }
            out.instances += p.instances;
            out.max_residual = out.max_residual.max(p.max_residual);
            if p.verdict == Verdict::Falsified && !falsified {
                falsified = true;
                out.witness = p.witness;
            }
        }
        out.verdict = if falsified {
            Verdict::Falsified
        } else if out.instances == 0 || out.instances < requested {
            Verdict::Inconclusive
        } else {
            Verdict::Verified
        };
        out
    }
}

fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    fro_dist(a, b).expect("matching shapes")
}

fn square_superop(ch: &Channel) -> Result<&CMatrix> {
    if ch.is_endomap() {
        Ok(ch.superop())
    } else {
        Err(Error::DimensionMismatch(format!(
            "Drazin inverses need d_in == d_out, got {} and {}",
            ch.d_in(),
            ch.d_out()
        )))
    }
}

/// The Drazin inverse of a TP (resp. unital) superoperator is TP (resp. unital).
pub fn check_drazin_preserves_tp_u(ch: &Channel, tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "prop-drazin-tp-u";
    let s = square_superop(ch)?;
    let d = ch.d_in();
    let tp = tp_residual(s, d, d) <= tol.residual_atol;
    let unital = unital_residual(s, d, d) <= tol.residual_atol;
    let inv = drazin_inverse(s, tol)?;
    let axioms = inv.residuals.values().copied().fold(0.0, f64::max);
    if !tp && !unital {
        return Ok(TheoremReport::inconclusive(ID, 0.0).with_axiom_residual(axioms));
    }
    let mut residual: f64 = 0.0;
    if tp {
        residual = residual.max(tp_residual(&inv.inverse, d, d));
    }
    if unital {
        residual = residual.max(unital_residual(&inv.inverse, d, d));
    }
    Ok(TheoremReport::judged(ID, residual, tol).with_axiom_residual(axioms))
}

/// Literal check of the depolarizing case study: `D_a^D = D_{1/a}`, and CP
/// is lost whenever `1/a` leaves the CP range.
///
/// Composition gives `D_b ∘ D_a = D_{a+b−ab}`, so the true inverse is
/// `D_{a/(a−1)}` and this identity only holds at `a = 1`; the report is
/// falsified elsewhere. See [`check_depolarizing_inverse`] for the closed form
/// that does hold.
pub fn check_drazin_cp_loss(d: usize, a: f64, tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "ex-depolarizing-inverse-one-over-a";
    if a == 0.0 {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    let inv = drazin_inverse(depolarizing(d, a).superop(), tol)?;
    let claimed = depolarizing(d, 1.0 / a);
    let residual = dist(&inv.inverse, claimed.superop());
    let inverse_ch = Channel::from_superop(inv.inverse.clone(), d, d)?;
    let cp = is_cp(&inverse_ch, tol)?;
    let cp_as_predicted = cp.verdict == depolarizing_is_cp(d, 1.0 / a);
    let axioms = inv.residuals.values().copied().fold(0.0, f64::max);
    let mut report = TheoremReport::judged(ID, residual, tol).with_axiom_residual(axioms);
    if !cp_as_predicted {
        report.verdict = Verdict::Falsified;
    }
    if report.verdict == Verdict::Falsified {
        report = report.with_witness(&depolarizing(d, a));
    }
    Ok(report)
}

/// CP range of `D_a` from its Choi spectrum `{(1−a)d + a/d, a/d}`: `0 ≤ a ≤ d²/(d²−1)`.
pub fn depolarizing_is_cp(d: usize, a: f64) -> bool {
    let df = d as f64;
    a >= 0.0 && (1.0 - a) * df + a / df >= 0.0
}

/// Parameter `b` with `D_a^D = D_b`: `a/(a−1)` for `a ≠ 1`, and `1` at the idempotent point.
pub fn depolarizing_inverse_parameter(a: f64) -> f64 {
    if a == 1.0 {
        1.0
    } else {
        a / (a - 1.0)
    }
}

/// Depolarizing case study with the corrected closed form: `D_a^D = D_{a/(a−1)}`
/// is TP and unital, and is CP only when `a/(a−1)` lies in the CP range.
/// Reports the minimum Choi eigenvalue of the inverse as its residual when CP fails.
pub fn check_depolarizing_inverse(d: usize, a: f64, tol: &Tolerances) -> Result<(TheoremReport, f64)> {
    const ID: &str = "ex-depolarizing-cp-loss";
    let inv = drazin_inverse(depolarizing(d, a).superop(), tol)?;
    let b = depolarizing_inverse_parameter(a);
    let closed = depolarizing(d, b);
    let inverse_ch = Channel::from_superop(inv.inverse.clone(), d, d)?;
    let cp = is_cp(&inverse_ch, tol)?;
    let residual = dist(&inv.inverse, closed.superop())
        .max(tp_residual(&inv.inverse, d, d))
        .max(unital_residual(&inv.inverse, d, d));
    let axioms = inv.residuals.values().copied().fold(0.0, f64::max);
    let mut report = TheoremReport::judged(ID, residual, tol).with_axiom_residual(axioms);
    if cp.verdict != depolarizing_is_cp(d, b) {
        report.verdict = Verdict::Falsified;
    }
    Ok((report, cp.min_choi_eigenvalue))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntertwinerVariant {
    Drazin,
    DaggerDrazin,
}

/// Commuting squares transport to the inverses.
///
/// Drazin: `K·F = G·K` implies `K·F^D = G^D·K`.
/// Dagger-Drazin, with `h` defaulting to `k`: `K·F = G·H` and `H·F† = G†·K`
/// imply `H·F^∂ = G^∂·K` and `K·F^∂† = G^∂†·H`.
/// An input square that does not commute gives an inconclusive report.
pub fn check_intertwiner_propagation(
    f: &CMatrix,
    g: &CMatrix,
    k: &CMatrix,
    h: Option<&CMatrix>,
    variant: IntertwinerVariant,
    tol: &Tolerances,
) -> Result<TheoremReport> {
    let h = h.unwrap_or(k);
    let shapes_ok = match variant {
        IntertwinerVariant::Drazin => {
            f.is_square() && g.is_square() && k.cols() == f.rows() && k.rows() == g.rows()
        }
        IntertwinerVariant::DaggerDrazin => {
            h.cols() == f.cols()
                && h.rows() == g.cols()
                && k.cols() == f.rows()
                && k.rows() == g.rows()
        }
    };
    if !shapes_ok {
        return Err(Error::DimensionMismatch(
            "intertwiners do not compose with f and g".into(),
        ));
    }
    match variant {
        IntertwinerVariant::Drazin => {
            const ID: &str = "prop-drazin-commuting";
            let input = dist(&k.dot(f), &g.dot(k));
            if input > tol.residual_atol {
                return Ok(TheoremReport::inconclusive(ID, input));
            }
            let fd = drazin_inverse(f, tol)?;
            let gd = drazin_inverse(g, tol)?;
            let output = dist(&k.dot(&fd.inverse), &gd.inverse.dot(k));
            let axioms = fd.residuals.values().chain(gd.residuals.values()).copied().fold(0.0, f64::max);
            Ok(TheoremReport::judged(ID, output, tol).with_axiom_residual(axioms))
        }
        IntertwinerVariant::DaggerDrazin => {
            const ID: &str = "prop-dagger-drazin-commuting";
            let input = dist(&k.dot(f), &g.dot(h)).max(dist(&h.dot(&f.dagger()), &g.dagger().dot(k)));
            if input > tol.residual_atol {
                return Ok(TheoremReport::inconclusive(ID, input));
            }
            let fp = dagger_drazin(f, tol)?;
            let gp = dagger_drazin(g, tol)?;
            let output = dist(&h.dot(&fp.inverse), &gp.inverse.dot(k))
                .max(dist(&k.dot(&fp.inverse.dagger()), &gp.inverse.dagger().dot(h)));
            Ok(TheoremReport::judged(ID, output, tol).with_axioms(&[&fp, &gp]))
        }
    }
}

/// A TP and unital channel has a TP and unital dagger-Drazin inverse; the
/// residual also covers the gap between the two closed forms.
pub fn check_dagger_drazin_preserves_tpu(ch: &Channel, tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "prop-dagger-drazin-tp-u";
    let (di, dout) = (ch.d_in(), ch.d_out());
    let pre = tp_residual(ch.superop(), di, dout).max(unital_residual(ch.superop(), di, dout));
    if pre > tol.residual_atol {
        return Ok(TheoremReport::inconclusive(ID, pre));
    }
    let inv = dagger_drazin(ch.superop(), tol)?;
    let (left, right, _) = ginv::dagger_drazin_formulas(ch.superop(), tol)?;
    // The inverse maps d_out-dimensional operators back to d_in-dimensional ones.
    let residual = tp_residual(&inv.inverse, dout, di)
        .max(unital_residual(&inv.inverse, dout, di))
        .max(dist(&left, &right));
    Ok(TheoremReport::judged(ID, residual, tol).with_axioms(&[&inv]))
}

/// `Φ` is TP and unital iff `Φ^◦` is; also checks the involution `Φ^◦◦ = Φ`.
pub fn check_mp_tpu_iff(ch: &Channel, tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "prop-mp-tp-u";
    let (di, dout) = (ch.d_in(), ch.d_out());
    let s = ch.superop();
    let inv = mp_inverse(s, tol)?;
    let back = mp_inverse(&inv.inverse, tol)?;
    let involution = dist(&back.inverse, s);
    let ch_res = tp_residual(s, di, dout).max(unital_residual(s, di, dout));
    let inv_res = tp_residual(&inv.inverse, dout, di).max(unital_residual(&inv.inverse, dout, di));
    let ch_tpu = ch_res <= tol.residual_atol;
    let inv_tpu = inv_res <= tol.residual_atol;
    let residual = if ch_tpu || inv_tpu {
        // Both directions of the biconditional: whichever side holds forces the other.
        ch_res.max(inv_res)
    } else {
        0.0
    };
    Ok(TheoremReport::judged(ID, residual.max(involution), tol).with_axioms(&[&inv, &back]))
}

/// TP residual of the Moore-Penrose inverse of a (generally non-unital) channel.
pub fn mp_tp_residual(ch: &Channel, tol: &Tolerances) -> Result<(f64, GinvReport)> {
    let inv = mp_inverse(ch.superop(), tol)?;
    Ok((tp_residual(&inv.inverse, ch.d_out(), ch.d_in()), inv))
}

/// Deterministic candidates for the MP-TP violation search: amplitude damping
/// at γ = 0.5 and at γ = 1 (the reset channel).
///
/// γ = 0.5 is invertible, so its MP inverse is its true inverse and is TP;
/// only the rank-deficient reset channel is a witness.
pub fn mp_tp_fixed_candidates() -> Vec<Channel> {
    vec![amplitude_damping(0.5), amplitude_damping(1.0)]
}

/// Trial `t` of the violation search: a random CPTP map, preceded on odd
/// trials by complete dephasing. Invertible TP maps have TP inverses, so only
/// the rank-deficient (dephased) draws can be witnesses.
pub fn mp_tp_search_candidate(d: usize, env_dim: usize, seed: u64, t: usize) -> Result<Channel> {
    let ch = random_cptp(d, d, env_dim, sub_seed(seed, t as u64))?;
    if t % 2 == 1 {
        channels::completely_dephasing(d).then(&ch)
    } else {
        Ok(ch)
    }
}

/// Looks for channels whose Moore-Penrose inverse is not TP. The report is
/// about the (false) statement "MP inverses of TP channels are TP": finding a
/// witness falsifies it, which is the expected outcome.
pub fn search_mp_tp_violation(
    d: usize,
    env_dim: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<TheoremReport> {
    const ID: &str = "mp-tp-violation-search";
    let threshold = 10.0 * tol.residual_atol;
    let mut candidates = if d == 2 { mp_tp_fixed_candidates() } else { Vec::new() };
    for t in 0..trials {
        candidates.push(mp_tp_search_candidate(d, env_dim, seed, t)?);
    }
    let mut report = TheoremReport {
        theorem_id: ID.to_string(),
        instances: 0,
        max_residual: 0.0,
        verdict: Verdict::Verified,
        witness: None,
        max_axiom_residual: 0.0,
    };
    for ch in &candidates {
        let (r, inv) = mp_tp_residual(ch, tol)?;
        report.instances += 1;
        report.max_residual = report.max_residual.max(r);
        report.max_axiom_residual = report.max_axiom_residual.max(inv.max_residual());
        if r > threshold && report.witness.is_none() {
            report.verdict = Verdict::Falsified;
            report.witness = Some(ChannelFile::from_channel(ch));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumVariant {
    Drazin,
    DaggerDrazin,
    Mp,
}

fn inverse_of(variant: SumVariant, f: &CMatrix, tol: &Tolerances) -> Result<GinvReport> {
    match variant {
        SumVariant::Drazin => {
            let r = drazin_inverse(f, tol)?;
            Ok(GinvReport {
                kind: InverseKind::Drazin,
                inverse: r.inverse,
                residuals: r.residuals,
                index: Some(r.index),
                witness_k: None,
            })
        }
        SumVariant::DaggerDrazin => dagger_drazin(f, tol),
        SumVariant::Mp => mp_inverse(f, tol),
    }
}

/// The inverse of a sum of mutually orthogonal maps is the sum of the inverses.
///
/// Orthogonality is `F_i·F_j = 0` for the Drazin law and both `F_j†·F_i = 0`
/// and `F_j·F_i† = 0` for the dagger-Drazin and Moore-Penrose laws (i ≠ j).
pub fn check_orthogonal_sum(fs: &[CMatrix], variant: SumVariant, tol: &Tolerances) -> Result<TheoremReport> {
    let id = match variant {
        SumVariant::Drazin => "lem-drazin-sum",
        SumVariant::DaggerDrazin => "lem-dagger-drazin-sum",
        SumVariant::Mp => "cor-mp-sum",
    };
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty family".into()))?;
    if fs.iter().any(|f| f.shape() != first.shape()) {
        return Err(Error::DimensionMismatch("family members differ in shape".into()));
    }
    if variant == SumVariant::Drazin && !first.is_square() {
        return Err(Error::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    let mut pre: f64 = 0.0;
    for (i, fi) in fs.iter().enumerate() {
        for (j, fj) in fs.iter().enumerate() {
            if i == j {
                continue;
            }
            pre = pre.max(match variant {
                SumVariant::Drazin => fi.dot(fj).fro_norm(),
                _ => fj.dagger().dot(fi).fro_norm().max(fj.dot(&fi.dagger()).fro_norm()),
            });
        }
    }
    if pre > tol.residual_atol {
        return Ok(TheoremReport::inconclusive(id, pre));
    }
    let total = fs
        .iter()
        .skip(1)
        .fold(first.clone(), |acc, f| &acc + f);
    let whole = inverse_of(variant, &total, tol)?;
    let parts = fs
        .iter()
        .map(|f| inverse_of(variant, f, tol))
        .collect::<Result<Vec<_>>>()?;
    let summed = parts
        .iter()
        .skip(1)
        .fold(parts[0].inverse.clone(), |acc, p| &acc + &p.inverse);
    let residual = dist(&whole.inverse, &summed);
    let mut all: Vec<&GinvReport> = parts.iter().collect();
    all.push(&whole);
    Ok(TheoremReport::judged(id, residual, tol).with_axioms(&all))
}

/// Conjugation by `f` is always CP; it is TP iff `f` is an isometry, unital
/// iff `f` is a coisometry, and UCPTP iff `f` is unitary. The residual is the
/// gap between the channel-side and matrix-side residual forms.
pub fn check_pure_channel_lemma(f: &CMatrix, tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "lemma-pure-channel";
    let ch = channels::conjugation_channel(f);
    let props = channels::property_report(&ch, tol)?;
    let iso = dist(&f.dagger().dot(f), &CMatrix::identity(f.cols()));
    let coiso = dist(&f.dot(&f.dagger()), &CMatrix::identity(f.rows()));
    let is_iso = iso <= tol.residual_atol;
    let is_coiso = coiso <= tol.residual_atol;
    let agree = props.cp.verdict
        && props.tp.verdict == is_iso
        && props.unital.verdict == is_coiso
        && props.is_ucptp() == (is_iso && is_coiso);
    let residual = (props.tp.residual - iso)
        .abs()
        .max((props.unital.residual - coiso).abs());
    let mut report = TheoremReport::judged(ID, residual, tol);
    if !agree {
        report.verdict = Verdict::Falsified;
        report = report.with_witness(&ch);
    }
    Ok(report)
}

/// `Σ_i [e_i†, e_i]` for block projectors `e_i` is UCPTP and equals its own
/// Drazin, dagger-Drazin and Moore-Penrose inverse.
pub fn check_projector_self_inverse(block_dims: &[usize], tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "ex-projector-self-inverse";
    let ch = projector_channel(block_dims)?;
    let s = ch.superop();
    let props = channels::property_report(&ch, tol)?;
    let d = inverse_of(SumVariant::Drazin, s, tol)?;
    let dd = inverse_of(SumVariant::DaggerDrazin, s, tol)?;
    let mp = inverse_of(SumVariant::Mp, s, tol)?;
    let residual = dist(&d.inverse, s)
        .max(dist(&dd.inverse, s))
        .max(dist(&mp.inverse, s))
        .max(props.tp.residual)
        .max(props.unital.residual);
    let mut report = TheoremReport::judged(ID, residual, tol).with_axioms(&[&d, &dd, &mp]);
    if !props.cp.verdict {
        report.verdict = Verdict::Falsified;
    }
    Ok(report)
}

/// Group-inverse case: when `ind(S) ≤ 1`, `S^DD = S`.
pub fn check_double_drazin_index_le_1(s: &CMatrix, tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "prop-group-double-inverse";
    let once = drazin_inverse(s, tol)?;
    if once.index > 1 {
        return Ok(TheoremReport::inconclusive(ID, 0.0));
    }
    let twice = drazin_inverse(&once.inverse, tol)?;
    let axioms = once.residuals.values().chain(twice.residuals.values()).copied().fold(0.0, f64::max);
    Ok(TheoremReport::judged(ID, dist(&twice.inverse, s), tol).with_axiom_residual(axioms))
}

/// TP superoperator on qubit operators with a 3×3 nilpotent block on the
/// traceless subspace: `S = |e0⟩⟨e0| + |e2⟩⟨e1| + |e3⟩⟨e2|` in the normalized
/// Pauli basis. Its Drazin index is 3.
pub fn nilpotent_augmented_tp_superop() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let paulis = [
        CMatrix::identity(2),
        CMatrix::from_real(2, 2, &[0., 1., 1., 0.]).expect("2x2"),
        CMatrix::new(2, 2, vec![C64::new(0., 0.), C64::new(0., -1.), C64::new(0., 1.), C64::new(0., 0.)]).expect("2x2"),
        CMatrix::diag_real(&[1., -1.]),
    ];
    let e: Vec<CMatrix> = paulis.iter().map(|p| vec(p).scale_real(h)).collect();
    let outer = |a: &CMatrix, b: &CMatrix| a.dot(&b.dagger());
    let s = &outer(&e[0], &e[0]) + &outer(&e[2], &e[1]);
    &s + &outer(&e[3], &e[2])
}

/// Index > 1: the double Drazin inverse is `S S^D S`, not `S`, even though
/// `S` and `S^D` are both TP.
pub fn check_double_drazin_index_gt_1(tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "drazin-double-inverse-index-gt-1";
    let s = nilpotent_augmented_tp_superop();
    let once = drazin_inverse(&s, tol)?;
    let twice = drazin_inverse(&once.inverse, tol)?;
    let law = dist(&twice.inverse, &s.dot(&once.inverse).dot(&s));
    let tp = tp_residual(&s, 2, 2).max(tp_residual(&once.inverse, 2, 2));
    let gap = dist(&twice.inverse, &s);
    let axioms = once.residuals.values().chain(twice.residuals.values()).copied().fold(0.0, f64::max);
    let mut report = TheoremReport::judged(ID, law.max(tp), tol).with_axiom_residual(axioms);
    if once.index <= 1 || gap <= tol.residual_atol {
        report.verdict = Verdict::Falsified;
    }
    Ok(report)
}

/// Hermitian input: Moore-Penrose, dagger-Drazin and Drazin inverses coincide.
pub fn check_hermitian_oracle(h: &CMatrix, tol: &Tolerances) -> Result<TheoremReport> {
    const ID: &str = "oracle-hermitian-agreement";
    let mp = inverse_of(SumVariant::Mp, h, tol)?;
    let dd = inverse_of(SumVariant::DaggerDrazin, h, tol)?;
    let d = inverse_of(SumVariant::Drazin, h, tol)?;
    let residual = dist(&mp.inverse, &dd.inverse)
        .max(dist(&mp.inverse, &d.inverse))
        .max(dist(&dd.inverse, &d.inverse));
    Ok(TheoremReport::judged(ID, residual, tol).with_axioms(&[&mp, &dd, &d]))
}

/// Diagonalizable `P·diag(λ)·P⁻¹` with `P⁻¹` known exactly: the Drazin inverse
/// is `P·diag(λ⁺)·P⁻¹`, nonzero eigenvalues inverted and zeros kept.
pub fn check_eigen_oracle(
    p: &CMatrix,
    p_inv: &CMatrix,
    eigenvalues: &[C64],
    tol: &Tolerances,
    oracle_tol: f64,
) -> Result<TheoremReport> {
    const ID: &str = "oracle-eigen-drazin";
    let a = p.dot(&CMatrix::diag(eigenvalues)).dot(p_inv);
    let inverted: Vec<C64> = eigenvalues
        .iter()
        .map(|&l| if l == C64::new(0.0, 0.0) { l } else { ONE / l })
        .collect();
    let oracle = p.dot(&CMatrix::diag(&inverted)).dot(p_inv);
    let d = inverse_of(SumVariant::Drazin, &a, tol)?;
    let residual = dist(&d.inverse, &oracle);
    let verdict = if residual <= oracle_tol {
        Verdict::Verified
    } else {
        Verdict::Falsified
    };
    Ok(TheoremReport::single(ID, residual, verdict).with_axioms(&[&d]))
}

// ---------------------------------------------------------------------------
// Instance generators

/// Dimension cycling through 2, 3, 4.
fn cycle_dim(i: usize) -> usize {
    2 + i % 3
}

/// Smallest admissible ratio `σ_min / σ_max` over the nonzero singular values
/// of a suite instance. Residuals are absolute, and the dagger-Drazin inverse
/// goes through the Gram matrix, which squares the condition number; beyond
/// this ratio double precision cannot certify the axioms to `1e-8`.
pub const MIN_SINGULAR_RATIO: f64 = 2e-2;

pub fn is_well_conditioned(s: &CMatrix, tol: &Tolerances) -> Result<bool> {
    let sv = crate::linalg::svd(s)?.singular_values;
    let Some(&top) = sv.first() else { return Ok(true) };
    let cutoff = tol.rank_rtol * s.rows().max(s.cols()) as f64 * top;
    Ok(sv
        .iter()
        .filter(|&&x| x > cutoff)
        .all(|&x| x >= MIN_SINGULAR_RATIO * top))
}

const MAX_RESAMPLES: u64 = 1000;

/// Draws with successive sub-seeds until the superoperator is well conditioned.
fn conditioned_draw(
    seed: u64,
    i: usize,
    tol: &Tolerances,
    draw: impl Fn(u64) -> Result<Channel>,
) -> Result<Channel> {
    let base = sub_seed(seed, i as u64);
    for attempt in 0..MAX_RESAMPLES {
        let ch = draw(sub_seed(base, attempt))?;
        if is_well_conditioned(ch.superop(), tol)? {
            return Ok(ch);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no well-conditioned instance after {MAX_RESAMPLES} draws"
    )))
}

pub fn drazin_tp_instance(seed: u64, i: usize, tol: &Tolerances) -> Result<Channel> {
    let d = cycle_dim(i);
    conditioned_draw(seed, i, tol, |s| random_cptp(d, d, 2, s))
}

pub fn ucptp_instance(seed: u64, i: usize, tol: &Tolerances) -> Result<Channel> {
    let d = cycle_dim(i);
    let n = 2 + (i / 3) % 4;
    conditioned_draw(seed, i, tol, |s| random_ucptp(d, n, s))
}

/// A random matrix that is singular about half the time, so blocks exercise nonzero Drazin indices.
fn random_block(rng: &mut random::SeededRng, n: usize, singular: bool) -> CMatrix {
    let g = random::conditioned(rng, n, 0.5, 1.5);
    if singular && n > 1 {
        let mask: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect();
        let p = random::haar_unitary(rng, n);
        g.dot(&p.dot(&CMatrix::diag_real(&mask)).dot(&p.dagger()))
    } else {
        g
    }
}

/// Embeds square `blocks` into disjoint diagonal positions of one matrix each.
pub fn orthogonal_family(blocks: &[CMatrix]) -> Vec<CMatrix> {
    let total: usize = blocks.iter().map(CMatrix::rows).sum();
    let mut offset = 0;
    blocks
        .iter()
        .map(|b| {
            let mut m = CMatrix::zeros(total, total);
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m[(offset + i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.rows();
            m
        })
        .collect()
}

pub fn orthogonal_family_instance(seed: u64, i: usize) -> Vec<CMatrix> {
    let mut rng = random::rng(sub_seed(seed, i as u64));
    let n_blocks = 2 + i % 3;
    let blocks: Vec<CMatrix> = (0..n_blocks)
        .map(|b| {
            let size = 1 + (i + b) % 3;
            random_block(&mut rng, size, (i + b) % 2 == 0)
        })
        .collect();
    orthogonal_family(&blocks)
}

/// `f = diag(B, C)`, `g = B`, and the block projection `k = [I 0]`.
pub fn intertwiner_instance(seed: u64, i: usize) -> (CMatrix, CMatrix, CMatrix) {
    let mut rng = random::rng(sub_seed(seed, i as u64));
    let p = 1 + i % 3;
    let q = 1 + (i / 3) % 3;
    let b = random_block(&mut rng, p, i % 2 == 0);
    let c = random_block(&mut rng, q, i % 4 < 2);
    let f = orthogonal_family(&[b.clone(), c]).into_iter().fold(
        CMatrix::zeros(p + q, p + q),
        |acc, m| &acc + &m,
    );
    let k = CMatrix::from_fn(p, p + q, |r, col| if r == col { ONE } else { C64::new(0.0, 0.0) });
    (f, b, k)
}

pub fn hermitian_instance(seed: u64, i: usize) -> CMatrix {
    let mut rng = random::rng(sub_seed(seed, i as u64));
    let n = 1 + i % 8;
    let u = random::haar_unitary(&mut rng, n);
    let lambda: Vec<f64> = (0..n)
        .map(|j| {
            if i % 2 == 0 && j == 0 {
                0.0
            } else {
                let mag = 0.5 + j as f64 * 0.25;
                if j % 2 == 0 { mag } else { -mag }
            }
        })
        .collect();
    u.dot(&CMatrix::diag_real(&lambda)).dot(&u.dagger())
}

/// `(P, P⁻¹, λ)` with `P = U Σ V†` so that `P⁻¹ = V Σ⁻¹ U†` is exact up to rounding.
pub fn eigen_instance(seed: u64, i: usize) -> (CMatrix, CMatrix, Vec<C64>) {
    let mut rng = random::rng(sub_seed(seed, i as u64));
    let n = 2 + i % 7;
    let u = random::haar_unitary(&mut rng, n);
    let v = random::haar_unitary(&mut rng, n);
    let sigma: Vec<f64> = (0..n).map(|j| 0.5 + (j as f64) / n as f64).collect();
    let sigma_inv: Vec<f64> = sigma.iter().map(|s| 1.0 / s).collect();
    let p = u.dot(&CMatrix::diag_real(&sigma)).dot(&v.dagger());
    let p_inv = v.dot(&CMatrix::diag_real(&sigma_inv)).dot(&u.dagger());
    let zeros = 1 + i % (n - 1).max(1);
    let lambda = (0..n)
        .map(|j| {
            if j < zeros.min(n - 1) {
                C64::new(0.0, 0.0)
            } else {
                let theta = j as f64;
                C64::from_polar(0.5 + 0.1 * j as f64, theta)
            }
        })
        .collect();
    (p, p_inv, lambda)
}

/// Runs every check over deterministic instances derived from `seed`.
pub fn run_suite(seed: u64, instance_count: usize, tol: &Tolerances) -> Result<Vec<TheoremReport>> {
    let n = instance_count;
    let mut reports = Vec::new();

    let tp_reports = (0..n)
        .map(|i| check_drazin_preserves_tp_u(&drazin_tp_instance(seed, i, tol)?, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("prop-drazin-tp", n, tp_reports));

    let ucptp: Vec<Channel> = (0..n)
        .map(|i| ucptp_instance(seed ^ 0x5555, i, tol))
        .collect::<Result<_>>()?;
    let u_reports = ucptp
        .iter()
        .map(|ch| check_drazin_preserves_tp_u(ch, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("lemma-drazin-u", n, u_reports));

    let cases: Vec<(usize, f64)> = if n == 0 {
        Vec::new()
    } else {
        [2, 3]
            .iter()
            .flat_map(|&d| [0.25, 0.5, 0.9].map(|a| (d, a)))
            .collect()
    };
    let literal = cases
        .iter()
        .map(|&(d, a)| check_drazin_cp_loss(d, a, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate(
        "ex-depolarizing-inverse-one-over-a",
        cases.len(),
        literal,
    ));
    let corrected = cases
        .iter()
        .map(|&(d, a)| check_depolarizing_inverse(d, a, tol).map(|(r, _)| r))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("ex-depolarizing-cp-loss", cases.len(), corrected));

    let dd_reports = ucptp
        .iter()
        .map(|ch| check_dagger_drazin_preserves_tpu(ch, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("prop-dagger-drazin-tp-u", n, dd_reports));

    let mp_reports = ucptp
        .iter()
        .map(|ch| check_mp_tpu_iff(ch, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("prop-mp-tp-u", n, mp_reports));

    let search = if n == 0 {
        TheoremReport::aggregate("mp-tp-violation-search", 1, Vec::new())
    } else {
        search_mp_tp_violation(2, 2, n, seed ^ 0xAAAA, tol)?
    };
    reports.push(search);

    for variant in [SumVariant::Drazin, SumVariant::DaggerDrazin, SumVariant::Mp] {
        let parts = (0..n)
            .map(|i| check_orthogonal_sum(&orthogonal_family_instance(seed ^ 0x0F0F, i), variant, tol))
            .collect::<Result<Vec<_>>>()?;
        let id = parts.first().map_or("orthogonal-sum", |p| p.theorem_id.as_str()).to_string();
        reports.push(TheoremReport::aggregate(&id, n, parts));
    }

    let partitions: &[&[usize]] = if n == 0 { &[] } else { &[&[1, 1], &[2, 1], &[2, 2]] };
    let proj = partitions
        .iter()
        .map(|p| check_projector_self_inverse(p, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("ex-projector-self-inverse", partitions.len(), proj));

    for variant in [IntertwinerVariant::Drazin, IntertwinerVariant::DaggerDrazin] {
        let parts = (0..n)
            .map(|i| {
                let (f, g, k) = intertwiner_instance(seed ^ 0x3C3C, i);
                check_intertwiner_propagation(&f, &g, &k, None, variant, tol)
            })
            .collect::<Result<Vec<_>>>()?;
        let id = match variant {
            IntertwinerVariant::Drazin => "prop-drazin-commuting",
            IntertwinerVariant::DaggerDrazin => "prop-dagger-drazin-commuting",
        };
        reports.push(TheoremReport::aggregate(id, n, parts));
    }

    let pure = (0..n)
        .map(|i| {
            let mut rng = random::rng(sub_seed(seed ^ 0x7777, i as u64));
            let d = cycle_dim(i);
            let f = match i % 3 {
                0 => random::haar_unitary(&mut rng, d),
                1 => random::isometry(&mut rng, d + 1, d),
                _ => random::ginibre(&mut rng, d, d),
            };
            check_pure_channel_lemma(&f, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("lemma-pure-channel", n, pure));

    let group = (0..n)
        .map(|i| check_double_drazin_index_le_1(ucptp[i].superop(), tol))
        .chain(partitions.iter().map(|p| {
            check_double_drazin_index_le_1(projector_channel(p)?.superop(), tol)
        }))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("prop-group-double-inverse", n, group));

    let converse = if n == 0 { Vec::new() } else { vec![check_double_drazin_index_gt_1(tol)?] };
    reports.push(TheoremReport::aggregate("drazin-double-inverse-index-gt-1", 1, converse));

    let herm = (0..n)
        .map(|i| check_hermitian_oracle(&hermitian_instance(seed ^ 0x1234, i), tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("oracle-hermitian-agreement", n, herm));

    let eig = (0..n)
        .map(|i| {
            let (p, p_inv, lambda) = eigen_instance(seed ^ 0x4321, i);
            check_eigen_oracle(&p, &p_inv, &lambda, tol, EIGEN_ORACLE_TOL)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.push(TheoremReport::aggregate("oracle-eigen-drazin", n, eig));

    let gate = reports.iter().map(|r| r.max_axiom_residual).fold(0.0, f64::max);
    let mut axiom_report = if n == 0 {
        TheoremReport::aggregate(AXIOM_GATE_ID, 1, Vec::new())
    } else {
        TheoremReport::judged(AXIOM_GATE_ID, gate, tol)
    };
    axiom_report.instances = reports.iter().map(|r| r.instances).sum();
    if axiom_report.instances == 0 {
        axiom_report.verdict = Verdict::Inconclusive;
    }
    axiom_report.max_axiom_residual = gate;
    reports.push(axiom_report);

    Ok(reports)
}

/// Seed and per-family instance count of the default suite run.
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_INSTANCES: usize = 200;

pub const AXIOM_GATE_ID: &str = "axiom-residual-gate";

/// Agreement required between the Drazin inverse and the eigen-oracle.
pub const EIGEN_ORACLE_TOL: f64 = 1e-6;

/// Reports that must be verified for a suite run to pass.
pub const MUST_VERIFY: &[&str] = &[
    "prop-drazin-tp",
    "lemma-drazin-u",
    "ex-depolarizing-cp-loss",
    "prop-dagger-drazin-tp-u",
    "prop-mp-tp-u",
    "lem-drazin-sum",
    "lem-dagger-drazin-sum",
    "cor-mp-sum",
    "ex-projector-self-inverse",
    "prop-drazin-commuting",
    "prop-dagger-drazin-commuting",
    "lemma-pure-channel",
    "prop-group-double-inverse",
    "drazin-double-inverse-index-gt-1",
    "oracle-hermitian-agreement",
    "oracle-eigen-drazin",
    AXIOM_GATE_ID,
];

/// Reports whose expected outcome is a counterexample.
pub const MUST_FALSIFY: &[&str] = &["mp-tp-violation-search"];

/// True when every required report is verified and every search found its witness.
pub fn suite_passes(reports: &[TheoremReport]) -> bool {
    let verdict_of = |id: &str| reports.iter().find(|r| r.theorem_id == id).map(|r| r.verdict);
    MUST_VERIFY.iter().all(|id| verdict_of(id) == Some(Verdict::Verified))
        && MUST_FALSIFY.iter().all(|id| verdict_of(id) == Some(Verdict::Falsified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{choi, conjugation_channel, identity_channel};
    use crate::linalg::{eigh, ZERO};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
        CMatrix::from_real(rows, cols, v).unwrap()
    }

    #[test]
    fn aggregate_rules() {
        let ok = TheoremReport::single("x", 1e-12, Verdict::Verified);
        let bad = TheoremReport::single("x", 1.0, Verdict::Falsified)
            .with_witness(&identity_channel(2));
        let skip = TheoremReport::inconclusive("x", 3.0);

        let r = TheoremReport::aggregate("t", 2, vec![ok.clone(), ok.clone(), skip.clone()]);
        assert_eq!((r.verdict, r.instances), (Verdict::Verified, 2));
        assert_eq!(r.max_residual, 1e-12);

        let r = TheoremReport::aggregate("t", 2, vec![ok.clone(), skip.clone()]);
        assert_eq!(r.verdict, Verdict::Inconclusive);

        let r = TheoremReport::aggregate("t", 1, vec![ok, bad, skip]);
        assert_eq!(r.verdict, Verdict::Falsified);
        assert!(r.witness.is_some());

        assert_eq!(TheoremReport::aggregate("t", 0, vec![]).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn drazin_tp_on_random_channels() {
        for i in 0..6 {
            let ch = drazin_tp_instance(11, i, &tol()).unwrap();
            let r = check_drazin_preserves_tp_u(&ch, &tol()).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "{r:?}");
        }
    }

    #[test]
    fn drazin_tp_needs_a_hypothesis() {
        // Half the identity is neither TP nor unital.
        let s = CMatrix::identity(4).scale_real(0.5);
        let ch = Channel::from_superop(s, 2, 2).unwrap();
        let r = check_drazin_preserves_tp_u(&ch, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.instances, 0);
    }

    #[test]
    fn drazin_tp_rejects_non_endomaps() {
        let ch = random_cptp(2, 3, 2, 1).unwrap();
        assert!(matches!(
            check_drazin_preserves_tp_u(&ch, &tol()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn depolarizing_cp_range() {
        // d = 2: CP iff 0 <= a <= 4/3.
        assert!(depolarizing_is_cp(2, 0.0));
        assert!(depolarizing_is_cp(2, 4.0 / 3.0));
        assert!(!depolarizing_is_cp(2, 1.5));
        assert!(!depolarizing_is_cp(2, -0.1));
        assert!(depolarizing_is_cp(3, 9.0 / 8.0));
    }

    #[test]
    fn depolarizing_inverse_parameter_composes_to_identity() {
        // D_b ∘ D_a = D_{a + b − ab}; the inverse parameter makes the product zero.
        for a in [0.25, 0.5, 0.9, 2.0] {
            let b = depolarizing_inverse_parameter(a);
            assert!((a + b - a * b).abs() < 1e-12);
        }
        assert_eq!(depolarizing_inverse_parameter(1.0), 1.0);
    }

    #[test]
    fn literal_one_over_a_claim_holds_only_at_a_equal_one() {
        let r = check_drazin_cp_loss(2, 0.5, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Falsified);
        // ‖S(D_{-1}) − S(D_2)‖ = ‖3·(I − P)‖ with P the rank-one trace projector: 3·√3.
        assert!((r.max_residual - 3.0 * 3f64.sqrt()).abs() < 1e-10);
        assert!(r.witness.is_some());

        let r = check_drazin_cp_loss(3, 1.0, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(check_drazin_cp_loss(2, 0.0, &tol()).is_err());
    }

    #[test]
    fn depolarizing_inverse_loses_cp() {
        for (d, a) in [(2, 0.25), (2, 0.5), (2, 0.9), (3, 0.25), (3, 0.5), (3, 0.9)] {
            let (r, min_eig) = check_depolarizing_inverse(d, a, &tol()).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "d={d} a={a}");
            // Choi spectrum of D_b: {(1−b)d + b/d, b/d}, and b = a/(a−1) < 0.
            let b = depolarizing_inverse_parameter(a);
            assert!((min_eig - b / d as f64).abs() < 1e-10, "d={d} a={a}: {min_eig}");
        }
        let (_, min_eig) = check_depolarizing_inverse(2, 0.5, &tol()).unwrap();
        assert!((min_eig + 0.5).abs() < 1e-12);
    }

    #[test]
    fn drazin_intertwiner_block_example() {
        let b = real(2, 2, &[0., 1., 0., 0.]);
        let c = real(1, 1, &[2.]);
        let f = &orthogonal_family(&[b.clone(), c.clone()])[0] + &orthogonal_family(&[b.clone(), c])[1];
        let k = real(2, 3, &[1., 0., 0., 0., 1., 0.]);
        let r = check_intertwiner_propagation(&f, &b, &k, None, IntertwinerVariant::Drazin, &tol())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Verified);

        // Swapping in the wrong g breaks the input square.
        let g = real(2, 2, &[1., 0., 0., 1.]);
        let r = check_intertwiner_propagation(&f, &g, &k, None, IntertwinerVariant::Drazin, &tol())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.max_residual > 0.5);
    }

    #[test]
    fn dagger_intertwiner_with_trace_functional() {
        // k = h = vec(I)†, g = 1: the squares say S is TP and unital.
        let ch = ucptp_instance(5, 0, &tol()).unwrap();
        let d = ch.d_in();
        let k = vec(&CMatrix::identity(d)).dagger();
        let one = CMatrix::identity(1);
        let r = check_intertwiner_propagation(
            ch.superop(),
            &one,
            &k,
            None,
            IntertwinerVariant::DaggerDrazin,
            &tol(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Verified);

        // Amplitude damping is TP but not unital, so the second square fails.
        let ad = amplitude_damping(0.3);
        let k = vec(&CMatrix::identity(2)).dagger();
        let r = check_intertwiner_propagation(
            ad.superop(),
            &one,
            &k,
            Some(&k),
            IntertwinerVariant::DaggerDrazin,
            &tol(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn intertwiner_shape_errors() {
        let f = CMatrix::identity(2);
        let k = CMatrix::identity(3);
        assert!(check_intertwiner_propagation(&f, &f, &k, None, IntertwinerVariant::Drazin, &tol())
            .is_err());
    }

    #[test]
    fn random_intertwiner_instances_commute() {
        for i in 0..6 {
            let (f, g, k) = intertwiner_instance(2, i);
            assert!(dist(&k.dot(&f), &g.dot(&k)) < 1e-15);
        }
    }

    #[test]
    fn dagger_drazin_and_mp_preserve_tpu() {
        for i in 0..5 {
            let ch = ucptp_instance(3, i, &tol()).unwrap();
            assert_eq!(check_dagger_drazin_preserves_tpu(&ch, &tol()).unwrap().verdict, Verdict::Verified);
            assert_eq!(check_mp_tpu_iff(&ch, &tol()).unwrap().verdict, Verdict::Verified);
        }
        // Not unital: the dagger-Drazin statement says nothing.
        let ad = amplitude_damping(0.3);
        assert_eq!(
            check_dagger_drazin_preserves_tpu(&ad, &tol()).unwrap().verdict,
            Verdict::Inconclusive
        );
        // Neither side of the biconditional holds; the involution still does.
        assert_eq!(check_mp_tpu_iff(&ad, &tol()).unwrap().verdict, Verdict::Verified);
    }

    #[test]
    fn invertible_amplitude_damping_has_tp_mp_inverse() {
        let (r, _) = mp_tp_residual(&amplitude_damping(0.5), &tol()).unwrap();
        assert!(r < 1e-12, "{r}");
        let (r, _) = mp_tp_residual(&amplitude_damping(0.0), &tol()).unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn reset_channel_mp_inverse_is_not_tp() {
        // S = vec(|0⟩⟨0|) vec(I)†, so S⁺ = vec(I) vec(|0⟩⟨0|)† / 2 and
        // S⁺† vec(I) = vec(|0⟩⟨0|): the residual is ‖vec(|1⟩⟨1|)‖ = 1.
        let (r, _) = mp_tp_residual(&amplitude_damping(1.0), &tol()).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn violation_search_finds_witness() {
        let r = search_mp_tp_violation(2, 2, 10, 1, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Falsified);
        assert_eq!(r.instances, 12);
        assert!(r.max_residual > 1e-3);
        let w = r.witness.unwrap().to_channel().unwrap();
        assert!(mp_tp_residual(&w, &tol()).unwrap().0 > 1e-3);
    }

    #[test]
    fn invertible_candidates_never_witness() {
        for t in (0..20).step_by(2) {
            let ch = mp_tp_search_candidate(2, 2, 8, t).unwrap();
            assert!(mp_tp_residual(&ch, &tol()).unwrap().0 < 1e-10);
        }
    }

    #[test]
    fn orthogonal_sums() {
        for i in 0..8 {
            let fam = orthogonal_family_instance(4, i);
            for v in [SumVariant::Drazin, SumVariant::DaggerDrazin, SumVariant::Mp] {
                let r = check_orthogonal_sum(&fam, v, &tol()).unwrap();
                assert_eq!(r.verdict, Verdict::Verified, "{i} {v:?}");
            }
        }
    }

    #[test]
    fn one_sided_orthogonality_is_not_enough_for_mp_sums() {
        // F1 = e0 e0†, F2 = e1 e0†: F2†F1 = 0 but F2 F1† = e1 e0† ≠ 0.
        let f1 = real(2, 2, &[1., 0., 0., 0.]);
        let f2 = real(2, 2, &[0., 0., 1., 0.]);
        assert_eq!(f2.dagger().dot(&f1).fro_norm(), 0.0);
        let whole = mp_inverse(&(&f1 + &f2), &tol()).unwrap().inverse;
        let parts = &mp_inverse(&f1, &tol()).unwrap().inverse + &mp_inverse(&f2, &tol()).unwrap().inverse;
        // (F1+F2)⁺ = e0 (e0+e1)†/2 while the sum is e0 (e0+e1)†; they differ by 1/√2.
        assert!((dist(&whole, &parts) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        let r = check_orthogonal_sum(&[f1, f2], SumVariant::Mp, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn orthogonal_sum_errors() {
        assert!(check_orthogonal_sum(&[], SumVariant::Mp, &tol()).is_err());
        let a = CMatrix::identity(2);
        let b = CMatrix::identity(3);
        assert!(check_orthogonal_sum(&[a, b], SumVariant::Mp, &tol()).is_err());
        let wide = CMatrix::zeros(1, 2);
        assert!(check_orthogonal_sum(&[wide], SumVariant::Drazin, &tol()).is_err());
    }

    #[test]
    fn pure_channel_lemma_cases() {
        let mut rng = random::rng(6);
        let u = random::haar_unitary(&mut rng, 3);
        let v = random::isometry(&mut rng, 3, 2);
        let g = random::ginibre(&mut rng, 2, 2);
        for f in [u, v.clone(), v.dagger(), g] {
            assert_eq!(check_pure_channel_lemma(&f, &tol()).unwrap().verdict, Verdict::Verified);
        }
        // Isometry: TP but not unital.
        let p = channels::property_report(&conjugation_channel(&v), &tol()).unwrap();
        assert!(p.tp.verdict && !p.unital.verdict);
    }

    #[test]
    fn projector_channels_are_self_inverse() {
        for dims in [&[1, 1][..], &[2, 1], &[2, 2]] {
            let r = check_projector_self_inverse(dims, &tol()).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "{dims:?}");
            assert!(r.max_residual < 1e-12);
        }
    }

    #[test]
    fn group_case_double_inverse() {
        let ch = ucptp_instance(9, 1, &tol()).unwrap();
        assert_eq!(check_double_drazin_index_le_1(ch.superop(), &tol()).unwrap().verdict, Verdict::Verified);
        let dephase = channels::completely_dephasing(3);
        assert_eq!(check_double_drazin_index_le_1(dephase.superop(), &tol()).unwrap().verdict, Verdict::Verified);
        let nil = real(2, 2, &[0., 1., 0., 0.]);
        assert_eq!(check_double_drazin_index_le_1(&nil, &tol()).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn nilpotent_augmented_superop_is_tp_with_index_three() {
        let s = nilpotent_augmented_tp_superop();
        assert!(tp_residual(&s, 2, 2) < 1e-15);
        assert_eq!(ginv::drazin_index(&s, &tol()).unwrap(), 3);
        // Its Drazin inverse is the projector onto vec(I)/√2, so S^DD = S^D ≠ S.
        let sd = drazin_inverse(&s, &tol()).unwrap().inverse;
        let e0 = vec(&CMatrix::identity(2)).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(dist(&sd, &e0.dot(&e0.dagger())) < 1e-12);
        let r = check_double_drazin_index_gt_1(&tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn hermitian_oracle_and_eigen_oracle() {
        for i in 0..8 {
            let h = hermitian_instance(1, i);
            assert!(h.hermitian_residual() < 1e-14);
            assert_eq!(check_hermitian_oracle(&h, &tol()).unwrap().verdict, Verdict::Verified);
            let (p, pi, l) = eigen_instance(1, i);
            assert!(dist(&p.dot(&pi), &CMatrix::identity(p.rows())) < 1e-12);
            assert!(l.contains(&ZERO));
            let r = check_eigen_oracle(&p, &pi, &l, &tol(), EIGEN_ORACLE_TOL).unwrap();
            assert_eq!(r.verdict, Verdict::Verified);
        }
    }

    #[test]
    fn hermitian_instances_hit_the_requested_spectrum() {
        let h = hermitian_instance(1, 2);
        let e = eigh(&h, &tol()).unwrap();
        assert!(e.values.iter().any(|v| v.abs() < 1e-12));
    }

    #[test]
    fn suite_instances_are_well_conditioned() {
        assert!(!is_well_conditioned(&CMatrix::diag_real(&[1.0, 1e-3]), &tol()).unwrap());
        assert!(is_well_conditioned(&CMatrix::diag_real(&[1.0, 0.0, 0.5]), &tol()).unwrap());
        for i in 0..6 {
            let ch = ucptp_instance(0, i, &tol()).unwrap();
            assert!(is_well_conditioned(ch.superop(), &tol()).unwrap());
        }
    }

    #[test]
    fn suite_is_deterministic_and_passes() {
        let a = run_suite(3, 12, &tol()).unwrap();
        let b = run_suite(3, 12, &tol()).unwrap();
        assert_eq!(a, b);
        assert!(suite_passes(&a), "{a:#?}");
        let literal = a.iter().find(|r| r.theorem_id == "ex-depolarizing-inverse-one-over-a").unwrap();
        assert_eq!(literal.verdict, Verdict::Falsified);
        let gate = a.iter().find(|r| r.theorem_id == AXIOM_GATE_ID).unwrap();
        assert!(gate.max_residual <= 1e-8);
    }

    #[test]
    fn empty_suite_is_inconclusive() {
        let r = run_suite(3, 0, &tol()).unwrap();
        assert!(r.iter().all(|x| x.verdict == Verdict::Inconclusive), "{r:#?}");
        assert!(!suite_passes(&r));
    }

    #[test]
    fn report_json_shape() {
        let r = check_drazin_cp_loss(2, 0.5, &tol()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 5);
        for k in ["theorem_id", "instances", "max_residual", "verdict", "witness"] {
            assert!(keys.contains(&k));
        }
        assert_eq!(v["verdict"], "falsified");
        assert!(v["witness"]["super"].is_array());

        let ok = TheoremReport::judged("t", 0.0, &tol());
        let v = serde_json::to_value(&ok).unwrap();
        assert!(v["witness"].is_null());
        assert_eq!(v["verdict"], "verified");
    }

    #[test]
    fn choi_of_depolarizing_inverse_matches_closed_form() {
        let inv = drazin_inverse(depolarizing(2, 0.5).superop(), &tol()).unwrap().inverse;
        let j = choi(&Channel::from_superop(inv, 2, 2).unwrap());
        let e = eigh(&j.matrix, &tol()).unwrap();
        let expected = [-0.5, -0.5, -0.5, 3.5];
        for (x, y) in e.values.iter().zip(expected) {
            assert!((x - y).abs() < 1e-10, "{:?}", e.values);
        }
    }
}
