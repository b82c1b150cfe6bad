use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use qginv::channels::{self, property_report, tp_residual, vec, Channel, PropertyReport};
use qginv::ginv::{self, GinvReport, InverseKind, Residuals};
use qginv::json::{matrix_from_json, ChannelFile, JsonMatrix};
use qginv::linalg::{matpow, CMatrix};
use qginv::theorems::{self, TheoremReport};
use qginv::{Error, Tolerances};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("channel is not trace preserving (residual {0:.3e})")]
    NotTp(f64),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::NotTp(_) => 6,
            Self::Core(e) => match e {
                Error::DimensionMismatch(_) | Error::NotSquare { .. } => 3,
                Error::IndexTooLarge(_) => 4,
                Error::ResidualCheck { .. }
                | Error::FormulaDisagreement(_)
                | Error::NoConvergence { .. } => 5,
                Error::NotHermitian { .. }
                | Error::NonFinite { .. }
                | Error::InvalidTolerance(_)
                | Error::NotCp(_)
                | Error::InvalidArgument(_) => 2,
            },
        }
    }
}

/// A command's result in both output formats, which carry the same numbers.
pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub exit_code: u8,
}

impl Rendered {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            exit_code: 0,
        }
    }

    pub fn json_string(&self) -> String {
        serde_json::to_string(&self.json).expect("values serialize")
    }
}

/// Shortest round-trip form of `x`, in exponent notation when very small or large.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e7).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("malformed JSON in {}: {e}", path.display())))
}

fn read_channel(path: &Path) -> Result<Channel, CliError> {
    let file: ChannelFile = read_json(path)?;
    Ok(file.to_channel()?)
}

fn read_matrix(path: &Path) -> Result<CMatrix, CliError> {
    let rows: JsonMatrix = read_json(path)?;
    Ok(matrix_from_json(&rows)?)
}

fn property_text(p: &PropertyReport) -> String {
    format!(
        "CP      {:<5}  min Choi eigenvalue {}\nTP      {:<5}  residual {}\nunital  {:<5}  residual {}\n",
        p.cp.verdict,
        num(p.cp.min_choi_eigenvalue),
        p.tp.verdict,
        num(p.tp.residual),
        p.unital.verdict,
        num(p.unital.residual)
    )
}

pub fn check(path: &Path, tol: &Tolerances) -> Result<Rendered, CliError> {
    let ch = read_channel(path)?;
    let report = property_report(&ch, tol)?;
    Ok(Rendered::ok(to_value(&report), property_text(&report)))
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Mp,
    Drazin,
    Group,
    DaggerDrazin,
}

#[derive(Serialize)]
struct InverseOutput {
    kind: InverseKind,
    channel: ChannelFile,
    residuals: Residuals,
    index: Option<usize>,
    witness_k: Option<usize>,
}

pub fn inverse(path: &Path, kind: Kind, tol: &Tolerances) -> Result<Rendered, CliError> {
    let ch = read_channel(path)?;
    let s = ch.superop();
    if matches!(kind, Kind::Drazin | Kind::Group) && !ch.is_endomap() {
        return Err(Error::DimensionMismatch(format!(
            "{kind:?} inverses need d_in == d_out, got {} and {}",
            ch.d_in(),
            ch.d_out()
        ))
        .into());
    }
    let report: GinvReport = match kind {
        Kind::Mp => ginv::mp_inverse(s, tol)?,
        Kind::Drazin => {
            let d = ginv::drazin_inverse(s, tol)?;
            GinvReport {
                kind: InverseKind::Drazin,
                inverse: d.inverse,
                residuals: d.residuals,
                index: Some(d.index),
                witness_k: None,
            }
        }
        Kind::Group => ginv::group_inverse(s, tol)?,
        Kind::DaggerDrazin => ginv::dagger_drazin(s, tol)?,
    };
    if let Some((axiom, residual)) = report.first_violation(tol) {
        return Err(Error::ResidualCheck {
            axiom: axiom.to_string(),
            residual,
            tolerance: tol.residual_atol,
        }
        .into());
    }
    // The inverse runs backwards: operators on the output space to the input space.
    let inv_ch = Channel::from_superop(report.inverse.clone(), ch.d_out(), ch.d_in())?;
    let out = InverseOutput {
        kind: report.kind,
        channel: ChannelFile::superop_only(&inv_ch),
        residuals: report.residuals.clone(),
        index: report.index,
        witness_k: report.witness_k,
    };

    let mut text = format!("kind {:?}\n", report.kind);
    if let Some(k) = report.index {
        let _ = writeln!(text, "index {k}");
    }
    if let Some(k) = report.witness_k {
        let _ = writeln!(text, "witness_k {k}");
    }
    for (axiom, r) in &report.residuals {
        let _ = writeln!(text, "{axiom:<4} residual {}", num(*r));
    }
    let _ = writeln!(text, "superoperator ({} x {}):", report.inverse.rows(), report.inverse.cols());
    for row in report.inverse.to_rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| format!("[{}, {}]", num(z.re), num(z.im)))
            .collect();
        let _ = writeln!(text, "  {}", cells.join("  "));
    }
    Ok(Rendered::ok(to_value(&out), text))
}

pub fn theorems(seed: u64, count: usize, tol: &Tolerances) -> Result<Rendered, CliError> {
    let reports: Vec<TheoremReport> = theorems::run_suite(seed, count, tol)?;
    let pass = theorems::suite_passes(&reports);
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(
            text,
            "{:<38} {:<12} instances {:>5}  max residual {}",
            r.theorem_id,
            format!("{:?}", r.verdict).to_lowercase(),
            r.instances,
            num(r.max_residual)
        );
    }
    let _ = writeln!(text, "suite {}", if pass { "passed" } else { "failed" });
    Ok(Rendered {
        json: to_value(&reports),
        text,
        exit_code: if pass { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct MitigationOutput {
    repetitions: u32,
    ideal: f64,
    noisy: f64,
    mitigated: f64,
    drazin_index: usize,
    recovered: bool,
    caveat: Option<String>,
}

fn expectation(observable: &CMatrix, rho: &CMatrix) -> f64 {
    observable.dot(rho).trace().re
}

pub fn mitigate(
    channel: &Path,
    state: &Path,
    observable: &Path,
    n: u32,
    tol: &Tolerances,
) -> Result<Rendered, CliError> {
    let ch = read_channel(channel)?;
    let rho = read_matrix(state)?;
    let obs = read_matrix(observable)?;
    if !ch.is_endomap() {
        return Err(Error::DimensionMismatch(format!(
            "mitigation needs d_in == d_out, got {} and {}",
            ch.d_in(),
            ch.d_out()
        ))
        .into());
    }
    let d = ch.d_in();
    for (name, m) in [("state", &rho), ("observable", &obs)] {
        if m.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, channel acts on {d}x{d}",
                m.rows(),
                m.cols()
            ))
            .into());
        }
    }
    let tp = tp_residual(ch.superop(), d, d);
    if tp > tol.residual_atol {
        return Err(CliError::NotTp(tp));
    }
    if obs.hermitian_residual() > tol.residual_atol {
        return Err(CliError::Input("observable is not Hermitian".into()));
    }
    let props = qginv::linalg::eigh(&rho, tol)
        .map_err(|_| CliError::Input("state is not Hermitian".into()))?;
    let trace = rho.trace();
    if props.values.first().is_some_and(|&l| l < -tol.psd_atol)
        || (trace.re - 1.0).abs() > tol.residual_atol
        || trace.im.abs() > tol.residual_atol
    {
        return Err(CliError::Input("state must be positive semidefinite with unit trace".into()));
    }

    let s = ch.superop();
    let drazin = ginv::drazin_inverse(s, tol)?;
    let forward = matpow(s, n as usize)?;
    let backward = matpow(&drazin.inverse, n as usize)?;
    let noisy_vec = forward.dot(&vec(&rho));
    let mitigated_vec = backward.dot(&noisy_vec);
    let noisy = channels::unvec(&noisy_vec, d, d)?;
    let mitigated = channels::unvec(&mitigated_vec, d, d)?;

    let ideal = expectation(&obs, &rho);
    let out = MitigationOutput {
        repetitions: n,
        ideal,
        noisy: expectation(&obs, &noisy),
        mitigated: expectation(&obs, &mitigated),
        drazin_index: drazin.index,
        recovered: (expectation(&obs, &mitigated) - ideal).abs() <= tol.residual_atol,
        caveat: (drazin.index > 0).then(|| {
            format!(
                "channel is not invertible (Drazin index {}): the Drazin inverse only recovers the \
                 component of the state in the range of the channel; information in its kernel is lost",
                drazin.index
            )
        }),
    };

    let mut text = format!(
        "repetitions   {}\nideal         {}\nnoisy         {}\nmitigated     {}\ndrazin index  {}\nrecovered     {}\n",
        out.repetitions,
        num(out.ideal),
        num(out.noisy),
        num(out.mitigated),
        out.drazin_index,
        out.recovered
    );
    if let Some(c) = &out.caveat {
        let _ = writeln!(text, "caveat        {c}");
    }
    Ok(Rendered::ok(to_value(&out), text))
}

fn channel_output(ch: &Channel) -> Rendered {
    let file = ChannelFile::from_channel(ch);
    let json = to_value(&file);
    // Text output is the same channel file; a channel has no more readable form.
    let text = serde_json::to_string(&json).expect("serializes") + "\n";
    Rendered::ok(json, text)
}

fn positive(name: &str, v: usize) -> Result<(), CliError> {
    if v == 0 {
        Err(CliError::Input(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

pub fn random_cptp(d_in: usize, d_out: usize, env: usize, seed: u64) -> Result<Rendered, CliError> {
    positive("d", d_in)?;
    positive("d-out", d_out)?;
    positive("env", env)?;
    Ok(channel_output(&channels::random_cptp(d_in, d_out, env, seed)?))
}

pub fn random_ucptp(d: usize, m: usize, seed: u64) -> Result<Rendered, CliError> {
    positive("d", d)?;
    positive("m", m)?;
    Ok(channel_output(&channels::random_ucptp(d, m, seed)?))
}
