//! JSON wire formats.
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs. A channel file is
//! either `{"d_in", "d_out", "kraus": [matrix, ...]}` or
//! `{"d_in", "d_out", "super": matrix}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMatrix> {
    let converted: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    CMatrix::from_rows(&converted)
}

/// `#[serde(with = "crate::json::matrix")]` adapter for [`CMatrix`] fields.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_json(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let rows = JsonMatrix::deserialize(d)?;
        matrix_from_json(&rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub d_in: usize,
    pub d_out: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<JsonMatrix>>,
    #[serde(default, rename = "super", skip_serializing_if = "Option::is_none")]
    pub superop: Option<JsonMatrix>,
}

impl ChannelFile {
    /// Kraus operators are written when the channel carries them; otherwise the superoperator.
    pub fn from_channel(ch: &Channel) -> Self {
        match ch.kraus() {
            Some(ks) => Self {
                d_in: ch.d_in(),
                d_out: ch.d_out(),
                kraus: Some(ks.iter().map(matrix_to_json).collect()),
                superop: None,
            },
            None => Self {
                d_in: ch.d_in(),
                d_out: ch.d_out(),
                kraus: None,
                superop: Some(matrix_to_json(ch.superop())),
            },
        }
    }

    /// Always writes the superoperator, even when Kraus operators are known.
    pub fn superop_only(ch: &Channel) -> Self {
        Self {
            d_in: ch.d_in(),
            d_out: ch.d_out(),
            kraus: None,
            superop: Some(matrix_to_json(ch.superop())),
        }
    }

    /// Fails with [`Error::DimensionMismatch`] when the declared dimensions disagree with the data.
    pub fn to_channel(&self) -> Result<Channel> {
        let ch = match (&self.kraus, &self.superop) {
            (Some(ks), None) => {
                let ks = ks.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                Channel::from_kraus(ks)?
            }
            (None, Some(s)) => Channel::from_superop(matrix_from_json(s)?, self.d_in, self.d_out)?,
            (Some(_), Some(_)) => {
                return Err(Error::InvalidArgument(
                    "channel file must carry exactly one of \"kraus\" or \"super\"".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidArgument(
                    "channel file needs \"kraus\" or \"super\"".into(),
                ))
            }
        };
        if ch.d_in() != self.d_in || ch.d_out() != self.d_out {
            return Err(Error::DimensionMismatch(format!(
                "declared d_in={}, d_out={} but data implies d_in={}, d_out={}",
                self.d_in,
                self.d_out,
                ch.d_in(),
                ch.d_out()
            )));
        }
        Ok(ch)
    }
}
