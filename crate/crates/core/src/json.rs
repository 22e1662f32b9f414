//! Wire formats shared by the JSON readers and writers.
//!
//! Integers inside rationals travel as decimal strings so that arbitrarily
//! large numerators survive a round trip through any JSON implementation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(q: &BigRational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational> {
        let num: BigInt = self
            .num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidData(format!("bad numerator {:?}", self.num)))?;
        let den: BigInt = self
            .den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidData(format!("bad denominator {:?}", self.den)))?;
        if den.is_zero() {
            return Err(Error::InvalidData("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

/// Series term as written on the wire.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub m: [i64; 2],
    pub j: u32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: u32,
    pub terms: Vec<SeriesTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieTermJson {
    pub coeff: RationalJson,
    pub m: [i64; 2],
    pub n: [RationalJson; 2],
    pub j: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieJson {
    pub order: u32,
    pub terms: Vec<LieTermJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportJson {
    Line,
    Ray,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallJson {
    pub direction: [i64; 2],
    pub support: SupportJson,
    pub log_theta: LieJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<[i64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub order: u32,
    pub walls: Vec<WallJson>,
}

/// Pretty-prints with a trailing newline, which keeps file outputs byte-stable.
pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
