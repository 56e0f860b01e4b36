//! `{"n": 2, "amps": [["3","5","0","1"], ...]}`: each amplitude is
//! `[re_num, re_den, im_num, im_den]` as decimal strings.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{StateError, StateVector};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub amps: Vec<[String; 4]>,
}

impl From<&StateVector<Rational>> for StateJson {
    fn from(s: &StateVector<Rational>) -> Self {
        let amps = s
            .amps()
            .iter()
            .map(|a| {
                [
                    a.re.numer().to_string(),
                    a.re.denom().to_string(),
                    a.im.numer().to_string(),
                    a.im.denom().to_string(),
                ]
            })
            .collect();
        StateJson {
            n: s.n_qubits(),
            amps,
        }
    }
}

fn parse_rational(num: &str, den: &str) -> Result<Rational, StateError> {
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| StateError::Malformed(format!("bad integer {num:?}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| StateError::Malformed(format!("bad integer {den:?}")))?;
    if den.is_zero() {
        return Err(StateError::Malformed("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

impl TryFrom<StateJson> for StateVector<Rational> {
    type Error = StateError;

    fn try_from(j: StateJson) -> Result<Self, StateError> {
        if j.n == 0 || j.n > 24 {
            return Err(StateError::Malformed(format!(
                "unsupported qubit count {}",
                j.n
            )));
        }
        let amps = j
            .amps
            .iter()
            .map(|[rn, rd, i_n, i_d]| {
                Ok(Complex::new(
                    parse_rational(rn, rd)?,
                    parse_rational(i_n, i_d)?,
                ))
            })
            .collect::<Result<Vec<_>, StateError>>()?;
        StateVector::from_amps(j.n, amps)
    }
}

impl StateVector<Rational> {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(StateJson::from(self)).expect("state serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, StateError> {
        let j: StateJson =
            serde_json::from_str(s).map_err(|e| StateError::Malformed(e.to_string()))?;
        j.try_into()
    }
}

impl Serialize for StateVector<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector<Rational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = StateJson::deserialize(deserializer)?;
        j.try_into().map_err(serde::de::Error::custom)
    }
}
