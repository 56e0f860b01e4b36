use serde::{Deserialize, Serialize};

use super::CensusError;
use crate::estimator::{exact_estimate_in, EstimateRecord, TraceEntry};
use crate::executor::TableStore;
use crate::proglang::encode;
use crate::statevec::{shannon_fano_lengths, Gate, Penalty};
use crate::{ExactBasis, ExactState, Rational};

/// A classical string with one bit rotated into superposition.
///
/// The gate set has no Hadamard and `1/sqrt(2)` is not a Gaussian rational, so
/// the closest available split is ROT's `(3/5, 4/5)`: fidelities `9/25` and
/// `16/25` with the two classical strings the rotated bit can collapse to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperposedExample {
    pub bits: String,
    pub position: usize,
    pub max_len: usize,
    pub target: ExactState,
    /// Squared overlaps with the standard basis, in index order.
    #[serde(with = "rational_vec")]
    pub fidelities: Vec<Rational>,
    pub shannon_fano: Vec<Penalty>,
    pub k_superposed: Option<u64>,
    pub k_classical: Option<u64>,
    /// Length of the one-gate program `ROT(position)`.
    pub rot_program_len: usize,
    /// `k_superposed <= k_classical + rot_program_len`; `None` when either side is missing.
    pub bound_holds: Option<bool>,
    pub best: Option<EstimateRecord>,
    pub trace: Vec<TraceEntry>,
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn superposed_bit_example(
    bits: &str,
    position: usize,
    max_len: usize,
    store: &mut TableStore,
) -> Result<SuperposedExample, CensusError> {
    let classical = ExactState::classical(bits)?;
    let n = classical.n_qubits();
    if position >= n {
        return Err(CensusError::InvalidParameter(format!(
            "position {position} out of range for n = {n}"
        )));
    }
    let mut target = classical.clone();
    target.apply_mut(&Gate::rot(position))?;

    let standard = ExactBasis::standard(n)?;
    let fidelities = target.amps().iter().map(|a| a.norm_sqr()).collect();
    let shannon_fano = shannon_fano_lengths(&standard, &target)?;

    let table = store.get(n, max_len, None)?;
    let est = exact_estimate_in(&target, &table, max_len)?;
    let k_classical = exact_estimate_in(&classical, &table, max_len)?.total();
    let rot_program_len = encode(&[Gate::rot(position).into()], n)?.len();
    let k_superposed = est.total();
    let bound_holds = match (k_superposed, k_classical) {
        (Some(s), Some(c)) => Some(s <= c + rot_program_len as u64),
        _ => None,
    };
    Ok(SuperposedExample {
        bits: bits.to_string(),
        position,
        max_len,
        target,
        fidelities,
        shannon_fano,
        k_superposed,
        k_classical,
        rot_program_len,
        bound_holds,
        best: est.best,
        trace: est.trace,
    })
}
