//! Length-bounded complexity of a target state on the reference machine.
//!
//! For a target `|x>` and each halting program `p` with output `|z_p>`, the
//! candidate description costs `l(p) + ceil(-log2 |<x|z_p>|^2)` bits. The exact
//! estimator minimizes this over every program up to a length bound; the
//! sampled estimator replaces the true overlap by the success fraction of `k`
//! simulated projective measurements.
//!
//! Both estimators scan candidates in enumeration order and record the running
//! minimum, which can only decrease as more programs are seen.

mod plan;
mod sampled;
mod witness;

pub use plan::{k_from_bound, k_from_bound_with_slack, SamplingPlan};
pub use sampled::{
    ideal_value, sample_candidates, sampled_estimate, sampled_estimate_in, Candidate,
    SampledEstimate, SampledTraceEntry, TrialResult,
};
pub use witness::{upper_bound_witness, witness_program};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::executor::OutputTable;
use crate::proglang::{DecodedProgram, Program, ProgramError};
use crate::statevec::{fidelity, penalty_bits, Penalty, StateError};
use crate::{ExactState, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("target has {target} qubits but the machine register has {n}")]
    DimensionMismatch { target: usize, n: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Program(#[from] ProgramError),
}

pub(crate) mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One candidate description of the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub program: Program,
    /// `l(p)` in bits.
    pub length: usize,
    /// `|<x|U(p)>|^2`, exact.
    #[serde(with = "rational_str")]
    pub fidelity: Rational,
    pub penalty: u32,
    pub total: u64,
}

impl EstimateRecord {
    /// `None` when the fidelity is zero.
    pub fn new(program: Program, fidelity: Rational) -> Option<Self> {
        let Penalty::Bits(penalty) = penalty_bits(&fidelity) else {
            return None;
        };
        let length = program.len();
        Some(Self {
            program,
            length,
            fidelity,
            penalty,
            total: length as u64 + penalty as u64,
        })
    }
}

/// A point where the running minimum improved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Position of the candidate in enumeration order.
    pub index: usize,
    pub program: Program,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactEstimate {
    /// `None` if no candidate has positive fidelity within the bound.
    pub best: Option<EstimateRecord>,
    pub trace: Vec<TraceEntry>,
    /// Halting programs examined.
    pub candidates: usize,
}

impl ExactEstimate {
    pub fn total(&self) -> Option<u64> {
        self.best.as_ref().map(|b| b.total)
    }
}

/// Whether a sequence of running minima never increases.
pub fn is_non_increasing<T: PartialOrd>(values: impl IntoIterator<Item = T>) -> bool {
    let mut prev: Option<T> = None;
    for v in values {
        if let Some(p) = &prev {
            if v > *p {
                return false;
            }
        }
        prev = Some(v);
    }
    true
}

pub(crate) fn check_target(target: &ExactState, n: usize) -> Result<(), EstimatorError> {
    if target.n_qubits() != n {
        return Err(EstimatorError::DimensionMismatch {
            target: target.n_qubits(),
            n,
        });
    }
    if !target.is_unit() {
        return Err(StateError::NotUnitNorm.into());
    }
    Ok(())
}

/// Minimum of `l(p) + penalty` over all halting programs of length
/// `<= max_len`; ties go to the shorter, then numerically smaller, program.
pub fn exact_estimate(
    target: &ExactState,
    n: usize,
    conditional: Option<&DecodedProgram>,
    max_len: usize,
) -> Result<ExactEstimate, EstimatorError> {
    check_target(target, n)?;
    let table = OutputTable::compute(n, max_len, conditional);
    exact_estimate_in(target, &table, max_len)
}

/// [`exact_estimate`] over a precomputed output table (which fixes `n` and the
/// conditional), restricted to programs of at most `max_len` bits.
pub fn exact_estimate_in(
    target: &ExactState,
    table: &OutputTable,
    max_len: usize,
) -> Result<ExactEstimate, EstimatorError> {
    check_target(target, table.n)?;
    let entries: Vec<_> = table.up_to(max_len).collect();
    let fidelities = entries
        .par_iter()
        .map(|e| fidelity(target, &e.output))
        .collect::<Result<Vec<_>, _>>()?;

    let mut best: Option<EstimateRecord> = None;
    let mut trace = Vec::new();
    for (index, (entry, q)) in entries.iter().zip(fidelities).enumerate() {
        let Some(rec) = EstimateRecord::new(entry.program.clone(), q) else {
            continue;
        };
        // enumeration order already ranks ties by length then value
        if best.as_ref().is_none_or(|b| rec.total < b.total) {
            trace.push(TraceEntry {
                index,
                program: rec.program.clone(),
                total: rec.total,
            });
            best = Some(rec);
        }
    }
    Ok(ExactEstimate {
        best,
        trace,
        candidates: entries.len(),
    })
}

/// Shortest program whose output has fidelity exactly 1 with the target
/// (a penalty-free description), if one exists within the table.
pub fn shortest_exact_program(
    target: &ExactState,
    table: &OutputTable,
    max_len: usize,
) -> Result<Option<Program>, EstimatorError> {
    check_target(target, table.n)?;
    for e in table.up_to(max_len) {
        if fidelity(target, &e.output)? == num_traits::One::one() {
            return Ok(Some(e.program.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::executor::run;
    use crate::proglang::{encode, enumerate, Instr};
    use crate::statevec::{prepare, Gate};

    /// Oracle: run every enumerated program and take the minimum directly.
    fn brute_force_total(target: &ExactState, n: usize, max_len: usize) -> Option<u64> {
        enumerate(max_len, n)
            .filter_map(|p| {
                let out = run(&p, n, None).output?;
                let q = fidelity(target, &out).unwrap();
                penalty_bits(&q).bits().map(|d| p.len() as u64 + d as u64)
            })
            .min()
    }

    #[test]
    fn zero_state_costs_one_bit() {
        let target = ExactState::zero(2).unwrap();
        assert_eq!(brute_force_total(&target, 2, 8), Some(1));
        let est = exact_estimate(&target, 2, None, 8).unwrap();
        let best = est.best.unwrap();
        assert_eq!((best.total, best.length, best.penalty), (1, 1, 0));
    }

    #[test]
    fn rotated_target_is_found_exactly() {
        let target = prepare::<Rational>(1, &[Gate::rot(0)]).unwrap();
        let rot = encode(&[Gate::rot(0).into()], 1).unwrap();
        let est = exact_estimate(&target, 1, None, 8).unwrap();
        // the empty program pays 1 + 2 = 3 < 7, so the exact program is not the minimum
        assert_eq!(brute_force_total(&target, 1, 8), Some(3));
        assert_eq!(est.total(), Some(3));
        let exact = shortest_exact_program(&target, &OutputTable::compute(1, 8, None), 8).unwrap();
        assert_eq!(exact, Some(rot));
    }

    #[test]
    fn orthogonal_only_candidates_give_no_estimate() {
        let target = ExactState::basis(1, 1).unwrap();
        let est = exact_estimate(&target, 1, None, 1).unwrap();
        assert!(est.best.is_none());
        assert!(est.trace.is_empty());
        assert_eq!(est.candidates, 1);
    }

    #[test]
    fn matches_brute_force_on_assorted_targets() {
        let targets = [
            prepare::<Rational>(2, &[Gate::rot(0), Gate::cnot(0, 1)]).unwrap(),
            prepare::<Rational>(2, &[Gate::x(1), Gate::rot(1), Gate::phase(1)]).unwrap(),
            ExactState::classical("11").unwrap(),
        ];
        for t in &targets {
            let est = exact_estimate(t, 2, None, 14).unwrap();
            assert_eq!(est.total(), brute_force_total(t, 2, 14));
            assert!(is_non_increasing(est.trace.iter().map(|e| e.total)));
        }
    }

    #[test]
    fn conditional_call_is_constant_cost() {
        let gates = [
            Gate::x(0),
            Gate::x(1),
            Gate::rot(0),
            Gate::phase(1),
            Gate::cnot(1, 0),
        ];
        let target = prepare::<Rational>(2, &gates).unwrap();
        let cond = DecodedProgram::from_gates(&gates);
        let est = exact_estimate(&target, 2, Some(&cond), 8).unwrap();
        assert_eq!(
            est.total(),
            Some(encode(&[Instr::CallConditional], 2).unwrap().len() as u64)
        );
    }

    #[test]
    fn rejects_mismatched_target() {
        let t = ExactState::zero(3).unwrap();
        assert!(matches!(
            exact_estimate(&t, 2, None, 4),
            Err(EstimatorError::DimensionMismatch { target: 3, n: 2 })
        ));
    }

    #[test]
    fn monotone_helper() {
        assert!(is_non_increasing([5, 5, 3, 1]));
        assert!(!is_non_increasing([5, 3, 4]));
        assert!(is_non_increasing(Vec::<u64>::new()));
    }
}
