//! Experiments over whole bases and pairs of states.
//!
//! The counting census is a theorem about the machine, not a statistical claim:
//! for a halting program `p`, at most `2^d` vectors of an orthonormal basis have
//! penalty `<= d` against `U(p)` (their overlaps are each `>= 2^-d` and sum to at
//! most 1), and `sum_p 2^-l(p) <= 1` by Kraft. Hence fewer than `2^(n-c)` basis
//! vectors can have an estimate below `n - c`, for every length bound.

mod consistency;
mod example;
mod pairs;

pub use consistency::{
    consistency_report, consistency_sweep, ConsistencyRecord, ConsistencySweep,
    CONSISTENCY_GAP_BOUND,
};
pub use example::{superposed_bit_example, SuperposedExample};
pub use pairs::{joint_bound_report, subadditivity_report, JointBoundReport, SubadditivityReport};

use std::io;

use num_bigint::BigInt;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimator::{
    exact_estimate_in, rational_str, EstimateRecord, EstimatorError, TraceEntry,
};
use crate::executor::TableStore;
use crate::proglang::{ProgramError, ENCODING_VERSION};
use crate::random::random_unit_state;
use crate::statevec::{Gate, StateError};
use crate::{ExactBasis, Rational};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("output table: {0}")]
    Io(#[from] io::Error),
}

/// Which basis a census ran over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Standard,
    /// Standard basis pushed through [`rotation_circuit`].
    Rotated,
}

/// ROT on every qubit, then a CNOT ladder `(q, q+1)`.
pub fn rotation_circuit(n: usize) -> Vec<Gate> {
    let mut gates: Vec<Gate> = (0..n).map(Gate::rot).collect();
    gates.extend((1..n).map(|q| Gate::cnot(q - 1, q)));
    gates
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub index: usize,
    pub total: Option<u64>,
    pub best: Option<EstimateRecord>,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub version: String,
    pub n: usize,
    pub c: usize,
    pub max_len: usize,
    pub basis: BasisKind,
    pub entries: Vec<CensusEntry>,
    /// `#{i : estimate_i < n - c}`.
    pub count_below: usize,
    /// `2^(n-c)`.
    #[serde(with = "rational_str")]
    pub bound: Rational,
    pub verdict: bool,
}

impl CensusReport {
    pub fn csv_header() -> &'static [&'static str] {
        &[
            "version",
            "n",
            "c",
            "max_len",
            "basis",
            "index",
            "total",
            "program_len",
            "penalty",
            "below_threshold",
        ]
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        let threshold = self.n as i64 - self.c as i64;
        self.entries
            .iter()
            .map(|e| {
                vec![
                    self.version.clone(),
                    self.n.to_string(),
                    self.c.to_string(),
                    self.max_len.to_string(),
                    format!("{:?}", self.basis).to_lowercase(),
                    e.index.to_string(),
                    opt(e.total),
                    opt(e.best.as_ref().map(|b| b.length)),
                    opt(e.best.as_ref().map(|b| b.penalty)),
                    e.total.is_some_and(|t| (t as i64) < threshold).to_string(),
                ]
            })
            .collect()
    }
}

pub(crate) fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn pow2(exp: i64) -> Rational {
    let p = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Estimates every vector of `basis` given `n` and counts those below `n - c`.
pub fn incompressibility_census(
    basis: &ExactBasis,
    kind: BasisKind,
    c: usize,
    max_len: usize,
    store: &mut TableStore,
) -> Result<CensusReport, CensusError> {
    if c == 0 {
        return Err(CensusError::InvalidParameter("c must be at least 1".into()));
    }
    let n = basis.n_qubits();
    let table = store.get(n, max_len, None)?;
    let threshold = n as i64 - c as i64;
    let mut entries = Vec::with_capacity(basis.vectors().len());
    for (index, v) in basis.vectors().iter().enumerate() {
        let est = exact_estimate_in(v, &table, max_len)?;
        entries.push(CensusEntry {
            index,
            total: est.total(),
            best: est.best,
            trace: est.trace,
        });
    }
    let count_below = entries
        .iter()
        .filter(|e| e.total.is_some_and(|t| (t as i64) < threshold))
        .count();
    let bound = pow2(threshold);
    let verdict = Rational::from_integer(count_below.into()) < bound;
    Ok(CensusReport {
        version: ENCODING_VERSION.to_string(),
        n,
        c,
        max_len,
        basis: kind,
        entries,
        count_below,
        bound,
        verdict,
    })
}

/// Census over the standard or the rotated basis of `n` qubits.
pub fn census(
    n: usize,
    c: usize,
    max_len: usize,
    kind: BasisKind,
    store: &mut TableStore,
) -> Result<CensusReport, CensusError> {
    let basis = match kind {
        BasisKind::Standard => ExactBasis::standard(n)?,
        BasisKind::Rotated => ExactBasis::rotated(n, &rotation_circuit(n))?,
    };
    incompressibility_census(&basis, kind, c, max_len, store)
}

/// Monte Carlo stand-in for the continuum statement: the fraction of random
/// rational unit states whose estimate is at least `n - c` (or infinite).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub c: usize,
    pub max_len: usize,
    pub seed: u64,
    pub samples: usize,
    pub at_least: usize,
    pub fraction: f64,
    /// `1 - 2^-c`.
    pub reference: f64,
}

pub fn uniform_sweep(
    n: usize,
    c: usize,
    max_len: usize,
    samples: usize,
    seed: u64,
    store: &mut TableStore,
) -> Result<SweepReport, CensusError> {
    let table = store.get(n, max_len, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let threshold = n as i64 - c as i64;
    let mut at_least = 0;
    for _ in 0..samples {
        let target = random_unit_state(n, &mut rng, 12);
        let est = exact_estimate_in(&target, &table, max_len)?;
        if est.total().is_none_or(|t| t as i64 >= threshold) {
            at_least += 1;
        }
    }
    Ok(SweepReport {
        n,
        c,
        max_len,
        seed,
        samples,
        at_least,
        fraction: if samples == 0 {
            0.0
        } else {
            at_least as f64 / samples as f64
        },
        reference: 1.0 - 0.5f64.powi(c as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_standard_censuses() {
        let mut store = TableStore::in_memory();
        let r = census(2, 1, 12, BasisKind::Standard, &mut store).unwrap();
        assert!(r.count_below < 2 && r.verdict);
        // the cheapest program already costs one bit
        assert_eq!(r.count_below, 0);
        assert_eq!(r.entries[0].total, Some(1));

        let r = census(3, 3, 10, BasisKind::Standard, &mut store).unwrap();
        assert_eq!(r.count_below, 0);
        assert!(r.verdict);

        let r = census(1, 1, 10, BasisKind::Standard, &mut store).unwrap();
        assert_eq!(r.count_below, 0);
        assert!(r.verdict);
    }

    #[test]
    fn c_beyond_n_has_fractional_bound() {
        let mut store = TableStore::in_memory();
        let r = census(1, 3, 8, BasisKind::Standard, &mut store).unwrap();
        assert_eq!(r.bound, Rational::new(1.into(), 4.into()));
        assert!(r.verdict);
        assert!(census(1, 0, 8, BasisKind::Standard, &mut store).is_err());
    }

    #[test]
    fn rotated_basis_census() {
        let mut store = TableStore::in_memory();
        for n in 1..=3 {
            let r = census(n, 1, 12, BasisKind::Rotated, &mut store).unwrap();
            assert!(r.verdict, "n={n}");
            assert_eq!(r.entries.len(), 1 << n);
        }
    }

    #[test]
    fn csv_has_one_row_per_vector() {
        let mut store = TableStore::in_memory();
        let r = census(2, 1, 10, BasisKind::Standard, &mut store).unwrap();
        let rows = r.csv_rows();
        assert_eq!(rows.len(), 4);
        assert!(rows
            .iter()
            .all(|row| row.len() == CensusReport::csv_header().len()));
    }

    #[test]
    fn sweep_is_seeded() {
        let mut store = TableStore::in_memory();
        let a = uniform_sweep(2, 1, 10, 15, 5, &mut store).unwrap();
        let b = uniform_sweep(2, 1, 10, 15, 5, &mut store).unwrap();
        assert_eq!(a, b);
        assert!(a.at_least <= 15);
    }
}
