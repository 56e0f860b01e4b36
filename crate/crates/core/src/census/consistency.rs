use serde::{Deserialize, Serialize};

use super::{opt, CensusError};
use crate::estimator::{exact_estimate_in, shortest_exact_program, EstimateRecord, TraceEntry};
use crate::executor::TableStore;
use crate::proglang::{Program, ENCODING_VERSION};
use crate::ExactState;

/// Largest `b - a` measured over every classical string with `n <= 2` at
/// `max_len = 16`: every string's best description is already penalty-free.
pub const CONSISTENCY_GAP_BOUND: i64 = 0;

/// Quantum estimate `a` (penalties allowed) against the classical-style minimum
/// `b` (only programs reproducing the basis state exactly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRecord {
    pub bits: String,
    pub max_len: usize,
    pub a: Option<u64>,
    pub b: Option<u64>,
    pub b_program: Option<Program>,
    /// `b - a`; never negative.
    pub gap: Option<i64>,
    pub best: Option<EstimateRecord>,
    pub trace: Vec<TraceEntry>,
}

pub fn consistency_report(
    bits: &str,
    max_len: usize,
    store: &mut TableStore,
) -> Result<ConsistencyRecord, CensusError> {
    let target = ExactState::classical(bits)?;
    let table = store.get(target.n_qubits(), max_len, None)?;
    let est = exact_estimate_in(&target, &table, max_len)?;
    let b_program = shortest_exact_program(&target, &table, max_len)?;
    let a = est.total();
    let b = b_program.as_ref().map(|p| p.len() as u64);
    let gap = match (a, b) {
        (Some(a), Some(b)) => Some(b as i64 - a as i64),
        _ => None,
    };
    Ok(ConsistencyRecord {
        bits: bits.to_string(),
        max_len,
        a,
        b,
        b_program,
        gap,
        best: est.best,
        trace: est.trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencySweep {
    pub version: String,
    pub n: usize,
    pub max_len: usize,
    pub rows: Vec<ConsistencyRecord>,
    /// Largest gap over the rows where both sides were found.
    pub max_gap: Option<i64>,
}

impl ConsistencySweep {
    pub fn csv_header() -> &'static [&'static str] {
        &["version", "n", "max_len", "bits", "a", "b", "gap"]
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    self.version.clone(),
                    self.n.to_string(),
                    self.max_len.to_string(),
                    r.bits.clone(),
                    opt(r.a),
                    opt(r.b),
                    opt(r.gap),
                ]
            })
            .collect()
    }
}

/// [`consistency_report`] for all `2^n` strings of length `n`.
pub fn consistency_sweep(
    n: usize,
    max_len: usize,
    store: &mut TableStore,
) -> Result<ConsistencySweep, CensusError> {
    if n == 0 || n > 16 {
        return Err(CensusError::InvalidParameter(format!(
            "unsupported n = {n}"
        )));
    }
    let rows = (0..1usize << n)
        .map(|i| consistency_report(&format!("{i:0n$b}"), max_len, store))
        .collect::<Result<Vec<_>, _>>()?;
    let max_gap = rows.iter().filter_map(|r| r.gap).max();
    Ok(ConsistencySweep {
        version: ENCODING_VERSION.to_string(),
        n,
        max_len,
        rows,
        max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proglang::encode;
    use crate::statevec::Gate;

    #[test]
    fn all_zero_string() {
        let mut store = TableStore::in_memory();
        let r = consistency_report("00", 12, &mut store).unwrap();
        assert_eq!((r.a, r.b, r.gap), (Some(1), Some(1), Some(0)));
    }

    #[test]
    fn all_ones_string() {
        let mut store = TableStore::in_memory();
        let r = consistency_report("11", 12, &mut store).unwrap();
        let xx = encode(&[Gate::x(0).into(), Gate::x(1).into()], 2).unwrap();
        assert_eq!(r.b, Some(xx.len() as u64));
        assert_eq!(r.b_program, Some(xx));
        assert!(r.gap.unwrap() >= 0);
    }

    #[test]
    fn sweep_gaps_are_nonnegative() {
        let mut store = TableStore::in_memory();
        let s = consistency_sweep(2, 12, &mut store).unwrap();
        assert_eq!(s.rows.len(), 4);
        assert!(s.rows.iter().all(|r| r.gap.is_some_and(|g| g >= 0)));
        assert_eq!(s.csv_rows().len(), 4);
    }

    #[test]
    fn unreachable_string_has_no_gap() {
        let mut store = TableStore::in_memory();
        let r = consistency_report("11", 7, &mut store).unwrap();
        assert_eq!(r.b, None);
        assert_eq!(r.gap, None);
    }
}
