use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{opt, CensusError};
use crate::estimator::{exact_estimate_in, rational_str, EstimateRecord};
use crate::executor::TableStore;
use crate::proglang::{decode, decode_conditional, encode, DecodedProgram, Instr, Program};
use crate::statevec::{fidelity, prepare, tensor};
use crate::{ExactState, Rational, Scalar};

struct Prepared {
    decoded: DecodedProgram,
    state: ExactState,
}

fn prepare_program(p: &Program, n: usize) -> Result<Prepared, CensusError> {
    let decoded = decode_conditional(p.bits(), n)?;
    let gates: Vec<_> = decoded.gates().copied().collect();
    let state = prepare::<Rational>(n, &gates)?;
    Ok(Prepared { decoded, state })
}

/// Joint program: `y`'s winner on the second register, then `x`'s winner on the
/// first with every CALLC replaced by `p_y`'s gates.
fn concatenation_length(
    x_best: &EstimateRecord,
    y_best: &EstimateRecord,
    p_y: &DecodedProgram,
    n: usize,
) -> Result<usize, CensusError> {
    let y_prog = decode(y_best.program.bits(), n, true)?.program;
    let x_prog = decode(x_best.program.bits(), n, true)?.program;
    let mut instrs: Vec<Instr> = y_prog
        .expand(None)?
        .into_iter()
        .map(|g| Instr::Gate(g.shifted(n)))
        .collect();
    instrs.extend(x_prog.expand(Some(p_y))?.into_iter().map(Instr::Gate));
    Ok(encode(&instrs, 2 * n)?.len())
}

/// `K(x|p_y) + K(y) - K(x, y)` on the reference machine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub n: usize,
    pub max_len: usize,
    pub p_x: Program,
    pub p_y: Program,
    /// Estimate of `x (x) y` given `2n`.
    pub k_joint: Option<u64>,
    /// Estimate of `x` given `n` and the conditional program `p_y`.
    pub k_x_given_y: Option<u64>,
    pub k_y: Option<u64>,
    pub slack: Option<i64>,
    /// Length of the joint program built from the two single-register winners.
    pub concatenation_len: Option<usize>,
    /// All three estimates exist and the concatenated description fits the bound.
    pub conclusive: bool,
    pub joint_best: Option<EstimateRecord>,
    pub x_given_y_best: Option<EstimateRecord>,
    pub y_best: Option<EstimateRecord>,
}

impl SubadditivityReport {
    pub fn csv_header() -> &'static [&'static str] {
        &[
            "n",
            "max_len",
            "p_x",
            "p_y",
            "k_joint",
            "k_x_given_y",
            "k_y",
            "slack",
            "concatenation_len",
            "conclusive",
        ]
    }

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.max_len.to_string(),
            self.p_x.to_bit_string(),
            self.p_y.to_bit_string(),
            opt(self.k_joint),
            opt(self.k_x_given_y),
            opt(self.k_y),
            opt(self.slack),
            opt(self.concatenation_len),
            self.conclusive.to_string(),
        ]
    }
}

/// Sub-additivity check for the outputs of two CALLC-free programs on `n`
/// qubits each. The joint target is `U(p_x) (x) U(p_y)` with `x` on qubits `0..n`.
pub fn subadditivity_report(
    p_x: &Program,
    p_y: &Program,
    n: usize,
    max_len: usize,
    store: &mut TableStore,
) -> Result<SubadditivityReport, CensusError> {
    let x = prepare_program(p_x, n)?;
    let y = prepare_program(p_y, n)?;
    let joint = tensor(&x.state, &y.state);

    let joint_table = store.get(2 * n, max_len, None)?;
    let joint_est = exact_estimate_in(&joint, &joint_table, max_len)?;
    let cond_table = store.get(n, max_len, Some(&y.decoded))?;
    let x_est = exact_estimate_in(&x.state, &cond_table, max_len)?;
    let plain_table = store.get(n, max_len, None)?;
    let y_est = exact_estimate_in(&y.state, &plain_table, max_len)?;

    let (k_joint, k_x_given_y, k_y) = (joint_est.total(), x_est.total(), y_est.total());
    let slack = match (k_joint, k_x_given_y, k_y) {
        (Some(j), Some(xy), Some(yy)) => Some(xy as i64 + yy as i64 - j as i64),
        _ => None,
    };
    let concatenation_len = match (&x_est.best, &y_est.best) {
        (Some(xb), Some(yb)) => Some(concatenation_length(xb, yb, &y.decoded, n)?),
        _ => None,
    };
    let conclusive = slack.is_some() && concatenation_len.is_some_and(|l| l <= max_len);
    Ok(SubadditivityReport {
        n,
        max_len,
        p_x: p_x.clone(),
        p_y: p_y.clone(),
        k_joint,
        k_x_given_y,
        k_y,
        slack,
        concatenation_len,
        conclusive,
        joint_best: joint_est.best,
        x_given_y_best: x_est.best,
        y_best: y_est.best,
    })
}

/// `K(x, y) <= K(y) - log2 |<x|y>|^2`, with `slack = rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointBoundReport {
    pub n: usize,
    pub max_len: usize,
    pub p_x: Program,
    pub p_y: Program,
    #[serde(with = "rational_str")]
    pub fidelity: Rational,
    /// `false` when `x` and `y` are orthogonal.
    pub applicable: bool,
    pub lhs: Option<u64>,
    pub k_y: Option<u64>,
    /// `-log2 fidelity`.
    pub log_term: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
}

pub fn joint_bound_report(
    p_x: &Program,
    p_y: &Program,
    n: usize,
    max_len: usize,
    store: &mut TableStore,
) -> Result<JointBoundReport, CensusError> {
    let x = prepare_program(p_x, n)?;
    let y = prepare_program(p_y, n)?;
    let q = fidelity(&x.state, &y.state)?;
    let mut report = JointBoundReport {
        n,
        max_len,
        p_x: p_x.clone(),
        p_y: p_y.clone(),
        fidelity: q.clone(),
        applicable: !q.is_zero(),
        lhs: None,
        k_y: None,
        log_term: None,
        rhs: None,
        slack: None,
    };
    if q.is_zero() {
        return Ok(report);
    }
    let joint = tensor(&x.state, &y.state);
    let joint_table = store.get(2 * n, max_len, None)?;
    report.lhs = exact_estimate_in(&joint, &joint_table, max_len)?.total();
    let table = store.get(n, max_len, None)?;
    report.k_y = exact_estimate_in(&y.state, &table, max_len)?.total();
    let log_term = -q.log2_lossy();
    report.log_term = Some(log_term);
    report.rhs = report.k_y.map(|k| k as f64 + log_term);
    report.slack = match (report.rhs, report.lhs) {
        (Some(r), Some(l)) => Some(r - l as f64),
        _ => None,
    };
    Ok(report)
}
