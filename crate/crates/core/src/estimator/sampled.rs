use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_target, EstimatorError, SamplingPlan};
use crate::executor::OutputTable;
use crate::proglang::{DecodedProgram, Program};
use crate::statevec::fidelity;
use crate::{ExactState, Scalar};

/// A halting program together with the success probability of the projective
/// test on its output.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub program: Program,
    pub q: f64,
    /// `log2 q`, kept separately so tiny exact overlaps do not underflow.
    pub log2_q: f64,
}

impl Candidate {
    pub fn new(program: Program, q: f64) -> Self {
        Self {
            program,
            q,
            log2_q: q.log2(),
        }
    }
}

/// `k` simulated measurements of one program's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub program: Program,
    pub length: usize,
    /// Successes.
    pub m: u64,
    pub k: u64,
    /// `l(p) - log2(m / ((1 + epsilon) k))`; absent when `m = 0`.
    pub estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledTraceEntry {
    pub index: usize,
    pub program: Program,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledEstimate {
    pub best: Option<TrialResult>,
    pub trace: Vec<SampledTraceEntry>,
    pub candidates: usize,
    pub plan: SamplingPlan,
    pub seed: u64,
    /// `min l(p) - log2 q_p` with the true overlaps.
    pub ideal: Option<f64>,
}

impl SampledEstimate {
    pub fn estimate(&self) -> Option<f64> {
        self.best.as_ref().and_then(|b| b.estimate)
    }

    /// How far the sampled value lies above the ideal one.
    pub fn excess(&self) -> Option<f64> {
        Some(self.estimate()? - self.ideal?)
    }
}

/// `min_p l(p) - log2 q_p` over candidates with `q_p > 0`.
pub fn ideal_value(candidates: &[Candidate]) -> Option<f64> {
    candidates
        .iter()
        .filter(|c| c.q > 0.0 || c.log2_q.is_finite())
        .map(|c| c.program.len() as f64 - c.log2_q)
        .min_by(f64::total_cmp)
}

fn trials(q: f64, k: u64, seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let p = q.clamp(0.0, 1.0);
    (0..k).filter(|_| rng.gen_bool(p)).count() as u64
}

/// Runs `plan.k` Bernoulli(`q`) trials per candidate and keeps the running
/// minimum of `l(p) - log2(m / ((1 + epsilon) k))` in candidate order.
///
/// Candidate `i` draws from its own ChaCha stream `(seed, i)`, so the result does
/// not depend on how trials are scheduled across threads.
pub fn sample_candidates(
    candidates: &[Candidate],
    plan: SamplingPlan,
    seed: u64,
) -> SampledEstimate {
    let k = plan.k;
    let scale = ((1.0 + plan.epsilon) * k as f64).log2();
    let results: Vec<TrialResult> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let m = trials(c.q, k, seed, i);
            let length = c.program.len();
            let estimate = (m > 0).then(|| length as f64 - (m as f64).log2() + scale);
            TrialResult {
                program: c.program.clone(),
                length,
                m,
                k,
                estimate,
            }
        })
        .collect();

    let mut best: Option<TrialResult> = None;
    let mut trace = Vec::new();
    for (index, r) in results.into_iter().enumerate() {
        let Some(e) = r.estimate else { continue };
        // strict improvement only: on ties the earlier (shorter) program stays
        if best.as_ref().and_then(|b| b.estimate).is_none_or(|b| e < b) {
            trace.push(SampledTraceEntry {
                index,
                program: r.program.clone(),
                estimate: e,
            });
            best = Some(r);
        }
    }
    SampledEstimate {
        best,
        trace,
        candidates: candidates.len(),
        plan,
        seed,
        ideal: ideal_value(candidates),
    }
}

/// Sampled estimate of the target's complexity over programs of length
/// `<= max_len`, with measurement outcomes simulated from the exact overlaps.
pub fn sampled_estimate(
    target: &ExactState,
    n: usize,
    conditional: Option<&DecodedProgram>,
    plan: SamplingPlan,
    max_len: usize,
    seed: u64,
) -> Result<SampledEstimate, EstimatorError> {
    check_target(target, n)?;
    let table = OutputTable::compute(n, max_len, conditional);
    sampled_estimate_in(target, &table, plan, max_len, seed)
}

/// [`sampled_estimate`] over a precomputed output table.
pub fn sampled_estimate_in(
    target: &ExactState,
    table: &OutputTable,
    plan: SamplingPlan,
    max_len: usize,
    seed: u64,
) -> Result<SampledEstimate, EstimatorError> {
    check_target(target, table.n)?;
    let candidates = table
        .up_to(max_len)
        .map(|e| {
            let q = fidelity(target, &e.output)?;
            Ok(Candidate {
                program: e.program.clone(),
                q: q.to_f64_lossy(),
                log2_q: q.log2_lossy(),
            })
        })
        .collect::<Result<Vec<_>, EstimatorError>>()?;
    Ok(sample_candidates(&candidates, plan, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::is_non_increasing;

    fn prog(s: &str) -> Program {
        Program::parse_bits(s).unwrap()
    }

    #[test]
    fn certain_success_gives_closed_form() {
        let plan = SamplingPlan::unchecked(0.05, 0.25, 500);
        let est = sample_candidates(&[Candidate::new(prog("1"), 1.0)], plan, 7);
        let best = est.best.unwrap();
        assert_eq!(best.m, 500);
        let expect = 1.0 + 1.25f64.log2();
        assert!((best.estimate.unwrap() - expect).abs() < 1e-12);
        assert!(best.estimate.unwrap() <= 1.0 + 0.322);
    }

    #[test]
    fn law_of_large_numbers_on_half() {
        let plan = SamplingPlan::unchecked(0.05, 1e-9, 100_000);
        let cands = [
            Candidate::new(prog("0100000"), 0.5),
            Candidate::new(prog("0100001"), 0.0),
        ];
        let est = sample_candidates(&cands, plan, 11);
        let e = est.estimate().unwrap();
        assert!((e - 8.0).abs() < 0.1, "estimate {e}");
        assert_eq!(est.ideal, Some(8.0));
    }

    #[test]
    fn no_successes_means_no_estimate() {
        let plan = SamplingPlan::unchecked(0.05, 0.25, 50);
        let est = sample_candidates(&[Candidate::new(prog("1"), 0.0)], plan, 1);
        assert!(est.best.is_none());
        assert!(est.ideal.is_none());
    }

    #[test]
    fn seeded_runs_are_reproducible_and_monotone() {
        let plan = SamplingPlan::unchecked(0.05, 0.25, 300);
        let cands: Vec<_> = (0..40)
            .map(|i| {
                Candidate::new(
                    Program::from_bits(vec![i % 3 == 0; 8 + i / 4]),
                    0.02 * (i % 7) as f64,
                )
            })
            .collect();
        let a = sample_candidates(&cands, plan, 99);
        let b = sample_candidates(&cands, plan, 99);
        assert_eq!(a, b);
        assert!(is_non_increasing(a.trace.iter().map(|t| t.estimate)));
        assert_ne!(a, sample_candidates(&cands, plan, 100));
    }
}
