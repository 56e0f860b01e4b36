use std::collections::VecDeque;
use std::iter::Fuse;

use super::{compile, RunResult, RunStatus};
use crate::proglang::{DecodedProgram, Program};
use crate::statevec::Gate;
use crate::ExactState;

struct Running {
    /// 1-based admission index `j` of the program `p_j`.
    index: usize,
    program: Program,
    gates: Vec<Gate>,
    state: ExactState,
    done: usize,
}

/// Staged interleaving of a program stream.
///
/// Stage `k` admits `p_k` and then gives `p_{k-i+1}` its `i`-th step for
/// `i = 1..=k`, newest program first. One step is one gate application; a program
/// halts in the step that applies its last gate (an empty program halts in its
/// first scheduled step). Programs that do not decode are emitted as
/// `DecodeFailed` when admitted.
pub struct Dovetail<I: Iterator<Item = Program>> {
    source: Fuse<I>,
    n: usize,
    conditional: Option<DecodedProgram>,
    budget: Option<u64>,
    spent: u64,
    stage: u64,
    admitted: usize,
    running: Vec<Running>,
    progress: Vec<u64>,
    ready: VecDeque<RunResult>,
    exhausted: bool,
}

/// Dovetails `programs`; `step_budget = None` runs to completion.
pub fn dovetail<I: IntoIterator<Item = Program>>(
    programs: I,
    n: usize,
    conditional: Option<DecodedProgram>,
    step_budget: Option<u64>,
) -> Dovetail<I::IntoIter> {
    Dovetail {
        source: programs.into_iter().fuse(),
        n,
        conditional,
        budget: step_budget,
        spent: 0,
        stage: 0,
        admitted: 0,
        running: Vec::new(),
        progress: Vec::new(),
        ready: VecDeque::new(),
        exhausted: false,
    }
}

impl<I: Iterator<Item = Program>> Dovetail<I> {
    /// Number of completed stages.
    pub fn stage(&self) -> u64 {
        self.stage
    }

    /// Gate steps received so far by `p_j`, indexed by `j - 1`.
    pub fn progress(&self) -> &[u64] {
        &self.progress
    }

    /// Whether the step budget ran out.
    pub fn budget_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn steps_spent(&self) -> u64 {
        self.spent
    }

    /// Admitted programs that have not halted.
    pub fn unfinished(&self) -> Vec<Program> {
        self.running.iter().map(|r| r.program.clone()).collect()
    }

    /// Programs never admitted.
    pub fn into_unadmitted(self) -> Fuse<I> {
        self.source
    }

    /// Runs one full stage. Returns `false` when there is nothing left to do.
    pub fn run_stage(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        let admitted_now = match self.source.next() {
            Some(program) => {
                self.admitted += 1;
                self.progress.push(0);
                match compile(&program, self.n, self.conditional.as_ref()) {
                    Some(gates) => self.running.push(Running {
                        index: self.admitted,
                        program,
                        gates,
                        state: ExactState::zero(self.n).expect("positive n"),
                        done: 0,
                    }),
                    None => self.ready.push_back(RunResult::failed(program)),
                }
                true
            }
            None => false,
        };
        if !admitted_now && self.running.is_empty() {
            return false;
        }
        self.stage += 1;

        let mut halted = Vec::new();
        for slot in (0..self.running.len()).rev() {
            let r = &mut self.running[slot];
            if r.done < r.gates.len() {
                if self.budget.is_some_and(|b| self.spent >= b) {
                    self.exhausted = true;
                    break;
                }
                r.state
                    .apply_mut(&r.gates[r.done])
                    .expect("compiled gates are in range");
                r.done += 1;
                self.spent += 1;
                self.progress[r.index - 1] += 1;
            }
            if r.done == r.gates.len() {
                halted.push(slot);
            }
        }
        // `halted` is in descending slot order, so removal keeps indices valid
        for slot in halted {
            let r = self.running.remove(slot);
            self.ready.push_back(RunResult {
                program: r.program,
                output: Some(r.state),
                steps: r.done as u64,
                status: RunStatus::Halted,
            });
        }
        true
    }
}

impl<I: Iterator<Item = Program>> Iterator for Dovetail<I> {
    type Item = RunResult;

    fn next(&mut self) -> Option<RunResult> {
        loop {
            if let Some(r) = self.ready.pop_front() {
                return Some(r);
            }
            if !self.run_stage() {
                return self.ready.pop_front();
            }
        }
    }
}
