//! Runs programs on the reference machine.
//!
//! Every run starts from `|0^n>` and applies the program's gates in order; CALLC
//! inlines the conditional program. A program that fails to decode (or calls a
//! conditional that was not supplied) does not halt.

mod cache;
mod dovetail;

pub use cache::{CacheStats, CachedOutput, OutputCache, OutputTable, TableStore};
pub use dovetail::{dovetail, Dovetail};

use serde::{Deserialize, Serialize};

use crate::proglang::{decode, DecodedProgram, Program};
use crate::statevec::Gate;
use crate::ExactState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Halted,
    DecodeFailed,
}

/// Outcome of running one program.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub program: Program,
    /// Present iff the program halted.
    pub output: Option<ExactState>,
    /// Gate applications, including inlined conditional gates.
    pub steps: u64,
    pub status: RunStatus,
}

impl RunResult {
    pub(crate) fn failed(program: Program) -> Self {
        Self {
            program,
            output: None,
            steps: 0,
            status: RunStatus::DecodeFailed,
        }
    }

    pub fn halted(&self) -> bool {
        self.status == RunStatus::Halted
    }
}

/// Decodes and expands `program`; `None` means it does not halt.
pub(crate) fn compile(
    program: &Program,
    n: usize,
    conditional: Option<&DecodedProgram>,
) -> Option<Vec<Gate>> {
    let decoded = decode(program.bits(), n, true).ok()?;
    let gates = decoded.program.expand(conditional).ok()?;
    // conditionals are supplied out of band and may reference foreign qubits
    if gates.iter().any(|g| g.max_qubit() >= n) {
        return None;
    }
    Some(gates)
}

/// `U(p, n)` with an optional conditional program.
pub fn run(program: &Program, n: usize, conditional: Option<&DecodedProgram>) -> RunResult {
    let Some(gates) = compile(program, n, conditional) else {
        return RunResult::failed(program.clone());
    };
    let mut state = ExactState::zero(n).expect("positive n");
    if state.apply_all(&gates).is_err() {
        return RunResult::failed(program.clone());
    }
    RunResult {
        program: program.clone(),
        output: Some(state),
        steps: gates.len() as u64,
        status: RunStatus::Halted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proglang::{encode, Instr};
    use crate::statevec::prepare;
    use crate::Rational;

    #[test]
    fn empty_program_outputs_zero_state() {
        let r = run(&encode(&[], 2).unwrap(), 2, None);
        assert_eq!(r.output, Some(ExactState::zero(2).unwrap()));
        assert_eq!(r.steps, 0);
        assert!(r.halted());
    }

    #[test]
    fn rotation_program() {
        let r = run(&encode(&[Gate::rot(0).into()], 1).unwrap(), 1, None);
        assert_eq!(
            r.output,
            Some(prepare::<Rational>(1, &[Gate::rot(0)]).unwrap())
        );
    }

    #[test]
    fn callc_inlines_conditional() {
        let p = encode(&[Instr::CallConditional], 1).unwrap();
        let cond = DecodedProgram::from_gates(&[Gate::x(0)]);
        let r = run(&p, 1, Some(&cond));
        assert_eq!(r.output, Some(ExactState::basis(1, 1).unwrap()));
        assert_eq!(r.steps, 1);

        assert_eq!(run(&p, 1, None).status, RunStatus::DecodeFailed);
        let nested = DecodedProgram::new(vec![Instr::CallConditional]);
        assert_eq!(run(&p, 1, Some(&nested)).status, RunStatus::DecodeFailed);
        let wide = DecodedProgram::from_gates(&[Gate::x(3)]);
        assert_eq!(run(&p, 1, Some(&wide)).status, RunStatus::DecodeFailed);
    }

    #[test]
    fn garbage_does_not_halt() {
        let r = run(&Program::parse_bits("0101010").unwrap(), 2, None);
        assert_eq!(r.status, RunStatus::DecodeFailed);
        assert!(r.output.is_none());
    }
}
