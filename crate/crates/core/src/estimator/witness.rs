use super::{check_target, EstimateRecord, EstimatorError};
use crate::proglang::{encode, Instr, Program};
use crate::statevec::{fidelity, Gate, StateVector};
use crate::ExactState;

/// X-gate program preparing the basis state `|index>` on `n` qubits.
pub fn witness_program(n: usize, index: usize) -> Result<Program, EstimatorError> {
    let instrs: Vec<Instr> = (0..n)
        .filter(|q| (index >> (n - 1 - q)) & 1 == 1)
        .map(|q| Instr::Gate(Gate::x(q)))
        .collect();
    Ok(encode(&instrs, n)?)
}

/// Description through the most likely standard-basis outcome.
///
/// Some `|e_i>` has `|<e_i|x>|^2 >= 2^-n`, so the returned record pays at most
/// `n` penalty bits on top of a program of at most `n` X gates. Ties go to the
/// smallest index.
pub fn upper_bound_witness(
    target: &ExactState,
    n: usize,
) -> Result<(Program, EstimateRecord), EstimatorError> {
    check_target(target, n)?;
    let mut best_index = 0;
    let mut best_q = target.amps()[0].norm_sqr();
    for (i, a) in target.amps().iter().enumerate().skip(1) {
        let q = a.norm_sqr();
        if q > best_q {
            best_q = q;
            best_index = i;
        }
    }
    let program = witness_program(n, best_index)?;
    let q = fidelity(&StateVector::basis(n, best_index)?, target)?;
    debug_assert_eq!(q, best_q);
    let record = EstimateRecord::new(program.clone(), q).expect("largest overlap is positive");
    Ok((program, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{prepare, tensor};
    use crate::{Rational, Scalar};
    use num_complex::Complex;

    #[test]
    fn classical_target() {
        let (p, rec) = upper_bound_witness(&ExactState::classical("11").unwrap(), 2).unwrap();
        assert_eq!(
            p,
            encode(&[Gate::x(0).into(), Gate::x(1).into()], 2).unwrap()
        );
        assert_eq!(rec.penalty, 0);
    }

    #[test]
    fn picks_larger_overlap_exactly() {
        let rot = prepare::<Rational>(1, &[Gate::rot(0)]).unwrap();
        let target = tensor(&rot, &ExactState::zero(1).unwrap());
        let (p, rec) = upper_bound_witness(&target, 2).unwrap();
        assert_eq!(p, witness_program(2, 0b10).unwrap());
        assert_eq!(rec.fidelity, Rational::ratio(16, 25));
        assert_eq!(rec.penalty, 1);
    }

    #[test]
    fn uniform_target_meets_the_bound() {
        let half = Complex::new(Rational::ratio(1, 2), Rational::ratio(0, 1));
        let target = ExactState::from_amps(2, vec![half; 4]).unwrap();
        let (p, rec) = upper_bound_witness(&target, 2).unwrap();
        assert_eq!(rec.penalty, 2);
        assert_eq!(p.len(), 1);
    }
}
