use super::{
    DecodedProgram, EncodingSpec, Instr, Program, ProgramError, OPCODE_BITS, OP_CALLC, OP_CNOT,
    OP_PHASE, OP_ROT, OP_X,
};
use crate::statevec::Gate;

/// Elias-gamma code of `value >= 1`: `floor(log2 value)` zeros, then `value` in
/// binary.
pub fn elias_gamma(value: u64) -> Vec<bool> {
    assert!(value >= 1, "Elias gamma does not encode 0");
    let width = 64 - value.leading_zeros() as usize;
    let mut out = vec![false; width - 1];
    out.extend((0..width).rev().map(|k| (value >> k) & 1 == 1));
    out
}

fn push_uint(out: &mut Vec<bool>, value: usize, width: usize) {
    out.extend((0..width).rev().map(|k| (value >> k) & 1 == 1));
}

fn check_index(q: usize, n: usize) -> Result<(), ProgramError> {
    if q >= n {
        Err(ProgramError::QubitOutOfRange { index: q, n })
    } else {
        Ok(())
    }
}

/// Encodes an instruction list for an `n`-qubit register.
pub fn encode(instrs: &[Instr], n: usize) -> Result<Program, ProgramError> {
    let spec = EncodingSpec::new(n)?;
    let w = spec.index_width();
    let mut bits = elias_gamma(instrs.len() as u64 + 1);
    for ins in instrs {
        match *ins {
            Instr::Gate(Gate::X { target }) => {
                check_index(target, n)?;
                push_uint(&mut bits, OP_X as usize, OPCODE_BITS);
                push_uint(&mut bits, target, w);
            }
            Instr::Gate(Gate::Cnot { control, target }) => {
                check_index(control, n)?;
                check_index(target, n)?;
                if control == target {
                    return Err(ProgramError::CnotSameQubit(control));
                }
                push_uint(&mut bits, OP_CNOT as usize, OPCODE_BITS);
                push_uint(&mut bits, control, w);
                push_uint(&mut bits, target, w);
            }
            Instr::Gate(Gate::Rot { target }) => {
                check_index(target, n)?;
                push_uint(&mut bits, OP_ROT as usize, OPCODE_BITS);
                push_uint(&mut bits, target, w);
            }
            Instr::Gate(Gate::Phase { target }) => {
                check_index(target, n)?;
                push_uint(&mut bits, OP_PHASE as usize, OPCODE_BITS);
                push_uint(&mut bits, target, w);
            }
            Instr::CallConditional => push_uint(&mut bits, OP_CALLC as usize, OPCODE_BITS),
        }
    }
    Ok(Program::from_bits(bits))
}

/// Result of a successful decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub program: DecodedProgram,
    pub consumed: usize,
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl Reader<'_> {
    fn bit(&mut self) -> Result<bool, ProgramError> {
        let b = *self.bits.get(self.pos).ok_or(ProgramError::Truncated)?;
        self.pos += 1;
        Ok(b)
    }

    fn uint(&mut self, width: usize) -> Result<u64, ProgramError> {
        if self.pos + width > self.bits.len() {
            return Err(ProgramError::Truncated);
        }
        if width > 63 {
            return Err(ProgramError::HeaderOverflow);
        }
        let v = self.bits[self.pos..self.pos + width]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64);
        self.pos += width;
        Ok(v)
    }

    fn gamma(&mut self) -> Result<u64, ProgramError> {
        let mut zeros = 0usize;
        while !self.bit()? {
            zeros += 1;
        }
        if zeros > 62 {
            return Err(ProgramError::HeaderOverflow);
        }
        Ok((1u64 << zeros) | self.uint(zeros)?)
    }

    fn qubit(&mut self, width: usize, n: usize) -> Result<usize, ProgramError> {
        let q = self.uint(width)? as usize;
        check_index(q, n)?;
        Ok(q)
    }
}

/// Parses a program for an `n`-qubit register.
///
/// With `consume_exactly`, bits left over after the declared instructions make the
/// decode fail; the reference machine treats any failure as non-halting.
pub fn decode(bits: &[bool], n: usize, consume_exactly: bool) -> Result<Decoded, ProgramError> {
    let w = EncodingSpec::new(n)?.index_width();
    let mut r = Reader { bits, pos: 0 };
    let count = r.gamma()? - 1;
    // every instruction takes at least an opcode
    if count as usize > bits.len() / OPCODE_BITS {
        return Err(ProgramError::Truncated);
    }
    let mut instrs = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let op = r.uint(OPCODE_BITS)? as u8;
        let ins = match op {
            OP_X => Instr::Gate(Gate::x(r.qubit(w, n)?)),
            OP_CNOT => {
                let control = r.qubit(w, n)?;
                let target = r.qubit(w, n)?;
                if control == target {
                    return Err(ProgramError::CnotSameQubit(control));
                }
                Instr::Gate(Gate::cnot(control, target))
            }
            OP_ROT => Instr::Gate(Gate::rot(r.qubit(w, n)?)),
            OP_PHASE => Instr::Gate(Gate::phase(r.qubit(w, n)?)),
            OP_CALLC => Instr::CallConditional,
            other => return Err(ProgramError::InvalidOpcode(other)),
        };
        instrs.push(ins);
    }
    if consume_exactly && r.pos != bits.len() {
        return Err(ProgramError::TrailingBits {
            trailing: bits.len() - r.pos,
        });
    }
    Ok(Decoded {
        program: DecodedProgram::new(instrs),
        consumed: r.pos,
    })
}

/// Decodes a program meant to be supplied as a conditional: CALLC is forbidden.
pub fn decode_conditional(bits: &[bool], n: usize) -> Result<DecodedProgram, ProgramError> {
    let d = decode(bits, n, true)?;
    if !d.program.call_sites().is_empty() {
        return Err(ProgramError::NestedCall);
    }
    Ok(d.program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<bool> {
        Program::parse_bits(s).unwrap().bits().to_vec()
    }

    #[test]
    fn gamma_codes() {
        assert_eq!(elias_gamma(1), bits("1"));
        assert_eq!(elias_gamma(2), bits("010"));
        assert_eq!(elias_gamma(3), bits("011"));
        assert_eq!(elias_gamma(4), bits("00100"));
    }

    #[test]
    fn encode_examples() {
        let p = encode(&[], 2).unwrap();
        assert_eq!(p.to_bit_string(), "1");
        let p = encode(&[Gate::x(0).into()], 2).unwrap();
        assert_eq!(p.to_bit_string(), "0100000");
        assert_eq!(p.len(), 7);
        assert_eq!(encode(&[Instr::CallConditional], 2).unwrap().len(), 6);
        assert_eq!(encode(&[Gate::cnot(0, 1).into()], 2).unwrap().len(), 8);
        assert_eq!(
            encode(&[Gate::x(2).into()], 2),
            Err(ProgramError::QubitOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn decode_examples() {
        let d = decode(&bits("1"), 2, true).unwrap();
        assert!(d.program.is_empty());
        assert_eq!(d.consumed, 1);
        assert_eq!(
            decode(&bits("0101010"), 2, true),
            Err(ProgramError::InvalidOpcode(0b101))
        );
        let p = encode(&[Gate::cnot(0, 1).into()], 2).unwrap();
        assert_eq!(
            decode(p.bits(), 2, true).unwrap().program,
            DecodedProgram::from_gates(&[Gate::cnot(0, 1)])
        );
    }

    #[test]
    fn decode_failures() {
        // CNOT(1,1) at n = 2
        assert_eq!(
            decode(&bits("01000111"), 2, true),
            Err(ProgramError::CnotSameQubit(1))
        );
        assert_eq!(
            decode(&bits("010000"), 2, true),
            Err(ProgramError::Truncated)
        );
        assert_eq!(
            decode(&bits("10"), 2, true),
            Err(ProgramError::TrailingBits { trailing: 1 })
        );
        assert_eq!(decode(&bits("10"), 2, false).unwrap().consumed, 1);
        // qubit 3 at n = 3 (two-bit operands)
        assert_eq!(
            decode(&bits("01000011"), 3, true),
            Err(ProgramError::QubitOutOfRange { index: 3, n: 3 })
        );
        assert_eq!(decode(&[], 1, true), Err(ProgramError::Truncated));
        assert_eq!(decode(&[false; 200], 1, true), Err(ProgramError::Truncated));
    }

    #[test]
    fn conditional_may_not_call() {
        let p = encode(&[Instr::CallConditional], 1).unwrap();
        assert_eq!(
            decode_conditional(p.bits(), 1),
            Err(ProgramError::NestedCall)
        );
        let p = encode(&[Gate::x(0).into()], 1).unwrap();
        assert!(decode_conditional(p.bits(), 1).is_ok());
    }

    fn instr_strategy(n: usize) -> impl Strategy<Value = Instr> {
        let spec = EncodingSpec::new(n).unwrap();
        proptest::sample::select(spec.instruction_set())
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..=4, seq in proptest::collection::vec(0usize..1000, 0..12)) {
            let set = EncodingSpec::new(n).unwrap().instruction_set();
            let instrs: Vec<Instr> = seq.iter().map(|&i| set[i % set.len()]).collect();
            let p = encode(&instrs, n).unwrap();
            let d = decode(p.bits(), n, true).unwrap();
            prop_assert_eq!(d.consumed, p.len());
            prop_assert_eq!(d.program.instrs(), &instrs[..]);
            prop_assert_eq!(encode(d.program.instrs(), n).unwrap(), p);
        }

        #[test]
        fn encoded_length_is_header_plus_fields(instrs in proptest::collection::vec(instr_strategy(3), 0..20)) {
            let spec = EncodingSpec::new(3).unwrap();
            let expect = elias_gamma(instrs.len() as u64 + 1).len()
                + instrs.iter().map(|i| spec.instr_width(i)).sum::<usize>();
            prop_assert_eq!(encode(&instrs, 3).unwrap().len(), expect);
        }
    }
}
