//! Input language of the reference machine.
//!
//! A program is a bit string: an Elias-gamma header holding `gate_count + 1`,
//! followed by `gate_count` instructions, each a 3-bit opcode plus fixed-width
//! qubit operands.
//!
//! | opcode | instruction | operands        |
//! |--------|-------------|-----------------|
//! | `000`  | X           | target          |
//! | `001`  | CNOT        | control, target |
//! | `010`  | ROT         | target          |
//! | `011`  | PHASE       | target          |
//! | `100`  | CALLC       | none            |
//!
//! Opcodes `101`-`111` are invalid. Operands are `ceil(log2 n)` bits wide (one bit
//! when `n = 1`). The header fixes how many bits are read, so the set of programs
//! that decode with no trailing bits is prefix-free.

mod codec;
mod enumerate;

pub use codec::{decode, decode_conditional, elias_gamma, encode, Decoded};
pub use enumerate::{
    enumerate, kraft_sum_up_to, verify_prefix_free, verify_prefix_free_with, Enumerator,
};

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::statevec::Gate;

/// Tag embedded in every persisted artifact that depends on the encoding.
pub const ENCODING_VERSION: &str = "qkc-enc-v1";

pub(crate) const OP_X: u8 = 0b000;
pub(crate) const OP_CNOT: u8 = 0b001;
pub(crate) const OP_ROT: u8 = 0b010;
pub(crate) const OP_PHASE: u8 = 0b011;
pub(crate) const OP_CALLC: u8 = 0b100;
pub(crate) const OPCODE_BITS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgramError {
    #[error("program truncated")]
    Truncated,
    #[error("gate-count header too large")]
    HeaderOverflow,
    #[error("invalid opcode {0:03b}")]
    InvalidOpcode(u8),
    #[error("qubit index {index} out of range for n = {n}")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("CNOT control equals target ({0})")]
    CnotSameQubit(usize),
    #[error("{trailing} trailing bits after a complete program")]
    TrailingBits { trailing: usize },
    #[error("CALLC inside a conditional program")]
    NestedCall,
    #[error("CALLC with no conditional program supplied")]
    MissingConditional,
    #[error("qubit count must be positive")]
    NoQubits,
    #[error("malformed program text: {0}")]
    Malformed(String),
}

/// Per-`n` field widths of the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingSpec {
    n: usize,
}

impl EncodingSpec {
    pub fn new(n: usize) -> Result<Self, ProgramError> {
        if n == 0 {
            return Err(ProgramError::NoQubits);
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn version(&self) -> &'static str {
        ENCODING_VERSION
    }

    /// Bits per qubit operand.
    pub fn index_width(&self) -> usize {
        if self.n <= 1 {
            1
        } else {
            (usize::BITS - (self.n - 1).leading_zeros()) as usize
        }
    }

    /// Encoded size of one instruction.
    pub fn instr_width(&self, instr: &Instr) -> usize {
        match instr {
            Instr::CallConditional => OPCODE_BITS,
            Instr::Gate(Gate::Cnot { .. }) => OPCODE_BITS + 2 * self.index_width(),
            Instr::Gate(_) => OPCODE_BITS + self.index_width(),
        }
    }

    /// Every instruction valid for this `n`, in opcode then operand order.
    pub fn instruction_set(&self) -> Vec<Instr> {
        let n = self.n;
        let mut out: Vec<Instr> = (0..n).map(|q| Instr::Gate(Gate::x(q))).collect();
        for c in 0..n {
            for t in (0..n).filter(|&t| t != c) {
                out.push(Instr::Gate(Gate::cnot(c, t)));
            }
        }
        out.extend((0..n).map(|q| Instr::Gate(Gate::rot(q))));
        out.extend((0..n).map(|q| Instr::Gate(Gate::phase(q))));
        out.push(Instr::CallConditional);
        out
    }
}

/// One decoded instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instr {
    Gate(Gate),
    /// Inline the conditional program's gates here.
    CallConditional,
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Gate(g) => g.fmt(f),
            Instr::CallConditional => f.write_str("CALLC"),
        }
    }
}

/// Parses the [`Display`](fmt::Display) form, e.g. `CNOT(0,1)` or `CALLC`.
impl std::str::FromStr for Instr {
    type Err = ProgramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("CALLC") {
            return Ok(Instr::CallConditional);
        }
        let bad = || ProgramError::Malformed(format!("cannot parse instruction {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let args = args
            .split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let gate = match (name.trim().to_ascii_uppercase().as_str(), args.as_slice()) {
            ("X", &[t]) => Gate::x(t),
            ("CNOT", &[c, t]) => Gate::cnot(c, t),
            ("ROT", &[t]) => Gate::rot(t),
            ("PHASE", &[t]) => Gate::phase(t),
            _ => return Err(bad()),
        };
        Ok(Instr::Gate(gate))
    }
}

impl From<Gate> for Instr {
    fn from(g: Gate) -> Self {
        Instr::Gate(g)
    }
}

/// A parsed straight-line program.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DecodedProgram {
    instrs: Vec<Instr>,
}

impl DecodedProgram {
    pub fn new(instrs: Vec<Instr>) -> Self {
        Self { instrs }
    }

    pub fn from_gates(gates: &[Gate]) -> Self {
        Self {
            instrs: gates.iter().copied().map(Instr::Gate).collect(),
        }
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    /// The count declared in the header.
    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Positions of CALLC instructions.
    pub fn call_sites(&self) -> Vec<usize> {
        self.instrs
            .iter()
            .enumerate()
            .filter(|(_, i)| matches!(i, Instr::CallConditional))
            .map(|(pos, _)| pos)
            .collect()
    }

    /// The gates this program's own instructions name (CALLC excluded).
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.instrs.iter().filter_map(|i| match i {
            Instr::Gate(g) => Some(g),
            Instr::CallConditional => None,
        })
    }

    /// Straight-line gate list with every CALLC replaced by the conditional's gates.
    pub fn expand(&self, conditional: Option<&DecodedProgram>) -> Result<Vec<Gate>, ProgramError> {
        if let Some(c) = conditional {
            if !c.call_sites().is_empty() {
                return Err(ProgramError::NestedCall);
            }
        }
        let mut out = Vec::with_capacity(self.instrs.len());
        for i in &self.instrs {
            match i {
                Instr::Gate(g) => out.push(*g),
                Instr::CallConditional => {
                    let c = conditional.ok_or(ProgramError::MissingConditional)?;
                    out.extend(c.gates().copied());
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for DecodedProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, ins) in self.instrs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            ins.fmt(f)?;
        }
        f.write_str("]")
    }
}

/// A raw program bit string. Ordered by length, then by numeric value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    bits: Vec<bool>,
}

impl Program {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse_bits(s: &str) -> Result<Self, ProgramError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ProgramError::Malformed(format!("bad bit {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `l(p)`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Numeric value of the bits, first bit most significant, as
    /// `ceil(len / 4)` hex digits.
    pub fn to_hex(&self) -> String {
        let digits = self.bits.len().div_ceil(4);
        let pad = digits * 4 - self.bits.len();
        let padded: Vec<bool> = std::iter::repeat_n(false, pad)
            .chain(self.bits.iter().copied())
            .collect();
        padded
            .chunks(4)
            .map(|c| {
                let v = c.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }

    /// Inverse of [`Program::to_hex`].
    pub fn from_hex(len: usize, hex: &str) -> Result<Self, ProgramError> {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.trim().chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| ProgramError::Malformed(format!("bad hex digit {c:?}")))?;
            bits.extend((0..4).rev().map(|k| (v >> k) & 1 == 1));
        }
        if bits.len() < len {
            let pad = len - bits.len();
            bits.splice(0..0, std::iter::repeat_n(false, pad));
        }
        let excess = bits.len() - len;
        if bits[..excess].iter().any(|&b| b) {
            return Err(ProgramError::Malformed(format!(
                "hex {hex:?} exceeds {len} bits"
            )));
        }
        bits.drain(..excess);
        Ok(Self { bits })
    }

    pub fn to_json(&self) -> ProgramJson {
        ProgramJson {
            len: self.len(),
            bits_hex: self.to_hex(),
        }
    }
}

impl Ord for Program {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Program {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Wire form of a [`Program`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramJson {
    pub len: usize,
    pub bits_hex: String,
}

impl Serialize for Program {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Program {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = ProgramJson::deserialize(deserializer)?;
        Program::from_hex(j.len, &j.bits_hex).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instr_text_round_trip() {
        for ins in EncodingSpec::new(3).unwrap().instruction_set() {
            assert_eq!(ins.to_string().parse::<Instr>().unwrap(), ins);
        }
        assert_eq!(" rot( 2 ) ".parse::<Instr>().unwrap(), Gate::rot(2).into());
        for bad in ["", "X", "X()", "X(1,2)", "CNOT(0)", "H(0)", "X(-1)"] {
            assert!(bad.parse::<Instr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn index_widths() {
        let w = |n| EncodingSpec::new(n).unwrap().index_width();
        assert_eq!(
            (w(1), w(2), w(3), w(4), w(5), w(8), w(9)),
            (1, 1, 2, 2, 3, 3, 4)
        );
        assert!(EncodingSpec::new(0).is_err());
    }

    #[test]
    fn hex_round_trip_keeps_leading_zeros() {
        let p = Program::parse_bits("0100000").unwrap();
        assert_eq!(p.to_hex(), "20");
        assert_eq!(Program::from_hex(7, "20").unwrap(), p);
        let p = Program::parse_bits("0001").unwrap();
        assert_eq!(p.to_hex(), "1");
        assert_eq!(Program::from_hex(4, "1").unwrap(), p);
        assert!(Program::from_hex(3, "f").is_err());
        assert_eq!(
            serde_json::to_string(&Program::parse_bits("1").unwrap()).unwrap(),
            r#"{"len":1,"bits_hex":"1"}"#
        );
    }

    #[test]
    fn ordering_is_length_then_value() {
        let mut v: Vec<Program> = ["11", "1", "011", "00", "010"]
            .iter()
            .map(|s| Program::parse_bits(s).unwrap())
            .collect();
        v.sort();
        let s: Vec<String> = v.iter().map(|p| p.to_bit_string()).collect();
        assert_eq!(s, ["1", "00", "11", "010", "011"]);
    }

    #[test]
    fn expand_inlines_conditional() {
        let p = DecodedProgram::new(vec![Instr::CallConditional, Gate::x(0).into()]);
        let c = DecodedProgram::from_gates(&[Gate::rot(0)]);
        assert_eq!(p.expand(Some(&c)).unwrap(), vec![Gate::rot(0), Gate::x(0)]);
        assert_eq!(p.expand(None), Err(ProgramError::MissingConditional));
        assert_eq!(p.expand(Some(&p)), Err(ProgramError::NestedCall));
        assert_eq!(p.call_sites(), vec![0]);
    }
}
