use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::codec::{decode, elias_gamma, encode};
use super::{EncodingSpec, Instr, Program};
use crate::Rational;

/// Lazy stream of every decodable program of length `<= max_len`, ordered by
/// length and then numeric value. Programs are built one length class at a time.
#[derive(Debug, Clone)]
pub struct Enumerator {
    spec: EncodingSpec,
    instrs: Vec<Instr>,
    max_len: usize,
    next_len: usize,
    buffer: VecDeque<Program>,
}

/// Programs of length `<= max_len` for an `n`-qubit register.
pub fn enumerate(max_len: usize, n: usize) -> Enumerator {
    let spec = EncodingSpec::new(n.max(1)).expect("positive n");
    Enumerator {
        spec,
        instrs: spec.instruction_set(),
        max_len,
        next_len: 1,
        buffer: VecDeque::new(),
    }
}

impl Enumerator {
    fn fill(&self, budget: usize, remaining: usize, seq: &mut Vec<Instr>, out: &mut Vec<Program>) {
        if remaining == 0 {
            if budget == 0 {
                out.push(encode(seq, self.spec.n()).expect("instruction set is valid"));
            }
            return;
        }
        for ins in &self.instrs {
            let w = self.spec.instr_width(ins);
            // remaining - 1 further instructions need at least 3 bits each
            if w + 3 * (remaining - 1) <= budget {
                seq.push(*ins);
                self.fill(budget - w, remaining - 1, seq, out);
                seq.pop();
            }
        }
    }

    fn programs_of_length(&self, len: usize) -> Vec<Program> {
        let mut out = Vec::new();
        let mut seq = Vec::new();
        for count in 0.. {
            let header = elias_gamma(count as u64 + 1).len();
            if header + 3 * count > len {
                break;
            }
            self.fill(len - header, count, &mut seq, &mut out);
        }
        out.sort();
        out
    }
}

impl Iterator for Enumerator {
    type Item = Program;

    fn next(&mut self) -> Option<Program> {
        loop {
            if let Some(p) = self.buffer.pop_front() {
                return Some(p);
            }
            if self.next_len > self.max_len {
                return None;
            }
            let len = self.next_len;
            self.next_len += 1;
            self.buffer = self.programs_of_length(len).into();
        }
    }
}

/// Exhaustive prefix-freeness check over all bit strings of length `<= max_len`,
/// using `accepts(bits, n)` as the notion of a valid program.
pub fn verify_prefix_free_with(
    max_len: usize,
    n: usize,
    accepts: impl Fn(&[bool], usize) -> bool,
) -> bool {
    let mut accepted: HashSet<Vec<bool>> = HashSet::new();
    let mut buf = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        for value in 0u64..(1u64 << len) {
            buf.clear();
            buf.extend((0..len).rev().map(|k| (value >> k) & 1 == 1));
            if accepts(&buf, n) {
                accepted.insert(buf.clone());
            }
        }
    }
    accepted
        .iter()
        .all(|p| (1..p.len()).all(|k| !accepted.contains(&p[..k])))
}

/// Whether the decodable programs of length `<= max_len` are prefix-free.
pub fn verify_prefix_free(max_len: usize, n: usize) -> bool {
    verify_prefix_free_with(max_len, n, |bits, n| decode(bits, n, true).is_ok())
}

/// Exact `sum 2^-l(p)` over decodable programs of length `<= max_len`.
pub fn kraft_sum_up_to(max_len: usize, n: usize) -> Rational {
    enumerate(max_len, n).fold(Rational::zero(), |acc, p| {
        acc + Rational::new(BigInt::one(), BigInt::one() << p.len())
    })
}
