//! Shannon-Fano code lengths for redescribing a target given a computed state.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{fidelity, Basis, StateError, StateVector};
use crate::scalar::{least_doubling, Scalar};
use crate::Rational;

/// `ceil(-log2 q)` as a code length; `Infinite` when `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Penalty {
    Bits(u32),
    Infinite,
}

impl Penalty {
    pub fn bits(self) -> Option<u32> {
        match self {
            Penalty::Bits(d) => Some(d),
            Penalty::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Penalty::Bits(_))
    }
}

impl Ord for Penalty {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Penalty::Bits(a), Penalty::Bits(b)) => a.cmp(b),
            (Penalty::Bits(_), Penalty::Infinite) => Ordering::Less,
            (Penalty::Infinite, Penalty::Bits(_)) => Ordering::Greater,
            (Penalty::Infinite, Penalty::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Penalty {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Penalty::Bits(d) => write!(f, "{d}"),
            Penalty::Infinite => f.write_str("inf"),
        }
    }
}

/// Least `d >= 0` with `q >= 2^-d`.
///
/// Found by doubling `q` until it reaches 1, which is an exact comparison in the
/// rational field. Non-positive `q` has no finite code length.
pub fn penalty_bits<T: Scalar>(q: &T) -> Penalty {
    match least_doubling(q) {
        Some(d) => Penalty::Bits(d),
        None => Penalty::Infinite,
    }
}

/// Code length of each basis vector given the state `z`.
pub fn shannon_fano_lengths<T: Scalar>(
    basis: &Basis<T>,
    z: &StateVector<T>,
) -> Result<Vec<Penalty>, StateError> {
    basis
        .vectors()
        .iter()
        .map(|e| fidelity(e, z).map(|q| penalty_bits(&q)))
        .collect()
}

/// `sum 2^-l` over the finite lengths, exactly.
pub fn kraft_sum(lengths: &[Penalty]) -> Rational {
    lengths
        .iter()
        .filter_map(|l| l.bits())
        .fold(Rational::zero(), |acc, d| {
            acc + Rational::new(BigInt::one(), BigInt::one() << d)
        })
}

/// Classical Shannon-Fano codewords for a distribution.
///
/// Symbols are sorted by probability (descending, ties by index); symbol `i` gets
/// the first `ceil(-log2 p_i)` bits of the binary expansion of the cumulative
/// probability of the symbols before it. Zero-probability symbols get no codeword.
pub fn shannon_fano_codewords(probs: &[Rational]) -> Vec<Option<String>> {
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[b].cmp(&probs[a]).then(a.cmp(&b)));

    let mut out = vec![None; probs.len()];
    let mut cumulative = Rational::zero();
    for i in order {
        let p = &probs[i];
        if let Penalty::Bits(len) = penalty_bits(p) {
            // floor(cumulative * 2^len) written with `len` digits
            let scaled = &cumulative * Rational::from_integer(BigInt::one() << len);
            let word = scaled.floor().to_integer();
            let digits = if len == 0 {
                String::new()
            } else {
                format!("{word:0>width$b}", width = len as usize)
            };
            out[i] = Some(digits);
        }
        cumulative += p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{apply_gate, Gate};
    use crate::ExactState;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn penalty_examples() {
        assert_eq!(penalty_bits(&r(1, 1)), Penalty::Bits(0));
        assert_eq!(penalty_bits(&r(1, 4)), Penalty::Bits(2));
        assert_eq!(penalty_bits(&r(9, 25)), Penalty::Bits(2));
        assert_eq!(penalty_bits(&r(0, 1)), Penalty::Infinite);
        assert_eq!(penalty_bits(&r(1, 2)), Penalty::Bits(1));
        assert_eq!(penalty_bits(&r(1, 3)), Penalty::Bits(2));
    }

    #[test]
    fn infinite_sorts_last() {
        assert!(Penalty::Bits(1000) < Penalty::Infinite);
        assert_eq!(Penalty::Infinite.to_string(), "inf");
    }

    #[test]
    fn lengths_for_simple_states() {
        let basis = Basis::<Rational>::standard(1).unwrap();
        let zero = ExactState::zero(1).unwrap();
        assert_eq!(
            shannon_fano_lengths(&basis, &zero).unwrap(),
            vec![Penalty::Bits(0), Penalty::Infinite]
        );
        let rot = apply_gate(&zero, &Gate::rot(0)).unwrap();
        let lengths = shannon_fano_lengths(&basis, &rot).unwrap();
        assert_eq!(lengths, vec![Penalty::Bits(2), Penalty::Bits(1)]);
        assert!(kraft_sum(&lengths) <= r(2, 1));
    }

    #[test]
    fn codewords_are_prefix_free() {
        let probs = vec![r(9, 25), r(16, 25)];
        let words = shannon_fano_codewords(&probs);
        assert_eq!(words, vec![Some("10".to_string()), Some("0".to_string())]);

        let probs = vec![r(1, 4), r(1, 2), r(0, 1), r(1, 8), r(1, 8)];
        let words: Vec<String> = shannon_fano_codewords(&probs)
            .into_iter()
            .flatten()
            .collect();
        assert_eq!(words.len(), 4);
        for a in &words {
            for b in &words {
                if a != b {
                    assert!(!b.starts_with(a.as_str()), "{a} prefixes {b}");
                }
            }
        }
    }

    #[test]
    fn certain_outcome_gets_empty_codeword() {
        let words = shannon_fano_codewords(&[r(1, 1), r(0, 1)]);
        assert_eq!(words, vec![Some(String::new()), None]);
    }
}
