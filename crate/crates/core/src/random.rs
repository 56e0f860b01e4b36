//! Pseudo-random exact states and programs.

use num_complex::Complex;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::proglang::{EncodingSpec, Instr};
use crate::statevec::Gate;
use crate::{ExactState, Rational};

/// Random unit vector with Gaussian-rational amplitudes.
///
/// A random rational point `t` of `R^(D-1)`, `D = 2^(n+1)`, is lifted onto the
/// unit sphere of `R^D` by inverse stereographic projection
/// `(2t, |t|^2 - 1) / (|t|^2 + 1)`, which keeps every coordinate rational and the
/// norm exactly 1. Coordinates are shuffled and paired into complex amplitudes.
/// Numerators and denominators of `t` are drawn from `1..=max_term`.
pub fn random_unit_state<R: Rng + ?Sized>(n: usize, rng: &mut R, max_term: i64) -> ExactState {
    let dim_real = 2usize << n;
    let t: Vec<Rational> = (0..dim_real - 1)
        .map(|_| {
            let num = rng.gen_range(-max_term..=max_term);
            let den = rng.gen_range(1..=max_term);
            Rational::new(num.into(), den.into())
        })
        .collect();
    let s = t
        .iter()
        .fold(Rational::from_integer(0.into()), |acc, x| acc + x * x);
    let denom = &s + Rational::one();
    let two = Rational::from_integer(2.into());
    let mut coords: Vec<Rational> = t.iter().map(|x| &two * x / &denom).collect();
    coords.push((&s - Rational::one()) / &denom);
    coords.shuffle(rng);
    let amps = coords
        .chunks(2)
        .map(|c| Complex::new(c[0].clone(), c[1].clone()))
        .collect();
    ExactState::from_amps(n, amps).expect("stereographic lift has unit norm")
}

/// Random gate from the fixed set (no CALLC).
pub fn random_gate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gate {
    let set: Vec<Gate> = EncodingSpec::new(n)
        .expect("positive n")
        .instruction_set()
        .into_iter()
        .filter_map(|i| match i {
            Instr::Gate(g) => Some(g),
            Instr::CallConditional => None,
        })
        .collect();
    *set.choose(rng).expect("non-empty gate set")
}

/// `count` random gates.
pub fn random_gates<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<Gate> {
    (0..count).map(|_| random_gate(n, rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn states_are_exactly_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for _ in 0..20 {
                let s = random_unit_state(n, &mut rng, 9);
                assert_eq!(s.dim(), 1 << n);
                assert_eq!(s.norm_sqr(), Rational::one());
            }
        }
    }

    #[test]
    fn gates_are_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for g in random_gates(3, 200, &mut rng) {
            assert!(g.max_qubit() < 3);
        }
        // single qubit: no CNOT available
        assert!(random_gates(1, 100, &mut rng)
            .iter()
            .all(|g| !matches!(g, Gate::Cnot { .. })));
    }
}
