//! Exact statevector simulation over the fixed gate set.
//!
//! Amplitudes are `Complex<T>` for a [`Scalar`] `T`; with `T = BigRational` they are
//! Gaussian rationals in canonical reduced form, and every operation here is exact.
//! Qubit 0 is the most significant bit of the amplitude index.

mod code;
mod gate;
mod json;

pub use code::{kraft_sum, penalty_bits, shannon_fano_codewords, shannon_fano_lengths, Penalty};
pub use gate::Gate;
pub use json::StateJson;

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("CNOT control and target are both qubit {0}")]
    CnotSameQubit(usize),
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected {expected} amplitudes, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("state must have at least one qubit")]
    NoQubits,
    #[error("state is not unit norm")]
    NotUnitNorm,
    #[error("basis vectors are not orthonormal ({0}, {1})")]
    NotOrthonormal(usize, usize),
    #[error("malformed state encoding: {0}")]
    Malformed(String),
}

/// Pure state on `n` qubits with `2^n` amplitudes and unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// The computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self, StateError> {
        if n == 0 {
            return Err(StateError::NoQubits);
        }
        let dim = 1usize << n;
        if index >= dim {
            return Err(StateError::QubitOutOfRange { index, n });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n, amps })
    }

    /// `|0...0>`.
    pub fn zero(n: usize) -> Result<Self, StateError> {
        Self::basis(n, 0)
    }

    /// Basis state named by a bit string, qubit 0 first.
    pub fn classical(bits: &str) -> Result<Self, StateError> {
        let n = bits.len();
        let mut index = 0usize;
        for c in bits.chars() {
            index = match c {
                '0' => index << 1,
                '1' => (index << 1) | 1,
                other => return Err(StateError::Malformed(format!("bad bit {other:?}"))),
            };
        }
        Self::basis(n, index)
    }

    /// Validates length and unit norm (exactly, for exact scalars).
    pub fn from_amps(n: usize, amps: Vec<Complex<T>>) -> Result<Self, StateError> {
        if n == 0 {
            return Err(StateError::NoQubits);
        }
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(StateError::WrongLength {
                expected,
                actual: amps.len(),
            });
        }
        let s = Self { n, amps };
        if !s.norm_sqr().near(&T::one()) {
            return Err(StateError::NotUnitNorm);
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// `sum |a_i|^2`.
    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sqr().near(&T::one())
    }

    fn mask(&self, qubit: usize) -> usize {
        1usize << (self.n - 1 - qubit)
    }

    fn check(&self, gate: &Gate) -> Result<(), StateError> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(StateError::QubitOutOfRange {
                    index: q,
                    n: self.n,
                });
            }
        }
        if let Gate::Cnot { control, target } = *gate {
            if control == target {
                return Err(StateError::CnotSameQubit(control));
            }
        }
        Ok(())
    }

    /// Applies `gate` in place.
    pub fn apply_mut(&mut self, gate: &Gate) -> Result<(), StateError> {
        self.check(gate)?;
        match *gate {
            Gate::X { target } => {
                let m = self.mask(target);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cm = self.mask(control);
                let tm = self.mask(target);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::Rot { target } => {
                let m = self.mask(target);
                let c = T::ratio(3, 5);
                let s = T::ratio(4, 5);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let a0 = self.amps[i].clone();
                        let a1 = self.amps[i | m].clone();
                        self.amps[i] = a0.clone().scale(c.clone()) - a1.clone().scale(s.clone());
                        self.amps[i | m] = a0.scale(s.clone()) + a1.scale(c.clone());
                    }
                }
            }
            Gate::Phase { target } => {
                let m = self.mask(target);
                for a in self.amps.iter_mut().enumerate().filter(|(i, _)| i & m != 0) {
                    let v = a.1.clone();
                    *a.1 = Complex::new(-v.im, v.re);
                }
            }
        }
        Ok(())
    }

    /// Applies a gate sequence in place, stopping at the first invalid gate.
    pub fn apply_all<'a>(
        &mut self,
        gates: impl IntoIterator<Item = &'a Gate>,
    ) -> Result<(), StateError> {
        for g in gates {
            self.apply_mut(g)?;
        }
        Ok(())
    }
}

/// `gate |state>`.
pub fn apply_gate<T: Scalar>(
    state: &StateVector<T>,
    gate: &Gate,
) -> Result<StateVector<T>, StateError> {
    let mut out = state.clone();
    out.apply_mut(gate)?;
    Ok(out)
}

/// Runs `gates` on `|0^n>`.
pub fn prepare<T: Scalar>(n: usize, gates: &[Gate]) -> Result<StateVector<T>, StateError> {
    let mut s = StateVector::zero(n)?;
    s.apply_all(gates)?;
    Ok(s)
}

/// `<x|z>`.
pub fn inner<T: Scalar>(x: &StateVector<T>, z: &StateVector<T>) -> Result<Complex<T>, StateError> {
    if x.n != z.n {
        return Err(StateError::DimensionMismatch {
            left: x.n,
            right: z.n,
        });
    }
    Ok(x.amps
        .iter()
        .zip(&z.amps)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
            acc + a.conj() * b.clone()
        }))
}

/// `|<x|z>|^2`: the probability that `z` passes a projective test for `x`.
pub fn fidelity<T: Scalar>(x: &StateVector<T>, z: &StateVector<T>) -> Result<T, StateError> {
    Ok(inner(x, z)?.norm_sqr())
}

/// `x (x) y`, with `x` on the low-numbered (most significant) qubits.
pub fn tensor<T: Scalar>(x: &StateVector<T>, y: &StateVector<T>) -> StateVector<T> {
    let mut amps = Vec::with_capacity(x.dim() * y.dim());
    for a in &x.amps {
        for b in &y.amps {
            amps.push(a.clone() * b.clone());
        }
    }
    StateVector { n: x.n + y.n, amps }
}

/// Orthonormal basis of the `2^n`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis<T: Scalar> {
    n: usize,
    vectors: Vec<StateVector<T>>,
}

impl<T: Scalar> Basis<T> {
    /// The computational basis.
    pub fn standard(n: usize) -> Result<Self, StateError> {
        let vectors = (0..1usize << n)
            .map(|i| StateVector::basis(n, i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { n, vectors })
    }

    /// Standard basis pushed through a fixed circuit; stays orthonormal since the
    /// circuit is unitary.
    pub fn rotated(n: usize, circuit: &[Gate]) -> Result<Self, StateError> {
        let mut vectors = Vec::with_capacity(1 << n);
        for i in 0..1usize << n {
            let mut v = StateVector::basis(n, i)?;
            v.apply_all(circuit)?;
            vectors.push(v);
        }
        Ok(Self { n, vectors })
    }

    /// Checks pairwise orthogonality and unit norm.
    pub fn from_vectors(vectors: Vec<StateVector<T>>) -> Result<Self, StateError> {
        let n = vectors.first().map(|v| v.n).ok_or(StateError::NoQubits)?;
        if vectors.len() != 1 << n {
            return Err(StateError::WrongLength {
                expected: 1 << n,
                actual: vectors.len(),
            });
        }
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate().skip(i) {
                let ip = inner(a, b)?;
                let expect = if i == j { T::one() } else { T::zero() };
                if !ip.re.near(&expect) || !ip.im.near(&T::zero()) {
                    return Err(StateError::NotOrthonormal(i, j));
                }
            }
        }
        Ok(Self { n, vectors })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> &[StateVector<T>] {
        &self.vectors
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExactState, Rational};

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn real_amps(s: &ExactState) -> Vec<Rational> {
        s.amps().iter().map(|a| a.re.clone()).collect()
    }

    #[test]
    fn rot_on_zero_gives_three_four_fifths() {
        let s = apply_gate(&ExactState::zero(1).unwrap(), &Gate::rot(0)).unwrap();
        assert_eq!(real_amps(&s), vec![r(3, 5), r(4, 5)]);
        assert!(s.is_unit());
    }

    #[test]
    fn x_flips_bit() {
        let s = apply_gate(&ExactState::zero(1).unwrap(), &Gate::x(0)).unwrap();
        assert_eq!(s, ExactState::basis(1, 1).unwrap());
    }

    #[test]
    fn double_rotation_by_hand() {
        // [[3,-4],[4,3]]/5 squared = [[-7,-24],[24,-7]]/25, first column.
        let s = prepare::<Rational>(1, &[Gate::rot(0), Gate::rot(0)]).unwrap();
        assert_eq!(real_amps(&s), vec![r(-7, 25), r(24, 25)]);
    }

    #[test]
    fn out_of_range_gate_is_rejected() {
        let s = ExactState::zero(2).unwrap();
        assert_eq!(
            apply_gate(&s, &Gate::x(2)),
            Err(StateError::QubitOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(
            apply_gate(&s, &Gate::cnot(1, 1)),
            Err(StateError::CnotSameQubit(1))
        );
    }

    #[test]
    fn fidelity_examples() {
        let zero = ExactState::zero(1).unwrap();
        let one = ExactState::basis(1, 1).unwrap();
        let rot = apply_gate(&zero, &Gate::rot(0)).unwrap();
        assert_eq!(fidelity(&zero, &zero).unwrap(), r(1, 1));
        assert_eq!(fidelity(&zero, &one).unwrap(), r(0, 1));
        assert_eq!(fidelity(&zero, &rot).unwrap(), r(9, 25));
        assert!(matches!(
            fidelity(&zero, &ExactState::zero(2).unwrap()),
            Err(StateError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let zero = ExactState::zero(1).unwrap();
        let one = ExactState::basis(1, 1).unwrap();
        assert_eq!(tensor(&zero, &one), ExactState::classical("01").unwrap());
        let rot = apply_gate(&zero, &Gate::rot(0)).unwrap();
        let t = tensor(&rot, &zero);
        assert_eq!(real_amps(&t), vec![r(3, 5), r(0, 1), r(4, 5), r(0, 1)]);
        assert!(t.is_unit());
    }

    #[test]
    fn cnot_entangles_with_qubit_zero_as_msb() {
        let s = prepare::<Rational>(2, &[Gate::x(0), Gate::cnot(0, 1)]).unwrap();
        assert_eq!(s, ExactState::classical("11").unwrap());
        let s = prepare::<Rational>(2, &[Gate::x(1), Gate::cnot(0, 1)]).unwrap();
        assert_eq!(s, ExactState::classical("01").unwrap());
    }

    #[test]
    fn gate_algebra() {
        let start = prepare::<Rational>(2, &[Gate::rot(0), Gate::phase(1), Gate::rot(1)]).unwrap();
        let mut s = start.clone();
        s.apply_all(&[Gate::x(1), Gate::x(1)]).unwrap();
        assert_eq!(s, start);
        s.apply_all(&[Gate::cnot(0, 1), Gate::cnot(0, 1)]).unwrap();
        assert_eq!(s, start);
        s.apply_all(&[Gate::phase(0); 4]).unwrap();
        assert_eq!(s, start);
    }

    #[test]
    fn from_amps_validates() {
        let half = Complex::new(r(1, 2), r(0, 1));
        assert!(ExactState::from_amps(2, vec![half.clone(); 4]).is_ok());
        assert_eq!(
            ExactState::from_amps(2, vec![half.clone(); 3]),
            Err(StateError::WrongLength {
                expected: 4,
                actual: 3
            })
        );
        assert_eq!(
            ExactState::from_amps(1, vec![half.clone(); 2]),
            Err(StateError::NotUnitNorm)
        );
    }

    #[test]
    fn rotated_basis_is_orthonormal() {
        let b =
            Basis::<Rational>::rotated(2, &[Gate::rot(0), Gate::cnot(0, 1), Gate::rot(1)]).unwrap();
        assert!(Basis::from_vectors(b.vectors().to_vec()).is_ok());
        let bad = vec![ExactState::zero(1).unwrap(), ExactState::zero(1).unwrap()];
        assert_eq!(
            Basis::from_vectors(bad),
            Err(StateError::NotOrthonormal(0, 1))
        );
    }

    #[test]
    fn float_instantiation_agrees() {
        let gates = [Gate::rot(0), Gate::cnot(0, 1), Gate::phase(1), Gate::rot(1)];
        let exact = prepare::<Rational>(2, &gates).unwrap();
        let float = prepare::<f64>(2, &gates).unwrap();
        for (a, b) in exact.amps().iter().zip(float.amps()) {
            assert!(a.re.to_f64_lossy().near(&b.re));
            assert!(a.im.to_f64_lossy().near(&b.im));
        }
    }
}
