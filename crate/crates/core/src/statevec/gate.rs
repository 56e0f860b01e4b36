use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// One gate of the fixed reference gate set.
///
/// `Rot` is the real rotation with `cos = 3/5`, `sin = 4/5`; `Phase` is
/// `diag(1, i)`. Every matrix entry is a Gaussian rational, so simulation stays
/// inside `Q(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    X { target: usize },
    Cnot { control: usize, target: usize },
    Rot { target: usize },
    Phase { target: usize },
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate::X { target }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn rot(target: usize) -> Self {
        Gate::Rot { target }
    }

    pub fn phase(target: usize) -> Self {
        Gate::Phase { target }
    }

    /// Qubits the gate acts on, control first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X { target } | Gate::Rot { target } | Gate::Phase { target } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Largest qubit index referenced.
    pub fn max_qubit(&self) -> usize {
        self.qubits().into_iter().max().unwrap_or(0)
    }

    /// Same gate with every qubit index shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        match *self {
            Gate::X { target } => Gate::X {
                target: target + offset,
            },
            Gate::Rot { target } => Gate::Rot {
                target: target + offset,
            },
            Gate::Phase { target } => Gate::Phase {
                target: target + offset,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + offset,
                target: target + offset,
            },
        }
    }

    /// Matrix on the gate's own qubits (2x2, or 4x4 for CNOT with the control as
    /// the high bit), row-major.
    pub fn local_matrix<T: Scalar>(&self) -> Vec<Vec<Complex<T>>> {
        let z = || Complex::new(T::zero(), T::zero());
        let one = || Complex::new(T::one(), T::zero());
        let re = |v: T| Complex::new(v, T::zero());
        match self {
            Gate::X { .. } => vec![vec![z(), one()], vec![one(), z()]],
            Gate::Rot { .. } => vec![
                vec![re(T::ratio(3, 5)), re(T::ratio(-4, 5))],
                vec![re(T::ratio(4, 5)), re(T::ratio(3, 5))],
            ],
            Gate::Phase { .. } => vec![
                vec![one(), z()],
                vec![z(), Complex::new(T::zero(), T::one())],
            ],
            Gate::Cnot { .. } => vec![
                vec![one(), z(), z(), z()],
                vec![z(), one(), z(), z()],
                vec![z(), z(), z(), one()],
                vec![z(), z(), one(), z()],
            ],
        }
    }

    /// Checks `U U^dagger = I` in the given field.
    pub fn is_unitary<T: Scalar>(&self) -> bool {
        let u = self.local_matrix::<T>();
        let dim = u.len();
        for i in 0..dim {
            for j in 0..dim {
                let acc = u[i]
                    .iter()
                    .zip(&u[j])
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                        acc + a.clone() * b.conj()
                    });
                let expect = if i == j { T::one() } else { T::zero() };
                if !acc.re.near(&expect) || !acc.im.near(&T::zero()) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X { target } => write!(f, "X({target})"),
            Gate::Cnot { control, target } => write!(f, "CNOT({control},{target})"),
            Gate::Rot { target } => write!(f, "ROT({target})"),
            Gate::Phase { target } => write!(f, "PHASE({target})"),
        }
    }
}
