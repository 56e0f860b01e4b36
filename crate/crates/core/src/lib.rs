//! Machine-relative quantum Kolmogorov complexity at desk scale.
//!
//! A fixed reference machine runs self-delimiting straight-line gate programs on
//! `|0...0>` with exact Gaussian-rational arithmetic. The complexity of a target
//! state `|x>` given `n` is estimated as
//!
//! ```text
//! min_p { l(p) + ceil(-log2 |<x|U(p, n)>|^2) }
//! ```
//!
//! over all programs up to a length bound, either exactly ([`estimator::exact_estimate`])
//! or from simulated projective measurements ([`estimator::sampled_estimate`]).
//!
//! The simulation kernels are generic over [`Scalar`]; the reference machine runs
//! over [`Rational`].

pub mod census;
pub mod cli;
pub mod estimator;
pub mod executor;
pub mod proglang;
pub mod random;
pub mod scalar;
pub mod statevec;

pub use scalar::Scalar;

/// Arbitrary-precision rational, canonical reduced form.
pub type Rational = num_rational::BigRational;
/// Element of `Q(i)`.
pub type GaussianRational = num_complex::Complex<Rational>;
/// Statevector with exact amplitudes; the reference machine's state type.
pub type ExactState = statevec::StateVector<Rational>;
pub type StateVectorF64 = statevec::StateVector<f64>;
pub type StateVectorF32 = statevec::StateVector<f32>;
pub type ExactBasis = statevec::Basis<Rational>;
