//! Scalar fields the simulator can run over.
//!
//! The reference machine only ever needs the exact field (Gaussian rationals are
//! `Complex<BigRational>`), but the statevector kernels are written once against
//! [`Scalar`] so the same code also runs over `f64`/`f32`. The float instantiations
//! are used to cross-check the exact penalty computation.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A real field usable as the component type of complex amplitudes.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact, so equality tests need no tolerance.
    const EXACT: bool;

    /// The value `num / den`.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("i64 fits every scalar")
            / Self::from_i64(den).expect("i64 fits every scalar")
    }

    /// Equality up to the field's notion of precision (exact for rationals).
    fn near(&self, other: &Self) -> bool;

    /// Lossy conversion for reporting.
    fn to_f64_lossy(&self) -> f64;

    /// `log2(self)` for reporting; `-inf` for zero. Must not underflow for tiny
    /// positive values of the exact field.
    fn log2_lossy(&self) -> f64 {
        self.to_f64_lossy().log2()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn near(&self, other: &Self) -> bool {
        self == other
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn log2_lossy(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.is_negative() {
            return f64::NAN;
        }
        log2_bigint(self.numer()) - log2_bigint(self.denom())
    }
}

/// `log2` of a positive big integer without converting the whole value to `f64`.
fn log2_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("small enough for f64").log2();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().expect("64-bit value").log2() + shift as f64
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn near(&self, other: &Self) -> bool {
                (self - other).abs() <= $tol
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-5);

/// `2^-d` in the given field.
pub fn inverse_power_of_two<T: Scalar>(d: u32) -> T {
    let mut v = T::one();
    let half = T::ratio(1, 2);
    for _ in 0..d {
        v = v * half.clone();
    }
    v
}

/// Smallest `d >= 0` with `q * 2^d >= 1`, for `q > 0`. Doubling is exact in every
/// supported field, so for rationals this is an exact integer comparison.
pub(crate) fn least_doubling<T: Scalar>(q: &T) -> Option<u32> {
    if !q.is_positive() {
        return None;
    }
    let one = T::one();
    let two = T::one() + T::one();
    let mut scaled = q.clone();
    let mut d = 0u32;
    while scaled < one {
        scaled = scaled * two.clone();
        d += 1;
    }
    Some(d)
}
