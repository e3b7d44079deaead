//! Floating-point scalar abstraction.
//!
//! Everything numeric in this crate is generic over [`Scalar`] so the same
//! kernels run in `f32` or `f64`. The crate root exports concrete aliases
//! (`GraphF64`, ...) for the common case.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive};

/// Scalar type for graph weights, node functions, and spectra: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion from `f64` literals (tolerances, parameters).
    fn from_f64_lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable in scalar type")
    }

    /// `x^p` with the exponent given as `f64`, exact for p in {0, 1/2, 1}.
    fn powf64(self, p: f64) -> Self {
        if p == 0.0 {
            Self::one()
        } else if p == 1.0 {
            self
        } else if p == 0.5 {
            self.sqrt()
        } else if p == -0.5 {
            self.sqrt().recip()
        } else if p == -1.0 {
            self.recip()
        } else {
            self.powf(Self::from_f64_lit(p))
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sum of a slice by recursive pairwise splitting.
///
/// Error grows like O(log n) in the number of terms instead of O(n) for the
/// running sum, which keeps cut sizes trustworthy on large graphs.
pub fn pairwise_sum<S: Scalar>(values: &[S]) -> S {
    const SEQUENTIAL_CUTOFF: usize = 32;
    if values.len() <= SEQUENTIAL_CUTOFF {
        let mut acc = S::zero();
        for &v in values {
            acc += v;
        }
        acc
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}
