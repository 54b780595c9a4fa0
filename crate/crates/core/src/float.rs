use std::fmt;
use std::iter::Sum;

use num_traits as nt;

/// Scalar type for all chain numerics: `f32` or `f64`.
pub trait Real:
    nt::Float + nt::FloatConst + nt::NumAssign + Sum + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: nt::Float
        + nt::FloatConst
        + nt::NumAssign
        + Sum
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for lossless-enough literal conversion into the scalar type.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from(x).expect("literal representable in scalar type")
}
