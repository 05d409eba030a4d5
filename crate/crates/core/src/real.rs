//! Scalar abstraction shared by the geometry, sampling, rendering and
//! classifier code.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;

/// Floating point scalar usable throughout the crate: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Relative offset used to push secondary rays off a surface.
    const RAY_EPSILON: Self;

    /// Uniform draw on `[0, 1)`. Every precision consumes one `f64` draw, so
    /// `f32` and `f64` runs walk the same random stream.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from `f64`, used for literals.
    fn of(v: f64) -> Self;

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty, $eps:expr) => {
        impl Real for $t {
            const RAY_EPSILON: Self = $eps;

            #[inline]
            fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
                let v = rng.random::<f64>() as $t;
                if v < 1.0 {
                    v
                } else {
                    1.0 - <$t>::EPSILON / 2.0
                }
            }

            #[inline]
            fn of(v: f64) -> Self {
                v as $t
            }
        }
    };
}

impl_real!(f32, 5e-5);
impl_real!(f64, 1e-7);
