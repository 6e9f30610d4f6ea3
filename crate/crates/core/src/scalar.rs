//! Edge-weight scalar abstraction.
//!
//! Every algorithm in the crate is written against [`Weight`] so the same code
//! runs on `f64` (the default used by the CLI) and `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar usable as an edge weight.
pub trait Weight:
    Float
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
    /// Absolute slack used when deciding that a move strictly improves the
    /// objective. Multiplied by `1 + max weighted degree` at the call site.
    fn move_eps() -> Self;

    /// Optimality gap accepted by the branch-and-bound pruning test.
    fn prune_eps() -> Self;

    /// Lossy conversion from `f64`, used for constants and sampled values.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Weight for f64 {
    #[inline]
    fn move_eps() -> Self {
        1e-12
    }
    #[inline]
    fn prune_eps() -> Self {
        1e-12
    }
}

impl Weight for f32 {
    #[inline]
    fn move_eps() -> Self {
        1e-6
    }
    #[inline]
    fn prune_eps() -> Self {
        1e-6
    }
}
