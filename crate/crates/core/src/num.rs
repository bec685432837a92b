//! Scalar abstraction for card geometry.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type the layout can be computed in (`f32` or `f64`).
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static {
    /// Converts a constant. Panics only if the value is unrepresentable,
    /// which cannot happen for the small constants used here.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("constant fits scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static {}

/// Formats with exactly three decimals. Exact binary ties round half to
/// even (std behaviour); negative zero prints as `0.000`.
pub fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}
