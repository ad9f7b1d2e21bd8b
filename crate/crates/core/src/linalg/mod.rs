//! Exact rational arithmetic and the small dense linear-algebra kernel used
//! everywhere else.

mod matrix;
mod rational;

pub use matrix::{
    concat, fmt_vector, is_zero_vector, unit_vector, vadd, vscale, vsub, zero_vector, Matrix,
    Pinning, Vector,
};
pub use rational::{q, qr, Rational};
