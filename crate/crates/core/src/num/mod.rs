//! Arbitrary-precision numerics: dyadic floats, real intervals, complex
//! rectangles, and the rigorous exp/log kernels underneath them.

mod complex;
mod dyadic;
mod kernel;
mod real;

pub use complex::{ComplexBall, LogBallError};
pub use dyadic::Dyadic;
pub use kernel::{ln2_dyadic, pi_dyadic, KernelError};
pub use real::RealBall;
