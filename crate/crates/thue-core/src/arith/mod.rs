//! Certified arbitrary-precision arithmetic: magnitudes, dyadic fixed
//! point, real balls, complex disks.

mod ball;
mod cball;
mod dyadic;
mod mag;

pub use ball::{ln2, RealBall};
pub use cball::ComplexBall;
pub use dyadic::{Dyadic, Round};
pub use mag::Mag;
