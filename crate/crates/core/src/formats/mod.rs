//! Number encodings: parametric floating point (conventional and HUB),
//! two's-complement fixed-point words, and the exact reals used to check them.

mod exact;
mod fixed;
mod float;

pub use exact::{ExactReal, GridRounding};
pub use fixed::{fixed_negate, fixed_round_shift, FixedWord, ShiftRounding, MAX_WORD_WIDTH};
pub use float::{fp_decode, fp_encode, FpFormat, FpValue};
