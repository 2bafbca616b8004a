//! Bit-accurate model of a floating-point Givens rotation unit built on a
//! fixed-point CORDIC rotator, in conventional and HUB variants, with a QR
//! decomposition driver and Monte Carlo SNR experiments.

pub mod analysis;
pub mod converters;
pub mod cordic;
pub mod error;
pub mod formats;
pub mod qrd;
pub mod selftest;

pub use converters::{input_convert, output_convert, word_to_fp, BlockFpPair, ConverterConfig};
pub use cordic::{rotate, vectoring, PipelineState, RotatorConfig, Sigma, SigmaVector};
pub use error::{Error, Result};
pub use formats::{ExactReal, FixedWord, FpFormat, FpValue, ShiftRounding};
pub use qrd::{
    givens_pair, qr_decompose, schedule_cycles, CycleReport, FixedGivensUnit, GivensUnit, GivensUnitConfig, Matrix,
    PairMode, QrResult, RotationUnit,
};
