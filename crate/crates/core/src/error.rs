use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid format: {0}")]
    InvalidFormat(String),

    #[error("value {value} does not fit a {width}-bit word")]
    WordRange { value: i128, width: u32 },

    #[error("bit pattern {0:#x} has a nonzero fraction with a zero exponent (subnormals are not supported)")]
    Subnormal(u64),

    #[error("exponent overflow: biased exponent {exponent} exceeds {max}")]
    ExponentOverflow { exponent: i64, max: u64 },

    #[error("negation of the most negative {width}-bit word")]
    NegateOverflow { width: u32 },

    #[error("operands use different formats")]
    FormatMismatch,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sigma vector has {got} directions, rotator is configured for {expected}")]
    SigmaLength { expected: usize, got: usize },

    #[error("datapath overflow at stage {stage}: {value} outside {width}-bit word")]
    DatapathOverflow { stage: u32, value: i128, width: u32 },

    #[error("rotation reached stage {stage} before any vectoring set its sigma register")]
    UninitializedSigma { stage: u32 },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("SNR undefined: reference matrix is all zero")]
    ZeroSignal,

    #[error("trial {index} (seed {seed:#x}, r = {r}) failed: {source}")]
    Trial {
        seed: u64,
        r: u32,
        index: usize,
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
