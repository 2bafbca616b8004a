//! Fixed-point sigma-reuse Givens rotator.
//!
//! `p` cascaded CORDIC microrotation stages share one X-Y datapath for both
//! modes. In vectoring mode each stage picks its direction from the current
//! signs and stores it; in rotation mode the stored directions are replayed,
//! so no angle datapath is needed.

mod pipeline;

pub use pipeline::{PipelineState, StageInput, StageOutput, StageSnapshot};

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::converters::DATAPATH_GUARD_BITS;
use crate::error::{Error, Result};
use crate::formats::{ExactReal, FixedWord, GridRounding, MAX_WORD_WIDTH};

/// Direction of one microrotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sigma {
    /// Counter-clockwise: `x -= y >> i`, `y += x >> i`.
    Up,
    /// Clockwise: `x += y >> i`, `y -= x >> i`.
    Down,
}

impl Sigma {
    /// Direction that drives `y` toward zero. For `x >= 0` this is the sign
    /// bit of `y`; a negative `x` flips it so that `x` keeps its sign and
    /// grows in magnitude.
    pub fn toward_axis(x: &FixedWord, y: &FixedWord) -> Sigma {
        if x.is_negative() != y.is_negative() {
            Sigma::Up
        } else {
            Sigma::Down
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Sigma::Up => 1,
            Sigma::Down => 0,
        }
    }

    pub fn opposite(self) -> Sigma {
        match self {
            Sigma::Up => Sigma::Down,
            Sigma::Down => Sigma::Up,
        }
    }
}

/// The directions captured by one vectoring pass.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SigmaVector(pub Vec<Sigma>);

impl SigmaVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rotation angle implied by the directions, in radians.
    pub fn angle(&self) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let a = 2f64.powi(-(i as i32)).atan();
                match s {
                    Sigma::Up => a,
                    Sigma::Down => -a,
                }
            })
            .sum()
    }

    /// Directions as a bit string, stage 0 first (`1` = up).
    pub fn to_bit_string(&self) -> String {
        self.0.iter().map(|s| char::from(b'0' + s.bit())).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotatorConfig {
    /// Converter word width `N`; the datapath is `N + 2` bits wide.
    pub width: u32,
    /// Number of microrotations `p`.
    pub iterations: u32,
    pub hub: bool,
    /// Multiply the outputs by `1/K_p` after the last stage.
    pub compensate_scale: bool,
}

impl RotatorConfig {
    pub fn new(width: u32, iterations: u32, hub: bool) -> Self {
        RotatorConfig {
            width,
            iterations,
            hub,
            compensate_scale: false,
        }
    }

    pub fn datapath_width(&self) -> u32 {
        self.width + DATAPATH_GUARD_BITS
    }

    pub fn frac_bits(&self) -> u32 {
        self.width - 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 4 || self.datapath_width() + 1 > MAX_WORD_WIDTH {
            return Err(Error::Config(format!(
                "rotator width N = {} outside 4..={}",
                self.width,
                MAX_WORD_WIDTH - 1 - DATAPATH_GUARD_BITS
            )));
        }
        if self.iterations < 1 || self.iterations > self.width - 2 {
            return Err(Error::Config(format!(
                "microrotations p = {} outside 1..={}",
                self.iterations,
                self.width - 2
            )));
        }
        Ok(())
    }

    /// Widen a converter word onto the datapath.
    pub fn to_datapath(&self, w: &FixedWord) -> Result<FixedWord> {
        if w.width() == self.datapath_width() {
            return Ok(*w);
        }
        if w.width() != self.width || w.frac_bits() != self.frac_bits() {
            return Err(Error::Config(format!(
                "word layout ({}, {}) does not match rotator N = {}",
                w.width(),
                w.frac_bits(),
                self.width
            )));
        }
        w.widen(DATAPATH_GUARD_BITS)
    }
}

fn checked(word: &FixedWord, bits: i64, stage: u32) -> Result<FixedWord> {
    word.with_bits(bits).ok_or(Error::DatapathOverflow {
        stage,
        value: bits as i128,
        width: word.width(),
    })
}

/// HUB shifted operand: the word with its ILSB appended, optionally
/// negated by inversion, shifted right by `i`. Returns the `n` high bits and
/// the `(n+1)`-th bit, which feeds the adder carry-in.
#[inline]
fn hub_shifted(bits: i64, i: u32, negate: bool) -> (i64, i64) {
    let v = if negate { !bits } else { bits };
    let t = (2 * v + 1) >> i;
    (t >> 1, t & 1)
}

/// One CORDIC microrotation at stage `i`.
///
/// Conventional words truncate the shifted operands. HUB words feed the
/// first dropped bit of the shifted operand into the adder carry-in, which
/// equals adding both ILSBs in a one-bit-wider adder and truncating.
pub fn microrotate(x: &FixedWord, y: &FixedWord, i: u32, sigma: Sigma, hub: bool) -> Result<(FixedWord, FixedWord)> {
    let (xb, yb) = (x.bits(), y.bits());
    let up = sigma == Sigma::Up;
    let (nx, ny) = if hub {
        let (ys, yc) = hub_shifted(yb, i, up);
        let (xs, xc) = hub_shifted(xb, i, !up);
        (xb + ys + yc, yb + xs + xc)
    } else {
        let (ys, xs) = (yb >> i, xb >> i);
        if up {
            (xb - ys, yb + xs)
        } else {
            (xb + ys, yb - xs)
        }
    };
    Ok((checked(x, nx, i)?, checked(y, ny, i)?))
}

/// Apply `p` microrotations, choosing each direction from the current signs.
pub fn vectoring(x: &FixedWord, y: &FixedWord, cfg: &RotatorConfig) -> Result<(FixedWord, FixedWord, SigmaVector)> {
    let (mut x, mut y) = (*x, *y);
    let mut sigmas = Vec::with_capacity(cfg.iterations as usize);
    for i in 0..cfg.iterations {
        let s = Sigma::toward_axis(&x, &y);
        sigmas.push(s);
        (x, y) = microrotate(&x, &y, i, s, cfg.hub)?;
    }
    Ok((x, y, SigmaVector(sigmas)))
}

/// Replay a stored direction vector.
pub fn rotate(
    x: &FixedWord,
    y: &FixedWord,
    sigmas: &SigmaVector,
    cfg: &RotatorConfig,
) -> Result<(FixedWord, FixedWord)> {
    if sigmas.len() != cfg.iterations as usize {
        return Err(Error::SigmaLength {
            expected: cfg.iterations as usize,
            got: sigmas.len(),
        });
    }
    let (mut x, mut y) = (*x, *y);
    for (i, s) in sigmas.0.iter().enumerate() {
        (x, y) = microrotate(&x, &y, i as u32, *s, cfg.hub)?;
    }
    Ok((x, y))
}

const SCALE_PRECISION_BITS: u32 = 192;

/// CORDIC gain `K_p = prod_{i<p} sqrt(1 + 2^-2i)` to 192 fractional bits.
pub fn scale_factor(p: u32) -> ExactReal {
    assert!(p >= 1, "scale factor needs at least one microrotation");
    // The product under the root is an exact dyadic.
    let product = (0..p as i64).fold(ExactReal::one(), |acc, i| {
        let term = &ExactReal::one() + &ExactReal::pow2(-2 * i);
        &acc * &term
    });
    product.sqrt_floor(SCALE_PRECISION_BITS)
}

/// `K_p` in binary64.
pub fn scale_factor_f64(p: u32) -> f64 {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = CACHE.get_or_init(|| (1..=64).map(|k| scale_factor(k).to_f64()).collect());
    match table.get(p as usize - 1) {
        Some(v) => *v,
        None => scale_factor(p).to_f64(),
    }
}

/// The `(N+2)`-bit compensation constant `round(2^(N+2) / K_p)`.
pub fn compensation_constant(width: u32, p: u32) -> i64 {
    let bits = width + DATAPATH_GUARD_BITS;
    let k = scale_factor(p);
    let q = ExactReal::pow2(bits as i64).div_floor(&k, 8);
    let c: BigInt = q.to_grid(0, GridRounding::NearestEven);
    c.to_i64().expect("constant fits in 64 bits")
}

/// Multiply a datapath word by `1/K_p` using the precomputed constant.
///
/// Conventional words truncate the product; HUB words append their ILSB
/// before multiplying and truncate onto the HUB grid.
pub fn compensate_scale(w: &FixedWord, constant: i64, width: u32, hub: bool) -> FixedWord {
    let shift = width + DATAPATH_GUARD_BITS;
    let bits = if hub {
        ((2 * w.bits() as i128 + 1) * constant as i128) >> (shift + 1)
    } else {
        (w.bits() as i128 * constant as i128) >> shift
    };
    // |1/K_p| < 1 so the product always fits the input layout.
    w.with_bits(bits as i64).expect("compensated word fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(v: f64, cfg: &RotatorConfig) -> FixedWord {
        let f = cfg.frac_bits();
        let bits = (v * 2f64.powi(f as i32)).floor() as i64;
        FixedWord::new(bits, cfg.datapath_width(), f, cfg.hub).unwrap()
    }

    #[test]
    fn scale_factor_values() {
        assert!((scale_factor_f64(1) - 2f64.sqrt()).abs() < 1e-15);
        assert!((scale_factor_f64(2) - 1.5811388300841898).abs() < 1e-15);
        assert!((scale_factor_f64(24) - 1.6467602581210654).abs() < 1e-14);
    }

    #[test]
    fn compensation_constant_single() {
        let c = compensation_constant(26, 24);
        let expect = (2f64.powi(28) / scale_factor_f64(24)).round() as i64;
        assert_eq!(c, expect);
    }

    #[test]
    fn stage_zero_additive_identity() {
        let cfg = RotatorConfig::new(10, 8, false);
        let x = word(0.75, &cfg);
        let y = word(0.0, &cfg);
        for i in 0..8 {
            let (_, ny) = microrotate(&x, &y, i, Sigma::Up, false).unwrap();
            assert_eq!(ny.bits(), x.bits() >> i);
        }
    }

    #[test]
    fn hub_stage_zero_unit_vector() {
        // Patterns 01.00000000 and 00.00000000: with ILSBs, X = 1 + e and
        // Y = e where e = 2^-9.
        let cfg = RotatorConfig::new(10, 8, true);
        let x = FixedWord::new(1 << 8, 12, 8, true).unwrap();
        let y = FixedWord::new(0, 12, 8, true).unwrap();
        let (nx, ny) = microrotate(&x, &y, 0, Sigma::Up, true).unwrap();
        // X - Y = 1 and X + Y = 1 + 2e both sit midway between HUB grid
        // points; the stage-0 carry-in of one resolves both upward.
        let e = 2f64.powi(-9);
        assert_eq!(nx.value().to_f64(), 1.0 + e);
        assert_eq!(ny.value().to_f64(), 1.0 + 3.0 * e);
        // Same bits as a one-bit-wider adder with both ILSBs appended.
        let wide = |a: i64, b: i64| (2 * a + 1 + b) >> 1;
        assert_eq!(nx.bits(), wide(x.bits(), 2 * !y.bits() + 1));
        assert_eq!(ny.bits(), wide(y.bits(), 2 * x.bits() + 1));
        assert_eq!(cfg.validate(), Ok(()));
    }

    #[test]
    fn zero_in_zero_out() {
        let cfg = RotatorConfig::new(26, 24, false);
        let z = word(0.0, &cfg);
        let (x, y, s) = vectoring(&z, &z, &cfg).unwrap();
        assert_eq!((x.bits(), y.bits()), (0, 0));
        let (x, y) = rotate(&z, &z, &s, &cfg).unwrap();
        assert_eq!((x.bits(), y.bits()), (0, 0));
    }

    #[test]
    fn rotate_replays_vectoring() {
        for hub in [false, true] {
            let cfg = RotatorConfig::new(26, 24, hub);
            let (x, y) = (word(1.25, &cfg), word(-0.8, &cfg));
            let (vx, vy, s) = vectoring(&x, &y, &cfg).unwrap();
            assert_eq!(rotate(&x, &y, &s, &cfg).unwrap(), (vx, vy));
            let k = scale_factor_f64(24);
            let r = (1.25f64 * 1.25 + 0.64).sqrt();
            assert!((vx.to_f64() - k * r).abs() < 1e-5);
            assert!(vy.to_f64().abs() < 1e-6);
        }
    }

    #[test]
    fn negative_pivot_converges() {
        let cfg = RotatorConfig::new(26, 24, false);
        let (x, y) = (word(-1.5, &cfg), word(0.5, &cfg));
        let (vx, vy, _) = vectoring(&x, &y, &cfg).unwrap();
        let k = scale_factor_f64(24);
        assert!((vx.to_f64() + k * (2.5f64).sqrt()).abs() < 1e-5);
        assert!(vy.to_f64().abs() < 1e-6);
    }

    #[test]
    fn sigma_length_checked() {
        let cfg = RotatorConfig::new(26, 24, false);
        let z = word(0.5, &cfg);
        assert!(matches!(
            rotate(&z, &z, &SigmaVector(vec![Sigma::Up; 3]), &cfg),
            Err(Error::SigmaLength { expected: 24, got: 3 })
        ));
    }

    #[test]
    fn config_limits() {
        assert!(RotatorConfig::new(26, 25, false).validate().is_err());
        assert!(RotatorConfig::new(26, 0, false).validate().is_err());
        assert!(RotatorConfig::new(59, 55, true).validate().is_ok());
    }
}
