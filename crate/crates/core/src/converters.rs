//! Format converters between floating point and the block floating-point
//! representation used inside the rotator.
//!
//! The input converter aligns two FP coordinates to a shared exponent and
//! produces two's-complement significand words of width `N` (one sign bit,
//! one integer bit, `N - 2` fraction bits). The output converter normalizes
//! rotated words back to independent FP values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{fixed_round_shift, FixedWord, FpFormat, FpValue, ShiftRounding, MAX_WORD_WIDTH};

/// Extra integer bits the rotator datapath adds to converter words.
pub const DATAPATH_GUARD_BITS: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConverterConfig {
    /// Internal significand width `N`.
    pub width: u32,
    /// Disposal of bits shifted out during alignment (conventional formats).
    pub input_rounding: ShiftRounding,
    /// HUB input: extend with `LSB, !LSB, !LSB, ...` instead of `1, 0, 0, ...`.
    pub hub_unbiased_extension: bool,
    /// HUB input: encode +/-1.0 exactly, without the ILSB.
    pub hub_detect_identity: bool,
    /// HUB output: fill left shifts with `LSB, !LSB, ...` instead of the ILSB.
    pub hub_output_unbiased: bool,
}

impl ConverterConfig {
    pub fn new(width: u32) -> Self {
        ConverterConfig {
            width,
            input_rounding: ShiftRounding::Truncate,
            hub_unbiased_extension: false,
            hub_detect_identity: false,
            hub_output_unbiased: false,
        }
    }

    pub fn frac_bits(&self) -> u32 {
        self.width - 2
    }

    pub fn validate(&self, format: &FpFormat) -> Result<()> {
        format.validate()?;
        if self.width < format.sig_bits + 2 {
            return Err(Error::Config(format!(
                "internal width N = {} must exceed the stored significand width + 1 ({})",
                self.width,
                format.sig_bits + 1
            )));
        }
        // The HUB adder model needs one bit beyond the datapath word.
        if self.width + DATAPATH_GUARD_BITS + 1 > MAX_WORD_WIDTH {
            return Err(Error::Config(format!(
                "internal width N = {} too large (max {})",
                self.width,
                MAX_WORD_WIDTH - DATAPATH_GUARD_BITS - 1
            )));
        }
        if self.input_rounding == ShiftRounding::Hub {
            return Err(Error::Config("input rounding must be truncate or rne".into()));
        }
        Ok(())
    }
}

/// Two aligned significand words sharing one biased exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockFpPair {
    pub x: FixedWord,
    pub y: FixedWord,
    pub m_exp: u32,
}

/// True when `v` has the bit pattern of +/-1.0 (exponent `011..1`, zero fraction).
pub fn is_identity_pattern(v: &FpValue) -> bool {
    v.exponent as i64 == v.format.bias() && v.significand == 0
}

/// Significand of one coordinate as an `N`-bit word, before alignment.
///
/// Zero and detected identity values come back with the HUB flag cleared:
/// their word value is exact. The datapath reads only the bits.
fn significand_word(v: &FpValue, cfg: &ConverterConfig) -> FixedWord {
    let n = cfg.width;
    let frac = cfg.frac_bits();
    let m = v.format.sig_bits;
    if v.is_zero() {
        return FixedWord::zero(n, frac, false);
    }
    let hub = v.format.hub;
    if hub && cfg.hub_detect_identity && is_identity_pattern(v) {
        let one = 1i64 << frac;
        return FixedWord::from_raw(if v.sign { -one } else { one }, n, frac, false);
    }
    let pad = frac - m;
    let mut mag = (((1u64 << m) | v.significand) as i64) << pad;
    if hub && pad > 0 {
        // The input ILSB becomes an explicit bit followed by an extension.
        let top = 1i64 << (pad - 1);
        let lsb_one = v.significand & 1 == 1;
        mag |= if cfg.hub_unbiased_extension && !lsb_one {
            top - 1
        } else {
            top
        };
    }
    let bits = match (v.sign, hub) {
        (false, _) => mag,
        (true, true) => !mag,
        (true, false) => -mag,
    };
    FixedWord::from_raw(bits, n, frac, hub)
}

/// FP pair to block floating point.
pub fn input_convert(x: &FpValue, y: &FpValue, cfg: &ConverterConfig) -> Result<BlockFpPair> {
    if x.format != y.format {
        return Err(Error::FormatMismatch);
    }
    cfg.validate(&x.format)?;
    let hub = x.format.hub;
    let mut xw = significand_word(x, cfg);
    let mut yw = significand_word(y, cfg);

    let (m_exp, shift_y, gap) = match (x.is_zero(), y.is_zero()) {
        (true, true) => return Ok(BlockFpPair { x: xw, y: yw, m_exp: 0 }),
        (false, true) => (x.exponent, true, 0),
        (true, false) => (y.exponent, false, 0),
        (false, false) => {
            let dxy = x.exponent as i64 - y.exponent as i64;
            let dyx = -dxy;
            if dxy >= 0 {
                (x.exponent, true, dxy as u32)
            } else {
                (y.exponent, false, dyx as u32)
            }
        }
    };

    if gap > 0 {
        let mode = if hub { ShiftRounding::Hub } else { cfg.input_rounding };
        let target = if shift_y { &mut yw } else { &mut xw };
        *target = if gap >= cfg.width {
            FixedWord::zero(cfg.width, cfg.frac_bits(), false)
        } else {
            fixed_round_shift(target, gap, mode).with_hub(hub)
        };
    }
    Ok(BlockFpPair { x: xw, y: yw, m_exp })
}

/// One rotated significand word back to FP, given the shared exponent.
///
/// Accepts words of any width (converter or datapath width); the point
/// position comes from the word's fraction bit count.
pub fn word_to_fp(word: &FixedWord, m_exp: u32, cfg: &ConverterConfig, format: FpFormat) -> Result<FpValue> {
    let m = format.sig_bits;
    let sign = word.is_negative();
    let (mag, frac) = if format.hub && word.is_hub() {
        let u = if sign { !word.bits() } else { word.bits() };
        ((2 * u + 1) as u128, word.frac_bits() + 1)
    } else {
        (word.bits().unsigned_abs() as u128, word.frac_bits())
    };
    if mag == 0 {
        return Ok(FpValue::zero(format));
    }
    let lead = 127 - mag.leading_zeros();
    let mut biased = m_exp as i64 + lead as i64 - frac as i64;

    let q: u128 = if lead >= m {
        let drop = lead - m;
        let kept = mag >> drop;
        if format.hub || drop == 0 {
            kept
        } else {
            let rem = mag & ((1u128 << drop) - 1);
            let half = 1u128 << (drop - 1);
            let up = rem > half || (rem == half && kept & 1 == 1);
            let mut q = kept + up as u128;
            if q >> (m + 1) != 0 {
                q >>= 1;
                biased += 1;
            }
            q
        }
    } else {
        let fill = m - lead;
        if format.hub && word.is_hub() && cfg.hub_output_unbiased && lead > 0 {
            // Replace the appended ILSB with LSB, !LSB, !LSB, ...
            let explicit = mag >> 1;
            let lsb = explicit & 1;
            let pattern = if lsb == 1 { 1u128 << fill } else { (1u128 << fill) - 1 };
            (explicit << (fill + 1)) | pattern
        } else {
            mag << fill
        }
    };

    if biased < 1 {
        return Ok(FpValue::zero(format));
    }
    if biased as u64 > format.max_exponent() {
        return Err(Error::ExponentOverflow {
            exponent: biased,
            max: format.max_exponent(),
        });
    }
    Ok(FpValue {
        format,
        sign,
        exponent: biased as u32,
        significand: (q - (1u128 << m)) as u64,
    })
}

/// Block floating point back to an FP pair.
pub fn output_convert(pair: &BlockFpPair, cfg: &ConverterConfig, format: FpFormat) -> Result<(FpValue, FpValue)> {
    Ok((
        word_to_fp(&pair.x, pair.m_exp, cfg, format)?,
        word_to_fp(&pair.y, pair.m_exp, cfg, format)?,
    ))
}
