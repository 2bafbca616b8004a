use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::exact::{ExactReal, GridRounding};
use crate::error::{Error, Result};

/// A parametric IEEE-like floating-point encoding, optionally HUB.
///
/// `sig_bits` counts the stored fraction bits only; the hidden leading one
/// is implied. A HUB format additionally carries an implicit least
/// significant bit (ILSB) of one below the stored fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpFormat {
    pub exp_bits: u32,
    pub sig_bits: u32,
    pub hub: bool,
}

impl FpFormat {
    pub const HALF: FpFormat = FpFormat::preset(5, 10, false);
    pub const SINGLE: FpFormat = FpFormat::preset(8, 23, false);
    pub const DOUBLE: FpFormat = FpFormat::preset(11, 52, false);
    pub const HUB_HALF: FpFormat = FpFormat::preset(5, 10, true);
    pub const HUB_SINGLE: FpFormat = FpFormat::preset(8, 23, true);
    pub const HUB_DOUBLE: FpFormat = FpFormat::preset(11, 52, true);

    const fn preset(exp_bits: u32, sig_bits: u32, hub: bool) -> Self {
        FpFormat {
            exp_bits,
            sig_bits,
            hub,
        }
    }

    pub fn new(exp_bits: u32, sig_bits: u32, hub: bool) -> Result<Self> {
        let f = FpFormat {
            exp_bits,
            sig_bits,
            hub,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.exp_bits < 2 || self.sig_bits < 2 {
            return Err(Error::InvalidFormat(format!(
                "exp_bits and sig_bits must be >= 2 (got {}, {})",
                self.exp_bits, self.sig_bits
            )));
        }
        if self.exp_bits > 16 || self.sig_bits > 60 {
            return Err(Error::InvalidFormat(format!(
                "format ({}, {}) exceeds the supported 16 exponent / 60 fraction bits",
                self.exp_bits, self.sig_bits
            )));
        }
        Ok(())
    }

    /// Look up a preset by name (`half`, `single`, `double`).
    pub fn by_name(name: &str, hub: bool) -> Option<Self> {
        let base = match name {
            "half" => Self::HALF,
            "single" => Self::SINGLE,
            "double" => Self::DOUBLE,
            _ => return None,
        };
        Some(base.with_hub(hub))
    }

    pub fn with_hub(self, hub: bool) -> Self {
        FpFormat { hub, ..self }
    }

    pub fn bias(&self) -> i64 {
        (1i64 << (self.exp_bits - 1)) - 1
    }

    /// Largest biased exponent. The all-ones pattern is an ordinary exponent.
    pub fn max_exponent(&self) -> u64 {
        (1u64 << self.exp_bits) - 1
    }

    pub fn total_bits(&self) -> u32 {
        1 + self.exp_bits + self.sig_bits
    }
}

/// A value in an [`FpFormat`]. Zero is the all-zero exponent and fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpValue {
    pub format: FpFormat,
    pub sign: bool,
    pub exponent: u32,
    pub significand: u64,
}

impl FpValue {
    pub fn zero(format: FpFormat) -> Self {
        FpValue {
            format,
            sign: false,
            exponent: 0,
            significand: 0,
        }
    }

    /// Build from fields, checking ranges. A zero exponent with a nonzero
    /// fraction is rejected, and a negative zero is canonicalized.
    pub fn from_fields(format: FpFormat, sign: bool, exponent: u32, significand: u64) -> Result<Self> {
        format.validate()?;
        if exponent as u64 > format.max_exponent() || significand >> format.sig_bits != 0 {
            return Err(Error::InvalidFormat(format!(
                "fields exceed format widths (exp {exponent}, sig {significand:#x})"
            )));
        }
        if exponent == 0 {
            if significand != 0 {
                return Err(Error::Subnormal(significand));
            }
            return Ok(Self::zero(format));
        }
        Ok(FpValue {
            format,
            sign,
            exponent,
            significand,
        })
    }

    pub fn from_bits(format: FpFormat, bits: u64) -> Result<Self> {
        format.validate()?;
        let m = format.sig_bits;
        let e = format.exp_bits;
        if format.total_bits() < 64 && bits >> format.total_bits() != 0 {
            return Err(Error::InvalidFormat(format!(
                "bit pattern {bits:#x} wider than {} bits",
                format.total_bits()
            )));
        }
        let significand = bits & ((1u64 << m) - 1);
        let exponent = ((bits >> m) & ((1u64 << e) - 1)) as u32;
        let sign = (bits >> (m + e)) & 1 == 1;
        if exponent == 0 && significand != 0 {
            return Err(Error::Subnormal(bits));
        }
        Self::from_fields(format, sign, exponent, significand)
    }

    pub fn to_bits(&self) -> u64 {
        let m = self.format.sig_bits;
        let e = self.format.exp_bits;
        ((self.sign as u64) << (m + e)) | ((self.exponent as u64) << m) | self.significand
    }

    pub fn is_zero(&self) -> bool {
        self.exponent == 0 && self.significand == 0
    }

    pub fn negate(&self) -> Self {
        if self.is_zero() {
            *self
        } else {
            FpValue {
                sign: !self.sign,
                ..*self
            }
        }
    }

    /// Unbiased exponent of a nonzero value.
    pub fn unbiased_exponent(&self) -> i64 {
        self.exponent as i64 - self.format.bias()
    }

    /// Nearest binary64 of the represented value (exact for formats with
    /// at most 51 fraction bits).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let m = self.format.sig_bits as i32;
        // Significand with hidden one and (for HUB) the ILSB, as an integer
        // scaled by 2^-(m+1).
        let int = (((1u64 << m) | self.significand) << 1) | self.format.hub as u64;
        let mag = int as f64 * 2f64.powi(self.unbiased_exponent() as i32 - m - 1);
        if self.sign {
            -mag
        } else {
            mag
        }
    }

    pub fn from_f64(v: f64, format: FpFormat) -> Result<Self> {
        fp_encode(&ExactReal::from_f64(v), format)
    }

    /// Textual `s|eeee|ffff` debugging form.
    pub fn to_field_string(&self) -> String {
        format!(
            "{}|{:0ew$b}|{:0mw$b}",
            self.sign as u8,
            self.exponent,
            self.significand,
            ew = self.format.exp_bits as usize,
            mw = self.format.sig_bits as usize
        )
    }

    /// Parse the `s|eeee|ffff` form; field widths define the format.
    pub fn parse_fields(text: &str, hub: bool) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split('|').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected s|e..e|f..f, got {text:?}")));
        }
        let bin = |s: &str| u64::from_str_radix(s, 2).map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        if parts[0].len() != 1 {
            return Err(Error::Parse("sign field must be one bit".into()));
        }
        let format = FpFormat::new(parts[1].len() as u32, parts[2].len() as u32, hub)?;
        Self::from_fields(format, bin(parts[0])? == 1, bin(parts[1])? as u32, bin(parts[2])?)
    }
}

impl fmt::Display for FpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_field_string())
    }
}

impl FromStr for FpFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, hub) = match s.strip_prefix("hub-") {
            Some(rest) => (rest, true),
            None => (s, false),
        };
        FpFormat::by_name(name, hub).ok_or_else(|| Error::Parse(format!("unknown format {s:?}")))
    }
}

/// Exact value represented by `v`, including the ILSB term for HUB formats.
pub fn fp_decode(v: &FpValue) -> ExactReal {
    if v.is_zero() {
        return ExactReal::zero();
    }
    let m = v.format.sig_bits as i64;
    let int = (((1u128 << m) | v.significand as u128) << 1) | v.format.hub as u128;
    let signed = if v.sign { -(int as i128) } else { int as i128 };
    ExactReal::from_i128_scaled(signed, v.unbiased_exponent() - m - 1)
}

/// Nearest value of `format` to `x`.
///
/// Conventional formats round to nearest, ties to even. HUB formats truncate
/// the significand to the stored width; the ILSB places the result at the
/// midpoint of the truncation interval. Results below the smallest normal
/// flush to zero; results above the largest exponent are an error.
pub fn fp_encode(x: &ExactReal, format: FpFormat) -> Result<FpValue> {
    format.validate()?;
    let Some(mut e) = x.ilog2() else {
        return Ok(FpValue::zero(format));
    };
    let m = format.sig_bits as i64;
    let mag = x.abs();
    let rounding = if format.hub {
        GridRounding::Floor
    } else {
        GridRounding::NearestEven
    };
    let mut q: BigInt = mag.to_grid(e - m, rounding);
    if q.bits() as i64 > m + 1 {
        q >>= 1usize;
        e += 1;
    }
    let biased = e + format.bias();
    if biased < 1 {
        return Ok(FpValue::zero(format));
    }
    if biased as u64 > format.max_exponent() {
        return Err(Error::ExponentOverflow {
            exponent: biased,
            max: format.max_exponent(),
        });
    }
    let q = q.to_u64().expect("significand fits in 64 bits");
    Ok(FpValue {
        format,
        sign: x.is_negative(),
        exponent: biased as u32,
        significand: q - (1u64 << m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(s: &str) -> ExactReal {
        // Binary literal like "1.101011".
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits = format!("{int}{frac}");
        ExactReal::new(BigInt::parse_bytes(digits.as_bytes(), 2).unwrap(), -(frac.len() as i64))
    }

    #[test]
    fn decode_identity_and_zero() {
        let one = FpValue::from_fields(FpFormat::SINGLE, false, 127, 0).unwrap();
        assert_eq!(fp_decode(&one), ExactReal::one());
        assert!(fp_decode(&FpValue::zero(FpFormat::SINGLE)).is_zero());
    }

    #[test]
    fn decode_hub_appends_ilsb() {
        let f = FpFormat::new(4, 4, true).unwrap();
        // 1.0010 with ILSB represents 1.00101b = 1.15625
        let v = FpValue::from_fields(f, false, 7, 0b0010).unwrap();
        assert_eq!(fp_decode(&v).to_f64(), 1.15625);
        assert_eq!(v.to_f64(), 1.15625);
    }

    #[test]
    fn encode_hub_truncates_conventional_rounds() {
        let x = bin("1.101011");
        let hub = fp_encode(&x, FpFormat::new(4, 4, true).unwrap()).unwrap();
        assert_eq!(hub.significand, 0b1010);
        assert_eq!(fp_decode(&hub), bin("1.10101"));
        let conv = fp_encode(&x, FpFormat::new(4, 4, false).unwrap()).unwrap();
        assert_eq!(conv.significand, 0b1011);
        // Both errors equal 0.000001b in this case.
        assert_eq!((fp_decode(&hub) - x.clone()).abs(), (fp_decode(&conv) - x).abs());
    }

    #[test]
    fn encode_zero_and_limits() {
        assert!(fp_encode(&ExactReal::zero(), FpFormat::SINGLE).unwrap().is_zero());
        // Far below min normal flushes.
        assert!(fp_encode(&ExactReal::pow2(-200), FpFormat::SINGLE).unwrap().is_zero());
        assert!(matches!(
            fp_encode(&ExactReal::pow2(200), FpFormat::SINGLE),
            Err(Error::ExponentOverflow { .. })
        ));
        // Rounding up across a binade bumps the exponent.
        let v = fp_encode(&ExactReal::from_f64(1.99999999), FpFormat::SINGLE).unwrap();
        assert_eq!((v.exponent, v.significand), (128, 0));
    }

    #[test]
    fn bits_and_text_forms() {
        let v = FpValue::from_bits(FpFormat::SINGLE, 0x3F80_0000).unwrap();
        assert_eq!(v.to_f64(), 1.0);
        assert_eq!(v.to_bits(), 0x3F80_0000);
        let t = FpValue::parse_fields("1|0111|0010", true).unwrap();
        assert_eq!(t.to_field_string(), "1|0111|0010");
        assert_eq!(t.to_f64(), -1.15625);
        assert!(matches!(
            FpValue::from_bits(FpFormat::SINGLE, 0x0000_0001),
            Err(Error::Subnormal(_))
        ));
    }

    #[test]
    fn agrees_with_native_f32_rounding() {
        for v in [0.1f64, 1.0 / 3.0, -2.71875, 12345.678, 1e-30] {
            let e = FpValue::from_f64(v, FpFormat::SINGLE).unwrap();
            assert_eq!(e.to_f64(), v as f32 as f64);
        }
    }
}
