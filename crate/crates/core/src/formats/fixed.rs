use std::fmt;

use serde::{Deserialize, Serialize};

use super::exact::ExactReal;
use crate::error::{Error, Result};

/// Widest word the datapath models. Keeps `2 * bits + 1` inside an `i64`.
pub const MAX_WORD_WIDTH: u32 = 62;

/// Two's-complement fixed-point word.
///
/// A conventional word holds `bits * 2^-frac`. A HUB word carries an
/// implicit least significant bit of one, so it holds
/// `(2 * bits + 1) * 2^-(frac + 1)` and can never be exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedWord {
    bits: i64,
    width: u32,
    frac_bits: u32,
    hub: bool,
}

/// Disposal of the discarded bits of a right shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftRounding {
    /// Drop the bits (floor).
    Truncate,
    /// Round to nearest, ties to even, using a sticky bit.
    #[serde(alias = "rne")]
    NearestEven,
    /// Drop the bits of a HUB word, which rounds the HUB value to nearest.
    Hub,
}

impl FixedWord {
    pub fn new(bits: i64, width: u32, frac_bits: u32, hub: bool) -> Result<Self> {
        if !(2..=MAX_WORD_WIDTH).contains(&width) {
            return Err(Error::Config(format!(
                "word width {width} outside 2..={MAX_WORD_WIDTH}"
            )));
        }
        let w = FixedWord {
            bits,
            width,
            frac_bits,
            hub,
        };
        if bits < w.min_bits() || bits > w.max_bits() {
            return Err(Error::WordRange {
                value: bits as i128,
                width,
            });
        }
        Ok(w)
    }

    /// Constructor for values already known to fit.
    pub(crate) fn from_raw(bits: i64, width: u32, frac_bits: u32, hub: bool) -> Self {
        debug_assert!(width <= MAX_WORD_WIDTH);
        debug_assert!(bits >= -(1i64 << (width - 1)) && bits < (1i64 << (width - 1)));
        FixedWord {
            bits,
            width,
            frac_bits,
            hub,
        }
    }

    /// All-zero bit pattern of the given layout.
    pub fn zero(width: u32, frac_bits: u32, hub: bool) -> Self {
        Self::from_raw(0, width, frac_bits, hub)
    }

    /// Interpret the low `width` bits of `pattern` as a two's-complement word.
    pub fn from_pattern(pattern: u64, width: u32, frac_bits: u32, hub: bool) -> Result<Self> {
        if !(2..=MAX_WORD_WIDTH).contains(&width) {
            return Err(Error::Config(format!(
                "word width {width} outside 2..={MAX_WORD_WIDTH}"
            )));
        }
        if pattern >> width != 0 {
            return Err(Error::WordRange {
                value: pattern as i128,
                width,
            });
        }
        let shift = 64 - width;
        Ok(Self::from_raw(
            ((pattern << shift) as i64) >> shift,
            width,
            frac_bits,
            hub,
        ))
    }

    /// Parse a binary literal such as `01.0110`; the number of digits after
    /// the point sets `frac_bits` and the total digit count sets `width`.
    pub fn parse_binary(text: &str, hub: bool) -> Result<Self> {
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        let digits: String = format!("{int}{frac}");
        if digits.is_empty() || !digits.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!("not a binary word: {text:?}")));
        }
        let pattern = u64::from_str_radix(&digits, 2).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_pattern(pattern, digits.len() as u32, frac.len() as u32, hub)
    }

    pub fn bits(&self) -> i64 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn is_hub(&self) -> bool {
        self.hub
    }

    pub fn is_negative(&self) -> bool {
        self.bits < 0
    }

    pub fn min_bits(&self) -> i64 {
        -(1i64 << (self.width - 1))
    }

    pub fn max_bits(&self) -> i64 {
        (1i64 << (self.width - 1)) - 1
    }

    /// Unsigned bit pattern (low `width` bits).
    pub fn pattern(&self) -> u64 {
        (self.bits as u64) & (u64::MAX >> (64 - self.width))
    }

    /// Same bits and layout with a different HUB flag.
    pub fn with_hub(self, hub: bool) -> Self {
        FixedWord { hub, ..self }
    }

    /// Same bits, `extra` more integer bits (sign extension).
    pub fn widen(self, extra: u32) -> Result<Self> {
        Self::new(self.bits, self.width + extra, self.frac_bits, self.hub)
    }

    /// Same layout, new bits; `None` if they do not fit.
    pub fn with_bits(&self, bits: i64) -> Option<Self> {
        (bits >= self.min_bits() && bits <= self.max_bits()).then_some(FixedWord { bits, ..*self })
    }

    pub fn value(&self) -> ExactReal {
        if self.hub {
            ExactReal::from_i128_scaled(2 * self.bits as i128 + 1, -(self.frac_bits as i64) - 1)
        } else {
            ExactReal::from_i128_scaled(self.bits as i128, -(self.frac_bits as i64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.hub {
            (2.0 * self.bits as f64 + 1.0) * 2f64.powi(-(self.frac_bits as i32) - 1)
        } else {
            self.bits as f64 * 2f64.powi(-(self.frac_bits as i32))
        }
    }

    /// Binary rendering with the point placed by `frac_bits`.
    pub fn to_binary_string(&self) -> String {
        let s = format!("{:0w$b}", self.pattern(), w = self.width as usize);
        let split = self.width.saturating_sub(self.frac_bits) as usize;
        if self.frac_bits == 0 {
            s
        } else if split == 0 {
            format!(".{s}")
        } else {
            format!("{}.{}", &s[..split], &s[split..])
        }
    }

    pub fn to_hex_string(&self) -> String {
        format!("{:0w$x}", self.pattern(), w = self.width.div_ceil(4) as usize)
    }
}

impl fmt::Display for FixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.to_binary_string(), if self.hub { "[h]" } else { "" })
    }
}

/// Exact negation.
///
/// HUB words negate by bitwise inversion (the ILSB absorbs the increment);
/// conventional words use invert-plus-one and fail on the most negative
/// pattern.
pub fn fixed_negate(a: &FixedWord) -> Result<FixedWord> {
    if a.hub {
        return Ok(FixedWord { bits: !a.bits, ..*a });
    }
    if a.bits == a.min_bits() {
        return Err(Error::NegateOverflow { width: a.width });
    }
    Ok(FixedWord { bits: -a.bits, ..*a })
}

/// Arithmetic right shift by `k` keeping width and point position.
///
/// A shift of `width` or more forces the zero pattern.
pub fn fixed_round_shift(a: &FixedWord, k: u32, mode: ShiftRounding) -> FixedWord {
    if k == 0 {
        return *a;
    }
    if k >= a.width {
        return FixedWord { bits: 0, ..*a };
    }
    let floor = a.bits >> k;
    let bits = match mode {
        ShiftRounding::Truncate | ShiftRounding::Hub => floor,
        ShiftRounding::NearestEven => {
            let rem = a.bits - (floor << k);
            let half = 1i64 << (k - 1);
            if rem > half || (rem == half && floor & 1 == 1) {
                floor + 1
            } else {
                floor
            }
        }
    };
    FixedWord { bits, ..*a }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hub_negation_by_inversion() {
        let a = FixedWord::parse_binary("01.0110", true).unwrap();
        let n = fixed_negate(&a).unwrap();
        assert_eq!(n.to_binary_string(), "10.1001");
        assert_eq!(n.value(), -a.value());
    }

    #[test]
    fn conventional_negation() {
        let z = FixedWord::parse_binary("00.0000", false).unwrap();
        assert_eq!(fixed_negate(&z).unwrap(), z);
        let min = FixedWord::parse_binary("10.0000", false).unwrap();
        assert!(matches!(fixed_negate(&min), Err(Error::NegateOverflow { .. })));
    }

    #[test]
    fn hub_zero_pattern_is_symmetric() {
        let z = FixedWord::parse_binary("00.0000", true).unwrap();
        let n = fixed_negate(&z).unwrap();
        assert_eq!(n.to_binary_string(), "11.1111");
        assert_eq!(z.value().to_f64(), 1.0 / 32.0);
        assert_eq!(n.value().to_f64(), -1.0 / 32.0);
    }

    #[test]
    fn round_shift_examples() {
        let a = FixedWord::parse_binary("0.0110", false).unwrap();
        for mode in [ShiftRounding::Truncate, ShiftRounding::NearestEven, ShiftRounding::Hub] {
            assert_eq!(fixed_round_shift(&a, 0, mode), a);
        }
        // 0.0110 >> 2 = 0.000110: a tie between 0.0001 and 0.0010; even wins.
        let r = fixed_round_shift(&a, 2, ShiftRounding::NearestEven);
        assert_eq!(r.to_binary_string(), "0.0010");
        assert_eq!(
            fixed_round_shift(&a, 2, ShiftRounding::Truncate).to_binary_string(),
            "0.0001"
        );
        let neg = FixedWord::parse_binary("1.0110", false).unwrap();
        assert_eq!(
            fixed_round_shift(&neg, a.width() + 1, ShiftRounding::Truncate).bits(),
            0
        );
    }

    #[test]
    fn patterns_and_widening() {
        let w = FixedWord::from_pattern(0b1110, 4, 2, false).unwrap();
        assert_eq!(w.bits(), -2);
        assert_eq!(w.to_f64(), -0.5);
        let wide = w.widen(2).unwrap();
        assert_eq!(wide.pattern(), 0b111110);
        assert_eq!(wide.value(), w.value());
        assert!(FixedWord::new(8, 4, 2, false).is_err());
    }
}
