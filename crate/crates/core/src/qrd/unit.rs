use serde::{Deserialize, Serialize};

use crate::converters::{input_convert, word_to_fp, ConverterConfig};
use crate::cordic::{compensate_scale, compensation_constant, rotate, vectoring, RotatorConfig, SigmaVector};
use crate::error::{Error, Result};
use crate::formats::{FixedWord, FpFormat, FpValue, ShiftRounding};

/// Every knob of one Givens rotation unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GivensUnitConfig {
    pub format: FpFormat,
    pub converter: ConverterConfig,
    pub rotator: RotatorConfig,
    /// Bypass the converters and rotate fixed-point words directly.
    pub pure_fixed: bool,
}

impl GivensUnitConfig {
    /// Conventional FP unit with truncating input alignment and scale
    /// compensation enabled.
    pub fn ieee(format: FpFormat, width: u32, iterations: u32) -> Self {
        let mut rotator = RotatorConfig::new(width, iterations, false);
        rotator.compensate_scale = true;
        GivensUnitConfig {
            format: format.with_hub(false),
            converter: ConverterConfig::new(width),
            rotator,
            pure_fixed: false,
        }
    }

    /// HUB unit with biased extensions and no identity detection.
    pub fn hub(format: FpFormat, width: u32, iterations: u32) -> Self {
        let mut cfg = Self::ieee(format, width, iterations);
        cfg.format = format.with_hub(true);
        cfg.rotator.hub = true;
        cfg
    }

    /// Fixed-point rotator of `width` (datapath `width + 2`) with no converters.
    pub fn fixed(width: u32, iterations: u32) -> Self {
        let mut cfg = Self::ieee(FpFormat::SINGLE, width, iterations);
        cfg.pure_fixed = true;
        cfg
    }

    pub fn with_input_rounding(mut self, r: ShiftRounding) -> Self {
        self.converter.input_rounding = r;
        self
    }

    pub fn with_detect_identity(mut self, on: bool) -> Self {
        self.converter.hub_detect_identity = on;
        self
    }

    /// Unbiased extension in both HUB converters.
    pub fn with_unbiased(mut self, on: bool) -> Self {
        self.converter.hub_unbiased_extension = on;
        self.converter.hub_output_unbiased = on;
        self
    }

    pub fn with_compensation(mut self, on: bool) -> Self {
        self.rotator.compensate_scale = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.rotator.validate()?;
        if self.pure_fixed {
            return Ok(());
        }
        self.converter.validate(&self.format)?;
        if self.converter.width != self.rotator.width {
            return Err(Error::Config(format!(
                "converter width {} differs from rotator width {}",
                self.converter.width, self.rotator.width
            )));
        }
        if self.rotator.hub != self.format.hub {
            return Err(Error::Config("rotator and format disagree on HUB".into()));
        }
        Ok(())
    }
}

/// Operation selected by the `v/r` control.
#[derive(Debug, Clone, Copy)]
pub enum PairMode<'a> {
    Vector,
    Rotate(&'a SigmaVector),
}

/// An element type plus the unit that rotates pairs of it.
pub trait RotationUnit {
    type Elem: Clone;

    fn vector(&self, x: &Self::Elem, y: &Self::Elem) -> Result<(Self::Elem, Self::Elem, SigmaVector)>;
    fn rotate(&self, x: &Self::Elem, y: &Self::Elem, s: &SigmaVector) -> Result<(Self::Elem, Self::Elem)>;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Round a real into the element format.
    fn encode(&self, v: f64) -> Result<Self::Elem>;
    fn decode(&self, e: &Self::Elem) -> f64;
}

/// Input converter, rotator, optional scale compensation and output
/// converter composed into one FP Givens rotation unit.
#[derive(Debug, Clone)]
pub struct GivensUnit {
    cfg: GivensUnitConfig,
    constant: i64,
}

impl GivensUnit {
    pub fn new(cfg: GivensUnitConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.pure_fixed {
            return Err(Error::Config("pure fixed-point configs use FixedGivensUnit".into()));
        }
        Ok(GivensUnit {
            constant: compensation_constant(cfg.rotator.width, cfg.rotator.iterations),
            cfg,
        })
    }

    pub fn config(&self) -> &GivensUnitConfig {
        &self.cfg
    }

    fn compensate(&self, w: &FixedWord) -> FixedWord {
        if self.cfg.rotator.compensate_scale {
            compensate_scale(w, self.constant, self.cfg.rotator.width, self.cfg.rotator.hub)
        } else {
            *w
        }
    }

    fn check_format(&self, v: &FpValue) -> Result<()> {
        if v.format != self.cfg.format {
            return Err(Error::FormatMismatch);
        }
        Ok(())
    }

    /// Input conversion: aligned datapath words and the block exponent.
    pub fn load(&self, x: &FpValue, y: &FpValue) -> Result<(FixedWord, FixedWord, u32)> {
        self.check_format(x)?;
        self.check_format(y)?;
        let rot = &self.cfg.rotator;
        let block = input_convert(x, y, &self.cfg.converter)?;
        Ok((rot.to_datapath(&block.x)?, rot.to_datapath(&block.y)?, block.m_exp))
    }

    /// Scale compensation (when enabled) and output conversion.
    pub fn finish(&self, x: &FixedWord, y: &FixedWord, m_exp: u32) -> Result<(FpValue, FpValue)> {
        let (x, y) = (self.compensate(x), self.compensate(y));
        Ok((
            word_to_fp(&x, m_exp, &self.cfg.converter, self.cfg.format)?,
            word_to_fp(&y, m_exp, &self.cfg.converter, self.cfg.format)?,
        ))
    }

    pub fn pair(
        &self,
        x: &FpValue,
        y: &FpValue,
        mode: PairMode<'_>,
    ) -> Result<(FpValue, FpValue, Option<SigmaVector>)> {
        let (wx, wy, m_exp) = self.load(x, y)?;
        let rot = &self.cfg.rotator;
        let (ox, oy, sigma) = match mode {
            PairMode::Vector => {
                let (a, b, s) = vectoring(&wx, &wy, rot)?;
                (a, b, Some(s))
            }
            PairMode::Rotate(s) => {
                let (a, b) = rotate(&wx, &wy, s, rot)?;
                (a, b, None)
            }
        };
        let (fx, fy) = self.finish(&ox, &oy, m_exp)?;
        Ok((fx, fy, sigma))
    }
}

impl RotationUnit for GivensUnit {
    type Elem = FpValue;

    fn vector(&self, x: &FpValue, y: &FpValue) -> Result<(FpValue, FpValue, SigmaVector)> {
        let (a, b, s) = self.pair(x, y, PairMode::Vector)?;
        Ok((a, b, s.expect("vector mode returns sigma")))
    }

    fn rotate(&self, x: &FpValue, y: &FpValue, s: &SigmaVector) -> Result<(FpValue, FpValue)> {
        let (a, b, _) = self.pair(x, y, PairMode::Rotate(s))?;
        Ok((a, b))
    }

    fn zero(&self) -> FpValue {
        FpValue::zero(self.cfg.format)
    }

    fn one(&self) -> FpValue {
        FpValue::from_fields(self.cfg.format, false, self.cfg.format.bias() as u32, 0).expect("one is representable")
    }

    fn encode(&self, v: f64) -> Result<FpValue> {
        FpValue::from_f64(v, self.cfg.format)
    }

    fn decode(&self, e: &FpValue) -> f64 {
        e.to_f64()
    }
}

/// Full FP path for one pair: convert, rotate (vectoring or replay),
/// compensate when enabled, convert back.
pub fn givens_pair(
    x: &FpValue,
    y: &FpValue,
    mode: PairMode<'_>,
    cfg: &GivensUnitConfig,
) -> Result<(FpValue, FpValue, Option<SigmaVector>)> {
    GivensUnit::new(*cfg)?.pair(x, y, mode)
}

/// Rotator without converters. Elements are datapath-width words
/// (`N + 2` bits, `N - 2` fraction bits) so rotated rows can be fed back.
#[derive(Debug, Clone)]
pub struct FixedGivensUnit {
    cfg: RotatorConfig,
    constant: i64,
}

impl FixedGivensUnit {
    pub fn new(cfg: RotatorConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(FixedGivensUnit {
            constant: compensation_constant(cfg.width, cfg.iterations),
            cfg,
        })
    }

    pub fn config(&self) -> &RotatorConfig {
        &self.cfg
    }

    /// Round a real onto the input grid (`N`-bit word, nearest even), then
    /// widen onto the datapath. Values outside `[-2, 2)` are an error.
    pub fn quantize(&self, v: f64) -> Result<FixedWord> {
        let scaled = (v * 2f64.powi(self.cfg.frac_bits() as i32)).round_ties_even();
        let bits = scaled as i64;
        if !scaled.is_finite() || bits as f64 != scaled {
            return Err(Error::WordRange {
                value: scaled as i128,
                width: self.cfg.width,
            });
        }
        FixedWord::new(bits, self.cfg.width, self.cfg.frac_bits(), self.cfg.hub)?.widen(2)
    }

    fn compensate(&self, w: &FixedWord) -> FixedWord {
        if self.cfg.compensate_scale {
            compensate_scale(w, self.constant, self.cfg.width, self.cfg.hub)
        } else {
            *w
        }
    }

    fn check(&self, w: &FixedWord) -> Result<()> {
        if w.width() != self.cfg.datapath_width() || w.frac_bits() != self.cfg.frac_bits() {
            return Err(Error::Config("word is not a datapath word of this rotator".into()));
        }
        Ok(())
    }
}

impl RotationUnit for FixedGivensUnit {
    type Elem = FixedWord;

    fn vector(&self, x: &FixedWord, y: &FixedWord) -> Result<(FixedWord, FixedWord, SigmaVector)> {
        self.check(x)?;
        self.check(y)?;
        let (a, b, s) = vectoring(x, y, &self.cfg)?;
        Ok((self.compensate(&a), self.compensate(&b), s))
    }

    fn rotate(&self, x: &FixedWord, y: &FixedWord, s: &SigmaVector) -> Result<(FixedWord, FixedWord)> {
        self.check(x)?;
        self.check(y)?;
        let (a, b) = rotate(x, y, s, &self.cfg)?;
        Ok((self.compensate(&a), self.compensate(&b)))
    }

    fn zero(&self) -> FixedWord {
        FixedWord::zero(self.cfg.datapath_width(), self.cfg.frac_bits(), self.cfg.hub)
    }

    fn one(&self) -> FixedWord {
        FixedWord::new(
            1 << self.cfg.frac_bits(),
            self.cfg.datapath_width(),
            self.cfg.frac_bits(),
            self.cfg.hub,
        )
        .expect("one fits")
    }

    fn encode(&self, v: f64) -> Result<FixedWord> {
        self.quantize(v)
    }

    fn decode(&self, e: &FixedWord) -> f64 {
        e.to_f64()
    }
}
