//! Exhaustive checks over small widths, run by the `selftest` command.

use crate::converters::{input_convert, output_convert, ConverterConfig};
use crate::cordic::{microrotate, Sigma};
use crate::formats::{
    fixed_negate, fixed_round_shift, fp_decode, fp_encode, ExactReal, FixedWord, FpFormat, FpValue, ShiftRounding,
};

/// Outcome of one exhaustive check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// HUB FP truncation lands on the nearest HUB value of the input's binade;
/// exact midpoints go to the larger magnitude.
pub fn hub_fp_truncation(max_sig_bits: u32) -> CheckReport {
    let mut rep = CheckReport::new("hub-fp-truncation-is-nearest");
    for m in 2..=max_sig_bits {
        let fmt = FpFormat::new(4, m, true).expect("small format");
        let extra = 3;
        for e in [-2i64, 0, 3] {
            for k in 0..1u64 << (m + extra) {
                for neg in [false, true] {
                    // x = ±(1 + k·2^-(m+extra))·2^e
                    let mant = (1i64 << (m + extra)) + k as i64;
                    let x = ExactReal::new(if neg { -mant } else { mant }.into(), e - (m + extra) as i64);
                    let got = fp_encode(&x, fmt).expect("in range");
                    // Candidates (2j+1)·2^(e-m-1), j in [2^m, 2^(m+1)).
                    let scaled = mant << 1; // x in units of 2^(e-m-extra-1)
                    let step = 1i64 << extra;
                    let best = (1i64 << m..1i64 << (m + 1))
                        .min_by_key(|j| (((2 * j + 1) * step - scaled).abs(), -j))
                        .expect("non-empty");
                    let want = ExactReal::new(
                        if neg { -(2 * best + 1) } else { 2 * best + 1 }.into(),
                        e - m as i64 - 1,
                    );
                    rep.record(fp_decode(&got) == want, || {
                        format!("m={m} e={e} k={k} neg={neg}: {got}")
                    });
                }
            }
        }
    }
    rep
}

/// Dropping bits of a HUB word rounds its value to the nearest point of
/// the same grid.
pub fn hub_fixed_shift(max_width: u32) -> CheckReport {
    let mut rep = CheckReport::new("hub-shift-is-nearest");
    for width in 3..=max_width {
        for pattern in 0..1u64 << width {
            let w = FixedWord::from_pattern(pattern, width, width - 2, true).expect("pattern fits");
            let odd = 2 * w.bits() + 1;
            for k in 1..width {
                let got = fixed_round_shift(&w, k, ShiftRounding::Hub);
                // Nearest odd multiple of 2^k to `odd` in units of 2^-(f+1+k)
                // is unique: exact values are odd, grid points even.
                let target = odd;
                let lo = (-(1i64 << (width - 1))..1i64 << (width - 1))
                    .min_by_key(|c| ((2 * c + 1) * (1i64 << k) - target).abs())
                    .expect("non-empty");
                rep.record(got.bits() == lo, || format!("w={width} bits={} k={k}", w.bits()));
            }
        }
    }
    rep
}

/// Bitwise inversion of a HUB word is its exact negation.
pub fn hub_inversion(max_width: u32) -> CheckReport {
    let mut rep = CheckReport::new("hub-inversion-is-negation");
    for width in 2..=max_width {
        for pattern in 0..1u64 << width {
            let w = FixedWord::from_pattern(pattern, width, width - 1, true).expect("pattern fits");
            let n = fixed_negate(&w).expect("hub negation is total");
            rep.record(n.value() == -w.value(), || {
                format!("w={width} {}", w.to_binary_string())
            });
        }
    }
    rep
}

/// Microrotation with the carry-in trick against a one-bit-wider adder
/// that adds both ILSBs explicitly and truncates.
pub fn hub_adder(max_width: u32) -> CheckReport {
    let mut rep = CheckReport::new("hub-carry-in-adder");
    for width in 4..=max_width {
        let frac = width - 4;
        let span = 1i64 << (width - 1);
        for xb in -span..span {
            for yb in -span..span {
                let x = FixedWord::new(xb, width, frac, true).expect("in range");
                let y = FixedWord::new(yb, width, frac, true).expect("in range");
                for i in 0..width - 2 {
                    for sigma in [Sigma::Up, Sigma::Down] {
                        let s = if sigma == Sigma::Up { -1i128 } else { 1 };
                        let (xw, yw) = (2 * xb as i128 + 1, 2 * yb as i128 + 1);
                        let nx = ((xw << i) + s * yw).div_euclid(1 << (i + 1));
                        let ny = ((yw << i) - s * xw).div_euclid(1 << (i + 1));
                        let fits = |v: i128| v >= -(span as i128) && v < span as i128;
                        let got = microrotate(&x, &y, i, sigma, true);
                        let ok = match got {
                            Ok((a, b)) => fits(nx) && fits(ny) && a.bits() as i128 == nx && b.bits() as i128 == ny,
                            Err(_) => !(fits(nx) && fits(ny)),
                        };
                        rep.record(ok, || format!("w={width} x={xb} y={yb} i={i} {sigma:?}"));
                    }
                }
            }
        }
    }
    rep
}

/// Conventional nearest-even shift against exact rounding.
pub fn rne_shift(max_width: u32) -> CheckReport {
    let mut rep = CheckReport::new("rne-shift");
    for width in 2..=max_width {
        for pattern in 0..1u64 << width {
            let w = FixedWord::from_pattern(pattern, width, 0, false).expect("pattern fits");
            for k in 1..width {
                let got = fixed_round_shift(&w, k, ShiftRounding::NearestEven).bits();
                let q = w.bits() as f64 / (1u64 << k) as f64;
                rep.record(got as f64 == q.round_ties_even(), || {
                    format!("w={width} bits={} k={k}", w.bits())
                });
            }
        }
    }
    rep
}

/// Every bit pattern of small formats decodes and re-encodes to itself.
pub fn fp_round_trip() -> CheckReport {
    let mut rep = CheckReport::new("fp-encode-decode-round-trip");
    for hub in [false, true] {
        for (e, m) in [(3, 2), (4, 3), (5, 6)] {
            let fmt = FpFormat::new(e, m, hub).expect("small format");
            for bits in 0..1u64 << fmt.total_bits() {
                let Ok(v) = FpValue::from_bits(fmt, bits) else {
                    continue;
                };
                let back = fp_encode(&fp_decode(&v), fmt);
                rep.record(back.as_ref() == Ok(&v), || format!("{fmt:?} {bits:#x}"));
            }
        }
    }
    rep
}

/// Input then output conversion reproduces the operand holding the block
/// exponent.
pub fn converter_round_trip() -> CheckReport {
    let mut rep = CheckReport::new("converter-round-trip");
    for hub in [false, true] {
        let fmt = FpFormat::new(3, 3, hub).expect("small format");
        let cfg = ConverterConfig::new(fmt.sig_bits + 2);
        let values: Vec<FpValue> = (0..1u64 << fmt.total_bits())
            .filter_map(|b| FpValue::from_bits(fmt, b).ok())
            .collect();
        for x in &values {
            for y in &values {
                let block = input_convert(x, y, &cfg).expect("valid pair");
                let (ox, oy) = output_convert(&block, &cfg, fmt).expect("in range");
                let lead = if x.exponent >= y.exponent { (x, &ox) } else { (y, &oy) };
                rep.record(lead.0 == lead.1, || format!("hub={hub} x={x} y={y}"));
            }
        }
    }
    rep
}

/// All checks at the default exhaustive sizes.
pub fn run_all() -> Vec<CheckReport> {
    vec![
        hub_fp_truncation(8),
        hub_fixed_shift(10),
        hub_inversion(10),
        hub_adder(8),
        rne_shift(10),
        fp_round_trip(),
        converter_round_trip(),
    ]
}
