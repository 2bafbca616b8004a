//! Shared inputs for the benchmarks.

use fpgivens::analysis::{gen_matrix, trial_rng, Distribution};
use fpgivens::{FixedWord, FpFormat, FpValue, GivensUnit, GivensUnitConfig, Matrix, RotationUnit, RotatorConfig};

/// Datapath words with magnitudes in `[1/4, 1]`.
pub fn word_pairs(cfg: &RotatorConfig, count: usize) -> Vec<(FixedWord, FixedWord)> {
    let a = gen_matrix(count, 2, 1, Distribution::LogUniform, &mut trial_rng(1, 1, 0));
    let f = cfg.frac_bits();
    let word = |v: f64| {
        let bits = (0.5 * v * 2f64.powi(f as i32)) as i64;
        FixedWord::new(bits, cfg.datapath_width(), f, cfg.hub).expect("in range")
    };
    (0..count).map(|i| (word(*a.get(i, 0)), word(*a.get(i, 1)))).collect()
}

pub fn hub_single_unit() -> GivensUnit {
    GivensUnit::new(GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24).with_detect_identity(true)).expect("valid config")
}

/// Random 4x4 matrices already encoded for `unit`.
pub fn matrices(unit: &GivensUnit, r: u32, count: usize) -> Vec<Matrix<FpValue>> {
    (0..count)
        .map(|t| {
            let a = gen_matrix(4, 4, r, Distribution::LogUniform, &mut trial_rng(2, r, t));
            a.try_map(|&v| unit.encode(v)).expect("representable")
        })
        .collect()
}
