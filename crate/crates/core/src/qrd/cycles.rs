use serde::{Deserialize, Serialize};

use super::{rotation_count, GivensUnitConfig};

pub const INPUT_CONVERTER_STAGES: u64 = 2;
pub const OUTPUT_CONVERTER_STAGES: u64 = 3;

/// Cycle counts for one unit streaming a whole decomposition.
///
/// `total_cycles` assumes the unit is kept busy with one element pair per
/// cycle and counts the drain of the last rotation. Row dependencies
/// between successive rotations are not modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub latency_cycles: u64,
    pub initiation_interval_cycles: u64,
    pub total_cycles: u64,
    pub rotations_count: u64,
}

pub fn schedule_cycles(rows: usize, cols: usize, want_q: bool, cfg: &GivensUnitConfig) -> CycleReport {
    let p = cfg.rotator.iterations as u64;
    let latency = if cfg.pure_fixed {
        p
    } else {
        INPUT_CONVERTER_STAGES + p + OUTPUT_CONVERTER_STAGES
    };
    let e = (cols + if want_q { rows } else { 0 }) as u64;
    let rotations = rotation_count(rows, cols) as u64;
    let total = match rotations {
        0 => 0,
        k => latency + (k - 1) * e,
    };
    CycleReport {
        latency_cycles: latency,
        initiation_interval_cycles: e,
        total_cycles: total,
        rotations_count: rotations,
    }
}

/// Givens rotations per microsecond at `freq_mhz` with one rotation every
/// `interval` cycles.
pub fn throughput_mops(freq_mhz: f64, interval: u64) -> f64 {
    freq_mhz / interval as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::FpFormat;

    #[test]
    fn four_by_four() {
        let cfg = GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24);
        let r = schedule_cycles(4, 4, true, &cfg);
        assert_eq!(r.latency_cycles, 29);
        assert_eq!(r.initiation_interval_cycles, 8);
        assert_eq!(r.rotations_count, 6);
        assert_eq!(r.total_cycles, 29 + 5 * 8);
        let fixed = schedule_cycles(4, 4, false, &GivensUnitConfig::fixed(30, 27));
        assert_eq!((fixed.latency_cycles, fixed.initiation_interval_cycles), (27, 4));
        assert_eq!(schedule_cycles(1, 3, true, &cfg).total_cycles, 0);
    }

    #[test]
    fn json_field_names() {
        let cfg = GivensUnitConfig::fixed(30, 27);
        let v = serde_json::to_value(schedule_cycles(2, 2, false, &cfg)).unwrap();
        assert_eq!(v["latency_cycles"], 27);
        assert_eq!(v["rotations_count"], 1);
    }
}
