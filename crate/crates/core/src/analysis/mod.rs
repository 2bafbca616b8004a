//! Monte Carlo SNR experiments over random matrices.

mod reference;
mod sweep;

pub use reference::{reference_qr, Precision};
pub use sweep::{run_sweep, run_trial, Approach, ExperimentSpec, SnrRow, SnrTable, Variant};

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qrd::Matrix;

/// Magnitude distribution inside `[2^-r, 2^r]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// Exponent uniform in `[-r, r]`.
    #[default]
    LogUniform,
    /// Magnitude uniform in `[2^-r, 2^r]`.
    Uniform,
}

/// Random matrix with independent entries of random sign.
pub fn gen_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, r: u32, dist: Distribution, rng: &mut R) -> Matrix<f64> {
    let (lo, hi) = (-(r as f64), r as f64);
    Matrix::from_fn(rows, cols, |_, _| {
        let mag = match dist {
            Distribution::LogUniform => rng.random_range(lo..=hi).exp2(),
            Distribution::Uniform => rng.random_range(lo.exp2()..=hi.exp2()),
        };
        if rng.random::<bool>() {
            -mag
        } else {
            mag
        }
    })
}

/// Independent stream for one trial, identical for every variant so that
/// configurations are compared on the same matrices.
pub fn trial_rng(seed: u64, r: u32, trial: usize) -> ChaCha8Rng {
    let mut z = seed ^ ((r as u64) << 48) ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Signal-to-noise ratio of an approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    /// The approximation equals the reference.
    Exact,
    Db(f64),
}

impl Snr {
    pub fn db(self) -> Option<f64> {
        match self {
            Snr::Exact => None,
            Snr::Db(v) => Some(v),
        }
    }
}

/// `10·log10(Σa² / Σ(a−b)²)`.
pub fn snr_db(a: &Matrix<f64>, b: &Matrix<f64>) -> Result<Snr> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::Dimension(format!(
            "{}x{} against {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let signal: f64 = a.as_slice().iter().map(|v| v * v).sum();
    if signal == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let noise: f64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    if noise == 0.0 {
        return Ok(Snr::Exact);
    }
    Ok(Snr::Db(10.0 * (signal / noise).log10()))
}
