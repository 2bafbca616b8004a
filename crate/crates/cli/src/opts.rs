use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fpgivens::{FpFormat, GivensUnitConfig, ShiftRounding};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fpgivens",
    version,
    about = "Bit-accurate FP and HUB Givens rotation unit model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align two FP operands into block floating-point words.
    Convert(ConvertArgs),
    /// Rotate one pair: vectoring by default, or replay `--sigma`.
    Rotate(RotateArgs),
    /// QR-decompose a CSV matrix.
    Qrd(QrdArgs),
    /// Latency and initiation interval of a decomposition, as JSON.
    Cycles(CyclesArgs),
    /// Run an SNR experiment manifest and write the CSV table.
    Sweep(SweepArgs),
    /// Exhaustive small-width checks of the arithmetic.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Half,
    Single,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Round {
    Trunc,
    Rne,
}

/// Unit configuration shared by the single-unit commands.
#[derive(Debug, Clone, Args)]
pub struct UnitArgs {
    #[arg(long, value_enum, default_value_t = Precision::Single)]
    pub fp: Precision,
    /// HUB formats (the default).
    #[arg(long, conflicts_with = "ieee")]
    pub hub: bool,
    /// Conventional formats instead of HUB.
    #[arg(long)]
    pub ieee: bool,
    /// Internal significand width N. Defaults to m+3, widened to fit `--iters`.
    #[arg(long)]
    pub n: Option<u32>,
    /// Microrotations p. Defaults to N-2 (HUB) or N-3 (conventional).
    #[arg(long)]
    pub iters: Option<u32>,
    /// Alignment rounding of conventional inputs.
    #[arg(long, value_enum, default_value_t = Round::Trunc)]
    pub round: Round,
    /// Unbiased HUB extensions in both converters.
    #[arg(long)]
    pub unbiased: bool,
    /// Encode HUB +/-1.0 exactly (the default).
    #[arg(long, conflicts_with = "no_detect_identity")]
    pub detect_identity: bool,
    #[arg(long)]
    pub no_detect_identity: bool,
    /// Scale compensation after the last stage (default for qrd).
    #[arg(long, conflicts_with = "no_compensate")]
    pub compensate: bool,
    #[arg(long)]
    pub no_compensate: bool,
    /// Fixed-point rotator only (default N=30, p=27), no converters.
    #[arg(long)]
    pub pure_fixed: bool,
}

impl UnitArgs {
    pub fn is_hub(&self) -> bool {
        !self.ieee
    }

    pub fn format(&self) -> FpFormat {
        let base = match self.fp {
            Precision::Half => FpFormat::HALF,
            Precision::Single => FpFormat::SINGLE,
            Precision::Double => FpFormat::DOUBLE,
        };
        base.with_hub(self.is_hub())
    }

    /// Resolve defaults and check flag combinations.
    pub fn config(&self, compensate_default: bool) -> Result<GivensUnitConfig, CliError> {
        let compensate = (compensate_default || self.compensate) && !self.no_compensate;
        let hub = self.is_hub();
        if self.pure_fixed {
            let n = self.n.unwrap_or(30);
            let p = self.iters.unwrap_or(if self.n.is_some() { n - 3 } else { 27 });
            let cfg = GivensUnitConfig::fixed(n, p).with_compensation(compensate);
            cfg.validate()?;
            return Ok(cfg);
        }
        if !hub && self.unbiased {
            return Err(CliError::Usage("--unbiased applies to HUB formats only".into()));
        }
        if hub && self.round == Round::Rne {
            return Err(CliError::Usage(
                "--round rne applies to conventional formats; HUB alignment truncates".into(),
            ));
        }
        let fmt = self.format();
        let slack = if hub { 2 } else { 3 };
        let n = match (self.n, self.iters) {
            (Some(n), _) => n,
            (None, Some(p)) => (fmt.sig_bits + 3).max(p + 3),
            (None, None) => fmt.sig_bits + 3,
        };
        if n < slack + 1 {
            return Err(CliError::Usage(format!("--n {n} is too small")));
        }
        let p = self.iters.unwrap_or(n - slack);
        let cfg = if hub {
            GivensUnitConfig::hub(fmt, n, p)
                .with_detect_identity(!self.no_detect_identity)
                .with_unbiased(self.unbiased)
        } else {
            GivensUnitConfig::ieee(fmt, n, p).with_input_rounding(match self.round {
                Round::Trunc => ShiftRounding::Truncate,
                Round::Rne => ShiftRounding::NearestEven,
            })
        };
        let cfg = cfg.with_compensation(compensate);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub unit: UnitArgs,
    /// Decimal, hex-float, or `0x` bit pattern.
    #[arg(allow_hyphen_values = true)]
    pub x: String,
    #[arg(allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Debug, Args)]
pub struct RotateArgs {
    #[command(flatten)]
    pub unit: UnitArgs,
    #[arg(allow_hyphen_values = true)]
    pub x: String,
    #[arg(allow_hyphen_values = true)]
    pub y: String,
    /// Directions to replay, stage 0 first (`1` = counter-clockwise).
    #[arg(long)]
    pub sigma: Option<String>,
    /// Print the datapath words after every stage.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct QrdArgs {
    #[command(flatten)]
    pub unit: UnitArgs,
    /// Input matrix, CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Directory for R.csv and Q.csv; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub unit: UnitArgs,
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    /// Leave out the identity rows that accumulate Q.
    #[arg(long)]
    pub no_q: bool,
    /// Clock in MHz, adds a throughput figure.
    #[arg(long)]
    pub freq_mhz: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Experiment manifest, JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated dynamic-range exponents.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<u32>>,
}
