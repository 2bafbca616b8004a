use std::fs;
use std::io::Write;
use std::process::ExitCode;

use fpgivens::analysis::{run_sweep, snr_db, ExperimentSpec, Snr};
use fpgivens::cordic::microrotate;
use fpgivens::qrd::{parse_real, recompose, throughput_mops};
use fpgivens::{
    input_convert, qr_decompose, schedule_cycles, FixedGivensUnit, FixedWord, FpFormat, FpValue, GivensUnit,
    GivensUnitConfig, Matrix, RotationUnit, Sigma, SigmaVector,
};

use crate::opts::{ConvertArgs, CyclesArgs, QrdArgs, RotateArgs, SweepArgs};
use crate::CliError;

/// `0x` without a binary exponent is a raw bit pattern; anything else is a
/// real number rounded into the format.
fn parse_operand(text: &str, fmt: FpFormat) -> Result<FpValue, CliError> {
    let t = text.trim();
    if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        if !hex.contains(['p', 'P', '.']) {
            let bits = u64::from_str_radix(hex, 16).map_err(|e| CliError::Data(format!("{t:?}: {e}")))?;
            if fmt.total_bits() < 64 && bits >> fmt.total_bits() != 0 {
                return Err(CliError::Data(format!("{t} has more than {} bits", fmt.total_bits())));
            }
            return Ok(FpValue::from_bits(fmt, bits)?);
        }
    }
    Ok(FpValue::from_f64(parse_real(t)?, fmt)?)
}

fn parse_sigma(bits: &str, p: u32) -> Result<SigmaVector, CliError> {
    let v = bits
        .chars()
        .map(|c| match c {
            '1' => Ok(Sigma::Up),
            '0' => Ok(Sigma::Down),
            _ => Err(CliError::Usage(format!("--sigma takes 0/1 digits, found {c:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != p as usize {
        return Err(CliError::Usage(format!(
            "--sigma has {} digits, expected p = {p}",
            v.len()
        )));
    }
    Ok(SigmaVector(v))
}

fn fp_line(name: &str, v: &FpValue) -> String {
    format!("{name} = {} {:#x} ({})", v.to_field_string(), v.to_bits(), v.to_f64())
}

fn word_line(name: &str, w: &FixedWord) -> String {
    format!(
        "{name} = {} 0x{} ({})",
        w.to_binary_string(),
        w.to_hex_string(),
        w.to_f64()
    )
}

fn unit_for(cfg: GivensUnitConfig) -> Result<GivensUnit, CliError> {
    Ok(GivensUnit::new(cfg)?)
}

pub fn convert(a: &ConvertArgs) -> Result<ExitCode, CliError> {
    if a.unit.pure_fixed {
        return Err(CliError::Usage(
            "convert has no converters to show with --pure-fixed".into(),
        ));
    }
    let cfg = a.unit.config(false)?;
    let (x, y) = (parse_operand(&a.x, cfg.format)?, parse_operand(&a.y, cfg.format)?);
    let block = input_convert(&x, &y, &cfg.converter)?;
    println!("{}", fp_line("x", &x));
    println!("{}", fp_line("y", &y));
    println!("m_exp = {} (2^{})", block.m_exp, block.m_exp as i64 - cfg.format.bias());
    println!("{}", word_line("x_fix", &block.x));
    println!("{}", word_line("y_fix", &block.y));
    Ok(ExitCode::SUCCESS)
}

fn trace_stages(x: FixedWord, y: FixedWord, sigma: Option<&SigmaVector>, p: u32, hub: bool) -> Result<(), CliError> {
    let (mut x, mut y) = (x, y);
    println!("{}", word_line("input x", &x));
    println!("{}", word_line("input y", &y));
    for i in 0..p {
        let s = match sigma {
            Some(v) => v.0[i as usize],
            None => Sigma::toward_axis(&x, &y),
        };
        (x, y) = microrotate(&x, &y, i, s, hub)?;
        println!(
            "stage {i:>3} sigma={} x={} y={}",
            s.bit(),
            x.to_binary_string(),
            y.to_binary_string()
        );
    }
    Ok(())
}

pub fn rotate(a: &RotateArgs) -> Result<ExitCode, CliError> {
    let cfg = a.unit.config(false)?;
    let p = cfg.rotator.iterations;
    let sigma = a.sigma.as_deref().map(|s| parse_sigma(s, p)).transpose()?;
    if cfg.pure_fixed {
        let unit = FixedGivensUnit::new(cfg.rotator)?;
        let x = unit.quantize(parse_real(&a.x)?)?;
        let y = unit.quantize(parse_real(&a.y)?)?;
        if a.trace {
            trace_stages(x, y, sigma.as_ref(), p, cfg.rotator.hub)?;
        }
        let (ox, oy, s) = match &sigma {
            Some(s) => {
                let (ox, oy) = unit.rotate(&x, &y, s)?;
                (ox, oy, s.clone())
            }
            None => unit.vector(&x, &y)?,
        };
        println!("{}", word_line("x'", &ox));
        println!("{}", word_line("y'", &oy));
        println!("sigma = {}", s.to_bit_string());
        return Ok(ExitCode::SUCCESS);
    }
    let unit = unit_for(cfg)?;
    let (x, y) = (parse_operand(&a.x, cfg.format)?, parse_operand(&a.y, cfg.format)?);
    if a.trace {
        let (wx, wy, m_exp) = unit.load(&x, &y)?;
        println!("m_exp = {m_exp}");
        trace_stages(wx, wy, sigma.as_ref(), p, cfg.rotator.hub)?;
    }
    let (ox, oy, s) = match &sigma {
        Some(s) => {
            let (ox, oy) = unit.rotate(&x, &y, s)?;
            (ox, oy, s.clone())
        }
        None => unit.vector(&x, &y)?,
    };
    println!("{}", fp_line("x'", &ox));
    println!("{}", fp_line("y'", &oy));
    println!("sigma = {}", s.to_bit_string());
    Ok(ExitCode::SUCCESS)
}

/// `(Q, R, Q·R)` decoded to binary64.
type Factors = (Matrix<f64>, Matrix<f64>, Matrix<f64>);

fn decompose<U: RotationUnit>(unit: &U, a: &Matrix<f64>) -> Result<Factors, CliError> {
    let enc = a.try_map(|&v| unit.encode(v))?;
    let res = qr_decompose(&enc, unit, true)?;
    let b = recompose(&res, unit)?;
    let r = res.r.map(|v| unit.decode(v));
    let q = res.q.expect("Q requested").map(|v| unit.decode(v));
    Ok((q, r, b))
}

pub fn qrd(a: &QrdArgs) -> Result<ExitCode, CliError> {
    let cfg = a.unit.config(true)?;
    let text = fs::read_to_string(&a.input).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    let m = Matrix::parse_csv(&text)?;
    let (q, r, b) = if cfg.pure_fixed {
        decompose(&FixedGivensUnit::new(cfg.rotator)?, &m)?
    } else {
        decompose(&unit_for(cfg)?, &m)?
    };
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("R.csv"), r.to_csv())?;
            fs::write(dir.join("Q.csv"), q.to_csv())?;
        }
        None => {
            print!("R\n{}Q\n{}", r.to_csv(), q.to_csv());
        }
    }
    match snr_db(&m, &b) {
        Ok(Snr::Db(d)) => println!("snr_db = {d:.2}"),
        Ok(Snr::Exact) => println!("snr_db = exact"),
        Err(fpgivens::Error::ZeroSignal) => println!("snr_db = undefined (zero matrix)"),
        Err(e) => return Err(e.into()),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn cycles(a: &CyclesArgs) -> Result<ExitCode, CliError> {
    if a.rows == 0 || a.cols == 0 {
        return Err(CliError::Usage("--rows and --cols must be positive".into()));
    }
    let cfg = a.unit.config(true)?;
    let report = schedule_cycles(a.rows, a.cols, !a.no_q, &cfg);
    let mut json = serde_json::to_value(report).expect("report serializes");
    if let Some(f) = a.freq_mhz {
        json["throughput_mrot_per_s"] = throughput_mops(f, report.initiation_interval_cycles).into();
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json).expect("json value serializes")
    );
    Ok(ExitCode::SUCCESS)
}

pub fn sweep(a: &SweepArgs) -> Result<ExitCode, CliError> {
    let text = fs::read_to_string(&a.input).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    let mut spec: ExperimentSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if let Some(t) = a.trials {
        spec.trials = t;
    }
    if let Some(r) = &a.r {
        spec.r_values = r.clone();
    }
    let table = run_sweep(&spec)?;
    match &a.out {
        Some(path) => table.write_csv(fs::File::create(path)?)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(table.to_csv().as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn selftest() -> Result<ExitCode, CliError> {
    let mut ok = true;
    for rep in fpgivens::selftest::run_all() {
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        ok &= rep.passed();
        match &rep.first_failure {
            Some(f) => println!(
                "{status} {} ({} cases, {} failures; first: {f})",
                rep.name, rep.cases, rep.failures
            ),
            None => println!("{status} {} ({} cases)", rep.name, rep.cases),
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
