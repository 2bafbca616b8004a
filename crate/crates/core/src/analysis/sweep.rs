use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{gen_matrix, reference_qr, snr_db, trial_rng, Distribution, Precision, Snr};
use crate::error::{Error, Result};
use crate::qrd::{qr_decompose, recompose, FixedGivensUnit, GivensUnit, GivensUnitConfig, Matrix, RotationUnit};

/// How one variant decomposes a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Approach {
    /// Modeled rotation unit. Pure fixed-point configs see the inputs
    /// scaled by `2^-r` and the recomposition scaled back.
    Unit(GivensUnitConfig),
    Reference {
        precision: Precision,
    },
}

impl Approach {
    pub fn label(&self) -> &'static str {
        match self {
            Approach::Unit(c) if c.pure_fixed => "fixed",
            Approach::Unit(c) if c.format.hub => "hub",
            Approach::Unit(_) => "ieee",
            Approach::Reference {
                precision: Precision::Double,
            } => "reference-double",
            Approach::Reference {
                precision: Precision::Single,
            } => "reference-single",
        }
    }

    /// Internal width and microrotation count; zero for references.
    pub fn n_p(&self) -> (u32, u32) {
        match self {
            Approach::Unit(c) => (c.rotator.width, c.rotator.iterations),
            Approach::Reference { .. } => (0, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    pub id: String,
    pub approach: Approach,
}

fn default_dim() -> usize {
    4
}

/// JSON experiment manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default = "default_dim")]
    pub rows: usize,
    #[serde(default = "default_dim")]
    pub cols: usize,
    pub trials: usize,
    pub r_values: Vec<u32>,
    #[serde(default)]
    pub distribution: Distribution,
    pub seed: u64,
    pub variants: Vec<Variant>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.r_values.is_empty() || self.r_values.contains(&0) {
            return Err(Error::Config(
                "r values must be a non-empty list of integers >= 1".into(),
            ));
        }
        if self.variants.is_empty() {
            return Err(Error::Config("no variants".into()));
        }
        let mut ids = HashSet::new();
        for v in &self.variants {
            if !ids.insert(v.id.as_str()) {
                return Err(Error::Config(format!("duplicate variant id {:?}", v.id)));
            }
            if let Approach::Unit(c) = &v.approach {
                c.validate()?;
            }
        }
        Ok(())
    }
}

enum Prepared {
    Fp(GivensUnit),
    Fixed(FixedGivensUnit),
    Reference(Precision),
}

impl Prepared {
    fn new(approach: &Approach) -> Result<Self> {
        Ok(match approach {
            Approach::Unit(c) if c.pure_fixed => Prepared::Fixed(FixedGivensUnit::new(c.rotator)?),
            Approach::Unit(c) => Prepared::Fp(GivensUnit::new(*c)?),
            Approach::Reference { precision } => Prepared::Reference(*precision),
        })
    }

    fn trial(&self, a: &Matrix<f64>, r: u32) -> Result<Snr> {
        let b = match self {
            Prepared::Fp(unit) => decompose(unit, a, 1.0)?,
            Prepared::Fixed(unit) => decompose(unit, a, (r as f64).exp2())?,
            Prepared::Reference(p) => {
                let (q, rr) = reference_qr(a, *p);
                q.matmul(&rr)?
            }
        };
        snr_db(a, &b)
    }
}

fn decompose<U: RotationUnit>(unit: &U, a: &Matrix<f64>, scale: f64) -> Result<Matrix<f64>> {
    let enc = a.try_map(|&v| unit.encode(v / scale))?;
    let res = qr_decompose(&enc, unit, true)?;
    Ok(recompose(&res, unit)?.map(|&v| v * scale))
}

/// SNR of one approach on one matrix.
pub fn run_trial(approach: &Approach, a: &Matrix<f64>, r: u32) -> Result<Snr> {
    Prepared::new(approach)?.trial(a, r)
}

/// One CSV line: mean SNR of a variant at one `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrRow {
    pub config_id: String,
    pub approach: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub p: u32,
    pub r: u32,
    pub trials: usize,
    /// Mean over non-exact trials; infinite when every trial was exact.
    pub mean_snr_db: f64,
    pub exact_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnrTable {
    pub rows: Vec<SnrRow>,
}

impl SnrTable {
    pub fn get(&self, config_id: &str, r: u32) -> Option<&SnrRow> {
        self.rows.iter().find(|row| row.config_id == config_id && row.r == r)
    }

    /// Mean of the per-`r` means of one variant.
    pub fn mean_over_r(&self, config_id: &str) -> Option<f64> {
        let v: Vec<f64> = self
            .rows
            .iter()
            .filter(|row| row.config_id == config_id)
            .map(|row| row.mean_snr_db)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Every variant on the same matrices, for every `r`.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SnrTable> {
    spec.validate()?;
    let prepared: Vec<Prepared> = spec
        .variants
        .iter()
        .map(|v| Prepared::new(&v.approach))
        .collect::<Result<_>>()?;
    let mut table = SnrTable::default();
    for &r in &spec.r_values {
        let per_trial: Vec<Vec<Snr>> = (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                let a = gen_matrix(
                    spec.rows,
                    spec.cols,
                    r,
                    spec.distribution,
                    &mut trial_rng(spec.seed, r, t),
                );
                prepared
                    .iter()
                    .map(|p| p.trial(&a, r))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::Trial {
                        seed: spec.seed,
                        r,
                        index: t,
                        source: Box::new(e),
                    })
            })
            .collect::<Result<_>>()?;
        for (k, v) in spec.variants.iter().enumerate() {
            let mut sum = 0.0;
            let mut count = 0usize;
            for snr in per_trial.iter().map(|t| t[k]) {
                if let Snr::Db(d) = snr {
                    sum += d;
                    count += 1;
                }
            }
            let (n, p) = v.approach.n_p();
            table.rows.push(SnrRow {
                config_id: v.id.clone(),
                approach: v.approach.label().to_string(),
                n,
                p,
                r,
                trials: spec.trials,
                mean_snr_db: if count == 0 { f64::INFINITY } else { sum / count as f64 },
                exact_count: spec.trials - count,
            });
        }
    }
    table.rows.sort_by(|a, b| {
        let ka = spec.variants.iter().position(|v| v.id == a.config_id);
        let kb = spec.variants.iter().position(|v| v.id == b.config_id);
        ka.cmp(&kb).then(a.r.cmp(&b.r))
    });
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::FpFormat;

    fn spec() -> ExperimentSpec {
        ExperimentSpec {
            rows: 4,
            cols: 4,
            trials: 6,
            r_values: vec![1, 3],
            distribution: Distribution::LogUniform,
            seed: 42,
            variants: vec![
                Variant {
                    id: "hub".into(),
                    approach: Approach::Unit(GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24)),
                },
                Variant {
                    id: "ref".into(),
                    approach: Approach::Reference {
                        precision: Precision::Double,
                    },
                },
            ],
        }
    }

    #[test]
    fn csv_schema_and_order() {
        let t = run_sweep(&spec()).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "config_id,approach,N,p,r,trials,mean_snr_db,exact_count"
        );
        assert_eq!(t.rows.len(), 4);
        assert_eq!((t.rows[0].config_id.as_str(), t.rows[0].r), ("hub", 1));
        assert_eq!((t.rows[3].config_id.as_str(), t.rows[3].r), ("ref", 3));
        assert!(t.get("ref", 1).unwrap().mean_snr_db > 280.0);
        assert!(t.mean_over_r("hub").unwrap() > 100.0);
    }

    #[test]
    fn manifest_round_trip_and_validation() {
        let s = spec();
        let json = serde_json::to_string(&s).unwrap();
        let back: ExperimentSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let mut bad = s.clone();
        bad.trials = 0;
        assert!(run_sweep(&bad).is_err());
        let mut dup = s;
        dup.variants[1].id = "hub".into();
        assert!(dup.validate().is_err());
    }
}
