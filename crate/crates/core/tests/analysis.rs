use fpgivens::analysis::{
    gen_matrix, reference_qr, run_sweep, run_trial, snr_db, trial_rng, Approach, Distribution, ExperimentSpec,
    Precision, Snr, Variant,
};
use fpgivens::{FpFormat, GivensUnitConfig, Matrix};

#[test]
fn log_uniform_exponents_are_flat() {
    // Chi-square over 40 unit-width bins of log2|a| for r = 20.
    let r = 20;
    let bins = 2 * r as usize;
    let mut counts = vec![0usize; bins];
    let mut n = 0;
    for t in 0..2000 {
        let a = gen_matrix(4, 4, r, Distribution::LogUniform, &mut trial_rng(7, r, t));
        for v in a.as_slice() {
            let e = v.abs().log2();
            assert!((-(r as f64)..=r as f64).contains(&e));
            counts[((e + r as f64).floor() as usize).min(bins - 1)] += 1;
            n += 1;
        }
    }
    let expected = n as f64 / bins as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 39 degrees of freedom, 99.9th percentile is about 72.
    assert!(chi2 < 72.0, "chi2 = {chi2}");
    let neg = (0..200)
        .flat_map(|t| {
            gen_matrix(4, 4, 3, Distribution::LogUniform, &mut trial_rng(7, 3, t))
                .as_slice()
                .to_vec()
        })
        .filter(|v| *v < 0.0)
        .count();
    assert!((1400..1800).contains(&neg), "{neg} negatives of 3200");
}

#[test]
fn trial_streams_are_deterministic_and_distinct() {
    let a = gen_matrix(4, 4, 5, Distribution::LogUniform, &mut trial_rng(1, 5, 3));
    let b = gen_matrix(4, 4, 5, Distribution::LogUniform, &mut trial_rng(1, 5, 3));
    assert_eq!(a, b);
    for other in [trial_rng(1, 5, 4), trial_rng(1, 6, 3), trial_rng(2, 5, 3)] {
        let mut rng = other;
        assert_ne!(gen_matrix(4, 4, 5, Distribution::LogUniform, &mut rng), a);
    }
    let u = gen_matrix(8, 8, 4, Distribution::Uniform, &mut trial_rng(1, 4, 0));
    assert!(u.as_slice().iter().all(|v| (1.0 / 16.0..=16.0).contains(&v.abs())));
}

#[test]
fn snr_examples() {
    let a = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert_eq!(snr_db(&a, &a).unwrap(), Snr::Exact);
    let b = Matrix::from_rows(vec![vec![1.01, 0.0], vec![0.0, 1.0]]).unwrap();
    let got = snr_db(&a, &b).unwrap().db().unwrap();
    assert!((got - 10.0 * (2.0f64 / 1e-4).log10()).abs() < 1e-6);
    assert!(snr_db(&Matrix::from_fn(2, 2, |_, _| 0.0), &b).is_err());
    assert!(snr_db(&a, &Matrix::identity(3)).is_err());
}

#[test]
fn reference_double_reconstructs() {
    for t in 0..50 {
        let a = gen_matrix(4, 4, 10, Distribution::LogUniform, &mut trial_rng(3, 10, t));
        let (q, r) = reference_qr(&a, Precision::Double);
        let b = q.matmul(&r).unwrap();
        let scale = a.as_slice().iter().fold(0f64, |m, v| m.max(v.abs()));
        assert!(b.max_abs_diff(&a) <= 1e-12 * scale);
        for i in 0..4 {
            for j in 0..i {
                assert_eq!(*r.get(i, j), 0.0);
            }
        }
    }
}

#[test]
fn reference_single_snr_band() {
    let approach = Approach::Reference {
        precision: Precision::Single,
    };
    let n = 300;
    let mean: f64 = (0..n)
        .map(|t| {
            let a = gen_matrix(4, 4, 8, Distribution::LogUniform, &mut trial_rng(11, 8, t));
            run_trial(&approach, &a, 8).unwrap().db().unwrap()
        })
        .sum::<f64>()
        / n as f64;
    // Binary32 with 24 significand bits sits roughly 6 dB per bit above 0.
    assert!((135.0..150.0).contains(&mean), "{mean}");
}

#[test]
fn sweep_csv_is_reproducible() {
    let spec = ExperimentSpec {
        rows: 4,
        cols: 4,
        trials: 20,
        r_values: vec![2, 9],
        distribution: Distribution::LogUniform,
        seed: 99,
        variants: vec![
            Variant {
                id: "hub-26-24".into(),
                approach: Approach::Unit(GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24).with_detect_identity(true)),
            },
            Variant {
                id: "ieee-27-24".into(),
                approach: Approach::Unit(GivensUnitConfig::ieee(FpFormat::SINGLE, 27, 24)),
            },
            Variant {
                id: "fixp".into(),
                approach: Approach::Unit(GivensUnitConfig::fixed(30, 27)),
            },
        ],
    };
    let a = run_sweep(&spec).unwrap().to_csv();
    let b = run_sweep(&spec).unwrap().to_csv();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 3 * 2);
    assert!(a.lines().nth(1).unwrap().starts_with("hub-26-24,hub,26,24,2,20,"));
    let json = serde_json::to_string_pretty(&spec).unwrap();
    assert_eq!(serde_json::from_str::<ExperimentSpec>(&json).unwrap(), spec);
}
