use fpgivens::qrd::{recompose, StreamInput, StreamingUnit};
use fpgivens::{
    givens_pair, qr_decompose, schedule_cycles, FixedGivensUnit, FpFormat, FpValue, GivensUnit, GivensUnitConfig,
    Matrix, PairMode, RotationUnit, RotatorConfig,
};

fn hub_unit() -> GivensUnit {
    GivensUnit::new(GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24).with_detect_identity(true)).unwrap()
}

#[test]
fn vectoring_three_four() {
    for cfg in [
        GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24),
        GivensUnitConfig::ieee(FpFormat::SINGLE, 27, 24),
    ] {
        let f = |v| FpValue::from_f64(v, cfg.format).unwrap();
        let (x, y, s) = givens_pair(&f(3.0), &f(4.0), PairMode::Vector, &cfg).unwrap();
        assert!((x.to_f64() - 5.0).abs() < 5.0 * 2f64.powi(-20));
        assert!(y.to_f64().abs() < 2f64.powi(-18));
        let s = s.unwrap();
        assert_eq!(s.len(), 24);
        // Replaying on (-4, 3) lands on the y axis.
        let (rx, ry, _) = givens_pair(&f(-4.0), &f(3.0), PairMode::Rotate(&s), &cfg).unwrap();
        assert!(rx.to_f64().abs() < 2f64.powi(-18));
        assert!((ry.to_f64() - 5.0).abs() < 5.0 * 2f64.powi(-20));
    }
}

#[test]
fn identity_decomposes_exactly_with_detection() {
    let unit = hub_unit();
    let a = Matrix::identity(4).try_map(|&v| unit.encode(v)).unwrap();
    let res = qr_decompose(&a, &unit, true).unwrap();
    // The identity pattern survives bit for bit on the diagonal. Zeros pass
    // through the HUB datapath with an ILSB and pick up last-place noise.
    let q = res.q.unwrap();
    for i in 0..4 {
        for k in 0..4 {
            if i == k {
                assert_eq!(res.r.get(i, k), a.get(i, k));
                assert_eq!(q.get(i, k), a.get(i, k));
            } else {
                assert!(unit.decode(res.r.get(i, k)).abs() <= 2f64.powi(-22));
                assert!(unit.decode(q.get(i, k)).abs() <= 2f64.powi(-22));
            }
        }
    }
}

#[test]
fn recomposition_close_to_input() {
    let unit = hub_unit();
    let vals = [
        4.0, -1.5, 2.25, 0.5, 1.0, 3.0, -2.0, 0.75, -0.5, 2.0, 1.25, -3.5, 2.5, 0.25, -1.0, 1.75,
    ];
    let a = Matrix::new(4, 4, vals.to_vec()).unwrap();
    let enc = a.try_map(|&v| unit.encode(v)).unwrap();
    let res = qr_decompose(&enc, &unit, true).unwrap();
    let b = recompose(&res, &unit).unwrap();
    assert!(b.max_abs_diff(&a) < 1e-5);
    assert_eq!(res.residuals.len(), 6);
    assert!(res.residuals.iter().all(|r| r.abs() < 1e-5));
}

#[test]
fn fixed_unit_decomposes() {
    let unit = FixedGivensUnit::new(GivensUnitConfig::fixed(30, 27).rotator).unwrap();
    let raw = FixedGivensUnit::new(RotatorConfig::new(30, 27, false)).unwrap();
    let a = Matrix::from_fn(4, 4, |i, j| ((i * 4 + j) as f64 * 0.37).sin() * 0.4);
    let enc = a.try_map(|&v| unit.encode(v)).unwrap();
    let res = qr_decompose(&enc, &unit, true).unwrap();
    let b = recompose(&res, &unit).unwrap();
    assert!(b.max_abs_diff(&a) < 1e-6);
    assert!(unit.encode(4.0).is_err());
    // Without compensation every rotation scales both rows by K.
    let res = qr_decompose(&enc, &raw, true).unwrap();
    assert!(recompose(&res, &raw).unwrap().max_abs_diff(&a) > 0.1);
}

#[test]
fn rectangular_without_q() {
    let unit = hub_unit();
    let a = Matrix::from_fn(6, 3, |i, j| {
        (i as f64 + 1.0) * if j == 1 { -1.0 } else { 0.5 } + j as f64
    });
    let enc = a.try_map(|&v| unit.encode(v)).unwrap();
    let res = qr_decompose(&enc, &unit, false).unwrap();
    assert!(res.q.is_none());
    assert!(recompose(&res, &unit).is_err());
    assert_eq!(res.residuals.len(), 5 + 4 + 3);
    // Column norms are preserved by the orthogonal transform.
    for j in 0..3 {
        let want: f64 = (0..6).map(|i| a.get(i, j).powi(2)).sum::<f64>().sqrt();
        let got: f64 = (0..6).map(|i| unit.decode(res.r.get(i, j)).powi(2)).sum::<f64>().sqrt();
        assert!((got - want).abs() < want * 1e-5);
    }
}

#[test]
fn cycle_examples() {
    let hub_double = GivensUnitConfig::hub(FpFormat::DOUBLE, 58, 55);
    assert_eq!(schedule_cycles(4, 4, true, &hub_double).latency_cycles, 60);
    let single = GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24);
    let r = schedule_cycles(4, 4, true, &single);
    assert_eq!((r.latency_cycles, r.initiation_interval_cycles), (29, 8));
    assert_eq!(schedule_cycles(4, 4, false, &single).initiation_interval_cycles, 4);
    assert_eq!(
        schedule_cycles(4, 4, true, &GivensUnitConfig::fixed(30, 27)).latency_cycles,
        27
    );
    assert_eq!(schedule_cycles(1, 5, true, &single).total_cycles, 0);
}

#[test]
fn streaming_latency_and_spacing() {
    let unit = GivensUnit::new(GivensUnitConfig::hub(FpFormat::DOUBLE, 58, 55)).unwrap();
    let f = |v| FpValue::from_f64(v, FpFormat::HUB_DOUBLE).unwrap();
    let mut s = StreamingUnit::new(unit.clone()).unwrap();
    assert_eq!(s.latency(), 60);
    let inputs: Vec<_> = (0..5)
        .map(|k| StreamInput {
            x: f(1.0 + k as f64),
            y: f(0.5 * k as f64 - 1.0),
            vectoring: k == 0,
        })
        .collect();
    let mut arrivals = Vec::new();
    let mut outputs = Vec::new();
    let mut feed = inputs.iter();
    for cycle in 1..=80u64 {
        if let Some(o) = s.step(feed.next().copied()).unwrap() {
            arrivals.push(cycle);
            outputs.push(o);
        }
    }
    assert_eq!(arrivals, vec![61, 62, 63, 64, 65]);
    let (vx, vy, sig) = unit.pair(&inputs[0].x, &inputs[0].y, PairMode::Vector).unwrap();
    assert_eq!(outputs[0], (vx, vy));
    let sig = sig.unwrap();
    for (inp, out) in inputs.iter().zip(&outputs).skip(1) {
        let (a, b, _) = unit.pair(&inp.x, &inp.y, PairMode::Rotate(&sig)).unwrap();
        assert_eq!(*out, (a, b));
    }
}
