//! Whole-stack simulation properties: reproducibility of runs, the shape and
//! precision of the CSV telemetry, disturbance-to-error monotonicity, and a
//! user-style custom trajectory flown end to end.

use rotorsim_core::sim::{run_scenario, write_telemetry, ScenarioConfig, TELEMETRY_HEADER};

fn telemetry_bytes(cfg: &ScenarioConfig) -> Vec<u8> {
    let out = run_scenario(cfg).expect("run should succeed");
    let mut buf = Vec::new();
    write_telemetry(&out.rows, &mut buf).expect("writing to memory cannot fail");
    buf
}

#[test]
fn identical_configs_reproduce_identical_telemetry_bytes() {
    let mut cfg = ScenarioConfig::rhodonea();
    cfg.t_end = 1.0;
    assert_eq!(telemetry_bytes(&cfg), telemetry_bytes(&cfg));

    let mut reseeded = cfg.clone();
    reseeded.disturbance.dryden.seed = cfg.disturbance.dryden.seed + 1;
    assert_ne!(telemetry_bytes(&cfg), telemetry_bytes(&reseeded));
}

#[test]
fn telemetry_is_rectangular_and_round_trips_f64() {
    let mut cfg = ScenarioConfig::flip();
    cfg.t_end = 0.5;
    let out = run_scenario(&cfg).unwrap();
    let mut buf = Vec::new();
    write_telemetry(&out.rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();

    let header = lines.next().unwrap();
    assert_eq!(header, TELEMETRY_HEADER);
    let width = header.split(',').count();
    assert_eq!(width, 36);

    let mut rows = 0;
    for (line, row) in lines.zip(&out.rows) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), width);
        // Serialization must preserve every bit of every double.
        for (parsed, value) in fields.iter().zip(row.values()) {
            assert_eq!(*parsed, value, "row {rows} lost precision");
        }
        rows += 1;
    }
    assert_eq!(rows, out.rows.len());
}

/// Doubling the gust intensities may at most double the post-transient RMS
/// position error, up to a constant floor — checked with factor-4 slack.
#[test]
fn gust_intensity_maps_monotonically_into_tracking_error() {
    let run_rms = |scale: f64| {
        let mut cfg = ScenarioConfig::flip();
        cfg.t_end = 10.0;
        cfg.disturbance.dryden.sigma_u *= scale;
        cfg.disturbance.dryden.sigma_v *= scale;
        cfg.disturbance.dryden.sigma_w *= scale;
        let out = run_scenario(&cfg).expect("windy flip should stay bounded");
        assert_eq!(out.metrics.bound_violations, 0);
        out.metrics.rms_pos_err_late
    };
    let baseline = run_rms(1.0);
    let doubled = run_rms(2.0);
    assert!(baseline > 0.0, "wind must actually disturb the vehicle");
    assert!(
        doubled <= 4.0 * baseline + 0.05,
        "rms jumped from {baseline:.4} to {doubled:.4}"
    );
}

#[test]
fn a_custom_spline_mission_flies_end_to_end() {
    let toml = r#"
        dt = 0.001
        t_end = 1.2
        [disturbance]
        wind = false
        drag = false
        [trajectory]
        kind = "spline"
        knots = [
            [0.0,  0.000, 0.0, -1.0],
            [0.15, 0.002, 0.0, -1.0],
            [0.30, 0.008, 0.0, -1.0],
            [0.45, 0.016, 0.0, -1.0],
            [0.60, 0.025, 0.0, -1.0],
            [0.75, 0.034, 0.0, -1.0],
            [0.90, 0.042, 0.0, -1.0],
            [1.05, 0.048, 0.0, -1.0],
            [1.20, 0.050, 0.0, -1.0],
            [1.35, 0.050, 0.0, -1.0],
        ]
    "#;
    let cfg = ScenarioConfig::from_toml_str(toml).unwrap();
    let out = run_scenario(&cfg).unwrap();
    assert_eq!(out.rows.len(), 1201);
    assert_eq!(out.metrics.bound_violations, 0);

    let last = out.rows.last().unwrap();
    assert!(
        last.pos_err < 0.05,
        "should track a centimeter-scale glide, err {} m",
        last.pos_err
    );
    assert!(last.att_err < 0.1, "attitude err {} rad", last.att_err);
    // The reference was followed, not just ended near: the vehicle moved.
    assert!((last.xi.x1 - 0.05).abs() < 0.05);
}
