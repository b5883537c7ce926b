//! Command-line front end: run scenarios, benchmark the rotation kernels,
//! and sanity-check the library's core invariants.
//!
//! Exit codes: 0 clean, 1 usage or configuration problem, 2 invariant
//! violation (failed check, tracking-bound violation, attitude-norm drift),
//! 3 numeric failure (non-finite state, diverged integration, controller
//! singularity).

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rotorsim_core::batch::{rotate_batch_matrix, rotate_batch_seq, Mat3};
use rotorsim_core::controller::rotation_error_bound;
use rotorsim_core::ga3::{exp_bivector, log_rotor, Bivector, Rotor, Vector};
use rotorsim_core::rigid_body::{self, ForceTorque, RigidBodyState, VehicleParams};
use rotorsim_core::sim::{
    emit_plots, run_scenario, write_telemetry, Metrics, Scenario, ScenarioConfig, SimError,
    SimOutput,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rotorsim",
    version,
    about = "Thrust-vectored rigid-body flight simulator",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and emit telemetry, metrics, and plot data.
    Simulate(SimulateArgs),
    /// Time bulk vector rotation: rotor sandwich vs cached 3x3 matrix.
    BenchRotate(BenchRotateArgs),
    /// Run the built-in invariant suite headlessly.
    Check(CheckArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario preset (flip | rhodonea | custom).
    #[arg(long, value_parser = Scenario::from_str, required_unless_present = "config")]
    scenario: Option<Scenario>,
    /// TOML file refining the preset (required fields only; the rest come
    /// from the preset named here or by its `scenario` key).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Plant step, seconds.
    #[arg(long, value_name = "S")]
    dt: Option<f64>,
    /// Run length, seconds.
    #[arg(long, value_name = "S")]
    t_end: Option<f64>,
    /// Noise seed for the wind filters.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Enable or disable wind (steady and gusts).
    #[arg(long, value_parser = parse_toggle, value_name = "on|off")]
    wind: Option<bool>,
    /// Enable or disable aerodynamic drag.
    #[arg(long, value_parser = parse_toggle, value_name = "on|off")]
    drag: Option<bool>,
    /// Directory for telemetry.csv, metrics.txt, and plot data.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchRotateArgs {
    /// Number of random vectors to rotate.
    #[arg(long, default_value_t = 10_000_000)]
    count: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Randomized cases per sampled invariant.
    #[arg(long, default_value_t = 100_000)]
    cases: usize,
}

fn parse_toggle(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(format!("expected on|off, got '{other}'")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match cli.cmd {
        Command::Simulate(args) => simulate(args),
        Command::BenchRotate(args) => bench_rotate(args),
        Command::Check(args) => check(args),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("rotorsim: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn simulate(args: SimulateArgs) -> ExitCode {
    let mut cfg = match &args.config {
        Some(path) => match ScenarioConfig::from_toml_file_with_base(path, args.scenario) {
            Ok(cfg) => cfg,
            Err(e) => return usage_error(e),
        },
        None => ScenarioConfig::preset(args.scenario.expect("clap enforces one of the two")),
    };
    if let Some(want) = args.scenario {
        if cfg.scenario != want {
            return usage_error(format!(
                "--scenario {want} conflicts with the config file's scenario {}",
                cfg.scenario
            ));
        }
    }
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    }
    if let Some(t_end) = args.t_end {
        cfg.t_end = t_end;
    }
    if let Some(seed) = args.seed {
        cfg.disturbance.dryden.seed = seed;
    }
    if let Some(wind) = args.wind {
        cfg.disturbance.wind_enabled = wind;
    }
    if let Some(drag) = args.drag {
        cfg.disturbance.drag_enabled = drag;
    }
    if let Some(out) = args.out {
        cfg.out_dir = Some(out);
    }
    if let Err(e) = cfg.validate() {
        return usage_error(e);
    }

    let out = match run_scenario(&cfg) {
        Ok(out) => out,
        Err(e @ SimError::RotorDrift { .. }) => {
            eprintln!("rotorsim: {e}");
            return ExitCode::from(EXIT_INVARIANT);
        }
        // Sampling outside the reference's domain is a configuration
        // problem, not a numeric one.
        Err(e @ SimError::Reference { .. }) => return usage_error(e),
        Err(e) => {
            eprintln!("rotorsim: {e}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };

    if let Some(dir) = &cfg.out_dir {
        if let Err(e) = write_outputs(&cfg, &out, dir) {
            return usage_error(e);
        }
    }
    print!("{}", metrics_report(&cfg, &out));
    if out.metrics.bound_violations > 0 {
        eprintln!(
            "rotorsim: rotation error bound violated at {} step(s)",
            out.metrics.bound_violations
        );
        return ExitCode::from(EXIT_INVARIANT);
    }
    ExitCode::SUCCESS
}

fn write_outputs(cfg: &ScenarioConfig, out: &SimOutput, dir: &PathBuf) -> Result<(), String> {
    let ctx = |e: std::io::Error| format!("writing under {}: {e}", dir.display());
    std::fs::create_dir_all(dir).map_err(ctx)?;
    let mut telemetry = BufWriter::new(File::create(dir.join("telemetry.csv")).map_err(ctx)?);
    write_telemetry(&out.rows, &mut telemetry).map_err(ctx)?;
    telemetry.flush().map_err(ctx)?;
    std::fs::write(dir.join("metrics.txt"), metrics_report(cfg, out)).map_err(ctx)?;
    emit_plots(&out.rows, dir).map_err(|e| e.to_string())?;
    Ok(())
}

fn metrics_report(cfg: &ScenarioConfig, out: &SimOutput) -> String {
    let m: &Metrics = &out.metrics;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "scenario {} | {} rows | dt {} s | t_end {} s | seed {}",
        cfg.scenario,
        out.rows.len(),
        cfg.dt,
        cfg.t_end,
        cfg.disturbance.dryden.seed
    );
    let _ = writeln!(s, "rms position error (late half)  {:.6e} m", m.rms_pos_err_late);
    let _ = writeln!(s, "max position error (late half)  {:.6e} m", m.max_pos_err_late);
    let _ = writeln!(s, "max attitude error              {:.6e} rad", m.max_att_err);
    let _ = writeln!(s, "position settling time (5%)     {:.3} s", m.settle_pos);
    let _ = writeln!(s, "attitude settling time (5%)     {:.3} s", m.settle_att);
    let _ = writeln!(s, "peak thrust                     {:.6e} N", m.peak_thrust);
    let _ = writeln!(s, "peak torque                     {:.6e} N m", m.peak_torque);
    let _ = writeln!(s, "bound violations                {}", m.bound_violations);
    s
}

fn bench_rotate(args: BenchRotateArgs) -> ExitCode {
    let n = args.count.max(1);
    let chunk = n.min(1_000_000);
    let r = exp_bivector(Bivector::new(0.3, -0.8, 0.5));
    let m = Mat3::from_rotor(r);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut done = 0_usize;
    let mut rotor_time = Duration::ZERO;
    let mut matrix_time = Duration::ZERO;
    while done < n {
        let len = chunk.min(n - done);
        let vs: Vec<Vector> = (0..len)
            .map(|_| {
                Vector::new(
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                )
            })
            .collect();
        let start = Instant::now();
        std::hint::black_box(rotate_batch_seq(r, &vs));
        rotor_time += start.elapsed();
        let start = Instant::now();
        std::hint::black_box(rotate_batch_matrix(&m, &vs));
        matrix_time += start.elapsed();
        done += len;
    }
    let ns_per = |d: Duration| d.as_nanos() as f64 / n as f64;
    println!(
        "rotor sandwich  {:8.2} ns/op  ({} rotations in {:.1} ms)",
        ns_per(rotor_time),
        n,
        rotor_time.as_secs_f64() * 1e3
    );
    println!(
        "matrix          {:8.2} ns/op  ({} rotations in {:.1} ms)",
        ns_per(matrix_time),
        n,
        matrix_time.as_secs_f64() * 1e3
    );
    ExitCode::SUCCESS
}

type Check = (&'static str, Box<dyn Fn() -> Result<(), String>>);

fn check(args: CheckArgs) -> ExitCode {
    let cases = args.cases.max(1);
    let checks: [Check; 5] = [
        ("algebra exp/log roundtrip and composition", Box::new(move || algebra_check(cases))),
        ("gain margins (closed-loop eigenvalues)", Box::new(gain_check)),
        ("rotation error bound on random attitudes", Box::new(move || bound_check(cases))),
        ("integrator against closed-form motion", Box::new(integrator_check)),
        ("scenario determinism", Box::new(determinism_check)),
    ];
    let mut failed = false;
    for (name, run) in checks {
        match run() {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failed = true;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed {
        ExitCode::from(EXIT_INVARIANT)
    } else {
        ExitCode::SUCCESS
    }
}

fn random_rotor(rng: &mut ChaCha8Rng) -> Rotor {
    exp_bivector(Bivector::new(
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
    ))
}

fn algebra_check(cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for i in 0..cases {
        // log inverts exp on the principal branch.
        let norm = rng.gen_range(1e-6..std::f64::consts::FRAC_PI_2 - 0.1);
        let dir = Bivector::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if dir.norm() < 1e-3 {
            continue;
        }
        let b = dir * (norm / dir.norm());
        let round = log_rotor(exp_bivector(b)) * -0.5;
        if (round - b).norm() > 1e-9 {
            return Err(format!("exp/log roundtrip off by {:.3e} (case {i})", (round - b).norm()));
        }
        // Rotating twice equals rotating by the composite.
        let (r1, r2) = (random_rotor(&mut rng), random_rotor(&mut rng));
        let v = Vector::new(
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        );
        let stepped = r2.rotate_vector(r1.rotate_vector(v));
        let composed = r2.compose(r1).rotate_vector(v);
        if (stepped - composed).norm() > 1e-12 * (1.0 + v.norm()) {
            return Err(format!("composition mismatch {:.3e} (case {i})", (stepped - composed).norm()));
        }
        if (stepped.norm() - v.norm()).abs() > 1e-12 * (1.0 + v.norm()) {
            return Err(format!("rotation changed a length (case {i})"));
        }
    }
    Ok(())
}

fn gain_check() -> Result<(), String> {
    use rotorsim_core::controller::{gain_is_hurwitz_with_margin, Gains};
    let gains = Gains::default_cascade();
    for (name, k) in [("position", gains.k1()), ("attitude", gains.k2())] {
        if !gain_is_hurwitz_with_margin(k, 1.0) {
            return Err(format!("{name} loop misses the eigenvalue margin"));
        }
    }
    Ok(())
}

fn bound_check(cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for i in 0..cases {
        let (r, r_d) = (random_rotor(&mut rng), random_rotor(&mut rng));
        let raw = Vector::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if raw.norm() < 1e-3 {
            continue;
        }
        let t_ref = raw * (1.0 / raw.norm());
        let t_d = r_d.rotate_vector(t_ref);
        let t = r.rotate_vector(t_ref);
        let j_theta = log_rotor(r.reverse().compose(r_d));
        if !rotation_error_bound(t_d, t, j_theta, t_ref) {
            return Err(format!("violated on case {i}"));
        }
    }
    Ok(())
}

fn integrator_check() -> Result<(), String> {
    // Free fall from rest has the closed form xi = g t^2 / 2 e3.
    let p = VehicleParams::flight_default();
    let mut st = RigidBodyState::at_rest();
    let ft = ForceTorque::default();
    let dt = 1e-3;
    for _ in 0..1000 {
        st = rigid_body::step(&p, &st, &ft, dt).map_err(|e| e.to_string())?;
    }
    let want = Vector::E3 * (0.5 * p.g);
    if (st.xi - want).norm() > 1e-9 {
        return Err(format!("ballistic drop off by {:.3e} m", (st.xi - want).norm()));
    }
    // A torque-free single-plane spin keeps its plane and rate.
    let spin = Bivector::new(3.0, 0.0, 0.0);
    let mut st = RigidBodyState { omega_b: spin, ..RigidBodyState::at_rest() };
    let hover = ForceTorque { f: p.hover_thrust(), ..ForceTorque::default() };
    for _ in 0..1000 {
        st = rigid_body::step(&p, &st, &hover, dt).map_err(|e| e.to_string())?;
    }
    if (st.omega_b - spin).norm() > 1e-8 {
        return Err("single-plane spin rate drifted".into());
    }
    let expect = exp_bivector(spin * (-0.5 * 1.0));
    let drift = (st.r.as_even() - expect.as_even()).norm().min(
        (st.r.as_even() + expect.as_even()).norm(),
    );
    if drift > 1e-8 {
        return Err(format!("fixed-plane rotor off by {drift:.3e}"));
    }
    Ok(())
}

fn determinism_check() -> Result<(), String> {
    let mut cfg = ScenarioConfig::flip();
    cfg.t_end = 0.5;
    let render = || -> Result<Vec<u8>, String> {
        let out = run_scenario(&cfg).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_telemetry(&out.rows, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    if render()? != render()? {
        return Err("identical configs produced different telemetry bytes".into());
    }
    Ok(())
}
