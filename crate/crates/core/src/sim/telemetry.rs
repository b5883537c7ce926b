//! Telemetry rows, aggregate run metrics, and plot-ready data files.
//!
//! Every floating-point value is serialized with 17 significant decimal
//! digits (`{:.16e}`), which round-trips `f64` exactly, so re-running a
//! configuration can be checked for determinism by comparing bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::ga3::{Bivector, Rotor, Vector};

/// One record per plant step: state, command, reference, errors, and
/// environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelemetryRow {
    /// Time, s.
    pub t: f64,
    /// Position, m.
    pub xi: Vector,
    /// Velocity, m/s.
    pub dxi: Vector,
    /// Attitude rotor.
    pub r: Rotor,
    /// Body angular velocity, rad/s.
    pub omega_b: Bivector,
    /// Commanded thrust, N.
    pub f: f64,
    /// Commanded torque, N m.
    pub tau: Bivector,
    /// Reference position, m.
    pub xi_d: Vector,
    /// Desired attitude rotor.
    pub r_d: Rotor,
    /// Position error norm, m.
    pub pos_err: f64,
    /// Attitude error angle norm, rad.
    pub att_err: f64,
    /// Wind velocity, m/s, inertial frame.
    pub wind_i: Vector,
    /// Roll, pitch, yaw, rad.
    pub euler: (f64, f64, f64),
    /// Scheduled body thrust axis at this instant (unit).
    pub t_axis: Vector,
}

/// Column names of [`TelemetryRow::values`], in order.
pub const TELEMETRY_HEADER: &str = "t,xi1,xi2,xi3,dxi1,dxi2,dxi3,rs,rb12,rb23,rb31,\
                                    om12,om23,om31,f,tau12,tau23,tau31,xid1,xid2,xid3,\
                                    rds,rdb12,rdb23,rdb31,pos_err,att_err,\
                                    wind1,wind2,wind3,roll,pitch,yaw,axis1,axis2,axis3";

impl TelemetryRow {
    /// All columns as one flat array, ordered per [`TELEMETRY_HEADER`].
    pub fn values(&self) -> [f64; 36] {
        let r = self.r.as_even();
        let rd = self.r_d.as_even();
        let rb = r.bivector_part();
        let rdb = rd.bivector_part();
        [
            self.t,
            self.xi.x1,
            self.xi.x2,
            self.xi.x3,
            self.dxi.x1,
            self.dxi.x2,
            self.dxi.x3,
            r.scalar_part(),
            rb.b12,
            rb.b23,
            rb.b31,
            self.omega_b.b12,
            self.omega_b.b23,
            self.omega_b.b31,
            self.f,
            self.tau.b12,
            self.tau.b23,
            self.tau.b31,
            self.xi_d.x1,
            self.xi_d.x2,
            self.xi_d.x3,
            rd.scalar_part(),
            rdb.b12,
            rdb.b23,
            rdb.b31,
            self.pos_err,
            self.att_err,
            self.wind_i.x1,
            self.wind_i.x2,
            self.wind_i.x3,
            self.euler.0,
            self.euler.1,
            self.euler.2,
            self.t_axis.x1,
            self.t_axis.x2,
            self.t_axis.x3,
        ]
    }

    /// True when every column is finite.
    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

fn write_csv_line(w: &mut impl Write, values: &[f64]) -> io::Result<()> {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            w.write_all(b",")?;
        }
        write!(w, "{v:.16e}")?;
    }
    w.write_all(b"\n")
}

/// Serialize the full telemetry table as CSV.
pub fn write_telemetry(rows: &[TelemetryRow], w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{TELEMETRY_HEADER}")?;
    for row in rows {
        write_csv_line(w, &row.values())?;
    }
    Ok(())
}

/// Aggregate run statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// RMS position error over the second half of the run, m.
    pub rms_pos_err_late: f64,
    /// Max position error over the second half of the run, m.
    pub max_pos_err_late: f64,
    /// Max attitude error over the whole run, rad.
    pub max_att_err: f64,
    /// Time after which the position error stays within 5% of its total
    /// swing around the final value, s.
    pub settle_pos: f64,
    /// Same for the attitude error, s.
    pub settle_att: f64,
    /// Largest commanded thrust, N.
    pub peak_thrust: f64,
    /// Largest commanded torque norm, N m.
    pub peak_torque: f64,
    /// Steps where the thrust-direction error bound failed; must be 0 on an
    /// accepted run.
    pub bound_violations: usize,
}

/// Error for metrics over an empty table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("metrics need at least one telemetry row")]
pub struct EmptyTelemetry;

/// Settling time against a 5% band: the earliest time from which
/// `|e(t) - e_final|` never again exceeds 5% of the series' maximum
/// excursion from its final value. A constant series settles at the first
/// sample.
fn settling_time(ts: &[f64], errs: &[f64]) -> f64 {
    let e_final = *errs.last().expect("nonempty");
    let swing = errs.iter().fold(0.0_f64, |acc, e| acc.max((e - e_final).abs()));
    let band = 0.05 * swing;
    let mut settled_from = 0;
    for (i, e) in errs.iter().enumerate() {
        if (e - e_final).abs() > band {
            settled_from = i + 1;
        }
    }
    ts[settled_from.min(ts.len() - 1)]
}

/// Aggregate statistics of one telemetry table. The "late" statistics cover
/// `t in [t_end/2, t_end]`. `bound_violations` is owned by the run loop and
/// left at 0 here.
pub fn metrics(rows: &[TelemetryRow]) -> Result<Metrics, EmptyTelemetry> {
    if rows.is_empty() {
        return Err(EmptyTelemetry);
    }
    let t_end = rows.last().expect("nonempty").t;
    let late: Vec<&TelemetryRow> = rows.iter().filter(|r| r.t >= 0.5 * t_end).collect();
    let rms_pos_err_late =
        (late.iter().map(|r| r.pos_err * r.pos_err).sum::<f64>() / late.len() as f64).sqrt();
    let max_pos_err_late = late.iter().fold(0.0_f64, |acc, r| acc.max(r.pos_err));
    let max_att_err = rows.iter().fold(0.0_f64, |acc, r| acc.max(r.att_err));
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let pos: Vec<f64> = rows.iter().map(|r| r.pos_err).collect();
    let att: Vec<f64> = rows.iter().map(|r| r.att_err).collect();
    Ok(Metrics {
        rms_pos_err_late,
        max_pos_err_late,
        max_att_err,
        settle_pos: settling_time(&ts, &pos),
        settle_att: settling_time(&ts, &att),
        peak_thrust: rows.iter().fold(0.0_f64, |acc, r| acc.max(r.f)),
        peak_torque: rows.iter().fold(0.0_f64, |acc, r| acc.max(r.tau.norm())),
        bound_violations: 0,
    })
}

/// A failed plot/telemetry write, with the path that failed.
#[derive(Debug, thiserror::Error)]
#[error("writing {path}: {source}")]
pub struct PlotError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

fn emit_file(
    dir: &Path,
    name: &str,
    header: &str,
    rows: &[TelemetryRow],
    mut pick: impl FnMut(&TelemetryRow) -> Vec<f64>,
) -> Result<(), PlotError> {
    let path = dir.join(name);
    let fail = |source: io::Error, path: &Path| PlotError { path: path.to_owned(), source };
    let file = File::create(&path).map_err(|e| fail(e, &path))?;
    let mut w = BufWriter::new(file);
    (|| {
        writeln!(w, "{header}")?;
        for row in rows {
            write_csv_line(&mut w, &pick(row))?;
        }
        w.flush()
    })()
    .map_err(|e| fail(e, &path))
}

/// Write the six figure-style data files (position vs reference, velocity,
/// Euler angles, thrust with the scheduled axis, torque, 3D path) into
/// `dir`. One data row per telemetry row, deterministic bytes.
pub fn emit_plots(rows: &[TelemetryRow], dir: &Path) -> Result<(), PlotError> {
    std::fs::create_dir_all(dir).map_err(|e| PlotError { path: dir.to_owned(), source: e })?;
    emit_file(dir, "position.csv", "t,x,y,z,xd,yd,zd", rows, |r| {
        vec![r.t, r.xi.x1, r.xi.x2, r.xi.x3, r.xi_d.x1, r.xi_d.x2, r.xi_d.x3]
    })?;
    emit_file(dir, "velocity.csv", "t,vx,vy,vz", rows, |r| {
        vec![r.t, r.dxi.x1, r.dxi.x2, r.dxi.x3]
    })?;
    emit_file(dir, "euler.csv", "t,roll,pitch,yaw", rows, |r| {
        vec![r.t, r.euler.0, r.euler.1, r.euler.2]
    })?;
    emit_file(dir, "thrust.csv", "t,f,ax1,ax2,ax3", rows, |r| {
        vec![r.t, r.f, r.t_axis.x1, r.t_axis.x2, r.t_axis.x3]
    })?;
    emit_file(dir, "torque.csv", "t,tau12,tau23,tau31", rows, |r| {
        vec![r.t, r.tau.b12, r.tau.b23, r.tau.b31]
    })?;
    emit_file(dir, "path3d.csv", "x,y,z,xd,yd,zd", rows, |r| {
        vec![r.xi.x1, r.xi.x2, r.xi.x3, r.xi_d.x1, r.xi_d.x2, r.xi_d.x3]
    })
}
