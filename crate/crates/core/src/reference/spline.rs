//! Clamped quintic spline interpolation of sampled positions.
//!
//! The controller needs four continuous position derivatives, so cubic
//! splines (C^2) are not enough. Each interval carries the unique quintic
//! matching value, slope, and curvature at both ends; the slopes `m_i` and
//! curvatures `M_i` at the knots are chosen so the third and fourth
//! derivatives are also continuous, with `m = M = 0` clamped at both ends.
//! That yields one 2x2-block tridiagonal system per coordinate axis, solved
//! in O(n) by block elimination.

use crate::ga3::Vector;

/// Largest admissible knot spacing, s. Reference tables must resolve the
/// trajectory at 5 samples per second or better for the interpolated
/// derivatives to be trustworthy.
pub const MAX_KNOT_GAP: f64 = 0.2;

/// Errors from table construction and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplineError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample times must strictly increase: t[{index}] = {t} after {prev}")]
    NonMonotoneTime { index: usize, t: f64, prev: f64 },
    #[error("gap of {gap} s before sample {index} exceeds {MAX_KNOT_GAP} s")]
    TooSparse { index: usize, gap: f64 },
    #[error("t = {t} outside the table range [{t_min}, {t_max}]")]
    OutOfRange { t: f64, t_min: f64, t_max: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("spline system is singular near sample {index}")]
    SingularSystem { index: usize },
}

/// Quintic Hermite basis in monomial coefficients (powers 0..=5) on the unit
/// interval, for weights (y0, y1, h m0, h m1, h^2 M0, h^2 M1).
const BASIS: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, -10.0, 15.0, -6.0], // value at left end
    [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],  // value at right end
    [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],   // slope at left end
    [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],   // slope at right end
    [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],   // curvature at left end
    [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],    // curvature at right end
];

type Mat2 = [[f64; 2]; 2];
type Rhs2 = [[f64; 3]; 2];

fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn mat_mul_rhs(a: Mat2, b: Rhs2) -> Rhs2 {
    let mut out = [[0.0; 3]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn mat_sub(a: Mat2, b: Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

fn rhs_sub(a: Rhs2, b: Rhs2) -> Rhs2 {
    let mut out = a;
    for r in 0..2 {
        for c in 0..3 {
            out[r][c] -= b[r][c];
        }
    }
    out
}

fn mat_inv(a: Mat2) -> Option<Mat2> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let scale = a[0][0].abs() + a[0][1].abs() + a[1][0].abs() + a[1][1].abs();
    if det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    Some([
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ])
}

/// A time-indexed C^4 position table evaluated as position through the
/// fourth derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineTable {
    ts: Vec<f64>,
    /// Per interval, per coordinate: monomial coefficients on the unit
    /// interval.
    coeffs: Vec<[[f64; 6]; 3]>,
}

impl SplineTable {
    /// Build from knot times and positions. Times must strictly increase
    /// with gaps of at most [`MAX_KNOT_GAP`].
    pub fn new(ts: Vec<f64>, points: Vec<Vector>) -> Result<Self, SplineError> {
        let n = ts.len();
        if n != points.len() || n < 2 {
            return Err(SplineError::TooFewSamples(n.min(points.len())));
        }
        for i in 1..n {
            let gap = ts[i] - ts[i - 1];
            if gap <= 0.0 {
                return Err(SplineError::NonMonotoneTime { index: i, t: ts[i], prev: ts[i - 1] });
            }
            if gap > MAX_KNOT_GAP {
                return Err(SplineError::TooSparse { index: i, gap });
            }
        }

        let derivs = solve_knot_derivatives(&ts, &points)?;

        let mut coeffs = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let h = ts[i + 1] - ts[i];
            let y0 = points[i].coords();
            let y1 = points[i + 1].coords();
            let (m0, cap0) = derivs[i];
            let (m1, cap1) = derivs[i + 1];
            let mut interval = [[0.0; 6]; 3];
            for axis in 0..3 {
                let w = [
                    y0[axis],
                    y1[axis],
                    h * m0[axis],
                    h * m1[axis],
                    h * h * cap0[axis],
                    h * h * cap1[axis],
                ];
                for (power, cell) in interval[axis].iter_mut().enumerate() {
                    *cell = (0..6).map(|b| w[b] * BASIS[b][power]).sum();
                }
            }
            coeffs.push(interval);
        }
        Ok(Self { ts, coeffs })
    }

    /// Parse a `t,x,y,z` CSV (header required, SI units) into a table.
    pub fn from_csv_str(text: &str) -> Result<Self, SplineError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or(SplineError::Parse { line: 1, message: "empty file".into() })?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["t", "x", "y", "z"] {
            return Err(SplineError::Parse {
                line: 1,
                message: format!("expected header t,x,y,z, got {header:?}"),
            });
        }
        let mut ts = Vec::new();
        let mut points = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(SplineError::Parse {
                    line: idx + 1,
                    message: format!("expected 4 fields, got {}", fields.len()),
                });
            }
            let mut vals = [0.0; 4];
            for (v, field) in vals.iter_mut().zip(&fields) {
                *v = field.parse().map_err(|e| SplineError::Parse {
                    line: idx + 1,
                    message: format!("bad number {field:?}: {e}"),
                })?;
            }
            ts.push(vals[0]);
            points.push(Vector::new(vals[1], vals[2], vals[3]));
        }
        Self::new(ts, points)
    }

    pub fn t_min(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.ts.last().expect("nonempty by construction")
    }

    /// Position and four time derivatives at `t`. Extrapolation is refused.
    pub fn eval(&self, t: f64) -> Result<[Vector; 5], SplineError> {
        if !(t >= self.t_min() && t <= self.t_max()) {
            return Err(SplineError::OutOfRange {
                t,
                t_min: self.t_min(),
                t_max: self.t_max(),
            });
        }
        // Last interval owns its right endpoint.
        let i = self.ts.partition_point(|&knot| knot <= t).clamp(1, self.ts.len() - 1) - 1;
        let h = self.ts[i + 1] - self.ts[i];
        let x = (t - self.ts[i]) / h;

        let mut out = [Vector::ZERO; 5];
        for axis in 0..3 {
            let c = &self.coeffs[i][axis];
            let mut scale = 1.0;
            for (order, slot) in out.iter_mut().enumerate() {
                // Horner evaluation of the order-th derivative of the
                // monomial form, including the falling-factorial weights.
                let mut acc = 0.0;
                for p in (order..6).rev() {
                    let fall: f64 = (p - order + 1..=p).map(|k| k as f64).product();
                    acc = acc * x + c[p] * fall;
                }
                let v = acc / scale;
                match axis {
                    0 => slot.x1 = v,
                    1 => slot.x2 = v,
                    _ => slot.x3 = v,
                }
                scale *= h;
            }
        }
        Ok(out)
    }
}

/// Solve for (slope, curvature) at each knot: clamped ends, C^3 and C^4
/// continuity inside. One block-tridiagonal solve shared by all three axes.
#[allow(clippy::type_complexity)]
fn solve_knot_derivatives(
    ts: &[f64],
    points: &[Vector],
) -> Result<Vec<([f64; 3], [f64; 3])>, SplineError> {
    let n = ts.len();
    let mut sub = vec![[[0.0; 2]; 2]; n];
    let mut diag = vec![[[0.0; 2]; 2]; n];
    let mut sup = vec![[[0.0; 2]; 2]; n];
    let mut rhs = vec![[[0.0; 3]; 2]; n];

    // Clamped ends: m = 0, M = 0.
    diag[0] = [[1.0, 0.0], [0.0, 1.0]];
    diag[n - 1] = [[1.0, 0.0], [0.0, 1.0]];

    for i in 1..n - 1 {
        let hl = ts[i] - ts[i - 1];
        let hr = ts[i + 1] - ts[i];
        let s3 = hl.min(hr).powi(3);
        let s4 = hl.min(hr).powi(4);
        let (yl, yc, yr) = (points[i - 1].coords(), points[i].coords(), points[i + 1].coords());

        // Third-derivative match, scaled by s3 for conditioning.
        sub[i][0] = [-24.0 * s3 / (hl * hl), -3.0 * s3 / hl];
        diag[i][0] = [
            -36.0 * s3 / (hl * hl) + 36.0 * s3 / (hr * hr),
            9.0 * s3 / hl + 9.0 * s3 / hr,
        ];
        sup[i][0] = [24.0 * s3 / (hr * hr), -3.0 * s3 / hr];

        // Fourth-derivative match, scaled by s4.
        sub[i][1] = [-168.0 * s4 / hl.powi(3), -24.0 * s4 / (hl * hl)];
        diag[i][1] = [
            -192.0 * s4 / hl.powi(3) - 192.0 * s4 / hr.powi(3),
            36.0 * s4 / (hl * hl) - 36.0 * s4 / (hr * hr),
        ];
        sup[i][1] = [-168.0 * s4 / hr.powi(3), 24.0 * s4 / (hr * hr)];

        for axis in 0..3 {
            rhs[i][0][axis] = 60.0 * s3
                * ((yl[axis] - yc[axis]) / hl.powi(3) + (yr[axis] - yc[axis]) / hr.powi(3));
            rhs[i][1][axis] = 360.0 * s4
                * ((yl[axis] - yc[axis]) / hl.powi(4) + (yc[axis] - yr[axis]) / hr.powi(4));
        }
    }

    // Block Thomas elimination.
    let mut c_tilde = vec![[[0.0; 2]; 2]; n];
    let mut d_tilde = vec![[[0.0; 3]; 2]; n];
    for i in 0..n {
        let (b_eff, d_eff) = if i == 0 {
            (diag[0], rhs[0])
        } else {
            (
                mat_sub(diag[i], mat_mul(sub[i], c_tilde[i - 1])),
                rhs_sub(rhs[i], mat_mul_rhs(sub[i], d_tilde[i - 1])),
            )
        };
        let w = mat_inv(b_eff).ok_or(SplineError::SingularSystem { index: i })?;
        c_tilde[i] = mat_mul(w, sup[i]);
        d_tilde[i] = mat_mul_rhs(w, d_eff);
    }
    let mut out = vec![([0.0; 3], [0.0; 3]); n];
    let mut next = [[0.0; 3]; 2];
    for i in (0..n).rev() {
        let u = if i == n - 1 {
            d_tilde[i]
        } else {
            rhs_sub(d_tilde[i], mat_mul_rhs(c_tilde[i], next))
        };
        out[i] = (u[0], u[1]);
        next = u;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A smooth function whose slope and curvature vanish at both ends of
    /// [0, period], so the clamped boundary conditions are exact and the
    /// spline converges at full order.
    fn clamped_friendly(t: f64) -> [f64; 5] {
        let w = 1.0;
        let (s, c) = (w * t).sin_cos();
        let f = (1.0 - c) * (1.0 - c);
        let d1 = 2.0 * (1.0 - c) * w * s;
        let d2 = 2.0 * w * w * (s * s + (1.0 - c) * c);
        let d3 = 2.0 * w.powi(3) * (3.0 * s * c - (1.0 - c) * s);
        let d4 = 2.0 * w.powi(4) * (4.0 * c * c - 4.0 * s * s - c);
        [f, d1, d2, d3, d4]
    }

    fn build(n: usize) -> SplineTable {
        let period = 2.0 * std::f64::consts::PI;
        let ts: Vec<f64> = (0..n).map(|i| period * i as f64 / (n - 1) as f64).collect();
        let pts: Vec<Vector> = ts
            .iter()
            .map(|&t| {
                let f = clamped_friendly(t)[0];
                Vector::new(f, 2.0 * f, -0.5 * f)
            })
            .collect();
        SplineTable::new(ts, pts).unwrap()
    }

    #[test]
    fn interpolates_knots_exactly() {
        let ts: Vec<f64> = (0..30).map(|i| 0.13 * i as f64).collect();
        let pts: Vec<Vector> = ts
            .iter()
            .map(|&t| Vector::new(t.sin(), (2.0 * t).cos(), t * t))
            .collect();
        let table = SplineTable::new(ts.clone(), pts.clone()).unwrap();
        for (t, p) in ts.iter().zip(&pts) {
            let [v, ..] = table.eval(*t).unwrap();
            assert!((v - *p).norm() < 1e-10, "knot at t = {t}");
        }
    }

    #[test]
    fn derivatives_are_continuous_across_knots() {
        let table = build(200);
        for &knot in &table.ts[1..table.ts.len() - 1] {
            let eps = 1e-9;
            let left = table.eval(knot - eps).unwrap();
            let right = table.eval(knot + eps).unwrap();
            for order in 0..5 {
                let jump = (left[order] - right[order]).norm();
                let scale = left[order].norm().max(1.0);
                assert!(
                    jump / scale < 1e-5,
                    "order-{order} jump {jump:.3e} at knot {knot}"
                );
            }
        }
    }

    #[test]
    fn converges_to_the_sampled_function() {
        let table = build(400);
        let period = 2.0 * std::f64::consts::PI;
        let mut worst = [0.0f64; 5];
        for k in 0..500 {
            let t = period * (k as f64 + 0.5) / 500.0;
            let truth = clamped_friendly(t);
            let got = table.eval(t).unwrap();
            for order in 0..5 {
                let err = (got[order].x1 - truth[order]).abs();
                worst[order] = worst[order].max(err);
            }
        }
        // h ~ 0.016: plenty of headroom at these gates.
        assert!(worst[0] < 1e-9, "value error {:.3e}", worst[0]);
        assert!(worst[1] < 1e-7, "slope error {:.3e}", worst[1]);
        assert!(worst[2] < 1e-5, "curvature error {:.3e}", worst[2]);
        assert!(worst[3] < 1e-3, "3rd-derivative error {:.3e}", worst[3]);
        assert!(worst[4] < 1e-1, "4th-derivative error {:.3e}", worst[4]);
    }

    #[test]
    fn halving_the_gap_improves_the_fit() {
        let coarse = build(100);
        let fine = build(200);
        let probe = 2.5;
        let truth = clamped_friendly(probe);
        let ec = (coarse.eval(probe).unwrap()[2].x1 - truth[2]).abs();
        let ef = (fine.eval(probe).unwrap()[2].x1 - truth[2]).abs();
        assert!(ec / ef > 8.0, "convergence ratio {}", ec / ef);
    }

    #[test]
    fn rejects_bad_tables() {
        let ok = vec![Vector::ZERO; 2];
        assert!(matches!(
            SplineTable::new(vec![0.0], vec![Vector::ZERO]),
            Err(SplineError::TooFewSamples(1))
        ));
        assert!(matches!(
            SplineTable::new(vec![0.0, 0.0], ok.clone()),
            Err(SplineError::NonMonotoneTime { index: 1, .. })
        ));
        assert!(matches!(
            SplineTable::new(vec![0.0, 0.5], ok),
            Err(SplineError::TooSparse { index: 1, .. })
        ));
    }

    #[test]
    fn refuses_extrapolation() {
        let table = build(50);
        assert!(matches!(
            table.eval(-0.1),
            Err(SplineError::OutOfRange { .. })
        ));
        assert!(matches!(
            table.eval(table.t_max() + 0.1),
            Err(SplineError::OutOfRange { .. })
        ));
        assert!(table.eval(table.t_max()).is_ok());
        assert!(table.eval(table.t_min()).is_ok());
    }

    #[test]
    fn parses_csv_and_reports_errors() {
        let good = "t,x,y,z\n0.0,1.0,2.0,3.0\n0.1,1.1,2.1,3.1\n0.2,1.2,2.2,3.2\n";
        let table = SplineTable::from_csv_str(good).unwrap();
        let [p, ..] = table.eval(0.1).unwrap();
        assert!((p - Vector::new(1.1, 2.1, 3.1)).norm() < 1e-12);

        assert!(matches!(
            SplineTable::from_csv_str("time,x,y,z\n0,0,0,0\n"),
            Err(SplineError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SplineTable::from_csv_str("t,x,y,z\n0.0,1.0,2.0\n"),
            Err(SplineError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            SplineTable::from_csv_str("t,x,y,z\n0.0,one,2.0,3.0\n"),
            Err(SplineError::Parse { line: 2, .. })
        ));
    }
}
