//! State-feedback gain matrices and their stability validation.
//!
//! Both control loops are double integrators in error coordinates:
//! `x' = A x + B u` with `A = [[0, I], [0, 0]]`, `B = [[0], [I]]` (6x6 and
//! 6x3). A gain `K` (3x6) closes the loop as `A - B K`; construction refuses
//! gains for which that matrix is not Hurwitz. The check computes the
//! characteristic polynomial by the Faddeev-LeVerrier recursion and applies
//! the Routh-Hurwitz criterion, so no eigenvalue solver is needed.

use crate::ga3::{Bivector, Vector};

/// A 3x6 feedback matrix acting on stacked `[position-like; velocity-like]`
/// error triples.
pub type GainMatrix = [[f64; 6]; 3];

/// Validated gain pair for the translational and rotational loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains {
    k1: GainMatrix,
    k2: GainMatrix,
}

/// Why a gain matrix was rejected.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GainError {
    #[error("{which} gain does not stabilize its double-integrator loop")]
    NotHurwitz { which: &'static str },
    #[error("{which} gain contains non-finite entries")]
    NonFinite { which: &'static str },
}

impl Gains {
    /// Validate and freeze a gain pair.
    pub fn new(k1: GainMatrix, k2: GainMatrix) -> Result<Self, GainError> {
        for (which, k) in [("translational", &k1), ("rotational", &k2)] {
            if k.iter().flatten().any(|v| !v.is_finite()) {
                return Err(GainError::NonFinite { which });
            }
            if !gain_is_hurwitz_with_margin(k, 0.0) {
                return Err(GainError::NotHurwitz { which });
            }
        }
        Ok(Self { k1, k2 })
    }

    /// Block-diagonal defaults: translational poles at {-1.5, -2.5} per axis,
    /// rotational poles at {-8, -12} per plane — the rotational loop roughly
    /// five times faster, the usual cascade separation.
    pub fn default_cascade() -> Self {
        Self::new(
            block_diagonal(1.5 * 2.5, 1.5 + 2.5),
            block_diagonal(8.0 * 12.0, 8.0 + 12.0),
        )
        .expect("default gains are Hurwitz by construction")
    }

    pub fn k1(&self) -> &GainMatrix {
        &self.k1
    }

    pub fn k2(&self) -> &GainMatrix {
        &self.k2
    }
}

/// `K = [ka I | kb I]`, which places each axis's poles at the roots of
/// `s^2 + kb s + ka`.
pub fn block_diagonal(ka: f64, kb: f64) -> GainMatrix {
    let mut k = [[0.0; 6]; 3];
    for axis in 0..3 {
        k[axis][axis] = ka;
        k[axis][axis + 3] = kb;
    }
    k
}

/// `K x` for a stacked pair of error triples; returns the 3-vector result.
pub fn apply_gain(k: &GainMatrix, first: Vector, second: Vector) -> Vector {
    let x = [first.x1, first.x2, first.x3, second.x1, second.x2, second.x3];
    let mut out = [0.0; 3];
    for (row, slot) in k.iter().zip(out.iter_mut()) {
        *slot = row.iter().zip(&x).map(|(a, b)| a * b).sum();
    }
    Vector::new(out[0], out[1], out[2])
}

/// `K x` for a stacked pair of error bivectors, componentwise in the
/// (b12, b23, b31) basis; returns the bivector result.
pub fn apply_gain_planes(k: &GainMatrix, first: Bivector, second: Bivector) -> Bivector {
    let x = [first.b12, first.b23, first.b31, second.b12, second.b23, second.b31];
    let mut out = [0.0; 3];
    for (row, slot) in k.iter().zip(out.iter_mut()) {
        *slot = row.iter().zip(&x).map(|(a, b)| a * b).sum();
    }
    Bivector::new(out[0], out[1], out[2])
}

/// Largest singular-value upper bound (Frobenius norm) of a gain matrix,
/// used by the interconnection-bound diagnostics.
pub fn gain_norm_bound(k: &GainMatrix) -> f64 {
    k.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// True iff every eigenvalue of the closed loop `A - B K` has real part
/// strictly below `-margin`.
pub fn gain_is_hurwitz_with_margin(k: &GainMatrix, margin: f64) -> bool {
    let mut a = closed_loop_matrix(k);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += margin;
    }
    matrix_is_hurwitz(&a)
}

/// `A - B K` for the double-integrator loop: `[[0, I], [-Ka, -Kb]]`.
fn closed_loop_matrix(k: &GainMatrix) -> [[f64; 6]; 6] {
    let mut a = [[0.0; 6]; 6];
    for i in 0..3 {
        a[i][i + 3] = 1.0;
        for j in 0..6 {
            a[i + 3][j] = -k[i][j];
        }
    }
    a
}

/// Monic characteristic polynomial coefficients `[1, c1, ..., c6]` of a 6x6
/// matrix by the Faddeev-LeVerrier recursion (trace form).
fn characteristic_polynomial(a: &[[f64; 6]; 6]) -> [f64; 7] {
    let mut coeffs = [0.0; 7];
    coeffs[0] = 1.0;
    let mut m = [[0.0; 6]; 6]; // M_0 = 0
    for k in 1..=6 {
        // M_k = A (M_{k-1} + c_{k-1} I)
        let mut shifted = m;
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += coeffs[k - 1];
        }
        let mut next = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                next[i][j] = (0..6).map(|l| a[i][l] * shifted[l][j]).sum();
            }
        }
        let trace: f64 = (0..6).map(|i| next[i][i]).sum();
        coeffs[k] = -trace / k as f64;
        m = next;
    }
    coeffs
}

/// Routh-Hurwitz test on a monic polynomial: all roots in the open left half
/// plane iff every first-column entry of the Routh array is positive. Zero
/// pivots (boundary cases) are treated as failures, which is the safe answer
/// for a stability gate.
fn polynomial_is_hurwitz(coeffs: &[f64]) -> bool {
    let n = coeffs.len() - 1;
    if n == 0 {
        return true;
    }
    // Necessary condition: all coefficients strictly positive.
    if coeffs.iter().any(|&c| c <= 0.0 || !c.is_finite()) {
        return false;
    }
    let width = n / 2 + 1;
    let mut prev: Vec<f64> = (0..width).map(|i| coeffs.get(2 * i).copied().unwrap_or(0.0)).collect();
    let mut curr: Vec<f64> =
        (0..width).map(|i| coeffs.get(2 * i + 1).copied().unwrap_or(0.0)).collect();
    for _ in 2..=n {
        if curr[0].abs() < 1e-30 {
            return false;
        }
        let mut next = vec![0.0; width];
        for i in 0..width - 1 {
            next[i] = (curr[0] * prev[i + 1] - prev[0] * curr[i + 1]) / curr[0];
        }
        if next[0] <= 0.0 || !next[0].is_finite() {
            return false;
        }
        prev = curr;
        curr = next;
    }
    true
}

fn matrix_is_hurwitz(a: &[[f64; 6]; 6]) -> bool {
    polynomial_is_hurwitz(&characteristic_polynomial(a))
}
