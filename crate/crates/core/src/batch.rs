//! Data-parallel batch kernels: bulk vector rotation (rotor sandwich or a
//! cached 3x3 matrix) and sweeps over independent scenario runs.
//!
//! Every kernel maps a pure function over independent items, so the parallel
//! and sequential paths produce bit-identical results; with the `parallel`
//! feature enabled the dispatching entry points fan out over rayon, otherwise
//! they fall back to a plain loop. The per-element sequential variants stay
//! available either way so benchmarks can compare both on one build.

use crate::ga3::{Rotor, Vector};
use crate::sim::{run_scenario, ScenarioConfig, SimError, SimOutput};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row-major 3x3 rotation matrix, the classical alternative to carrying the
/// rotor through every product. Caching one costs three sandwiches; applying
/// it is nine multiplies per vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    /// The matrix of `v -> r v r~`, built column-by-column from the images
    /// of the basis vectors so it inherits the rotor's sign conventions.
    pub fn from_rotor(r: Rotor) -> Self {
        let c1 = r.rotate_vector(Vector::E1);
        let c2 = r.rotate_vector(Vector::E2);
        let c3 = r.rotate_vector(Vector::E3);
        Self([
            [c1.x1, c2.x1, c3.x1],
            [c1.x2, c2.x2, c3.x2],
            [c1.x3, c2.x3, c3.x3],
        ])
    }

    pub fn mul_vec(&self, v: Vector) -> Vector {
        let m = &self.0;
        Vector::new(
            m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.x3,
            m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.x3,
            m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.x3,
        )
    }
}

/// Rotate every vector by the sandwich product, sequentially.
pub fn rotate_batch_seq(r: Rotor, vs: &[Vector]) -> Vec<Vector> {
    vs.iter().map(|&v| r.rotate_vector(v)).collect()
}

/// Rotate every vector by the sandwich product on the rayon pool.
#[cfg(feature = "parallel")]
pub fn rotate_batch_par(r: Rotor, vs: &[Vector]) -> Vec<Vector> {
    vs.par_iter().map(|&v| r.rotate_vector(v)).collect()
}

/// Rotate every vector by the sandwich product, parallel when available.
pub fn rotate_batch(r: Rotor, vs: &[Vector]) -> Vec<Vector> {
    #[cfg(feature = "parallel")]
    {
        rotate_batch_par(r, vs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        rotate_batch_seq(r, vs)
    }
}

/// Rotate every vector through a cached matrix, sequentially.
pub fn rotate_batch_matrix(m: &Mat3, vs: &[Vector]) -> Vec<Vector> {
    vs.iter().map(|&v| m.mul_vec(v)).collect()
}

/// Run every scenario to completion, one result per config, sequentially.
pub fn run_batch_seq(cfgs: &[ScenarioConfig]) -> Vec<Result<SimOutput, SimError>> {
    cfgs.iter().map(run_scenario).collect()
}

/// Run every scenario to completion, parallel when available. Each run owns
/// its state and RNG, so results are independent of scheduling.
pub fn run_batch(cfgs: &[ScenarioConfig]) -> Vec<Result<SimOutput, SimError>> {
    #[cfg(feature = "parallel")]
    {
        cfgs.par_iter().map(run_scenario).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_seq(cfgs)
    }
}

/// The same scenario under different noise seeds.
pub fn seed_sweep(base: &ScenarioConfig, seeds: &[u64]) -> Vec<Result<SimOutput, SimError>> {
    let cfgs: Vec<_> = seeds
        .iter()
        .map(|&seed| {
            let mut cfg = base.clone();
            cfg.disturbance.dryden.seed = seed;
            cfg
        })
        .collect();
    run_batch(&cfgs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga3::{exp_bivector, Bivector};
    use crate::sim::DisturbanceConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_inputs(n: usize) -> (Rotor, Vec<Vector>) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let plane = Bivector::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let r = exp_bivector(plane);
        let vs = (0..n)
            .map(|_| {
                Vector::new(
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                )
            })
            .collect();
        (r, vs)
    }

    #[test]
    fn matrix_path_matches_the_sandwich() {
        let (r, vs) = random_inputs(200);
        let m = Mat3::from_rotor(r);
        for v in vs {
            let err = (m.mul_vec(v) - r.rotate_vector(v)).norm();
            assert!(err < 1e-12, "paths disagree by {err}");
        }
    }

    #[test]
    fn matrix_preserves_lengths() {
        let (r, vs) = random_inputs(50);
        let m = Mat3::from_rotor(r);
        for v in vs {
            assert!((m.mul_vec(v).norm() - v.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn batch_paths_are_bit_identical() {
        let (r, vs) = random_inputs(1000);
        let seq = rotate_batch_seq(r, &vs);
        assert_eq!(rotate_batch(r, &vs), seq);
        #[cfg(feature = "parallel")]
        assert_eq!(rotate_batch_par(r, &vs), seq);
        for (got, &v) in seq.iter().zip(&vs) {
            assert_eq!(*got, r.rotate_vector(v));
        }
    }

    #[test]
    fn scenario_batches_match_individual_runs() {
        let mut quiet = ScenarioConfig::flip();
        quiet.disturbance = DisturbanceConfig::none();
        quiet.t_end = 0.05;
        let mut windy = ScenarioConfig::rhodonea();
        windy.t_end = 0.05;
        let cfgs = [quiet, windy];
        let batch = run_batch(&cfgs);
        let seq = run_batch_seq(&cfgs);
        for ((got, fallback), cfg) in batch.iter().zip(&seq).zip(&cfgs) {
            let direct = run_scenario(cfg).unwrap();
            assert_eq!(got.as_ref().unwrap(), &direct);
            assert_eq!(fallback.as_ref().unwrap(), &direct);
        }
    }

    #[test]
    fn seed_sweeps_vary_only_with_the_seed() {
        let mut base = ScenarioConfig::flip();
        base.t_end = 0.05;
        let runs = seed_sweep(&base, &[1, 2, 1]);
        let rows = |i: usize| &runs[i].as_ref().unwrap().rows;
        assert_eq!(rows(0), rows(2));
        assert_ne!(rows(0), rows(1));
        assert_eq!(rows(0).len(), rows(1).len());
    }
}
