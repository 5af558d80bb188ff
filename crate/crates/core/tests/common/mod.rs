#![allow(dead_code)]

use std::sync::Arc;

use multiflow_core::model::{BodyForce, ExchangeMatrix, Polytropic, PressureLaw};
use multiflow_core::{
    BoundaryCondition, Grid1D, MixtureParams, ModelVariant, Solver, SolverConfig,
    ViscosityMatrices,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn polytropic(k: f64, gamma: f64) -> Arc<dyn PressureLaw> {
    Arc::new(Polytropic::new(k, gamma).unwrap())
}

pub fn periodic(length: f64, n: usize) -> Grid1D {
    Grid1D::new(length, n, BoundaryCondition::Periodic).unwrap()
}

/// Full admissible pair: sym(mu) has eigenvalues in `[lo, hi)`, mu carries a
/// skew part, and `H = lambda + 2/3 mu` is `B Bᵀ`.
pub fn random_full_viscosity(seed: u64, n: usize, lo: f64, hi: f64) -> ViscosityMatrices {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let q = a.qr().q();
    let d = DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| rng.random_range(lo..hi)));
    let skew = DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.05..0.05));
    let mu = &q * d * q.transpose() + &skew - skew.transpose();
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.2..0.2));
    let lam = -&mu * (2.0 / 3.0) + &b * b.transpose();
    ViscosityMatrices::new(mu, lam).unwrap()
}

pub fn random_symmetric_exchange(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ExchangeMatrix {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(0.0..scale);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    ExchangeMatrix::new(a).unwrap()
}

pub fn solver(
    variant: ModelVariant,
    visc: ViscosityMatrices,
    laws: Vec<Arc<dyn PressureLaw>>,
    exchange: Option<ExchangeMatrix>,
    grid: Grid1D,
    config: SolverConfig,
) -> Solver {
    let params = MixtureParams::new(variant.model(), visc, laws, exchange, BodyForce::zero()).unwrap();
    Solver::new(params, grid, config).unwrap()
}

pub fn sample(x: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    x.iter().map(|&x| f(x)).collect()
}
