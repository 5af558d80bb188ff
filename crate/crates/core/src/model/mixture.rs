//! Pointwise constitutive operations shared by both model variants.

use crate::error::{Error, Result};
use crate::model::viscosity::ViscosityMatrices;

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// `v = (1/N) Σ u_i`.
pub fn average_velocity(u: &[f64]) -> f64 {
    compensated_sum(u.iter().copied()) / u.len() as f64
}

/// `rho = Σ rho_i`.
pub fn total_density(rho: &[f64]) -> f64 {
    compensated_sum(rho.iter().copied())
}

/// Concentrations `alpha_i = rho_i / rho`.
pub fn concentrations(rho: &[f64]) -> Result<Vec<f64>> {
    let total = total_density(rho);
    if !(total > 0.0) {
        return Err(Error::DegenerateState(format!(
            "concentrations need a positive total density, got {total}"
        )));
    }
    Ok(rho.iter().map(|r| r / total).collect())
}

/// One-dimensional viscous stresses `S_i = Σ_k nu_ik (du/dx)_k`.
pub fn viscous_flux_1d(dudx: &[f64], visc: &ViscosityMatrices) -> Vec<f64> {
    let n = visc.n();
    debug_assert_eq!(dudx.len(), n);
    (0..n)
        .map(|i| (0..n).map(|k| visc.nu_at(i, k) * dudx[k]).sum())
        .collect()
}

/// Quadratic form `Σ_ij nu_ij g_j g_i`.
pub fn dissipation_density(dudx: &[f64], visc: &ViscosityMatrices) -> f64 {
    viscous_flux_1d(dudx, visc)
        .iter()
        .zip(dudx)
        .map(|(s, g)| s * g)
        .sum()
}
