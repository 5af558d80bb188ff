//! Commutator, divergence and renormalisation identities on the torus.

use multiflow_core::model::ViscosityMatrices;
use multiflow_core::{Error, Result};

use crate::field::{PeriodicField2D, SymTensor2D, VectorField2D};
use crate::spectral::SpectralOps;

/// `|<(R a)_c, b> - <a, (R b)_c>|` for the components `xx, xy, yy`.
pub fn check_selfadjoint(ops: &SpectralOps, a: &PeriodicField2D, b: &PeriodicField2D) -> [f64; 3] {
    let (ra, rb) = (ops.riesz_second(a), ops.riesz_second(b));
    let (ca, cb) = (ra.components(), rb.components());
    [0, 1, 2].map(|c| (ca[c].inner(b) - a.inner(cb[c])).abs())
}

/// `Comm(a, b) = (R a) b - a (R b)`.
pub fn comm(ops: &SpectralOps, a: &PeriodicField2D, b: &PeriodicField2D) -> SymTensor2D {
    let (ra, rb) = (ops.riesz_second(a), ops.riesz_second(b));
    ra.zip_with(&rb, |x, y| &(x * b) - &(a * y))
}

/// Vector form `Comm(U, b) = b Q(U) - (R b) U` with `Q = ∇Δ⁻¹div`.
pub fn comm_vector(ops: &SpectralOps, u: &VectorField2D, b: &PeriodicField2D) -> VectorField2D {
    let qu = ops.q_operator(u).scaled_by(b);
    let rbu = ops.riesz_second(b).apply(u);
    VectorField2D::new(&qu.x - &rbu.x, &qu.y - &rbu.y)
}

/// Residual of
/// `∫ S:∇⊗[(Δ⁻¹ρ)∇τ] + S:∇⊗[τ∇Δ⁻¹ρ] - (div div S) τ Δ⁻¹ρ = 0`,
/// with every term evaluated on its own.
pub fn div_identity_residual(
    ops: &SpectralOps,
    s: &SymTensor2D,
    rho: &PeriodicField2D,
    tau: &PeriodicField2D,
) -> f64 {
    let phi = ops.inv_laplacian(rho);
    let first = ops.sym_gradient(&ops.gradient(tau).scaled_by(&phi));
    let second = ops.sym_gradient(&ops.gradient(&phi).scaled_by(tau));
    let t1 = s.contract(&first).integral();
    let t2 = s.contract(&second).integral();
    let t3 = (&ops.div_div(s) * &(tau * &phi)).integral();
    (t1 + t2 - t3).abs()
}

/// Steady and unsteady forms of the commutator expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommExpansion {
    /// `∫ w·Comm(rho_i u, rho_j) - [∫ rho_i u·Q(rho_j w) - ∫ (rho_i w ⊗ u):(R rho_j)]`
    pub steady: f64,
    /// `∫ w·Comm(rho_i u, rho_j) - [∫ rho_j w·Q(rho_i u) - ∫ (rho_i w ⊗ u):(R rho_j)]`
    pub unsteady: f64,
}

pub fn comm_expansion_residual(
    ops: &SpectralOps,
    w: &VectorField2D,
    u: &VectorField2D,
    rho_i: &PeriodicField2D,
    rho_j: &PeriodicField2D,
) -> CommExpansion {
    let riu = u.scaled_by(rho_i);
    let lhs = w.inner(&comm_vector(ops, &riu, rho_j));
    let r = ops.riesz_second(rho_j);
    // (rho_i w ⊗ u):(R rho_j) = Σ_ab w_a (R rho_j)_ab rho_i u_b
    let tensor_term = w.inner(&r.apply(&riu));
    let steady_first = riu.inner(&ops.q_operator(&w.scaled_by(rho_j)));
    let unsteady_first = w.scaled_by(rho_j).inner(&ops.q_operator(&riu));
    CommExpansion {
        steady: (lhs - (steady_first - tensor_term)).abs(),
        unsteady: (lhs - (unsteady_first - tensor_term)).abs(),
    }
}

/// `F_i = p_i - Σ_k nu_ik div u_k`.
pub fn effective_viscous_flux(
    p: &[PeriodicField2D],
    divu: &[PeriodicField2D],
    visc: &ViscosityMatrices,
) -> Result<Vec<PeriodicField2D>> {
    let n = visc.n();
    if p.len() != n || divu.len() != n {
        return Err(Error::InvalidInput(format!(
            "need {n} pressure and divergence fields, got {} and {}",
            p.len(),
            divu.len()
        )));
    }
    Ok((0..n)
        .map(|i| {
            let mut f = p[i].clone();
            for (k, d) in divu.iter().enumerate() {
                let nu = visc.nu_at(i, k);
                if nu != 0.0 {
                    f = f.zip_with(d, |a, b| a - nu * b);
                }
            }
            f
        })
        .collect())
}

/// Integration-by-parts residual `|∫ rho div w + ∫ w·∇rho|` and `|∫ rho div w|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormResidual {
    pub by_parts: f64,
    pub value: f64,
}

pub fn renorm_residual(ops: &SpectralOps, rho: &PeriodicField2D, w: &VectorField2D) -> RenormResidual {
    let a = rho.inner(&ops.divergence(w));
    let b = w.inner(&ops.gradient(rho));
    RenormResidual {
        by_parts: (a + b).abs(),
        value: a.abs(),
    }
}

/// `T_r(s) = min(s, r)`.
pub fn cutoff(s: f64, r: f64) -> f64 {
    debug_assert!(r > 0.0, "cut-off level must be positive");
    if s < r {
        s
    } else {
        r
    }
}

pub fn cutoff_field(f: &PeriodicField2D, r: f64) -> Result<PeriodicField2D> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("cut-off level must be positive, got {r}")));
    }
    Ok(f.map(|s| cutoff(s, r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_mode_commutator() {
        let ops = SpectralOps::new(32).unwrap();
        let a = PeriodicField2D::from_fn(32, |x, _| x.sin()).unwrap();
        let b = PeriodicField2D::from_fn(32, |_, y| y.sin()).unwrap();
        let c = comm(&ops, &a, &b);
        let ab = &a * &b;
        assert!((&c.xx - &ab).max_abs() < 1e-13);
        assert!(c.xy.max_abs() < 1e-13);
        assert!((&c.yy + &ab).max_abs() < 1e-13);
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff(1.0, 2.0), 1.0);
        assert_eq!(cutoff(3.0, 2.0), 2.0);
        assert_eq!(cutoff(2.0, 2.0), 2.0);
        let f = PeriodicField2D::zeros(16).unwrap();
        assert!(cutoff_field(&f, 0.0).is_err());
    }
}
