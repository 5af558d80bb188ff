//! Cell-centred 1D grids and the difference operators used by the solver.
//!
//! No-slip boundaries use ghost cells: velocities are reflected oddly (zero
//! at the wall face), densities and pressures evenly, and the advective flux
//! through a wall face is zero.

use crate::error::{Error, Result};
use crate::model::mixture::compensated_sum;
use crate::model::viscosity::ViscosityMatrices;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    NoSlip,
}

impl BoundaryCondition {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::NoSlip => "noslip",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "periodic" => Ok(BoundaryCondition::Periodic),
            "noslip" | "no-slip" => Ok(BoundaryCondition::NoSlip),
            other => Err(Error::UnknownName {
                kind: "boundary condition",
                name: other.to_string(),
                known: "periodic, noslip".into(),
            }),
        }
    }
}

/// Parity of a field under reflection across a no-slip wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflection {
    /// Densities, pressures: ghost value equals the adjacent interior value.
    Even,
    /// Velocities: ghost value is the negated interior value.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    length: f64,
    n_cells: usize,
    bc: BoundaryCondition,
}

impl Grid1D {
    pub fn new(length: f64, n_cells: usize, bc: BoundaryCondition) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Config(format!("grid length must be positive, got {length}")));
        }
        if n_cells < 3 {
            return Err(Error::Config(format!(
                "grid needs at least 3 cells, got {n_cells}"
            )));
        }
        Ok(Self {
            length,
            n_cells,
            bc,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_cells as f64
    }

    /// Centre of cell `j`.
    pub fn x(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|j| self.x(j)).collect()
    }

    #[inline]
    fn left(&self, f: &[f64], j: usize, parity: Reflection) -> f64 {
        if j > 0 {
            f[j - 1]
        } else {
            match (self.bc, parity) {
                (BoundaryCondition::Periodic, _) => f[self.n_cells - 1],
                (BoundaryCondition::NoSlip, Reflection::Even) => f[0],
                (BoundaryCondition::NoSlip, Reflection::Odd) => -f[0],
            }
        }
    }

    #[inline]
    fn right(&self, f: &[f64], j: usize, parity: Reflection) -> f64 {
        let last = self.n_cells - 1;
        if j < last {
            f[j + 1]
        } else {
            match (self.bc, parity) {
                (BoundaryCondition::Periodic, _) => f[0],
                (BoundaryCondition::NoSlip, Reflection::Even) => f[last],
                (BoundaryCondition::NoSlip, Reflection::Odd) => -f[last],
            }
        }
    }

    /// Velocities at the `n + 1` faces `j - 1/2`, `j = 0..=n`; wall faces are zero.
    pub fn face_velocities(&self, w: &[f64]) -> Vec<f64> {
        let n = self.n_cells;
        let mut faces = Vec::with_capacity(n + 1);
        for f in 0..=n {
            let v = match self.bc {
                BoundaryCondition::NoSlip if f == 0 || f == n => 0.0,
                BoundaryCondition::Periodic if f == 0 || f == n => 0.5 * (w[n - 1] + w[0]),
                _ => 0.5 * (w[f - 1] + w[f]),
            };
            faces.push(v);
        }
        faces
    }

    /// First-order upwind fluxes of `q` through the faces.
    pub fn upwind_fluxes(&self, q: &[f64], face_w: &[f64]) -> Vec<f64> {
        let n = self.n_cells;
        (0..=n)
            .map(|f| {
                let v = face_w[f];
                if v == 0.0 {
                    return 0.0;
                }
                let (l, r) = match f {
                    0 => (q[n - 1], q[0]),
                    f if f == n => (q[n - 1], q[0]),
                    f => (q[f - 1], q[f]),
                };
                v * if v > 0.0 { l } else { r }
            })
            .collect()
    }

    /// `(F_{j+1/2} - F_{j-1/2}) / dx` from face fluxes.
    pub fn flux_divergence(&self, flux: &[f64]) -> Vec<f64> {
        let inv = 1.0 / self.dx();
        flux.windows(2).map(|w| (w[1] - w[0]) * inv).collect()
    }

    /// Gradients at the faces with the weights of the discrete energy
    /// identity: wall faces carry half weight.
    pub fn face_gradients(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.n_cells;
        let inv = 1.0 / self.dx();
        let mut g = Vec::with_capacity(n + 1);
        let mut weight = Vec::with_capacity(n + 1);
        for f in 0..=n {
            let (l, r) = match f {
                0 => (self.left(u, 0, Reflection::Odd), u[0]),
                f if f == n => (u[n - 1], self.right(u, n - 1, Reflection::Odd)),
                f => (u[f - 1], u[f]),
            };
            g.push((r - l) * inv);
            weight.push(match self.bc {
                // face n duplicates face 0
                BoundaryCondition::Periodic if f == n => 0.0,
                BoundaryCondition::Periodic => 1.0,
                BoundaryCondition::NoSlip if f == 0 || f == n => 0.5,
                BoundaryCondition::NoSlip => 1.0,
            });
        }
        (g, weight)
    }
}

/// Second-order central first derivative.
pub fn ddx_central(f: &[f64], grid: &Grid1D, parity: Reflection) -> Vec<f64> {
    let inv = 0.5 / grid.dx();
    (0..grid.n_cells())
        .map(|j| (grid.right(f, j, parity) - grid.left(f, j, parity)) * inv)
        .collect()
}

/// Conservative upwind discretisation of `∂x(rho w)`.
pub fn upwind_flux_div(rho: &[f64], w: &[f64], grid: &Grid1D) -> Vec<f64> {
    let faces = grid.face_velocities(w);
    grid.flux_divergence(&grid.upwind_fluxes(rho, &faces))
}

/// Three-point second difference of a velocity field.
pub fn second_difference(u: &[f64], grid: &Grid1D) -> Vec<f64> {
    let inv = 1.0 / (grid.dx() * grid.dx());
    (0..grid.n_cells())
        .map(|j| {
            (grid.right(u, j, Reflection::Odd) - 2.0 * u[j] + grid.left(u, j, Reflection::Odd))
                * inv
        })
        .collect()
}

/// `(div S)_i = Σ_k nu_ik ∂xx u_k` for all constituents.
pub fn laplacian_like_apply(
    visc: &ViscosityMatrices,
    u: &[Vec<f64>],
    grid: &Grid1D,
) -> Vec<Vec<f64>> {
    let n = visc.n();
    let d2: Vec<Vec<f64>> = u.iter().map(|uk| second_difference(uk, grid)).collect();
    (0..n)
        .map(|i| {
            (0..grid.n_cells())
                .map(|j| (0..n).map(|k| visc.nu_at(i, k) * d2[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Midpoint rule.
pub fn integrate(f: &[f64], grid: &Grid1D) -> f64 {
    compensated_sum(f.iter().copied()) * grid.dx()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn periodic(n: usize) -> Grid1D {
        Grid1D::new(1.0, n, BoundaryCondition::Periodic).unwrap()
    }

    #[test]
    fn too_small_grid_is_rejected() {
        assert!(matches!(
            Grid1D::new(1.0, 2, BoundaryCondition::Periodic),
            Err(Error::Config(_))
        ));
        assert!(Grid1D::new(0.0, 8, BoundaryCondition::Periodic).is_err());
    }

    #[test]
    fn derivative_of_constant_and_linear() {
        let g = Grid1D::new(2.0, 16, BoundaryCondition::NoSlip).unwrap();
        assert!(ddx_central(&[3.0; 16], &g, Reflection::Even)
            .iter()
            .all(|&d| d == 0.0));
        let x = g.centers();
        let d = ddx_central(&x, &g, Reflection::Odd);
        for v in &d[1..15] {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_converges_at_second_order() {
        let err = |n: usize| {
            let g = periodic(n);
            let f: Vec<f64> = g.centers().iter().map(|x| (2.0 * PI * x).sin()).collect();
            let d = ddx_central(&f, &g, Reflection::Even);
            g.centers()
                .iter()
                .zip(&d)
                .map(|(x, d)| (d - 2.0 * PI * (2.0 * PI * x).cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(128) / err(256);
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn upwind_divergence_vanishes_for_uniform_transport() {
        let g = periodic(32);
        assert!(upwind_flux_div(&[1.3; 32], &[0.0; 32], &g).iter().all(|&v| v == 0.0));
        let d = upwind_flux_div(&[1.3; 32], &[-0.7; 32], &g);
        assert!(d.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn noslip_walls_carry_no_flux() {
        let g = Grid1D::new(1.0, 8, BoundaryCondition::NoSlip).unwrap();
        let faces = g.face_velocities(&[1.0; 8]);
        assert_eq!((faces[0], faces[8]), (0.0, 0.0));
    }

    #[test]
    fn fourier_mode_is_an_eigenvector_of_the_viscous_operator() {
        let g = periodic(64);
        let visc = ViscosityMatrices::diagonal(1, 0.35, 0.1).unwrap();
        let k = 3.0;
        let u: Vec<f64> = g.centers().iter().map(|x| (2.0 * PI * k * x).cos()).collect();
        let out = laplacian_like_apply(&visc, std::slice::from_ref(&u), &g);
        let symbol = -(2.0 / g.dx() * (PI * k * g.dx()).sin()).powi(2) * 0.8;
        for (o, u) in out[0].iter().zip(&u) {
            assert!((o - symbol * u).abs() < 1e-12 * symbol.abs());
        }
    }

    #[test]
    fn linear_velocity_is_annihilated_in_the_interior() {
        let g = Grid1D::new(1.0, 20, BoundaryCondition::NoSlip).unwrap();
        let visc = ViscosityMatrices::diagonal(2, 1.0, 0.0).unwrap();
        let u = vec![g.centers(), g.centers().iter().map(|x| 2.0 - 3.0 * x).collect()];
        for field in laplacian_like_apply(&visc, &u, &g) {
            assert!(field[1..19].iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn integrals() {
        let g = Grid1D::new(2.0, 10, BoundaryCondition::NoSlip).unwrap();
        assert!((integrate(&[1.0; 10], &g) - 2.0).abs() < 1e-15);
        assert_eq!(integrate(&[0.0; 10], &g), 0.0);
        let g = periodic(256);
        let f: Vec<f64> = g.centers().iter().map(|x| (2.0 * PI * x).sin().powi(2)).collect();
        assert!((integrate(&f, &g) - 0.5).abs() < 1e-10);
    }
}
