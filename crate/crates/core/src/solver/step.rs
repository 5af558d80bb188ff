//! One time step of the split scheme.
//!
//! 1. continuity: explicit first-order upwind transport of every `rho_i` with
//!    its convection velocity `w_i`;
//! 2. momentum, explicit part: upwind transport of `rho_i u_i` through the
//!    same faces, central pressure gradient of `p_i(rho^{n+1})`, body force;
//! 3. exchange: exact relaxation of `rho_i du_i/dt = J_i` cell by cell;
//! 4. viscosity: implicit solve of
//!    `rho_i^{n+1} u_i^{n+1} - dt Σ_k nu_ik ∂xx u_k^{n+1} = rhs_i`
//!    as one block-tridiagonal system with `N x N` blocks.

use crate::error::{Error, Result};
use crate::grid::{ddx_central, integrate, laplacian_like_apply, BoundaryCondition, Grid1D, Reflection};
use crate::model::params::MixtureParams;
use crate::solver::block::BlockTridiagonal;
use crate::solver::config::{SolverConfig, DEFAULT_FLOOR_FACTOR};
use crate::state::{Field1D, MixtureState};

/// Constituents below this multiple of the floor keep their velocity.
pub const FROZEN_FACTOR: f64 = 10.0;
const MAX_REJECTIONS: usize = 40;
const MAX_REFINEMENTS: usize = 3;

#[derive(Debug, Clone)]
pub struct ContinuityOutcome {
    pub rho: Field1D,
    pub floor_events: usize,
}

/// Scalar diagnostics of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub masses: Vec<f64>,
    pub kinetic: f64,
    pub potential: f64,
    /// `∫ Σ_ik nu_ik ∂x u_i ∂x u_k`, the viscous dissipation rate.
    pub dissipation: f64,
    pub momentum: f64,
    /// Cumulative floor events up to this state.
    pub floor_events: usize,
}

impl Diagnostics {
    pub fn energy(&self) -> f64 {
        self.kinetic + self.potential
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: MixtureState,
    pub dt: f64,
    pub floor_events: usize,
    pub rejections: usize,
}

#[derive(Debug, Clone)]
pub struct Solver {
    params: MixtureParams,
    grid: Grid1D,
    config: SolverConfig,
    rho_min: f64,
}

impl Solver {
    pub fn new(params: MixtureParams, grid: Grid1D, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let problems = params.problems();
        if !problems.is_empty() {
            return Err(Error::Config(problems.join("; ")));
        }
        let rho_min = config.density_floor.unwrap_or(0.0);
        Ok(Self {
            params,
            grid,
            config,
            rho_min,
        })
    }

    pub fn params(&self) -> &MixtureParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn density_floor(&self) -> f64 {
        self.rho_min
    }

    /// Resolves an unset floor to `1e-10 x` the mean initial density.
    pub fn resolve_floor(&mut self, initial: &MixtureState) {
        if self.config.density_floor.is_none() {
            let cells = initial.n_cells() * initial.n_constituents();
            let mean = initial.rho.iter().flatten().sum::<f64>() / cells as f64;
            self.rho_min = DEFAULT_FLOOR_FACTOR * mean;
        }
    }

    fn n(&self) -> usize {
        self.params.n()
    }

    fn active(&self, rho: f64) -> bool {
        rho >= FROZEN_FACTOR * self.rho_min
    }

    /// Transport velocities `w_i` for every cell.
    pub fn convection_velocity(&self, state: &MixtureState) -> Field1D {
        let (n, cells) = (self.n(), self.grid.n_cells());
        let mut w = vec![vec![0.0; cells]; n];
        let (mut uc, mut wc) = (vec![0.0; n], vec![0.0; n]);
        for j in 0..cells {
            MixtureState::gather(&state.u, j, &mut uc);
            self.params.model.convection_velocity(&uc, &mut wc);
            for i in 0..n {
                w[i][j] = wc[i];
            }
        }
        w
    }

    /// Pressures `p_i` for every cell of a density set.
    pub fn pressures(&self, rho: &Field1D) -> Field1D {
        let (n, cells) = (self.n(), self.grid.n_cells());
        let mut p = vec![vec![0.0; cells]; n];
        let (mut rc, mut pc) = (vec![0.0; n], vec![0.0; n]);
        for j in 0..cells {
            MixtureState::gather(rho, j, &mut rc);
            self.params.model.pressures(&rc, &self.params.pressure, &mut pc);
            for i in 0..n {
                p[i][j] = pc[i];
            }
        }
        p
    }

    /// Largest step allowed by the signal speeds, capped by `dt_init`.
    pub fn cfl_dt(&self, state: &MixtureState) -> f64 {
        let (n, cells) = (self.n(), self.grid.n_cells());
        let w = self.convection_velocity(state);
        let (mut rc, mut wc, mut act) = (vec![0.0; n], vec![0.0; n], vec![false; n]);
        let mut speed: f64 = 0.0;
        for j in 0..cells {
            MixtureState::gather(&state.rho, j, &mut rc);
            MixtureState::gather(&w, j, &mut wc);
            for i in 0..n {
                act[i] = self.active(rc[i]);
            }
            speed = speed.max(self.params.model.max_signal_speed(
                &rc,
                &wc,
                &self.params.pressure,
                &act,
            ));
        }
        let dt = if speed > 0.0 {
            self.config.cfl_target * self.grid.dx() / speed
        } else {
            f64::INFINITY
        };
        dt.min(self.config.dt_init)
    }

    /// `∂t rho_i + ∂x(rho_i w_i) = 0` over `dt`.
    pub fn continuity_step(&self, state: &MixtureState, dt: f64) -> Result<ContinuityOutcome> {
        let w = self.convection_velocity(state);
        let dx = self.grid.dx();
        let mut floor_events = 0;
        let mut rho_new = Vec::with_capacity(self.n());
        for (rho, w) in state.rho.iter().zip(&w) {
            let faces = self.grid.face_velocities(w);
            // positivity of the upwind update: outflow of a cell within one step
            let outflow = faces
                .windows(2)
                .map(|f| f[1].max(0.0) - f[0].min(0.0))
                .fold(0.0f64, f64::max);
            if outflow * dt > dx {
                return Err(Error::CflViolation {
                    dt,
                    limit: dx / outflow,
                });
            }
            let div = self.grid.flux_divergence(&self.grid.upwind_fluxes(rho, &faces));
            let updated = rho
                .iter()
                .zip(&div)
                .map(|(r, d)| {
                    let v = r - dt * d;
                    if v < self.rho_min {
                        floor_events += 1;
                        self.rho_min
                    } else {
                        v
                    }
                })
                .collect();
            rho_new.push(updated);
        }
        Ok(ContinuityOutcome {
            rho: rho_new,
            floor_events,
        })
    }

    /// Velocity update given the densities `rho_new` from the continuity step.
    pub fn momentum_step(
        &self,
        state: &MixtureState,
        rho_new: &Field1D,
        dt: f64,
        t: f64,
    ) -> Result<Field1D> {
        let (n, cells) = (self.n(), self.grid.n_cells());
        for (i, field) in rho_new.iter().enumerate() {
            if let Some(j) = field.iter().position(|&r| !(r >= 0.0)) {
                return Err(Error::NegativeDensity {
                    constituent: i,
                    cell: j,
                    value: field[j],
                });
            }
        }
        let w = self.convection_velocity(state);
        let p = self.pressures(rho_new);
        let x = self.grid.centers();

        // explicit part, velocities u* = m* / rho^{n+1}
        let mut ustar = vec![vec![0.0; cells]; n];
        for i in 0..n {
            let momentum: Vec<f64> = state.rho[i]
                .iter()
                .zip(&state.u[i])
                .map(|(r, u)| r * u)
                .collect();
            let faces = self.grid.face_velocities(&w[i]);
            let conv = self
                .grid
                .flux_divergence(&self.grid.upwind_fluxes(&momentum, &faces));
            let grad_p = ddx_central(&p[i], &self.grid, Reflection::Even);
            for j in 0..cells {
                let r = rho_new[i][j];
                if !self.active(r) {
                    ustar[i][j] = state.u[i][j];
                    continue;
                }
                let mut m = momentum[j] - dt * (conv[j] + grad_p[j]);
                if !self.params.body_force.is_zero() {
                    m += dt * r * self.params.body_force.eval(i, x[j], t);
                }
                ustar[i][j] = m / r;
            }
        }

        if self.params.model.exchange_enabled() {
            if let Some(a) = self.params.active_exchange() {
                let (mut rc, mut uc, mut frozen) = (vec![0.0; n], vec![0.0; n], vec![false; n]);
                for j in 0..cells {
                    MixtureState::gather(rho_new, j, &mut rc);
                    MixtureState::gather(&ustar, j, &mut uc);
                    for i in 0..n {
                        frozen[i] = !self.active(rc[i]);
                    }
                    a.relax(&rc, &frozen, &mut uc, dt);
                    for i in 0..n {
                        ustar[i][j] = uc[i];
                    }
                }
            }
        }

        self.viscous_solve(rho_new, &ustar, &state.u, dt)
    }

    fn viscous_solve(
        &self,
        rho_new: &Field1D,
        ustar: &Field1D,
        u_old: &Field1D,
        dt: f64,
    ) -> Result<Field1D> {
        let (n, cells) = (self.n(), self.grid.n_cells());
        let periodic = self.grid.bc() == BoundaryCondition::Periodic;
        let c = dt / (self.grid.dx() * self.grid.dx());
        let nu = self.params.visc.nu();
        let mut system = BlockTridiagonal::zeros(cells, n, periodic);
        let mut rhs = vec![0.0; cells * n];
        for j in 0..cells {
            let wall = !periodic && (j == 0 || j + 1 == cells);
            let centre = if wall { 3.0 } else { 2.0 };
            for i in 0..n {
                let r = rho_new[i][j];
                if !self.active(r) {
                    *system.diag_mut(j, i, i) = 1.0;
                    rhs[j * n + i] = u_old[i][j];
                    continue;
                }
                *system.diag_mut(j, i, i) += r;
                for k in 0..n {
                    let v = c * nu[(i, k)];
                    *system.diag_mut(j, i, k) += centre * v;
                    if periodic || j > 0 {
                        *system.lower_mut(j, i, k) = -v;
                    }
                    if periodic || j + 1 < cells {
                        *system.upper_mut(j, i, k) = -v;
                    }
                }
                rhs[j * n + i] = r * ustar[i][j];
            }
        }
        let (x, _) =
            system.solve_to_tolerance(&rhs, self.config.viscous_solve_tol, MAX_REFINEMENTS)?;
        Ok((0..n)
            .map(|i| (0..cells).map(|j| x[j * n + i]).collect())
            .collect())
    }

    /// Continuity then momentum over one step of size `dt`.
    pub fn step(&self, state: &MixtureState, dt: f64, t: f64) -> Result<StepOutcome> {
        let cont = self.continuity_step(state, dt)?;
        let u = self.momentum_step(state, &cont.rho, dt, t)?;
        let next = MixtureState {
            variant: state.variant,
            rho: cont.rho,
            u,
        };
        if !next.is_finite() {
            return Err(Error::DegenerateState(format!(
                "non-finite values after step at t = {t:.6e}"
            )));
        }
        Ok(StepOutcome {
            state: next,
            dt,
            floor_events: cont.floor_events,
            rejections: 0,
        })
    }

    /// One accepted step with `dt = min(cfl_dt, max_dt)`, halving on rejection.
    pub fn advance(&self, state: &MixtureState, t: f64, max_dt: f64) -> Result<StepOutcome> {
        let mut dt = self.cfl_dt(state).min(max_dt);
        for rejections in 0..MAX_REJECTIONS {
            match self.step(state, dt, t) {
                Ok(mut out) => {
                    out.rejections = rejections;
                    return Ok(out);
                }
                Err(Error::CflViolation { limit, .. }) => {
                    log::debug!("step rejected at t = {t:.6e}, dt = {dt:.3e}");
                    dt = (0.5 * dt).min(limit);
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::DtUnderflow { t, dt })
    }

    pub fn diagnostics(&self, state: &MixtureState, t: f64, floor_events: usize) -> Diagnostics {
        let (n, cells) = (self.n(), self.grid.n_cells());
        let masses = state.rho.iter().map(|r| integrate(r, &self.grid)).collect();
        let mut kinetic_density = vec![0.0; cells];
        let mut momentum_density = vec![0.0; cells];
        for i in 0..n {
            for j in 0..cells {
                let m = state.rho[i][j] * state.u[i][j];
                kinetic_density[j] += 0.5 * m * state.u[i][j];
                momentum_density[j] += m;
            }
        }
        let mut potential_density = vec![0.0; cells];
        let mut rc = vec![0.0; n];
        for (j, pd) in potential_density.iter_mut().enumerate() {
            MixtureState::gather(&state.rho, j, &mut rc);
            *pd = self.params.model.potential_energy(&rc, &self.params.pressure);
        }
        Diagnostics {
            t,
            masses,
            kinetic: integrate(&kinetic_density, &self.grid),
            potential: integrate(&potential_density, &self.grid),
            dissipation: self.dissipation_integral(&state.u),
            momentum: integrate(&momentum_density, &self.grid),
            floor_events,
        }
    }

    /// `-Σ_i <u_i, (div S)_i>` evaluated face by face.
    pub fn dissipation_integral(&self, u: &Field1D) -> f64 {
        let n = self.n();
        let grads: Vec<(Vec<f64>, Vec<f64>)> =
            u.iter().map(|ui| self.grid.face_gradients(ui)).collect();
        let faces = grads[0].0.len();
        let mut total = 0.0;
        for f in 0..faces {
            let weight = grads[0].1[f];
            if weight == 0.0 {
                continue;
            }
            let mut q = 0.0;
            for i in 0..n {
                for k in 0..n {
                    q += self.params.visc.nu_at(i, k) * grads[i].0[f] * grads[k].0[f];
                }
            }
            total += weight * q;
        }
        total * self.grid.dx()
    }

    /// Residuals of the steady equations for the current state:
    /// `max |∂x(rho_i w_i)|` and
    /// `max |∂x(rho_i w_i u_i) + ∂x p_i - (div S)_i - z_i - rho_i f_i|`.
    pub fn steady_residual(&self, state: &MixtureState, t: f64) -> (f64, f64) {
        let (n, cells) = (self.n(), self.grid.n_cells());
        let w = self.convection_velocity(state);
        let p = self.pressures(&state.rho);
        let div_s = laplacian_like_apply(&self.params.visc, &state.u, &self.grid);
        let x = self.grid.centers();
        let exchange = if self.params.model.exchange_enabled() {
            self.params.active_exchange()
        } else {
            None
        };
        let mut uc = vec![0.0; n];
        let z: Field1D = match exchange {
            Some(a) => {
                let mut z = vec![vec![0.0; cells]; n];
                for j in 0..cells {
                    MixtureState::gather(&state.u, j, &mut uc);
                    for (i, v) in crate::model::exchange::momentum_exchange(&uc, a)
                        .into_iter()
                        .enumerate()
                    {
                        z[i][j] = v;
                    }
                }
                z
            }
            None => vec![vec![0.0; cells]; n],
        };
        let (mut rc, mut rm) = (0.0f64, 0.0f64);
        for i in 0..n {
            let faces = self.grid.face_velocities(&w[i]);
            let mass = self
                .grid
                .flux_divergence(&self.grid.upwind_fluxes(&state.rho[i], &faces));
            let momentum: Vec<f64> = state.rho[i]
                .iter()
                .zip(&state.u[i])
                .map(|(r, u)| r * u)
                .collect();
            let conv = self
                .grid
                .flux_divergence(&self.grid.upwind_fluxes(&momentum, &faces));
            let grad_p = ddx_central(&p[i], &self.grid, Reflection::Even);
            for j in 0..cells {
                rc = rc.max(mass[j].abs());
                let force = state.rho[i][j] * self.params.body_force.eval(i, x[j], t);
                rm = rm.max((conv[j] + grad_p[j] - div_s[i][j] - z[i][j] - force).abs());
            }
        }
        (rc, rm)
    }
}
