use crate::error::{Error, Result};
use crate::grid::{ddx_central, integrate, BoundaryCondition, Reflection};
use crate::model::mixture::average_velocity;
use crate::solver::step::{Diagnostics, Solver};
use crate::state::MixtureState;

/// Snapshots and diagnostics recorded at the output cadence, plus the
/// initial and final states.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<(f64, MixtureState)>,
    pub series: Vec<Diagnostics>,
    pub steps: usize,
    pub floor_events: usize,
    pub final_state: MixtureState,
    pub t_final: f64,
}

impl Trajectory {
    pub fn last(&self) -> &Diagnostics {
        self.series.last().expect("trajectory holds the initial row")
    }
}

/// Marches `initial` to `t_end`, or until `max_steps` steps were taken.
pub fn run_unsteady(solver: &mut Solver, initial: MixtureState) -> Result<Trajectory> {
    initial.check_against(solver.grid(), solver.params().n())?;
    solver.resolve_floor(&initial);
    let cfg = solver.config().clone();
    let mut t = 0.0;
    let mut state = initial;
    let mut floor_events = 0;
    let mut steps = 0;
    let mut series = vec![solver.diagnostics(&state, t, 0)];
    let mut snapshots = vec![(t, state.clone())];
    let mut recorded = 0;
    while t < cfg.t_end && steps < cfg.max_steps {
        let remaining = cfg.t_end - t;
        let out = solver.advance(&state, t, remaining)?;
        state = out.state;
        // land exactly on t_end
        t = if out.dt >= remaining { cfg.t_end } else { t + out.dt };
        steps += 1;
        floor_events += out.floor_events;
        if steps % cfg.cadence == 0 {
            series.push(solver.diagnostics(&state, t, floor_events));
            snapshots.push((t, state.clone()));
            recorded = steps;
        }
    }
    if recorded != steps {
        series.push(solver.diagnostics(&state, t, floor_events));
        snapshots.push((t, state.clone()));
    }
    if floor_events > 0 {
        log::warn!("density floor applied {floor_events} times");
    }
    Ok(Trajectory {
        snapshots,
        series,
        steps,
        floor_events,
        final_state: state,
        t_final: t,
    })
}

#[derive(Debug, Clone)]
pub struct SteadyResult {
    pub state: MixtureState,
    pub converged: bool,
    pub steps: usize,
    /// `max(continuity residual, momentum residual)` after every step.
    pub residual_history: Vec<f64>,
    /// `|∫ rho_i div v|` for each constituent at the final state.
    pub renorm: Vec<f64>,
    pub masses: Vec<f64>,
}

/// Pseudo-time marching to a steady state with walls on both ends.
///
/// Masses are held at their initial values by rescaling each density after
/// every step; the forcing is frozen at `t = 0`.
pub fn run_steady(solver: &mut Solver, initial: MixtureState) -> Result<SteadyResult> {
    if solver.grid().bc() != BoundaryCondition::NoSlip {
        return Err(Error::Config(
            "the steady problem requires no-slip boundaries".into(),
        ));
    }
    initial.check_against(solver.grid(), solver.params().n())?;
    solver.resolve_floor(&initial);
    let cfg = solver.config().clone();
    let grid = *solver.grid();
    let masses: Vec<f64> = initial.rho.iter().map(|r| integrate(r, &grid)).collect();
    let mut state = initial;
    let mut history = Vec::new();
    let mut converged = false;
    let mut steps = 0;
    while steps < cfg.max_steps {
        let out = solver.advance(&state, 0.0, f64::INFINITY)?;
        state = out.state;
        for (rho, &m) in state.rho.iter_mut().zip(&masses) {
            let now = integrate(rho, &grid);
            if now > 0.0 {
                let s = m / now;
                rho.iter_mut().for_each(|r| *r *= s);
            }
        }
        steps += 1;
        let (rc, rm) = solver.steady_residual(&state, 0.0);
        let r = rc.max(rm);
        history.push(r);
        if r <= cfg.steady_tol {
            converged = true;
            break;
        }
    }
    let renorm = renormalisation_residual(solver, &state);
    Ok(SteadyResult {
        state,
        converged,
        steps,
        residual_history: history,
        renorm,
        masses,
    })
}

/// `|∫ rho_i ∂x v|` with `v` the average velocity.
pub fn renormalisation_residual(solver: &Solver, state: &MixtureState) -> Vec<f64> {
    let grid = solver.grid();
    let n = state.n_constituents();
    let mut uc = vec![0.0; n];
    let v: Vec<f64> = (0..state.n_cells())
        .map(|j| {
            MixtureState::gather(&state.u, j, &mut uc);
            average_velocity(&uc)
        })
        .collect();
    let dv = ddx_central(&v, grid, Reflection::Odd);
    state
        .rho
        .iter()
        .map(|rho| {
            let prod: Vec<f64> = rho.iter().zip(&dv).map(|(r, d)| r * d).collect();
            integrate(&prod, grid).abs()
        })
        .collect()
}
