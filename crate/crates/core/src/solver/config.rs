use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Upper bound on the step size; also the size of the first step when
    /// the CFL estimate allows it.
    pub dt_init: f64,
    pub cfl_target: f64,
    pub t_end: f64,
    /// Density floor; `None` resolves to `1e-10 x` the mean initial density.
    pub density_floor: Option<f64>,
    pub steady_tol: f64,
    pub max_steps: usize,
    pub viscous_solve_tol: f64,
    /// Record a snapshot and a diagnostics row every `cadence` steps.
    pub cadence: usize,
}

pub const DEFAULT_FLOOR_FACTOR: f64 = 1e-10;
pub const MAX_CFL: f64 = 0.9;

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt_init: 1e-2,
            cfl_target: 0.5,
            t_end: 1.0,
            density_floor: None,
            steady_tol: 1e-10,
            max_steps: 100_000,
            viscous_solve_tol: 1e-12,
            cadence: 1,
        }
    }
}

impl SolverConfig {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.dt_init > 0.0 && self.dt_init.is_finite()) {
            out.push(format!("dt_init must be positive, got {}", self.dt_init));
        }
        if !(self.cfl_target > 0.0 && self.cfl_target <= MAX_CFL) {
            out.push(format!(
                "cfl must lie in (0, {MAX_CFL}], got {}",
                self.cfl_target
            ));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            out.push(format!("t_end must be nonnegative, got {}", self.t_end));
        }
        if let Some(f) = self.density_floor {
            if !(f >= 0.0 && f.is_finite()) {
                out.push(format!("density_floor must be nonnegative, got {f}"));
            }
        }
        if !(self.steady_tol > 0.0) {
            out.push(format!("steady_tol must be positive, got {}", self.steady_tol));
        }
        if !(self.viscous_solve_tol > 0.0) {
            out.push(format!(
                "viscous_solve_tol must be positive, got {}",
                self.viscous_solve_tol
            ));
        }
        if self.max_steps == 0 {
            out.push("max_steps must be at least 1".into());
        }
        if self.cadence == 0 {
            out.push("cadence must be at least 1".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}
