//! `validate`, `run` and `steady`.

use std::fs;
use std::path::{Path, PathBuf};

use multiflow_core::grid::integrate;
use multiflow_core::io::output::{fmt_f64, write_snapshot, write_timeseries};
use multiflow_core::io::{parse_config, ParsedConfig, Scenario};
use multiflow_core::model::validate_viscosity;
use multiflow_core::{run_steady, run_unsteady, Error, Solver};

use crate::outcome::{sci, Failure, Fields, Reporter};

pub fn read_config(path: &Path) -> Result<ParsedConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::from(Error::io(path, e)))?;
    parse_config(&text).map_err(|errors| {
        Failure::Invalid(errors.0.iter().map(|e| format!("{}: {e}", path.display())).collect())
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Failure::from(Error::io(parent, e)))?;
    }
    fs::write(path, text).map_err(|e| Failure::from(Error::io(path, e)))
}

fn print_warnings(parsed: &ParsedConfig, rep: Reporter) {
    for w in &parsed.warnings {
        rep.line(format!("warning: {w}"));
    }
}

pub fn validate(path: &Path, rep: Reporter) -> Result<Fields, Failure> {
    let parsed = read_config(path)?;
    let scenario = parsed.config.build()?;
    let report = validate_viscosity(&scenario.params.visc);
    rep.line(format!("config: {}", path.display()));
    rep.line(format!("variant: {}  N = {}", parsed.config.variant, parsed.config.n));
    rep.line(format!("viscosity structure: {}", report.structure.as_str()));
    rep.line(format!("symmetric matrices: {}", report.symmetric));
    rep.line(format!("min eigenvalue sym(mu): {}", sci(report.min_eig_sym_mu)));
    rep.line(format!("min eigenvalue sym(H):  {}", sci(report.min_eig_sym_h)));
    rep.line(format!("psd tolerance: {}", sci(report.psd_tolerance)));
    rep.line(format!("admissible: {}", report.admissible));
    print_warnings(&parsed, rep);
    let mut f = Fields::new();
    f.push("admissible", report.admissible)
        .push("structure", report.structure.as_str())
        .push("min_eig_sym_mu", sci(report.min_eig_sym_mu))
        .push("min_eig_sym_h", sci(report.min_eig_sym_h))
        .push("warnings", parsed.warnings.len());
    Ok(f)
}

/// Totals of one unsteady run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub t_final: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub mass_drift: f64,
    pub dissipation: f64,
    pub floor_events: usize,
}

/// Runs a scenario and writes `timeseries.csv`, one `snapshot_XXXXX.csv`
/// per recorded state and the rendered config into `dir`.
pub fn simulate(parsed: &ParsedConfig, scenario: Scenario, dir: &Path) -> Result<RunSummary, Failure> {
    let Scenario { params, grid, solver, initial, .. } = scenario;
    let n = params.n();
    let mut solver = Solver::new(params, grid, solver)?;
    let traj = run_unsteady(&mut solver, initial)?;
    write_text(&dir.join("config.toml"), &parsed.config.render())?;
    write_timeseries(&traj.series, n, &dir.join("timeseries.csv"))?;
    for (k, (_, state)) in traj.snapshots.iter().enumerate() {
        write_snapshot(state, &grid, &dir.join(format!("snapshot_{k:05}.csv")))?;
    }
    let first = &traj.series[0];
    let last = traj.last();
    let mass_drift = first
        .masses
        .iter()
        .zip(&last.masses)
        .map(|(m0, m)| if *m0 > 0.0 { ((m - m0) / m0).abs() } else { (m - m0).abs() })
        .fold(0.0, f64::max);
    Ok(RunSummary {
        steps: traj.steps,
        t_final: traj.t_final,
        energy_initial: first.energy(),
        energy_final: last.energy(),
        mass_drift,
        dissipation: last.dissipation,
        floor_events: traj.floor_events,
    })
}

pub fn summary_fields(s: &RunSummary) -> Fields {
    let mut f = Fields::new();
    f.push("steps", s.steps)
        .push("t_final", fmt_f64(s.t_final))
        .push("energy", fmt_f64(s.energy_final))
        .push("mass_drift", sci(s.mass_drift))
        .push("dissipation", fmt_f64(s.dissipation))
        .push("floor_events", s.floor_events);
    f
}

/// `--out` wins; otherwise the configured directory, relative to the config file.
fn output_dir(out: Option<&Path>, config: &Path, scenario: &Scenario) -> PathBuf {
    match out {
        Some(dir) => dir.to_path_buf(),
        None => config.parent().unwrap_or(Path::new("")).join(&scenario.output_dir),
    }
}

pub fn run(path: &Path, out: Option<&Path>, rep: Reporter) -> Result<Fields, Failure> {
    let parsed = read_config(path)?;
    print_warnings(&parsed, rep);
    let scenario = parsed.config.build()?;
    let dir = output_dir(out, path, &scenario);
    let s = simulate(&parsed, scenario, &dir)?;
    rep.line(format!("steps: {}  t = {}", s.steps, s.t_final));
    rep.line(format!("energy: {} -> {}", sci(s.energy_initial), sci(s.energy_final)));
    rep.line(format!("max relative mass drift: {}", sci(s.mass_drift)));
    rep.line(format!("floor events: {}", s.floor_events));
    rep.line(format!("output: {}", dir.display()));
    let mut f = summary_fields(&s);
    f.push("out", dir.display());
    Ok(f)
}

pub fn steady(path: &Path, out: Option<&Path>, rep: Reporter) -> Result<Fields, Failure> {
    let parsed = read_config(path)?;
    print_warnings(&parsed, rep);
    let scenario = parsed.config.build()?;
    let dir = output_dir(out, path, &scenario);
    let Scenario { params, grid, solver, initial, .. } = scenario;
    let mut solver = Solver::new(params, grid, solver)?;
    let result = run_steady(&mut solver, initial)?;

    write_text(&dir.join("config.toml"), &parsed.config.render())?;
    write_snapshot(&result.state, &grid, &dir.join("steady_state.csv"))?;
    let mut residuals = String::from("step,residual\n");
    for (k, r) in result.residual_history.iter().enumerate() {
        residuals.push_str(&format!("{},{}\n", k + 1, fmt_f64(*r)));
    }
    write_text(&dir.join("residuals.csv"), &residuals)?;

    let residual = result.residual_history.last().copied().unwrap_or(f64::NAN);
    let renorm = result.renorm.iter().copied().fold(0.0, f64::max);
    let drift = result
        .state
        .rho
        .iter()
        .zip(&result.masses)
        .map(|(r, m)| ((integrate(r, &grid) - m) / m).abs())
        .fold(0.0, f64::max);
    rep.line(format!("converged: {} after {} steps", result.converged, result.steps));
    rep.line(format!("residual: {}", sci(residual)));
    rep.line(format!("max |∫ rho_i div v|: {}", sci(renorm)));
    rep.line(format!("max relative mass drift: {}", sci(drift)));
    rep.line(format!("output: {}", dir.display()));
    if !result.converged {
        return Err(Failure::Runtime(format!(
            "steady solve did not converge in {} steps (residual {})",
            result.steps,
            sci(residual)
        )));
    }
    let mut f = Fields::new();
    f.push("converged", true)
        .push("steps", result.steps)
        .push("residual", sci(residual))
        .push("renorm", sci(renorm))
        .push("mass_drift", sci(drift))
        .push("out", dir.display());
    Ok(f)
}
