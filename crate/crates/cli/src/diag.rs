//! Spectral diagnostics on the periodic square.

use std::fs;
use std::path::Path;

use multiflow_core::Error;
use multiflow_evf::{
    check_selfadjoint, comm, comm_expansion_residual, div_identity_residual, renorm_residual,
    weak_limit_experiment, EvfReport, FieldSampler, OscillatorySequenceSpec, SpectralOps, Taper,
    WeakLimitTable,
};
use toml::Table;

use crate::outcome::{sci, Failure, Fields, Reporter};

pub const IDENTITY_TOL: f64 = 1e-9;
pub const SELFADJOINT_TOL: f64 = 1e-10;
pub const EXPANSION_TOL: f64 = 1e-9;

/// Default taper where the grid resolves it, otherwise the widest one it does.
pub fn taper_for(n: usize) -> Taper {
    let default = Taper::default();
    if 2.0 * default.k_max < n as f64 {
        default
    } else {
        let k_max = (n / 2 - 1) as f64;
        Taper { k_max, sigma: k_max / 5.0 }
    }
}

fn spectral(n: usize) -> Result<SpectralOps, Failure> {
    SpectralOps::new(n).map_err(Failure::from)
}

fn emit(report: &EvfReport, name: &str, out: Option<&Path>, rep: Reporter) -> Result<(), Failure> {
    let text = report.render();
    rep.line(text.trim_end());
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::from(Error::io(dir, e)))?;
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Failure::from(Error::io(&path, e)))?;
    }
    Ok(())
}

pub fn identity(n: usize, seed: u64, out: Option<&Path>, rep: Reporter) -> Result<Fields, Failure> {
    let ops = spectral(n)?;
    let mut sampler = FieldSampler::new(seed, taper_for(n));
    let s = sampler.tensor(&ops)?;
    let rho = sampler.scalar(&ops)?;
    let tau = sampler.scalar(&ops)?;
    let residual = div_identity_residual(&ops, &s, &rho, &tau) / (s.norm() * rho.norm() * tau.norm());
    let adj = check_selfadjoint(&ops, &rho, &tau)
        .into_iter()
        .fold(0.0, f64::max)
        / (rho.norm() * tau.norm());
    let w = sampler.vector(&ops)?;
    let renorm = renorm_residual(&ops, &rho, &w).by_parts / (rho.norm() * w.norm());

    let mut report = EvfReport::new(ops.convention());
    report.set("identity", "n", n as i64);
    report.set("identity", "seed", seed as i64);
    report.set("identity", "div_identity_residual", residual);
    report.set("identity", "selfadjoint_gap", adj);
    report.set("identity", "renorm_by_parts", renorm);
    emit(&report, "identity.toml", out, rep)?;

    let mut f = Fields::new();
    f.push("n", n)
        .push("seed", seed)
        .push("residual", sci(residual))
        .push("selfadjoint_gap", sci(adj))
        .push("renorm_by_parts", sci(renorm));
    if residual > IDENTITY_TOL || adj > SELFADJOINT_TOL {
        return Err(Failure::Runtime(format!(
            "identity residual {} or self-adjoint gap {} above tolerance",
            sci(residual),
            sci(adj)
        )));
    }
    Ok(f)
}

/// Settings of `diag comm`, optionally read from a `[comm]` table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommSettings {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
}

impl CommSettings {
    pub fn apply_file(mut self, path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::from(Error::io(path, e)))?;
        let root: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Failure::invalid(format!("{}: {}", path.display(), e.message().trim())))?;
        let table = root
            .get("comm")
            .and_then(|v| v.as_table())
            .ok_or_else(|| Failure::invalid(format!("{}: expected a [comm] table", path.display())))?;
        let mut problems = Vec::new();
        for (key, value) in table {
            let v = value.as_integer().filter(|&v| v >= 0);
            match (key.as_str(), v) {
                ("n", Some(v)) => self.n = v as usize,
                ("seed", Some(v)) => self.seed = v as u64,
                ("samples", Some(v)) if v > 0 => self.samples = v as usize,
                ("n" | "seed" | "samples", _) => {
                    problems.push(format!("comm.{key}: expected a nonnegative integer"))
                }
                _ => problems.push(format!("comm.{key}: unknown key")),
            }
        }
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(Failure::Invalid(problems))
        }
    }
}

pub fn comm_check(settings: CommSettings, out: Option<&Path>, rep: Reporter) -> Result<Fields, Failure> {
    let ops = spectral(settings.n)?;
    let mut sampler = FieldSampler::new(settings.seed, taper_for(settings.n));
    let (mut steady, mut unsteady, mut adj, mut anti) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..settings.samples {
        let w = sampler.vector(&ops)?;
        let u = sampler.vector(&ops)?;
        let ri = sampler.scalar(&ops)?;
        let rj = sampler.scalar(&ops)?;
        let scale = w.norm() * u.norm() * ri.norm() * rj.norm();
        let r = comm_expansion_residual(&ops, &w, &u, &ri, &rj);
        steady = steady.max(r.steady / scale);
        unsteady = unsteady.max(r.unsteady / scale);
        let pair = ri.norm() * rj.norm();
        for gap in check_selfadjoint(&ops, &ri, &rj) {
            adj = adj.max(gap / pair);
        }
        let sum = comm(&ops, &ri, &rj).zip_with(&comm(&ops, &rj, &ri), |a, b| a + b);
        anti = anti.max(sum.max_abs() / pair);
    }
    let mut report = EvfReport::new(ops.convention());
    report.set("comm", "n", settings.n as i64);
    report.set("comm", "seed", settings.seed as i64);
    report.set("comm", "samples", settings.samples as i64);
    report.set("comm", "steady_expansion_residual", steady);
    report.set("comm", "unsteady_expansion_residual", unsteady);
    report.set("comm", "selfadjoint_gap", adj);
    report.set("comm", "antisymmetry_defect", anti);
    emit(&report, "comm.toml", out, rep)?;

    let mut f = Fields::new();
    f.push("n", settings.n)
        .push("samples", settings.samples)
        .push("steady", sci(steady))
        .push("unsteady", sci(unsteady))
        .push("selfadjoint_gap", sci(adj))
        .push("antisymmetry", sci(anti));
    if steady > EXPANSION_TOL || unsteady > EXPANSION_TOL || adj > SELFADJOINT_TOL {
        return Err(Failure::Runtime("commutator expansion residuals above tolerance".into()));
    }
    Ok(f)
}

fn table_lines(name: &str, table: &WeakLimitTable, rep: Reporter) {
    rep.line(format!("{name}: product limit {}", sci(table.product_limit)));
    rep.line(format!("{:>6} {:>14} {:>14} {:>14}", "n", "product_gap", "corrected_gap", "comm_gap"));
    for r in &table.rows {
        rep.line(format!(
            "{:>6} {:>14} {:>14} {:>14}",
            r.index,
            sci(r.product_gap),
            sci(r.corrected_gap),
            sci(r.comm_gap)
        ));
    }
}

pub fn weak_limit(spec: Option<&Path>, n: usize, out: Option<&Path>, rep: Reporter) -> Result<Fields, Failure> {
    let specs = match spec {
        Some(path) => vec![("sequence", OscillatorySequenceSpec::from_file(path)?)],
        None => vec![
            ("sine_squared", OscillatorySequenceSpec::sine_squared(n)?),
            ("modulated", OscillatorySequenceSpec::modulated(n)?),
        ],
    };
    let ops = spectral(specs[0].1.n)?;
    let mut report = EvfReport::new(ops.convention());
    let mut f = Fields::new();
    for (name, spec) in &specs {
        let table = weak_limit_experiment(&ops, spec)?;
        table_lines(name, &table, rep);
        report.add_weak_limit(name, &table);
        f.push(&format!("{name}_product_limit"), sci(table.product_limit));
        match table.comm_rate() {
            Some(rate) => f.push(&format!("{name}_comm_rate"), format!("{rate:.4}")),
            None => f.push(&format!("{name}_comm_rate"), "none"),
        };
    }
    if out.is_some() {
        emit(&report, "weak_limit.toml", out, Reporter { quiet: true })?;
    }
    Ok(f)
}
