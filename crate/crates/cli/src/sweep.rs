//! Independent runs over the values of one config key.

use std::fs;
use std::path::{Path, PathBuf};

use multiflow_core::io::output::fmt_f64;
use multiflow_core::io::{parse_config, set_parameter};
use multiflow_core::Error;
use rayon::prelude::*;

use crate::outcome::{sci, Failure, Fields, Reporter};
use crate::simulate::{simulate, RunSummary};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub dir: PathBuf,
    pub warning: bool,
    pub outcome: Result<RunSummary, String>,
}

/// Splits `1.4,1.6` style arguments; bracketed or quoted values are kept whole.
pub fn split_values(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for a in args {
        if a.contains('[') || a.contains('"') {
            out.push(a.trim().to_string());
        } else {
            out.extend(a.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from));
        }
    }
    out
}

fn dir_name(index: usize, value: &str) -> String {
    let clean: String = value
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect();
    format!("{index:03}_{clean}")
}

fn one_run(text: &str, param: &str, value: &str, dir: &Path) -> (bool, Result<RunSummary, String>) {
    let updated = match set_parameter(text, param, value) {
        Ok(t) => t,
        Err(e) => return (false, Err(e.to_string())),
    };
    let parsed = match parse_config(&updated) {
        Ok(p) => p,
        Err(e) => return (false, Err(e.to_string().replace('\n', "; "))),
    };
    let warning = !parsed.warnings.is_empty();
    let outcome = parsed
        .config
        .build()
        .map_err(Failure::from)
        .and_then(|scenario| simulate(&parsed, scenario, dir))
        .map_err(|f| f.messages().join("; "));
    (warning, outcome)
}

pub fn render_summary(param: &str, rows: &[SweepRow]) -> String {
    let mut out = format!("{param},status,final_energy,mass_drift,dissipation,warning\n");
    for r in rows {
        let (status, e, m, d) = match &r.outcome {
            Ok(s) => ("ok", fmt_f64(s.energy_final), fmt_f64(s.mass_drift), fmt_f64(s.dissipation)),
            Err(_) => ("failed", "nan".into(), "nan".into(), "nan".into()),
        };
        let value = r.value.replace(',', ";");
        out.push_str(&format!("{value},{status},{e},{m},{d},{}\n", r.warning as u8));
    }
    out
}

pub fn sweep(
    config: &Path,
    param: &str,
    values: &[String],
    jobs: usize,
    out: &Path,
    rep: Reporter,
) -> Result<Fields, Failure> {
    let text = fs::read_to_string(config).map_err(|e| Failure::from(Error::io(config, e)))?;
    // reject a bad base config or path before starting any run
    parse_config(&text).map_err(|errors| Failure::Invalid(errors.0.iter().map(ToString::to_string).collect()))?;
    set_parameter(&text, param, "0").map_err(Failure::from)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Runtime(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        values
            .par_iter()
            .enumerate()
            .map(|(k, value)| {
                let dir = out.join(dir_name(k, value));
                log::info!("sweep {param} = {value} -> {}", dir.display());
                let (warning, outcome) = one_run(&text, param, value, &dir);
                SweepRow { value: value.clone(), dir, warning, outcome }
            })
            .collect()
    });

    let summary = render_summary(param, &rows);
    fs::create_dir_all(out).map_err(|e| Failure::from(Error::io(out, e)))?;
    let path = out.join("sweep_summary.csv");
    fs::write(&path, &summary).map_err(|e| Failure::from(Error::io(&path, e)))?;
    rep.line(summary.trim_end());
    for r in &rows {
        if let Err(msg) = &r.outcome {
            rep.line(format!("failed: {param} = {}: {msg}", r.value));
        }
    }

    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    let mut f = Fields::new();
    f.push("rows", rows.len())
        .push("failed", failed)
        .push("warnings", rows.iter().filter(|r| r.warning).count())
        .push("summary", path.display());
    if let Some(worst) = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok())
        .map(|s| s.mass_drift)
        .reduce(f64::max)
    {
        f.push("max_mass_drift", sci(worst));
    }
    if failed > 0 {
        return Err(Failure::Runtime(format!("{failed} of {} sweep runs failed", rows.len())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_value_lists() {
        let args = ["1.4,1.6".to_string(), "2.0".into(), "[1.0, 2.0]".into(), "\"a,b\"".into()];
        assert_eq!(split_values(&args), ["1.4", "1.6", "2.0", "[1.0, 2.0]", "\"a,b\""]);
        assert!(split_values(&[",".into()]).is_empty());
    }

    #[test]
    fn directory_names_are_ordered_and_safe() {
        assert_eq!(dir_name(2, "1.4"), "002_1.4");
        assert_eq!(dir_name(10, "[1.0, 2.0]"), "010__1.0__2.0_");
    }

    #[test]
    fn failed_rows_render_as_nan() {
        let rows = [SweepRow { value: "[1, 2]".into(), dir: PathBuf::new(), warning: true, outcome: Err("x".into()) }];
        assert_eq!(
            render_summary("pressure.k", &rows),
            "pressure.k,status,final_energy,mass_drift,dissipation,warning\n[1; 2],failed,nan,nan,nan,1\n"
        );
    }
}
