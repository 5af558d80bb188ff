//! Run configuration: bracketed sections of `key = value` lines.
//!
//! ```toml
//! [model]
//! variant = "modified"
//! n = 2
//!
//! [viscosity]
//! mu = [0.2, 0.05, 0.05, 0.2]
//! lambda = [0.0, 0.0, 0.0, 0.0]
//!
//! [pressure]
//! kind = "polytropic"
//! k = 1.0
//! gamma = 2.0
//!
//! [grid]
//! n_cells = 128
//! ```
//!
//! Matrices are flat row-major lists of `n * n` numbers. Parsing reports
//! every problem it finds, not just the first.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Grid1D};
use crate::io::profile::{build_profile, sample};
use crate::model::exchange::ExchangeMatrix;
use crate::model::params::{BodyForce, MixtureParams};
use crate::model::pressure::{pressure_registry, LawParams, PressureLaw, EXISTENCE_GAMMA_THRESHOLD};
use crate::model::variant::ModelVariant;
use crate::model::viscosity::{validate_viscosity, ViscosityMatrices};
use crate::solver::config::SolverConfig;
use crate::state::MixtureState;

const SECTIONS: &[(&str, &[&str])] = &[
    ("model", &["variant", "n"]),
    ("viscosity", &["mu", "lambda"]),
    ("pressure", &["kind", "k", "gamma", "rho", "p"]),
    ("exchange", &["a"]),
    ("grid", &["length", "n_cells", "bc"]),
    (
        "time",
        &[
            "dt_init",
            "cfl",
            "t_end",
            "max_steps",
            "density_floor",
            "steady_tol",
            "viscous_solve_tol",
        ],
    ),
    ("initial", &["density", "velocity", "force"]),
    ("output", &["cadence", "directory"]),
];

/// One problem found while reading a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    pub line: Option<usize>,
    /// Dotted key the problem refers to, empty for syntax errors.
    pub field: String,
    pub message: String,
}

impl ConfigIssue {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            line: None,
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn is_syntax(&self) -> bool {
        self.line.is_some()
    }
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.field.is_empty()) {
            (Some(line), _) => write!(f, "line {line}: syntax error: {}", self.message),
            (None, true) => f.write_str(&self.message),
            (None, false) => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// All problems of a rejected configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, issue) in self.0.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

impl From<ConfigErrors> for Error {
    fn from(e: ConfigErrors) -> Self {
        Error::Config(
            e.0.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureConfig {
    pub kind: String,
    /// One value shared by all laws, or one per constituent.
    pub k: Vec<f64>,
    pub gamma: Vec<f64>,
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub variant: ModelVariant,
    pub n: usize,
    pub mu: Vec<f64>,
    pub lambda: Vec<f64>,
    pub pressure: PressureConfig,
    pub exchange: Option<Vec<f64>>,
    pub length: f64,
    pub n_cells: usize,
    pub bc: BoundaryCondition,
    pub time: SolverConfig,
    pub density: Vec<String>,
    pub velocity: Vec<String>,
    pub force: Option<Vec<String>>,
    pub output_dir: String,
}

/// A validated configuration with its non-fatal warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: RunConfig,
    pub warnings: Vec<String>,
}

/// Everything needed to start a run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: MixtureParams,
    pub grid: Grid1D,
    pub solver: SolverConfig,
    pub initial: MixtureState,
    pub output_dir: PathBuf,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> std::result::Result<ParsedConfig, ConfigErrors> {
    let table = parse_table(text)?;
    let config = from_table(&table)?;
    let problems = config.problems();
    if !problems.is_empty() {
        return Err(ConfigErrors(problems));
    }
    let warnings = config.warnings();
    Ok(ParsedConfig { config, warnings })
}

/// Syntax-level parse into a table.
pub fn parse_table(text: &str) -> std::result::Result<Table, ConfigErrors> {
    let meaningful = text
        .lines()
        .any(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    if !meaningful {
        return Err(ConfigErrors(vec![ConfigIssue {
            line: Some(1),
            field: String::new(),
            message: "empty configuration".into(),
        }]));
    }
    text.parse::<Table>().map_err(|e| {
        let line = e.span().map_or(1, |s| line_of(text, s.start));
        ConfigErrors(vec![ConfigIssue {
            line: Some(line),
            field: String::new(),
            message: e.message().trim().to_string(),
        }])
    })
}

struct Reader<'a> {
    root: &'a Table,
    issues: Vec<ConfigIssue>,
}

impl<'a> Reader<'a> {
    fn get(&self, section: &str, key: &str) -> Option<&'a Value> {
        self.root.get(section)?.as_table()?.get(key)
    }

    fn bad(&mut self, section: &str, key: &str, expected: &str, v: &Value) {
        self.issues.push(ConfigIssue::field(
            format!("{section}.{key}"),
            format!("expected {expected}, got {}", v.type_str()),
        ));
    }

    fn number(v: &Value) -> Option<f64> {
        match v {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        }
    }

    fn float(&mut self, section: &str, key: &str) -> Option<f64> {
        let v = self.get(section, key)?;
        match Self::number(v) {
            Some(f) => Some(f),
            None => {
                self.bad(section, key, "a number", v);
                None
            }
        }
    }

    fn int(&mut self, section: &str, key: &str) -> Option<i64> {
        let v = self.get(section, key)?;
        match v {
            Value::Integer(i) => Some(*i),
            _ => {
                self.bad(section, key, "an integer", v);
                None
            }
        }
    }

    fn count(&mut self, section: &str, key: &str) -> Option<usize> {
        let i = self.int(section, key)?;
        if i < 0 {
            self.issues.push(ConfigIssue::field(
                format!("{section}.{key}"),
                format!("must be nonnegative, got {i}"),
            ));
            return None;
        }
        Some(i as usize)
    }

    fn string(&mut self, section: &str, key: &str) -> Option<String> {
        let v = self.get(section, key)?;
        match v {
            Value::String(s) => Some(s.clone()),
            _ => {
                self.bad(section, key, "a string", v);
                None
            }
        }
    }

    /// A number or a list of numbers.
    fn floats(&mut self, section: &str, key: &str) -> Option<Vec<f64>> {
        let v = self.get(section, key)?;
        let items: Vec<&Value> = match v {
            Value::Array(a) => a.iter().collect(),
            other => vec![other],
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            match Self::number(item) {
                Some(f) => out.push(f),
                None => {
                    self.bad(section, key, "numbers", item);
                    return None;
                }
            }
        }
        Some(out)
    }

    /// Profile specs: strings, or numbers standing for constants.
    fn profiles(&mut self, section: &str, key: &str) -> Option<Vec<String>> {
        let v = self.get(section, key)?;
        let items: Vec<&Value> = match v {
            Value::Array(a) => a.iter().collect(),
            other => vec![other],
        };
        let mut out = Vec::new();
        for item in items {
            match item {
                Value::String(s) => out.push(s.clone()),
                Value::Float(f) => out.push(format!("constant({f:?})")),
                Value::Integer(i) => out.push(format!("constant({i})")),
                other => {
                    self.bad(section, key, "profile strings", other);
                    return None;
                }
            }
        }
        Some(out)
    }

    fn missing(&mut self, field: &str) {
        self.issues
            .push(ConfigIssue::field(field, "required key is missing"));
    }
}

fn from_table(root: &Table) -> std::result::Result<RunConfig, ConfigErrors> {
    let mut r = Reader {
        root,
        issues: Vec::new(),
    };
    for (name, value) in root {
        let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| s == name) else {
            r.issues.push(ConfigIssue::field(
                name.clone(),
                format!(
                    "unknown section (known: {})",
                    SECTIONS.iter().map(|s| s.0).collect::<Vec<_>>().join(", ")
                ),
            ));
            continue;
        };
        let Some(table) = value.as_table() else {
            r.issues
                .push(ConfigIssue::field(name.clone(), "expected a [section]"));
            continue;
        };
        for key in table.keys() {
            if !keys.contains(&key.as_str()) {
                r.issues.push(ConfigIssue::field(
                    format!("{name}.{key}"),
                    format!("unknown key (known: {})", keys.join(", ")),
                ));
            }
        }
    }

    let variant = match r.string("model", "variant") {
        Some(name) => match ModelVariant::from_name(&name) {
            Ok(v) => v,
            Err(e) => {
                r.issues.push(ConfigIssue::field("model.variant", issue_text(&e)));
                ModelVariant::Original
            }
        },
        None => ModelVariant::Original,
    };
    let n = r.count("model", "n");
    if n.is_none() && r.get("model", "n").is_none() {
        r.missing("model.n");
    }
    let n = n.unwrap_or(0);

    let mu = r.floats("viscosity", "mu");
    if mu.is_none() && r.get("viscosity", "mu").is_none() {
        r.missing("viscosity.mu");
    }
    let lambda = r.floats("viscosity", "lambda").unwrap_or_else(|| vec![0.0; n * n]);

    let kind = r
        .string("pressure", "kind")
        .unwrap_or_else(|| "polytropic".into());
    let gamma = r.floats("pressure", "gamma").unwrap_or_default();
    if kind == "polytropic" && r.get("pressure", "gamma").is_none() {
        r.missing("pressure.gamma");
    }
    let pressure = PressureConfig {
        k: r.floats("pressure", "k").unwrap_or_else(|| {
            if kind == "polytropic" {
                vec![1.0]
            } else {
                Vec::new()
            }
        }),
        gamma,
        rho: r.floats("pressure", "rho").unwrap_or_default(),
        p: r.floats("pressure", "p").unwrap_or_default(),
        kind,
    };

    let exchange = r.floats("exchange", "a");

    let defaults = SolverConfig::default();
    let length = r.float("grid", "length").unwrap_or(1.0);
    let n_cells = r.count("grid", "n_cells");
    if n_cells.is_none() && r.get("grid", "n_cells").is_none() {
        r.missing("grid.n_cells");
    }
    let bc = match r.string("grid", "bc") {
        Some(name) => match BoundaryCondition::from_name(&name) {
            Ok(bc) => bc,
            Err(e) => {
                r.issues.push(ConfigIssue::field("grid.bc", issue_text(&e)));
                BoundaryCondition::Periodic
            }
        },
        None => BoundaryCondition::Periodic,
    };

    let time = SolverConfig {
        dt_init: r.float("time", "dt_init").unwrap_or(defaults.dt_init),
        cfl_target: r.float("time", "cfl").unwrap_or(defaults.cfl_target),
        t_end: r.float("time", "t_end").unwrap_or(defaults.t_end),
        density_floor: r.float("time", "density_floor"),
        steady_tol: r.float("time", "steady_tol").unwrap_or(defaults.steady_tol),
        max_steps: r.count("time", "max_steps").unwrap_or(defaults.max_steps),
        viscous_solve_tol: r
            .float("time", "viscous_solve_tol")
            .unwrap_or(defaults.viscous_solve_tol),
        cadence: r.count("output", "cadence").unwrap_or(defaults.cadence),
    };

    let density = r
        .profiles("initial", "density")
        .unwrap_or_else(|| vec!["constant(1)".into(); n]);
    let velocity = r
        .profiles("initial", "velocity")
        .unwrap_or_else(|| vec!["constant(0)".into(); n]);
    let force = r.profiles("initial", "force");
    let output_dir = r
        .string("output", "directory")
        .unwrap_or_else(|| "out".into());

    if !r.issues.is_empty() {
        return Err(ConfigErrors(r.issues));
    }
    Ok(RunConfig {
        variant,
        n,
        mu: mu.unwrap_or_default(),
        lambda,
        pressure,
        exchange,
        length,
        n_cells: n_cells.unwrap_or(0),
        bc,
        time,
        density,
        velocity,
        force,
        output_dir,
    })
}

fn per_constituent<T: Clone>(values: &[T], i: usize) -> T {
    if values.len() == 1 {
        values[0].clone()
    } else {
        values[i].clone()
    }
}

impl RunConfig {
    /// Number of pressure laws the model variant uses.
    fn n_laws(&self) -> usize {
        match self.variant {
            ModelVariant::Original => self.n,
            ModelVariant::Modified => 1,
        }
    }

    fn law_params(&self, i: usize) -> LawParams {
        LawParams {
            k: (!self.pressure.k.is_empty()).then(|| per_constituent(&self.pressure.k, i)),
            gamma: (!self.pressure.gamma.is_empty())
                .then(|| per_constituent(&self.pressure.gamma, i)),
            table_rho: self.pressure.rho.clone(),
            table_p: self.pressure.p.clone(),
        }
    }

    /// Every semantic problem of the configuration.
    pub fn problems(&self) -> Vec<ConfigIssue> {
        let mut out = Vec::new();
        let n = self.n;
        if n == 0 {
            out.push(ConfigIssue::field("model.n", "N must be at least 1"));
            return out;
        }
        let square = n * n;
        let mut shape_ok = true;
        for (key, v) in [("viscosity.mu", &self.mu), ("viscosity.lambda", &self.lambda)] {
            if v.len() != square {
                shape_ok = false;
                out.push(ConfigIssue::field(
                    key,
                    format!("expected {square} row-major entries for N = {n}, got {}", v.len()),
                ));
            }
        }
        if shape_ok {
            match ViscosityMatrices::from_row_major(n, &self.mu, &self.lambda) {
                Ok(visc) => out.extend(
                    validate_viscosity(&visc)
                        .violations()
                        .into_iter()
                        .map(|m| {
                            let key = if m.starts_with("sym(mu)") { "viscosity.mu" } else { "viscosity.lambda" };
                            ConfigIssue::field(key, m)
                        }),
                ),
                Err(e) => out.push(ConfigIssue::field("viscosity", issue_text(&e))),
            }
        }

        let laws = self.n_laws();
        match self.pressure.kind.as_str() {
            "polytropic" => {
                for (key, v) in [("pressure.k", &self.pressure.k), ("pressure.gamma", &self.pressure.gamma)] {
                    if v.len() != 1 && v.len() != laws {
                        out.push(ConfigIssue::field(
                            key,
                            format!(
                                "expected 1 value{} for the {} model, got {}",
                                if laws > 1 { format!(" or {laws}") } else { String::new() },
                                self.variant,
                                v.len()
                            ),
                        ));
                    }
                }
                for &k in &self.pressure.k {
                    if !(k > 0.0 && k.is_finite()) {
                        out.push(ConfigIssue::field("pressure.k", format!("K must be positive, got {k}")));
                    }
                }
                for &g in &self.pressure.gamma {
                    if !(g > 1.0 && g.is_finite()) {
                        out.push(ConfigIssue::field(
                            "pressure.gamma",
                            format!("gamma must exceed 1, got {g}"),
                        ));
                    }
                }
                if !self.pressure.rho.is_empty() || !self.pressure.p.is_empty() {
                    out.push(ConfigIssue::field(
                        "pressure",
                        "rho and p tables apply to the tabulated kind only",
                    ));
                }
            }
            "tabulated" => {
                if let Err(e) = pressure_registry().build("tabulated", &self.law_params(0)) {
                    let msg = issue_text(&e);
                    let key = if msg.contains("densit") { "pressure.rho" } else { "pressure.p" };
                    out.push(ConfigIssue::field(key, msg));
                }
                if !self.pressure.k.is_empty() || !self.pressure.gamma.is_empty() {
                    out.push(ConfigIssue::field(
                        "pressure",
                        "k and gamma apply to the polytropic kind only",
                    ));
                }
            }
            other => {
                let known = pressure_registry().names().collect::<Vec<_>>().join(", ");
                out.push(ConfigIssue::field(
                    "pressure.kind",
                    format!("unknown pressure law `{other}` (known: {known})"),
                ));
            }
        }

        if let Some(a) = &self.exchange {
            match ExchangeMatrix::from_row_major(n, a) {
                Ok(m) => {
                    if self.variant == ModelVariant::Modified && !m.is_inert() {
                        out.push(ConfigIssue::field(
                            "exchange.a",
                            "modified model has no momentum exchange: exchange matrix must be zero",
                        ));
                    }
                }
                Err(e) => out.push(ConfigIssue::field("exchange.a", issue_text(&e))),
            }
        }

        if !(self.length > 0.0 && self.length.is_finite()) {
            out.push(ConfigIssue::field(
                "grid.length",
                format!("domain length must be positive, got {}", self.length),
            ));
        }
        if self.n_cells < 3 {
            out.push(ConfigIssue::field(
                "grid.n_cells",
                format!("need at least 3 cells, got {}", self.n_cells),
            ));
        }

        for problem in self.time.problems() {
            let field = if problem.starts_with("cadence") {
                "output.cadence".to_string()
            } else {
                let key = problem.split_whitespace().next().unwrap_or("");
                format!("time.{key}")
            };
            out.push(ConfigIssue::field(field, problem));
        }

        let centres: Vec<f64> = if self.length > 0.0 && self.n_cells > 0 {
            let dx = self.length / self.n_cells as f64;
            (0..self.n_cells).map(|j| (j as f64 + 0.5) * dx).collect()
        } else {
            Vec::new()
        };
        let groups = [
            ("initial.density", Some(&self.density)),
            ("initial.velocity", Some(&self.velocity)),
            ("initial.force", self.force.as_ref()),
        ];
        for (key, specs) in groups {
            let Some(specs) = specs else { continue };
            if specs.len() != n {
                out.push(ConfigIssue::field(
                    key,
                    format!("expected one profile per constituent ({n}), got {}", specs.len()),
                ));
                continue;
            }
            for (i, spec) in specs.iter().enumerate() {
                match build_profile(spec, self.length) {
                    Ok(p) => {
                        let values = sample(p.as_ref(), &centres);
                        if values.iter().any(|v| !v.is_finite()) {
                            out.push(ConfigIssue::field(
                                format!("{key}[{i}]"),
                                "profile takes non-finite values",
                            ));
                        } else if key == "initial.density" {
                            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                            if min < 0.0 {
                                out.push(ConfigIssue::field(
                                    format!("{key}[{i}]"),
                                    format!("density must be nonnegative, profile reaches {min}"),
                                ));
                            }
                        }
                    }
                    Err(e) => out.push(ConfigIssue::field(format!("{key}[{i}]"), issue_text(&e))),
                }
            }
        }
        if self.output_dir.trim().is_empty() {
            out.push(ConfigIssue::field("output.directory", "must not be empty"));
        }
        out
    }

    /// Non-fatal remarks, currently the adiabatic-exponent threshold.
    pub fn warnings(&self) -> Vec<String> {
        if self.pressure.kind != "polytropic" {
            return Vec::new();
        }
        self.pressure
            .gamma
            .iter()
            .filter(|&&g| g <= EXISTENCE_GAMMA_THRESHOLD)
            .map(|g| {
                format!(
                    "pressure.gamma = {g} does not exceed 3/2; the existence theory for weak solutions requires gamma > 3/2"
                )
            })
            .collect()
    }

    /// Renders the configuration with every key explicit.
    pub fn render(&self) -> String {
        fn floats(v: &[f64]) -> Value {
            Value::Array(v.iter().map(|&x| Value::Float(x)).collect())
        }
        fn strings(v: &[String]) -> Value {
            Value::Array(v.iter().map(|s| Value::String(s.clone())).collect())
        }
        let mut root = Table::new();
        let mut section = |name: &str, entries: Vec<(&str, Value)>| {
            let t: Table = entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            root.insert(name.to_string(), Value::Table(t));
        };
        section(
            "model",
            vec![
                ("variant", Value::String(self.variant.name().into())),
                ("n", Value::Integer(self.n as i64)),
            ],
        );
        section(
            "viscosity",
            vec![("mu", floats(&self.mu)), ("lambda", floats(&self.lambda))],
        );
        let mut pressure = vec![("kind", Value::String(self.pressure.kind.clone()))];
        for (key, v) in [
            ("k", &self.pressure.k),
            ("gamma", &self.pressure.gamma),
            ("rho", &self.pressure.rho),
            ("p", &self.pressure.p),
        ] {
            if !v.is_empty() {
                pressure.push((key, floats(v)));
            }
        }
        section("pressure", pressure);
        if let Some(a) = &self.exchange {
            section("exchange", vec![("a", floats(a))]);
        }
        section(
            "grid",
            vec![
                ("length", Value::Float(self.length)),
                ("n_cells", Value::Integer(self.n_cells as i64)),
                ("bc", Value::String(self.bc.name().into())),
            ],
        );
        let t = &self.time;
        let mut time = vec![
            ("dt_init", Value::Float(t.dt_init)),
            ("cfl", Value::Float(t.cfl_target)),
            ("t_end", Value::Float(t.t_end)),
            ("max_steps", Value::Integer(t.max_steps as i64)),
            ("steady_tol", Value::Float(t.steady_tol)),
            ("viscous_solve_tol", Value::Float(t.viscous_solve_tol)),
        ];
        if let Some(f) = t.density_floor {
            time.push(("density_floor", Value::Float(f)));
        }
        section("time", time);
        let mut initial = vec![
            ("density", strings(&self.density)),
            ("velocity", strings(&self.velocity)),
        ];
        if let Some(f) = &self.force {
            initial.push(("force", strings(f)));
        }
        section("initial", initial);
        section(
            "output",
            vec![
                ("cadence", Value::Integer(t.cadence as i64)),
                ("directory", Value::String(self.output_dir.clone())),
            ],
        );
        toml::to_string(&root).expect("tables of plain values always serialise")
    }

    /// Builds model parameters, grid and initial state.
    pub fn build(&self) -> Result<Scenario> {
        let problems = self.problems();
        if !problems.is_empty() {
            return Err(ConfigErrors(problems).into());
        }
        let n = self.n;
        let visc = ViscosityMatrices::from_row_major(n, &self.mu, &self.lambda)?;
        let laws = (0..self.n_laws())
            .map(|i| {
                pressure_registry()
                    .build(&self.pressure.kind, &self.law_params(i))
                    .map(Arc::<dyn PressureLaw>::from)
            })
            .collect::<Result<Vec<_>>>()?;
        let exchange = self
            .exchange
            .as_ref()
            .map(|a| ExchangeMatrix::from_row_major(n, a))
            .transpose()?;
        let grid = Grid1D::new(self.length, self.n_cells, self.bc)?;
        let x = grid.centers();
        let sample_all = |specs: &[String]| -> Result<Vec<Vec<f64>>> {
            specs
                .iter()
                .map(|s| Ok(sample(build_profile(s, self.length)?.as_ref(), &x)))
                .collect()
        };
        let initial = MixtureState::new(
            self.variant,
            sample_all(&self.density)?,
            sample_all(&self.velocity)?,
        )?;
        let body_force = match &self.force {
            Some(specs) => {
                let profiles: Vec<_> = specs
                    .iter()
                    .map(|s| build_profile(s, self.length))
                    .collect::<Result<_>>()?;
                BodyForce::new(move |i, x, _t| profiles[i].eval(x))
            }
            None => BodyForce::zero(),
        };
        let params = MixtureParams::new(self.variant.model(), visc, laws, exchange, body_force)?;
        Ok(Scenario {
            params,
            grid,
            solver: self.time.clone(),
            initial,
            output_dir: PathBuf::from(&self.output_dir),
        })
    }
}

/// Sets the dotted key `path` (e.g. `pressure.gamma`) in a configuration
/// text; `value` is a literal such as `1.4`, `[0.1, 0.2]` or `"noslip"`.
pub fn set_parameter(text: &str, path: &str, value: &str) -> Result<String> {
    let mut table = parse_table(text).map_err(Error::from)?;
    let (section, key) = path
        .split_once('.')
        .ok_or_else(|| Error::Config(format!("parameter path `{path}` must be section.key")))?;
    let known = SECTIONS
        .iter()
        .find(|(s, _)| *s == section)
        .is_some_and(|(_, keys)| keys.contains(&key));
    if !known {
        return Err(Error::Config(format!("parameter path `{path}` does not name a config key")));
    }
    let literal: Table = format!("v = {value}")
        .parse()
        .map_err(|_| Error::Config(format!("`{value}` is not a valid value literal")))?;
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| Value::Table(Table::new()));
    let Value::Table(t) = entry else {
        return Err(Error::Config(format!("`{section}` is not a section")));
    };
    t.insert(key.to_string(), literal["v"].clone());
    Ok(toml::to_string(&table).expect("tables of plain values always serialise"))
}

/// Error text without the variant prefix, for use inside a field issue.
fn issue_text(e: &Error) -> String {
    match e {
        Error::Config(m) | Error::InvalidInput(m) | Error::Domain(m) => m.clone(),
        other => other.to_string(),
    }
}
