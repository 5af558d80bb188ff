use std::fmt::Display;

use multiflow_core::Error;

/// Why a command did not succeed; maps onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad configuration or arguments (exit 1).
    Invalid(Vec<String>),
    /// The inputs were fine but the computation or I/O failed (exit 2).
    Runtime(String),
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Failure::Invalid(vec![msg.into()])
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }

    pub fn messages(&self) -> Vec<String> {
        match self {
            Failure::Invalid(m) => m.clone(),
            Failure::Runtime(m) => vec![m.clone()],
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidInput(_) | Error::UnknownName { .. } => {
                Failure::invalid(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// Ordered `key=value` pairs for the final `RESULT` line.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Fields(Vec<(String, String)>);

impl Fields {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Display) -> &mut Self {
        let v = value.to_string().replace(char::is_whitespace, "_");
        self.0.push((key.to_string(), v));
        self
    }

    pub fn extend(&mut self, other: Fields) {
        self.0.extend(other.0);
    }

    pub fn result_line(&self) -> String {
        let mut line = String::from("RESULT");
        for (k, v) in &self.0 {
            line.push(' ');
            line.push_str(k);
            line.push('=');
            line.push_str(v);
        }
        line
    }
}

/// Prints human-readable lines unless `--quiet` was given.
#[derive(Debug, Clone, Copy)]
pub struct Reporter {
    pub quiet: bool,
}

impl Reporter {
    pub fn line(&self, text: impl Display) {
        if !self.quiet {
            println!("{text}");
        }
    }
}

/// `{:.6e}` for compact report values.
pub fn sci(v: f64) -> String {
    format!("{v:.6e}")
}
