//! Two-dimensional field expressions: sums of terms such as
//! `1 + sin(0.5, 0, 1) + bump(1, 3.1, 3.1, 0.8)`.

use std::fmt;
use std::sync::OnceLock;

use multiflow_core::registry::Registry;
use multiflow_core::{Error, Result};

use crate::field::PeriodicField2D;

pub trait Term2D: Send + Sync + fmt::Debug {
    fn eval(&self, x: f64, y: f64) -> f64;
}

#[derive(Debug)]
struct Harmonic {
    amp: f64,
    kx: f64,
    ky: f64,
    phase: f64,
    cosine: bool,
}

impl Term2D for Harmonic {
    fn eval(&self, x: f64, y: f64) -> f64 {
        let arg = self.kx * x + self.ky * y + self.phase;
        self.amp * if self.cosine { arg.cos() } else { arg.sin() }
    }
}

/// Smooth periodic bump `amp exp((cos(x - cx) + cos(y - cy) - 2) / width²)`.
#[derive(Debug)]
struct Bump {
    amp: f64,
    cx: f64,
    cy: f64,
    width: f64,
}

impl Term2D for Bump {
    fn eval(&self, x: f64, y: f64) -> f64 {
        let s = (x - self.cx).cos() + (y - self.cy).cos() - 2.0;
        self.amp * (s / (self.width * self.width)).exp()
    }
}

#[derive(Debug)]
struct Constant(f64);

impl Term2D for Constant {
    fn eval(&self, _x: f64, _y: f64) -> f64 {
        self.0
    }
}

pub type TermRegistry = Registry<dyn Term2D, Vec<f64>>;

fn harmonic(name: &str, a: &[f64], cosine: bool) -> Result<Box<dyn Term2D>> {
    if a.len() != 3 && a.len() != 4 {
        return Err(Error::Config(format!(
            "`{name}` takes (amp, kx, ky[, phase]), got {} arguments",
            a.len()
        )));
    }
    if a[1].fract() != 0.0 || a[2].fract() != 0.0 {
        return Err(Error::Config(format!(
            "`{name}` wavenumbers must be integers on the torus, got ({}, {})",
            a[1], a[2]
        )));
    }
    Ok(Box::new(Harmonic {
        amp: a[0],
        kx: a[1],
        ky: a[2],
        phase: a.get(3).copied().unwrap_or(0.0),
        cosine,
    }))
}

pub fn term_registry() -> &'static TermRegistry {
    static REGISTRY: OnceLock<TermRegistry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg: TermRegistry = Registry::new("field term");
        reg.register("const", "const(c)", |a| match a.as_slice() {
            [c] => Ok(Box::new(Constant(*c)) as Box<dyn Term2D>),
            _ => Err(Error::Config("`const` takes one argument".into())),
        });
        reg.register("sin", "sin(amp, kx, ky[, phase])", |a| harmonic("sin", a, false));
        reg.register("cos", "cos(amp, kx, ky[, phase])", |a| harmonic("cos", a, true));
        reg.register("bump", "bump(amp, cx, cy, width)", |a| match a.as_slice() {
            &[amp, cx, cy, width] if width > 0.0 => Ok(Box::new(Bump { amp, cx, cy, width }) as Box<dyn Term2D>),
            _ => Err(Error::Config("`bump` takes (amp, cx, cy, width > 0)".into())),
        });
        reg
    })
}

/// A parsed field expression.
#[derive(Debug)]
pub struct FieldExpr {
    source: String,
    terms: Vec<Box<dyn Term2D>>,
}

impl FieldExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        let bytes = source.as_bytes();
        let mut pieces = Vec::new();
        for (k, &c) in bytes.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth = depth.saturating_sub(1),
                b'+' if depth == 0 && k > 0 && !matches!(bytes[k - 1], b'e' | b'E') => {
                    pieces.push(&source[start..k]);
                    start = k + 1;
                }
                _ => {}
            }
        }
        pieces.push(&source[start..]);
        for piece in pieces {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(Error::Config(format!("empty term in field `{source}`")));
            }
            if let Ok(c) = piece.parse::<f64>() {
                terms.push(Box::new(Constant(c)) as Box<dyn Term2D>);
                continue;
            }
            let (name, args) = multiflow_core::io::profile::parse_profile_spec(piece)?;
            terms.push(term_registry().build(&name, &args)?);
        }
        Ok(Self {
            source: source.trim().to_string(),
            terms,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x, y)).sum()
    }

    pub fn sample(&self, n: usize) -> Result<PeriodicField2D> {
        PeriodicField2D::from_fn(n, |x, y| self.eval(x, y))
    }
}
