//! Oscillating sequences `a_n = a0 + A sin(n k·x)`,
//! `b_n = b0 + B sin(n k·x + phase)` and how far their products and
//! commutators are from the values at the weak limits `a0`, `b0`.

use std::path::Path;

use multiflow_core::{Error, Result};
use toml::Table;

use crate::field::PeriodicField2D;
use crate::identities::comm;
use crate::profile::FieldExpr;
use crate::spectral::SpectralOps;

#[derive(Debug)]
pub struct OscillatorySequenceSpec {
    pub a0: FieldExpr,
    pub b0: FieldExpr,
    pub amp_a: FieldExpr,
    pub amp_b: FieldExpr,
    pub phase: f64,
    pub k: [i64; 2],
    pub indices: Vec<u32>,
    pub psi: FieldExpr,
    pub n: usize,
}

const KEYS: &[&str] = &["a0", "b0", "amp_a", "amp_b", "phase", "k", "indices", "psi", "n"];

impl OscillatorySequenceSpec {
    /// `a_n = b_n = sin(n x)` against a smooth bump.
    pub fn sine_squared(n: usize) -> Result<Self> {
        Ok(Self {
            a0: FieldExpr::parse("0")?,
            b0: FieldExpr::parse("0")?,
            amp_a: FieldExpr::parse("1")?,
            amp_b: FieldExpr::parse("1")?,
            phase: 0.0,
            k: [1, 0],
            indices: vec![4, 8, 16, 32],
            psi: FieldExpr::parse(DEFAULT_PSI)?,
            n,
        })
    }

    /// Phase-shifted pair with a modulated envelope, for which the
    /// commutator does not vanish identically.
    pub fn modulated(n: usize) -> Result<Self> {
        Ok(Self {
            a0: FieldExpr::parse("0")?,
            b0: FieldExpr::parse("0")?,
            amp_a: FieldExpr::parse("1 + sin(0.5, 0, 1)")?,
            amp_b: FieldExpr::parse("1 + sin(0.5, 0, 1)")?,
            phase: std::f64::consts::FRAC_PI_3,
            k: [1, 0],
            indices: vec![4, 8, 16, 32],
            psi: FieldExpr::parse(DEFAULT_PSI)?,
            n,
        })
    }

    /// Reads a `[sequence]` table of field expressions and numbers.
    pub fn from_toml(text: &str) -> Result<Self> {
        let root: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(format!("weak-limit spec: {}", e.message().trim())))?;
        let seq = root
            .get("sequence")
            .and_then(|v| v.as_table())
            .ok_or_else(|| Error::Config("weak-limit spec needs a [sequence] table".into()))?;
        if let Some(extra) = root.keys().find(|k| *k != "sequence") {
            return Err(Error::Config(format!("unknown section `{extra}` in weak-limit spec")));
        }
        if let Some(extra) = seq.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!(
                "unknown key `sequence.{extra}` (known: {})",
                KEYS.join(", ")
            )));
        }
        let expr = |key: &str, default: &str| -> Result<FieldExpr> {
            match seq.get(key) {
                None => FieldExpr::parse(default),
                Some(toml::Value::String(s)) => FieldExpr::parse(s),
                Some(toml::Value::Float(f)) => FieldExpr::parse(&format!("{f:?}")),
                Some(toml::Value::Integer(i)) => FieldExpr::parse(&i.to_string()),
                Some(_) => Err(Error::Config(format!("sequence.{key} must be a field expression"))),
            }
        };
        let number = |key: &str, default: f64| -> Result<f64> {
            match seq.get(key) {
                None => Ok(default),
                Some(toml::Value::Float(f)) => Ok(*f),
                Some(toml::Value::Integer(i)) => Ok(*i as f64),
                Some(_) => Err(Error::Config(format!("sequence.{key} must be a number"))),
            }
        };
        let ints = |key: &str| -> Result<Option<Vec<i64>>> {
            match seq.get(key) {
                None => Ok(None),
                Some(toml::Value::Array(a)) => a
                    .iter()
                    .map(|v| {
                        v.as_integer()
                            .ok_or_else(|| Error::Config(format!("sequence.{key} must hold integers")))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Some),
                Some(_) => Err(Error::Config(format!("sequence.{key} must be a list of integers"))),
            }
        };
        let k = match ints("k")?.as_deref() {
            None => [1, 0],
            Some(&[kx, ky]) => [kx, ky],
            Some(other) => {
                return Err(Error::Config(format!(
                    "sequence.k must have two entries, got {}",
                    other.len()
                )))
            }
        };
        let indices = match ints("indices")? {
            None => vec![4, 8, 16, 32],
            Some(v) => v
                .into_iter()
                .map(|i| {
                    u32::try_from(i)
                        .ok()
                        .filter(|&i| i > 0)
                        .ok_or_else(|| Error::Config(format!("sequence index {i} must be positive")))
                })
                .collect::<Result<_>>()?,
        };
        let n = number("n", 256.0)?;
        if n.fract() != 0.0 || n < 0.0 {
            return Err(Error::Config(format!("sequence.n must be a positive integer, got {n}")));
        }
        let spec = Self {
            a0: expr("a0", "0")?,
            b0: expr("b0", "0")?,
            amp_a: expr("amp_a", "1")?,
            amp_b: expr("amp_b", "1")?,
            phase: number("phase", 0.0)?,
            k,
            indices,
            psi: expr("psi", DEFAULT_PSI)?,
            n: n as usize,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        crate::field::check_grid_size(self.n)?;
        if self.k == [0, 0] {
            return Err(Error::Config("wave vector k must be nonzero".into()));
        }
        if !self.phase.is_finite() {
            return Err(Error::Config("phase must be finite".into()));
        }
        if self.indices.is_empty() {
            return Err(Error::Config("at least one sequence index is required".into()));
        }
        if self.indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("sequence indices must be strictly increasing".into()));
        }
        let kn = ((self.k[0] * self.k[0] + self.k[1] * self.k[1]) as f64).sqrt();
        for &m in &self.indices {
            if m as f64 * kn >= self.n as f64 / 4.0 {
                return Err(Error::Config(format!(
                    "frequency {m} |k| = {:.3} is not resolved: need < n/4 = {}",
                    m as f64 * kn,
                    self.n / 4
                )));
            }
        }
        Ok(())
    }
}

pub const DEFAULT_PSI: &str = "bump(1, 2.5, 3.5, 0.9)";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub index: u32,
    /// `|<a_n b_n - a0 b0, psi>|`.
    pub product_gap: f64,
    /// `|<a_n b_n - a0 b0 - A B cos(phase) / 2, psi>|`.
    pub corrected_gap: f64,
    /// `max_c |<Comm(a_n, b_n)_c - Comm(a0, b0)_c, psi>|`.
    pub comm_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakLimitTable {
    pub rows: Vec<GapRow>,
    /// Analytic limit `|<A B cos(phase) / 2, psi>|` of the product gap.
    pub product_limit: f64,
}

impl WeakLimitTable {
    /// Least-squares slope of `log comm_gap` against `log n`; `None` when
    /// a gap vanishes or fewer than two rows exist.
    pub fn comm_rate(&self) -> Option<f64> {
        fitted_exponent(
            &self.rows.iter().map(|r| r.index as f64).collect::<Vec<_>>(),
            &self.rows.iter().map(|r| r.comm_gap).collect::<Vec<_>>(),
        )
    }

    pub fn comm_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].comm_gap < w[0].comm_gap)
    }
}

pub fn fitted_exponent(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() || y.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Some(sxy / sxx)
}

pub fn weak_limit_experiment(ops: &SpectralOps, spec: &OscillatorySequenceSpec) -> Result<WeakLimitTable> {
    spec.validate()?;
    if ops.n() != spec.n {
        return Err(Error::Config(format!(
            "operators are built for n = {}, spec asks for n = {}",
            ops.n(),
            spec.n
        )));
    }
    let n = spec.n;
    let a0 = spec.a0.sample(n)?;
    let b0 = spec.b0.sample(n)?;
    let amp_a = spec.amp_a.sample(n)?;
    let amp_b = spec.amp_b.sample(n)?;
    let psi = spec.psi.sample(n)?;
    let base_product = &a0 * &b0;
    let base_comm = comm(ops, &a0, &b0);
    let correction = (&amp_a * &amp_b).scale(0.5 * spec.phase.cos());
    let (kx, ky) = (spec.k[0] as f64, spec.k[1] as f64);
    let mut rows = Vec::with_capacity(spec.indices.len());
    for &m in &spec.indices {
        let m = m as f64;
        let sa = PeriodicField2D::from_fn(n, |x, y| (m * (kx * x + ky * y)).sin())?;
        let sb = PeriodicField2D::from_fn(n, |x, y| (m * (kx * x + ky * y) + spec.phase).sin())?;
        let an = &a0 + &(&amp_a * &sa);
        let bn = &b0 + &(&amp_b * &sb);
        let product = &(&an * &bn) - &base_product;
        let c = comm(ops, &an, &bn);
        let comm_gap = c
            .components()
            .iter()
            .zip(base_comm.components())
            .map(|(cn, c0)| (*cn - c0).inner(&psi).abs())
            .fold(0.0, f64::max);
        rows.push(GapRow {
            index: m as u32,
            product_gap: product.inner(&psi).abs(),
            corrected_gap: (&product - &correction).inner(&psi).abs(),
            comm_gap,
        });
    }
    Ok(WeakLimitTable {
        rows,
        product_limit: correction.inner(&psi).abs(),
    })
}
