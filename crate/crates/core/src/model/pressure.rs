//! Barotropic pressure laws `p = p(rho)` and their potential energy densities.
//!
//! The potential is gauged as `P(rho) = rho * ∫_0^rho p(s)/s² ds`, which
//! gives `K rho^gamma / (gamma - 1)` for polytropic laws and satisfies
//! `rho P'(rho) - P(rho) = p(rho)`.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::registry::Registry;

/// Polytropic exponent above which the existence theory for the
/// common-pressure model is available.
pub const EXISTENCE_GAMMA_THRESHOLD: f64 = 1.5;

pub trait PressureLaw: Send + Sync + fmt::Debug {
    fn kind(&self) -> &'static str;

    /// Pressure at `rho >= 0`. Callers are responsible for the sign of `rho`;
    /// see [`pressure_eval`] for the checked entry point.
    fn pressure(&self, rho: f64) -> f64;

    /// `dp/drho`, used for sound-speed estimates.
    fn derivative(&self, rho: f64) -> f64;

    /// Potential energy density `P(rho)` for `rho > 0`.
    fn potential(&self, rho: f64) -> f64;

    /// `Some(gamma > 3/2)` for polytropic laws, `None` when the law has no
    /// single exponent.
    fn above_existence_threshold(&self) -> Option<bool> {
        None
    }
}

pub fn pressure_eval(law: &dyn PressureLaw, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!(
            "pressure requires a nonnegative density, got {rho}"
        )));
    }
    Ok(law.pressure(rho))
}

pub fn pressure_potential(law: &dyn PressureLaw, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!(
            "pressure potential requires a positive density, got {rho}"
        )));
    }
    Ok(law.potential(rho))
}

/// `p = K rho^gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytropic {
    k: f64,
    gamma: f64,
}

impl Polytropic {
    pub fn new(k: f64, gamma: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(k > 0.0 && k.is_finite()) {
            problems.push(format!("K must be positive and finite, got {k}"));
        }
        if !(gamma > 1.0 && gamma.is_finite()) {
            problems.push(format!("gamma must exceed 1, got {gamma}"));
        }
        if problems.is_empty() {
            Ok(Self { k, gamma })
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl PressureLaw for Polytropic {
    fn kind(&self) -> &'static str {
        "polytropic"
    }

    fn pressure(&self, rho: f64) -> f64 {
        self.k * rho.powf(self.gamma)
    }

    fn derivative(&self, rho: f64) -> f64 {
        self.k * self.gamma * rho.powf(self.gamma - 1.0)
    }

    fn potential(&self, rho: f64) -> f64 {
        self.k * rho.powf(self.gamma) / (self.gamma - 1.0)
    }

    fn above_existence_threshold(&self) -> Option<bool> {
        Some(self.gamma > EXISTENCE_GAMMA_THRESHOLD)
    }
}

/// Monotone piecewise-linear law through `(rho, p)` breakpoints.
///
/// Below the first breakpoint the pressure is clamped to its first value
/// (with a one-time warning); above the last one the final segment is
/// continued linearly.
#[derive(Debug)]
pub struct TabulatedMonotone {
    rho: Vec<f64>,
    p: Vec<f64>,
    /// `∫_{rho_0}^{rho_m} p(s)/s² ds` at every breakpoint.
    cumulative: Vec<f64>,
    /// `∫_0^{rho_0} p(s)/s² ds` for the power-law tail through the first segment.
    tail: f64,
    warned: AtomicBool,
}

const QUAD_TOL: f64 = 1e-13;
const QUAD_MAX_DEPTH: u32 = 48;

impl TabulatedMonotone {
    pub fn new(rho: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if rho.len() != p.len() {
            return Err(Error::Config(format!(
                "pressure table has {} densities but {} pressures",
                rho.len(),
                p.len()
            )));
        }
        if rho.len() < 2 {
            return Err(Error::Config(
                "pressure table needs at least two breakpoints".into(),
            ));
        }
        if rho.iter().chain(p.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "pressure table entries must be finite".into(),
            ));
        }
        if !(rho[0] > 0.0) {
            return Err(Error::Config(format!(
                "first table density must be positive, got {}",
                rho[0]
            )));
        }
        if let Some(w) = rho.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Config(format!(
                "table densities must be strictly increasing (breakpoint {})",
                w + 1
            )));
        }
        if let Some(w) = p.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Config(format!(
                "table pressures must be nondecreasing (breakpoint {})",
                w + 1
            )));
        }

        let tail = if p[0] > 0.0 && p[1] > p[0] {
            let gamma = (p[1] / p[0]).ln() / (rho[1] / rho[0]).ln();
            if gamma > 1.0 {
                p[0] / (rho[0] * (gamma - 1.0))
            } else {
                0.0
            }
        } else {
            0.0
        };

        let mut law = Self {
            cumulative: vec![0.0; rho.len()],
            rho,
            p,
            tail,
            warned: AtomicBool::new(false),
        };
        for m in 1..law.rho.len() {
            let seg = law.segment_integral(m - 1, law.rho[m - 1], law.rho[m]);
            law.cumulative[m] = law.cumulative[m - 1] + seg;
        }
        Ok(law)
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rho.iter().copied().zip(self.p.iter().copied())
    }

    /// Index of the segment `[rho_m, rho_{m+1}]` used for `rho >= rho_0`.
    fn segment(&self, rho: f64) -> usize {
        let idx = self.rho.partition_point(|&r| r <= rho);
        idx.saturating_sub(1).min(self.rho.len() - 2)
    }

    fn linear(&self, m: usize, rho: f64) -> f64 {
        let (r0, r1) = (self.rho[m], self.rho[m + 1]);
        let (p0, p1) = (self.p[m], self.p[m + 1]);
        p0 + (p1 - p0) * (rho - r0) / (r1 - r0)
    }

    fn slope(&self, m: usize) -> f64 {
        (self.p[m + 1] - self.p[m]) / (self.rho[m + 1] - self.rho[m])
    }

    fn segment_integral(&self, m: usize, a: f64, b: f64) -> f64 {
        let f = |s: f64| self.linear(m, s) / (s * s);
        adaptive_simpson(&f, a, b, QUAD_TOL * (1.0 + f(a).abs()), QUAD_MAX_DEPTH)
    }

    fn warn_clamp(&self, rho: f64) {
        if !self.warned.swap(true, Ordering::Relaxed) {
            log::warn!(
                "density {rho:.6e} below the first pressure-table breakpoint {:.6e}; pressure clamped",
                self.rho[0]
            );
        }
    }
}

impl PressureLaw for TabulatedMonotone {
    fn kind(&self) -> &'static str {
        "tabulated"
    }

    fn pressure(&self, rho: f64) -> f64 {
        if rho < self.rho[0] {
            self.warn_clamp(rho);
            return self.p[0];
        }
        self.linear(self.segment(rho), rho)
    }

    fn derivative(&self, rho: f64) -> f64 {
        if rho < self.rho[0] {
            return 0.0;
        }
        self.slope(self.segment(rho))
    }

    fn potential(&self, rho: f64) -> f64 {
        let (r0, p0) = (self.rho[0], self.p[0]);
        if rho < r0 {
            // clamped pressure: ∫_{rho_0}^{rho} p_0/s² ds
            return rho * (self.tail + p0 * (1.0 / r0 - 1.0 / rho));
        }
        let m = self.segment(rho);
        let partial = self.segment_integral(m, self.rho[m], rho);
        rho * (self.tail + self.cumulative[m] + partial)
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)
}

/// Parameter bundle handed to pressure-law builders.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LawParams {
    pub k: Option<f64>,
    pub gamma: Option<f64>,
    pub table_rho: Vec<f64>,
    pub table_p: Vec<f64>,
}

pub type PressureRegistry = Registry<dyn PressureLaw, LawParams>;

/// Registry of pressure-law kinds: `polytropic` and `tabulated`.
pub fn pressure_registry() -> &'static PressureRegistry {
    static REGISTRY: OnceLock<PressureRegistry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg: PressureRegistry = Registry::new("pressure law");
        reg.register("polytropic", "p = K rho^gamma (needs k, gamma)", |a: &LawParams| {
            let k = a
                .k
                .ok_or_else(|| Error::Config("polytropic law needs `k`".into()))?;
            let gamma = a
                .gamma
                .ok_or_else(|| Error::Config("polytropic law needs `gamma`".into()))?;
            Ok(Box::new(Polytropic::new(k, gamma)?) as Box<dyn PressureLaw>)
        });
        reg.register(
            "tabulated",
            "monotone piecewise-linear table (needs rho, p)",
            |a: &LawParams| {
                let law = TabulatedMonotone::new(a.table_rho.clone(), a.table_p.clone())?;
                Ok(Box::new(law) as Box<dyn PressureLaw>)
            },
        );
        reg
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squared_table(count: usize) -> TabulatedMonotone {
        let rho: Vec<f64> = (0..count)
            .map(|i| 0.5 + 3.5 * i as f64 / (count - 1) as f64)
            .collect();
        let p = rho.iter().map(|r| r * r).collect();
        TabulatedMonotone::new(rho, p).unwrap()
    }

    #[test]
    fn polytropic_values() {
        let law = Polytropic::new(1.0, 2.0).unwrap();
        assert_eq!(pressure_eval(&law, 2.0).unwrap(), 4.0);
        assert_eq!(pressure_eval(&law, 0.0).unwrap(), 0.0);
        let law = Polytropic::new(1.0, 1.4).unwrap();
        // 30-digit reference value of 1.7^1.4
        let expected = 2.101_979_566_625_167_3;
        assert!((pressure_eval(&law, 1.7).unwrap() - expected).abs() < 1e-14);
        assert_eq!(law.above_existence_threshold(), Some(false));
    }

    #[test]
    fn negative_density_is_a_domain_error() {
        let law = Polytropic::new(1.0, 2.0).unwrap();
        assert!(matches!(pressure_eval(&law, -1e-3), Err(Error::Domain(_))));
        assert!(matches!(pressure_potential(&law, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn polytropic_potential_gauge() {
        let law = Polytropic::new(1.0, 2.0).unwrap();
        assert_eq!(pressure_potential(&law, 3.0).unwrap(), 9.0);
        assert_eq!(pressure_potential(&law, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn invalid_polytropic_parameters() {
        let err = Polytropic::new(-1.0, 1.0).unwrap_err().to_string();
        assert!(err.contains("K must be positive") && err.contains("gamma must exceed 1"));
    }

    #[test]
    fn tabulated_potential_matches_closed_form_of_square_law() {
        let law = squared_table(141);
        // p = rho^2 is reproduced exactly at breakpoints; P(3) = 9 for the
        // exact law, the piecewise-linear interpolant is O(h²) away.
        let v = pressure_potential(&law, 3.0).unwrap();
        assert!((v - 9.0).abs() < 1e-3, "{v}");
        // exact per-segment integral of (a + b s)/s² as an independent route
        let exact_segments: f64 = law
            .rho
            .windows(2)
            .zip(law.p.windows(2))
            .map(|(r, p)| {
                let b = (p[1] - p[0]) / (r[1] - r[0]);
                let a = p[0] - b * r[0];
                (r[0], r[1], a, b)
            })
            .take_while(|(r0, _, _, _)| *r0 < 3.0)
            .map(|(r0, r1, a, b)| {
                let r1 = r1.min(3.0);
                a * (1.0 / r0 - 1.0 / r1) + b * (r1 / r0).ln()
            })
            .sum();
        let gauge = law.p[0] / (law.rho[0] * (2.0 - 1.0));
        assert!((v - 3.0 * (gauge + exact_segments)).abs() < 1e-11);
    }

    #[test]
    fn tabulated_satisfies_potential_pressure_relation() {
        let law = squared_table(9);
        for &rho in &[0.7, 1.3, 2.9, 3.99] {
            let h = 1e-6;
            let dp = (law.potential(rho + h) - law.potential(rho - h)) / (2.0 * h);
            assert!((rho * dp - law.potential(rho) - law.pressure(rho)).abs() < 1e-6);
        }
    }

    #[test]
    fn tabulated_extrapolation_policy() {
        let law = TabulatedMonotone::new(vec![1.0, 2.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(law.pressure(0.5), 1.0);
        assert_eq!(law.derivative(0.5), 0.0);
        assert_eq!(law.pressure(3.0), 5.0);
        assert_eq!(law.pressure(1.5), 2.0);
    }

    #[test]
    fn tabulated_rejects_non_monotone_tables() {
        assert!(TabulatedMonotone::new(vec![1.0, 2.0, 2.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(TabulatedMonotone::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 1.5]).is_err());
        assert!(TabulatedMonotone::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(TabulatedMonotone::new(vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn registry_builds_both_kinds() {
        let reg = pressure_registry();
        let poly = reg
            .build(
                "polytropic",
                &LawParams {
                    k: Some(2.0),
                    gamma: Some(2.0),
                    ..Default::default()
                },
            )
            .unwrap();
        assert_eq!(poly.pressure(1.5), 4.5);
        let tab = reg
            .build(
                "tabulated",
                &LawParams {
                    table_rho: vec![1.0, 2.0],
                    table_p: vec![0.0, 1.0],
                    ..Default::default()
                },
            )
            .unwrap();
        assert_eq!(tab.kind(), "tabulated");
        assert!(reg.build("stiffened", &LawParams::default()).is_err());
    }
}
