use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use multiflow_core::{Error, Result};

/// Real samples on an `n x n` grid over `[0, 2 pi)²`, stored with `x`
/// varying fastest: value `(i, j)` sits at `data[j * n + i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField2D {
    n: usize,
    data: Vec<f64>,
    mean: f64,
}

pub fn check_grid_size(n: usize) -> Result<()> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::Config(format!(
            "grid size must be a power of two >= 16, got {n}"
        )));
    }
    Ok(())
}

impl PeriodicField2D {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        check_grid_size(n)?;
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("field values must be finite".into()));
        }
        Ok(Self::from_vec(n, data))
    }

    /// Unchecked constructor for data produced by this crate.
    pub(crate) fn from_vec(n: usize, data: Vec<f64>) -> Self {
        let mean = data.iter().sum::<f64>() / data.len() as f64;
        Self { n, data, mean }
    }

    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_grid_size(n)?;
        let h = spacing(n);
        let data = (0..n * n)
            .map(|idx| f((idx % n) as f64 * h, (idx / n) as f64 * h))
            .collect();
        Self::new(n, data)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(n, vec![c; n * n])
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_vec(self.n, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "fields live on different grids");
        Self::from_vec(
            self.n,
            self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    /// `∫ a b` by the periodic trapezoidal rule.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "fields live on different grids");
        let h = spacing(self.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum::<f64>() * h * h
    }

    pub fn integral(&self) -> f64 {
        let h = spacing(self.n);
        self.data.iter().sum::<f64>() * h * h
    }

    /// Discrete `L²` norm.
    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn spacing(n: usize) -> f64 {
    TAU / n as f64
}

impl Add for &PeriodicField2D {
    type Output = PeriodicField2D;
    fn add(self, rhs: Self) -> PeriodicField2D {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PeriodicField2D {
    type Output = PeriodicField2D;
    fn sub(self, rhs: Self) -> PeriodicField2D {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &PeriodicField2D {
    type Output = PeriodicField2D;
    fn mul(self, rhs: Self) -> PeriodicField2D {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Neg for &PeriodicField2D {
    type Output = PeriodicField2D;
    fn neg(self) -> PeriodicField2D {
        self.map(|v| -v)
    }
}

/// Two-component vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    pub x: PeriodicField2D,
    pub y: PeriodicField2D,
}

impl VectorField2D {
    pub fn new(x: PeriodicField2D, y: PeriodicField2D) -> Self {
        assert_eq!(x.n(), y.n(), "components live on different grids");
        Self { x, y }
    }

    /// Scalar times vector.
    pub fn scaled_by(&self, s: &PeriodicField2D) -> Self {
        Self::new(s * &self.x, s * &self.y)
    }

    /// `∫ v · w`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.x.inner(&other.x) + self.y.inner(&other.y)
    }

    pub fn dot(&self, other: &Self) -> PeriodicField2D {
        &(&self.x * &other.x) + &(&self.y * &other.y)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }
}

/// Symmetric `2 x 2` tensor field.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor2D {
    pub xx: PeriodicField2D,
    pub xy: PeriodicField2D,
    pub yy: PeriodicField2D,
}

impl SymTensor2D {
    pub fn components(&self) -> [&PeriodicField2D; 3] {
        [&self.xx, &self.xy, &self.yy]
    }

    pub fn trace(&self) -> PeriodicField2D {
        &self.xx + &self.yy
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&PeriodicField2D, &PeriodicField2D) -> PeriodicField2D) -> Self {
        Self {
            xx: f(&self.xx, &other.xx),
            xy: f(&self.xy, &other.xy),
            yy: f(&self.yy, &other.yy),
        }
    }

    pub fn map(&self, f: impl Fn(&PeriodicField2D) -> PeriodicField2D) -> Self {
        Self {
            xx: f(&self.xx),
            xy: f(&self.xy),
            yy: f(&self.yy),
        }
    }

    /// Matrix-vector product `T v`.
    pub fn apply(&self, v: &VectorField2D) -> VectorField2D {
        VectorField2D::new(
            &(&self.xx * &v.x) + &(&self.xy * &v.y),
            &(&self.xy * &v.x) + &(&self.yy * &v.y),
        )
    }

    /// Pointwise contraction `T : S` counting the off-diagonal entry twice.
    pub fn contract(&self, other: &Self) -> PeriodicField2D {
        let diag = &(&self.xx * &other.xx) + &(&self.yy * &other.yy);
        &diag + &(&self.xy * &other.xy).scale(2.0)
    }

    /// Frobenius `L²` norm.
    pub fn norm(&self) -> f64 {
        self.contract(self).integral().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.components()
            .iter()
            .map(|c| c.max_abs())
            .fold(0.0, f64::max)
    }
}
