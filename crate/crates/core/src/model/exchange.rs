//! Inter-constituent momentum exchange `J_i = Σ_j a_ij (u_j - u_i)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeMatrix {
    a: DMatrix<f64>,
}

impl ExchangeMatrix {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() || a.nrows() == 0 {
            return Err(Error::Config(format!(
                "exchange matrix must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if let Some(v) = a.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "exchange entries must be finite, found {v}"
            )));
        }
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if i != j && a[(i, j)] < 0.0 {
                    return Err(Error::Config(format!(
                        "exchange intensity a[{i}][{j}] = {} must be nonnegative",
                        a[(i, j)]
                    )));
                }
            }
        }
        Ok(Self { a })
    }

    pub fn from_row_major(n: usize, a: &[f64]) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::Config(format!(
                "expected {} exchange entries for N = {n}, got {}",
                n * n,
                a.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, a))
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// True when every off-diagonal intensity is zero.
    pub fn is_inert(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.a[(i, j)] == 0.0))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..i).all(|j| self.a[(i, j)] == self.a[(j, i)]))
    }

    /// Generator `G` of `J = G u`: off-diagonal `a_ij`, diagonal `-Σ_{j≠i} a_ij`.
    pub fn generator(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                if i != j {
                    g[(i, j)] = self.a[(i, j)];
                    row += self.a[(i, j)];
                }
            }
            g[(i, i)] = -row;
        }
        g
    }

    /// Advances `rho_i du_i/dt = J_i(u)` over `dt` exactly with densities
    /// frozen, `u <- exp(dt R⁻¹ G) u`. Constituents flagged in `frozen` keep
    /// their velocity and do not exchange momentum.
    pub fn relax(&self, rho: &[f64], frozen: &[bool], u: &mut [f64], dt: f64) {
        let n = self.n();
        let mut m = self.generator();
        for i in 0..n {
            for j in 0..n {
                if frozen[i] || frozen[j] {
                    m[(i, j)] = 0.0;
                }
            }
        }
        // rebuild the diagonal so rows of the active block still sum to zero
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let row: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)]).sum();
            m[(i, i)] = -row;
            for j in 0..n {
                m[(i, j)] /= rho[i];
            }
        }
        let prop = (m * dt).exp();
        let out = prop * DVector::from_column_slice(u);
        u.copy_from_slice(out.as_slice());
    }
}

/// `J_i = Σ_j a_ij (u_j - u_i)`; the diagonal of `a` drops out.
pub fn momentum_exchange(u: &[f64], a: &ExchangeMatrix) -> Vec<f64> {
    let n = a.n();
    debug_assert_eq!(u.len(), n);
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| a.a[(i, j)] * (u[j] - u[i]))
                .sum()
        })
        .collect()
}
