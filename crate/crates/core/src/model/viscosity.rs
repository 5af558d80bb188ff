//! Viscosity matrices `M = {mu_ij}`, `Λ = {lambda_ij}` and the derived total
//! matrix `N = Λ + 2M` and `H = Λ + (2/3)M`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative tolerance for the semidefiniteness test on `sym(H)`.
pub const PSD_RELATIVE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ViscosityMatrices {
    mu: DMatrix<f64>,
    lam: DMatrix<f64>,
    nu: DMatrix<f64>,
    h: DMatrix<f64>,
}

/// Sparsity pattern of the total viscosity matrix `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixStructure {
    Diagonal,
    UpperTriangular,
    LowerTriangular,
    Full,
}

impl MatrixStructure {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixStructure::Diagonal => "diagonal",
            MatrixStructure::UpperTriangular => "upper-triangular",
            MatrixStructure::LowerTriangular => "lower-triangular",
            MatrixStructure::Full => "full",
        }
    }
}

impl ViscosityMatrices {
    pub fn new(mu: DMatrix<f64>, lam: DMatrix<f64>) -> Result<Self> {
        if mu.nrows() == 0 || !mu.is_square() {
            return Err(Error::Config(format!(
                "mu must be a non-empty square matrix, got {}x{}",
                mu.nrows(),
                mu.ncols()
            )));
        }
        if lam.shape() != mu.shape() {
            return Err(Error::Config(format!(
                "lambda is {}x{} but mu is {}x{}",
                lam.nrows(),
                lam.ncols(),
                mu.nrows(),
                mu.ncols()
            )));
        }
        if let Some(bad) = mu.iter().chain(lam.iter()).find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "viscosity entries must be finite, found {bad}"
            )));
        }
        let nu = &lam + &mu * 2.0;
        let h = &lam + &mu * (2.0 / 3.0);
        Ok(Self { mu, lam, nu, h })
    }

    /// Builds the matrices from row-major lists for `n` constituents.
    pub fn from_row_major(n: usize, mu: &[f64], lam: &[f64]) -> Result<Self> {
        if mu.len() != n * n || lam.len() != n * n {
            return Err(Error::Config(format!(
                "expected {} entries for an {n}x{n} matrix, got mu: {}, lambda: {}",
                n * n,
                mu.len(),
                lam.len()
            )));
        }
        Self::new(
            DMatrix::from_row_slice(n, n, mu),
            DMatrix::from_row_slice(n, n, lam),
        )
    }

    /// Diagonal matrices with the same `mu`, `lambda` for every constituent.
    pub fn diagonal(n: usize, mu: f64, lam: f64) -> Result<Self> {
        Self::new(
            DMatrix::from_diagonal_element(n, n, mu),
            DMatrix::from_diagonal_element(n, n, lam),
        )
    }

    pub fn n(&self) -> usize {
        self.mu.nrows()
    }

    pub fn mu(&self) -> &DMatrix<f64> {
        &self.mu
    }

    pub fn lam(&self) -> &DMatrix<f64> {
        &self.lam
    }

    /// Total viscosity matrix `N = Λ + 2M`.
    pub fn nu(&self) -> &DMatrix<f64> {
        &self.nu
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    #[inline]
    pub fn nu_at(&self, i: usize, k: usize) -> f64 {
        self.nu[(i, k)]
    }

    pub fn is_symmetric(&self) -> bool {
        self.mu == self.mu.transpose() && self.lam == self.lam.transpose()
    }

    pub fn structure(&self) -> MatrixStructure {
        let n = self.n();
        let mut upper = true;
        let mut lower = true;
        for i in 0..n {
            for k in 0..n {
                if self.nu[(i, k)] != 0.0 {
                    if k < i {
                        upper = false;
                    }
                    if k > i {
                        lower = false;
                    }
                }
            }
        }
        match (upper, lower) {
            (true, true) => MatrixStructure::Diagonal,
            (true, false) => MatrixStructure::UpperTriangular,
            (false, true) => MatrixStructure::LowerTriangular,
            (false, false) => MatrixStructure::Full,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Smallest eigenvalue of `(M + Mᵀ)/2`; must be strictly positive.
    pub min_eig_sym_mu: f64,
    /// Smallest eigenvalue of `(H + Hᵀ)/2`; must be `>= -psd_tolerance`.
    pub min_eig_sym_h: f64,
    pub psd_tolerance: f64,
    /// Whether `M` and `Λ` are themselves symmetric.
    pub symmetric: bool,
    pub structure: MatrixStructure,
    pub nu: DMatrix<f64>,
}

impl AdmissibilityReport {
    /// Human-readable reasons for inadmissibility, empty when admissible.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.min_eig_sym_mu > 0.0) {
            out.push(format!(
                "sym(mu) must be positive definite: smallest eigenvalue {:.6e}",
                self.min_eig_sym_mu
            ));
        }
        if !(self.min_eig_sym_h >= -self.psd_tolerance) {
            out.push(format!(
                "sym(H) = sym(lambda + 2/3 mu) must be positive semidefinite: smallest eigenvalue {:.6e}",
                self.min_eig_sym_h
            ));
        }
        out
    }
}

pub fn symmetric_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

pub fn min_symmetric_eigenvalue(a: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(symmetric_part(a))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Classifies the matrices: `sym(M) > 0` and `sym(H) >= 0`.
pub fn validate_viscosity(visc: &ViscosityMatrices) -> AdmissibilityReport {
    let sym_mu = symmetric_part(visc.mu());
    let sym_h = symmetric_part(visc.h());
    let psd_tolerance = PSD_RELATIVE_TOL * sym_mu.norm().max(sym_h.norm());
    let min_eig_sym_mu = min_symmetric_eigenvalue(&sym_mu);
    let min_eig_sym_h = min_symmetric_eigenvalue(&sym_h);
    AdmissibilityReport {
        admissible: min_eig_sym_mu > 0.0 && min_eig_sym_h >= -psd_tolerance,
        min_eig_sym_mu,
        min_eig_sym_h,
        psd_tolerance,
        symmetric: visc.is_symmetric(),
        structure: visc.structure(),
        nu: visc.nu().clone(),
    }
}
