use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::model::variant::ModelVariant;

/// Per-constituent cell-centred values, indexed `[constituent][cell]`.
pub type Field1D = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    pub variant: ModelVariant,
    pub rho: Field1D,
    pub u: Field1D,
}

impl MixtureState {
    pub fn new(variant: ModelVariant, rho: Field1D, u: Field1D) -> Result<Self> {
        let state = Self { variant, rho, u };
        state.check_shape()?;
        Ok(state)
    }

    /// Spatially uniform state.
    pub fn uniform(variant: ModelVariant, grid: &Grid1D, rho: &[f64], u: &[f64]) -> Result<Self> {
        let n = grid.n_cells();
        Self::new(
            variant,
            rho.iter().map(|&r| vec![r; n]).collect(),
            u.iter().map(|&v| vec![v; n]).collect(),
        )
    }

    pub fn n_constituents(&self) -> usize {
        self.rho.len()
    }

    pub fn n_cells(&self) -> usize {
        self.rho.first().map_or(0, Vec::len)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.rho.len();
        if n == 0 || self.u.len() != n {
            return Err(Error::Config(format!(
                "state needs matching non-empty density and velocity sets, got {} and {}",
                n,
                self.u.len()
            )));
        }
        let cells = self.n_cells();
        if self.rho.iter().chain(&self.u).any(|f| f.len() != cells) {
            return Err(Error::Config("state fields have unequal lengths".into()));
        }
        for (i, field) in self.rho.iter().enumerate() {
            if let Some(j) = field.iter().position(|&r| !(r >= 0.0)) {
                return Err(Error::NegativeDensity {
                    constituent: i,
                    cell: j,
                    value: field[j],
                });
            }
        }
        if self.u.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("velocities must be finite".into()));
        }
        Ok(())
    }

    /// Checks the state against a grid and constituent count.
    pub fn check_against(&self, grid: &Grid1D, n: usize) -> Result<()> {
        self.check_shape()?;
        if self.n_constituents() != n || self.n_cells() != grid.n_cells() {
            return Err(Error::Config(format!(
                "state is {} constituents x {} cells, expected {} x {}",
                self.n_constituents(),
                self.n_cells(),
                n,
                grid.n_cells()
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.rho.iter().chain(&self.u).flatten().all(|v| v.is_finite())
    }

    /// Values of all constituents at one cell.
    pub fn gather(field: &Field1D, j: usize, out: &mut [f64]) {
        for (o, f) in out.iter_mut().zip(field) {
            *o = f[j];
        }
    }
}
