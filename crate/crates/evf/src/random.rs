//! Seeded smooth random fields with a Gaussian spectral taper.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;

use multiflow_core::{Error, Result};

use crate::field::{check_grid_size, PeriodicField2D, SymTensor2D, VectorField2D};
use crate::spectral::SpectralOps;

/// Mode amplitudes `exp(-|k|² / (2 sigma²))` for `|k| <= k_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taper {
    pub k_max: f64,
    pub sigma: f64,
}

impl Default for Taper {
    /// Smooth enough that products are resolved on `n = 256` but leave a
    /// small aliasing error on `n = 128`.
    fn default() -> Self {
        Self {
            k_max: 60.0,
            sigma: 12.0,
        }
    }
}

/// Draws fields in a reproducible order from one seed.
pub struct FieldSampler {
    rng: ChaCha8Rng,
    taper: Taper,
}

impl FieldSampler {
    pub fn new(seed: u64, taper: Taper) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            taper,
        }
    }

    /// A random field sampled on an `n x n` grid. The Fourier coefficients
    /// are drawn on a fixed lattice `|k| <= k_max`, so the same seed gives
    /// the same continuous field at every resolution.
    pub fn scalar(&mut self, ops: &SpectralOps) -> Result<PeriodicField2D> {
        let n = ops.n();
        check_grid_size(n)?;
        let km = self.taper.k_max.floor() as i64;
        if 2 * km >= n as i64 {
            return Err(Error::Config(format!(
                "k_max = {} is not resolved on n = {n}",
                self.taper.k_max
            )));
        }
        let mut spec = vec![Complex64::new(0.0, 0.0); n * n];
        let idx = |k: i64| k.rem_euclid(n as i64) as usize;
        // half-plane ky > 0, or ky = 0 and kx > 0; conjugates fill the rest
        for ky in 0..=km {
            for kx in -km..=km {
                if ky == 0 && kx <= 0 {
                    continue;
                }
                let k2 = (kx * kx + ky * ky) as f64;
                let re: f64 = StandardNormal.sample(&mut self.rng);
                let im: f64 = StandardNormal.sample(&mut self.rng);
                if k2 > self.taper.k_max * self.taper.k_max {
                    continue;
                }
                let amp = (-k2 / (2.0 * self.taper.sigma * self.taper.sigma)).exp()
                    * (n * n) as f64
                    * 0.5;
                let c = Complex64::new(re, im) * amp;
                spec[idx(ky) * n + idx(kx)] = c;
                spec[idx(-ky) * n + idx(-kx)] = c.conj();
            }
        }
        let mean: f64 = StandardNormal.sample(&mut self.rng);
        spec[0] = Complex64::new(mean * (n * n) as f64, 0.0);
        Ok(ops.inverse(spec))
    }

    pub fn vector(&mut self, ops: &SpectralOps) -> Result<VectorField2D> {
        Ok(VectorField2D::new(self.scalar(ops)?, self.scalar(ops)?))
    }

    pub fn tensor(&mut self, ops: &SpectralOps) -> Result<SymTensor2D> {
        Ok(SymTensor2D {
            xx: self.scalar(ops)?,
            xy: self.scalar(ops)?,
            yy: self.scalar(ops)?,
        })
    }
}
