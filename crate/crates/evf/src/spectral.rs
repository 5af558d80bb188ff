//! Fourier operators on the `n x n` torus.
//!
//! `Δ⁻¹` acts on the zero-mean part: the mean of its argument is dropped
//! and its output has zero mean. Mixed second-order and odd symbols vanish
//! on the Nyquist lines, where no conjugate partner mode exists.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use multiflow_core::Result;

use crate::field::{check_grid_size, PeriodicField2D, SymTensor2D, VectorField2D};

#[derive(Clone)]
pub struct SpectralOps {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Signed integer wavenumber of each index.
    wave: Vec<f64>,
}

impl std::fmt::Debug for SpectralOps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralOps").field("n", &self.n).finish()
    }
}

type Spectrum = Vec<Complex64>;

impl SpectralOps {
    pub fn new(n: usize) -> Result<Self> {
        check_grid_size(n)?;
        let mut planner = FftPlanner::new();
        let wave = (0..n)
            .map(|i| if i < n / 2 { i as f64 } else { i as f64 - n as f64 })
            .collect();
        Ok(Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            wave,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Convention note recorded in reports.
    pub fn convention(&self) -> &'static str {
        "zero-mean inverse Laplacian on the periodic square [0, 2pi)^2"
    }

    fn nyquist(&self, idx: usize) -> bool {
        idx == self.n / 2
    }

    fn transform(&self, buf: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        fft.process(buf);
        let mut t = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                t[i * n + j] = buf[j * n + i];
            }
        }
        fft.process(&mut t);
        for j in 0..n {
            for i in 0..n {
                buf[j * n + i] = t[i * n + j];
            }
        }
    }

    pub fn forward(&self, f: &PeriodicField2D) -> Spectrum {
        assert_eq!(f.n(), self.n, "field does not match the operator grid");
        let mut buf: Spectrum = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut buf, &self.forward);
        buf
    }

    pub fn inverse(&self, mut spec: Spectrum) -> PeriodicField2D {
        self.transform(&mut spec, &self.inverse);
        let scale = 1.0 / (self.n * self.n) as f64;
        PeriodicField2D::from_vec(self.n, spec.iter().map(|c| c.re * scale).collect())
    }

    /// Multiplies the spectrum of `f` by `symbol(kx, ky, i, j)`.
    fn apply(
        &self,
        spec: &Spectrum,
        symbol: impl Fn(f64, f64, usize, usize) -> Complex64,
    ) -> PeriodicField2D {
        let n = self.n;
        let out = spec
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let (i, j) = (idx % n, idx / n);
                c * symbol(self.wave[i], self.wave[j], i, j)
            })
            .collect();
        self.inverse(out)
    }

    pub fn inv_laplacian(&self, f: &PeriodicField2D) -> PeriodicField2D {
        self.apply(&self.forward(f), |kx, ky, _, _| {
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / k2, 0.0)
            }
        })
    }

    pub fn laplacian(&self, f: &PeriodicField2D) -> PeriodicField2D {
        self.apply(&self.forward(f), |kx, ky, _, _| {
            Complex64::new(-(kx * kx + ky * ky), 0.0)
        })
    }

    fn derivative(&self, spec: &Spectrum, along_x: bool) -> PeriodicField2D {
        self.apply(spec, |kx, ky, i, j| {
            let (k, idx) = if along_x { (kx, i) } else { (ky, j) };
            if self.nyquist(idx) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k)
            }
        })
    }

    pub fn dx(&self, f: &PeriodicField2D) -> PeriodicField2D {
        self.derivative(&self.forward(f), true)
    }

    pub fn dy(&self, f: &PeriodicField2D) -> PeriodicField2D {
        self.derivative(&self.forward(f), false)
    }

    pub fn gradient(&self, f: &PeriodicField2D) -> VectorField2D {
        let spec = self.forward(f);
        VectorField2D::new(self.derivative(&spec, true), self.derivative(&spec, false))
    }

    pub fn divergence(&self, v: &VectorField2D) -> PeriodicField2D {
        &self.dx(&v.x) + &self.dy(&v.y)
    }

    /// Symbol `ka kb / |k|²` of `∂a ∂b Δ⁻¹`.
    fn projector(&self, a: usize, b: usize) -> impl Fn(f64, f64, usize, usize) -> Complex64 + '_ {
        move |kx, ky, i, j| {
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let k = [kx, ky];
            if a != b && (self.nyquist(i) || self.nyquist(j)) {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(k[a] * k[b] / k2, 0.0)
        }
    }

    /// `R f = ∇⊗∇Δ⁻¹ f`.
    pub fn riesz_second(&self, f: &PeriodicField2D) -> SymTensor2D {
        let spec = self.forward(f);
        SymTensor2D {
            xx: self.apply(&spec, self.projector(0, 0)),
            xy: self.apply(&spec, self.projector(0, 1)),
            yy: self.apply(&spec, self.projector(1, 1)),
        }
    }

    /// `Q v = ∇Δ⁻¹ div v`, the gradient part of `v` without its mean.
    pub fn q_operator(&self, v: &VectorField2D) -> VectorField2D {
        let (sx, sy) = (self.forward(&v.x), self.forward(&v.y));
        let component = |a: usize| {
            &self.apply(&sx, self.projector(a, 0)) + &self.apply(&sy, self.projector(a, 1))
        };
        VectorField2D::new(component(0), component(1))
    }

    /// `div div S`.
    pub fn div_div(&self, s: &SymTensor2D) -> PeriodicField2D {
        let xx = self.apply(&self.forward(&s.xx), |kx, _, _, _| Complex64::new(-kx * kx, 0.0));
        let yy = self.apply(&self.forward(&s.yy), |_, ky, _, _| Complex64::new(-ky * ky, 0.0));
        let xy = self.dx(&self.dy(&s.xy)).scale(2.0);
        &(&xx + &yy) + &xy
    }

    /// `∇⊗v`, symmetrised.
    pub fn sym_gradient(&self, v: &VectorField2D) -> SymTensor2D {
        SymTensor2D {
            xx: self.dx(&v.x),
            xy: (&self.dy(&v.x) + &self.dx(&v.y)).scale(0.5),
            yy: self.dy(&v.y),
        }
    }
}
