//! Manufactured solutions: analytic `(rho_i, u_i)` and the body force that
//! makes them exact solutions of the chosen model.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::params::{BodyForce, MixtureParams};
use crate::model::pressure::PressureLaw;
use crate::model::variant::ModelVariant;
use crate::registry::Registry;
use crate::state::MixtureState;

/// Values and derivatives of one constituent at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub rho: f64,
    pub rho_t: f64,
    pub rho_x: f64,
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
}

pub trait ManufacturedCase: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn jet(&self, i: usize, x: f64, t: f64) -> Jet;

    /// Whether the fields satisfy the unforced continuity equation of `variant`.
    fn satisfies_continuity(&self, variant: ModelVariant) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseArgs {
    pub n: usize,
    pub length: f64,
}

#[derive(Debug)]
struct Constant;

impl ManufacturedCase for Constant {
    fn name(&self) -> &'static str {
        "constant"
    }

    fn jet(&self, i: usize, _x: f64, _t: f64) -> Jet {
        Jet {
            rho: 1.0 + 0.25 * i as f64,
            u: 0.5,
            ..Jet::default()
        }
    }

    fn satisfies_continuity(&self, _variant: ModelVariant) -> bool {
        true
    }
}

/// `rho = 1`, `u = sin(kx) e^{-t}`; momentum only.
#[derive(Debug)]
struct SineDecay {
    k: f64,
}

impl ManufacturedCase for SineDecay {
    fn name(&self) -> &'static str {
        "sine-decay"
    }

    fn jet(&self, _i: usize, x: f64, t: f64) -> Jet {
        let (s, c) = (self.k * x).sin_cos();
        let e = (-t).exp();
        Jet {
            rho: 1.0,
            u: s * e,
            u_t: -s * e,
            u_x: self.k * c * e,
            u_xx: -self.k * self.k * s * e,
            ..Jet::default()
        }
    }

    fn satisfies_continuity(&self, _variant: ModelVariant) -> bool {
        false
    }
}

/// Travelling density wave `rho = 1 + alpha cos(kx - omega t)` with momentum
/// `rho w = (omega / k) alpha cos(kx - omega t)`, which solves the continuity
/// equation exactly. The `slip` variant adds `delta_i sin(kx - omega t)` to
/// the constituent velocities with `Σ delta_i = 0`, leaving the average
/// velocity unchanged.
#[derive(Debug)]
struct TravellingWave {
    k: f64,
    omega: f64,
    alpha: f64,
    slip: Vec<f64>,
}

impl TravellingWave {
    fn new(args: &CaseArgs, slip: bool) -> Self {
        let n = args.n as f64;
        Self {
            k: TAU / args.length,
            omega: TAU / args.length,
            alpha: 0.2,
            slip: (0..args.n)
                .map(|i| if slip { 0.1 * (i as f64 - 0.5 * (n - 1.0)) } else { 0.0 })
                .collect(),
        }
    }
}

impl ManufacturedCase for TravellingWave {
    fn name(&self) -> &'static str {
        if self.slip.iter().any(|&d| d != 0.0) {
            "travelling-wave-slip"
        } else {
            "travelling-wave"
        }
    }

    fn jet(&self, i: usize, x: f64, t: f64) -> Jet {
        let (k, a, c) = (self.k, self.alpha, self.omega / self.k);
        let (s, co) = (k * x - self.omega * t).sin_cos();
        let rho = 1.0 + a * co;
        let rho_x = -a * k * s;
        let rho_xx = -a * k * k * co;
        let rho_t = a * self.omega * s;
        let m = c * a * co;
        let m_x = -c * a * k * s;
        let m_xx = -c * a * k * k * co;
        let m_t = c * a * self.omega * s;
        let num = m_x * rho - m * rho_x;
        let num_x = m_xx * rho - m * rho_xx;
        let d = self.slip.get(i).copied().unwrap_or(0.0);
        Jet {
            rho,
            rho_t,
            rho_x,
            u: m / rho + d * s,
            u_t: (m_t * rho - m * rho_t) / (rho * rho) - d * self.omega * co,
            u_x: num / (rho * rho) + d * k * co,
            u_xx: (num_x * rho - 2.0 * num * rho_x) / (rho * rho * rho) - d * k * k * s,
        }
    }

    fn satisfies_continuity(&self, variant: ModelVariant) -> bool {
        variant == ModelVariant::Modified || self.slip.iter().all(|&d| d == 0.0)
    }
}

pub type CaseRegistry = Registry<dyn ManufacturedCase, CaseArgs>;

pub fn case_registry() -> &'static CaseRegistry {
    static REGISTRY: OnceLock<CaseRegistry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg: CaseRegistry = Registry::new("manufactured case");
        reg.register("constant", "uniform densities 1 + i/4, common velocity 1/2", |_| {
            Ok(Box::new(Constant) as Box<dyn ManufacturedCase>)
        });
        reg.register("sine-decay", "rho = 1, u = sin(2 pi x / L) e^-t (momentum only)", |a| {
            Ok(Box::new(SineDecay { k: TAU / a.length }) as Box<dyn ManufacturedCase>)
        });
        reg.register("travelling-wave", "mass-conserving density wave, equal velocities", |a| {
            Ok(Box::new(TravellingWave::new(a, false)) as Box<dyn ManufacturedCase>)
        });
        reg.register(
            "travelling-wave-slip",
            "density wave with relative constituent slip (modified model)",
            |a| Ok(Box::new(TravellingWave::new(a, true)) as Box<dyn ManufacturedCase>),
        );
        reg
    })
}

pub fn manufactured_case(name: &str, n: usize, length: f64) -> Result<Arc<dyn ManufacturedCase>> {
    if !(length > 0.0) || n == 0 {
        return Err(Error::Config(format!(
            "manufactured case needs N >= 1 and a positive length, got N = {n}, L = {length}"
        )));
    }
    case_registry().build(name, &CaseArgs { n, length }).map(Arc::from)
}

#[derive(Clone)]
struct ForcingData {
    case: Arc<dyn ManufacturedCase>,
    variant: ModelVariant,
    nu: DMatrix<f64>,
    laws: Vec<Arc<dyn PressureLaw>>,
    exchange: Option<DMatrix<f64>>,
}

impl ForcingData {
    fn new(case: Arc<dyn ManufacturedCase>, params: &MixtureParams) -> Self {
        let exchange = if params.model.exchange_enabled() {
            params.active_exchange().map(|a| a.matrix().clone())
        } else {
            None
        };
        Self {
            case,
            variant: params.model.variant(),
            nu: params.visc.nu().clone(),
            laws: params.pressure.clone(),
            exchange,
        }
    }

    fn forcing(&self, i: usize, x: f64, t: f64) -> f64 {
        let n = self.nu.nrows();
        let jets: Vec<Jet> = (0..n).map(|k| self.case.jet(k, x, t)).collect();
        let me = jets[i];
        let (w, w_x) = match self.variant {
            ModelVariant::Original => (me.u, me.u_x),
            ModelVariant::Modified => (
                jets.iter().map(|j| j.u).sum::<f64>() / n as f64,
                jets.iter().map(|j| j.u_x).sum::<f64>() / n as f64,
            ),
        };
        let p_x = match self.variant {
            ModelVariant::Original => self.laws[i].derivative(me.rho) * me.rho_x,
            ModelVariant::Modified => {
                let total: f64 = jets.iter().map(|j| j.rho).sum();
                self.laws[0].derivative(total) * jets.iter().map(|j| j.rho_x).sum::<f64>()
            }
        };
        let flux_x = me.rho_x * w * me.u + me.rho * w_x * me.u + me.rho * w * me.u_x;
        let viscous: f64 = (0..n).map(|k| self.nu[(i, k)] * jets[k].u_xx).sum();
        let exchange: f64 = self.exchange.as_ref().map_or(0.0, |a| {
            (0..n)
                .filter(|&k| k != i)
                .map(|k| a[(i, k)] * (jets[k].u - me.u))
                .sum()
        });
        let rhs = me.rho_t * me.u + me.rho * me.u_t + flux_x + p_x - viscous - exchange;
        rhs / me.rho
    }
}

/// Body force `f_i(x, t)` under which the case solves the momentum equations.
pub fn manufactured_forcing(case: Arc<dyn ManufacturedCase>, params: &MixtureParams) -> BodyForce {
    let data = ForcingData::new(case, params);
    BodyForce::new(move |i, x, t| data.forcing(i, x, t))
}

/// Cell-centred samples of the case at time `t`.
pub fn sample_case(case: &dyn ManufacturedCase, variant: ModelVariant, n: usize, x: &[f64], t: f64) -> Result<MixtureState> {
    let rho = (0..n)
        .map(|i| x.iter().map(|&x| case.jet(i, x, t).rho).collect())
        .collect();
    let u = (0..n)
        .map(|i| x.iter().map(|&x| case.jet(i, x, t).u).collect())
        .collect();
    MixtureState::new(variant, rho, u)
}

/// Fourier derivative of order `order` of periodic samples on `[0, length)`.
pub fn spectral_derivative(f: &[f64], length: f64, order: u32) -> Vec<f64> {
    let n = f.len();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward.process(&mut buf);
    for (m, c) in buf.iter_mut().enumerate() {
        let wave = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
        if n.is_multiple_of(2) && m == n / 2 && order % 2 == 1 {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let ik = Complex64::new(0.0, TAU * wave / length);
        *c *= ik.powu(order);
    }
    inverse.process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// Max-norm residuals of the forced equations at time `t`, with spatial
/// derivatives taken spectrally on `n_points` periodic samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedResidual {
    /// `None` when the case does not satisfy continuity for this model.
    pub continuity: Option<f64>,
    pub momentum: f64,
}

pub fn manufactured_residual(
    case: &Arc<dyn ManufacturedCase>,
    params: &MixtureParams,
    length: f64,
    n_points: usize,
    t: f64,
) -> ManufacturedResidual {
    let n = params.n();
    let variant = params.model.variant();
    let force = manufactured_forcing(case.clone(), params);
    let x: Vec<f64> = (0..n_points)
        .map(|j| j as f64 * length / n_points as f64)
        .collect();
    let jets: Vec<Vec<Jet>> = (0..n)
        .map(|i| x.iter().map(|&x| case.jet(i, x, t)).collect())
        .collect();
    let rho: Vec<Vec<f64>> = jets.iter().map(|j| j.iter().map(|j| j.rho).collect()).collect();
    let u: Vec<Vec<f64>> = jets.iter().map(|j| j.iter().map(|j| j.u).collect()).collect();
    let mut w = vec![vec![0.0; n_points]; n];
    let mut p = vec![vec![0.0; n_points]; n];
    let (mut rc, mut uc, mut wc, mut pc) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for j in 0..n_points {
        MixtureState::gather(&rho, j, &mut rc);
        MixtureState::gather(&u, j, &mut uc);
        params.model.convection_velocity(&uc, &mut wc);
        params.model.pressures(&rc, &params.pressure, &mut pc);
        for i in 0..n {
            w[i][j] = wc[i];
            p[i][j] = pc[i];
        }
    }
    let u_xx: Vec<Vec<f64>> = u.iter().map(|u| spectral_derivative(u, length, 2)).collect();
    let nu = params.visc.nu();
    let exchange = if params.model.exchange_enabled() {
        params.active_exchange()
    } else {
        None
    };
    let mut continuity = 0.0f64;
    let mut momentum = 0.0f64;
    for i in 0..n {
        let mass_flux: Vec<f64> = (0..n_points).map(|j| rho[i][j] * w[i][j]).collect();
        let mass_div = spectral_derivative(&mass_flux, length, 1);
        let mom_flux: Vec<f64> = (0..n_points).map(|j| mass_flux[j] * u[i][j]).collect();
        let mom_div = spectral_derivative(&mom_flux, length, 1);
        let p_x = spectral_derivative(&p[i], length, 1);
        for j in 0..n_points {
            let jet = jets[i][j];
            continuity = continuity.max((jet.rho_t + mass_div[j]).abs());
            let viscous: f64 = (0..n).map(|k| nu[(i, k)] * u_xx[k][j]).sum();
            let z = exchange.map_or(0.0, |a| {
                (0..n)
                    .filter(|&k| k != i)
                    .map(|k| a.matrix()[(i, k)] * (u[k][j] - u[i][j]))
                    .sum()
            });
            let lhs = jet.rho_t * jet.u + jet.rho * jet.u_t + mom_div[j] + p_x[j] - viscous - z;
            momentum = momentum.max((lhs - jet.rho * force.eval(i, x[j], t)).abs());
        }
    }
    ManufacturedResidual {
        continuity: case.satisfies_continuity(variant).then_some(continuity),
        momentum,
    }
}
