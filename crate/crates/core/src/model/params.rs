use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::exchange::ExchangeMatrix;
use crate::model::pressure::PressureLaw;
use crate::model::variant::MixtureModel;
use crate::model::viscosity::{validate_viscosity, ViscosityMatrices};

type ForceFn = dyn Fn(usize, f64, f64) -> f64 + Send + Sync;

/// Per-constituent body force `f_i(x, t)`.
#[derive(Clone)]
pub struct BodyForce {
    f: Option<Arc<ForceFn>>,
}

impl BodyForce {
    pub fn zero() -> Self {
        Self { f: None }
    }

    /// `f(i, x, t)` for constituent `i`.
    pub fn new(f: impl Fn(usize, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Some(Arc::new(f)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_none()
    }

    #[inline]
    pub fn eval(&self, i: usize, x: f64, t: f64) -> f64 {
        match &self.f {
            Some(f) => f(i, x, t),
            None => 0.0,
        }
    }
}

impl fmt::Debug for BodyForce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_zero() { "BodyForce(zero)" } else { "BodyForce(fn)" })
    }
}

/// Everything that defines the continuum model apart from the state.
#[derive(Debug, Clone)]
pub struct MixtureParams {
    pub model: Arc<dyn MixtureModel>,
    pub visc: ViscosityMatrices,
    /// One law (common pressure) or one per constituent, as the model requires.
    pub pressure: Vec<Arc<dyn PressureLaw>>,
    pub exchange: Option<ExchangeMatrix>,
    pub body_force: BodyForce,
}

impl MixtureParams {
    pub fn new(
        model: Arc<dyn MixtureModel>,
        visc: ViscosityMatrices,
        pressure: Vec<Arc<dyn PressureLaw>>,
        exchange: Option<ExchangeMatrix>,
        body_force: BodyForce,
    ) -> Result<Self> {
        let params = Self {
            model,
            visc,
            pressure,
            exchange,
            body_force,
        };
        let problems = params.problems();
        if problems.is_empty() {
            Ok(params)
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    pub fn n(&self) -> usize {
        self.visc.n()
    }

    /// Consistency problems, including viscosity admissibility.
    pub fn problems(&self) -> Vec<String> {
        let mut out = self.model.check(self);
        if let Some(a) = &self.exchange {
            if a.n() != self.n() {
                out.push(format!(
                    "exchange matrix is {0}x{0} but N = {1}",
                    a.n(),
                    self.n()
                ));
            }
        }
        out.extend(validate_viscosity(&self.visc).violations());
        out
    }

    /// Exchange matrix if it has any effect.
    pub fn active_exchange(&self) -> Option<&ExchangeMatrix> {
        self.exchange.as_ref().filter(|a| !a.is_inert())
    }
}
