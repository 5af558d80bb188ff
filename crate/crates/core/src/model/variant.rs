//! The two model variants as interchangeable strategies.
//!
//! * `original`: every constituent is convected by its own velocity, carries
//!   its own pressure `p_i(rho_i)` and exchanges momentum through `J_i`.
//! * `modified`: every constituent is convected by the average velocity
//!   `v = (1/N) Σ u_i`, all constituents feel the common pressure `p(rho)` of
//!   the total density, and `J_i` is absent.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::model::mixture::{average_velocity, total_density};
use crate::model::params::MixtureParams;
use crate::model::pressure::PressureLaw;
use crate::registry::Registry;

/// Lower bound on `dp/drho` inside the sound-speed proxy.
pub const SOUND_SPEED_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    Original,
    Modified,
}

impl ModelVariant {
    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::Original => "original",
            ModelVariant::Modified => "modified",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(model_registry().build(name, &())?.variant())
    }

    pub fn model(self) -> Arc<dyn MixtureModel> {
        Arc::from(
            model_registry()
                .build(self.name(), &())
                .expect("built-in variants are registered"),
        )
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Variant-specific closure of the multi-fluid equations, evaluated one grid
/// cell at a time on slices of length `N`.
pub trait MixtureModel: Send + Sync + fmt::Debug {
    fn variant(&self) -> ModelVariant;

    /// Transport velocities `w_i` from the constituent velocities `u_i`.
    fn convection_velocity(&self, u: &[f64], w: &mut [f64]);

    /// Pressures `p_i` entering each momentum equation.
    fn pressures(&self, rho: &[f64], laws: &[Arc<dyn PressureLaw>], p: &mut [f64]);

    /// `max_i (|w_i| + c_i)` over the constituents flagged `active`.
    fn max_signal_speed(
        &self,
        rho: &[f64],
        w: &[f64],
        laws: &[Arc<dyn PressureLaw>],
        active: &[bool],
    ) -> f64;

    /// Potential part of the energy density whose integral, together with
    /// `Σ rho_i u_i² / 2`, is dissipated by the unforced equations.
    fn potential_energy(&self, rho: &[f64], laws: &[Arc<dyn PressureLaw>]) -> f64;

    fn exchange_enabled(&self) -> bool;

    /// Variant-consistency problems of `params` (empty when consistent).
    fn check(&self, params: &MixtureParams) -> Vec<String>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct OriginalModel;

#[derive(Debug, Default, Clone, Copy)]
pub struct ModifiedModel;

fn potential_or_zero(law: &dyn PressureLaw, rho: f64) -> f64 {
    if rho > 0.0 {
        law.potential(rho)
    } else {
        0.0
    }
}

impl MixtureModel for OriginalModel {
    fn variant(&self) -> ModelVariant {
        ModelVariant::Original
    }

    fn convection_velocity(&self, u: &[f64], w: &mut [f64]) {
        w.copy_from_slice(u);
    }

    fn pressures(&self, rho: &[f64], laws: &[Arc<dyn PressureLaw>], p: &mut [f64]) {
        for ((p, law), &r) in p.iter_mut().zip(laws).zip(rho) {
            *p = law.pressure(r);
        }
    }

    fn max_signal_speed(
        &self,
        rho: &[f64],
        w: &[f64],
        laws: &[Arc<dyn PressureLaw>],
        active: &[bool],
    ) -> f64 {
        let mut speed: f64 = 0.0;
        for i in 0..rho.len() {
            if active[i] {
                let c = laws[i].derivative(rho[i]).max(SOUND_SPEED_EPS).sqrt();
                speed = speed.max(w[i].abs() + c);
            }
        }
        speed
    }

    fn potential_energy(&self, rho: &[f64], laws: &[Arc<dyn PressureLaw>]) -> f64 {
        rho.iter()
            .zip(laws)
            .map(|(&r, law)| potential_or_zero(law.as_ref(), r))
            .sum()
    }

    fn exchange_enabled(&self) -> bool {
        true
    }

    fn check(&self, params: &MixtureParams) -> Vec<String> {
        let mut out = Vec::new();
        if params.pressure.len() != params.n() {
            out.push(format!(
                "original model needs one pressure law per constituent: N = {}, got {}",
                params.n(),
                params.pressure.len()
            ));
        }
        out
    }
}

impl MixtureModel for ModifiedModel {
    fn variant(&self) -> ModelVariant {
        ModelVariant::Modified
    }

    fn convection_velocity(&self, u: &[f64], w: &mut [f64]) {
        w.fill(average_velocity(u));
    }

    fn pressures(&self, rho: &[f64], laws: &[Arc<dyn PressureLaw>], p: &mut [f64]) {
        p.fill(laws[0].pressure(total_density(rho)));
    }

    fn max_signal_speed(
        &self,
        rho: &[f64],
        w: &[f64],
        laws: &[Arc<dyn PressureLaw>],
        active: &[bool],
    ) -> f64 {
        // Linearised acoustics of the common-pressure system propagate at
        // c² = p'(rho) · mean_i(rho / rho_i).
        let total = total_density(rho);
        let (mut ratio, mut count) = (0.0, 0usize);
        for i in 0..rho.len() {
            if active[i] {
                ratio += total / rho[i];
                count += 1;
            }
        }
        if count == 0 {
            return 0.0;
        }
        let c2 = laws[0].derivative(total) * (ratio / count as f64);
        w[0].abs() + c2.max(SOUND_SPEED_EPS).sqrt()
    }

    fn potential_energy(&self, rho: &[f64], laws: &[Arc<dyn PressureLaw>]) -> f64 {
        // each of the N momentum equations carries the same pressure force
        rho.len() as f64 * potential_or_zero(laws[0].as_ref(), total_density(rho))
    }

    fn exchange_enabled(&self) -> bool {
        false
    }

    fn check(&self, params: &MixtureParams) -> Vec<String> {
        let mut out = Vec::new();
        if params.pressure.len() != 1 {
            out.push(format!(
                "modified model uses a single common pressure law, got {}",
                params.pressure.len()
            ));
        }
        if params.exchange.as_ref().is_some_and(|a| !a.is_inert()) {
            out.push("modified model has no momentum exchange: exchange matrix must be zero".into());
        }
        out
    }
}

pub type ModelRegistry = Registry<dyn MixtureModel, ()>;

pub fn model_registry() -> &'static ModelRegistry {
    static REGISTRY: OnceLock<ModelRegistry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg: ModelRegistry = Registry::new("model variant");
        reg.register(
            "original",
            "own convection velocity, own pressure p_i(rho_i), exchange J_i",
            |_| Ok(Box::new(OriginalModel) as Box<dyn MixtureModel>),
        );
        reg.register(
            "modified",
            "average convection velocity, common pressure p(rho), no exchange",
            |_| Ok(Box::new(ModifiedModel) as Box<dyn MixtureModel>),
        );
        reg
    })
}

/// Convenience lookup returning an error that lists the known names.
pub fn model_by_name(name: &str) -> Result<Arc<dyn MixtureModel>> {
    model_registry().build(name, &()).map(Arc::from)
}
