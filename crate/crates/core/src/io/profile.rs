//! Named one-dimensional profiles used for initial data and forces.
//!
//! A profile is written `name(arg, ...)`; a bare number is a constant.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::registry::Registry;

pub trait Profile: Send + Sync + fmt::Debug {
    fn eval(&self, x: f64) -> f64;
}

/// Arguments handed to a profile constructor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileArgs {
    pub args: Vec<f64>,
    /// Domain length; periodic profiles use wavenumbers `2 pi k / length`.
    pub length: f64,
}

#[derive(Debug, Clone, Copy)]
struct Constant(f64);

impl Profile for Constant {
    fn eval(&self, _x: f64) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy)]
struct Harmonic {
    mean: f64,
    amp: f64,
    wavenumber: f64,
    cosine: bool,
}

impl Profile for Harmonic {
    fn eval(&self, x: f64) -> f64 {
        let arg = self.wavenumber * x;
        self.mean + self.amp * if self.cosine { arg.cos() } else { arg.sin() }
    }
}

#[derive(Debug, Clone, Copy)]
struct Gaussian {
    base: f64,
    amp: f64,
    centre: f64,
    width: f64,
}

impl Profile for Gaussian {
    fn eval(&self, x: f64) -> f64 {
        let s = (x - self.centre) / self.width;
        self.base + self.amp * (-0.5 * s * s).exp()
    }
}

pub type ProfileRegistry = Registry<dyn Profile, ProfileArgs>;

fn arity(name: &str, args: &ProfileArgs, n: usize) -> Result<()> {
    if args.args.len() != n {
        return Err(Error::Config(format!(
            "profile `{name}` takes {n} arguments, got {}",
            args.args.len()
        )));
    }
    Ok(())
}

fn harmonic(name: &'static str, a: &ProfileArgs, cosine: bool) -> Result<Box<dyn Profile>> {
    arity(name, a, 3)?;
    Ok(Box::new(Harmonic {
        mean: a.args[0],
        amp: a.args[1],
        wavenumber: TAU * a.args[2] / a.length,
        cosine,
    }))
}

pub fn profile_registry() -> &'static ProfileRegistry {
    static REGISTRY: OnceLock<ProfileRegistry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg: ProfileRegistry = Registry::new("profile");
        reg.register("constant", "constant(c)", |a| {
            arity("constant", a, 1)?;
            Ok(Box::new(Constant(a.args[0])) as Box<dyn Profile>)
        });
        reg.register("sine", "sine(mean, amp, k) = mean + amp sin(2 pi k x / L)", |a| {
            harmonic("sine", a, false)
        });
        reg.register("cosine", "cosine(mean, amp, k) = mean + amp cos(2 pi k x / L)", |a| {
            harmonic("cosine", a, true)
        });
        reg.register(
            "gaussian",
            "gaussian(base, amp, centre, width) = base + amp exp(-(x - centre)^2 / (2 width^2))",
            |a| {
                arity("gaussian", a, 4)?;
                if !(a.args[3] > 0.0) {
                    return Err(Error::Config(format!(
                        "gaussian width must be positive, got {}",
                        a.args[3]
                    )));
                }
                Ok(Box::new(Gaussian {
                    base: a.args[0],
                    amp: a.args[1],
                    centre: a.args[2],
                    width: a.args[3],
                }) as Box<dyn Profile>)
            },
        );
        reg
    })
}

/// Splits `name(a, b, ...)` into its name and arguments.
pub fn parse_profile_spec(spec: &str) -> Result<(String, Vec<f64>)> {
    let spec = spec.trim();
    if let Ok(c) = spec.parse::<f64>() {
        return Ok(("constant".into(), vec![c]));
    }
    let malformed = || Error::Config(format!("malformed profile `{spec}`, expected name(args)"));
    let open = spec.find('(').ok_or_else(malformed)?;
    let inner = spec[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
    let name = spec[..open].trim();
    if name.is_empty() {
        return Err(malformed());
    }
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad number `{}` in profile `{spec}`", a.trim())))
            })
            .collect::<Result<_>>()?
    };
    if args.iter().any(|a: &f64| !a.is_finite()) {
        return Err(Error::Config(format!("profile `{spec}` has non-finite arguments")));
    }
    Ok((name.to_string(), args))
}

/// Builds the profile described by `spec` on a domain of length `length`.
pub fn build_profile(spec: &str, length: f64) -> Result<Box<dyn Profile>> {
    let (name, args) = parse_profile_spec(spec)?;
    profile_registry().build(&name, &ProfileArgs { args, length })
}

/// Samples a profile at the given points.
pub fn sample(profile: &dyn Profile, x: &[f64]) -> Vec<f64> {
    x.iter().map(|&x| profile.eval(x)).collect()
}
