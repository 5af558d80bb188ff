//! Name-keyed registries of interchangeable strategies.
//!
//! Every family of variants in the crate (mixture models, pressure laws,
//! initial profiles, manufactured cases) is reached through a [`Registry`]:
//! a map from a stable lower-case name to a builder that turns a parameter
//! bundle into a boxed trait object. Configuration files and the CLI only
//! ever talk about names.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

type Builder<T, A> = Box<dyn Fn(&A) -> Result<Box<T>> + Send + Sync>;

pub struct Registry<T: ?Sized, A: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, (&'static str, Builder<T, A>)>,
}

impl<T: ?Sized, A: ?Sized> Registry<T, A> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `build` under `name`. A later registration with the same
    /// name replaces the earlier one.
    pub fn register<F>(&mut self, name: &'static str, summary: &'static str, build: F) -> &mut Self
    where
        F: Fn(&A) -> Result<Box<T>> + Send + Sync + 'static,
    {
        self.entries.insert(name, (summary, Box::new(build)));
        self
    }

    pub fn build(&self, name: &str, args: &A) -> Result<Box<T>> {
        let (_, build) = self
            .entries
            .get(name)
            .ok_or_else(|| Error::UnknownName {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })?;
        build(args)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn summaries(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.entries.iter().map(|(name, (summary, _))| (*name, *summary))
    }
}

impl<T: ?Sized, A: ?Sized> fmt::Debug for Registry<T, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("names", &self.names().collect::<Vec<_>>())
            .finish()
    }
}
