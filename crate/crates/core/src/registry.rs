//! Name-keyed registries of strategy objects.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered collection of named trait objects.
pub struct Registry<T: ?Sized> {
    what: &'static str,
    entries: Vec<(String, Arc<T>)>,
}

impl<T: ?Sized> Registry<T> {
    /// `what` names the kind of entry in error messages ("solver", ...).
    pub fn new(what: &'static str) -> Self {
        Registry { what, entries: Vec::new() }
    }

    pub fn register(&mut self, name: &str, entry: Arc<T>) -> Result<()> {
        if self.entries.iter().any(|(n, _)| n == name) {
            return Err(Error::domain(format!("{} `{name}` is already registered", self.what)));
        }
        self.entries.push((name.to_string(), entry));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| Arc::clone(e))
            .ok_or_else(|| {
                Error::domain(format!("unknown {} `{name}` (known: {})", self.what, self.names().join(", ")))
            })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Arc<T>)> {
        self.entries.iter().map(|(n, e)| (n.as_str(), e))
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("what", &self.what).field("names", &self.names()).finish()
    }
}
