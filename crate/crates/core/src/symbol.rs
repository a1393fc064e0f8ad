//! Generator identities and the process-wide intern table.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// A generator of the free algebra: `X[1]`, `g[1][2]`, `H`, or a function
/// symbol carrying formal partial derivatives such as `F_xt` or `A[2]_1`.
///
/// `partials` is a sorted multiset of coordinate labels, so mixed partials
/// commute by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub name: String,
    pub indices: Vec<u32>,
    pub partials: String,
}

impl GeneratorId {
    pub fn new(name: impl Into<String>, indices: &[u32]) -> GeneratorId {
        GeneratorId { name: name.into(), indices: indices.to_vec(), partials: String::new() }
    }

    pub fn scalar(name: impl Into<String>) -> GeneratorId {
        GeneratorId::new(name, &[])
    }

    /// This symbol differentiated once more along coordinate `label`.
    pub fn differentiated(&self, label: char) -> GeneratorId {
        let mut chars: Vec<char> = self.partials.chars().collect();
        chars.push(label);
        chars.sort_unstable();
        GeneratorId {
            name: self.name.clone(),
            indices: self.indices.clone(),
            partials: chars.into_iter().collect(),
        }
    }

    pub fn with_sorted_indices(mut self) -> GeneratorId {
        self.indices.sort_unstable();
        self
    }

    pub fn letter(&self) -> Letter {
        Letter::intern(self)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for i in &self.indices {
            write!(f, "[{i}]")?;
        }
        if !self.partials.is_empty() {
            write!(f, "_{}", self.partials)?;
        }
        Ok(())
    }
}

/// Interned handle for a [`GeneratorId`]; cheap to copy, hash and compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

#[derive(Default)]
struct Interner {
    ids: HashMap<GeneratorId, u32>,
    table: Vec<Arc<GeneratorId>>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| RwLock::new(Interner::default()))
}

impl Letter {
    pub fn intern(id: &GeneratorId) -> Letter {
        if let Some(&n) = interner().read().expect("interner poisoned").ids.get(id) {
            return Letter(n);
        }
        let mut guard = interner().write().expect("interner poisoned");
        if let Some(&n) = guard.ids.get(id) {
            return Letter(n);
        }
        let n = guard.table.len() as u32;
        guard.table.push(Arc::new(id.clone()));
        guard.ids.insert(id.clone(), n);
        Letter(n)
    }

    pub fn id(self) -> Arc<GeneratorId> {
        interner().read().expect("interner poisoned").table[self.0 as usize].clone()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}
