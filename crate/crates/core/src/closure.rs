//! Breadth-first subgroup closure over hashable canonical forms.

use std::hash::Hash;

use indexmap::IndexSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration exceeded cap of {cap} elements ({partial} found before stopping)")]
pub struct CapExceeded {
    pub cap: u64,
    pub partial: u64,
}

/// Enumerates the subgroup generated by `generators` inside a finite group.
///
/// Elements are discovered by right-multiplying already known elements by
/// each generator in index order, so the returned insertion order is
/// deterministic. In a finite group the monoid generated is the group, so no
/// inverses are needed.
pub fn closure<T, F>(
    identity: T,
    generators: &[T],
    cap: usize,
    mut mul: F,
) -> Result<IndexSet<T>, CapExceeded>
where
    T: Clone + Eq + Hash,
    F: FnMut(&T, &T) -> T,
{
    let mut seen = IndexSet::new();
    seen.insert(identity);
    if seen.len() > cap {
        return Err(CapExceeded {
            cap: cap as u64,
            partial: 1,
        });
    }
    let mut next = 0;
    while next < seen.len() {
        let current = seen[next].clone();
        for g in generators {
            let product = mul(&current, g);
            if seen.insert(product) && seen.len() > cap {
                return Err(CapExceeded {
                    cap: cap as u64,
                    partial: seen.len() as u64,
                });
            }
        }
        next += 1;
    }
    Ok(seen)
}
