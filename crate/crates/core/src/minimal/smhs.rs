//! Minimal hitting sets of a finite family of finite sets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// All ⊆-minimal sets meeting every member of `family`, ordered by size and then lexicographically.
///
/// `cap` bounds the number of search nodes; exceeding it is a capacity error.
pub fn smhs<T: Ord + Clone>(family: &[BTreeSet<T>], cap: u128) -> Result<Vec<BTreeSet<T>>> {
    if family.iter().any(BTreeSet::is_empty) {
        return Ok(Vec::new());
    }
    let mut search = Search {
        family,
        cap,
        nodes: 0,
        found: BTreeSet::new(),
    };
    search.descend(&mut BTreeSet::new(), &mut BTreeSet::new())?;
    let mut out: Vec<BTreeSet<T>> = search
        .found
        .into_iter()
        .filter(|h| is_minimal(h, family))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

struct Search<'a, T> {
    family: &'a [BTreeSet<T>],
    cap: u128,
    nodes: u128,
    found: BTreeSet<BTreeSet<T>>,
}

impl<T: Ord + Clone> Search<'_, T> {
    /// Branches on the elements of the first unhit member; earlier siblings are forbidden
    /// in later branches so each candidate is produced once.
    fn descend(&mut self, chosen: &mut BTreeSet<T>, forbidden: &mut BTreeSet<T>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::capacity(
                "minimal hitting set search",
                "hitting_sets",
                self.nodes,
                self.cap,
            ));
        }
        let unhit: Vec<&BTreeSet<T>> = self
            .family
            .iter()
            .filter(|s| s.is_disjoint(chosen))
            .collect();
        let Some(first) = unhit.first() else {
            self.found.insert(chosen.clone());
            return Ok(());
        };
        if unhit.iter().any(|s| s.is_subset(forbidden)) {
            return Ok(());
        }
        let options: Vec<T> = first
            .iter()
            .filter(|x| !forbidden.contains(x))
            .cloned()
            .collect();
        let mut added = Vec::new();
        for x in options {
            chosen.insert(x.clone());
            self.descend(chosen, forbidden)?;
            chosen.remove(&x);
            forbidden.insert(x.clone());
            added.push(x);
        }
        for x in added {
            forbidden.remove(&x);
        }
        Ok(())
    }
}

fn is_minimal<T: Ord>(h: &BTreeSet<T>, family: &[BTreeSet<T>]) -> bool {
    h.iter().all(|x| {
        family
            .iter()
            .any(|s| s.contains(x) && s.iter().filter(|y| h.contains(*y)).count() == 1)
    })
}
