use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::types::{Atom, AtomSet, Weight, WeightLattice};

/// An atom paired with its certainty degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PossAtom {
    pub atom: Atom,
    pub weight: Weight,
}

/// A possibilistic interpretation: at most one weight per atom.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PossInterpretation(BTreeMap<Atom, Weight>);

impl PossInterpretation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Collects pairs, rejecting an atom listed twice with different weights.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, Weight)>) -> Result<Self> {
        let mut out = Self::new();
        for (atom, weight) in pairs {
            out.insert(atom, weight)?;
        }
        Ok(out)
    }

    /// Adds `(atom, weight)`; a repeated atom must repeat its weight.
    pub fn insert(&mut self, atom: Atom, weight: Weight) -> Result<()> {
        match self.0.entry(atom) {
            btree_map::Entry::Vacant(v) => {
                v.insert(weight);
                Ok(())
            }
            btree_map::Entry::Occupied(o) if *o.get() == weight => Ok(()),
            btree_map::Entry::Occupied(o) => Err(Error::ConflictingWeights {
                atom: o.key().to_string(),
                first: format!("#{}", o.get().rank()),
                second: format!("#{}", weight.rank()),
            }),
        }
    }

    /// Raises the weight of `atom` to at least `weight`.
    pub fn raise(&mut self, atom: Atom, weight: Weight) {
        let slot = self.0.entry(atom).or_insert(weight);
        *slot = (*slot).max(weight);
    }

    pub fn weight_of(&self, atom: &Atom) -> Option<Weight> {
        self.0.get(atom).copied()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains_key(atom)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&Atom, Weight)> + '_ {
        self.0.iter().map(|(a, w)| (a, *w))
    }

    pub fn poss_atoms(&self) -> impl Iterator<Item = PossAtom> + '_ {
        self.iter().map(|(a, w)| PossAtom {
            atom: a.clone(),
            weight: w,
        })
    }

    /// Drops the weights.
    pub fn projection(&self) -> AtomSet {
        self.0.keys().cloned().collect()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.0.keys()
    }

    /// `self ⊑ other`: every entry is matched by an entry of `other` with at least its weight.
    pub fn leq(&self, other: &Self) -> bool {
        self.0
            .iter()
            .all(|(a, w)| other.0.get(a).is_some_and(|v| w <= v))
    }

    /// Strict variant of [`leq`](Self::leq).
    pub fn lt(&self, other: &Self) -> bool {
        self != other && self.leq(other)
    }

    /// Union keeping the larger weight on shared atoms.
    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, w) in other.iter() {
            out.raise(a.clone(), w);
        }
        out
    }

    /// Intersection keeping the smaller weight.
    pub fn meet(&self, other: &Self) -> Self {
        PossInterpretation(
            self.0
                .iter()
                .filter_map(|(a, w)| other.0.get(a).map(|v| (a.clone(), (*w).min(*v))))
                .collect(),
        )
    }

    /// True when the projection is the whole alphabet.
    pub fn is_total(&self, alphabet: &AtomSet) -> bool {
        self.0.len() == alphabet.len() && self.0.keys().all(|a| alphabet.contains(a))
    }

    pub fn check_lattice(&self, lattice: &WeightLattice) -> Result<()> {
        self.0.values().try_for_each(|w| lattice.check(*w))
    }

    /// Renders with lattice labels, e.g. `{ a@0.9, b@0.6 }`.
    pub fn display<'a>(&'a self, lattice: &'a WeightLattice) -> impl fmt::Display + 'a {
        DisplayInterp(self, lattice)
    }
}

struct DisplayInterp<'a>(&'a PossInterpretation, &'a WeightLattice);

impl fmt::Display for DisplayInterp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{ }");
        }
        f.write_str("{ ")?;
        for (i, (a, w)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}@{}", self.1.label(w))?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for PossInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.0.iter().map(|(a, w)| (a, w.rank())))
            .finish()
    }
}

impl FromIterator<(Atom, Weight)> for PossInterpretation {
    /// Later duplicates win; use [`PossInterpretation::from_pairs`] to reject conflicts.
    fn from_iter<T: IntoIterator<Item = (Atom, Weight)>>(iter: T) -> Self {
        PossInterpretation(iter.into_iter().collect())
    }
}

/// Pairwise comparability on projections: one is a subset of the other.
pub fn comparable(a: &PossInterpretation, b: &PossInterpretation) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.atoms().all(|x| large.contains(x))
}
