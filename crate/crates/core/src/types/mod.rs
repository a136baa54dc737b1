//! Atoms, weights, interpretations, rules and programs.

mod atom;
mod interp;
mod lattice;
mod rule;

pub use atom::{atom_set, Atom, AtomSet};
pub use interp::{comparable, PossAtom, PossInterpretation};
pub use lattice::{Weight, WeightLattice};
pub use rule::{lift, PossProgram, PossRule, Rule};
