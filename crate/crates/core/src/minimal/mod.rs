//! Solution spaces, minimal hitting sets and the minimal-solution solver.

mod engine;
mod seeds;
mod smhs;
mod solver;
mod space;

pub use seeds::{SearchSpace, Seed, SeedIterator};
pub use smhs::smhs;
pub use solver::ilpsmmin;
pub use space::{
    blacklist, neg_space, neg_space_atom, pos_space, pos_space_atom, relevant_atoms, whitelist,
    Relation, RuleSpace, SpaceSource,
};
