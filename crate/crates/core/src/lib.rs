//! Possibilistic normal logic programs: stable-model semantics, and learning
//! programs from positive and negative example models.
//!
//! ```
//! use posslog::frontend::parse_task;
//! use posslog::{ilpsmmin, SolveConfig};
//!
//! let doc = parse_task("#order 0.3 < 1\n[positive]\n{ r@0.3 }\n").unwrap();
//! let task = doc.to_induction_task().unwrap();
//! let report = ilpsmmin(&task, &SolveConfig::default()).unwrap();
//! assert_eq!(report.hypothesis().unwrap().len(), 1);
//! ```

pub mod config;
pub mod error;
pub mod frontend;
pub mod induction;
pub mod minimal;
pub mod semantics;
pub mod types;
pub mod variants;

pub use config::{Caps, SolveConfig};
pub use error::{Error, Result};
pub use induction::{
    existence, ilpsm, verify_solution, InductionTask, Outcome, SolutionReport, SolveStats,
};
pub use minimal::ilpsmmin;
pub use types::{
    atom_set, lift, Atom, AtomSet, PossAtom, PossInterpretation, PossProgram, PossRule, Rule,
    Weight, WeightLattice,
};
pub use variants::{PartialInterpretation, PartialTask};
