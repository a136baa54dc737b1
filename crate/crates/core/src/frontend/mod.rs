//! Task files, random task generation and the benchmark harness.

pub mod alloc;
pub mod bench;
pub mod generate;
mod parse;
mod render;

pub use bench::{bench, Algorithm, BenchConfig, BenchReport, BenchRow, GroupSummary, Status};
pub use generate::{base_program, generate_dataset, Profile};
pub use parse::{parse_interpretation, parse_program, parse_rules, parse_task};
pub use render::{render_interpretation, render_partial, render_program, render_task};

use crate::error::{Error, Result};
use crate::induction::InductionTask;
use crate::types::{AtomSet, PossInterpretation, PossProgram, WeightLattice};
use crate::variants::PartialTask;

/// The examples of a document: total interpretations or partial pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaskBody {
    Total {
        background: PossProgram,
        positives: Vec<PossInterpretation>,
        negatives: Vec<PossInterpretation>,
    },
    Partial(PartialTask),
}

/// A parsed task file.
///
/// `atoms` is the full alphabet: declared atoms plus every atom that occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskDocument {
    pub name: Option<String>,
    pub profile: Option<String>,
    pub seed: Option<u64>,
    pub lattice: WeightLattice,
    pub atoms: AtomSet,
    pub body: TaskBody,
}

impl TaskDocument {
    pub fn from_task(task: &InductionTask) -> Self {
        TaskDocument {
            name: None,
            profile: None,
            seed: None,
            lattice: task.lattice().clone(),
            atoms: task.alphabet().clone(),
            body: TaskBody::Total {
                background: task.background().clone(),
                positives: task.positives().to_vec(),
                negatives: task.negatives().to_vec(),
            },
        }
    }

    pub fn from_partial(task: PartialTask) -> Self {
        TaskDocument {
            name: None,
            profile: None,
            seed: None,
            lattice: WeightLattice::unit(),
            atoms: task.alphabet().clone(),
            body: TaskBody::Partial(task),
        }
    }

    pub fn is_partial(&self) -> bool {
        matches!(self.body, TaskBody::Partial(_))
    }

    /// Declared atoms plus every atom of the body.
    pub fn alphabet(&self) -> AtomSet {
        let mut out = self.atoms.clone();
        match &self.body {
            TaskBody::Total {
                background,
                positives,
                negatives,
            } => {
                out.extend(background.atoms());
                for e in positives.iter().chain(negatives) {
                    out.extend(e.atoms().cloned());
                }
            }
            TaskBody::Partial(task) => out.extend(task.alphabet().iter().cloned()),
        }
        out
    }

    pub fn to_induction_task(&self) -> Result<InductionTask> {
        match &self.body {
            TaskBody::Total {
                background,
                positives,
                negatives,
            } => InductionTask::new(
                self.lattice.clone(),
                self.atoms.clone(),
                background.clone(),
                positives.clone(),
                negatives.clone(),
            ),
            TaskBody::Partial(_) => Err(Error::InvalidTask(
                "the document has partial examples; use the partial solver".into(),
            )),
        }
    }

    pub fn into_induction_task(self) -> Result<InductionTask> {
        self.to_induction_task()
    }

    pub fn to_partial_task(&self) -> Result<PartialTask> {
        match &self.body {
            TaskBody::Partial(task) => Ok(task.clone()),
            TaskBody::Total { .. } => Err(Error::InvalidTask(
                "the document has total examples; partial sections are required".into(),
            )),
        }
    }
}
