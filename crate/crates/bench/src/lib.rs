//! Shared inputs for the criterion benchmarks.

use posslog::frontend::{generate_dataset, Profile};
use posslog::InductionTask;

/// Total tasks of a generated dataset, ready for the solvers.
pub fn tasks(profile: Profile, seed: u64, count: usize) -> Vec<InductionTask> {
    generate_dataset(profile, seed, count)
        .into_iter()
        .map(|doc| {
            doc.into_induction_task()
                .expect("generated tasks are total")
        })
        .collect()
}
