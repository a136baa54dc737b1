//! Task variants: complete poss-stable models, ordinary programs, and partial interpretations.

use std::collections::BTreeSet;
use std::time::Instant;

use log::debug;

use crate::config::{Caps, SolveConfig};
use crate::error::{Error, Result};
use crate::induction::{
    background_covers_alphabet, existence_obstacle, ilpsm, incomparable, InductionTask, Obstacle,
    Outcome, SolutionReport, SolveStats,
};
use crate::minimal::{ilpsmmin, smhs};
use crate::semantics::{
    all_coherent, classical_stable_models, least_model_of_reduct, poss_stable_models,
};
use crate::types::{lift, AtomSet, PossInterpretation, PossProgram, Rule, WeightLattice};

/// Atoms known true and atoms known false.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialInterpretation {
    included: AtomSet,
    excluded: AtomSet,
}

impl PartialInterpretation {
    pub fn new(included: AtomSet, excluded: AtomSet) -> Result<Self> {
        if let Some(a) = included.intersection(&excluded).next() {
            return Err(Error::InvalidTask(format!(
                "atom `{a}` is both included and excluded"
            )));
        }
        Ok(PartialInterpretation { included, excluded })
    }

    pub fn included(&self) -> &AtomSet {
        &self.included
    }

    pub fn excluded(&self) -> &AtomSet {
        &self.excluded
    }

    pub fn atoms(&self) -> impl Iterator<Item = &crate::types::Atom> + '_ {
        self.included.iter().chain(&self.excluded)
    }
}

/// `interp` contains every included atom and no excluded one.
pub fn extends(interp: &AtomSet, partial: &PartialInterpretation) -> bool {
    partial.included.is_subset(interp) && partial.excluded.is_disjoint(interp)
}

/// Every interpretation over `alphabet` extending `partial`, in canonical order.
pub fn denotation(
    partial: &PartialInterpretation,
    alphabet: &AtomSet,
    caps: &Caps,
) -> Result<Vec<AtomSet>> {
    let free: Vec<_> = alphabet
        .iter()
        .filter(|a| !partial.included.contains(*a) && !partial.excluded.contains(*a))
        .cloned()
        .collect();
    if free.len() > caps.denotation {
        return Err(Error::capacity(
            "denotation of a partial interpretation",
            "denotation",
            free.len() as u128,
            caps.denotation as u128,
        ));
    }
    let mut out: Vec<AtomSet> = (0u64..1 << free.len())
        .map(|m| {
            let mut s = partial.included.clone();
            s.extend(
                free.iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, a)| a.clone()),
            );
            s
        })
        .collect();
    out.sort();
    Ok(out)
}

/// An ordinary background program with partial positive and negative examples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTask {
    alphabet: AtomSet,
    background: BTreeSet<Rule>,
    positives: Vec<PartialInterpretation>,
    negatives: Vec<PartialInterpretation>,
}

impl PartialTask {
    /// Extends `declared_atoms` with every atom used.
    pub fn new(
        declared_atoms: AtomSet,
        background: BTreeSet<Rule>,
        positives: Vec<PartialInterpretation>,
        negatives: Vec<PartialInterpretation>,
    ) -> Self {
        let mut alphabet = declared_atoms;
        for r in &background {
            alphabet.extend(r.atoms().cloned());
        }
        for o in positives.iter().chain(&negatives) {
            alphabet.extend(o.atoms().cloned());
        }
        PartialTask {
            alphabet,
            background,
            positives: dedup(positives),
            negatives: dedup(negatives),
        }
    }

    pub fn alphabet(&self) -> &AtomSet {
        &self.alphabet
    }

    pub fn background(&self) -> &BTreeSet<Rule> {
        &self.background
    }

    pub fn positives(&self) -> &[PartialInterpretation] {
        &self.positives
    }

    pub fn negatives(&self) -> &[PartialInterpretation] {
        &self.negatives
    }
}

fn dedup<T: PartialEq>(items: Vec<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(items.len());
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Every atom at the single weight of the unit lattice.
pub fn lift_interpretation(atoms: &AtomSet, lattice: &WeightLattice) -> PossInterpretation {
    atoms.iter().map(|a| (a.clone(), lattice.top())).collect()
}

/// An ordinary task over plain sets, lifted to the one-element lattice.
pub fn lsm_task(
    alphabet: AtomSet,
    background: &BTreeSet<Rule>,
    positives: &[AtomSet],
    negatives: &[AtomSet],
) -> Result<InductionTask> {
    let unit = WeightLattice::unit();
    InductionTask::new(
        unit.clone(),
        alphabet,
        lift(background, &unit),
        positives
            .iter()
            .map(|e| lift_interpretation(e, &unit))
            .collect(),
        negatives
            .iter()
            .map(|e| lift_interpretation(e, &unit))
            .collect(),
    )
}

/// One ordinary task per minimal hitting set of the positive denotations, all sharing
/// the union of the negative denotations.
pub fn transform_partial(task: &PartialTask, caps: &Caps) -> Result<Vec<InductionTask>> {
    let family: Vec<BTreeSet<AtomSet>> = task
        .positives
        .iter()
        .map(|o| denotation(o, &task.alphabet, caps).map(|d| d.into_iter().collect()))
        .collect::<Result<_>>()?;
    let mut negatives = BTreeSet::new();
    for o in &task.negatives {
        negatives.extend(denotation(o, &task.alphabet, caps)?);
    }
    let negatives: Vec<AtomSet> = negatives.into_iter().collect();
    smhs(&family, caps.hitting_sets)?
        .into_iter()
        .map(|hs| {
            let positives: Vec<AtomSet> = hs.into_iter().collect();
            lsm_task(
                task.alphabet.clone(),
                &task.background,
                &positives,
                &negatives,
            )
        })
        .collect()
}

/// Some stable model of B ∪ H extends each positive and none extends a negative.
pub fn verify_partial(
    task: &PartialTask,
    hypothesis: &BTreeSet<Rule>,
    caps: &Caps,
) -> Result<bool> {
    let program: BTreeSet<Rule> = task.background.union(hypothesis).cloned().collect();
    let models = classical_stable_models(&program, caps)?;
    Ok(task
        .positives
        .iter()
        .all(|o| models.iter().any(|m| extends(m, o)))
        && !task
            .negatives
            .iter()
            .any(|o| models.iter().any(|m| extends(m, o))))
}

fn accumulate(total: &mut SolveStats, part: &SolveStats) {
    total.candidates += part.candidates;
    total.psm_checks += part.psm_checks;
}

/// Solves the transformed tasks in order: the first solution, or the smallest when `minimize`.
pub fn solve_partial(
    task: &PartialTask,
    minimize: bool,
    config: &SolveConfig,
) -> Result<SolutionReport> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let mut best: Option<PossProgram> = None;
    for (k, t) in transform_partial(task, &config.caps)?.iter().enumerate() {
        let report = if minimize {
            ilpsmmin(t, config)?
        } else {
            ilpsm(t, config)?
        };
        accumulate(&mut stats, &report.stats);
        let Outcome::Solution(h) = report.outcome else {
            debug!("transformed task {k} has no solution");
            continue;
        };
        debug!("transformed task {k} solved with {} rules", h.len());
        if !minimize {
            best = Some(h);
            break;
        }
        if best.as_ref().is_none_or(|b| h.len() < b.len()) {
            best = Some(h);
        }
    }
    stats.elapsed = start.elapsed();
    let outcome = best.map_or(Outcome::Fail, Outcome::Solution);
    Ok(SolutionReport::new(outcome, stats))
}

/// The first failing condition for a complete-model task, if any.
pub fn complete_obstacle(
    background: &PossProgram,
    positives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Option<Obstacle> {
    if !incomparable(positives) {
        return Some(Obstacle::ComparablePositives);
    }
    if !all_coherent(positives, background) {
        return Some(Obstacle::IncoherentPositives);
    }
    let single_total =
        lattice.len() == 1 && positives.len() == 1 && positives[0].is_total(alphabet);
    let open = !background_covers_alphabet(background, alphabet)
        || single_total
        || positives.iter().any(|e| e.is_total(alphabet));
    (!open).then_some(Obstacle::IncompatibleNegatives)
}

/// Whether some hypothesis makes the positives exactly the poss-stable models.
pub fn complete_existence(
    background: &PossProgram,
    positives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> bool {
    complete_obstacle(background, positives, alphabet, lattice).is_none()
}

/// Finds H with PSM(B ⊔ H) equal to the positives, demoting surplus models to negatives.
///
/// Gives up with `Inconclusive` after the configured number of rounds.
pub fn solve_complete(
    background: &PossProgram,
    positives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
    minimize: bool,
    config: &SolveConfig,
) -> Result<SolutionReport> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let task = InductionTask::new(
        lattice.clone(),
        alphabet.clone(),
        background.clone(),
        positives.to_vec(),
        Vec::new(),
    )?;
    if !complete_existence(
        task.background(),
        task.positives(),
        task.alphabet(),
        task.lattice(),
    ) {
        stats.elapsed = start.elapsed();
        return Ok(SolutionReport::new(Outcome::Fail, stats));
    }
    let mut report = if minimize {
        ilpsmmin(&task, config)?
    } else {
        ilpsm(&task, config)?
    };
    let mut extras: Vec<PossInterpretation> = Vec::new();
    for round in 0..config.caps.complete_rounds {
        accumulate(&mut stats, &report.stats);
        let Outcome::Solution(h) = &report.outcome else {
            debug!("round {round}: no hypothesis blocks the surplus models");
            break;
        };
        let models = poss_stable_models(&task.background().join(h), &config.caps)?;
        let surplus: Vec<PossInterpretation> = models
            .into_iter()
            .filter(|m| !task.positives().contains(m))
            .collect();
        if surplus.is_empty() {
            stats.elapsed = start.elapsed();
            return Ok(SolutionReport::new(report.outcome, stats));
        }
        debug!("round {round}: {} surplus models", surplus.len());
        extras.extend(surplus);
        report = ilpsmmin(&task.with_negatives(extras.clone())?, config)?;
    }
    stats.elapsed = start.elapsed();
    Ok(SolutionReport::new(Outcome::Inconclusive, stats))
}

/// Existence for ordinary tasks, evaluated directly on plain sets.
pub fn lsm_existence(task: &InductionTask) -> Result<bool> {
    if task.lattice().len() != 1 {
        return Err(Error::InvalidTask(
            "ordinary tasks need a one-element weight lattice".into(),
        ));
    }
    let pos: Vec<AtomSet> = task
        .positives()
        .iter()
        .map(PossInterpretation::projection)
        .collect();
    let neg: Vec<AtomSet> = task
        .negatives()
        .iter()
        .map(PossInterpretation::projection)
        .collect();
    let rules = task.background().projection();
    let incomparable = pos.iter().enumerate().all(|(i, a)| {
        pos[i + 1..]
            .iter()
            .all(|b| !a.is_subset(b) && !b.is_subset(a))
    });
    let models = pos.iter().all(|e| {
        rules
            .iter()
            .all(|r| !r.is_active_in(e) || e.contains(&r.head))
    });
    let alphabet = task.alphabet();
    let open = !neg.contains(alphabet) || &least_model_of_reduct(&rules, alphabet) != alphabet;
    let disjoint = !pos.iter().any(|e| neg.contains(e));
    Ok(incomparable && models && open && disjoint)
}

/// Per transformed task, the first failing existence condition.
pub fn partial_obstacles(
    task: &PartialTask,
    caps: &Caps,
) -> Result<Vec<(InductionTask, Option<Obstacle>)>> {
    transform_partial(task, caps)?
        .into_iter()
        .map(|t| {
            let o = existence_obstacle(&t, caps)?;
            Ok((t, o))
        })
        .collect()
}
