//! Induction tasks, the existence test, the PPE/PNE constructions and the
//! constructive solver.

use std::time::{Duration, Instant};

use log::warn;

use crate::config::{Caps, SolveConfig};
use crate::error::{Error, Result};
use crate::semantics::{all_coherent, is_coherent, is_poss_stable_model, least_model_of_reduct};
use crate::types::{
    comparable, Atom, AtomSet, PossInterpretation, PossProgram, Rule, WeightLattice,
};

/// Background program plus positive and negative example interpretations.
///
/// The alphabet always covers every atom of the background and the examples;
/// examples are duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionTask {
    lattice: WeightLattice,
    alphabet: AtomSet,
    background: PossProgram,
    positives: Vec<PossInterpretation>,
    negatives: Vec<PossInterpretation>,
}

impl InductionTask {
    /// Validates weights, extends `declared_atoms` with every occurring atom and
    /// drops repeated examples.
    pub fn new(
        lattice: WeightLattice,
        declared_atoms: AtomSet,
        background: PossProgram,
        positives: Vec<PossInterpretation>,
        negatives: Vec<PossInterpretation>,
    ) -> Result<Self> {
        background.check_lattice(&lattice)?;
        for e in positives.iter().chain(&negatives) {
            e.check_lattice(&lattice)?;
        }
        let mut alphabet = declared_atoms;
        alphabet.extend(background.atoms());
        for e in positives.iter().chain(&negatives) {
            alphabet.extend(e.atoms().cloned());
        }
        Ok(InductionTask {
            lattice,
            alphabet,
            background,
            positives: dedup_examples(positives, "positive"),
            negatives: dedup_examples(negatives, "negative"),
        })
    }

    pub fn lattice(&self) -> &WeightLattice {
        &self.lattice
    }

    pub fn alphabet(&self) -> &AtomSet {
        &self.alphabet
    }

    pub fn background(&self) -> &PossProgram {
        &self.background
    }

    pub fn positives(&self) -> &[PossInterpretation] {
        &self.positives
    }

    pub fn negatives(&self) -> &[PossInterpretation] {
        &self.negatives
    }

    /// The same task with a different negative set.
    pub fn with_negatives(&self, negatives: Vec<PossInterpretation>) -> Result<Self> {
        InductionTask::new(
            self.lattice.clone(),
            self.alphabet.clone(),
            self.background.clone(),
            self.positives.clone(),
            negatives,
        )
    }
}

fn dedup_examples(examples: Vec<PossInterpretation>, kind: &str) -> Vec<PossInterpretation> {
    let mut out: Vec<PossInterpretation> = Vec::with_capacity(examples.len());
    for e in examples {
        if out.contains(&e) {
            warn!("dropping a repeated {kind} example");
        } else {
            out.push(e);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Fail,
    Solution(PossProgram),
    /// A bounded search ran out of rounds without deciding.
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub candidates: u64,
    pub psm_checks: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionReport {
    pub outcome: Outcome,
    pub stats: SolveStats,
}

impl SolutionReport {
    pub(crate) fn new(outcome: Outcome, stats: SolveStats) -> Self {
        SolutionReport { outcome, stats }
    }

    pub fn hypothesis(&self) -> Option<&PossProgram> {
        match &self.outcome {
            Outcome::Solution(h) => Some(h),
            _ => None,
        }
    }

    pub fn is_solution(&self) -> bool {
        matches!(self.outcome, Outcome::Solution(_))
    }
}

/// `interp` is comparable with some member of `set`.
pub fn comparable_with(interp: &PossInterpretation, set: &[PossInterpretation]) -> bool {
    set.iter().any(|j| comparable(interp, j))
}

/// No two distinct members have ⊆-comparable projections.
pub fn incomparable(set: &[PossInterpretation]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, a)| set[i + 1..].iter().all(|b| a == b || !comparable(a, b)))
}

/// `x ← not(𝒜 − I)` for every `(x, α)` of every member, ⊔-combined.
pub fn ppe(set: &[PossInterpretation], alphabet: &AtomSet) -> PossProgram {
    let mut out = PossProgram::new();
    for interp in set {
        let absent: AtomSet = alphabet
            .iter()
            .filter(|a| !interp.contains(a))
            .cloned()
            .collect();
        for (atom, w) in interp.iter() {
            out.insert(Rule::new(atom.clone(), [], absent.iter().cloned()), w);
        }
    }
    out
}

/// The default head choice for PNE rules: the smallest atom outside the interpretation.
pub fn smallest_absent(absent: &AtomSet) -> Atom {
    absent
        .iter()
        .next()
        .cloned()
        .expect("PNE is only built for non-total interpretations")
}

/// PNE with the default head choice.
pub fn pne(
    negatives: &[PossInterpretation],
    positives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> PossProgram {
    pne_with(negatives, positives, alphabet, lattice, smallest_absent)
}

/// One rule `x₀ ← I, not(𝒜 − I)` at the top weight for each non-total member of
/// `negatives` that is incomparable with every positive; `choose` picks `x₀`.
pub fn pne_with(
    negatives: &[PossInterpretation],
    positives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
    choose: impl Fn(&AtomSet) -> Atom,
) -> PossProgram {
    let mut out = PossProgram::new();
    for interp in negatives {
        if interp.is_total(alphabet) || comparable_with(interp, positives) {
            continue;
        }
        let present = interp.projection();
        let absent: AtomSet = alphabet.difference(&present).cloned().collect();
        let head = choose(&absent);
        debug_assert!(absent.contains(&head));
        out.insert(Rule::new(head, present, absent), lattice.top());
    }
    out
}

/// The classical least model of the background reduced by the whole alphabet equals the alphabet.
pub(crate) fn background_covers_alphabet(background: &PossProgram, alphabet: &AtomSet) -> bool {
    &least_model_of_reduct(background.rules(), alphabet) == alphabet
}

/// Total interpretations in ascending canonical order (first atom most significant).
pub struct TotalInterpretations {
    atoms: Vec<Atom>,
    lattice: WeightLattice,
    digits: Option<Vec<u16>>,
}

impl Iterator for TotalInterpretations {
    type Item = PossInterpretation;

    fn next(&mut self) -> Option<PossInterpretation> {
        let digits = self.digits.as_mut()?;
        let weights: Vec<_> = self.lattice.weights().collect();
        let out = self
            .atoms
            .iter()
            .zip(digits.iter())
            .map(|(a, d)| (a.clone(), weights[*d as usize]))
            .collect();
        let top = (self.lattice.len() - 1) as u16;
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.digits = None;
                break;
            }
            i -= 1;
            if digits[i] < top {
                digits[i] += 1;
                digits[i + 1..].iter_mut().for_each(|d| *d = 0);
                break;
            }
        }
        Some(out)
    }
}

/// Enumerates the |𝒬|^|𝒜| total interpretations, refusing when that exceeds the cap.
pub fn total_interpretations(
    alphabet: &AtomSet,
    lattice: &WeightLattice,
    caps: &Caps,
) -> Result<TotalInterpretations> {
    let count = (lattice.len() as u128)
        .checked_pow(alphabet.len() as u32)
        .unwrap_or(u128::MAX);
    if count > caps.total_interps {
        return Err(Error::capacity(
            "enumerating total interpretations",
            "total",
            count,
            caps.total_interps,
        ));
    }
    Ok(TotalInterpretations {
        atoms: alphabet.iter().cloned().collect(),
        lattice: lattice.clone(),
        digits: Some(vec![0; alphabet.len()]),
    })
}

/// Negation of the incompatibility conjunction between negatives and the background.
pub fn compatible(
    negatives: &[PossInterpretation],
    background: &PossProgram,
    alphabet: &AtomSet,
    lattice: &WeightLattice,
    caps: &Caps,
) -> Result<bool> {
    if !background_covers_alphabet(background, alphabet) {
        return Ok(true);
    }
    if !negatives.iter().any(|e| e.is_total(alphabet)) {
        return Ok(true);
    }
    for g in total_interpretations(alphabet, lattice, caps)? {
        if !negatives.contains(&g) && is_coherent(&g, background) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The first violated existence condition, checked in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstacle {
    ComparablePositives,
    IncoherentPositives,
    IncompatibleNegatives,
    SharedExamples,
}

pub fn existence_obstacle(task: &InductionTask, caps: &Caps) -> Result<Option<Obstacle>> {
    if !incomparable(&task.positives) {
        return Ok(Some(Obstacle::ComparablePositives));
    }
    if !all_coherent(&task.positives, &task.background) {
        return Ok(Some(Obstacle::IncoherentPositives));
    }
    if !compatible(
        &task.negatives,
        &task.background,
        &task.alphabet,
        &task.lattice,
        caps,
    )? {
        return Ok(Some(Obstacle::IncompatibleNegatives));
    }
    if task.positives.iter().any(|e| task.negatives.contains(e)) {
        return Ok(Some(Obstacle::SharedExamples));
    }
    Ok(None)
}

/// Whether the task has any solution.
pub fn existence(task: &InductionTask, caps: &Caps) -> Result<bool> {
    Ok(existence_obstacle(task, caps)?.is_none())
}

/// The canonically smallest total interpretation outside `negatives` that is coherent with the background.
pub fn find_total_coherent(
    background: &PossProgram,
    negatives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
    caps: &Caps,
) -> Result<PossInterpretation> {
    total_interpretations(alphabet, lattice, caps)?
        .find(|g| !negatives.contains(g) && is_coherent(g, background))
        .ok_or_else(|| {
            Error::Contract("no coherent total interpretation outside the negatives".into())
        })
}

/// The constructive solver: PPE for the positives, PNE to block the remaining negatives.
pub fn ilpsm(task: &InductionTask, config: &SolveConfig) -> Result<SolutionReport> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    if !existence(task, &config.caps)? {
        stats.elapsed = start.elapsed();
        return Ok(SolutionReport::new(Outcome::Fail, stats));
    }
    let (b, alphabet, lattice) = (&task.background, &task.alphabet, &task.lattice);
    let hypothesis = if !task.positives.is_empty() {
        let h = ppe(&task.positives, alphabet);
        let joined = b.join(&h);
        let coherent: Vec<PossInterpretation> = task
            .negatives
            .iter()
            .filter(|e| is_coherent(e, &joined))
            .cloned()
            .collect();
        stats.candidates = coherent.len() as u64;
        h.join(&pne(&coherent, &task.positives, alphabet, lattice))
            .minus(b)
    } else if !background_covers_alphabet(b, alphabet)
        || !task.negatives.iter().any(|e| e.is_total(alphabet))
    {
        pne(&task.negatives, &[], alphabet, lattice).minus(b)
    } else {
        let g = find_total_coherent(b, &task.negatives, alphabet, lattice, &config.caps)?;
        ppe(&[g], alphabet)
    };
    stats.psm_checks = (task.positives.len() + task.negatives.len()) as u64;
    if !verify_solution(task, &hypothesis) {
        return Err(Error::Contract(
            "constructed hypothesis does not verify".into(),
        ));
    }
    stats.elapsed = start.elapsed();
    Ok(SolutionReport::new(Outcome::Solution(hypothesis), stats))
}

/// Every positive is a poss-stable model of B ⊔ H and no negative is.
pub fn verify_solution(task: &InductionTask, hypothesis: &PossProgram) -> bool {
    let program = task.background.join(hypothesis);
    task.positives
        .iter()
        .all(|e| is_poss_stable_model(&program, e))
        && !task
            .negatives
            .iter()
            .any(|e| is_poss_stable_model(&program, e))
}
