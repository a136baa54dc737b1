//! Fixpoint semantics: applicability, the consequence operator, reducts, least
//! fixpoints, groundedness, and (possibilistic) stable models.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::{is_cyclic_directed, tarjan_scc};
use petgraph::graph::{DiGraph, NodeIndex};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::types::{Atom, AtomSet, PossInterpretation, PossProgram, Rule, Weight};

/// The weight a rule contributes in `interp`, or `None` when it is not applicable.
///
/// Applicable means every positive body atom is in `interp` and no negative one is.
/// The contribution is the minimum of the rule weight and the positive body weights.
pub fn beta_applicable(rule: &Rule, weight: Weight, interp: &PossInterpretation) -> Option<Weight> {
    if rule.neg.iter().any(|a| interp.contains(a)) {
        return None;
    }
    rule.pos
        .iter()
        .try_fold(weight, |acc, a| interp.weight_of(a).map(|w| acc.min(w)))
}

/// One application of the immediate consequence operator.
pub fn tp_step(program: &PossProgram, interp: &PossInterpretation) -> PossInterpretation {
    let mut out = PossInterpretation::new();
    for (rule, w) in program.iter() {
        if let Some(beta) = beta_applicable(rule, w, interp) {
            out.raise(rule.head.clone(), beta);
        }
    }
    out
}

/// Drops rules blocked by `atoms` and strips the negative bodies of the rest.
pub fn reduct(program: &PossProgram, atoms: &AtomSet) -> PossProgram {
    program
        .iter()
        .filter(|(r, _)| r.neg.is_disjoint(atoms))
        .map(|(r, w)| (r.positive_part(), w))
        .collect()
}

/// The iterates of the consequence operator from the empty interpretation.
///
/// `iterates[0]` is ∅ and the last two entries are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointTrace {
    pub iterates: Vec<PossInterpretation>,
}

impl FixpointTrace {
    pub fn fixpoint(&self) -> &PossInterpretation {
        self.iterates
            .last()
            .expect("a trace always holds the empty start")
    }

    pub fn into_fixpoint(mut self) -> PossInterpretation {
        self.iterates
            .pop()
            .expect("a trace always holds the empty start")
    }
}

/// Least fixpoint of a definite program, with the full iterate sequence.
pub fn cn(program: &PossProgram) -> Result<FixpointTrace> {
    if !program.is_definite() {
        return Err(Error::Contract("cn expects a definite program".into()));
    }
    let mut iterates = vec![PossInterpretation::new()];
    loop {
        let next = tp_step(program, iterates.last().unwrap());
        let done = &next == iterates.last().unwrap();
        iterates.push(next);
        if done {
            return Ok(FixpointTrace { iterates });
        }
    }
}

/// Fixpoint of the reduct of `program` w.r.t. `atoms`, without materialising it.
pub(crate) fn lfp_of_reduct(program: &PossProgram, atoms: &AtomSet) -> PossInterpretation {
    let active: Vec<(&Rule, Weight)> = program
        .iter()
        .filter(|(r, _)| r.neg.is_disjoint(atoms))
        .collect();
    let mut current = PossInterpretation::new();
    loop {
        let mut next = PossInterpretation::new();
        for (rule, w) in &active {
            let beta = rule
                .pos
                .iter()
                .try_fold(*w, |acc, a| current.weight_of(a).map(|v| acc.min(v)));
            if let Some(beta) = beta {
                next.raise(rule.head.clone(), beta);
            }
        }
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Classical least model of the definite parts of `rules` that survive the reduct by `atoms`.
pub fn least_model_of_reduct<'a>(
    rules: impl IntoIterator<Item = &'a Rule>,
    atoms: &AtomSet,
) -> AtomSet {
    let active: Vec<&Rule> = rules
        .into_iter()
        .filter(|r| r.neg.is_disjoint(atoms))
        .collect();
    let mut model = AtomSet::new();
    loop {
        let before = model.len();
        for r in &active {
            if !model.contains(&r.head) && r.pos.is_subset(&model) {
                model.insert(r.head.clone());
            }
        }
        if model.len() == before {
            return model;
        }
    }
}

/// True iff the rules can be ordered so that each positive body is supported by earlier heads.
pub fn is_grounded<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> bool {
    let mut pending: Vec<&Rule> = rules.into_iter().collect();
    let mut heads = AtomSet::new();
    loop {
        let before = pending.len();
        pending.retain(|r| {
            if r.pos.is_subset(&heads) {
                heads.insert(r.head.clone());
                false
            } else {
                true
            }
        });
        if pending.is_empty() {
            return true;
        }
        if pending.len() == before {
            return false;
        }
    }
}

/// Body-to-head dependencies of a program, tagged by literal polarity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    pub nodes: AtomSet,
    pub pos_edges: BTreeSet<(Atom, Atom)>,
    pub neg_edges: BTreeSet<(Atom, Atom)>,
}

impl DependencyGraph {
    pub fn new<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> Self {
        let mut g = DependencyGraph::default();
        for r in rules {
            g.nodes.extend(r.atoms().cloned());
            g.pos_edges
                .extend(r.pos.iter().map(|b| (b.clone(), r.head.clone())));
            g.neg_edges
                .extend(r.neg.iter().map(|b| (b.clone(), r.head.clone())));
        }
        g
    }

    fn petgraph(&self, with_neg: bool) -> (DiGraph<Atom, bool>, BTreeMap<Atom, NodeIndex>) {
        let mut graph = DiGraph::new();
        let index: BTreeMap<Atom, NodeIndex> = self
            .nodes
            .iter()
            .map(|a| (a.clone(), graph.add_node(a.clone())))
            .collect();
        for (from, to) in &self.pos_edges {
            graph.add_edge(index[from], index[to], false);
        }
        if with_neg {
            for (from, to) in &self.neg_edges {
                graph.add_edge(index[from], index[to], true);
            }
        }
        (graph, index)
    }

    /// A cycle made of positive edges only.
    pub fn has_positive_loop(&self) -> bool {
        is_cyclic_directed(&self.petgraph(false).0)
    }

    /// A cycle through at least one negative edge.
    pub fn has_negative_cycle(&self) -> bool {
        let (graph, index) = self.petgraph(true);
        let mut component = BTreeMap::new();
        for (i, scc) in tarjan_scc(&graph).into_iter().enumerate() {
            for n in scc {
                component.insert(n, i);
            }
        }
        self.neg_edges
            .iter()
            .any(|(from, to)| component[&index[from]] == component[&index[to]])
    }
}

/// True iff the positive dependency graph is acyclic.
pub fn positive_loop_free<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> bool {
    !DependencyGraph::new(rules).has_positive_loop()
}

/// Rules restricted to atoms that can possibly be true (heads), in index form.
struct HeadIndexed {
    heads: Vec<Atom>,
    rules: Vec<(usize, u64, u64)>,
}

impl HeadIndexed {
    fn new(rules: &BTreeSet<Rule>) -> Option<Self> {
        let heads: Vec<Atom> = rules
            .iter()
            .map(|r| r.head.clone())
            .collect::<AtomSet>()
            .into_iter()
            .collect();
        if heads.len() > 64 {
            return None;
        }
        let pos_of = |a: &Atom| heads.binary_search(a).ok();
        let mut compiled = Vec::new();
        'rules: for r in rules {
            let mut pos = 0u64;
            for a in &r.pos {
                match pos_of(a) {
                    Some(i) => pos |= 1 << i,
                    // a body atom that heads nothing is never derivable
                    None => continue 'rules,
                }
            }
            let neg = r
                .neg
                .iter()
                .filter_map(pos_of)
                .fold(0u64, |m, i| m | 1 << i);
            compiled.push((pos_of(&r.head).unwrap(), pos, neg));
        }
        Some(HeadIndexed {
            heads,
            rules: compiled,
        })
    }

    fn least_model(&self, candidate: u64) -> u64 {
        let mut model = 0u64;
        loop {
            let mut next = model;
            for &(h, pos, neg) in &self.rules {
                if neg & candidate == 0 && pos & model == pos {
                    next |= 1 << h;
                }
            }
            if next == model {
                return model;
            }
            model = next;
        }
    }

    fn to_set(&self, mask: u64) -> AtomSet {
        (0..self.heads.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.heads[i].clone())
            .collect()
    }
}

/// The unique stable model of a program without negative cycles, evaluated stratum by stratum.
fn stratified_model(rules: &BTreeSet<Rule>, graph: &DependencyGraph) -> AtomSet {
    let (pg, _) = graph.petgraph(true);
    let mut stratum_of = BTreeMap::new();
    // tarjan_scc yields components in reverse topological order
    for (i, scc) in tarjan_scc(&pg).into_iter().rev().enumerate() {
        for n in scc {
            stratum_of.insert(pg[n].clone(), i);
        }
    }
    let mut by_stratum: BTreeMap<usize, Vec<&Rule>> = BTreeMap::new();
    for r in rules {
        by_stratum.entry(stratum_of[&r.head]).or_default().push(r);
    }
    let mut model = AtomSet::new();
    for layer in by_stratum.values() {
        // negative bodies refer to lower strata, which are final
        let live: Vec<&Rule> = layer
            .iter()
            .copied()
            .filter(|r| r.neg.is_disjoint(&model))
            .collect();
        loop {
            let before = model.len();
            for r in &live {
                if r.pos.is_subset(&model) {
                    model.insert(r.head.clone());
                }
            }
            if model.len() == before {
                break;
            }
        }
    }
    model
}

/// All classical stable models, sorted.
///
/// Programs without negative cycles are evaluated directly. Otherwise every
/// subset of the head atoms is tested, which is bounded by `caps.atoms`.
pub fn classical_stable_models(rules: &BTreeSet<Rule>, caps: &Caps) -> Result<Vec<AtomSet>> {
    let graph = DependencyGraph::new(rules);
    if !graph.has_negative_cycle() {
        return Ok(vec![stratified_model(rules, &graph)]);
    }
    let n_heads = rules.iter().map(|r| &r.head).collect::<BTreeSet<_>>().len();
    if n_heads > caps.atoms {
        return Err(Error::capacity(
            "stable-model enumeration",
            "atoms",
            n_heads as u128,
            caps.atoms as u128,
        ));
    }
    let indexed = HeadIndexed::new(rules).expect("head count is within the cap");
    let mut models: Vec<AtomSet> = (0..1u64 << indexed.heads.len())
        .filter(|&s| indexed.least_model(s) == s)
        .map(|s| indexed.to_set(s))
        .collect();
    models.sort();
    Ok(models)
}

/// `interp` equals the least fixpoint of the reduct by its own projection.
pub fn is_poss_stable_model(program: &PossProgram, interp: &PossInterpretation) -> bool {
    &lfp_of_reduct(program, &interp.projection()) == interp
}

/// All poss-stable models, one per classical stable model of the projection, sorted.
pub fn poss_stable_models(program: &PossProgram, caps: &Caps) -> Result<Vec<PossInterpretation>> {
    let mut out: Vec<PossInterpretation> = classical_stable_models(&program.projection(), caps)?
        .iter()
        .map(|s| lfp_of_reduct(program, s))
        .collect();
    out.sort();
    Ok(out)
}

/// `T_B(I) ⊑ I`.
pub fn is_coherent(interp: &PossInterpretation, background: &PossProgram) -> bool {
    tp_step(background, interp).leq(interp)
}

pub fn all_coherent<'a>(
    interps: impl IntoIterator<Item = &'a PossInterpretation>,
    background: &PossProgram,
) -> bool {
    interps.into_iter().all(|i| is_coherent(i, background))
}
