use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;
use crate::types::{Atom, AtomSet, Weight, WeightLattice};

/// A normal rule `head :- pos, not neg`. Bodies are sets, so literal order never matters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Atom,
    pub pos: AtomSet,
    pub neg: AtomSet,
}

impl Rule {
    pub fn new(
        head: Atom,
        pos: impl IntoIterator<Item = Atom>,
        neg: impl IntoIterator<Item = Atom>,
    ) -> Self {
        Rule {
            head,
            pos: pos.into_iter().collect(),
            neg: neg.into_iter().collect(),
        }
    }

    pub fn fact(head: Atom) -> Self {
        Rule::new(head, [], [])
    }

    pub fn is_definite(&self) -> bool {
        self.neg.is_empty()
    }

    /// The definite part kept by a reduct.
    pub fn positive_part(&self) -> Rule {
        Rule {
            head: self.head.clone(),
            pos: self.pos.clone(),
            neg: AtomSet::new(),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> + '_ {
        std::iter::once(&self.head)
            .chain(&self.pos)
            .chain(&self.neg)
    }

    /// Pos ⊆ I and Neg ∩ I = ∅ on a plain atom set.
    pub fn is_active_in(&self, interp: &AtomSet) -> bool {
        self.pos.is_subset(interp) && self.neg.is_disjoint(interp)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        let mut body = self
            .pos
            .iter()
            .map(|a| a.to_string())
            .chain(self.neg.iter().map(|a| format!("not {a}")))
            .peekable();
        if body.peek().is_some() {
            f.write_str(" :- ")?;
            f.write_str(&body.collect::<Vec<_>>().join(", "))?;
        }
        f.write_str(".")
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A rule paired with its weight.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PossRule {
    pub rule: Rule,
    pub weight: Weight,
}

impl PossRule {
    pub fn new(rule: Rule, weight: Weight) -> Self {
        PossRule { rule, weight }
    }
}

/// A possibilistic normal program. Each classical rule occurs at most once;
/// iteration follows (head, pos, neg) order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PossProgram(BTreeMap<Rule, Weight>);

impl PossProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// ⊔-inserts a rule. Returns true when the classical rule was already present.
    pub fn insert(&mut self, rule: Rule, weight: Weight) -> bool {
        match self.0.entry(rule) {
            btree_map::Entry::Vacant(v) => {
                v.insert(weight);
                false
            }
            btree_map::Entry::Occupied(mut o) => {
                let slot = o.get_mut();
                *slot = (*slot).max(weight);
                true
            }
        }
    }

    pub fn remove(&mut self, rule: &Rule) -> Option<Weight> {
        self.0.remove(rule)
    }

    pub fn weight_of(&self, rule: &Rule) -> Option<Weight> {
        self.0.get(rule).copied()
    }

    /// Exact membership of a weighted rule.
    pub fn contains(&self, rule: &PossRule) -> bool {
        self.weight_of(&rule.rule) == Some(rule.weight)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&Rule, Weight)> + Clone + '_ {
        self.0.iter().map(|(r, w)| (r, *w))
    }

    pub fn poss_rules(&self) -> impl Iterator<Item = PossRule> + '_ {
        self.iter().map(|(r, w)| PossRule::new(r.clone(), w))
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> + '_ {
        self.0.keys()
    }

    pub fn projection(&self) -> BTreeSet<Rule> {
        self.0.keys().cloned().collect()
    }

    pub fn is_definite(&self) -> bool {
        self.0.keys().all(Rule::is_definite)
    }

    pub fn atoms(&self) -> AtomSet {
        self.0.keys().flat_map(Rule::atoms).cloned().collect()
    }

    /// ⊔: per classical rule, the larger weight wins.
    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, w) in other.iter() {
            out.insert(r.clone(), w);
        }
        out
    }

    /// Keeps rules of `self` that are absent from `other` or strictly heavier here.
    pub fn minus(&self, other: &Self) -> Self {
        PossProgram(
            self.0
                .iter()
                .filter(|(r, w)| other.weight_of(r).is_none_or(|v| **w > v))
                .map(|(r, w)| (r.clone(), *w))
                .collect(),
        )
    }

    pub fn check_lattice(&self, lattice: &WeightLattice) -> Result<()> {
        self.0.values().try_for_each(|w| lattice.check(*w))
    }

    /// Renders one `W :: rule` line per rule.
    pub fn display<'a>(&'a self, lattice: &'a WeightLattice) -> impl fmt::Display + 'a {
        DisplayProgram(self, lattice)
    }
}

struct DisplayProgram<'a>(&'a PossProgram, &'a WeightLattice);

impl fmt::Display for DisplayProgram<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, w) in self.0.iter() {
            writeln!(f, "{} :: {r}", self.1.label(w))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PossProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.0.iter().map(|(r, w)| format!("#{} :: {r}", w.rank())))
            .finish()
    }
}

impl FromIterator<(Rule, Weight)> for PossProgram {
    /// Duplicates are ⊔-merged.
    fn from_iter<T: IntoIterator<Item = (Rule, Weight)>>(iter: T) -> Self {
        let mut p = PossProgram::new();
        for (r, w) in iter {
            p.insert(r, w);
        }
        p
    }
}

impl FromIterator<PossRule> for PossProgram {
    fn from_iter<T: IntoIterator<Item = PossRule>>(iter: T) -> Self {
        iter.into_iter().map(|r| (r.rule, r.weight)).collect()
    }
}

/// Lifts a classical program to the top weight of `lattice`.
pub fn lift(rules: &BTreeSet<Rule>, lattice: &WeightLattice) -> PossProgram {
    rules.iter().map(|r| (r.clone(), lattice.top())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Atom {
        Atom::new(s).unwrap()
    }

    fn q_from_p() -> Rule {
        Rule::new(atom("q"), [atom("p")], [])
    }

    #[test]
    fn body_order_is_irrelevant() {
        let a = Rule::new(atom("c"), [atom("a"), atom("b")], [atom("d"), atom("e")]);
        let b = Rule::new(atom("c"), [atom("b"), atom("a")], [atom("e"), atom("d")]);
        assert_eq!(a, b);
    }

    #[test]
    fn join_and_minus_follow_weights() {
        let low: PossProgram = [(q_from_p(), Weight(0))].into_iter().collect();
        let high: PossProgram = [(q_from_p(), Weight(1))].into_iter().collect();
        assert_eq!(low.join(&high), high);
        assert_eq!(high.minus(&low), high);
        assert!(low.minus(&low).is_empty());
        assert!(low.minus(&high).is_empty());
        assert_eq!(high.minus(&PossProgram::new()), high);
    }

    #[test]
    fn display_puts_negative_literals_last() {
        let r = Rule::new(atom("medA"), [atom("vomiting")], [atom("medB")]);
        assert_eq!(r.to_string(), "medA :- vomiting, not medB.");
        assert_eq!(Rule::fact(atom("r")).to_string(), "r.");
    }
}
