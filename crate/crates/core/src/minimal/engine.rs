//! Bitmask encodings of atoms, rules and interpretations used in the search loops.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::types::{Atom, AtomSet, PossInterpretation, PossProgram, Rule, Weight};

pub(crate) type Mask = u64;

pub(crate) const MAX_ATOMS: usize = 64;

pub(crate) fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Lexicographic order of the sorted index sequences, matching `BTreeSet` order.
pub(crate) fn cmp_lex(a: Mask, b: Mask) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la.cmp(&lb);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// Mask of the bits strictly above bit `i`.
pub(crate) fn above(i: usize) -> Mask {
    if i >= 63 {
        0
    } else {
        !0u64 << (i + 1)
    }
}

/// Subsets of a base mask in lexicographic order: ∅, {a}, {a,b}, {a,b,c}, {a,c}, {b}, …
pub(crate) struct LexSubsets {
    base: Mask,
    current: Option<Mask>,
}

impl LexSubsets {
    pub(crate) fn new(base: Mask) -> Self {
        LexSubsets {
            base,
            current: None,
        }
    }
}

impl Iterator for LexSubsets {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        let next = match self.current {
            None => 0,
            Some(s) => {
                let top = if s == 0 {
                    None
                } else {
                    Some(63 - s.leading_zeros() as usize)
                };
                let deeper = match top {
                    None => self.base,
                    Some(t) => self.base & above(t),
                };
                if deeper != 0 {
                    s | (deeper & deeper.wrapping_neg())
                } else {
                    // climb until a larger sibling exists
                    let mut s = s;
                    loop {
                        if s == 0 {
                            return None;
                        }
                        let t = 63 - s.leading_zeros() as usize;
                        s &= !(1u64 << t);
                        let sibling = self.base & above(t);
                        if sibling != 0 {
                            break s | (sibling & sibling.wrapping_neg());
                        }
                    }
                }
            }
        };
        self.current = Some(next);
        Some(next)
    }
}

/// The lexicographically first subset of `allowed` meeting every set in `must_hit`.
pub(crate) fn first_hitting_set(allowed: Mask, must_hit: &[Mask]) -> Option<Mask> {
    let targets: Vec<Mask> = must_hit.iter().map(|m| m & allowed).collect();
    if targets.contains(&0) {
        return None;
    }
    // Every feasible node extends to a solution, so the walk never backtracks.
    let mut chosen = 0u64;
    let mut unhit = targets;
    let mut candidates = allowed;
    while !unhit.is_empty() {
        let mut picked = None;
        for y in bits(candidates) {
            let rest: Vec<Mask> = unhit.iter().copied().filter(|t| t >> y & 1 == 0).collect();
            if rest.iter().all(|t| t & above(y) != 0) {
                picked = Some((y, rest));
                break;
            }
        }
        let (y, rest) = picked?;
        chosen |= 1 << y;
        unhit = rest;
        candidates = allowed & above(y);
    }
    Some(chosen)
}

/// Fixed atom order shared by all encoded values of one search.
#[derive(Clone, Debug)]
pub(crate) struct Universe {
    atoms: Vec<Atom>,
}

impl Universe {
    pub(crate) fn new(alphabet: &AtomSet) -> Result<Self> {
        if alphabet.len() > MAX_ATOMS {
            return Err(Error::capacity(
                "bitmask encoding of the alphabet",
                "atoms",
                alphabet.len() as u128,
                MAX_ATOMS as u128,
            ));
        }
        Ok(Universe {
            atoms: alphabet.iter().cloned().collect(),
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.atoms.len()
    }

    pub(crate) fn full(&self) -> Mask {
        if self.atoms.len() == 64 {
            !0
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    pub(crate) fn index(&self, atom: &Atom) -> usize {
        self.atoms
            .binary_search(atom)
            .expect("atom belongs to the alphabet")
    }

    pub(crate) fn mask<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> Mask {
        atoms.into_iter().fold(0, |m, a| m | 1 << self.index(a))
    }

    pub(crate) fn set(&self, mask: Mask) -> AtomSet {
        bits(mask).map(|i| self.atoms[i].clone()).collect()
    }

    pub(crate) fn rule(&self, r: &CRule) -> (Rule, Weight) {
        (
            Rule {
                head: self.atoms[r.head as usize].clone(),
                pos: self.set(r.pos),
                neg: self.set(r.neg),
            },
            Weight(r.weight),
        )
    }

    pub(crate) fn encode_rule(&self, rule: &Rule, weight: Weight) -> CRule {
        CRule {
            head: self.index(&rule.head) as u8,
            pos: self.mask(&rule.pos),
            neg: self.mask(&rule.neg),
            weight: weight.0,
        }
    }

    pub(crate) fn interp(&self, interp: &PossInterpretation) -> CInterp {
        let mut out = CInterp::empty();
        for (a, w) in interp.iter() {
            out.set(self.index(a), w.0);
        }
        out
    }

    pub(crate) fn program(&self, p: &PossProgram) -> CProgram {
        let mut out = CProgram::default();
        for (r, w) in p.iter() {
            out.join_rule(self.encode_rule(r, w));
        }
        out
    }

    pub(crate) fn decode_program(&self, p: &CProgram) -> PossProgram {
        p.rules.iter().map(|r| self.rule(r)).collect()
    }
}

/// A weighted rule over a [`Universe`]; `weight` is a lattice rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct CRule {
    pub head: u8,
    pub pos: Mask,
    pub neg: Mask,
    pub weight: u16,
}

impl CRule {
    pub(crate) fn key(&self) -> (u8, Mask, Mask) {
        (self.head, self.pos, self.neg)
    }

    pub(crate) fn is_active_in(&self, mask: Mask) -> bool {
        self.pos & !mask == 0 && self.neg & mask == 0
    }

    /// Canonical (head, pos, neg, weight) order.
    pub(crate) fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.head
            .cmp(&other.head)
            .then_with(|| cmp_lex(self.pos, other.pos))
            .then_with(|| cmp_lex(self.neg, other.neg))
            .then_with(|| self.weight.cmp(&other.weight))
    }
}

/// An interpretation as a membership mask plus per-atom weight ranks.
///
/// Slots outside `mask` are meaningless; compare with `same`/`leq`, never derived equality.
#[derive(Clone, Debug)]
pub(crate) struct CInterp {
    pub mask: Mask,
    pub weights: [u16; MAX_ATOMS],
}

impl CInterp {
    pub(crate) fn empty() -> Self {
        CInterp {
            mask: 0,
            weights: [0; MAX_ATOMS],
        }
    }

    pub(crate) fn set(&mut self, i: usize, w: u16) {
        self.mask |= 1 << i;
        self.weights[i] = w;
    }

    pub(crate) fn weight(&self, i: usize) -> Option<u16> {
        (self.mask >> i & 1 == 1).then_some(self.weights[i])
    }

    /// Atoms whose weight stands in `keep` relation to `alpha`.
    pub(crate) fn relevant(&self, alpha: u16, keep: impl Fn(u16, u16) -> bool) -> Mask {
        bits(self.mask)
            .filter(|&i| keep(self.weights[i], alpha))
            .fold(0, |m, i| m | 1 << i)
    }

    pub(crate) fn leq(&self, other: &CInterp) -> bool {
        self.mask & !other.mask == 0 && bits(self.mask).all(|i| self.weights[i] <= other.weights[i])
    }

    pub(crate) fn same(&self, other: &CInterp) -> bool {
        self.mask == other.mask && bits(self.mask).all(|i| self.weights[i] == other.weights[i])
    }
}

/// A ⊔-normalised program: one entry per classical rule.
#[derive(Clone, Default, Debug)]
pub(crate) struct CProgram {
    pub rules: Vec<CRule>,
    index: HashMap<(u8, Mask, Mask), usize>,
}

impl CProgram {
    /// ⊔-adds a rule; returns the previous weight when the classical rule was present.
    pub(crate) fn join_rule(&mut self, r: CRule) -> Option<u16> {
        match self.index.get(&r.key()) {
            Some(&i) => {
                let old = self.rules[i].weight;
                self.rules[i].weight = old.max(r.weight);
                Some(old)
            }
            None => {
                self.index.insert(r.key(), self.rules.len());
                self.rules.push(r);
                None
            }
        }
    }

    pub(crate) fn weight_of(&self, key: (u8, Mask, Mask)) -> Option<u16> {
        self.index.get(&key).map(|&i| self.rules[i].weight)
    }

    /// Least fixpoint of the reduct by `mask`.
    pub(crate) fn lfp_reduct(&self, mask: Mask) -> CInterp {
        let active: Vec<&CRule> = self.rules.iter().filter(|r| r.neg & mask == 0).collect();
        let mut current = CInterp::empty();
        loop {
            let mut next = CInterp::empty();
            for r in &active {
                if r.pos & !current.mask != 0 {
                    continue;
                }
                let beta = bits(r.pos).fold(r.weight, |acc, i| acc.min(current.weights[i]));
                match next.weight(r.head as usize) {
                    Some(w) if w >= beta => {}
                    _ => next.set(r.head as usize, beta),
                }
            }
            if next.same(&current) {
                return current;
            }
            current = next;
        }
    }

    pub(crate) fn is_psm(&self, e: &CInterp) -> bool {
        self.lfp_reduct(e.mask).same(e)
    }

    /// One consequence step evaluated at `e`.
    pub(crate) fn tp(&self, e: &CInterp) -> CInterp {
        let mut out = CInterp::empty();
        for r in &self.rules {
            if !r.is_active_in(e.mask) {
                continue;
            }
            let beta = bits(r.pos).fold(r.weight, |acc, i| acc.min(e.weights[i]));
            match out.weight(r.head as usize) {
                Some(w) if w >= beta => {}
                _ => out.set(r.head as usize, beta),
            }
        }
        out
    }

    pub(crate) fn is_coherent(&self, e: &CInterp) -> bool {
        self.tp(e).leq(e)
    }

    /// Rules not dominated by `base` (the ⊔/− count used for hypothesis size).
    pub(crate) fn count_minus(&self, base: &CProgram) -> usize {
        self.rules
            .iter()
            .filter(|r| base.weight_of(r.key()).is_none_or(|w| r.weight > w))
            .count()
    }
}

/// Greedy saturation over a rule set with distinct heads.
pub(crate) fn grounded(rules: &[CRule]) -> bool {
    let mut derived = 0u64;
    let mut pending: Vec<&CRule> = rules.iter().collect();
    loop {
        let before = pending.len();
        pending.retain(|r| {
            if r.pos & !derived == 0 {
                derived |= 1 << r.head;
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
