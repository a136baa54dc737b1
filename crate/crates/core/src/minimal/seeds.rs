//! Seeds: ⊔-combinations of one supporting program per positive example,
//! produced level by level in non-decreasing size beyond the background.

use std::collections::HashSet;

use log::debug;

use super::engine::{grounded, CInterp, CProgram, CRule, Mask, Universe};
use super::space::{blocks, supports, supports_classically, ClassContext, ClassStream, Shape};
use crate::config::{Guard, SolveConfig};
use crate::error::Result;
use crate::induction::InductionTask;
use crate::types::PossProgram;

/// A task encoded for the minimal-solution search.
pub struct SearchSpace<'a> {
    pub(crate) universe: Universe,
    pub(crate) top: u16,
    pub(crate) background: CProgram,
    pub(crate) positives: Vec<CInterp>,
    pub(crate) negatives: Vec<CInterp>,
    /// Negatives coherent with the background and incomparable with every positive.
    pub(crate) open_negatives: Vec<usize>,
    /// Distinct masks of the positives and the open negatives.
    pub(crate) examples: Vec<Mask>,
    pub(crate) guard: Guard<'a>,
}

fn comparable_masks(a: Mask, b: Mask) -> bool {
    a & !b == 0 || b & !a == 0
}

impl<'a> SearchSpace<'a> {
    pub fn new(task: &InductionTask, config: &'a SolveConfig) -> Result<Self> {
        let universe = Universe::new(task.alphabet())?;
        let background = universe.program(task.background());
        let positives: Vec<CInterp> = task
            .positives()
            .iter()
            .map(|e| universe.interp(e))
            .collect();
        let negatives: Vec<CInterp> = task
            .negatives()
            .iter()
            .map(|e| universe.interp(e))
            .collect();
        let open_negatives: Vec<usize> = negatives
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                background.is_coherent(e)
                    && !positives.iter().any(|p| comparable_masks(p.mask, e.mask))
            })
            .map(|(n, _)| n)
            .collect();
        let mut examples: Vec<Mask> = positives
            .iter()
            .map(|e| e.mask)
            .chain(open_negatives.iter().map(|&n| negatives[n].mask))
            .collect();
        examples.sort_unstable();
        examples.dedup();
        Ok(SearchSpace {
            top: task.lattice().top().0,
            universe,
            background,
            positives,
            negatives,
            open_negatives,
            examples,
            guard: config.guard(),
        })
    }

    pub(crate) fn class_context(&self) -> ClassContext<'_> {
        ClassContext {
            examples: &self.examples,
            positives: &self.positives,
            top: self.top,
        }
    }

    pub(crate) fn blacklisted(&self, r: &CRule) -> bool {
        self.positives.iter().any(|e| blocks(r, e))
    }

    /// Rules of `x` not dominated by the background.
    pub(crate) fn cost(&self, x: &CProgram) -> usize {
        x.count_minus(&self.background)
    }

    pub fn seeds(&self) -> SeedIterator<'_, 'a> {
        SeedIterator::new(self)
    }
}

/// A seed and its size beyond the background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub program: PossProgram,
    pub cost: usize,
}

pub(crate) struct RawSeed {
    pub program: CProgram,
    pub cost: usize,
}

struct Slot {
    example: usize,
    atom: usize,
    /// Index of the first slot of the same example.
    first: usize,
    last: bool,
    /// Some background rule already supports the atom.
    covered: bool,
}

struct Frame {
    fixed: Vec<CRule>,
    next: usize,
}

/// Enumerates seeds in non-decreasing cost, each exactly once.
///
/// A slot is one atom of one positive example; a seed picks one supporting rule
/// per slot such that each example's picks form a grounded program. Rules are
/// drawn from the background, from earlier picks, or from class representatives.
pub struct SeedIterator<'s, 'a> {
    space: &'s SearchSpace<'a>,
    slots: Vec<Slot>,
    streams: Vec<ClassStream>,
    level: usize,
    max_level: usize,
    ceiling: Option<usize>,
    stack: Vec<Frame>,
    chosen: Vec<CRule>,
    seen: HashSet<Vec<CRule>>,
    started: bool,
    exhausted: bool,
}

impl<'s, 'a> SeedIterator<'s, 'a> {
    fn new(space: &'s SearchSpace<'a>) -> Self {
        let full = space.universe.full();
        let mut slots = Vec::new();
        let mut streams = Vec::new();
        for (k, e) in space.positives.iter().enumerate() {
            let first = slots.len();
            for i in super::engine::bits(e.mask) {
                let covered = space
                    .background
                    .rules
                    .iter()
                    .any(|r| r.head as usize == i && supports(r, e));
                slots.push(Slot {
                    example: k,
                    atom: i,
                    first,
                    last: false,
                    covered,
                });
                streams.push(ClassStream::new(vec![Shape::support(e, i, full)]));
            }
            if slots.len() > first {
                if let Some(s) = slots.last_mut() {
                    s.last = true;
                }
            }
        }
        let max_level = slots.len();
        SeedIterator {
            space,
            slots,
            streams,
            level: 0,
            max_level,
            ceiling: None,
            stack: Vec::new(),
            chosen: Vec::new(),
            seen: HashSet::new(),
            started: false,
            exhausted: false,
        }
    }

    /// Stops before any seed whose cost reaches `bound`.
    pub fn set_ceiling(&mut self, bound: usize) {
        self.ceiling = Some(self.ceiling.map_or(bound, |c| c.min(bound)));
    }

    fn join(rules: &[CRule]) -> CProgram {
        let mut x = CProgram::default();
        for r in rules {
            x.join_rule(*r);
        }
        x
    }

    /// Lower bound on the extra cost of filling slots `from..`.
    fn lower_bound(&self, from: usize) -> usize {
        let mut heads = 0u64;
        for s in &self.slots[from..] {
            let e = &self.space.positives[s.example];
            if !s.covered
                && !self
                    .chosen
                    .iter()
                    .any(|c| supports_classically(c, e) && c.head as usize == s.atom)
            {
                heads |= 1 << s.atom;
            }
        }
        heads.count_ones() as usize
    }

    /// Background rules and earlier picks that can fill slot `d`, at every admissible weight.
    fn fixed_options(&self, d: usize) -> Vec<CRule> {
        let slot = &self.slots[d];
        let e = &self.space.positives[slot.example];
        let shape = Shape::support(e, slot.atom, self.space.universe.full());
        let mut out: Vec<CRule> = self
            .space
            .background
            .rules
            .iter()
            .chain(&self.chosen[..d])
            .filter(|r| r.head as usize == slot.atom && supports_classically(r, e))
            .flat_map(|r| {
                shape
                    .weights
                    .for_body(r.pos, self.space.top)
                    .map(move |weight| CRule { weight, ..*r })
            })
            .filter(|r| supports(r, e) && !self.space.blacklisted(r))
            .collect();
        out.sort_by(CRule::canonical_cmp);
        out.dedup();
        out
    }

    fn push_frame(&mut self, d: usize) {
        let fixed = self.fixed_options(d);
        self.stack.push(Frame { fixed, next: 0 });
    }

    pub(crate) fn next_raw(&mut self) -> Result<Option<RawSeed>> {
        loop {
            if self.exhausted {
                return Ok(None);
            }
            if self.stack.is_empty() {
                if self.started {
                    self.level += 1;
                    self.started = false;
                }
                if self.level > self.max_level || self.ceiling.is_some_and(|c| self.level >= c) {
                    self.exhausted = true;
                    return Ok(None);
                }
                self.started = true;
                if self.slots.is_empty() {
                    self.exhausted = true;
                    return Ok(Some(RawSeed {
                        program: CProgram::default(),
                        cost: 0,
                    }));
                }
                debug!("seed level {}", self.level);
                if self.lower_bound(0) <= self.level {
                    self.push_frame(0);
                }
                continue;
            }
            if let Some(seed) = self.step()? {
                return Ok(Some(seed));
            }
        }
    }

    /// Advances the deepest frame by one option.
    fn step(&mut self) -> Result<Option<RawSeed>> {
        let d = self.stack.len() - 1;
        self.chosen.truncate(d);
        let base_cost = self.space.cost(&Self::join(&self.chosen));
        let frame = self.stack.last_mut().expect("non-empty stack");
        let option = if frame.next < frame.fixed.len() {
            frame.next += 1;
            Some(frame.fixed[frame.next - 1])
        } else if base_cost >= self.level {
            // a fresh representative always adds a rule
            None
        } else {
            let i = frame.next - frame.fixed.len();
            frame.next += 1;
            self.streams[d].get(i, &self.space.class_context())?
        };
        let Some(option) = option else {
            self.stack.pop();
            return Ok(None);
        };
        self.space.guard.charge(1)?;
        self.chosen.push(option);
        let x = Self::join(&self.chosen);
        let cost = self.space.cost(&x);
        if cost > self.level {
            return Ok(None);
        }
        let slot = &self.slots[d];
        if slot.last && !grounded(&self.chosen[slot.first..=d]) {
            return Ok(None);
        }
        if d + 1 == self.slots.len() {
            if cost == self.level {
                let mut key = x.rules.clone();
                key.sort_by(CRule::canonical_cmp);
                if self.seen.insert(key) {
                    return Ok(Some(RawSeed { program: x, cost }));
                }
            }
            return Ok(None);
        }
        if cost + self.lower_bound(d + 1) <= self.level {
            self.push_frame(d + 1);
        }
        Ok(None)
    }
}

impl Iterator for SeedIterator<'_, '_> {
    type Item = Result<Seed>;

    fn next(&mut self) -> Option<Result<Seed>> {
        match self.next_raw() {
            Ok(Some(raw)) => Some(Ok(Seed {
                program: self.space.universe.decode_program(&raw.program),
                cost: raw.cost,
            })),
            Ok(None) => None,
            Err(e) => {
                self.exhausted = true;
                Some(Err(e))
            }
        }
    }
}
