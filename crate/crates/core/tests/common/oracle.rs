//! A bit-level reimplementation of the semantics for at most three atoms,
//! used as an independent oracle. Atoms are bit positions, weights are ranks
//! `1..=levels` and `0` marks an absent atom.

use posslog::{Atom, AtomSet, PossInterpretation, PossProgram, Rule, Weight, WeightLattice};

pub const NAMES: [&str; 3] = ["p", "q", "r"];

pub type Interp = [u8; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitRule {
    pub head: u8,
    pub pos: u8,
    pub neg: u8,
    pub weight: u8,
}

impl BitRule {
    pub fn active_in(&self, set: u8) -> bool {
        self.pos & !set == 0 && self.neg & set == 0
    }

    /// Rules that can never fire usefully: a positive self-loop or a body that
    /// contradicts itself. Neither can change any stability verdict.
    pub fn is_useful(&self) -> bool {
        self.pos & self.neg == 0 && self.pos & (1 << self.head) == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct World {
    pub atoms: usize,
    pub levels: u8,
}

impl World {
    pub fn lattice(&self) -> WeightLattice {
        match self.levels {
            1 => WeightLattice::unit(),
            _ => WeightLattice::new(["0.5", "1"]).unwrap(),
        }
    }

    pub fn atom(&self, i: usize) -> Atom {
        Atom::new(NAMES[i]).unwrap()
    }

    pub fn alphabet(&self) -> AtomSet {
        (0..self.atoms).map(|i| self.atom(i)).collect()
    }

    fn atoms_of(&self, set: u8) -> Vec<Atom> {
        (0..self.atoms)
            .filter(|i| set >> i & 1 == 1)
            .map(|i| self.atom(i))
            .collect()
    }

    fn index(&self, atom: &Atom) -> usize {
        NAMES
            .iter()
            .position(|n| *n == atom.name())
            .expect("oracle atom")
    }

    fn weight(&self, rank: u8) -> Weight {
        self.lattice().weights().nth(rank as usize - 1).unwrap()
    }

    pub fn full(&self) -> u8 {
        (1u8 << self.atoms) - 1
    }

    pub fn interp(&self, i: &Interp) -> PossInterpretation {
        (0..self.atoms)
            .filter(|&k| i[k] > 0)
            .map(|k| (self.atom(k), self.weight(i[k])))
            .collect()
    }

    pub fn interp_back(&self, i: &PossInterpretation) -> Interp {
        let mut out = [0; 3];
        for (atom, w) in i.iter() {
            out[self.index(atom)] = w.rank() as u8 + 1;
        }
        out
    }

    pub fn rule(&self, r: &BitRule) -> (Rule, Weight) {
        (
            Rule::new(
                self.atom(r.head as usize),
                self.atoms_of(r.pos),
                self.atoms_of(r.neg),
            ),
            self.weight(r.weight),
        )
    }

    pub fn rule_back(&self, rule: &Rule, w: Weight) -> BitRule {
        let mask = |s: &AtomSet| s.iter().fold(0u8, |m, a| m | 1 << self.index(a));
        BitRule {
            head: self.index(&rule.head) as u8,
            pos: mask(&rule.pos),
            neg: mask(&rule.neg),
            weight: w.rank() as u8 + 1,
        }
    }

    pub fn program(&self, rules: &[BitRule]) -> PossProgram {
        let mut out = PossProgram::new();
        for r in rules {
            let (rule, w) = self.rule(r);
            out.insert(rule, w);
        }
        out
    }

    pub fn program_back(&self, p: &PossProgram) -> Vec<BitRule> {
        p.iter().map(|(r, w)| self.rule_back(r, w)).collect()
    }

    pub fn interps(&self) -> Vec<Interp> {
        let base = self.levels as usize + 1;
        (0..base.pow(self.atoms as u32))
            .map(|mut code| {
                let mut out = [0; 3];
                for slot in out.iter_mut().take(self.atoms) {
                    *slot = (code % base) as u8;
                    code /= base;
                }
                out
            })
            .collect()
    }

    /// Every rule over the alphabet at every weight.
    pub fn rule_universe(&self) -> Vec<BitRule> {
        let mut out = Vec::new();
        for head in 0..self.atoms as u8 {
            for pos in 0..=self.full() {
                for neg in 0..=self.full() {
                    for weight in 1..=self.levels {
                        out.push(BitRule {
                            head,
                            pos,
                            neg,
                            weight,
                        });
                    }
                }
            }
        }
        out
    }
}

pub fn mask(i: &Interp) -> u8 {
    i.iter()
        .enumerate()
        .fold(0, |m, (k, &w)| if w > 0 { m | 1 << k } else { m })
}

pub fn leq(a: &Interp, b: &Interp) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// The immediate consequence of `rules` in `i`.
pub fn tp(rules: &[BitRule], i: &Interp) -> Interp {
    let set = mask(i);
    let mut out = [0; 3];
    for r in rules.iter().filter(|r| r.active_in(set)) {
        let beta = (0..3)
            .filter(|k| r.pos >> k & 1 == 1)
            .map(|k| i[k])
            .fold(r.weight, u8::min);
        let h = r.head as usize;
        out[h] = out[h].max(beta);
    }
    out
}

/// Least fixpoint of the reduct of `rules` by `set`.
pub fn lfp(rules: &[BitRule], set: u8) -> Interp {
    let reduct: Vec<BitRule> = rules
        .iter()
        .filter(|r| r.neg & set == 0)
        .map(|r| BitRule { neg: 0, ..*r })
        .collect();
    let mut cur = [0; 3];
    loop {
        let next = tp(&reduct, &cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn is_psm(rules: &[BitRule], i: &Interp) -> bool {
    lfp(rules, mask(i)) == *i
}

pub fn psms(world: &World, rules: &[BitRule]) -> Vec<Interp> {
    world
        .interps()
        .into_iter()
        .filter(|i| is_psm(rules, i))
        .collect()
}

pub fn classical_models(world: &World, rules: &[BitRule]) -> Vec<u8> {
    (0..=world.full())
        .filter(|&s| mask(&lfp(rules, s)) == s)
        .collect()
}

pub fn coherent(i: &Interp, rules: &[BitRule]) -> bool {
    leq(&tp(rules, i), i)
}

pub fn solves(rules: &[BitRule], pos: &[Interp], neg: &[Interp]) -> bool {
    pos.iter().all(|e| is_psm(rules, e)) && !neg.iter().any(|e| is_psm(rules, e))
}

/// Atoms of some positive that no active rule of `rules` can derive at its weight.
fn unsupported(rules: &[BitRule], pos: &[Interp]) -> u8 {
    let mut out = 0;
    for e in pos {
        let set = mask(e);
        for (k, &level) in e.iter().enumerate() {
            if level > 0
                && !rules
                    .iter()
                    .any(|r| r.head as usize == k && r.weight >= level && r.active_in(set))
            {
                out |= 1 << k;
            }
        }
    }
    out
}

/// Exhaustive search for a hypothesis of at most `max_rules` rules.
///
/// Candidates are restricted to useful rules active in some example: any other
/// rule leaves every example's stability unchanged, so a smallest solution
/// never contains one. Branches are cut when more distinct heads are still
/// unsupported than rules remain.
pub fn find_hypothesis(
    world: &World,
    background: &[BitRule],
    pos: &[Interp],
    neg: &[Interp],
    max_rules: usize,
) -> Option<Vec<BitRule>> {
    let examples: Vec<u8> = pos.iter().chain(neg).map(mask).collect();
    let candidates: Vec<BitRule> = world
        .rule_universe()
        .into_iter()
        .filter(|r| r.is_useful() && examples.iter().any(|&s| r.active_in(s)))
        .collect();
    let mut program = background.to_vec();
    let base = program.len();
    fn dfs(
        start: usize,
        base: usize,
        max_rules: usize,
        candidates: &[BitRule],
        program: &mut Vec<BitRule>,
        pos: &[Interp],
        neg: &[Interp],
    ) -> bool {
        if solves(program, pos, neg) {
            return true;
        }
        let used = program.len() - base;
        if used == max_rules || unsupported(program, pos).count_ones() as usize > max_rules - used {
            return false;
        }
        for (j, r) in candidates.iter().enumerate().skip(start) {
            program.push(*r);
            if dfs(j + 1, base, max_rules, candidates, program, pos, neg) {
                return true;
            }
            program.pop();
        }
        false
    }
    dfs(0, base, max_rules, &candidates, &mut program, pos, neg).then(|| program.split_off(base))
}
