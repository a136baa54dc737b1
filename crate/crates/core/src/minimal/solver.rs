//! The minimal-solution solver: seeds in increasing size, then the cheapest patch
//! that blocks every negative example still stable.

use std::collections::HashMap;
use std::time::Instant;

use log::debug;

use super::engine::{CProgram, CRule, Universe};
use super::seeds::SearchSpace;
use super::space::{blocks, ClassStream, Shape};
use crate::config::SolveConfig;
use crate::error::{Error, Result};
use crate::induction::{
    existence, verify_solution, InductionTask, Outcome, SolutionReport, SolveStats,
};
use crate::types::PossProgram;

/// A solution with the fewest rules, or `Fail` when none exists.
pub fn ilpsmmin(task: &InductionTask, config: &SolveConfig) -> Result<SolutionReport> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    if !existence(task, &config.caps)? {
        stats.elapsed = start.elapsed();
        return Ok(SolutionReport::new(Outcome::Fail, stats));
    }
    let space = SearchSpace::new(task, config)?;
    let mut patcher = Patcher {
        space: &space,
        streams: HashMap::new(),
        psm_checks: 0,
    };
    // `None` stands for an unbounded norm.
    let mut best: Option<(usize, CProgram)> = None;
    let mut seeds = space.seeds();
    while let Some(seed) = seeds.next_raw()? {
        stats.candidates += 1;
        if best.as_ref().is_some_and(|(n, _)| seed.cost >= *n) {
            break;
        }
        let q = join(&space.background, &seed.program);
        patcher.psm_checks += space.positives.len() as u64;
        if !space.positives.iter().all(|e| q.is_psm(e)) {
            debug!("seed of cost {} loses a positive example", seed.cost);
            continue;
        }
        let open: Vec<usize> = space
            .open_negatives
            .iter()
            .copied()
            .filter(|&n| q.is_coherent(&space.negatives[n]))
            .collect();
        patcher.psm_checks += open.len() as u64;
        if !open.iter().any(|&n| q.is_psm(&space.negatives[n])) {
            debug!("seed of cost {} is a solution", seed.cost);
            best = Some((seed.cost, seed.program));
            break;
        }
        debug!(
            "seed of cost {} needs a patch for {} open negatives",
            seed.cost,
            open.len()
        );
        let mut search = PatchSearch {
            seed: &seed.program,
            open: &open,
            norm: best.as_ref().map(|(n, _)| *n),
            found: None,
        };
        let mut patch = Vec::new();
        for depth in 1..=open.len() {
            patcher.extend(&mut search, &mut patch, depth)?;
        }
        if let Some(found) = search.found {
            let cost = space.cost(&found);
            debug!("patched seed reaches cost {cost}");
            seeds.set_ceiling(cost);
            best = Some((cost, found));
        }
    }
    stats.candidates = stats.candidates.max(space.guard.spent());
    stats.psm_checks = patcher.psm_checks;
    let Some((_, program)) = best else {
        return Err(Error::Contract(
            "minimal search ended without a solution".into(),
        ));
    };
    let hypothesis = without_background(&space.universe, &program, &space.background);
    if !verify_solution(task, &hypothesis) {
        return Err(Error::Contract("minimal hypothesis does not verify".into()));
    }
    stats.elapsed = start.elapsed();
    Ok(SolutionReport::new(Outcome::Solution(hypothesis), stats))
}

fn join(a: &CProgram, b: &CProgram) -> CProgram {
    let mut out = a.clone();
    for r in &b.rules {
        out.join_rule(*r);
    }
    out
}

fn without_background(universe: &Universe, x: &CProgram, background: &CProgram) -> PossProgram {
    x.rules
        .iter()
        .filter(|r| background.weight_of(r.key()).is_none_or(|w| r.weight > w))
        .map(|r| universe.rule(r))
        .collect()
}

struct PatchSearch<'p> {
    seed: &'p CProgram,
    open: &'p [usize],
    norm: Option<usize>,
    found: Option<CProgram>,
}

/// Blocker streams per negative example, shared across seeds.
struct Patcher<'s, 'a> {
    space: &'s SearchSpace<'a>,
    streams: HashMap<usize, ClassStream>,
    psm_checks: u64,
}

impl Patcher<'_, '_> {
    fn blocker(&mut self, n: usize, i: usize) -> Result<Option<CRule>> {
        let space = self.space;
        let stream = self.streams.entry(n).or_insert_with(|| {
            let e = &space.negatives[n];
            let full = space.universe.full();
            ClassStream::new(
                (0..space.universe.len())
                    .map(|h| Shape::block(e, h, full))
                    .collect(),
            )
        });
        stream.get(i, &space.class_context())
    }

    /// Depth-first search over patches of at most `depth` more rules, always
    /// branching on the blockers of the first negative that is still stable.
    fn extend(
        &mut self,
        search: &mut PatchSearch<'_>,
        patch: &mut Vec<CRule>,
        depth: usize,
    ) -> Result<()> {
        self.space.guard.charge(1)?;
        let mut x = search.seed.clone();
        for r in patch.iter() {
            x.join_rule(*r);
        }
        let cost = self.space.cost(&x);
        if search.norm.is_some_and(|n| cost >= n) {
            return Ok(());
        }
        let q = join(&self.space.background, &x);
        let stable = search.open.iter().copied().find(|&n| {
            self.psm_checks += 1;
            q.is_psm(&self.space.negatives[n])
        });
        let Some(n) = stable else {
            search.norm = Some(cost);
            search.found = Some(x);
            return Ok(());
        };
        if depth == 0 {
            return Ok(());
        }
        let e = &self.space.negatives[n];
        let top = self.space.top;
        // raising a rule already in X costs nothing extra
        let upgrades: Vec<CRule> = x
            .rules
            .iter()
            .flat_map(|r| (r.weight + 1..=top).map(move |weight| CRule { weight, ..*r }))
            .filter(|r| blocks(r, e) && !self.space.blacklisted(r))
            .collect();
        for r in upgrades {
            patch.push(r);
            self.extend(search, patch, depth - 1)?;
            patch.pop();
        }
        let mut i = 0;
        while search.norm.is_none_or(|n| cost + 1 < n) {
            let Some(r) = self.blocker(n, i)? else {
                break;
            };
            i += 1;
            if q.weight_of(r.key()).is_some_and(|w| w >= r.weight) {
                continue;
            }
            patch.push(r);
            self.extend(search, patch, depth - 1)?;
            patch.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_task;

    fn solve(text: &str) -> SolutionReport {
        let task = parse_task(text).unwrap().into_induction_task().unwrap();
        ilpsmmin(&task, &SolveConfig::default()).unwrap()
    }

    #[test]
    fn two_facts_for_two_atoms() {
        let report = solve("#order 0.3\n[positive]\n{ p@0.3, q@0.3 }\n");
        assert_eq!(report.hypothesis().unwrap().len(), 2);
    }

    #[test]
    fn unit_negative_needs_one_rule() {
        // the initial norm |E+|·|A| + |E-| would be 1 here and hide this solution
        let report = solve("#order 1\n#atoms p\n[negative]\n{ }\n");
        assert_eq!(report.hypothesis().unwrap().len(), 1);
    }

    #[test]
    fn unsolvable_task_fails() {
        let report = solve("#order 1\n[positive]\n{ p@1 }\n[negative]\n{ p@1 }\n");
        assert_eq!(report.outcome, Outcome::Fail);
    }
}
