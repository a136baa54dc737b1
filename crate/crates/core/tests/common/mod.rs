//! Randomized suites checked against the bit-level oracle. Shared with the
//! acceptance harness of the CLI crate, which includes this file by path.

#![allow(dead_code)]

pub mod criteria;
pub mod oracle;

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use oracle::{BitRule, Interp, World};
use posslog::induction::{existence, ilpsm, incomparable, pne, ppe};
use posslog::minimal::{neg_space, pos_space_atom};
use posslog::semantics::{
    classical_stable_models, is_coherent, is_poss_stable_model, poss_stable_models, reduct, tp_step,
};
use posslog::{ilpsmmin, Caps, InductionTask, Outcome, PossInterpretation, SolveConfig};

pub const CASES: u32 = 512;

pub type Suite = fn(u32, u64) -> Result<(), String>;

/// The suites required by the acceptance criteria, by name.
pub const SUITES: &[(&str, Suite)] = &[
    ("stable model bijection", sm_bijection),
    ("reduct-equivalent consequence", reduct_consequence),
    ("stable model incomparability", psm_incomparable),
    ("PPE/PNE guarantees", ppe_pne),
    ("coherence iff extendability", coherence_extendability),
    (
        "neg_space and stability characterization",
        space_characterization,
    ),
    ("existence vs exhaustive search", existence_agreement),
    ("ilpsmmin minimality", ilpsmmin_minimality),
];

/// A runner configuration with a fixed seed and no regression files.
pub fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(seed),
        ..Config::default()
    }
}

fn run<S: Strategy>(
    cases: u32,
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    TestRunner::new(config(cases, seed))
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub fn world() -> impl Strategy<Value = World> {
    (1..=3usize, 1..=2u8).prop_map(|(atoms, levels)| World { atoms, levels })
}

pub fn interp(w: World) -> BoxedStrategy<Interp> {
    prop::collection::vec(0..=w.levels, w.atoms)
        .prop_map(|v| {
            let mut out = [0; 3];
            out[..v.len()].copy_from_slice(&v);
            out
        })
        .boxed()
}

pub fn total_interp(w: World) -> BoxedStrategy<Interp> {
    prop::collection::vec(1..=w.levels, w.atoms)
        .prop_map(|v| {
            let mut out = [0; 3];
            out[..v.len()].copy_from_slice(&v);
            out
        })
        .boxed()
}

pub fn rule(w: World) -> BoxedStrategy<BitRule> {
    (0..w.atoms as u8, 0..=w.full(), 0..=w.full(), 1..=w.levels)
        .prop_map(|(head, pos, neg, weight)| BitRule {
            head,
            pos,
            neg,
            weight,
        })
        .boxed()
}

pub fn rules(w: World, max: usize) -> BoxedStrategy<Vec<BitRule>> {
    prop::collection::vec(rule(w), 0..=max).boxed()
}

pub fn interps(w: World, len: std::ops::RangeInclusive<usize>) -> BoxedStrategy<Vec<Interp>> {
    prop::collection::vec(interp(w), len).boxed()
}

/// A random induction task over a small world.
#[derive(Clone, Debug)]
pub struct TaskCase {
    pub world: World,
    pub background: Vec<BitRule>,
    pub positives: Vec<Interp>,
    pub negatives: Vec<Interp>,
}

impl TaskCase {
    pub fn task(&self) -> InductionTask {
        let w = &self.world;
        InductionTask::new(
            w.lattice(),
            w.alphabet(),
            w.program(&self.background),
            self.positives.iter().map(|i| w.interp(i)).collect(),
            self.negatives.iter().map(|i| w.interp(i)).collect(),
        )
        .unwrap()
    }
}

/// Skewed towards three atoms and at least one positive so that solutions
/// of several rules are common.
pub fn task_case() -> impl Strategy<Value = TaskCase> {
    let atoms = prop_oneof![1 => Just(1usize), 2 => Just(2), 6 => Just(3)];
    (atoms, 1..=2u8).prop_flat_map(|(atoms, levels)| {
        let w = World { atoms, levels };
        (rules(w, 2), interps(w, 1..=2), interps(w, 0..=3)).prop_map(
            move |(background, positives, negatives)| TaskCase {
                world: w,
                background,
                positives,
                negatives,
            },
        )
    })
}

fn sorted(mut v: Vec<Interp>) -> Vec<Interp> {
    v.sort();
    v.dedup();
    v
}

fn back_all(w: &World, v: &[PossInterpretation]) -> Vec<Interp> {
    v.iter().map(|i| w.interp_back(i)).collect()
}

/// A definite program is grounded when its rules can be ordered so each
/// positive body only uses heads of earlier rules.
fn grounded(rules: &[BitRule]) -> bool {
    let mut derived = 0u8;
    let mut left: Vec<&BitRule> = rules.iter().collect();
    while !left.is_empty() {
        let before = left.len();
        left.retain(|r| {
            if r.pos & !derived == 0 {
                derived |= 1 << r.head;
                false
            } else {
                true
            }
        });
        if left.len() == before {
            return false;
        }
    }
    true
}

pub fn sm_bijection(cases: u32, seed: u64) -> Result<(), String> {
    let strategy = world().prop_flat_map(|w| (Just(w), rules(w, 4)));
    run(cases, seed, strategy, |(w, rules)| {
        let program = w.program(&rules);
        let lib = sorted(back_all(
            &w,
            &poss_stable_models(&program, &Caps::default()).unwrap(),
        ));
        prop_assert_eq!(&lib, &sorted(oracle::psms(&w, &rules)));
        let mut projected: Vec<u8> = lib.iter().map(oracle::mask).collect();
        projected.sort();
        let before = projected.len();
        projected.dedup();
        prop_assert_eq!(before, projected.len(), "projection is not injective");
        let classical = oracle::classical_models(&w, &rules);
        prop_assert_eq!(&projected, &classical);
        let lib_classical: Vec<u8> =
            classical_stable_models(&program.projection(), &Caps::default())
                .unwrap()
                .iter()
                .map(|s| {
                    let i =
                        w.interp_back(&s.iter().map(|a| (a.clone(), w.lattice().top())).collect());
                    oracle::mask(&i)
                })
                .collect::<BTreeSet<u8>>()
                .into_iter()
                .collect();
        prop_assert_eq!(&lib_classical, &classical);
        Ok(())
    })
}

pub fn reduct_consequence(cases: u32, seed: u64) -> Result<(), String> {
    let strategy = world().prop_flat_map(|w| (Just(w), rules(w, 4), interp(w)));
    run(cases, seed, strategy, |(w, rules, i)| {
        let program = w.program(&rules);
        let interp = w.interp(&i);
        let direct = tp_step(&program, &interp);
        prop_assert_eq!(
            &tp_step(&reduct(&program, &interp.projection()), &interp),
            &direct
        );
        prop_assert_eq!(w.interp_back(&direct), oracle::tp(&rules, &i));
        Ok(())
    })
}

pub fn psm_incomparable(cases: u32, seed: u64) -> Result<(), String> {
    let strategy = world().prop_flat_map(|w| (Just(w), rules(w, 5)));
    run(cases, seed, strategy, |(w, rules)| {
        let models = poss_stable_models(&w.program(&rules), &Caps::default()).unwrap();
        for (k, a) in models.iter().enumerate() {
            for b in &models[k + 1..] {
                let (pa, pb) = (a.projection(), b.projection());
                prop_assert!(
                    !pa.is_subset(&pb) && !pb.is_subset(&pa),
                    "{pa:?} and {pb:?} are comparable"
                );
            }
        }
        Ok(())
    })
}

pub fn ppe_pne(cases: u32, seed: u64) -> Result<(), String> {
    let strategy = world().prop_flat_map(|w| {
        (
            Just(w),
            interps(w, 1..=3),
            total_interp(w),
            rules(w, 3),
            interps(w, 0..=3),
            interps(w, 0..=2),
        )
    });
    run(
        cases,
        seed,
        strategy,
        |(w, set, total, background, sn, sp)| {
            let alphabet = w.alphabet();
            let lattice = w.lattice();
            let set = sorted(set);
            let lifted: Vec<PossInterpretation> = set.iter().map(|i| w.interp(i)).collect();
            if incomparable(&lifted) {
                let program = oracle_rules(&w, &ppe(&lifted, &alphabet));
                prop_assert_eq!(&sorted(oracle::psms(&w, &program)), &set);
            }

            if oracle::coherent(&total, &background) {
                let mut program = background.clone();
                program.extend(oracle_rules(&w, &ppe(&[w.interp(&total)], &alphabet)));
                prop_assert_eq!(oracle::psms(&w, &program), vec![total]);
            }

            let negatives: Vec<PossInterpretation> = sn.iter().map(|i| w.interp(i)).collect();
            let positives: Vec<PossInterpretation> = sp.iter().map(|i| w.interp(i)).collect();
            let mut program = background.clone();
            program.extend(oracle_rules(
                &w,
                &pne(&negatives, &positives, &alphabet, &lattice),
            ));
            for i in &sn {
                let m = oracle::mask(i);
                let clear = sp.iter().all(|j| {
                    let n = oracle::mask(j);
                    m & !n != 0 && n & !m != 0
                });
                if m != w.full() && clear {
                    prop_assert!(!oracle::is_psm(&program, i), "{i:?} survives PNE");
                }
            }
            Ok(())
        },
    )
}

fn oracle_rules(w: &World, p: &posslog::PossProgram) -> Vec<BitRule> {
    w.program_back(p)
}

pub fn coherence_extendability(cases: u32, seed: u64) -> Result<(), String> {
    let strategy = world().prop_flat_map(|w| (Just(w), interp(w), rules(w, 3), rules(w, 3)));
    run(cases, seed, strategy, |(w, i, background, extra)| {
        let interp = w.interp(&i);
        let coherent = is_coherent(&interp, &w.program(&background));
        prop_assert_eq!(coherent, oracle::coherent(&i, &background));
        if coherent {
            let mut program = background.clone();
            program.extend(oracle_rules(
                &w,
                &ppe(std::slice::from_ref(&interp), &w.alphabet()),
            ));
            prop_assert!(oracle::is_psm(&program, &i), "ppe does not extend {i:?}");
        }
        let mut program = background.clone();
        program.extend(&extra);
        if oracle::is_psm(&program, &i) {
            prop_assert!(coherent, "{i:?} is stable in an extension but incoherent");
        }
        Ok(())
    })
}

pub fn space_characterization(cases: u32, seed: u64) -> Result<(), String> {
    let strategy = world().prop_flat_map(|w| (Just(w), interp(w), rules(w, 5)));
    run(cases, seed, strategy, |(w, i, rules)| {
        let lattice = w.lattice();
        let alphabet = w.alphabet();
        let interp = w.interp(&i);
        let program = w.program(&rules);

        let negative: BTreeSet<BitRule> = neg_space(&interp, &alphabet, &lattice)
            .unwrap()
            .map(|r| w.rule_back(&r.rule, r.weight))
            .collect();
        let expected: BTreeSet<BitRule> = w
            .rule_universe()
            .into_iter()
            .filter(|r| !oracle::leq(&oracle::tp(&[*r], &i), &i))
            .collect();
        prop_assert_eq!(&negative, &expected);

        let canonical = w.program_back(&program);
        let hits_negative = canonical.iter().any(|r| negative.contains(r));
        prop_assert_eq!(!is_coherent(&interp, &program), hits_negative);

        let stable = is_poss_stable_model(&program, &interp);
        prop_assert_eq!(stable, oracle::is_psm(&rules, &i));

        let mut choices: Vec<Vec<BitRule>> = Vec::new();
        for atom in interp.poss_atoms() {
            let support: BTreeSet<BitRule> = pos_space_atom(&interp, &atom, &alphabet, &lattice)
                .unwrap()
                .map(|r| w.rule_back(&r.rule, r.weight))
                .collect();
            choices.push(
                canonical
                    .iter()
                    .filter(|r| support.contains(r))
                    .copied()
                    .collect(),
            );
        }
        let set = oracle::mask(&i);
        let supported = product(&choices).into_iter().any(|h| {
            let reduced: Vec<BitRule> = h.iter().filter(|r| r.neg & set == 0).copied().collect();
            reduced.len() == h.len() && grounded(&reduced)
        });
        prop_assert_eq!(stable, !hits_negative && supported);
        Ok(())
    })
}

fn product(choices: &[Vec<BitRule>]) -> Vec<Vec<BitRule>> {
    choices.iter().fold(vec![Vec::new()], |acc, options| {
        acc.iter()
            .flat_map(|prefix| {
                options.iter().map(move |r| {
                    let mut next = prefix.clone();
                    next.push(*r);
                    next
                })
            })
            .collect()
    })
}

pub fn existence_agreement(cases: u32, seed: u64) -> Result<(), String> {
    run(cases, seed, task_case(), |case| {
        let task = case.task();
        let w = case.world;
        let pos = back_all(&w, task.positives());
        let neg = back_all(&w, task.negatives());
        let exists = existence(&task, &Caps::default()).unwrap();
        let small = oracle::find_hypothesis(&w, &case.background, &pos, &neg, 3);
        let report = ilpsm(&task, &SolveConfig::default()).unwrap();
        let witness = match &report.outcome {
            Outcome::Solution(h) => {
                let mut program = case.background.clone();
                program.extend(w.program_back(h));
                prop_assert!(
                    oracle::solves(&program, &pos, &neg),
                    "ilpsm output is not a solution"
                );
                true
            }
            Outcome::Fail => false,
            Outcome::Inconclusive => return Err(TestCaseError::fail("ilpsm inconclusive")),
        };
        prop_assert_eq!(exists, witness, "existence and ilpsm disagree");
        prop_assert_eq!(
            exists,
            small.is_some() || witness,
            "small solution {:?} missed",
            small
        );
        Ok(())
    })
}

pub fn ilpsmmin_minimality(cases: u32, seed: u64) -> Result<(), String> {
    run(cases, seed, task_case(), |case| {
        let task = case.task();
        let w = case.world;
        let pos = back_all(&w, task.positives());
        let neg = back_all(&w, task.negatives());
        let report = ilpsmmin(&task, &SolveConfig::default()).unwrap();
        match &report.outcome {
            Outcome::Solution(h) => {
                let hypothesis = w.program_back(h);
                let mut program = case.background.clone();
                program.extend(&hypothesis);
                prop_assert!(
                    oracle::solves(&program, &pos, &neg),
                    "ilpsmmin output is not a solution"
                );
                if let Some(smaller) = hypothesis.len().checked_sub(1) {
                    let found = oracle::find_hypothesis(&w, &case.background, &pos, &neg, smaller);
                    prop_assert!(
                        found.is_none(),
                        "{:?} beats {} rules",
                        found,
                        hypothesis.len()
                    );
                }
            }
            Outcome::Fail => prop_assert!(!existence(&task, &Caps::default()).unwrap()),
            Outcome::Inconclusive => return Err(TestCaseError::fail("ilpsmmin inconclusive")),
        }
        Ok(())
    })
}
