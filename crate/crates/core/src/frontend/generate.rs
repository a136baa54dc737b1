//! Random induction tasks drawn from fixed base programs.
//!
//! Every dataset is a pure function of `(profile, seed, count)`: a single
//! `ChaCha8Rng` seeded with `seed` is consumed task by task, so output is
//! identical across runs and platforms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_rules, TaskBody, TaskDocument};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::semantics::classical_stable_models;
use crate::types::{lift, AtomSet, PossInterpretation, Rule, WeightLattice};
use crate::variants::lift_interpretation;

/// The shipped base programs. The ara-like and tce-like ones are synthetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Profile {
    MedLike,
    AraLike,
    TceLike,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::MedLike, Profile::AraLike, Profile::TceLike];

    pub fn name(self) -> &'static str {
        match self {
            Profile::MedLike => "med-like",
            Profile::AraLike => "ara-like",
            Profile::TceLike => "tce-like",
        }
    }

    fn source(self) -> &'static str {
        match self {
            Profile::MedLike => include_str!("../../fixtures/bases/med-like.lp"),
            Profile::AraLike => include_str!("../../fixtures/bases/ara-like.lp"),
            Profile::TceLike => include_str!("../../fixtures/bases/tce-like.lp"),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::InvalidTask(format!(
                    "unknown profile `{s}` (med-like, ara-like, tce-like)"
                ))
            })
    }
}

/// The base program of `profile`, in canonical rule order.
pub fn base_program(profile: Profile) -> BTreeSet<Rule> {
    parse_rules(profile.source()).expect("shipped base programs parse")
}

/// One axis value per grid dimension.
struct Cell {
    background: usize,
    positives: Positives,
    negatives: usize,
}

enum Positives {
    /// Each stable model is kept with probability one half.
    Random,
    /// Bit `i` keeps the `i`-th stable model.
    Mask(usize),
}

fn cell(profile: Profile, index: usize, rng: &mut ChaCha8Rng, base_len: usize) -> Cell {
    match profile {
        Profile::MedLike => Cell {
            background: rng.gen_range(0..=base_len),
            positives: Positives::Random,
            negatives: rng.gen_range(0..=5),
        },
        Profile::AraLike => {
            let k = index % 100;
            Cell {
                background: [0, 6, 12, 18, 24][k / 20],
                positives: Positives::Mask(k / 5 % 4),
                negatives: k % 5,
            }
        }
        Profile::TceLike => {
            let k = index % 24;
            Cell {
                background: [15, 30, 45][k / 8],
                positives: Positives::Mask(k / 4 % 2),
                negatives: [0, 5, 10, 15][k % 4],
            }
        }
    }
}

/// `count` tasks of `profile`, reproducible from `seed`.
pub fn generate_dataset(profile: Profile, seed: u64, count: usize) -> Vec<TaskDocument> {
    let base: Vec<Rule> = base_program(profile).into_iter().collect();
    let models = classical_stable_models(&base.iter().cloned().collect(), &Caps::default())
        .expect("base programs are within the enumeration caps");
    let hb: Vec<_> = base
        .iter()
        .flat_map(Rule::atoms)
        .cloned()
        .collect::<AtomSet>()
        .into_iter()
        .collect();
    let lattice = WeightLattice::unit();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = count.max(1).to_string().len().max(3);
    (0..count)
        .map(|index| {
            let cell = cell(profile, index, &mut rng, base.len());
            let mut rules = base.clone();
            rules.shuffle(&mut rng);
            rules.truncate(cell.background);
            let background = lift(&rules.into_iter().collect(), &lattice);
            let positives: Vec<PossInterpretation> = models
                .iter()
                .enumerate()
                .filter(|(i, _)| match cell.positives {
                    Positives::Random => rng.gen_bool(0.5),
                    Positives::Mask(m) => m >> i & 1 == 1,
                })
                .map(|(_, m)| lift_interpretation(m, &lattice))
                .collect();
            let mut negatives: Vec<AtomSet> = Vec::new();
            // stops early only if the Herbrand base is too small for distinct picks
            let available = 1u128 << hb.len().min(100);
            while negatives.len() < cell.negatives && (negatives.len() as u128) < available {
                let e: AtomSet = hb.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                if !negatives.contains(&e) {
                    negatives.push(e);
                }
            }
            let mut doc = TaskDocument {
                name: Some(format!("{profile}-{index:0width$}")),
                profile: Some(profile.name().to_string()),
                seed: Some(seed),
                lattice: lattice.clone(),
                atoms: AtomSet::new(),
                body: TaskBody::Total {
                    background,
                    positives,
                    negatives: negatives
                        .iter()
                        .map(|e| lift_interpretation(e, &lattice))
                        .collect(),
                },
            };
            doc.atoms = doc.alphabet();
            doc
        })
        .collect()
}
