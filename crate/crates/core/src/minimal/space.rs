//! Positive and negative solution spaces, as named rule streams and as the
//! class-compressed streams the solver walks.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use super::engine::{bits, first_hitting_set, CInterp, CRule, LexSubsets, Mask, Universe};
use crate::error::{Error, Result};
use crate::types::{AtomSet, PossAtom, PossInterpretation, PossRule, Weight, WeightLattice};

/// Comparison used to select relevant atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Greater,
    AtLeast,
    Equal,
}

impl Relation {
    fn holds(self, weight: u16, alpha: u16) -> bool {
        match self {
            Relation::Greater => weight > alpha,
            Relation::AtLeast => weight >= alpha,
            Relation::Equal => weight == alpha,
        }
    }
}

/// Atoms of `interp` whose weight stands in `relation` to `alpha`.
pub fn relevant_atoms(interp: &PossInterpretation, alpha: Weight, relation: Relation) -> AtomSet {
    interp
        .iter()
        .filter(|(_, w)| relation.holds(w.0, alpha.0))
        .map(|(a, _)| a.clone())
        .collect()
}

/// Which space a [`RuleSpace`] enumerates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSource {
    /// Rules that can support `atom` in `interp`.
    Positive {
        interp: PossInterpretation,
        atom: PossAtom,
    },
    /// Rules that break `interp`, optionally restricted to one of its atoms.
    Negative {
        interp: PossInterpretation,
        atom: Option<PossAtom>,
    },
    Blacklist,
    Whitelist,
}

/// A lazily enumerated, canonically ordered, duplicate-free stream of rules.
pub struct RuleSpace {
    source: SpaceSource,
    rules: Box<dyn Iterator<Item = PossRule> + Send>,
}

impl RuleSpace {
    pub fn source(&self) -> &SpaceSource {
        &self.source
    }
}

impl fmt::Debug for RuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuleSpace")
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

impl Iterator for RuleSpace {
    type Item = PossRule;

    fn next(&mut self) -> Option<PossRule> {
        self.rules.next()
    }
}

/// Admissible weights of a shape, given the positive body.
#[derive(Clone, Copy, Debug)]
pub(crate) enum WeightRange {
    /// Exactly `alpha`, or anything from `alpha` up once the body meets `level`.
    Support {
        alpha: u16,
        level: Mask,
    },
    /// Strictly above the given rank.
    Above(u16),
    Any,
}

impl WeightRange {
    pub(crate) fn for_body(self, pos: Mask, top: u16) -> RangeInclusive<u16> {
        match self {
            WeightRange::Support { alpha, level } if pos & level == 0 => alpha..=alpha,
            WeightRange::Support { alpha, .. } => alpha..=top,
            WeightRange::Above(alpha) if alpha >= top => RangeInclusive::new(1, 0),
            WeightRange::Above(alpha) => alpha + 1..=top,
            WeightRange::Any => 0..=top,
        }
    }
}

/// All rules with a fixed head whose bodies range over two masks.
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    pub head: u8,
    pub pos_range: Mask,
    pub neg_range: Mask,
    pub weights: WeightRange,
    /// The interpretation the shape was derived from; every member is active in it.
    pub owner: Mask,
}

impl Shape {
    /// Rules supporting atom `i` of `e`.
    pub(crate) fn support(e: &CInterp, i: usize, full: Mask) -> Shape {
        let alpha = e.weights[i];
        Shape {
            head: i as u8,
            pos_range: e.relevant(alpha, |w, a| w >= a),
            neg_range: full & !e.mask,
            weights: WeightRange::Support {
                alpha,
                level: e.relevant(alpha, |w, a| w == a),
            },
            owner: e.mask,
        }
    }

    /// Rules with head `i` that break `e`.
    pub(crate) fn block(e: &CInterp, i: usize, full: Mask) -> Shape {
        match e.weight(i) {
            Some(alpha) => Shape {
                head: i as u8,
                pos_range: e.relevant(alpha, |w, a| w > a),
                neg_range: full & !e.mask,
                weights: WeightRange::Above(alpha),
                owner: e.mask,
            },
            None => Shape {
                head: i as u8,
                pos_range: e.mask,
                neg_range: full & !e.mask,
                weights: WeightRange::Any,
                owner: e.mask,
            },
        }
    }

    /// Every rule of the shape in canonical order.
    pub(crate) fn rules(&self, top: u16) -> impl Iterator<Item = CRule> {
        let Shape {
            head,
            pos_range,
            neg_range,
            weights,
            ..
        } = self.clone();
        LexSubsets::new(pos_range).flat_map(move |pos| {
            LexSubsets::new(neg_range).flat_map(move |neg| {
                weights.for_body(pos, top).map(move |weight| CRule {
                    head,
                    pos,
                    neg,
                    weight,
                })
            })
        })
    }
}

/// `r` lies in the negative space of `e`: active there and pushing some weight above it.
pub(crate) fn blocks(r: &CRule, e: &CInterp) -> bool {
    if !r.is_active_in(e.mask) {
        return false;
    }
    match e.weight(r.head as usize) {
        None => true,
        Some(alpha) => r.weight > alpha && bits(r.pos).all(|i| e.weights[i] > alpha),
    }
}

/// `r` lies in the positive space of its head atom in `e`.
pub(crate) fn supports(r: &CRule, e: &CInterp) -> bool {
    let Some(alpha) = e.weight(r.head as usize) else {
        return false;
    };
    if r.neg & e.mask != 0 || r.pos & !e.mask != 0 || bits(r.pos).any(|i| e.weights[i] < alpha) {
        return false;
    }
    if bits(r.pos).any(|i| e.weights[i] == alpha) {
        r.weight >= alpha
    } else {
        r.weight == alpha
    }
}

/// Same as [`supports`] ignoring the weight.
pub(crate) fn supports_classically(r: &CRule, e: &CInterp) -> bool {
    let Some(alpha) = e.weight(r.head as usize) else {
        return false;
    };
    r.neg & e.mask == 0 && r.pos & !e.mask == 0 && bits(r.pos).all(|i| e.weights[i] >= alpha)
}

struct Encoded {
    universe: Arc<Universe>,
    interp: CInterp,
    top: u16,
}

fn encode(
    interp: &PossInterpretation,
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<Encoded> {
    interp.check_lattice(lattice)?;
    let mut atoms = alphabet.clone();
    atoms.extend(interp.atoms().cloned());
    let universe = Universe::new(&atoms)?;
    let encoded = universe.interp(interp);
    Ok(Encoded {
        universe: Arc::new(universe),
        interp: encoded,
        top: lattice.top().0,
    })
}

fn decoded(
    universe: Arc<Universe>,
    rules: impl Iterator<Item = CRule> + Send + 'static,
) -> impl Iterator<Item = PossRule> + Send {
    rules.map(move |r| {
        let (rule, weight) = universe.rule(&r);
        PossRule { rule, weight }
    })
}

/// Rules that can support `atom` as part of `interp`.
pub fn pos_space_atom(
    interp: &PossInterpretation,
    atom: &PossAtom,
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<RuleSpace> {
    if interp.weight_of(&atom.atom) != Some(atom.weight) {
        return Err(Error::Contract(format!(
            "{}@{} is not a member of the interpretation",
            atom.atom,
            lattice.label(atom.weight)
        )));
    }
    let enc = encode(interp, alphabet, lattice)?;
    let i = enc.universe.index(&atom.atom);
    let shape = Shape::support(&enc.interp, i, enc.universe.full());
    let rules: Vec<CRule> = shape.rules(enc.top).collect();
    Ok(RuleSpace {
        source: SpaceSource::Positive {
            interp: interp.clone(),
            atom: atom.clone(),
        },
        rules: Box::new(decoded(enc.universe, rules.into_iter())),
    })
}

/// Programs choosing one supporting rule per atom of `interp`, in lexicographic order.
pub fn pos_space(
    interp: &PossInterpretation,
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<impl Iterator<Item = crate::types::PossProgram>> {
    let factors: Vec<Vec<PossRule>> = interp
        .poss_atoms()
        .map(|eps| pos_space_atom(interp, &eps, alphabet, lattice).map(Iterator::collect))
        .collect::<Result<_>>()?;
    Ok(Product::new(factors).map(|picks| picks.into_iter().collect()))
}

/// Odometer over the Cartesian product of non-empty factor lists.
struct Product<T> {
    factors: Vec<Vec<T>>,
    cursor: Option<Vec<usize>>,
    done: bool,
}

impl<T: Clone> Product<T> {
    fn new(factors: Vec<Vec<T>>) -> Self {
        let done = factors.iter().any(Vec::is_empty);
        Product {
            factors,
            cursor: None,
            done,
        }
    }
}

impl<T: Clone> Iterator for Product<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        match &mut self.cursor {
            None => self.cursor = Some(vec![0; self.factors.len()]),
            Some(cursor) => {
                let mut k = cursor.len();
                loop {
                    if k == 0 {
                        self.done = true;
                        return None;
                    }
                    k -= 1;
                    cursor[k] += 1;
                    if cursor[k] < self.factors[k].len() {
                        break;
                    }
                    cursor[k] = 0;
                }
            }
        }
        let cursor = self.cursor.as_ref().expect("cursor set above");
        Some(
            cursor
                .iter()
                .zip(&self.factors)
                .map(|(&i, f)| f[i].clone())
                .collect(),
        )
    }
}

/// Rules with the head of `atom` that break `interp`.
pub fn neg_space_atom(
    interp: &PossInterpretation,
    atom: &PossAtom,
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<RuleSpace> {
    if interp.weight_of(&atom.atom) != Some(atom.weight) {
        return Err(Error::Contract(format!(
            "{}@{} is not a member of the interpretation",
            atom.atom,
            lattice.label(atom.weight)
        )));
    }
    let enc = encode(interp, alphabet, lattice)?;
    let shape = Shape::block(
        &enc.interp,
        enc.universe.index(&atom.atom),
        enc.universe.full(),
    );
    let rules: Vec<CRule> = shape.rules(enc.top).collect();
    Ok(RuleSpace {
        source: SpaceSource::Negative {
            interp: interp.clone(),
            atom: Some(atom.clone()),
        },
        rules: Box::new(decoded(enc.universe, rules.into_iter())),
    })
}

/// Every rule that stops `interp` from being a poss-stable model of any program containing it.
pub fn neg_space(
    interp: &PossInterpretation,
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<RuleSpace> {
    let enc = encode(interp, alphabet, lattice)?;
    let full = enc.universe.full();
    let top = enc.top;
    let shapes: Vec<Shape> = (0..enc.universe.len())
        .map(|i| Shape::block(&enc.interp, i, full))
        .collect();
    let rules = shapes
        .into_iter()
        .flat_map(move |s| s.rules(top).collect::<Vec<_>>());
    Ok(RuleSpace {
        source: SpaceSource::Negative {
            interp: interp.clone(),
            atom: None,
        },
        rules: Box::new(decoded(enc.universe, rules)),
    })
}

fn union_of_neg_spaces(
    interps: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<BTreeSet<PossRule>> {
    let mut out = BTreeSet::new();
    for i in interps {
        out.extend(neg_space(i, alphabet, lattice)?);
    }
    Ok(out)
}

/// Rules that would break some positive example.
pub fn blacklist(
    positives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<RuleSpace> {
    let rules = union_of_neg_spaces(positives, alphabet, lattice)?;
    Ok(RuleSpace {
        source: SpaceSource::Blacklist,
        rules: Box::new(rules.into_iter()),
    })
}

/// Rules that break some negative example without touching any positive one.
pub fn whitelist(
    negatives: &[PossInterpretation],
    positives: &[PossInterpretation],
    alphabet: &AtomSet,
    lattice: &WeightLattice,
) -> Result<RuleSpace> {
    let banned = union_of_neg_spaces(positives, alphabet, lattice)?;
    let rules: Vec<PossRule> = union_of_neg_spaces(negatives, alphabet, lattice)?
        .into_iter()
        .filter(|r| !banned.contains(r))
        .collect();
    Ok(RuleSpace {
        source: SpaceSource::Whitelist,
        rules: Box::new(rules.into_iter()),
    })
}

/// Largest number of other examples a body may fit before class splitting is refused.
const MAX_SPLIT: usize = 24;

/// What the class streams need to know about the task.
pub(crate) struct ClassContext<'a> {
    /// Distinct masks of the examples whose status can change.
    pub examples: &'a [Mask],
    pub positives: &'a [CInterp],
    pub top: u16,
}

impl ClassContext<'_> {
    pub(crate) fn blacklisted(&self, r: &CRule) -> bool {
        self.positives.iter().any(|e| blocks(r, e))
    }
}

/// One representative per behaviour class of the rules of some shapes.
///
/// Two rules are in one class when they share head, positive body and weight
/// and are active in exactly the same relevant examples. Representatives carry
/// the lexicographically first negative body of their class and come out in
/// canonical order per shape. Blacklisted rules are skipped.
pub(crate) struct ClassStream {
    shapes: Vec<Shape>,
    shape: usize,
    bodies: Option<LexSubsets>,
    cache: Vec<CRule>,
}

impl ClassStream {
    pub(crate) fn new(shapes: Vec<Shape>) -> Self {
        ClassStream {
            shapes,
            shape: 0,
            bodies: None,
            cache: Vec::new(),
        }
    }

    /// The `i`-th representative, computing more as needed.
    pub(crate) fn get(&mut self, i: usize, ctx: &ClassContext<'_>) -> Result<Option<CRule>> {
        while self.cache.len() <= i {
            if !self.advance(ctx)? {
                return Ok(None);
            }
        }
        Ok(Some(self.cache[i]))
    }

    fn advance(&mut self, ctx: &ClassContext<'_>) -> Result<bool> {
        loop {
            let Some(shape) = self.shapes.get(self.shape) else {
                return Ok(false);
            };
            let bodies = self
                .bodies
                .get_or_insert_with(|| LexSubsets::new(shape.pos_range));
            match bodies.next() {
                Some(pos) => {
                    let shape = shape.clone();
                    self.split(&shape, pos, ctx)?;
                    return Ok(true);
                }
                None => {
                    self.shape += 1;
                    self.bodies = None;
                }
            }
        }
    }

    fn split(&mut self, shape: &Shape, pos: Mask, ctx: &ClassContext<'_>) -> Result<()> {
        let others: Vec<Mask> = ctx
            .examples
            .iter()
            .copied()
            .filter(|&j| j != shape.owner && pos & !j == 0)
            .collect();
        if others.len() > MAX_SPLIT {
            return Err(Error::capacity(
                "behaviour classes of one rule body",
                "examples",
                others.len() as u128,
                MAX_SPLIT as u128,
            ));
        }
        let mut batch = Vec::new();
        for pick in 0u64..1 << others.len() {
            let mut avoid = shape.owner;
            let mut must_hit = Vec::new();
            for (k, &j) in others.iter().enumerate() {
                if pick >> k & 1 == 1 {
                    avoid |= j;
                } else {
                    must_hit.push(j);
                }
            }
            let Some(neg) = first_hitting_set(shape.neg_range & !avoid, &must_hit) else {
                continue;
            };
            for weight in shape.weights.for_body(pos, ctx.top) {
                let r = CRule {
                    head: shape.head,
                    pos,
                    neg,
                    weight,
                };
                if !ctx.blacklisted(&r) {
                    batch.push(r);
                }
            }
        }
        batch.sort_by(CRule::canonical_cmp);
        self.cache.extend(batch);
        Ok(())
    }
}
