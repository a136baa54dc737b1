use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::types::atom::is_identifier;

/// A certainty degree, stored as its rank in the owning [`WeightLattice`].
///
/// Ranks from different lattices are not comparable in any meaningful way;
/// the lattice `check_*` helpers reject out-of-range ranks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Weight(pub(crate) u16);

impl Weight {
    pub fn rank(self) -> usize {
        self.0 as usize
    }
}

/// A finite, totally ordered set of weight labels; the last one is the supremum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightLattice {
    labels: Vec<String>,
    decimal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LabelKind {
    Decimal,
    Ordinal,
}

fn label_kind(label: &str) -> Option<LabelKind> {
    if is_decimal(label) {
        Some(LabelKind::Decimal)
    } else if is_identifier(label) {
        Some(LabelKind::Ordinal)
    } else {
        None
    }
}

pub(crate) fn is_decimal(s: &str) -> bool {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s, None),
    };
    !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

/// Exact comparison of two decimal literals.
pub(crate) fn cmp_decimal(a: &str, b: &str) -> Ordering {
    fn parts(s: &str) -> (&str, &str) {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        (int.trim_start_matches('0'), frac.trim_end_matches('0'))
    }
    let (ai, af) = parts(a);
    let (bi, bf) = parts(b);
    ai.len()
        .cmp(&bi.len())
        .then_with(|| ai.cmp(bi))
        .then_with(|| af.cmp(bf))
}

impl WeightLattice {
    /// Builds a lattice from labels listed in ascending order.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidLattice(
                "a lattice needs at least one weight".into(),
            ));
        }
        if labels.len() > u16::MAX as usize {
            return Err(Error::InvalidLattice("too many weights".into()));
        }
        let mut kind = None;
        for label in &labels {
            let k = label_kind(label).ok_or_else(|| {
                Error::InvalidLattice(format!("`{label}` is neither a decimal nor an identifier"))
            })?;
            match kind {
                None => kind = Some(k),
                Some(prev) if prev != k => {
                    return Err(Error::InvalidLattice(
                        "decimal and named weights cannot be mixed in one lattice".into(),
                    ))
                }
                Some(_) => {}
            }
        }
        let decimal = kind == Some(LabelKind::Decimal);
        for pair in labels.windows(2) {
            let ordered = if decimal {
                cmp_decimal(&pair[0], &pair[1]) == Ordering::Less
            } else {
                pair[0] != pair[1]
            };
            if !ordered {
                return Err(Error::InvalidLattice(format!(
                    "`{}` must be strictly below `{}`",
                    pair[0], pair[1]
                )));
            }
        }
        if !decimal {
            let mut seen: Vec<&String> = labels.iter().collect();
            seen.sort();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidLattice("duplicate weight label".into()));
            }
        }
        Ok(WeightLattice { labels, decimal })
    }

    /// Infers a lattice from decimal labels by sorting them numerically.
    pub fn infer_decimal<'a>(labels: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut sorted: Vec<&str> = Vec::new();
        for label in labels {
            if !is_decimal(label) {
                return Err(Error::InvalidLattice(format!(
                    "named weight `{label}` needs an explicit #order declaration"
                )));
            }
            if !sorted
                .iter()
                .any(|s| cmp_decimal(s, label) == Ordering::Equal)
            {
                sorted.push(label);
            }
        }
        sorted.sort_by(|a, b| cmp_decimal(a, b));
        Self::new(sorted)
    }

    /// The one-element lattice `{1}` used by ordinary programs.
    pub fn unit() -> Self {
        WeightLattice {
            labels: vec!["1".to_string()],
            decimal: true,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_decimal(&self) -> bool {
        self.decimal
    }

    pub fn top(&self) -> Weight {
        Weight((self.labels.len() - 1) as u16)
    }

    pub fn bottom(&self) -> Weight {
        Weight(0)
    }

    pub fn weights(&self) -> impl DoubleEndedIterator<Item = Weight> + ExactSizeIterator {
        (0..self.labels.len() as u16).map(Weight)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn contains(&self, w: Weight) -> bool {
        w.rank() < self.labels.len()
    }

    pub fn label(&self, w: Weight) -> &str {
        &self.labels[w.rank()]
    }

    /// Looks a label up; decimal lattices match by numeric value.
    pub fn weight(&self, label: &str) -> Option<Weight> {
        let pos = if self.decimal && is_decimal(label) {
            self.labels
                .iter()
                .position(|l| cmp_decimal(l, label) == Ordering::Equal)
        } else {
            self.labels.iter().position(|l| l == label)
        };
        pos.map(|i| Weight(i as u16))
    }

    pub fn resolve(&self, label: &str) -> Result<Weight> {
        self.weight(label)
            .ok_or_else(|| Error::LatticeMismatch(label.to_string()))
    }

    pub(crate) fn check(&self, w: Weight) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch(format!("#{}", w.rank())))
        }
    }
}

impl fmt::Debug for WeightLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels.join(" < "))
    }
}
