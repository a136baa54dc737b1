//! Enumeration caps, resource limits and the cooperative guard the solvers poll.

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Upper bounds on the brute-force parts of the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of candidate atoms when enumerating stable models.
    pub atoms: usize,
    /// Maximum number of total interpretations to enumerate.
    pub total_interps: u128,
    /// Candidate budget for the minimal-solution search.
    pub budget: u64,
    /// Maximum number of unconstrained atoms in a partial interpretation.
    pub denotation: usize,
    /// Candidate bound for minimal hitting sets.
    pub hitting_sets: u128,
    /// Rounds of the complete-task refinement loop.
    pub complete_rounds: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            atoms: 20,
            total_interps: 1 << 16,
            budget: 50_000_000,
            denotation: 12,
            hitting_sets: 1 << 20,
            complete_rounds: 16,
        }
    }
}

impl Caps {
    /// Applies overrides written as `atoms=N,total=N,budget=N`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::InvalidTask(format!("cap override `{item}` is not key=value"))
            })?;
            let bad =
                || Error::InvalidTask(format!("cap override `{item}` has a non-numeric value"));
            match key.trim() {
                "atoms" => self.atoms = value.trim().parse().map_err(|_| bad())?,
                "total" => self.total_interps = value.trim().parse().map_err(|_| bad())?,
                "budget" => self.budget = value.trim().parse().map_err(|_| bad())?,
                other => return Err(Error::InvalidTask(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }

    /// Defaults overridden by the `POSSLOG_CAPS` environment variable when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("POSSLOG_CAPS") {
            Ok(spec) => Caps::default().with_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }
}

/// Reports the bytes currently allocated by the process.
pub type MemoryProbe = fn() -> usize;

#[derive(Clone, Copy, Debug)]
pub struct MemoryLimit {
    pub probe: MemoryProbe,
    pub baseline: usize,
    pub budget: usize,
}

/// Everything a solver needs besides the task itself.
#[derive(Clone, Debug, Default)]
pub struct SolveConfig {
    pub caps: Caps,
    pub deadline: Option<Instant>,
    pub memory: Option<MemoryLimit>,
}

impl SolveConfig {
    pub fn with_caps(caps: Caps) -> Self {
        SolveConfig {
            caps,
            ..Self::default()
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn guard(&self) -> Guard<'_> {
        Guard {
            config: self,
            spent: Cell::new(0),
            polls: Cell::new(0),
        }
    }
}

/// Counts candidates against the budget and polls deadline and memory.
///
/// Counters use interior mutability so several search phases can share one guard.
#[derive(Debug)]
pub struct Guard<'a> {
    config: &'a SolveConfig,
    spent: Cell<u64>,
    polls: Cell<u32>,
}

impl Guard<'_> {
    pub fn caps(&self) -> &Caps {
        &self.config.caps
    }

    pub fn spent(&self) -> u64 {
        self.spent.get()
    }

    /// Charges `n` candidates.
    pub fn charge(&self, n: u64) -> Result<()> {
        let spent = self.spent.get().saturating_add(n);
        self.spent.set(spent);
        if spent > self.config.caps.budget {
            return Err(Error::BudgetExhausted(self.config.caps.budget));
        }
        let polls = self.polls.get().wrapping_add(1);
        self.polls.set(polls);
        if polls.is_multiple_of(64) {
            self.check_limits()?;
        }
        Ok(())
    }

    /// Checks deadline and memory immediately.
    pub fn check_limits(&self) -> Result<()> {
        if let Some(deadline) = self.config.deadline {
            if Instant::now() >= deadline {
                return Err(Error::Timeout);
            }
        }
        if let Some(mem) = self.config.memory {
            if (mem.probe)().saturating_sub(mem.baseline) > mem.budget {
                return Err(Error::MemoryBudget(mem.budget));
            }
        }
        Ok(())
    }
}
