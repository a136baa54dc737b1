//! The benchmark harness: one row per task, failures included.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::alloc::allocated;
use super::{TaskBody, TaskDocument};
use crate::config::{Caps, MemoryLimit, SolveConfig};
use crate::error::{Error, Result};
use crate::induction::{existence, ilpsm, Outcome};
use crate::minimal::ilpsmmin;
use crate::variants::{partial_obstacles, solve_partial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ilpsm,
    Ilpsmmin,
    Exists,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ilpsm" => Ok(Algorithm::Ilpsm),
            "ilpsmmin" => Ok(Algorithm::Ilpsmmin),
            "exists" => Ok(Algorithm::Exists),
            _ => Err(Error::InvalidTask(format!(
                "unknown algorithm `{s}` (ilpsm, ilpsmmin, exists)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Status {
    #[serde(rename = "Success")]
    Success,
    #[serde(rename = "UNSAT")]
    Unsat,
    #[serde(rename = "Fail-timeout")]
    FailTimeout,
    #[serde(rename = "Fail-memory-budget")]
    FailMemoryBudget,
    /// A task the solver rejected outright, such as a malformed variant.
    #[serde(rename = "Fail-error")]
    FailError,
}

impl Status {
    pub fn is_fail(self) -> bool {
        matches!(
            self,
            Status::FailTimeout | Status::FailMemoryBudget | Status::FailError
        )
    }

    fn of_error(e: &Error) -> Self {
        match e {
            Error::Timeout | Error::BudgetExhausted(_) => Status::FailTimeout,
            Error::MemoryBudget(_) | Error::Capacity { .. } => Status::FailMemoryBudget,
            _ => Status::FailError,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Success => "Success",
            Status::Unsat => "UNSAT",
            Status::FailTimeout => "Fail-timeout",
            Status::FailMemoryBudget => "Fail-memory-budget",
            Status::FailError => "Fail-error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub task_id: String,
    pub profile: String,
    pub n_atoms: usize,
    pub n_bg_rules: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub status: Status,
    pub seconds: f64,
    pub solution_rules: Option<usize>,
}

/// Table-style aggregate over one profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSummary {
    pub profile: String,
    pub tasks: usize,
    pub unsat: usize,
    pub unsat_avg_seconds: Option<f64>,
    pub success: usize,
    pub success_avg_seconds: Option<f64>,
    pub fail_timeout: usize,
    pub fail_memory_budget: usize,
    pub fail_error: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub groups: Vec<GroupSummary>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub algorithm: Algorithm,
    pub time_limit: Duration,
    pub memory_budget: Option<usize>,
    pub workers: usize,
    pub caps: Caps,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithm: Algorithm::Ilpsmmin,
            time_limit: Duration::from_secs(600),
            memory_budget: None,
            workers: 1,
            caps: Caps::default(),
        }
    }
}

/// Runs every task; rows come back sorted by task id.
pub fn bench(tasks: &[TaskDocument], config: &BenchConfig) -> BenchReport {
    let next = AtomicUsize::new(0);
    let rows = Mutex::new(Vec::with_capacity(tasks.len()));
    std::thread::scope(|scope| {
        for _ in 0..config.workers.clamp(1, tasks.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(doc) = tasks.get(i) else { break };
                let row = run_one(i, doc, config);
                rows.lock()
                    .expect("no worker panics while holding the lock")
                    .push(row);
            });
        }
    });
    let mut rows = rows.into_inner().expect("workers joined");
    rows.sort_by(|a, b| a.task_id.cmp(&b.task_id));
    let groups = summarize(&rows);
    BenchReport { rows, groups }
}

fn run_one(index: usize, doc: &TaskDocument, config: &BenchConfig) -> BenchRow {
    let (n_bg_rules, n_pos, n_neg) = match &doc.body {
        TaskBody::Total {
            background,
            positives,
            negatives,
        } => (background.len(), positives.len(), negatives.len()),
        TaskBody::Partial(t) => (
            t.background().len(),
            t.positives().len(),
            t.negatives().len(),
        ),
    };
    let mut solve_config =
        SolveConfig::with_caps(config.caps.clone()).with_time_limit(config.time_limit);
    solve_config.memory = config.memory_budget.map(|budget| MemoryLimit {
        probe: allocated,
        baseline: allocated(),
        budget,
    });
    let start = Instant::now();
    let result = solve(doc, config.algorithm, &solve_config);
    let seconds = start.elapsed().as_secs_f64();
    let (status, solution_rules) = match result {
        Ok(Some(rules)) => (Status::Success, rules),
        Ok(None) => (Status::Unsat, None),
        Err(e) => (Status::of_error(&e), None),
    };
    BenchRow {
        task_id: doc
            .name
            .clone()
            .unwrap_or_else(|| format!("task-{index:06}")),
        profile: doc.profile.clone().unwrap_or_default(),
        n_atoms: doc.atoms.len(),
        n_bg_rules,
        n_pos,
        n_neg,
        status,
        seconds,
        solution_rules,
    }
}

/// `Some(size)` on success (`None` size for existence checks), `None` when unsatisfiable.
fn solve(
    doc: &TaskDocument,
    algorithm: Algorithm,
    config: &SolveConfig,
) -> Result<Option<Option<usize>>> {
    if let TaskBody::Partial(task) = &doc.body {
        if algorithm == Algorithm::Exists {
            let exists = partial_obstacles(task, &config.caps)?
                .iter()
                .any(|(_, o)| o.is_none());
            return Ok(exists.then_some(None));
        }
        let report = solve_partial(task, algorithm == Algorithm::Ilpsmmin, config)?;
        return Ok(report.hypothesis().map(|h| Some(h.len())));
    }
    let task = doc.to_induction_task()?;
    let report = match algorithm {
        Algorithm::Exists => return Ok(existence(&task, &config.caps)?.then_some(None)),
        Algorithm::Ilpsm => ilpsm(&task, config)?,
        Algorithm::Ilpsmmin => ilpsmmin(&task, config)?,
    };
    match report.outcome {
        Outcome::Solution(h) => Ok(Some(Some(h.len()))),
        Outcome::Fail => Ok(None),
        Outcome::Inconclusive => Err(Error::BudgetExhausted(config.caps.budget)),
    }
}

fn summarize(rows: &[BenchRow]) -> Vec<GroupSummary> {
    let mut by_profile: BTreeMap<&str, Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        by_profile.entry(&r.profile).or_default().push(r);
    }
    let avg = |rs: &[&BenchRow], s: Status| {
        let times: Vec<f64> = rs
            .iter()
            .filter(|r| r.status == s)
            .map(|r| r.seconds)
            .collect();
        (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64)
    };
    by_profile
        .into_iter()
        .map(|(profile, rs)| {
            let count = |s: Status| rs.iter().filter(|r| r.status == s).count();
            GroupSummary {
                profile: profile.to_string(),
                tasks: rs.len(),
                unsat: count(Status::Unsat),
                unsat_avg_seconds: avg(&rs, Status::Unsat),
                success: count(Status::Success),
                success_avg_seconds: avg(&rs, Status::Success),
                fail_timeout: count(Status::FailTimeout),
                fail_memory_budget: count(Status::FailMemoryBudget),
                fail_error: count(Status::FailError),
            }
        })
        .collect()
}

pub const CSV_HEADER: [&str; 9] = [
    "task_id",
    "profile",
    "n_atoms",
    "n_bg_rules",
    "n_pos",
    "n_neg",
    "status",
    "seconds",
    "solution_rules",
];

impl BenchReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.task_id.clone(),
                r.profile.clone(),
                r.n_atoms.to_string(),
                r.n_bg_rules.to_string(),
                r.n_pos.to_string(),
                r.n_neg.to_string(),
                r.status.to_string(),
                format!("{:.6}", r.seconds),
                r.solution_rules.map(|n| n.to_string()).unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// A timing-free summary: one line per task, then per-profile counts.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:>5} {:>4} {:>4} {:>4} {:<18} {:>5}",
            "task", "atoms", "bg", "pos", "neg", "status", "rules"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<20} {:>5} {:>4} {:>4} {:>4} {:<18} {:>5}",
                r.task_id,
                r.n_atoms,
                r.n_bg_rules,
                r.n_pos,
                r.n_neg,
                r.status.to_string(),
                r.solution_rules.map_or("-".to_string(), |n| n.to_string())
            );
        }
        for g in &self.groups {
            let _ = writeln!(
                out,
                "profile {}: tasks {} UNSAT {} Success {} Fail-timeout {} Fail-memory-budget {} Fail-error {}",
                if g.profile.is_empty() { "-" } else { &g.profile },
                g.tasks,
                g.unsat,
                g.success,
                g.fail_timeout,
                g.fail_memory_budget,
                g.fail_error
            );
        }
        out
    }
}
