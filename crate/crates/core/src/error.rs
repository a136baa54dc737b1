use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("weight `{0}` is not a member of the lattice")]
    LatticeMismatch(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),

    #[error("atom `{atom}` carries conflicting weights `{first}` and `{second}`")]
    ConflictingWeights {
        atom: String,
        first: String,
        second: String,
    },

    #[error("{what} needs {needed} but the cap `{cap}` allows {limit}")]
    Capacity {
        what: String,
        cap: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("candidate budget of {0} exhausted")]
    BudgetExhausted(u64),

    #[error("time limit exceeded")]
    Timeout,

    #[error("memory budget of {0} bytes exceeded")]
    MemoryBudget(usize),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid task: {0}")]
    InvalidTask(String),

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn capacity(
        what: impl Into<String>,
        cap: &'static str,
        needed: u128,
        limit: u128,
    ) -> Self {
        Error::Capacity {
            what: what.into(),
            cap,
            needed,
            limit,
        }
    }

    /// True for the resource-limit family (caps, budgets, deadlines, memory).
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::Capacity { .. }
                | Error::BudgetExhausted(_)
                | Error::Timeout
                | Error::MemoryBudget(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
