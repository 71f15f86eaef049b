//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's contract (non-Hermitian input,
    /// dimension mismatch, malformed constructor arguments, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A problem has no feasible bit string.
    #[error("infeasible problem: no bit string satisfies the feasibility predicate")]
    InfeasibleProblem,

    /// A problem-definition document failed to parse or validate.
    #[error("invalid problem document: {0}")]
    Document(String),

    /// The top eigenvalue is numerically degenerate where the caller's
    /// verdict promised non-degeneracy.
    #[error("degenerate top eigenvalue: gap {gap:.3e} below threshold {threshold:.3e}")]
    DegenerateTop { gap: f64, threshold: f64 },

    /// Eigenvector continuation across the grid lost track of the curve.
    #[error("curve tracking failure: {0}")]
    CurveTracking(String),

    /// Step-doubling did not reach the requested agreement within the cap.
    #[error("accuracy failure: {0}")]
    Accuracy(String),

    /// A validator precondition does not hold (invalid mixer, invalid
    /// phase separator).
    #[error("validation failed: {0}")]
    Validation(String),

    /// An escalation search ran out of budget before reaching its target.
    #[error(
        "budget exhausted: best distance {best_dist:.6} with caps T<={t_cap}, m<={m_cap}, n<={n_cap}"
    )]
    BudgetExhausted {
        best_dist: f64,
        t_cap: f64,
        m_cap: usize,
        n_cap: usize,
    },

    /// Two routes that must agree (for example a validator and its
    /// cross-check) disagreed; indicates an internal inconsistency.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
