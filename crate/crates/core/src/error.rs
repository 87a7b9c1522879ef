use thiserror::Error;

/// Errors shared by the whole toolkit.  Every operation that can lose
/// exactness fails loudly with one of these instead of returning a silently
/// wrong coefficient.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A coefficient outside the known truncation window was requested.
    #[error("window error: {0}")]
    Window(String),

    /// Series substitution preconditions violated (constant term, invertibility).
    #[error("substitution error: {0}")]
    Substitution(String),

    /// A vertex-algebra computation needed a weight beyond the cutoff.
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),

    /// A module admits no projective basis.
    #[error("not projective: {0}")]
    NotProjective(String),

    /// A minimal polynomial has an irreducible factor of degree > 1, so the
    /// primitive idempotents live over a proper extension of ℚ.
    #[error("irreducibility: {0}")]
    Irreducibility(String),

    /// Numeric modularity check called outside its convergence domain.
    #[error("convergence domain: {0}")]
    ConvergenceDomain(String),

    /// Input data failed construction-time validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// Malformed input file or expression.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
