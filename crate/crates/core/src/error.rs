use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("no complete cut-and-project scheme: D contains Z_{prime}^{rank} with rank > m+d = {slots}")]
    Obstructed { prime: u64, rank: usize, slots: usize },

    #[error("torsion factor {factor} (p = {prime}) cannot use slot {slot}: already taken by a factor sharing that prime")]
    SlotCollision { factor: usize, prime: u64, slot: usize },

    #[error("singular or degenerate lattice basis")]
    Singular,

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("truncation too small: Gaussian tail bound {bound:e} exceeds budget {budget:e}")]
    TailBound { bound: f64, budget: f64 },

    #[error("observation box too small: need width {needed}, have {have}")]
    ObservationTooSmall { needed: f64, have: f64 },

    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what, expected, got })
    }
}
