use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown map kind `{0}` (expected logistic, tent, sinusoidal, gaussian, henon or lozi)")]
    UnknownMap(String),

    #[error("malformed game pattern `{0}`")]
    MalformedPattern(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("chaotic switching source diverged; orbit is unusable")]
    DivergedOrbit,

    #[error("policy state exhausted after {0} rounds (horizon fixed at construction)")]
    HorizonExceeded(usize),

    #[error("random switching has no deterministic game sequence")]
    NondeterministicPolicy,

    #[error("Markov chain has no unique stationary distribution")]
    SingularChain,

    #[error("brute-force enumeration limited to {max} rounds, got {got}")]
    SequenceTooLong { max: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
