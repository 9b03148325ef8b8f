use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("{users} users per cell exceed the pilot capacity K_max = {k_max}")]
    Capacity { users: usize, k_max: usize },

    #[error("pilot overhead: K = {users} must be below the coherence block of {block} symbols")]
    Overhead { users: usize, block: usize },

    #[error("user drop failed: {0}")]
    Drop(String),

    #[error("need at least {min} symbol slots to measure SINR, got {got}")]
    InsufficientSamples { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
