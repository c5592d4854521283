use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported coin: {0}")]
    UnsupportedCoin(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("incompatible operators: {0}")]
    IncompatibleOperator(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("walk would wrap around: {0}")]
    WrapAround(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("lattice overfull: {agents} agents on {sites} sites")]
    OverfullLattice { agents: usize, sites: usize },
    #[error("walker {0} is inactive")]
    InactiveWalker(u64),
    #[error("epidemic already extinct")]
    Extinct,
    #[error("exceeded the safety cap of {0} steps")]
    NonTermination(u64),
    #[error("incompatible tables: {0}")]
    IncompatibleTable(String),
}
