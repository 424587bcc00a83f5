use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("planarity hazard: {0}")]
    PlanarityHazard(String),
    #[error("corridor hypothesis violated by relator {0}")]
    Hypothesis(String),
    #[error("wrong presentation family: {0}")]
    WrongFamily(String),
    #[error("amalgam structure violation: {0}")]
    Amalgam(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("area budget exceeded: construction needs {faces} faces, budget is {budget}")]
    AreaBudget { faces: u64, budget: u64 },
    #[error("vertex {vertex} exceeds distance cap {cap}")]
    ExceedsCap { vertex: u32, cap: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_) | Error::AreaBudget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
