use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("no hole with index {0}")]
    UnknownHole(u32),
    #[error("evaluation at {re}+{im}i is within {tol:e} of a pole")]
    NearPole { re: f64, im: f64, tol: f64 },
    #[error("pole at {re}+{im}i lies inside the sampling region")]
    PoleInRegion { re: f64, im: f64 },
    #[error("estimation error: {0}")]
    Estimation(String),
    #[error("quadrature did not converge after {nodes} nodes (last change {delta:e})")]
    Quadrature { nodes: usize, delta: f64 },
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("value {0} is outside the representable f64 range")]
    Range(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
