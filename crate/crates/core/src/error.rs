use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group word {input:?}: unexpected character {found:?}")]
    InvalidWord { input: String, found: char },

    #[error("invalid vertex {input:?}: expected a string over '0' and '1'")]
    InvalidVertex { input: String },

    #[error("invalid boundary point {input:?}: {reason}")]
    InvalidBoundaryPoint { input: String, reason: &'static str },

    #[error("invalid algebra element: {0}")]
    InvalidElement(String),

    #[error("invalid graph CSV at line {line}: {reason}")]
    InvalidGraph { line: usize, reason: String },

    #[error("level {level} exceeds the supported maximum {max}")]
    LevelTooLarge { level: usize, max: usize },

    #[error("depth {depth} does not separate orbit points {first} and {second}")]
    DepthTooSmall {
        depth: usize,
        first: String,
        second: String,
    },

    #[error("generator label {0:?} is not a label of the graph")]
    MissingLabel(String),

    #[error("beta = {0} is a pole of the renormalization map")]
    PoleAtBeta(f64),

    #[error("orbit of h hit the pole z = 2 at step {step}")]
    PoleHit { step: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("radius {radius} is below twice the operator norm {norm}")]
    RadiusTooSmall { radius: f64, norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
