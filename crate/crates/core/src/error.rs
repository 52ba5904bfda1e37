use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("element is not positive: smallest eigenvalue {min_eigenvalue:e} below -{tolerance:e}")]
    NotPositive { min_eigenvalue: f64, tolerance: f64 },
    #[error("function undefined on spectrum: {0}")]
    Domain(String),
    #[error("invalid group: {0}")]
    Group(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("cocycle identity violated at ({g}, {h}, {k}) by {defect:e}")]
    Cocycle { g: usize, h: usize, k: usize, defect: f64 },
    #[error("representation matrix for element {element} is not unitary (defect {defect:e})")]
    NonUnitary { element: usize, defect: f64 },
    #[error("measure is not invariant: point {point} has mass {mass} but its image has mass {image_mass}")]
    NonInvariantMeasure { point: usize, mass: f64, image_mass: f64 },
    #[error("invalid action: {0}")]
    Action(String),
    #[error("duflo estimate failed: {0}")]
    Estimator(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
