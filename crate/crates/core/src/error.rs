use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mismatched truncation orders: {0} vs {1}")]
    MismatchedOrder(usize, usize),
    #[error("leading term is not invertible: {0}")]
    NonInvertible(String),
    #[error("leading term {0} is not a positive perfect square of a rational")]
    NotPerfectSquare(String),
    #[error("coordinate {0} has no Gaussian decay in the integration block")]
    NonGaussian(String),
    #[error("unknown coordinate name `{0}`")]
    UnknownCoordinate(String),
    #[error("unsupported model class: {0}")]
    UnsupportedClass(String),
    #[error("structure constants not antisymmetric at (a,b,c) = ({0},{1},{2})")]
    Antisymmetry(usize, usize, usize),
    #[error("Jacobi identity violated at (a,b,c; component {3}) = ({0},{1},{2})")]
    Jacobi(usize, usize, usize, usize),
    #[error("Poisson matrix not antisymmetric at ({0},{1})")]
    PoissonMatrix(usize, usize),
    #[error("input depends on momentum coordinates")]
    MomentumDependence,
    #[error("weight outside the supported class: {0}")]
    UnsupportedWeight(String),
    #[error("degree cap exceeded: {0}")]
    DegreeCap(String),
    #[error("linear system underdetermined: {0}")]
    Underdetermined(String),
    #[error("linear system inconsistent: {0}")]
    Inconsistent(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
