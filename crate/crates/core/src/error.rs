use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus k = {0} is outside [0, 1)")]
    InvalidModulus(f64),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("quadrature did not reach tolerance {tol:e} within depth {max_depth}")]
    QuadratureNoConvergence { tol: f64, max_depth: u32 },

    #[error("quadrature tolerance {0:e} is below 1e-14")]
    ToleranceTooSmall(f64),

    #[error("limit point {0} is not in (-1, 0)")]
    InvalidLimitPoint(f64),

    #[error("circle is not a member of the pencil: {0}")]
    NotInPencil(String),

    #[error("invalid order pair (n = {n}, h = {h})")]
    InvalidOrder { n: u32, h: u32 },

    #[error("circles intersect or the inner circle is not inside the outer one")]
    Intersecting,

    #[error("circles are internally tangent; use the tangent-pencil group")]
    TangentPencil,

    #[error("circles are concentric; the pencil degenerates to rotations")]
    Concentric,

    #[error("invalid circle: {0}")]
    InvalidCircle(String),

    #[error("chord endpoints coincide")]
    DegenerateChord,

    #[error("parameter a = 0 is singular for this construction")]
    SingularParameter,

    #[error("map does not belong to this pencil (a = {a}, expected {expected})")]
    ForeignMap { a: f64, expected: f64 },

    #[error("angle {0} is outside the admissible range")]
    InvalidAlpha(f64),

    #[error("polygon does not close (residual {0:e})")]
    NotClosed(f64),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
}
