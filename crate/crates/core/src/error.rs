use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("operands live in different presentations")]
    PresentationMismatch,

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid ring map: {0}")]
    InvalidHom(String),

    #[error("not a unit: constant term is zero")]
    NotAUnit,

    #[error("no Steenrod action declared for generator `{0}`")]
    NoAction(String),

    #[error("class is not homogeneous")]
    NonHomogeneous,

    #[error("pairing matrix in degree {degree} is singular")]
    SingularPairing { degree: u32 },

    #[error("invalid manifold model: {0}")]
    InvalidModel(String),

    #[error("degree {degree} exceeds truncation degree {truncation}")]
    DegreeOverflow { degree: u32, truncation: u32 },

    #[error("invalid normal Chern class: {0}")]
    InvalidChern(String),

    #[error("invalid submanifold data: {0}")]
    InvalidSubmanifold(String),

    #[error("a Gysin map for the center is required but was not supplied")]
    MissingGysin,

    #[error("class is not divisible by xi: nonzero xi^0 component")]
    NotDivisible,

    #[error("L_{index} is outside the validity range: need 4i < min({two_r}, ({n}-1)/2)")]
    RangeViolation { index: u32, two_r: u32, n: u32 },

    #[error("rational companion data is required for this computation")]
    MissingRational,

    #[error("n = {0} must be odd")]
    BadParity(u32),

    #[error("coefficient {0} has no mod-2 reduction")]
    NonIntegral(String),

    #[error("inconsistent Wu class computation: {0}")]
    WuMismatch(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },
}

impl Error {
    /// Whether the error stems from malformed input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::UnknownGenerator(_)
                | Error::InvalidPresentation(_)
                | Error::InvalidHom(_)
                | Error::InvalidModel(_)
                | Error::InvalidChern(_)
                | Error::InvalidSubmanifold(_)
                | Error::BadParity(_)
                | Error::NonIntegral(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
