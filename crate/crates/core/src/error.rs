use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidPrime(u64),

    #[error("matrix is singular")]
    Singular,
    #[error("matrix does not have full column rank ({rank} < {cols})")]
    RankDeficient { rank: usize, cols: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    SizeMismatch(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i32, found: i32 },
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableCountMismatch { expected: usize, found: usize },
    #[error("forms live over different fields")]
    FieldMismatch,
    #[error("substitution images do not share a common degree")]
    NonUniformImageDegrees,
    #[error("monomial basis does not match the form")]
    BasisMismatch,
    #[error("sampled evaluations reached rank {rank} of {needed} after {points} points")]
    RankNotReached {
        rank: usize,
        needed: usize,
        points: usize,
    },

    #[error("pfaffian requires even size, got {0}")]
    OddSize(usize),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("operation requires a symmetric or skew matrix")]
    SymmetryRequired,
    #[error("operation requires a square matrix")]
    NotSquare,
    #[error("pencil is degenerate: {rejected} of {attempted} sample points had vanishing pfaffian")]
    DegeneratePencil { rejected: usize, attempted: usize },
    #[error("entry ({row},{col}) has degree {found}, twists require {expected}")]
    TwistMismatch {
        row: usize,
        col: usize,
        expected: i32,
        found: i32,
    },
    #[error("twists are not compatible with the {0} tag")]
    IncompatibleTwists(&'static str),
    #[error("matrix entries are not linear")]
    NotLinear,
    #[error("graded map is not generically injective")]
    NotInjective,

    #[error("degrees of the cyclic entries are inconsistent: {0}")]
    DegreeInconsistency(String),
    #[error("unsupported ambient dimension {0}")]
    UnsupportedAmbient(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("characteristic {p} divides degree {degree}")]
    CharDividesDegree { p: u32, degree: i32 },
    #[error("work limit exceeded: {0}")]
    WorkLimitExceeded(String),
    #[error("point set contains a duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("point at index {0} is the zero vector")]
    ZeroPoint(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
