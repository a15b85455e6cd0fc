use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is reducible over Q: {0}")]
    ReduciblePolynomial(String),
    #[error("scheme is not zero-dimensional (dimension {0})")]
    NotZeroDimensional(i64),
    #[error("point is not irreducible over Q")]
    NotIrreducible,
    #[error("scheme to remove is not contained in the intersection")]
    NotContained,
    #[error("genericity failure after {0} retries")]
    GenericityFailure(u32),
    #[error("centre is a singular point of the surface")]
    SingularCentre,
    #[error("precision exhausted: order not conclusive below cap {0}")]
    PrecisionExhausted(usize),
    #[error("centre has degree {got}, expected {want}")]
    WrongCentreDegree { got: usize, want: usize },
    #[error("linear system has {got} sections, expected {want}")]
    UnexpectedSystemDimension { got: usize, want: usize },
    #[error("pair sampling exhausted after {0} attempts")]
    PairSamplingExhausted(u32),
    #[error("degenerate representatives: trace-system kernel dimension {0} != 1")]
    DegenerateRepresentatives(usize),
    #[error("hyperplane section is singular")]
    SingularSection,
    #[error("ambient dimensions do not match: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("point lies in the base locus of a stage")]
    IndeterminacyPoint,
    #[error("map is indeterminate at all sampled points")]
    IndeterminateAtAllSamples,
    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(u32),
    #[error("no maximal centre found for a map of degree {0}")]
    NoMaximalCentre(usize),
    #[error("interpolation failed at all candidate degrees {0:?}")]
    InterpolationFailedAtAllCandidates(Vec<usize>),
    #[error("untwisting did not decrease the degree ({0} -> {1})")]
    NonTerminating(usize, usize),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
