use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("field {p}^{m} exceeds the 2^20 order cap")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} is not a field element")]
    InvalidElement(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("generator matrix is not of full row rank")]
    RankDeficient,
    #[error("enumeration of {0} items exceeds the cap")]
    EnumerationTooLarge(u128),
    #[error("subset enumeration of {0} tuples exceeds the cap")]
    SubsetEnumerationTooLarge(u128),
    #[error("puncturing would remove every coordinate")]
    EmptyResidual,
    #[error("empty codeword set")]
    EmptySet,
    #[error("no full-rank generator after {0} attempts")]
    RankFailure(usize),
    #[error("no code met the target after {0} tries")]
    SearchExhausted(usize),
    #[error("evaluation points are not all distinct")]
    NotAppropriate,
    #[error("field of order {q} is too small for {needed} evaluation points")]
    FieldTooSmall { q: u32, needed: usize },
    #[error("no graph reached the spectral target after {0} tries")]
    TargetUnreachable(usize),
    #[error("could not sample a matching avoiding parallel edges")]
    ParallelEdgeExhaustion,
    #[error("spectral iteration did not converge")]
    ConvergenceFailure,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("word is not a codeword of the outer code")]
    NotAnOuterCodeword,
    #[error("words live on different graphs")]
    GraphMismatch,
    #[error("distance amplification violated for codeword pair ({0}, {1})")]
    AmplificationViolation(usize, usize),
    #[error("requested radius exceeds the unique-decoding radius")]
    RadiusTooLarge,
    #[error("prerequisite verification did not pass")]
    PrerequisiteNotVerified,
    #[error("codeword tuple contains duplicates")]
    DuplicateCodewords,
    #[error("left subset of size {size} is below the required {required}")]
    SubsetTooSmall { size: usize, required: String },
    #[error("alphabet of the folded symbols does not fit in 64 bits")]
    AlphabetTooLarge,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
