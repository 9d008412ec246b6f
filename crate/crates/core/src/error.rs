use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("EvenCharacteristic: characteristic {0} is even; only odd q is supported")]
    EvenCharacteristic(u32),
    #[error("NotPrime: {0} is not a prime")]
    NotPrime(u32),
    #[error("InvalidFieldSize: {0} is not a power of an odd prime")]
    InvalidFieldSize(u32),
    #[error("FieldTooLarge: q = {0} exceeds the supported bound")]
    FieldTooLarge(u64),
    #[error("InvalidModulus: {0}")]
    InvalidModulus(String),
    #[error("DivisionByZero: {0}")]
    DivisionByZero(&'static str),
    #[error("ZeroInput: {0}")]
    ZeroInput(&'static str),
    #[error("ConstantPolynomial: {0}")]
    ConstantPolynomial(&'static str),
    #[error("FieldMismatch: operands live over different coefficient fields")]
    FieldMismatch,
    #[error("Parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("NotIrreducible: {0} does not define a place")]
    NotIrreducible(String),
    #[error("NegativeValuation: element has a pole at {0}")]
    NegativeValuation(String),
    #[error("NonzeroValuation: element is not a unit at {0}")]
    NonzeroValuation(String),
    #[error("DuplicatePlace: {0} appears more than once")]
    DuplicatePlace(String),
    #[error("InvalidResidue: {0}")]
    InvalidResidue(String),
    #[error("InfeasibleTargets: index {index:?} at {place:?}: {reason}")]
    InfeasibleTargets {
        index: Option<usize>,
        place: Option<String>,
        reason: String,
    },
    #[error("SearchBoundExceeded: {0}")]
    SearchBoundExceeded(String),
    #[error("ReciprocityViolation: product of local symbols for ({0}) is -1")]
    ReciprocityViolation(String),
    #[error("InternalMismatch: {0}")]
    InternalMismatch(String),
    #[error("PlaceDividesModulus: {0} divides the modulus")]
    PlaceDividesModulus(String),
    #[error("OverlappingSupports: {0}")]
    OverlappingSupports(String),
    #[error("ParameterMismatch: quaternion operands come from different algebras")]
    ParameterMismatch,
    #[error("EmptyPlaceSet: {0}")]
    EmptyPlaceSet(&'static str),
    #[error("NotInPhi: element is not in the parameter set for sign {0}")]
    NotInPhi(String),
    #[error("PreconditionFailed: {0}")]
    PreconditionFailed(String),
    #[error("NotANonsquare: element is a square in K")]
    NotANonsquare,
    #[error("IsActuallyANorm: every local Hilbert symbol is +1")]
    IsActuallyANorm,
    #[error("WitnessRejected: {0}")]
    WitnessRejected(String),
}
