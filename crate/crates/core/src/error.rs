use thiserror::Error;

/// Every failure the library reports. `code()` gives the stable kebab-case tag
/// used in CLI error payloads.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("group spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("operation needs a finite group (free rank {0})")]
    UnsupportedForInfiniteGroup(usize),
    #[error("invalid cocycle: q[{i}][{j}]^{m} != 1 for torsion generator {i} of order {m}")]
    InvalidCocycle { i: usize, j: usize, m: u64 },
    #[error("invalid cocycle matrix: {0}")]
    InvalidCocycleMatrix(String),
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("algebra has no unit")]
    NoUnit,
    #[error("element is not central: {0}")]
    NotCentral(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("jordan check on non-commutative table: basis pair ({0}, {1}) does not commute")]
    NonCommutative(String, String),
    #[error("grading law violated: {0}")]
    GradingViolation(String),
    #[error("invalid root or weight: {0}")]
    InvalidRoot(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("slot violation: {0}")]
    SlotViolation(String),
    #[error("derivation span not closed under commutator: {0}")]
    ClosureFailure(String),
    #[error("constructed algebra is not Lie: {0}")]
    NotLie(String),
    #[error("division failure: {0}")]
    DivisionFailure(String),
    #[error("not a torus: {0}")]
    NotDivision(String),
    #[error("not a Peirce idempotent: {0}")]
    NotPeirce(String),
    #[error("not a triangle: {0}")]
    NotTriangle(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("not coordinatizable: {0}")]
    NotCoordinatizable(String),
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("window required for infinite group")]
    WindowRequired,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::SpecMismatch(_) => "spec-mismatch",
            Error::UnsupportedForInfiniteGroup(_) => "unsupported-for-infinite-group",
            Error::InvalidCocycle { .. } | Error::InvalidCocycleMatrix(_) => "invalid-cocycle",
            Error::NotAnInvolution(_) => "not-an-involution",
            Error::NoUnit => "no-unit",
            Error::NotCentral(_) => "not-central",
            Error::NotInvertible(_) => "not-invertible",
            Error::NotHomogeneous => "not-homogeneous",
            Error::KindMismatch(_) => "kind-mismatch",
            Error::NonCommutative(..) => "non-commutative",
            Error::GradingViolation(_) => "grading-violation",
            Error::InvalidRoot(_) => "invalid-root",
            Error::SizeMismatch(_) => "size-mismatch",
            Error::RankTooSmall(_) => "rank-too-small",
            Error::SlotViolation(_) => "slot-violation",
            Error::ClosureFailure(_) => "closure-failure",
            Error::NotLie(_) => "constructed-algebra-not-lie",
            Error::DivisionFailure(_) => "division-failure",
            Error::NotDivision(_) => "not-division",
            Error::NotPeirce(_) => "not-a-peirce-idempotent",
            Error::NotTriangle(_) => "not-a-triangle",
            Error::InternalInconsistency(_) => "internal-inconsistency",
            Error::NotCoordinatizable(_) => "not-coordinatizable",
            Error::LemmaViolation(_) => "lemma-violation",
            Error::TheoremViolation(_) => "theorem-violation",
            Error::WindowRequired => "window-required",
            Error::Inconclusive(_) => "inconclusive",
            Error::VerificationFailed(_) => "verification-failed",
            Error::Config(_) => "invalid-config",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
