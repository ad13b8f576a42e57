use serde_json::Value;

/// Every failure the library reports. `code()` is the stable identifier
/// used in machine-readable output.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivideByZeroPoly,
    #[error("operands live in different coefficient fields")]
    FieldMismatch,
    #[error("polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("leading coefficient is not a square in the field")]
    NonSquareLeadingCoeff,
    #[error("root certification failed after the retry ladder: {0}")]
    PrecisionExhausted(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("internal identity check failed: {0}")]
    InternalCheckFailed(String),
    #[error("no Pell solution found within {0} steps")]
    PellUnsolvable(usize),
    #[error("evaluation point is a root of the quartic")]
    RhoOnCurveBranch,
    #[error("coefficient size passed the {cap}-bit cap at step {step}")]
    BudgetExceeded { cap: u64, step: usize },
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("torsion condition is identically zero in the parameter")]
    DegenerateFamily,
    #[error("square root of Q(u0) is not in the field and extensions are disabled")]
    BranchNotInField,
    #[error("denominator vanishes: {0}")]
    DenominatorZero(String),
    #[error("root selector {index} out of range (have {count})")]
    RootSelectorInvalid { index: usize, count: usize },
    #[error("curve is singular")]
    DegenerateCurve,
    #[error("argument too close to a pole or zero: {0}")]
    PoleProximity(String),
    #[error("ill-conditioned linear system")]
    IllConditioned,
    #[error("extension parameter lies in the period lattice")]
    TorsionZeroQ,
    #[error("continuation jump exceeds threshold")]
    BranchJump,
    #[error("lattice has no complex multiplication certified at height {0}")]
    NotCM(u64),
    #[error("multiplier is not purely imaginary")]
    AlphaNotAntisymmetric,
    #[error("multiplier is not divisible by 2 in the endomorphism ring")]
    AlphaParity,
    #[error("coordinates not recognized as rationals with denominator <= {0}")]
    RecognitionFailed(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivideByZeroPoly => "DivideByZeroPoly",
            Error::FieldMismatch => "FieldMismatch",
            Error::OddDegree(_) => "OddDegree",
            Error::NonSquareLeadingCoeff => "NonSquareLeadingCoeff",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NotSquarefree => "NotSquarefree",
            Error::InternalCheckFailed(_) => "InternalCheckFailed",
            Error::PellUnsolvable(_) => "PellUnsolvable",
            Error::RhoOnCurveBranch => "RhoOnCurveBranch",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::PointNotOnCurve => "PointNotOnCurve",
            Error::DegenerateFamily => "DegenerateFamily",
            Error::BranchNotInField => "BranchNotInField",
            Error::DenominatorZero(_) => "DenominatorZero",
            Error::RootSelectorInvalid { .. } => "RootSelectorInvalid",
            Error::DegenerateCurve => "DegenerateCurve",
            Error::PoleProximity(_) => "PoleProximity",
            Error::IllConditioned => "IllConditioned",
            Error::TorsionZeroQ => "TorsionZeroQ",
            Error::BranchJump => "BranchJump",
            Error::NotCM(_) => "NotCM",
            Error::AlphaNotAntisymmetric => "AlphaNotAntisymmetric",
            Error::AlphaParity => "AlphaParity",
            Error::RecognitionFailed(_) => "RecognitionFailed",
            Error::Parse(_) => "ParseError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// Structured details for the error record.
    pub fn context(&self) -> Value {
        use serde_json::json;
        match self {
            Error::OddDegree(d) => json!({ "degree": d }),
            Error::PellUnsolvable(s) => json!({ "steps": s }),
            Error::BudgetExceeded { cap, step } => json!({ "cap_bits": cap, "step": step }),
            Error::RootSelectorInvalid { index, count } => json!({ "index": index, "count": count }),
            Error::NotCM(h) => json!({ "height_bound": h }),
            Error::RecognitionFailed(m) => json!({ "max_denominator": m }),
            _ => json!({}),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
