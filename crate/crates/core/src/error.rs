use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("CoNLL line {line}: {message}")]
    ConllParse { line: usize, message: String },

    #[error("cannot write CoNLL: {0}")]
    ConllWrite(String),

    #[error("annotation line {line}: {message}")]
    MalformedAnnotation { line: usize, message: String },

    #[error("annotation {id}: offsets {start}..{end} out of range for text of {len} characters")]
    OffsetOutOfRange {
        id: String,
        start: usize,
        end: usize,
        len: usize,
    },

    #[error("annotation {id}: surface {found:?} does not match text slice {expected:?}")]
    SurfaceMismatch {
        id: String,
        expected: String,
        found: String,
    },

    #[error("overlapping mentions {first} and {second}")]
    OverlappingMentions { first: String, second: String },

    #[error("mention {mention} has a boundary inside token {token:?}")]
    BoundaryInsideToken { mention: String, token: String },

    #[error("mention {0} does not map onto the tokens of a single sentence")]
    UnalignableMention(String),

    #[error("cannot write standoff: {0}")]
    StandoffWrite(String),

    #[error("invalid tag {0:?}")]
    InvalidTag(String),

    #[error("invalid BIO sequence at position {position}: {description}")]
    InvalidBio {
        position: usize,
        description: &'static str,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("token {found:?} not found in text at character {offset} (expected next token there)")]
    AnchorMismatch { offset: usize, found: String },

    #[error("invalid split: {0}")]
    Split(String),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("validation set is empty")]
    EmptyValidationSet,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("prediction set: {0}")]
    PredictionSet(String),

    #[error("sentence {sentence}: {message}")]
    Alignment { sentence: usize, message: String },

    #[error("document {0:?} has no counterpart")]
    UnmatchedDocument(String),

    #[error("exhaustive search over {size} sequences exceeds the guard of {limit}")]
    GuardExceeded { size: f64, limit: f64 },

    #[error("model file: {0}")]
    Model(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
