use thiserror::Error;

/// Errors raised by the workbench. Every fallible operation in the crate
/// returns this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("poset violates {axiom}: witness {witness:?}")]
    Violation {
        axiom: Axiom,
        witness: Vec<String>,
    },
    #[error("map is not monotone: {x} <= {y} but images are not ordered")]
    NotMonotone { x: String, y: String },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("chain is not increasing at stage {stage}")]
    NotIncreasing { stage: usize },
    #[error("stabilization witness {index} fails at term {failing}")]
    BadWitness { index: usize, failing: usize },
    #[error("{what}: needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: usize,
        cap: usize,
    },
    #[error("coproduct requires pointed posets")]
    NotPointed,
    #[error("pair kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: crate::opairs::PairKind,
        found: crate::opairs::PairKind,
    },
    #[error("invalid {kind} pair: {reason}")]
    InvalidPair {
        kind: crate::opairs::PairKind,
        reason: String,
    },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid cocone: {0}")]
    InvalidCocone(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("functor contains fun(..); use the pair action instead")]
    MixedVariance,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown morphism token {0:?}")]
    UnknownToken(String),
    #[error("invalid O-category: {0}")]
    InvalidCategory(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("not natural: {0}")]
    NotNatural(String),
    #[error("data not expressible in the category: {0}")]
    NotInCategory(String),
    #[error("canonical labeling search exceeded {0} leaves")]
    CanonBudget(usize),
    #[error("json: {0}")]
    Json(String),
    #[error("stage {stage}: {source}")]
    AtStage { stage: usize, source: Box<Error> },
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

/// The partial-order axiom named in a [`Error::Violation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Shape,
    Distinctness,
    Reflexivity,
    Antisymmetry,
    Transitivity,
    Bottom,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axiom::Shape => "shape",
            Axiom::Distinctness => "distinctness",
            Axiom::Reflexivity => "reflexivity",
            Axiom::Antisymmetry => "antisymmetry",
            Axiom::Transitivity => "transitivity",
            Axiom::Bottom => "bottom",
        };
        f.write_str(s)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
