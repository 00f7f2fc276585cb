use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants that stem from user input carry a `path` so that front ends can
/// point at the offending location in a JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements live in different algebras ({left} vs {right})")]
    MismatchedParent { left: String, right: String },
    #[error("element is not self-adjoint")]
    NotSelfAdjoint,
    #[error("outcome map is not surjective: {0}")]
    NotSurjective(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("{count} generators exceed the limit of {max}")]
    TooManyGenerators { count: usize, max: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("element is not in the lattice")]
    ElementNotInLattice,
    #[error("lattice homomorphism applied to the wrong lattice")]
    MismatchedLattice,
    #[error("not a distributive lattice: {0}")]
    NotDistributive(String),

    #[error("lattice is not normal (cover {a} v {b} = T has no well-inside refinement)")]
    NotNormal { a: String, b: String },
    #[error("{0} is not well inside {1}")]
    NotWellInside(String, String),
    #[error("no shrink witness r = 1/2^m with m <= {steps}")]
    SearchExhausted { steps: u32 },

    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid diagram at `{path}`: {message}")]
    InvalidDiagram { path: String, message: String },
    #[error("point and open belong to different diagrams")]
    DiagramMismatch,
    #[error("`{0}` and `{1}` are not comparable")]
    NotComparable(String, String),
    #[error("map is not monotone: {0}")]
    NotMonotone(String),
    #[error("{what} has size {size}, above the limit {max}")]
    TooLarge { what: String, size: usize, max: usize },
    #[error("inconsistent context order: {0}")]
    InconsistentOrder(String),
    #[error("invalid net at `{path}`: {message}")]
    InvalidNet { path: String, message: String },
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MismatchedParent { .. } => "MismatchedParent",
            Error::NotSelfAdjoint => "NotSelfAdjoint",
            Error::NotSurjective(_) => "NotSurjective",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::UnknownOutcome(_) => "UnknownOutcome",
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::TooManyGenerators { .. } => "TooManyGenerators",
            Error::Parse { .. } => "Parse",
            Error::ElementNotInLattice => "ElementNotInLattice",
            Error::MismatchedLattice => "MismatchedLattice",
            Error::NotDistributive(_) => "NotDistributive",
            Error::NotNormal { .. } => "NotNormal",
            Error::NotWellInside(..) => "NotWellInside",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::InvalidPoset(_) => "InvalidPoset",
            Error::InvalidDiagram { .. } => "InvalidDiagram",
            Error::DiagramMismatch => "DiagramMismatch",
            Error::NotComparable(..) => "NotComparable",
            Error::NotMonotone(_) => "NotMonotone",
            Error::TooLarge { .. } => "TooLarge",
            Error::InconsistentOrder(_) => "InconsistentOrder",
            Error::InvalidNet { .. } => "InvalidNet",
            Error::Schema { .. } => "Schema",
        }
    }

    /// JSON path of the offending input, when the error came from a document.
    pub fn path(&self) -> Option<&str> {
        match self {
            Error::InvalidDiagram { path, .. }
            | Error::InvalidNet { path, .. }
            | Error::Schema { path, .. } => Some(path),
            _ => None,
        }
    }

    pub(crate) fn diagram(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidDiagram { path: path.into(), message: message.into() }
    }

    pub(crate) fn net(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidNet { path: path.into(), message: message.into() }
    }
}

/// Deserialize a JSON document, reporting the path of the first violation.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema { path: if path == "." { String::new() } else { path }, message: e.into_inner().to_string() }
    })
}
