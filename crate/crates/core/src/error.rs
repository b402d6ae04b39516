use std::fmt;

use thiserror::Error;

use crate::value::{Attr, Header};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Parse failure for the expression grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    /// Byte offset into the source text.
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected ", self.line, self.col)?;
        match self.expected.as_slice() {
            [] => write!(f, "nothing")?,
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(Attr),
    #[error("tuple binds {found} but relation header is {expected}")]
    TupleHeaderMismatch { expected: Header, found: Header },
    #[error("value `{value}` is outside the domain of `{attr}`")]
    ValueOutsideDomain { attr: Attr, value: String },
    #[error("attribute `{0}` is not in the relation header")]
    AttributeNotInHeader(Attr),
    #[error("rename target `{0}` is already in the relation header")]
    TargetAttributeCollision(Attr),
    #[error("domain of `{to}` does not contain the domain of `{from}`")]
    DomainMismatch { from: Attr, to: Attr },
    #[error("headers differ: {left} vs {right}")]
    HeaderMismatch { left: Header, right: Header },
    #[error("construction is defined for single-attribute relations only, got {0}")]
    ArityRestriction(Header),
    #[error("divisor header {divisor} is not a proper subset of {dividend}")]
    HeaderNotProperSubset { dividend: Header, divisor: Header },
    #[error("divisor header is empty")]
    EmptyDivisorHeader,
    #[error("cross product operands share attributes {0}")]
    OverlappingHeaders(Header),
    #[error("law {law} takes {expected} arguments, got {found}")]
    ArityMismatch {
        law: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("unresolved relation name `{0}`")]
    UnresolvedName(String),
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("at node {position}: {source}")]
    Eval {
        position: String,
        #[source]
        source: Box<Error>,
    },
    #[error("rule {rule} is not applicable at {position}")]
    RuleNotApplicable { rule: String, position: String },
    #[error("lattice would have {elements} elements, above the cap of {cap}")]
    UniverseTooLarge { elements: f64, cap: u64 },
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("malformed relation: {0}")]
    MalformedRelation(String),
    #[error("invalid predicate: {0}")]
    InvalidPredicate(String),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Strips position wrappers added during evaluation.
    pub fn root(&self) -> &Error {
        match self {
            Error::Eval { source, .. } => source.root(),
            other => other,
        }
    }
}
