use thiserror::Error;

/// Errors raised by graph construction, parsing and measure evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate identifier `{id}` at line {line}")]
    DuplicateId { id: String, line: usize },
    #[error("edge `{edge}` at line {line} references undeclared vertex `{vertex}`")]
    UnknownEndpoint { edge: String, vertex: String, line: usize },
    #[error("weight {weight} of edge `{edge}` at line {line} is outside (0, 1]")]
    WeightOutOfRange { edge: String, weight: String, line: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("invalid word literal `{literal}`: {reason}")]
    InvalidWord { literal: String, reason: String },
    #[error("the empty word has no endpoints")]
    EmptyWord,
    #[error("`{0}` is outside the measure domain")]
    OutsideDomain(String),
    #[error("not a full subgraph: {0}")]
    NotFullSubgraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by malformed textual input (graph files,
    /// word and set literals) as opposed to well-formed but out-of-domain
    /// requests.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::DuplicateId { .. }
                | Error::UnknownEndpoint { .. }
                | Error::WeightOutOfRange { .. }
                | Error::InvalidWord { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
