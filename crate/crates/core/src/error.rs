use thiserror::Error;

/// Errors produced by the geometry routines and the input parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A metric quadruple has a point lying between two others.
    #[error("degenerate quadruple: {0}")]
    Degenerate(String),

    /// Malformed input document.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("line {line}: edge length must be positive, got {length}")]
    NonPositiveLength { line: usize, length: f64 },

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("no curvature value given for vertex {0:?}")]
    MissingKappa(String),

    /// A curvature-domain failure inside a star quadruple, with the quadruple named.
    #[error("vertex {vertex:?}, neighbors {neighbors:?}: {message}")]
    StarQuadruple {
        vertex: String,
        neighbors: [String; 3],
        message: String,
    },

    #[error("non-manifold edge ({0}, {1}) shared by {2} faces")]
    NonManifoldEdge(usize, usize, usize),

    #[error("edge ({0}, {1}) is traversed in the same direction by both incident faces")]
    InconsistentOrientation(usize, usize),

    #[error("face {0} has zero area")]
    DegenerateFace(usize),

    #[error("vertex {vertex}: {message}")]
    UnsupportedVertex { vertex: usize, message: String },

    #[error("element does not match the given source triangle")]
    ElementMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(message: impl Into<String>) -> Result<T> {
    Err(Error::Domain(message.into()))
}
