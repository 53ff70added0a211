use thiserror::Error;

use crate::algebra::Kind;

/// Errors raised by the workbench.
///
/// Variants carrying a `witness` name the concrete carrier elements that
/// falsify the requested property, so that every failure can be re-checked
/// by hand.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table shape error: {0}")]
    Shape(String),

    #[error("{axiom} fails at {witness:?}")]
    AxiomViolation { axiom: String, witness: Vec<usize> },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("operation not defined for {kind:?} algebras: {op}")]
    UnsupportedKind { kind: Kind, op: &'static str },

    #[error("not a homomorphism: {0}")]
    NotAHom(String),

    #[error("subset is not closed under the operations: {0}")]
    NotClosed(String),

    #[error("not a congruence: {reason} at {witness:?}")]
    NotACongruence { reason: String, witness: Vec<usize> },

    #[error("not a split epimorphism: {0}")]
    NotSplit(String),

    #[error("map is not surjective: {0}")]
    NotEpi(String),

    #[error("map is not injective: {0}")]
    NotMono(String),

    #[error("square is not a pullback: {0}")]
    NotPullback(String),

    #[error("relation is not reflexive: missing ({0}, {0})")]
    NotReflexive(usize),

    #[error("relations live on different objects: {0}")]
    ObjectMismatch(String),

    #[error("relation is not a sigma-relation for {0}")]
    NotSigmaRelation(String),

    #[error("graph is not a sigma-graph for {0}")]
    NotSigmaGraph(String),

    #[error("propagation is inconsistent at element {element}: forced {first} and {second}")]
    Inconsistent {
        element: usize,
        first: usize,
        second: usize,
    },

    #[error("propagation did not reach element {0}")]
    Underdetermined(usize),

    #[error("no centralizer: {0}")]
    NoCentralizer(String),

    #[error("extension is not abelian sigma-special: {0}")]
    NotAbelianSpecial(String),

    #[error("directions differ: {0}")]
    DirectionMismatch(String),

    #[error("enumeration bound exceeded: {what} has size {size}, bound {bound}")]
    BoundExceeded {
        what: String,
        size: usize,
        bound: usize,
    },

    #[error("document error: {0}")]
    Document(String),

    #[error("unknown reference: {0}")]
    Reference(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
