use std::fmt;

use thiserror::Error;

/// The laws checked by the axiom verifier, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Axiom {
    /// x'' = x
    Involution,
    /// x ⊕ 1 = 1
    Absorption,
    /// x ⊕ (x ⊕ y')' = y ⊕ (y ⊕ x')'
    Lukasiewicz,
    /// x ⊕ y = y ⊕ x
    Commutativity,
    /// (x ⊕ y) ⊕ z = x ⊕ (y ⊕ z)
    Associativity,
    /// x ⊕ 0 = x
    Neutral,
    /// 1 = 0'
    Constants,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Involution => "(i) x'' = x",
            Axiom::Absorption => "(ii) x + 1 = 1",
            Axiom::Lukasiewicz => "(iii) x + (x + y')' = y + (y + x')'",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Neutral => "neutral element",
            Axiom::Constants => "1 = 0'",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MvError {
    #[error("axiom {axiom} fails at {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: Vec<usize> },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported kind: {0}")]
    UnsupportedKind(String),
    #[error("element belongs to a different algebra")]
    ForeignElement,
    #[error("value is not an element of this algebra: {0}")]
    NotAMember(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("not a subalgebra: {0}")]
    NotASubalgebra(String),
    #[error("L{m1} is not a subchain of L{n1}", m1 = .m + 1, n1 = .n + 1)]
    NotASubchain { m: u32, n: u32 },
    #[error("{what} has size {size}, above the cap {cap}")]
    TooLarge {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("generators do not close to a finite subalgebra: {0}")]
    UnsupportedGenerators(String),
    #[error("not a good sequence: {0}")]
    NotGoodSequence(String),
    #[error("lattice operation undefined: {0}")]
    NotALattice(String),
    #[error("Mundici round trip failed: {0}")]
    RoundTripFailure(String),
    #[error("two distinct division witnesses for a = {a}, n = {n}")]
    UniquenessViolation { a: String, n: u64 },
    #[error("a-extension criteria disagree: {0}")]
    CriterionMismatch(String),
    #[error("instance not decidable here: {0}")]
    UnsupportedInstance(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for MvError {
    fn from(e: std::io::Error) -> Self {
        MvError::Io(e.to_string())
    }
}

pub type Result<T, E = MvError> = std::result::Result<T, E>;
