use std::fmt;

use crate::{Id, Sequent};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures of library operations. Validation defects are data (see
/// [`Defect`]); they only become an `Error` when an operation needs a valid
/// input and did not get one.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown instance `{0}`")]
    UnknownInstance(Id),
    #[error("unknown type `{0}`")]
    UnknownType(Id),
    #[error("unknown node `{0}`")]
    UnknownNode(Id),
    #[error("unknown edge `{0}`")]
    UnknownEdge(Id),
    #[error("axiom `{0}` is not in the theory")]
    UnknownAxiom(Sequent),
    #[error("unknown concept index {0}")]
    UnknownConcept(usize),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("language mismatch: {0}")]
    LanguageMismatch(String),
    #[error("map `{map}` is not total: no image for `{element}`")]
    NonTotalMap { map: String, element: Id },
    #[error("map `{map}` sends `{element}` to `{image}`, which is outside its codomain")]
    OutOfCodomain { map: String, element: Id, image: Id },
    #[error("renaming is not a bijection: {0}")]
    NotBijective(String),
    #[error("{what}: cap exceeded, requires {required} but cap is {cap}")]
    CapExceeded {
        what: String,
        required: u128,
        cap: usize,
    },
    #[error("channel does not cover the diagram: {0}")]
    NotCovering(String),
    #[error("invalid {what}: {}", join_defects(.defects))]
    Invalid { what: String, defects: Vec<Defect> },
    #[error("bundle syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dangling reference: {kind} `{name}` referenced by {from}")]
    Dangling {
        kind: String,
        name: Id,
        from: String,
    },
}

fn join_defects(defects: &[Defect]) -> String {
    defects
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, required: u128, cap: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            required,
            cap,
        }
    }
}

/// A single localized validation failure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Defect {
    InvalidIdentifier {
        owner: String,
        id: Id,
    },
    UndeclaredInstance {
        owner: String,
        instance: Id,
        ty: Id,
    },
    UndeclaredType {
        owner: String,
        instance: Id,
        ty: Id,
    },
    /// Invariance fails for target instance `instance` and source type `ty`;
    /// `side` names the side on which the incidence holds.
    Invariance {
        infomorphism: String,
        instance: Id,
        ty: Id,
        side: Side,
    },
    Map {
        owner: String,
        message: String,
    },
    AxiomOutsideLanguage {
        owner: String,
        axiom: Sequent,
    },
    AxiomNotPreserved {
        owner: String,
        axiom: Sequent,
    },
    Edge {
        edge: Id,
        message: String,
    },
    Commutation {
        edge: Id,
        element: Id,
        message: String,
    },
    Leg {
        node: Id,
        message: String,
    },
    Node {
        node: Id,
        message: String,
    },
}

/// Which side of an infomorphism carries an incidence that the other side
/// lacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Source => f.write_str("source"),
            Side::Target => f.write_str("target"),
        }
    }
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::InvalidIdentifier { owner, id } => {
                write!(f, "{owner}: invalid identifier {id:?}")
            }
            Defect::UndeclaredInstance { owner, instance, ty } => {
                write!(f, "{owner}: incidence ({instance}, {ty}) names undeclared instance `{instance}`")
            }
            Defect::UndeclaredType { owner, instance, ty } => {
                write!(f, "{owner}: incidence ({instance}, {ty}) names undeclared type `{ty}`")
            }
            Defect::Invariance {
                infomorphism,
                instance,
                ty,
                side,
            } => write!(
                f,
                "{infomorphism}: invariance fails at ({instance}, {ty}), incidence holds only on the {side} side"
            ),
            Defect::Map { owner, message } => write!(f, "{owner}: {message}"),
            Defect::AxiomOutsideLanguage { owner, axiom } => {
                write!(f, "{owner}: axiom `{axiom}` uses types outside the language")
            }
            Defect::AxiomNotPreserved { owner, axiom } => {
                write!(f, "{owner}: image of axiom `{axiom}` is not entailed by the target theory")
            }
            Defect::Edge { edge, message } => write!(f, "edge {edge}: {message}"),
            Defect::Commutation {
                edge,
                element,
                message,
            } => write!(f, "edge {edge}: does not commute at `{element}`: {message}"),
            Defect::Leg { node, message } => write!(f, "leg {node}: {message}"),
            Defect::Node { node, message } => write!(f, "node {node}: {message}"),
        }
    }
}
