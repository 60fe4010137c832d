//! Finite information-flow machinery for ontology integration.
//!
//! The crate realizes, at desk scale, the pieces needed to compare and merge
//! ontologies presented as classifications or sequent theories:
//!
//! * [`classification`]: classifications, infomorphisms, intents and extents.
//! * [`theories`]: sequent theories with semantic entailment and closure,
//!   flat type-theories, and navigation of the lattice of theories.
//! * [`flow`]: direct and inverse flow of theories along type functions.
//! * [`logics`]: local logics (classification, theory, normal instances).
//! * [`diagrams`]: diagrams of languages and classifications, their sums and
//!   the universal (mediating) morphism.
//! * [`integration`]: information systems and the alignment/closure pipeline.
//! * [`fca`]: formal concepts and concept lattices.
//! * [`bundle`] and [`report`]: the JSON bundle format and report emission
//!   used by the `ifk` command-line tool.

pub mod bundle;
pub mod classification;
pub mod diagrams;
mod error;
pub mod fca;
pub mod flow;
pub mod integration;
pub mod language;
pub mod logics;
pub mod report;
pub mod theories;
mod union_find;

use std::collections::BTreeSet;

pub use classification::{Classification, Infomorphism};
pub use diagrams::{Channel, ClsDiagram, LanguageDiagram, ShapeGraph};
pub use error::{Defect, Error, Result};
pub use fca::{ConceptLattice, FormalConcept};
pub use integration::{InformationSystem, IntegrationResult, Verdict};
pub use language::TypeFunction;
pub use logics::LocalLogic;
pub use theories::{Entailment, FlatTheory, Sequent, SequentTheory, State};

/// Identifier of an instance, type, node, edge or named object.
pub type Id = String;

/// Canonically ordered set of identifiers.
pub type IdSet = BTreeSet<Id>;

/// Default cap on the number of theory-types produced by
/// [`classification::lift_to_theory_classification`].
pub const DEFAULT_LIFT_CAP: usize = 4096;

/// Default cap on materialized sequent spaces (4^8).
pub const DEFAULT_CLOSURE_CAP: usize = 65_536;

/// Default cap on instance tuples enumerated by
/// [`diagrams::sum_classification`].
pub const DEFAULT_INSTANCE_CAP: usize = 65_536;

/// Default side-size bound for integration deltas.
pub const DEFAULT_DELTA_BOUND: usize = 2;

/// Identifiers are non-empty and contain no whitespace.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(char::is_whitespace)
}

#[cfg(test)]
pub(crate) fn set_of<I, S>(items: I) -> IdSet
where
    I: IntoIterator<Item = S>,
    S: Into<Id>,
{
    items.into_iter().map(Into::into).collect()
}
