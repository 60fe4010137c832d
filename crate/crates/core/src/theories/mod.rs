//! Sequent theories, semantic entailment and closure, flat type-theories,
//! and moves in the lattice of theories.
//!
//! A *state* is a set of types, read as the intent some instance could
//! have. A state satisfies `Γ |- Δ` unless it contains all of `Γ` and none
//! of `Δ`. A theory entails a sequent when every state satisfying the
//! theory's axioms satisfies the sequent; for finite languages this
//! coincides with closure under identity, weakening and global cut.

pub(crate) mod engine;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classification::Classification;
use crate::language::TypeFunction;
use crate::{is_valid_id, Defect, Error, Id, IdSet, Result};

pub(crate) use engine::Compiled;

/// A pair of type sets `⟨antecedent, consequent⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Sequent {
    pub ant: IdSet,
    pub con: IdSet,
}

impl Sequent {
    pub fn new<A, C, S1, S2>(ant: A, con: C) -> Self
    where
        A: IntoIterator<Item = S1>,
        C: IntoIterator<Item = S2>,
        S1: Into<Id>,
        S2: Into<Id>,
    {
        Sequent {
            ant: ant.into_iter().map(Into::into).collect(),
            con: con.into_iter().map(Into::into).collect(),
        }
    }

    /// `⟨∅, ∅⟩`, satisfied by no state.
    pub fn empty() -> Self {
        Sequent::default()
    }

    pub fn types(&self) -> impl Iterator<Item = &Id> {
        self.ant.iter().chain(&self.con)
    }

    pub fn is_over(&self, language: &IdSet) -> bool {
        self.types().all(|t| language.contains(t))
    }

    /// True when antecedent and consequent share a type.
    pub fn is_tautology(&self) -> bool {
        !self.ant.is_disjoint(&self.con)
    }

    pub fn map_types(&self, f: &TypeFunction) -> Result<Sequent> {
        Ok(Sequent {
            ant: f.image(&self.ant)?,
            con: f.image(&self.con)?,
        })
    }

    /// Parses the literal form `a, b |- c`; either side may be empty.
    pub fn parse(literal: &str) -> Result<Self> {
        let syntax = |column: usize, message: String| Error::Syntax {
            line: 1,
            column,
            message,
        };
        let Some(turnstile) = literal.find("|-") else {
            return Err(syntax(1, format!("missing `|-` in sequent {literal:?}")));
        };
        let (lhs, rhs) = (&literal[..turnstile], &literal[turnstile + 2..]);
        if rhs.contains("|-") {
            return Err(syntax(
                turnstile + 3,
                format!("more than one `|-` in sequent {literal:?}"),
            ));
        }
        let side = |text: &str, offset: usize| -> Result<IdSet> {
            let mut out = IdSet::new();
            let mut column = offset;
            for piece in text.split(',') {
                let id = piece.trim();
                if id.is_empty() {
                    if text.trim().is_empty() {
                        break;
                    }
                    return Err(syntax(column + 1, "empty identifier".into()));
                }
                if !is_valid_id(id) {
                    return Err(syntax(column + 1, format!("invalid identifier {id:?}")));
                }
                out.insert(id.to_string());
                column += piece.len() + 1;
            }
            Ok(out)
        };
        Ok(Sequent {
            ant: side(lhs, 0)?,
            con: side(rhs, turnstile + 2)?,
        })
    }
}

impl FromStr for Sequent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Sequent::parse(s)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &IdSet| s.iter().map(String::as_str).collect::<Vec<_>>().join(", ");
        let text = format!("{} |- {}", join(&self.ant), join(&self.con));
        f.write_str(text.trim())
    }
}

/// A type set together with a set of axiom sequents over it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SequentTheory {
    pub types: IdSet,
    pub axioms: BTreeSet<Sequent>,
}

/// A candidate instance intent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct State {
    pub holds: IdSet,
}

impl State {
    pub fn new<I: IntoIterator<Item = S>, S: Into<Id>>(holds: I) -> Self {
        State {
            holds: holds.into_iter().map(Into::into).collect(),
        }
    }

    /// Satisfaction without language checks.
    pub fn satisfies(&self, s: &Sequent) -> bool {
        !(s.ant.is_subset(&self.holds) && s.con.is_disjoint(&self.holds))
    }
}

/// Anything that can answer entailment queries over a fixed language:
/// materialized theories as well as virtual ones (inverse flows, natural
/// theories, system closures).
pub trait Entailment {
    fn language(&self) -> &IdSet;

    fn entails(&self, s: &Sequent) -> Result<bool>;
}

impl SequentTheory {
    /// A theory whose axioms must lie within `types`.
    pub fn new<I>(types: IdSet, axioms: I) -> Result<Self>
    where
        I: IntoIterator<Item = Sequent>,
    {
        let theory = SequentTheory {
            types,
            axioms: axioms.into_iter().collect(),
        };
        if let Some(bad) = theory.axioms.iter().find(|a| !a.is_over(&theory.types)) {
            let ty = bad
                .types()
                .find(|t| !theory.types.contains(*t))
                .cloned()
                .unwrap_or_default();
            return Err(Error::UnknownType(ty));
        }
        Ok(theory)
    }

    pub fn empty(types: IdSet) -> Self {
        SequentTheory {
            types,
            axioms: BTreeSet::new(),
        }
    }

    pub fn validate(&self, owner: &str) -> Vec<Defect> {
        let mut defects: Vec<Defect> = self
            .types
            .iter()
            .filter(|t| !is_valid_id(t))
            .map(|t| Defect::InvalidIdentifier {
                owner: owner.to_string(),
                id: t.clone(),
            })
            .collect();
        defects.extend(
            self.axioms
                .iter()
                .filter(|a| !a.is_over(&self.types))
                .map(|a| Defect::AxiomOutsideLanguage {
                    owner: owner.to_string(),
                    axiom: a.clone(),
                }),
        );
        defects
    }

    pub(crate) fn compile(&self) -> Result<Compiled> {
        Compiled::new(&self.types, &self.axioms)
    }

    pub fn is_consistent(&self) -> bool {
        self.compile().map(|c| c.is_consistent()).unwrap_or(false)
    }
}

impl Entailment for SequentTheory {
    fn language(&self) -> &IdSet {
        &self.types
    }

    fn entails(&self, s: &Sequent) -> Result<bool> {
        if !s.is_over(&self.types) {
            return Err(out_of_language(s, &self.types));
        }
        if s.is_tautology() || self.axioms.contains(s) {
            return Ok(true);
        }
        self.compile()?.entails(s)
    }
}

pub(crate) fn out_of_language(s: &Sequent, language: &IdSet) -> Error {
    let ty = s
        .types()
        .find(|t| !language.contains(*t))
        .cloned()
        .unwrap_or_default();
    Error::UnknownType(ty)
}

/// Whether state `x` satisfies `s`; both must lie inside `language`.
pub fn state_satisfies(language: &IdSet, s: &Sequent, x: &State) -> Result<bool> {
    if !s.is_over(language) {
        return Err(out_of_language(s, language));
    }
    if let Some(t) = x.holds.iter().find(|t| !language.contains(*t)) {
        return Err(Error::UnknownType(t.clone()));
    }
    Ok(x.satisfies(s))
}

pub fn is_consistent(t: &SequentTheory) -> bool {
    t.is_consistent()
}

pub fn entails(t: &impl Entailment, s: &Sequent) -> Result<bool> {
    t.entails(s)
}

/// Number of sequents over a language of `n` types, saturating.
pub fn sequent_space(n: usize) -> u128 {
    if n >= 63 {
        u128::MAX
    } else {
        1u128 << (2 * n)
    }
}

pub(crate) fn require_space(what: &str, language: &IdSet, cap: usize) -> Result<()> {
    let required = sequent_space(language.len());
    if required > cap as u128 {
        Err(Error::cap(what, required, cap))
    } else {
        Ok(())
    }
}

/// Every sequent over `language` (4^n of them), in mask order. Callers must
/// check the size first.
pub(crate) fn all_sequents(language: &IdSet) -> impl Iterator<Item = (u64, u64)> {
    let n = language.len();
    let states = 1u64 << n;
    (0..states).flat_map(move |a| (0..states).map(move |c| (a, c)))
}

pub(crate) fn sequent_from_masks(types: &[&Id], ant: u64, con: u64) -> Sequent {
    let pick = |mask: u64| -> IdSet {
        types
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| (*t).clone())
            .collect()
    };
    Sequent {
        ant: pick(ant),
        con: pick(con),
    }
}

/// Every entailed sequent of an entailment oracle over its language.
pub fn materialize(t: &impl Entailment, cap: usize) -> Result<SequentTheory> {
    let language = t.language().clone();
    require_space("materialized closure", &language, cap)?;
    let types: Vec<&Id> = language.iter().collect();
    let mut axioms = BTreeSet::new();
    for (a, c) in all_sequents(&language) {
        let s = sequent_from_masks(&types, a, c);
        if t.entails(&s)? {
            axioms.insert(s);
        }
    }
    Ok(SequentTheory {
        types: language.clone(),
        axioms,
    })
}

/// The materialized closure: every sequent over the language entailed by
/// `t`.
pub fn close(t: &SequentTheory, cap: usize) -> Result<SequentTheory> {
    require_space("closure", &t.types, cap)?;
    let compiled = t.compile()?;
    let types: Vec<&Id> = t.types.iter().collect();
    let consistent = compiled.is_consistent();
    let axioms = all_sequents(&t.types)
        .filter(|&(a, c)| !consistent || a & c != 0 || compiled.entails_masks(a, c))
        .map(|(a, c)| sequent_from_masks(&types, a, c))
        .collect();
    Ok(SequentTheory {
        types: t.types.clone(),
        axioms,
    })
}

/// `lower <= upper` in entailment order: `lower` entails every axiom of
/// `upper`.
pub fn theory_leq(lower: &impl Entailment, upper: &SequentTheory) -> Result<bool> {
    if lower.language() != &upper.types {
        return Err(Error::LanguageMismatch(
            "theories are over different type sets".into(),
        ));
    }
    for axiom in &upper.axioms {
        if !lower.entails(axiom)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The theory of tautologies, presented by no axioms.
pub fn top_theory(types: &IdSet) -> SequentTheory {
    SequentTheory::empty(types.clone())
}

/// The inconsistent theory, presented by the single axiom `|-`.
pub fn bottom_theory(types: &IdSet) -> SequentTheory {
    SequentTheory {
        types: types.clone(),
        axioms: [Sequent::empty()].into(),
    }
}

/// A step through the lattice of theories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Delete axioms.
    Contract(Vec<Sequent>),
    /// Add axioms over the same language.
    Expand(Vec<Sequent>),
    /// Contraction followed by expansion.
    Revise {
        remove: Vec<Sequent>,
        add: Vec<Sequent>,
    },
    /// Systematic renaming along a bijection of languages.
    Analogy(TypeFunction),
}

pub fn lot_navigate(t: &SequentTheory, step: &Move) -> Result<SequentTheory> {
    match step {
        Move::Contract(remove) => {
            let mut out = t.clone();
            for axiom in remove {
                if !out.axioms.remove(axiom) {
                    return Err(Error::UnknownAxiom(axiom.clone()));
                }
            }
            Ok(out)
        }
        Move::Expand(add) => {
            let mut out = t.clone();
            for axiom in add {
                if !axiom.is_over(&t.types) {
                    return Err(out_of_language(axiom, &t.types));
                }
                out.axioms.insert(axiom.clone());
            }
            Ok(out)
        }
        Move::Revise { remove, add } => {
            let contracted = lot_navigate(t, &Move::Contract(remove.clone()))?;
            lot_navigate(&contracted, &Move::Expand(add.clone()))
        }
        Move::Analogy(renaming) => {
            if renaming.source() != &t.types {
                return Err(Error::LanguageMismatch(
                    "renaming domain differs from the theory's types".into(),
                ));
            }
            if !renaming.is_bijective() {
                return Err(Error::NotBijective(
                    "analogy needs a bijection between languages".into(),
                ));
            }
            let axioms = t
                .axioms
                .iter()
                .map(|a| a.map_types(renaming))
                .collect::<Result<_>>()?;
            Ok(SequentTheory {
                types: renaming.target().clone(),
                axioms,
            })
        }
    }
}

/// Lists the axioms of `source` whose image under `f` is not entailed by
/// `target`.
pub fn check_theory_morphism(
    f: &TypeFunction,
    source: &SequentTheory,
    target: &impl Entailment,
) -> Result<Vec<Defect>> {
    if f.source() != &source.types || f.target() != target.language() {
        return Err(Error::LanguageMismatch(
            "type function does not run between the theories' languages".into(),
        ));
    }
    let mut defects = Vec::new();
    for axiom in &source.axioms {
        if !target.entails(&axiom.map_types(f)?)? {
            defects.push(Defect::AxiomNotPreserved {
                owner: "theory morphism".into(),
                axiom: axiom.clone(),
            });
        }
    }
    Ok(defects)
}

/// A subset of the types of a classification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlatTheory {
    pub types: IdSet,
    pub members: IdSet,
}

impl FlatTheory {
    pub fn new(types: IdSet, members: IdSet) -> Result<Self> {
        if let Some(t) = members.iter().find(|t| !types.contains(*t)) {
            return Err(Error::UnknownType(t.clone()));
        }
        Ok(FlatTheory { types, members })
    }
}

fn require_flat_language(c: &Classification, ft: &FlatTheory) -> Result<()> {
    if c.types != ft.types {
        return Err(Error::LanguageMismatch(format!(
            "flat theory is not over the types of `{}`",
            c.name
        )));
    }
    Ok(())
}

/// Whether every instance classified by all of `ft` is classified by `ty`.
pub fn flat_entails(c: &Classification, ft: &FlatTheory, ty: &str) -> Result<bool> {
    require_flat_language(c, ft)?;
    let ext = c.extent(&ft.members)?;
    let single: IdSet = [ty.to_string()].into();
    Ok(ext.is_subset(&c.extent(&single)?))
}

/// All types entailed by `ft`.
pub fn flat_closure(c: &Classification, ft: &FlatTheory) -> Result<FlatTheory> {
    require_flat_language(c, ft)?;
    let ext = c.extent(&ft.members)?;
    let members = c
        .types
        .iter()
        .filter(|t| ext.iter().all(|i| c.holds(i, t)))
        .cloned()
        .collect();
    Ok(FlatTheory {
        types: c.types.clone(),
        members,
    })
}
