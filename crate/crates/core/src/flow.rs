//! Direct and inverse flow of theories along type functions.
//!
//! Direct flow is the image of the axioms. Inverse flow pulls back the
//! closure of the target theory: the source sequent `Γ |- Δ` is entailed iff
//! the target entails `f(Γ) |- f(Δ)`. Inverse flows stay virtual until
//! materialized under a cap.

use crate::classification::Infomorphism;
use crate::theories::{self, out_of_language, Compiled};
use crate::{Entailment, Error, FlatTheory, IdSet, Result, Sequent, SequentTheory, TypeFunction};

fn require_domain(f: &TypeFunction, language: &IdSet) -> Result<()> {
    if f.source() != language {
        return Err(Error::LanguageMismatch(
            "type function domain differs from the theory's types".into(),
        ));
    }
    Ok(())
}

/// Pushes every axiom forward along `f`.
pub fn direct_flow(f: &TypeFunction, t: &SequentTheory) -> Result<SequentTheory> {
    require_domain(f, &t.types)?;
    let axioms = t
        .axioms
        .iter()
        .map(|a| a.map_types(f))
        .collect::<Result<_>>()?;
    Ok(SequentTheory {
        types: f.target().clone(),
        axioms,
    })
}

/// The inverse flow of a target theory, answering entailment queries over
/// the source language.
#[derive(Debug, Clone)]
pub struct InverseFlow {
    map: TypeFunction,
    target: SequentTheory,
    compiled: Compiled,
}

impl InverseFlow {
    pub fn map(&self) -> &TypeFunction {
        &self.map
    }

    pub fn target(&self) -> &SequentTheory {
        &self.target
    }

    /// All entailed source sequents.
    pub fn materialize(&self, cap: usize) -> Result<SequentTheory> {
        theories::materialize(self, cap)
    }
}

impl Entailment for InverseFlow {
    fn language(&self) -> &IdSet {
        self.map.source()
    }

    fn entails(&self, s: &Sequent) -> Result<bool> {
        if !s.is_over(self.map.source()) {
            return Err(out_of_language(s, self.map.source()));
        }
        let image = s.map_types(&self.map)?;
        if image.is_tautology() {
            return Ok(true);
        }
        self.compiled.entails(&image)
    }
}

pub fn inverse_flow(f: &TypeFunction, target: &SequentTheory) -> Result<InverseFlow> {
    if f.target() != &target.types {
        return Err(Error::LanguageMismatch(
            "type function codomain differs from the target theory's types".into(),
        ));
    }
    Ok(InverseFlow {
        map: f.clone(),
        target: target.clone(),
        compiled: target.compile()?,
    })
}

/// Image of the members of a flat theory.
pub fn flat_direct_flow(f: &TypeFunction, ft: &FlatTheory) -> Result<FlatTheory> {
    require_domain(f, &ft.types)?;
    Ok(FlatTheory {
        types: f.target().clone(),
        members: f.image(&ft.members)?,
    })
}

/// Inverse image of the flat closure of `ft_target` in `c_target`.
pub fn flat_inverse_flow(
    c_target: &crate::Classification,
    f: &TypeFunction,
    ft_target: &FlatTheory,
) -> Result<FlatTheory> {
    if f.target() != &ft_target.types {
        return Err(Error::LanguageMismatch(
            "type function codomain differs from the flat theory's types".into(),
        ));
    }
    let closed = theories::flat_closure(c_target, ft_target)?;
    Ok(FlatTheory {
        types: f.source().clone(),
        members: f.preimage(&closed.members),
    })
}

/// Whether source-side flat entailment of `ty` by `ft` coincides with
/// target-side entailment of the images.
pub fn borrowing_holds(f: &Infomorphism, ft: &FlatTheory, ty: &str) -> Result<bool> {
    if !f.source.types.contains(ty) {
        return Err(Error::UnknownType(ty.to_string()));
    }
    let at_source = theories::flat_entails(&f.source, ft, ty)?;
    let image = flat_direct_flow(&f.type_function(), ft)?;
    let at_target = theories::flat_entails(&f.target, &image, f.map_type(ty)?)?;
    Ok(at_source == at_target)
}
