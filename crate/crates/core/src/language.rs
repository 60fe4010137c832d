//! Languages (type sets) and language morphisms (total type functions).

use std::collections::BTreeMap;

use crate::{Error, Id, IdSet, Result};

/// A total function between two type sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeFunction {
    source: IdSet,
    target: IdSet,
    map: BTreeMap<Id, Id>,
}

impl TypeFunction {
    /// Builds a type function, checking totality over `source` and that every
    /// image lies in `target`. Entries for elements outside `source` are
    /// rejected as well.
    pub fn new(name: &str, source: IdSet, target: IdSet, map: BTreeMap<Id, Id>) -> Result<Self> {
        check_total(name, &source, &target, &map)?;
        Ok(TypeFunction {
            source,
            target,
            map,
        })
    }

    pub fn identity(language: &IdSet) -> Self {
        TypeFunction {
            source: language.clone(),
            target: language.clone(),
            map: language.iter().map(|t| (t.clone(), t.clone())).collect(),
        }
    }

    pub fn source(&self) -> &IdSet {
        &self.source
    }

    pub fn target(&self) -> &IdSet {
        &self.target
    }

    pub fn as_map(&self) -> &BTreeMap<Id, Id> {
        &self.map
    }

    pub fn apply(&self, ty: &str) -> Result<&Id> {
        self.map
            .get(ty)
            .ok_or_else(|| Error::UnknownType(ty.to_string()))
    }

    /// Direct image of a type set.
    pub fn image(&self, types: &IdSet) -> Result<IdSet> {
        types.iter().map(|t| self.apply(t).cloned()).collect()
    }

    /// Inverse image of a set of target types.
    pub fn preimage(&self, types: &IdSet) -> IdSet {
        self.map
            .iter()
            .filter(|(_, v)| types.contains(*v))
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TypeFunction) -> Result<TypeFunction> {
        if self.target != next.source {
            return Err(Error::EndpointMismatch(
                "codomain of the first type function differs from the domain of the second".into(),
            ));
        }
        let map = self
            .map
            .iter()
            .map(|(k, v)| Ok((k.clone(), next.apply(v)?.clone())))
            .collect::<Result<_>>()?;
        Ok(TypeFunction {
            source: self.source.clone(),
            target: next.target.clone(),
            map,
        })
    }

    pub fn is_bijective(&self) -> bool {
        let image: IdSet = self.map.values().cloned().collect();
        image.len() == self.source.len() && image == self.target
    }
}

/// Checks that `map` is a total function from `domain` into `codomain`.
pub(crate) fn check_total(
    name: &str,
    domain: &IdSet,
    codomain: &IdSet,
    map: &BTreeMap<Id, Id>,
) -> Result<()> {
    for element in domain {
        match map.get(element) {
            None => {
                return Err(Error::NonTotalMap {
                    map: name.to_string(),
                    element: element.clone(),
                })
            }
            Some(image) if !codomain.contains(image) => {
                return Err(Error::OutOfCodomain {
                    map: name.to_string(),
                    element: element.clone(),
                    image: image.clone(),
                })
            }
            Some(_) => {}
        }
    }
    if let Some(extra) = map.keys().find(|k| !domain.contains(*k)) {
        return Err(Error::UnknownType(extra.clone()));
    }
    Ok(())
}
