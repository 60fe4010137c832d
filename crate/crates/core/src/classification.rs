//! Finite classifications and infomorphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::Side;
use crate::language::{check_total, TypeFunction};
use crate::{is_valid_id, Defect, Error, Id, IdSet, Result};

/// Instances, types and the incidence relation between them.
///
/// Instance and type identifiers live in separate namespaces.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Classification {
    pub name: Id,
    pub instances: IdSet,
    pub types: IdSet,
    /// `(instance, type)` pairs.
    pub incidence: BTreeSet<(Id, Id)>,
}

impl Classification {
    pub fn new<I, T, P, S1, S2>(name: &str, instances: I, types: T, incidence: P) -> Self
    where
        I: IntoIterator<Item = S1>,
        T: IntoIterator<Item = S1>,
        P: IntoIterator<Item = (S1, S2)>,
        S1: Into<Id>,
        S2: Into<Id>,
    {
        Classification {
            name: name.to_string(),
            instances: instances.into_iter().map(Into::into).collect(),
            types: types.into_iter().map(Into::into).collect(),
            incidence: incidence
                .into_iter()
                .map(|(i, t)| (i.into(), t.into()))
                .collect(),
        }
    }

    /// Checks identifiers and incidence references. An empty list means the
    /// classification is valid.
    pub fn validate(&self) -> Vec<Defect> {
        let owner = format!("classification {}", self.name);
        let mut defects = Vec::new();
        for id in self.instances.iter().chain(&self.types) {
            if !is_valid_id(id) {
                defects.push(Defect::InvalidIdentifier {
                    owner: owner.clone(),
                    id: id.clone(),
                });
            }
        }
        for (i, t) in &self.incidence {
            if !self.instances.contains(i) {
                defects.push(Defect::UndeclaredInstance {
                    owner: owner.clone(),
                    instance: i.clone(),
                    ty: t.clone(),
                });
            }
            if !self.types.contains(t) {
                defects.push(Defect::UndeclaredType {
                    owner: owner.clone(),
                    instance: i.clone(),
                    ty: t.clone(),
                });
            }
        }
        defects
    }

    pub fn holds(&self, instance: &str, ty: &str) -> bool {
        self.incidence
            .contains(&(instance.to_string(), ty.to_string()))
    }

    fn require_instance(&self, instance: &str) -> Result<()> {
        if self.instances.contains(instance) {
            Ok(())
        } else {
            Err(Error::UnknownInstance(instance.to_string()))
        }
    }

    fn require_type(&self, ty: &str) -> Result<()> {
        if self.types.contains(ty) {
            Ok(())
        } else {
            Err(Error::UnknownType(ty.to_string()))
        }
    }

    /// The types classifying `instance`.
    pub fn intent(&self, instance: &str) -> Result<IdSet> {
        self.require_instance(instance)?;
        Ok(self
            .incidence
            .range((instance.to_string(), Id::new())..)
            .take_while(|(i, _)| i == instance)
            .map(|(_, t)| t.clone())
            .collect())
    }

    /// The instances classified by every type in `types`.
    pub fn extent(&self, types: &IdSet) -> Result<IdSet> {
        for t in types {
            self.require_type(t)?;
        }
        Ok(self
            .instances
            .iter()
            .filter(|i| types.iter().all(|t| self.holds(i, t)))
            .cloned()
            .collect())
    }

    /// `lhs <= rhs` in the instance order: every type classifying `rhs` also
    /// classifies `lhs`.
    pub fn instance_leq(&self, lhs: &str, rhs: &str) -> Result<bool> {
        let lower = self.intent(lhs)?;
        let upper = self.intent(rhs)?;
        Ok(lower.is_superset(&upper))
    }

    /// Every instance intent.
    pub fn intents(&self) -> BTreeMap<Id, IdSet> {
        let mut out: BTreeMap<Id, IdSet> = self
            .instances
            .iter()
            .map(|i| (i.clone(), IdSet::new()))
            .collect();
        for (i, t) in &self.incidence {
            if let Some(set) = out.get_mut(i) {
                set.insert(t.clone());
            }
        }
        out
    }
}

pub fn validate_classification(c: &Classification) -> Vec<Defect> {
    c.validate()
}

pub fn intent(c: &Classification, instance: &str) -> Result<IdSet> {
    c.intent(instance)
}

pub fn extent(c: &Classification, types: &IdSet) -> Result<IdSet> {
    c.extent(types)
}

pub fn instance_leq(c: &Classification, lhs: &str, rhs: &str) -> Result<bool> {
    c.instance_leq(lhs, rhs)
}

/// Name used for a subset of types when it becomes a type of the lifted
/// classification, e.g. `{human,philosopher}`.
pub fn theory_type_name(types: &IdSet) -> Id {
    let inner: Vec<&str> = types.iter().map(String::as_str).collect();
    format!("{{{}}}", inner.join(","))
}

/// The instance-theory classification: same instances, one type per subset
/// of `c.types`, and `(i, T)` incident iff `T` is contained in the intent of
/// `i`.
pub fn lift_to_theory_classification(c: &Classification, cap: usize) -> Result<Classification> {
    let n = c.types.len();
    let required = if n >= 127 { u128::MAX } else { 1u128 << n };
    if required > cap as u128 {
        return Err(Error::cap("theory-type lift", required, cap));
    }
    let types: Vec<&Id> = c.types.iter().collect();
    let subsets: Vec<IdSet> = (0..1usize << n)
        .map(|mask| {
            (0..n)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| types[b].clone())
                .collect()
        })
        .collect();
    let intents = c.intents();
    let mut incidence = BTreeSet::new();
    for (instance, intent) in &intents {
        for subset in &subsets {
            if subset.is_subset(intent) {
                incidence.insert((instance.clone(), theory_type_name(subset)));
            }
        }
    }
    Ok(Classification {
        name: format!("{}^theories", c.name),
        instances: c.instances.clone(),
        types: subsets.iter().map(theory_type_name).collect(),
        incidence,
    })
}

/// A pair of maps between classifications: types forward, instances
/// backward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infomorphism {
    pub name: Id,
    pub source: Arc<Classification>,
    pub target: Arc<Classification>,
    /// `source.types -> target.types`
    pub type_map: BTreeMap<Id, Id>,
    /// `target.instances -> source.instances`
    pub instance_map: BTreeMap<Id, Id>,
}

impl Infomorphism {
    /// Builds an infomorphism with total maps. Invariance is not checked
    /// here; see [`check_infomorphism`].
    pub fn new(
        name: &str,
        source: Arc<Classification>,
        target: Arc<Classification>,
        type_map: BTreeMap<Id, Id>,
        instance_map: BTreeMap<Id, Id>,
    ) -> Result<Self> {
        check_total(
            &format!("{name}.type_map"),
            &source.types,
            &target.types,
            &type_map,
        )?;
        check_total(
            &format!("{name}.instance_map"),
            &target.instances,
            &source.instances,
            &instance_map,
        )
        .map_err(|e| match e {
            Error::UnknownType(i) => Error::UnknownInstance(i),
            other => other,
        })?;
        Ok(Infomorphism {
            name: name.to_string(),
            source,
            target,
            type_map,
            instance_map,
        })
    }

    pub fn identity(c: Arc<Classification>) -> Self {
        Infomorphism {
            name: format!("id_{}", c.name),
            type_map: c.types.iter().map(|t| (t.clone(), t.clone())).collect(),
            instance_map: c.instances.iter().map(|i| (i.clone(), i.clone())).collect(),
            source: c.clone(),
            target: c,
        }
    }

    pub fn type_function(&self) -> TypeFunction {
        TypeFunction::new(
            &self.name,
            self.source.types.clone(),
            self.target.types.clone(),
            self.type_map.clone(),
        )
        .expect("infomorphism maps are total by construction")
    }

    pub fn map_type(&self, ty: &str) -> Result<&Id> {
        self.type_map
            .get(ty)
            .ok_or_else(|| Error::UnknownType(ty.to_string()))
    }

    pub fn map_instance(&self, instance: &str) -> Result<&Id> {
        self.instance_map
            .get(instance)
            .ok_or_else(|| Error::UnknownInstance(instance.to_string()))
    }

    /// Image of a set of source types.
    pub fn map_types(&self, types: &IdSet) -> Result<IdSet> {
        types.iter().map(|t| self.map_type(t).cloned()).collect()
    }
}

/// Lists every `(target instance, source type)` pair where invariance fails.
pub fn check_infomorphism(f: &Infomorphism) -> Vec<Defect> {
    let mut defects = Vec::new();
    for (b, a) in &f.instance_map {
        for (t, ft) in &f.type_map {
            let at_source = f.source.holds(a, t);
            let at_target = f.target.holds(b, ft);
            if at_source != at_target {
                defects.push(Defect::Invariance {
                    infomorphism: f.name.clone(),
                    instance: b.clone(),
                    ty: t.clone(),
                    side: if at_source {
                        Side::Source
                    } else {
                        Side::Target
                    },
                });
            }
        }
    }
    defects
}

/// `first` followed by `second`: type maps compose forward, instance maps
/// backward.
pub fn compose_infomorphisms(first: &Infomorphism, second: &Infomorphism) -> Result<Infomorphism> {
    if first.target != second.source {
        return Err(Error::EndpointMismatch(format!(
            "`{}` ends at `{}` but `{}` starts at `{}`",
            first.name, first.target.name, second.name, second.source.name
        )));
    }
    let type_map = first
        .type_map
        .iter()
        .map(|(t, mid)| Ok((t.clone(), second.map_type(mid)?.clone())))
        .collect::<Result<_>>()?;
    let instance_map = second
        .instance_map
        .iter()
        .map(|(c, mid)| Ok((c.clone(), first.map_instance(mid)?.clone())))
        .collect::<Result<_>>()?;
    Ok(Infomorphism {
        name: format!("{};{}", first.name, second.name),
        source: first.source.clone(),
        target: second.target.clone(),
        type_map,
        instance_map,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::set_of;

    pub(crate) fn clf_a() -> Classification {
        Classification::new(
            "CLF-A",
            ["aristotle", "civic87"],
            ["human", "philosopher", "car"],
            [
                ("aristotle", "human"),
                ("aristotle", "philosopher"),
                ("civic87", "car"),
            ],
        )
    }

    fn swap_human_car(c: &Arc<Classification>) -> Infomorphism {
        Infomorphism::new(
            "swap",
            c.clone(),
            c.clone(),
            [
                ("human".into(), "car".into()),
                ("car".into(), "human".into()),
                ("philosopher".into(), "philosopher".into()),
            ]
            .into(),
            c.instances.iter().map(|i| (i.clone(), i.clone())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(clf_a().validate().is_empty());
        assert!(Classification::default().validate().is_empty());
        let mut broken = clf_a();
        broken
            .incidence
            .insert(("aristotle".into(), "robot".into()));
        let defects = broken.validate();
        assert_eq!(defects.len(), 1);
        assert!(defects[0].to_string().contains("(aristotle, robot)"));
        let spaced =
            Classification::new("s", ["a b"], Vec::<&str>::new(), Vec::<(&str, &str)>::new());
        assert!(matches!(
            spaced.validate()[0],
            Defect::InvalidIdentifier { .. }
        ));
    }

    #[test]
    fn intents_and_extents() {
        let c = clf_a();
        assert_eq!(
            c.intent("aristotle").unwrap(),
            set_of(["human", "philosopher"])
        );
        assert_eq!(c.intent("civic87").unwrap(), set_of(["car"]));
        assert_eq!(c.extent(&set_of(["human"])).unwrap(), set_of(["aristotle"]));
        assert_eq!(c.extent(&IdSet::new()).unwrap(), c.instances);
        assert!(c.extent(&set_of(["human", "car"])).unwrap().is_empty());
        assert_eq!(
            c.intent("plato"),
            Err(Error::UnknownInstance("plato".into()))
        );
        assert_eq!(
            c.extent(&set_of(["robot"])),
            Err(Error::UnknownType("robot".into()))
        );

        let mut lonely = clf_a();
        lonely.instances.insert("rock".into());
        assert!(lonely.intent("rock").unwrap().is_empty());
    }

    #[test]
    fn instance_order() {
        let c = clf_a();
        assert!(c.instance_leq("aristotle", "aristotle").unwrap());
        assert!(!c.instance_leq("aristotle", "civic87").unwrap());
        let mut full = clf_a();
        full.instances.insert("omni".into());
        for t in full.types.clone() {
            full.incidence.insert(("omni".into(), t));
        }
        for i in full.instances.clone() {
            assert!(full.instance_leq("omni", &i).unwrap());
        }
    }

    #[test]
    fn invariance_checks() {
        let c = Arc::new(clf_a());
        assert!(check_infomorphism(&Infomorphism::identity(c.clone())).is_empty());
        let defects = check_infomorphism(&swap_human_car(&c));
        assert!(defects.contains(&Defect::Invariance {
            infomorphism: "swap".into(),
            instance: "aristotle".into(),
            ty: "human".into(),
            side: Side::Source,
        }));
        // (aristotle, car) and (civic87, human), (civic87, car) also break.
        assert_eq!(defects.len(), 4);
    }

    #[test]
    fn non_total_maps_are_errors() {
        let c = Arc::new(clf_a());
        let err = Infomorphism::new(
            "partial",
            c.clone(),
            c.clone(),
            [("human".into(), "human".into())].into(),
            BTreeMap::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonTotalMap { .. }));
    }

    #[test]
    fn composition_of_two_element_maps() {
        let a = Arc::new(Classification::new(
            "A",
            ["a1", "a2"],
            ["s", "t"],
            [("a1", "s"), ("a2", "t")],
        ));
        let b = Arc::new(Classification::new(
            "B",
            ["b1", "b2"],
            ["u", "v"],
            [("b1", "v"), ("b2", "u")],
        ));
        let c = Arc::new(Classification::new(
            "C",
            ["c1", "c2"],
            ["x", "y"],
            [("c1", "x"), ("c2", "y")],
        ));
        let f = Infomorphism::new(
            "f",
            a.clone(),
            b.clone(),
            [("s".into(), "v".into()), ("t".into(), "u".into())].into(),
            [("b1".into(), "a1".into()), ("b2".into(), "a2".into())].into(),
        )
        .unwrap();
        let g = Infomorphism::new(
            "g",
            b.clone(),
            c.clone(),
            [("u".into(), "y".into()), ("v".into(), "x".into())].into(),
            [("c1".into(), "b1".into()), ("c2".into(), "b2".into())].into(),
        )
        .unwrap();
        assert!(check_infomorphism(&f).is_empty());
        assert!(check_infomorphism(&g).is_empty());
        let h = compose_infomorphisms(&f, &g).unwrap();
        let expected_types: BTreeMap<Id, Id> =
            [("s".into(), "x".into()), ("t".into(), "y".into())].into();
        let expected_instances: BTreeMap<Id, Id> =
            [("c1".into(), "a1".into()), ("c2".into(), "a2".into())].into();
        assert_eq!(h.type_map, expected_types);
        assert_eq!(h.instance_map, expected_instances);
        assert!(check_infomorphism(&h).is_empty());

        let id_a = Infomorphism::identity(a);
        let id_b = Infomorphism::identity(b);
        let left = compose_infomorphisms(&id_a, &f).unwrap();
        let right = compose_infomorphisms(&f, &id_b).unwrap();
        assert_eq!(
            (left.type_map, left.instance_map),
            (f.type_map.clone(), f.instance_map.clone())
        );
        assert_eq!(
            (right.type_map, right.instance_map),
            (f.type_map.clone(), f.instance_map.clone())
        );
        assert!(matches!(
            compose_infomorphisms(&g, &f),
            Err(Error::EndpointMismatch(_))
        ));
    }

    #[test]
    fn theory_lift() {
        let c = clf_a();
        let lifted = lift_to_theory_classification(&c, crate::DEFAULT_LIFT_CAP).unwrap();
        assert_eq!(lifted.types.len(), 8);
        assert_eq!(lifted.instances, c.instances);
        assert!(lifted.holds("aristotle", &theory_type_name(&set_of(["human"]))));
        assert!(!lifted.holds("civic87", &theory_type_name(&set_of(["car", "human"]))));
        assert!(lifted.validate().is_empty());
        let err = lift_to_theory_classification(&c, 7).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { required: 8, .. }));
    }
}
