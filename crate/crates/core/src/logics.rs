//! Local logics: a classification, a theory over its types, and a set of
//! normal instances whose intents satisfy the theory.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::classification::{check_infomorphism, Infomorphism};
use crate::flow::{direct_flow, inverse_flow};
use crate::theories::{self, all_sequents, require_space, sequent_from_masks, Compiled};
use crate::{Classification, Entailment, Error, Id, IdSet, Result, Sequent, SequentTheory, State};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalLogic {
    classification: Arc<Classification>,
    theory: SequentTheory,
    normal: IdSet,
}

impl LocalLogic {
    /// Checks that the theory is over the classification's types, that normal
    /// instances are declared, and that every normal intent satisfies every
    /// axiom.
    pub fn new(
        classification: Arc<Classification>,
        theory: SequentTheory,
        normal: IdSet,
    ) -> Result<Self> {
        if theory.types != classification.types {
            return Err(Error::LanguageMismatch(format!(
                "theory is not over the types of `{}`",
                classification.name
            )));
        }
        for i in &normal {
            let intent = State {
                holds: classification.intent(i)?,
            };
            if let Some(axiom) = theory.axioms.iter().find(|a| !intent.satisfies(a)) {
                return Err(Error::Invalid {
                    what: "local logic".into(),
                    defects: vec![crate::Defect::Node {
                        node: i.clone(),
                        message: format!("normal instance violates `{axiom}`"),
                    }],
                });
            }
        }
        Ok(LocalLogic {
            classification,
            theory,
            normal,
        })
    }

    pub fn classification(&self) -> &Arc<Classification> {
        &self.classification
    }

    pub fn theory(&self) -> &SequentTheory {
        &self.theory
    }

    pub fn normal(&self) -> &IdSet {
        &self.normal
    }
}

/// The theory of everything an instance population satisfies, answered
/// without materialization.
#[derive(Debug, Clone)]
pub struct NaturalTheory {
    types: IdSet,
    intents: BTreeSet<IdSet>,
}

impl NaturalTheory {
    pub fn of(c: &Classification) -> Self {
        NaturalTheory {
            types: c.types.clone(),
            intents: c.intents().into_values().collect(),
        }
    }
}

impl Entailment for NaturalTheory {
    fn language(&self) -> &IdSet {
        &self.types
    }

    fn entails(&self, s: &Sequent) -> Result<bool> {
        if !s.is_over(&self.types) {
            return Err(theories::out_of_language(s, &self.types));
        }
        Ok(self.intents.iter().all(|x| satisfied_by(x, s)))
    }
}

fn satisfied_by(intent: &IdSet, s: &Sequent) -> bool {
    !(s.ant.is_subset(intent) && s.con.is_disjoint(intent))
}

/// The sound and complete logic of a classification, with its theory
/// materialized under `cap`.
pub fn natural_logic(c: &Arc<Classification>, cap: usize) -> Result<LocalLogic> {
    let theory = theories::materialize(&NaturalTheory::of(c), cap)?;
    Ok(LocalLogic {
        classification: c.clone(),
        theory,
        normal: c.instances.clone(),
    })
}

/// Every instance, normal or not, satisfies every axiom.
pub fn is_sound(l: &LocalLogic) -> bool {
    let intents = l.classification.intents();
    intents
        .values()
        .all(|x| l.theory.axioms.iter().all(|a| satisfied_by(x, a)))
}

/// Every sequent satisfied by all normal instances is entailed.
///
/// Decided as: the theory plus, for each normal intent `X`, the axiom
/// `X |- Σ∖X` excluding exactly that state, is unsatisfiable. That is, every
/// model of the theory is some normal intent.
pub fn is_complete(l: &LocalLogic) -> bool {
    let Ok(mut compiled) = l.theory.compile() else {
        return false;
    };
    for i in &l.normal {
        let Ok(intent) = l.classification.intent(i) else {
            return false;
        };
        let rest: IdSet = l.theory.types.difference(&intent).cloned().collect();
        if compiled
            .add(&Sequent {
                ant: intent,
                con: rest,
            })
            .is_err()
        {
            return false;
        }
    }
    !compiled.is_consistent()
}

/// Same classification, theory = satisfied-by-all ∩ entailed-by-`l`, every
/// instance normal.
pub fn restriction(l: &LocalLogic, cap: usize) -> Result<LocalLogic> {
    let types = &l.theory.types;
    require_space("restriction", types, cap)?;
    let natural = NaturalTheory::of(&l.classification);
    let compiled: Compiled = l.theory.compile()?;
    let ordered: Vec<&Id> = types.iter().collect();
    let mut axioms = BTreeSet::new();
    for (a, c) in all_sequents(types) {
        let s = sequent_from_masks(&ordered, a, c);
        if natural.entails(&s)? && (a & c != 0 || compiled.entails_masks(a, c)) {
            axioms.insert(s);
        }
    }
    Ok(LocalLogic {
        classification: l.classification.clone(),
        theory: SequentTheory {
            types: types.clone(),
            axioms,
        },
        normal: l.classification.instances.clone(),
    })
}

/// Makes every instance whose intent satisfies the theory normal, and no
/// other.
pub fn normalize(l: &LocalLogic) -> LocalLogic {
    let normal = l
        .classification
        .intents()
        .into_iter()
        .filter(|(_, x)| l.theory.axioms.iter().all(|a| satisfied_by(x, a)))
        .map(|(i, _)| i)
        .collect();
    LocalLogic {
        classification: l.classification.clone(),
        theory: l.theory.clone(),
        normal,
    }
}

fn require_valid(f: &Infomorphism) -> Result<()> {
    let defects = check_infomorphism(f);
    if defects.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid {
            what: format!("infomorphism {}", f.name),
            defects,
        })
    }
}

/// Moves a logic on `f.source` to `f.target`: direct flow of the theory,
/// normal instances are those mapped into the normal set.
pub fn logic_direct_image(f: &Infomorphism, l: &LocalLogic) -> Result<LocalLogic> {
    if *l.classification != *f.source {
        return Err(Error::EndpointMismatch(format!(
            "logic is not on the source of `{}`",
            f.name
        )));
    }
    require_valid(f)?;
    let theory = direct_flow(&f.type_function(), &l.theory)?;
    let normal = f
        .instance_map
        .iter()
        .filter(|(_, a)| l.normal.contains(*a))
        .map(|(b, _)| b.clone())
        .collect();
    LocalLogic::new(f.target.clone(), theory, normal)
}

/// Moves a logic on `f.target` to `f.source`: materialized inverse flow of
/// the theory, normal instances are images of the normal set.
pub fn logic_inverse_image(f: &Infomorphism, l: &LocalLogic, cap: usize) -> Result<LocalLogic> {
    if *l.classification != *f.target {
        return Err(Error::EndpointMismatch(format!(
            "logic is not on the target of `{}`",
            f.name
        )));
    }
    require_valid(f)?;
    let theory = inverse_flow(&f.type_function(), &l.theory)?.materialize(cap)?;
    let normal = l
        .normal
        .iter()
        .map(|b| f.map_instance(b).cloned())
        .collect::<Result<_>>()?;
    LocalLogic::new(f.source.clone(), theory, normal)
}

/// Theories ordered by entailment, normal sets by reverse containment.
pub fn logic_leq(lower: &LocalLogic, upper: &LocalLogic) -> Result<bool> {
    if lower.classification != upper.classification {
        return Err(Error::EndpointMismatch(
            "logics are on different classifications".into(),
        ));
    }
    Ok(theories::theory_leq(&lower.theory, &upper.theory)?
        && lower.normal.is_superset(&upper.normal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::tests::clf_a;
    use crate::set_of;
    use crate::theories::{close, theory_leq};
    use crate::DEFAULT_CLOSURE_CAP as CAP;

    fn seq(l: &str) -> Sequent {
        Sequent::parse(l).unwrap()
    }

    fn car_human() -> LocalLogic {
        let c = Arc::new(clf_a());
        let t = SequentTheory::new(c.types.clone(), [seq("car |- human")]).unwrap();
        LocalLogic::new(c, t, set_of(["aristotle"])).unwrap()
    }

    /// Completeness straight from the definition, by enumerating sequents.
    fn complete_by_definition(l: &LocalLogic) -> bool {
        let types: Vec<&Id> = l.theory.types.iter().collect();
        let normal_intents: Vec<IdSet> = l
            .normal
            .iter()
            .map(|i| l.classification.intent(i).unwrap())
            .collect();
        all_sequents(&l.theory.types).all(|(a, c)| {
            let s = sequent_from_masks(&types, a, c);
            !normal_intents.iter().all(|x| satisfied_by(x, &s)) || l.theory.entails(&s).unwrap()
        })
    }

    #[test]
    fn invariant_is_enforced() {
        let c = Arc::new(clf_a());
        let t = SequentTheory::new(c.types.clone(), [seq("car |- human")]).unwrap();
        assert!(matches!(
            LocalLogic::new(c.clone(), t, set_of(["civic87"])),
            Err(Error::Invalid { .. })
        ));
        let wrong = SequentTheory::empty(set_of(["x"]));
        assert!(LocalLogic::new(c, wrong, IdSet::new()).is_err());
    }

    #[test]
    fn natural_logic_examples() {
        let empty = Arc::new(Classification::new(
            "E",
            Vec::<&str>::new(),
            ["a"],
            Vec::<(&str, &str)>::new(),
        ));
        let nat = natural_logic(&empty, CAP).unwrap();
        assert_eq!(nat.theory.axioms.len(), 4);
        assert!(nat.theory.axioms.contains(&Sequent::empty()));

        let c = Arc::new(clf_a());
        let nat = natural_logic(&c, CAP).unwrap();
        assert!(nat.theory.entails(&seq("human |- philosopher")).unwrap());
        assert!(!nat.theory.entails(&seq("|- human")).unwrap());
        assert!(is_sound(&nat) && is_complete(&nat));
        assert!(complete_by_definition(&nat));
        assert!(matches!(
            natural_logic(&c, 63),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn soundness_and_completeness() {
        let l = car_human();
        assert!(!is_sound(&l));
        let c = Arc::new(clf_a());
        let empty = LocalLogic::new(
            c.clone(),
            SequentTheory::empty(c.types.clone()),
            c.instances.clone(),
        )
        .unwrap();
        assert!(is_sound(&empty));
        assert!(!is_complete(&empty));
        assert!(!complete_by_definition(&empty));
        assert!(!NaturalTheory::of(&c).entails(&seq("|- car")).unwrap());
    }

    #[test]
    fn completeness_decision_matches_definition() {
        let c = Arc::new(clf_a());
        let candidates = [
            vec![],
            vec!["human |- philosopher"],
            vec![
                "human |- philosopher",
                "philosopher |- human",
                "|- human, car",
                "human, car |-",
            ],
            vec!["|- human", "human |- philosopher"],
            vec!["|-"],
        ];
        for axioms in candidates {
            let t = SequentTheory::new(c.types.clone(), axioms.iter().map(|a| seq(a))).unwrap();
            for normal in [IdSet::new(), set_of(["aristotle"]), c.instances.clone()] {
                if let Ok(l) = LocalLogic::new(c.clone(), t.clone(), normal) {
                    assert_eq!(is_complete(&l), complete_by_definition(&l), "{axioms:?}");
                }
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let r = restriction(&car_human(), CAP).unwrap();
        assert!(is_sound(&r));
        assert!(!r.theory.axioms.contains(&seq("car |- human")));
        let c = Arc::new(clf_a());
        let nat = natural_logic(&c, CAP).unwrap();
        assert_eq!(restriction(&nat, CAP).unwrap(), nat);
        let t = SequentTheory::new(c.types.clone(), [seq("philosopher |- human")]).unwrap();
        let sound = LocalLogic::new(c.clone(), t.clone(), c.instances.clone()).unwrap();
        let r = restriction(&sound, CAP).unwrap();
        let closed = close(&t, CAP).unwrap();
        let expected: BTreeSet<Sequent> = closed
            .axioms
            .intersection(&nat.theory.axioms)
            .cloned()
            .collect();
        assert_eq!(r.theory.axioms, expected);
    }

    #[test]
    fn normalize_examples() {
        let l = car_human();
        let n = normalize(&l);
        assert_eq!(n.normal, set_of(["aristotle"]));
        assert_eq!(normalize(&n), n);
        let c = Arc::new(clf_a());
        let nat = natural_logic(&c, CAP).unwrap();
        let shrunk = LocalLogic::new(c.clone(), nat.theory.clone(), IdSet::new()).unwrap();
        assert_eq!(normalize(&shrunk).normal, c.instances);
    }

    #[test]
    fn images_along_identity() {
        let c = Arc::new(clf_a());
        let id = Infomorphism::identity(c.clone());
        let l = LocalLogic::new(
            c.clone(),
            SequentTheory::new(c.types.clone(), [seq("philosopher |- human")]).unwrap(),
            c.instances.clone(),
        )
        .unwrap();
        assert_eq!(logic_direct_image(&id, &l).unwrap(), l);
        let back = logic_inverse_image(&id, &l, CAP).unwrap();
        assert_eq!(back.normal, l.normal);
        assert_eq!(back.theory, close(&l.theory, CAP).unwrap());
    }

    #[test]
    fn order_examples() {
        let c = Arc::new(clf_a());
        let nat = natural_logic(&c, CAP).unwrap();
        let empty = LocalLogic::new(
            c.clone(),
            SequentTheory::empty(c.types.clone()),
            c.instances.clone(),
        )
        .unwrap();
        assert!(logic_leq(&nat, &nat).unwrap());
        assert!(logic_leq(&nat, &empty).unwrap());
        assert!(!logic_leq(&empty, &nat).unwrap());
        let fewer = LocalLogic::new(
            c.clone(),
            SequentTheory::empty(c.types.clone()),
            set_of(["aristotle"]),
        )
        .unwrap();
        assert!(logic_leq(&empty, &fewer).unwrap());
        assert!(!logic_leq(&fewer, &empty).unwrap());
        assert!(theory_leq(&nat.theory, &empty.theory).unwrap());
    }
}
