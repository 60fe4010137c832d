//! The JSON bundle format: named classifications, theories, infomorphisms
//! and information systems in one document.
//!
//! ```json
//! {
//!   "classifications": {"C": {"instances": ["i"], "types": ["t"], "incidence": [["i", "t"]]}},
//!   "theories": {"T": {"types": ["t"], "axioms": [{"ant": ["t"], "con": []}]}},
//!   "infomorphisms": {"f": {"source": "C", "target": "C", "type_map": {"t": "t"}, "instance_map": {"i": "i"}}},
//!   "systems": {"S": {"nodes": {"n": {"theory": "T", "classification": null}}, "edges": []}}
//! }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classification::{check_infomorphism, Infomorphism};
use crate::diagrams::ShapeGraph;
use crate::integration::validate_system;
use crate::{
    is_valid_id, Classification, Defect, Entailment, Error, Id, IdSet, InformationSystem, Result,
    Sequent, SequentTheory, TypeFunction,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassification {
    instances: Vec<Id>,
    types: Vec<Id>,
    #[serde(default)]
    incidence: Vec<(Id, Id)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequent {
    #[serde(default)]
    ant: Vec<Id>,
    #[serde(default)]
    con: Vec<Id>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTheory {
    types: Vec<Id>,
    #[serde(default)]
    axioms: Vec<RawSequent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInfomorphism {
    source: Id,
    target: Id,
    type_map: BTreeMap<Id, Id>,
    instance_map: BTreeMap<Id, Id>,
}

/// Node of a system description: a theory name and an optional
/// classification name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRef {
    pub theory: Id,
    #[serde(default)]
    pub classification: Option<Id>,
}

/// Edge of a system description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRef {
    pub id: Id,
    pub src: Id,
    pub dst: Id,
    pub type_map: BTreeMap<Id, Id>,
    #[serde(default)]
    pub instance_map: Option<BTreeMap<Id, Id>>,
}

/// A system as written in a bundle, by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemRef {
    pub nodes: BTreeMap<Id, NodeRef>,
    #[serde(default)]
    pub edges: Vec<EdgeRef>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    #[serde(default)]
    classifications: BTreeMap<Id, RawClassification>,
    #[serde(default)]
    theories: BTreeMap<Id, RawTheory>,
    #[serde(default)]
    infomorphisms: BTreeMap<Id, RawInfomorphism>,
    #[serde(default)]
    systems: BTreeMap<Id, SystemRef>,
}

/// A fully resolved and validated bundle.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bundle {
    pub classifications: BTreeMap<Id, Arc<Classification>>,
    pub theories: BTreeMap<Id, SequentTheory>,
    pub infomorphisms: BTreeMap<Id, Infomorphism>,
    pub systems: BTreeMap<Id, InformationSystem>,
    /// Systems by name, as written.
    pub system_refs: BTreeMap<Id, SystemRef>,
}

fn dangling(kind: &str, name: &str, from: String) -> Error {
    Error::Dangling {
        kind: kind.into(),
        name: name.to_string(),
        from,
    }
}

fn unique(owner: &str, what: &str, ids: &[Id], defects: &mut Vec<Defect>) -> IdSet {
    let mut seen = IdSet::new();
    for id in ids {
        if !seen.insert(id.clone()) {
            defects.push(Defect::Map {
                owner: owner.to_string(),
                message: format!("duplicate {what} `{id}`"),
            });
        }
        if !is_valid_id(id) {
            defects.push(Defect::InvalidIdentifier {
                owner: owner.to_string(),
                id: id.clone(),
            });
        }
    }
    seen
}

fn check_name(kind: &str, name: &str, defects: &mut Vec<Defect>) {
    if !is_valid_id(name) {
        defects.push(Defect::InvalidIdentifier {
            owner: kind.to_string(),
            id: name.to_string(),
        });
    }
}

/// Parses, resolves and validates a bundle document.
pub fn parse_bundle(text: &str) -> Result<Bundle> {
    let raw: RawBundle = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    resolve(raw)
}

fn resolve(raw: RawBundle) -> Result<Bundle> {
    // References first, so dangling names are reported as such.
    for (name, f) in &raw.infomorphisms {
        for end in [&f.source, &f.target] {
            if !raw.classifications.contains_key(end) {
                return Err(dangling(
                    "classification",
                    end,
                    format!("infomorphism `{name}`"),
                ));
            }
        }
    }
    for (name, s) in &raw.systems {
        for (node, r) in &s.nodes {
            if !raw.theories.contains_key(&r.theory) {
                return Err(dangling(
                    "theory",
                    &r.theory,
                    format!("system `{name}` node `{node}`"),
                ));
            }
            if let Some(c) = &r.classification {
                if !raw.classifications.contains_key(c) {
                    return Err(dangling(
                        "classification",
                        c,
                        format!("system `{name}` node `{node}`"),
                    ));
                }
            }
        }
        for e in &s.edges {
            for end in [&e.src, &e.dst] {
                if !s.nodes.contains_key(end) {
                    return Err(dangling(
                        "node",
                        end,
                        format!("system `{name}` edge `{}`", e.id),
                    ));
                }
            }
        }
    }

    let mut defects = Vec::new();
    let mut bundle = Bundle::default();
    for (name, c) in &raw.classifications {
        check_name("classification", name, &mut defects);
        let owner = format!("classification {name}");
        let cls = Classification {
            name: name.clone(),
            instances: unique(&owner, "instance", &c.instances, &mut defects),
            types: unique(&owner, "type", &c.types, &mut defects),
            incidence: c.incidence.iter().cloned().collect(),
        };
        defects.extend(
            cls.validate()
                .into_iter()
                .filter(|d| !matches!(d, Defect::InvalidIdentifier { .. })),
        );
        bundle.classifications.insert(name.clone(), Arc::new(cls));
    }
    for (name, t) in &raw.theories {
        check_name("theory", name, &mut defects);
        let owner = format!("theory {name}");
        let theory = SequentTheory {
            types: unique(&owner, "type", &t.types, &mut defects),
            axioms: t
                .axioms
                .iter()
                .map(|a| Sequent::new(a.ant.iter().cloned(), a.con.iter().cloned()))
                .collect(),
        };
        defects.extend(
            theory
                .validate(&owner)
                .into_iter()
                .filter(|d| !matches!(d, Defect::InvalidIdentifier { .. })),
        );
        bundle.theories.insert(name.clone(), theory);
    }
    for (name, f) in &raw.infomorphisms {
        check_name("infomorphism", name, &mut defects);
        match Infomorphism::new(
            name,
            bundle.classifications[&f.source].clone(),
            bundle.classifications[&f.target].clone(),
            f.type_map.clone(),
            f.instance_map.clone(),
        ) {
            Ok(info) => {
                defects.extend(check_infomorphism(&info));
                bundle.infomorphisms.insert(name.clone(), info);
            }
            Err(e) => defects.push(Defect::Map {
                owner: format!("infomorphism {name}"),
                message: e.to_string(),
            }),
        }
    }
    for (name, s) in &raw.systems {
        check_name("system", name, &mut defects);
        match build_system(name, s, &bundle) {
            Ok(system) => {
                defects.extend(validate_system(&system).into_iter().map(|d| Defect::Map {
                    owner: format!("system {name}"),
                    message: d.to_string(),
                }));
                bundle.systems.insert(name.clone(), system);
            }
            Err(d) => defects.extend(d),
        }
        bundle.system_refs.insert(name.clone(), s.clone());
    }
    if defects.is_empty() {
        Ok(bundle)
    } else {
        Err(Error::Invalid {
            what: "bundle".into(),
            defects,
        })
    }
}

fn build_system(
    name: &str,
    s: &SystemRef,
    bundle: &Bundle,
) -> std::result::Result<InformationSystem, Vec<Defect>> {
    let mut defects = Vec::new();
    let mut system = InformationSystem::default();
    let mut edges = BTreeMap::new();
    for (node, r) in &s.nodes {
        check_name(&format!("system {name} node"), node, &mut defects);
        system
            .node_theory
            .insert(node.clone(), bundle.theories[&r.theory].clone());
        if let Some(c) = &r.classification {
            system
                .node_cls
                .insert(node.clone(), bundle.classifications[c].clone());
        }
    }
    for e in &s.edges {
        check_name(&format!("system {name} edge"), &e.id, &mut defects);
        if edges
            .insert(e.id.clone(), (e.src.clone(), e.dst.clone()))
            .is_some()
        {
            defects.push(Defect::Edge {
                edge: e.id.clone(),
                message: format!("duplicate edge id in system `{name}`"),
            });
            continue;
        }
        match TypeFunction::new(
            &e.id,
            system.node_theory[&e.src].types.clone(),
            system.node_theory[&e.dst].types.clone(),
            e.type_map.clone(),
        ) {
            Ok(f) => {
                system.edge_map.insert(e.id.clone(), f);
            }
            Err(err) => defects.push(Defect::Edge {
                edge: e.id.clone(),
                message: format!("system `{name}`: {err}"),
            }),
        }
        if let Some(m) = &e.instance_map {
            system.edge_instance_map.insert(e.id.clone(), m.clone());
        }
    }
    system.shape = ShapeGraph {
        nodes: s.nodes.keys().cloned().collect(),
        edges,
    };
    if defects.is_empty() {
        Ok(system)
    } else {
        Err(defects)
    }
}

impl Bundle {
    fn to_raw(&self) -> RawBundle {
        RawBundle {
            classifications: self
                .classifications
                .iter()
                .map(|(n, c)| {
                    (
                        n.clone(),
                        RawClassification {
                            instances: c.instances.iter().cloned().collect(),
                            types: c.types.iter().cloned().collect(),
                            incidence: c.incidence.iter().cloned().collect(),
                        },
                    )
                })
                .collect(),
            theories: self
                .theories
                .iter()
                .map(|(n, t)| {
                    (
                        n.clone(),
                        RawTheory {
                            types: t.types.iter().cloned().collect(),
                            axioms: t
                                .axioms
                                .iter()
                                .map(|a| RawSequent {
                                    ant: a.ant.iter().cloned().collect(),
                                    con: a.con.iter().cloned().collect(),
                                })
                                .collect(),
                        },
                    )
                })
                .collect(),
            infomorphisms: self
                .infomorphisms
                .iter()
                .map(|(n, f)| {
                    (
                        n.clone(),
                        RawInfomorphism {
                            source: f.source.name.clone(),
                            target: f.target.name.clone(),
                            type_map: f.type_map.clone(),
                            instance_map: f.instance_map.clone(),
                        },
                    )
                })
                .collect(),
            systems: self
                .system_refs
                .iter()
                .map(|(n, s)| {
                    let mut s = s.clone();
                    s.edges.sort_by(|a, b| a.id.cmp(&b.id));
                    (n.clone(), s)
                })
                .collect(),
        }
    }

    /// Canonical JSON text of the bundle.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_raw()).expect("bundle serializes");
        text.push('\n');
        text
    }

    pub fn classification(&self, name: &str) -> Result<&Arc<Classification>> {
        self.classifications
            .get(name)
            .ok_or_else(|| dangling("classification", name, "the command line".into()))
    }

    pub fn theory(&self, name: &str) -> Result<&SequentTheory> {
        self.theories
            .get(name)
            .ok_or_else(|| dangling("theory", name, "the command line".into()))
    }

    pub fn system(&self, name: &str) -> Result<&InformationSystem> {
        self.systems
            .get(name)
            .ok_or_else(|| dangling("system", name, "the command line".into()))
    }
}

/// Outcome of the seeded regular-rule checks on a bundle's theories.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SelfCheck {
    pub seed: u64,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Samples sequents over every theory of the bundle and checks that
/// entailment obeys identity, weakening and cut on them.
pub fn self_check(bundle: &Bundle, seed: u64, rounds: usize) -> Result<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SelfCheck {
        seed,
        ..Default::default()
    };
    for (name, t) in &bundle.theories {
        let types: Vec<&Id> = t.types.iter().collect();
        if types.is_empty() {
            continue;
        }
        let pick = |rng: &mut ChaCha8Rng| -> IdSet {
            types
                .iter()
                .filter(|_| rng.gen_ratio(1, 4))
                .map(|t| (*t).clone())
                .collect()
        };
        for _ in 0..rounds {
            let x = types[rng.gen_range(0..types.len())].clone();
            let s = Sequent {
                ant: pick(&mut rng),
                con: pick(&mut rng),
            };
            let extra = (pick(&mut rng), pick(&mut rng));

            let identity = Sequent::new([x.clone()], [x.clone()]);
            report.checks += 1;
            if !t.entails(&identity)? {
                report
                    .failures
                    .push(format!("{name}: identity `{identity}` not entailed"));
            }

            if t.entails(&s)? {
                let weakened = Sequent {
                    ant: s.ant.union(&extra.0).cloned().collect(),
                    con: s.con.union(&extra.1).cloned().collect(),
                };
                report.checks += 1;
                if !t.entails(&weakened)? {
                    report.failures.push(format!(
                        "{name}: `{s}` entailed but weakening `{weakened}` is not"
                    ));
                }
            }

            let mut left = s.clone();
            left.con.insert(x.clone());
            let mut right = s.clone();
            right.ant.insert(x.clone());
            if t.entails(&left)? && t.entails(&right)? {
                report.checks += 1;
                if !t.entails(&s)? {
                    report.failures.push(format!(
                        "{name}: cut on `{x}` from `{left}` and `{right}` fails"
                    ));
                }
            }
        }
    }
    Ok(report)
}
