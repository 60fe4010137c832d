//! Information systems and the semantic-integration pipeline.
//!
//! An information system is a shape-indexed diagram of theories whose edges
//! are theory morphisms. Integration sums the node languages, pushes every
//! node theory forward into the sum, takes the union of the images as the
//! sum theory (the meet in entailment order), and pulls the sum back to each
//! node. What a node's pulled-back theory entails beyond its own axioms is
//! what the rest of the system tells it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::classification::{check_infomorphism, Infomorphism};
use crate::diagrams::{
    colimit_language, sum_classification, Channel, ClsDiagram, LanguageColimit, LanguageDiagram,
    ShapeGraph,
};
use crate::flow::{direct_flow, inverse_flow, InverseFlow};
use crate::theories::{check_theory_morphism, require_space, theory_leq};
use crate::{
    Classification, Defect, Entailment, Error, Id, IdSet, Result, Sequent, SequentTheory,
    TypeFunction,
};

/// Alignment diagram of theories, optionally populated by classifications.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InformationSystem {
    pub shape: ShapeGraph,
    pub node_theory: BTreeMap<Id, SequentTheory>,
    pub node_cls: BTreeMap<Id, Arc<Classification>>,
    pub edge_map: BTreeMap<Id, TypeFunction>,
    /// Instance maps (target instances to source instances) for edges whose
    /// endpoints are both populated.
    pub edge_instance_map: BTreeMap<Id, BTreeMap<Id, Id>>,
}

impl InformationSystem {
    pub fn languages(&self) -> LanguageDiagram {
        LanguageDiagram {
            shape: self.shape.clone(),
            node_language: self
                .node_theory
                .iter()
                .map(|(n, t)| (n.clone(), t.types.clone()))
                .collect(),
            edge_map: self.edge_map.clone(),
        }
    }

    pub fn theory(&self, node: &str) -> Result<&SequentTheory> {
        self.node_theory
            .get(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))
    }

    /// The classification diagram, when every node is populated and every
    /// edge carries an instance map.
    pub fn classification_diagram(&self) -> Option<ClsDiagram> {
        if self
            .shape
            .nodes
            .iter()
            .any(|n| !self.node_cls.contains_key(n))
            || self
                .shape
                .edges
                .keys()
                .any(|e| !self.edge_instance_map.contains_key(e))
        {
            return None;
        }
        let mut edge_info = BTreeMap::new();
        for (edge, (src, dst)) in &self.shape.edges {
            let f = Infomorphism::new(
                edge,
                self.node_cls[src].clone(),
                self.node_cls[dst].clone(),
                self.edge_map.get(edge)?.as_map().clone(),
                self.edge_instance_map[edge].clone(),
            )
            .ok()?;
            edge_info.insert(edge.clone(), f);
        }
        Some(ClsDiagram {
            shape: self.shape.clone(),
            node_cls: self.node_cls.clone(),
            edge_info,
        })
    }
}

/// Every failing invariant of a system, localized to node or edge.
pub fn validate_system(s: &InformationSystem) -> Vec<Defect> {
    let mut defects = s.shape.validate();
    for node in &s.shape.nodes {
        let Some(theory) = s.node_theory.get(node) else {
            defects.push(Defect::Node {
                node: node.clone(),
                message: "no theory".into(),
            });
            continue;
        };
        defects.extend(theory.validate(&format!("node {node}")));
        if let Some(c) = s.node_cls.get(node) {
            defects.extend(c.validate());
            if c.types != theory.types {
                defects.push(Defect::Node {
                    node: node.clone(),
                    message: format!("classification `{}` is not over the theory's types", c.name),
                });
            }
        }
    }
    for node in s.node_theory.keys().chain(s.node_cls.keys()) {
        if !s.shape.nodes.contains(node) {
            defects.push(Defect::Node {
                node: node.clone(),
                message: "not in the shape".into(),
            });
        }
    }
    if !defects.is_empty() {
        return defects;
    }
    for (edge, (src, dst)) in &s.shape.edges {
        let Some(f) = s.edge_map.get(edge) else {
            defects.push(Defect::Edge {
                edge: edge.clone(),
                message: "no type function".into(),
            });
            continue;
        };
        let (source, target) = (&s.node_theory[src], &s.node_theory[dst]);
        match check_theory_morphism(f, source, target) {
            Ok(failing) => defects.extend(failing.into_iter().map(|d| match d {
                Defect::AxiomNotPreserved { axiom, .. } => Defect::Edge {
                    edge: edge.clone(),
                    message: format!(
                        "image of axiom `{axiom}` is not entailed by the theory at {dst}"
                    ),
                },
                other => other,
            })),
            Err(e) => defects.push(Defect::Edge {
                edge: edge.clone(),
                message: e.to_string(),
            }),
        }
        if let Some(instance_map) = s.edge_instance_map.get(edge) {
            let (Some(a), Some(b)) = (s.node_cls.get(src), s.node_cls.get(dst)) else {
                defects.push(Defect::Edge {
                    edge: edge.clone(),
                    message: "instance map given but an endpoint has no classification".into(),
                });
                continue;
            };
            match Infomorphism::new(
                edge,
                a.clone(),
                b.clone(),
                f.as_map().clone(),
                instance_map.clone(),
            ) {
                Ok(info) => defects.extend(check_infomorphism(&info)),
                Err(e) => defects.push(Defect::Edge {
                    edge: edge.clone(),
                    message: e.to_string(),
                }),
            }
        }
    }
    defects
}

fn require_valid(s: &InformationSystem) -> Result<()> {
    let defects = validate_system(s);
    if defects.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid {
            what: "information system".into(),
            defects,
        })
    }
}

/// Consistency classification of a system's sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Monocosmic,
    Polycosmic,
    PointwiseInconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Monocosmic => "monocosmic",
            Verdict::Polycosmic => "polycosmic",
            Verdict::PointwiseInconsistent => "pointwise-inconsistent",
        })
    }
}

/// The sum of a system and the per-node closure handles. Closures stay
/// virtual: queries go through the sum.
#[derive(Debug, Clone)]
pub struct SystemClosure {
    pub sum_language: LanguageColimit,
    /// Union of the direct-flow images of the node theories.
    pub sum_theory: SequentTheory,
    /// Direct-flow image of each node theory.
    pub images: BTreeMap<Id, SequentTheory>,
    pub handles: BTreeMap<Id, InverseFlow>,
}

impl SystemClosure {
    pub fn entails_at(&self, node: &str, q: &Sequent) -> Result<bool> {
        self.handles
            .get(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?
            .entails(q)
    }

    pub fn is_pointwise_consistent(&self) -> bool {
        self.images.values().all(SequentTheory::is_consistent)
    }

    pub fn is_monocosmic(&self) -> bool {
        self.sum_theory.is_consistent()
    }

    pub fn verdict(&self) -> Verdict {
        if !self.is_pointwise_consistent() {
            Verdict::PointwiseInconsistent
        } else if self.is_monocosmic() {
            Verdict::Monocosmic
        } else {
            Verdict::Polycosmic
        }
    }
}

/// Sum language, sum theory and closure handles of a valid system.
pub fn system_closure(s: &InformationSystem) -> Result<SystemClosure> {
    require_valid(s)?;
    let sum_language = colimit_language(&s.languages())?;
    let mut sum_theory = SequentTheory::empty(sum_language.sum.clone());
    let mut images = BTreeMap::new();
    for (node, theory) in &s.node_theory {
        let image = direct_flow(&sum_language.cocone[node], theory)?;
        sum_theory.axioms.extend(image.axioms.iter().cloned());
        images.insert(node.clone(), image);
    }
    let handles = sum_language
        .cocone
        .iter()
        .map(|(node, f)| Ok((node.clone(), inverse_flow(f, &sum_theory)?)))
        .collect::<Result<_>>()?;
    Ok(SystemClosure {
        sum_language,
        sum_theory,
        images,
        handles,
    })
}

/// Limits applied during integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest number of candidate sequents examined per node for deltas.
    pub sequents: usize,
    /// Largest instance product for the sum channel of populated systems.
    pub instances: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            sequents: crate::DEFAULT_CLOSURE_CAP,
            instances: crate::DEFAULT_INSTANCE_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntegrationResult {
    pub closure: SystemClosure,
    pub delta_bound: usize,
    pub pointwise: bool,
    pub monocosmic: bool,
    pub verdict: Verdict,
    /// New consequences per node with at most `delta_bound` types per side.
    pub deltas: BTreeMap<Id, Vec<Sequent>>,
    /// Sum channel, for fully populated systems.
    pub channel: Option<Channel>,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Number of sequents over `n` types with at most `bound` types per side.
pub fn bounded_space(n: usize, bound: usize) -> u128 {
    let side: u128 = (0..=bound.min(n)).map(|k| binomial(n, k)).sum();
    side.saturating_mul(side)
}

/// Subsets of `types` with at most `bound` elements, in size then
/// lexicographic order.
fn small_subsets(types: &[&Id], bound: usize) -> Vec<IdSet> {
    fn rec(types: &[&Id], start: usize, left: usize, cur: &mut Vec<Id>, out: &mut Vec<IdSet>) {
        out.push(cur.iter().cloned().collect());
        if left == 0 {
            return;
        }
        for i in start..types.len() {
            cur.push(types[i].clone());
            rec(types, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(types, 0, bound, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Sequents over `language` with at most `bound` types per side, skipping
/// those sharing a type.
pub fn bounded_sequents(language: &IdSet, bound: usize) -> Vec<Sequent> {
    let types: Vec<&Id> = language.iter().collect();
    let subsets = small_subsets(&types, bound);
    let mut out = Vec::new();
    for ant in &subsets {
        for con in &subsets {
            if ant.is_disjoint(con) {
                out.push(Sequent {
                    ant: ant.clone(),
                    con: con.clone(),
                });
            }
        }
    }
    out.sort();
    out
}

/// Runs the full pipeline: sum language, sum theory, closure handles,
/// bounded deltas and the consistency verdict.
pub fn integrate(
    s: &InformationSystem,
    caps: Caps,
    delta_bound: usize,
) -> Result<IntegrationResult> {
    let closure = system_closure(s)?;
    let mut deltas = BTreeMap::new();
    for (node, theory) in &s.node_theory {
        let required = bounded_space(theory.types.len(), delta_bound);
        if required > caps.sequents as u128 {
            return Err(Error::cap(
                format!("deltas at node {node}"),
                required,
                caps.sequents,
            ));
        }
        let compiled = theory.compile()?;
        let handle = &closure.handles[node];
        let mut found = Vec::new();
        for q in bounded_sequents(&theory.types, delta_bound) {
            if handle.entails(&q)? && !compiled.entails(&q)? {
                found.push(q);
            }
        }
        deltas.insert(node.clone(), found);
    }
    let channel = match s.classification_diagram() {
        Some(d) => Some(sum_classification(&d, caps.instances)?),
        None => None,
    };
    Ok(IntegrationResult {
        delta_bound,
        pointwise: closure.is_pointwise_consistent(),
        monocosmic: closure.is_monocosmic(),
        verdict: closure.verdict(),
        closure,
        deltas,
        channel,
    })
}

pub fn system_entails_at(s: &InformationSystem, node: &str, q: &Sequent) -> Result<bool> {
    s.theory(node)?;
    system_closure(s)?.entails_at(node, q)
}

pub fn is_monocosmic(s: &InformationSystem) -> Result<bool> {
    Ok(system_closure(s)?.is_monocosmic())
}

pub fn is_pointwise_consistent(s: &InformationSystem) -> Result<bool> {
    Ok(system_closure(s)?.is_pointwise_consistent())
}

pub fn is_polycosmic(s: &InformationSystem) -> Result<bool> {
    Ok(system_closure(s)?.verdict() == Verdict::Polycosmic)
}

fn require_same_frame(s1: &InformationSystem, s2: &InformationSystem) -> Result<()> {
    let langs = |s: &InformationSystem| -> BTreeMap<Id, IdSet> {
        s.node_theory
            .iter()
            .map(|(n, t)| (n.clone(), t.types.clone()))
            .collect()
    };
    if s1.shape != s2.shape || langs(s1) != langs(s2) || s1.edge_map != s2.edge_map {
        return Err(Error::LanguageMismatch(
            "systems differ in shape, node languages or edge maps".into(),
        ));
    }
    Ok(())
}

/// Pointwise entailment order of node theories.
pub fn system_leq(s1: &InformationSystem, s2: &InformationSystem) -> Result<bool> {
    require_same_frame(s1, s2)?;
    for (node, theory) in &s1.node_theory {
        if !theory_leq(theory, &s2.node_theory[node])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the closure of `s1` entails every axiom of `s2` at every node.
pub fn system_entails(s1: &InformationSystem, s2: &InformationSystem) -> Result<bool> {
    require_same_frame(s1, s2)?;
    let closure = system_closure(s1)?;
    for (node, theory) in &s2.node_theory {
        for axiom in &theory.axioms {
            if !closure.entails_at(node, axiom)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The system whose node theories are the materialized closure handles.
pub fn close_system(s: &InformationSystem, cap: usize) -> Result<InformationSystem> {
    let closure = system_closure(s)?;
    let mut out = s.clone();
    for (node, handle) in &closure.handles {
        require_space(&format!("closure at node {node}"), handle.language(), cap)?;
        out.node_theory
            .insert(node.clone(), handle.materialize(cap)?);
    }
    Ok(out)
}
