//! Diagrams of languages and classifications over free shape graphs, their
//! sums, and the mediating morphism out of a sum.
//!
//! The type side of a sum is a colimit of sets: the disjoint union of the
//! node languages quotiented by the identifications the edges generate. The
//! instance side is the matching limit: node-indexed tuples compatible with
//! every edge's instance map.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::classification::{check_infomorphism, Infomorphism};
use crate::union_find::UnionFind;
use crate::{Classification, Defect, Error, Id, IdSet, Result, TypeFunction};

/// Nodes and directed edges `edge-id -> (source node, target node)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShapeGraph {
    pub nodes: IdSet,
    pub edges: BTreeMap<Id, (Id, Id)>,
}

impl ShapeGraph {
    pub fn new<N, S>(nodes: N, edges: &[(&str, &str, &str)]) -> Self
    where
        N: IntoIterator<Item = S>,
        S: Into<Id>,
    {
        ShapeGraph {
            nodes: nodes.into_iter().map(Into::into).collect(),
            edges: edges
                .iter()
                .map(|(e, s, t)| (e.to_string(), (s.to_string(), t.to_string())))
                .collect(),
        }
    }

    pub fn validate(&self) -> Vec<Defect> {
        let mut defects = Vec::new();
        for (edge, (src, dst)) in &self.edges {
            for end in [src, dst] {
                if !self.nodes.contains(end) {
                    defects.push(Defect::Edge {
                        edge: edge.clone(),
                        message: format!("endpoint `{end}` is not a node"),
                    });
                }
            }
        }
        defects
    }

    pub fn endpoints(&self, edge: &str) -> Result<&(Id, Id)> {
        self.edges
            .get(edge)
            .ok_or_else(|| Error::UnknownEdge(edge.to_string()))
    }
}

/// A language per node and a type function per edge.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LanguageDiagram {
    pub shape: ShapeGraph,
    pub node_language: BTreeMap<Id, IdSet>,
    pub edge_map: BTreeMap<Id, TypeFunction>,
}

impl LanguageDiagram {
    pub fn validate(&self) -> Vec<Defect> {
        let mut defects = self.shape.validate();
        for node in &self.shape.nodes {
            if !self.node_language.contains_key(node) {
                defects.push(Defect::Node {
                    node: node.clone(),
                    message: "no language".into(),
                });
            }
        }
        for (edge, (src, dst)) in &self.shape.edges {
            let Some(f) = self.edge_map.get(edge) else {
                defects.push(Defect::Edge {
                    edge: edge.clone(),
                    message: "no type function".into(),
                });
                continue;
            };
            if self.node_language.get(src) != Some(f.source())
                || self.node_language.get(dst) != Some(f.target())
            {
                defects.push(Defect::Edge {
                    edge: edge.clone(),
                    message: "type function does not run between its endpoint languages".into(),
                });
            }
        }
        defects
    }
}

/// The sum of a language diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageColimit {
    /// Canonical class names.
    pub sum: IdSet,
    /// Members `(node, type)` of each class.
    pub classes: BTreeMap<Id, BTreeSet<(Id, Id)>>,
    /// Node language into the sum.
    pub cocone: BTreeMap<Id, TypeFunction>,
}

/// `sum:<node>.<type>` for the least member of a class.
pub fn class_name(node: &str, ty: &str) -> Id {
    format!("sum:{node}.{ty}")
}

pub fn colimit_language(d: &LanguageDiagram) -> Result<LanguageColimit> {
    let defects = d.validate();
    if !defects.is_empty() {
        return Err(Error::Invalid {
            what: "language diagram".into(),
            defects,
        });
    }
    let members: Vec<(&Id, &Id)> = d
        .shape
        .nodes
        .iter()
        .flat_map(|n| d.node_language[n].iter().map(move |t| (n, t)))
        .collect();
    let position: BTreeMap<(&Id, &Id), usize> =
        members.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut uf = UnionFind::new(members.len());
    for (edge, (src, dst)) in &d.shape.edges {
        for (t, image) in d.edge_map[edge].as_map() {
            uf.union(position[&(src, t)], position[&(dst, image)]);
        }
    }
    // Members are in (node, type) order, so the first member seen for a root
    // is the least one.
    let mut root_name: BTreeMap<usize, Id> = BTreeMap::new();
    let mut classes: BTreeMap<Id, BTreeSet<(Id, Id)>> = BTreeMap::new();
    let mut cocone_maps: BTreeMap<Id, BTreeMap<Id, Id>> = d
        .shape
        .nodes
        .iter()
        .map(|n| (n.clone(), BTreeMap::new()))
        .collect();
    for (i, (node, ty)) in members.iter().enumerate() {
        let root = uf.find(i);
        let name = root_name
            .entry(root)
            .or_insert_with(|| class_name(node, ty))
            .clone();
        classes
            .entry(name.clone())
            .or_default()
            .insert(((*node).clone(), (*ty).clone()));
        cocone_maps
            .get_mut(*node)
            .expect("node present")
            .insert((*ty).clone(), name);
    }
    let sum: IdSet = classes.keys().cloned().collect();
    let cocone = cocone_maps
        .into_iter()
        .map(|(n, map)| {
            let f = TypeFunction::new(
                &format!("cocone.{n}"),
                d.node_language[&n].clone(),
                sum.clone(),
                map,
            )?;
            Ok((n, f))
        })
        .collect::<Result<_>>()?;
    Ok(LanguageColimit {
        sum,
        classes,
        cocone,
    })
}

/// A classification per node and an infomorphism per edge.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClsDiagram {
    pub shape: ShapeGraph,
    pub node_cls: BTreeMap<Id, Arc<Classification>>,
    pub edge_info: BTreeMap<Id, Infomorphism>,
}

impl ClsDiagram {
    pub fn validate(&self) -> Vec<Defect> {
        let mut defects = self.shape.validate();
        for node in &self.shape.nodes {
            if !self.node_cls.contains_key(node) {
                defects.push(Defect::Node {
                    node: node.clone(),
                    message: "no classification".into(),
                });
            }
        }
        for (edge, (src, dst)) in &self.shape.edges {
            let Some(f) = self.edge_info.get(edge) else {
                defects.push(Defect::Edge {
                    edge: edge.clone(),
                    message: "no infomorphism".into(),
                });
                continue;
            };
            if self.node_cls.get(src) != Some(&f.source)
                || self.node_cls.get(dst) != Some(&f.target)
            {
                defects.push(Defect::Edge {
                    edge: edge.clone(),
                    message: "infomorphism does not run between its endpoint classifications"
                        .into(),
                });
                continue;
            }
            defects.extend(check_infomorphism(f));
        }
        defects
    }

    /// The type-level diagram.
    pub fn languages(&self) -> LanguageDiagram {
        LanguageDiagram {
            shape: self.shape.clone(),
            node_language: self
                .node_cls
                .iter()
                .map(|(n, c)| (n.clone(), c.types.clone()))
                .collect(),
            edge_map: self
                .edge_info
                .iter()
                .map(|(e, f)| (e.clone(), f.type_function()))
                .collect(),
        }
    }
}

/// A core classification with a leg from every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    pub core: Arc<Classification>,
    pub legs: BTreeMap<Id, Infomorphism>,
}

/// Name of a core instance of a sum: `tup:` followed by `node.instance`
/// components in node order, separated by `|`.
pub fn tuple_name(tuple: &[(&Id, &Id)]) -> Id {
    let parts: Vec<String> = tuple.iter().map(|(n, x)| format!("{n}.{x}")).collect();
    format!("tup:{}", parts.join("|"))
}

/// Instance tuples compatible with every edge, by backtracking over nodes
/// in order and checking each edge once both its endpoints are fixed.
fn compatible_tuples(d: &ClsDiagram) -> Vec<Vec<Id>> {
    let nodes: Vec<&Id> = d.shape.nodes.iter().collect();
    let index: BTreeMap<&Id, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    // Edges grouped by the later of their two endpoints.
    let mut checks: Vec<Vec<(usize, usize, &Infomorphism)>> = vec![Vec::new(); nodes.len()];
    for (edge, (src, dst)) in &d.shape.edges {
        let (s, t) = (index[src], index[dst]);
        checks[s.max(t)].push((s, t, &d.edge_info[edge]));
    }
    let candidates: Vec<Vec<&Id>> = nodes
        .iter()
        .map(|n| d.node_cls[*n].instances.iter().collect())
        .collect();

    fn extend<'a>(
        depth: usize,
        current: &mut Vec<&'a Id>,
        candidates: &[Vec<&'a Id>],
        checks: &[Vec<(usize, usize, &Infomorphism)>],
        out: &mut Vec<Vec<Id>>,
    ) {
        if depth == candidates.len() {
            out.push(current.iter().map(|x| (*x).clone()).collect());
            return;
        }
        for x in &candidates[depth] {
            current.push(x);
            let ok = checks[depth].iter().all(|(s, t, f)| {
                f.instance_map
                    .get(current[*t])
                    .map(|img| img == current[*s])
                    == Some(true)
            });
            if ok {
                extend(depth + 1, current, candidates, checks, out);
            }
            current.pop();
        }
    }

    let mut out = Vec::new();
    extend(0, &mut Vec::new(), &candidates, &checks, &mut out);
    out
}

/// The sum channel of a classification diagram.
pub fn sum_classification(d: &ClsDiagram, instance_cap: usize) -> Result<Channel> {
    let defects = d.validate();
    if !defects.is_empty() {
        return Err(Error::Invalid {
            what: "classification diagram".into(),
            defects,
        });
    }
    let required = d.node_cls.values().fold(1u128, |acc, c| {
        acc.saturating_mul(c.instances.len() as u128)
    });
    if required > instance_cap as u128 {
        return Err(Error::cap("sum instance tuples", required, instance_cap));
    }
    let colimit = colimit_language(&d.languages())?;
    let nodes: Vec<&Id> = d.shape.nodes.iter().collect();
    let tuples = compatible_tuples(d);

    let mut instances = IdSet::new();
    let mut incidence = BTreeSet::new();
    let mut projections: BTreeMap<&Id, BTreeMap<Id, Id>> =
        nodes.iter().map(|n| (*n, BTreeMap::new())).collect();
    for tuple in &tuples {
        let pairs: Vec<(&Id, &Id)> = nodes.iter().copied().zip(tuple.iter()).collect();
        let name = tuple_name(&pairs);
        for (class, members) in &colimit.classes {
            let (node, ty) = members.iter().next().expect("classes are non-empty");
            let x = &tuple[nodes.binary_search(&node).expect("member node")];
            if d.node_cls[node].holds(x, ty) {
                incidence.insert((name.clone(), class.clone()));
            }
        }
        for (node, x) in &pairs {
            projections
                .get_mut(node)
                .expect("node present")
                .insert(name.clone(), (*x).clone());
        }
        instances.insert(name);
    }
    let core = Arc::new(Classification {
        name: "sum".into(),
        instances,
        types: colimit.sum.clone(),
        incidence,
    });
    let legs = nodes
        .iter()
        .map(|n| {
            let leg = Infomorphism::new(
                &format!("leg.{n}"),
                d.node_cls[*n].clone(),
                core.clone(),
                colimit.cocone[*n].as_map().clone(),
                projections.remove(n).expect("node present"),
            )?;
            Ok(((*n).clone(), leg))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let channel = Channel { core, legs };
    let defects = verify_channel_covers(&channel, d)?;
    if !defects.is_empty() {
        return Err(Error::Invalid {
            what: "sum channel".into(),
            defects,
        });
    }
    Ok(channel)
}

/// Checks each leg's invariance and the commutation of legs with every edge
/// on both the type and the instance side.
pub fn verify_channel_covers(ch: &Channel, d: &ClsDiagram) -> Result<Vec<Defect>> {
    let leg_nodes: IdSet = ch.legs.keys().cloned().collect();
    if leg_nodes != d.shape.nodes {
        return Err(Error::EndpointMismatch(
            "channel legs do not match the diagram's nodes".into(),
        ));
    }
    let mut defects = Vec::new();
    for (node, leg) in &ch.legs {
        if d.node_cls.get(node) != Some(&leg.source) {
            defects.push(Defect::Leg {
                node: node.clone(),
                message: "does not start at the node's classification".into(),
            });
        }
        if leg.target != ch.core {
            defects.push(Defect::Leg {
                node: node.clone(),
                message: "does not end at the core".into(),
            });
        }
        defects.extend(check_infomorphism(leg).into_iter().map(|d| Defect::Leg {
            node: node.clone(),
            message: d.to_string(),
        }));
    }
    for (edge, (src, dst)) in &d.shape.edges {
        let (Some(f), Some(leg_src), Some(leg_dst)) =
            (d.edge_info.get(edge), ch.legs.get(src), ch.legs.get(dst))
        else {
            continue;
        };
        for (t, image) in &f.type_map {
            let direct = leg_src.type_map.get(t);
            let around = leg_dst.type_map.get(image);
            if direct.is_none() || direct != around {
                defects.push(Defect::Commutation {
                    edge: edge.clone(),
                    element: t.clone(),
                    message: format!(
                        "type goes to {} directly but to {} through the edge",
                        show(direct),
                        show(around)
                    ),
                });
            }
        }
        for c in &ch.core.instances {
            let direct = leg_src.instance_map.get(c);
            let around = leg_dst
                .instance_map
                .get(c)
                .and_then(|x| f.instance_map.get(x));
            if direct.is_none() || direct != around {
                defects.push(Defect::Commutation {
                    edge: edge.clone(),
                    element: c.clone(),
                    message: format!(
                        "instance projects to {} directly but to {} through the edge",
                        show(direct),
                        show(around)
                    ),
                });
            }
        }
    }
    Ok(defects)
}

fn show(x: Option<&Id>) -> String {
    x.map_or_else(|| "nothing".to_string(), |v| format!("`{v}`"))
}

/// The unique infomorphism `m: sum.core -> other.core` with
/// `leg_n ; m = other.leg_n` for every node.
pub fn mediating_morphism(sum: &Channel, other: &Channel, d: &ClsDiagram) -> Result<Infomorphism> {
    let defects = verify_channel_covers(other, d)?;
    if !defects.is_empty() {
        let text: Vec<String> = defects.iter().map(ToString::to_string).collect();
        return Err(Error::NotCovering(text.join("; ")));
    }
    if sum.legs.keys().ne(other.legs.keys()) {
        return Err(Error::EndpointMismatch(
            "channels over different shapes".into(),
        ));
    }

    let mut type_map: BTreeMap<Id, Id> = BTreeMap::new();
    for (node, leg) in &sum.legs {
        let other_leg = &other.legs[node];
        for (t, class) in &leg.type_map {
            let image = &other_leg.type_map[t];
            match type_map.get(class) {
                Some(prev) if prev != image => {
                    return Err(Error::NotCovering(format!(
                        "class `{class}` would go to both `{prev}` and `{image}`"
                    )))
                }
                _ => {
                    type_map.insert(class.clone(), image.clone());
                }
            }
        }
    }

    let nodes: Vec<&Id> = sum.legs.keys().collect();
    let by_tuple: BTreeMap<Vec<&Id>, &Id> = sum
        .core
        .instances
        .iter()
        .map(|c| {
            (
                nodes
                    .iter()
                    .map(|n| &sum.legs[*n].instance_map[c])
                    .collect(),
                c,
            )
        })
        .collect();
    let mut instance_map = BTreeMap::new();
    for c in &other.core.instances {
        let tuple: Vec<&Id> = nodes
            .iter()
            .map(|n| &other.legs[*n].instance_map[c])
            .collect();
        let Some(target) = by_tuple.get(&tuple) else {
            return Err(Error::NotCovering(format!(
                "core instance `{c}` projects to an incompatible tuple"
            )));
        };
        instance_map.insert(c.clone(), (*target).clone());
    }
    let m = Infomorphism::new(
        "mediator",
        sum.core.clone(),
        other.core.clone(),
        type_map,
        instance_map,
    )?;
    let defects = check_infomorphism(&m);
    if !defects.is_empty() {
        return Err(Error::Invalid {
            what: "mediating morphism".into(),
            defects,
        });
    }
    Ok(m)
}
