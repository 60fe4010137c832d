//! Random generators and brute-force oracles shared by the integration
//! tests. Oracles enumerate states or subsets directly and never call the
//! engine they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ifk_core::classification::{check_infomorphism, Infomorphism};
use ifk_core::diagrams::ShapeGraph;
use ifk_core::{
    Classification, Id, IdSet, InformationSystem, Sequent, SequentTheory, TypeFunction,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ids(prefix: &str, n: usize) -> Vec<Id> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn set(items: &[&str]) -> IdSet {
    items.iter().map(|s| s.to_string()).collect()
}

pub fn seq(literal: &str) -> Sequent {
    Sequent::parse(literal).unwrap()
}

/// Every subset of `items`.
pub fn subsets(items: &IdSet) -> Vec<IdSet> {
    let v: Vec<&Id> = items.iter().collect();
    (0..1usize << v.len())
        .map(|m| {
            (0..v.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| v[i].clone())
                .collect()
        })
        .collect()
}

pub fn random_subset(rng: &mut TestRng, items: &IdSet, p: f64) -> IdSet {
    items.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

pub fn random_sequent(rng: &mut TestRng, types: &IdSet) -> Sequent {
    Sequent {
        ant: random_subset(rng, types, 0.3),
        con: random_subset(rng, types, 0.3),
    }
}

pub fn random_theory(rng: &mut TestRng, types: &IdSet, max_axioms: usize) -> SequentTheory {
    let n = rng.gen_range(0..=max_axioms);
    SequentTheory {
        types: types.clone(),
        axioms: (0..n).map(|_| random_sequent(rng, types)).collect(),
    }
}

pub fn satisfies(state: &IdSet, s: &Sequent) -> bool {
    !(s.ant.is_subset(state) && s.con.is_disjoint(state))
}

/// States over the theory's types satisfying every axiom.
pub fn models(t: &SequentTheory) -> Vec<IdSet> {
    subsets(&t.types)
        .into_iter()
        .filter(|x| t.axioms.iter().all(|a| satisfies(x, a)))
        .collect()
}

pub fn oracle_entails(t: &SequentTheory, s: &Sequent) -> bool {
    models(t).iter().all(|x| satisfies(x, s))
}

/// Every sequent over `types`.
pub fn all_sequents(types: &IdSet) -> Vec<Sequent> {
    let subs = subsets(types);
    let mut out = Vec::new();
    for ant in &subs {
        for con in &subs {
            out.push(Sequent {
                ant: ant.clone(),
                con: con.clone(),
            });
        }
    }
    out
}

pub fn oracle_closure(t: &SequentTheory) -> BTreeSet<Sequent> {
    let ms = models(t);
    all_sequents(&t.types)
        .into_iter()
        .filter(|s| ms.iter().all(|x| satisfies(x, s)))
        .collect()
}

/// The theory whose models are exactly `allowed`: one axiom excluding each
/// other state.
pub fn theory_with_models(types: &IdSet, allowed: &BTreeSet<IdSet>) -> SequentTheory {
    let axioms = subsets(types)
        .into_iter()
        .filter(|x| !allowed.contains(x))
        .map(|x| Sequent {
            con: types.difference(&x).cloned().collect(),
            ant: x,
        })
        .collect();
    SequentTheory {
        types: types.clone(),
        axioms,
    }
}

pub fn random_classification(
    rng: &mut TestRng,
    name: &str,
    instances: &[Id],
    types: &[Id],
) -> Classification {
    let mut incidence = Vec::new();
    for i in instances {
        for t in types {
            if rng.gen_bool(0.5) {
                incidence.push((i.clone(), t.clone()));
            }
        }
    }
    Classification::new(
        name,
        instances.iter().cloned(),
        types.iter().cloned(),
        incidence,
    )
}

/// Random valid infomorphism with at most `max` instances and types on
/// each side. `surjective` fixes the instance map kind when given.
pub fn random_infomorphism(
    rng: &mut TestRng,
    max: usize,
    surjective: Option<bool>,
) -> Infomorphism {
    loop {
        let instances = ids("a", rng.gen_range(1..=max));
        let types = ids("s", rng.gen_range(1..=max));
        let source = Arc::new(random_classification(rng, "A", &instances, &types));
        if let Some(f) = random_infomorphism_from(rng, source, "B", max, surjective) {
            return f;
        }
    }
}

/// Random valid infomorphism out of `source`, or `None` when the sampled
/// maps admit no target. The target incidence on image types is forced by
/// invariance; other target types are random.
pub fn random_infomorphism_from(
    rng: &mut TestRng,
    source: Arc<Classification>,
    target_name: &str,
    max: usize,
    surjective: Option<bool>,
) -> Option<Infomorphism> {
    let prefix = target_name.to_lowercase();
    let source_inst: Vec<&Id> = source.instances.iter().collect();
    let target_inst = ids(&format!("{prefix}i"), rng.gen_range(1..=max));
    let target_types = ids(&format!("{prefix}t"), rng.gen_range(1..=max));

    let type_map: BTreeMap<Id, Id> = source
        .types
        .iter()
        .map(|s| (s.clone(), target_types.choose(rng).unwrap().clone()))
        .collect();
    if source_inst.is_empty() {
        return None;
    }
    let instance_map: BTreeMap<Id, Id> = target_inst
        .iter()
        .map(|b| (b.clone(), (*source_inst.choose(rng).unwrap()).clone()))
        .collect();
    let image: IdSet = instance_map.values().cloned().collect();
    let is_surjective = image.len() == source_inst.len();
    if surjective.is_some_and(|want| want != is_surjective) {
        return None;
    }

    let mut incidence = BTreeSet::new();
    let mut forced: BTreeMap<(Id, Id), bool> = BTreeMap::new();
    for (b, a) in &instance_map {
        for (s, t) in &type_map {
            let value = source.holds(a, s);
            if forced
                .insert((b.clone(), t.clone()), value)
                .is_some_and(|prev| prev != value)
            {
                return None;
            }
        }
        for t in &target_types {
            let value = match forced.get(&(b.clone(), t.clone())) {
                Some(v) => *v,
                None => rng.gen_bool(0.5),
            };
            if value {
                incidence.insert((b.clone(), t.clone()));
            }
        }
    }
    let target = Classification::new(
        target_name,
        target_inst.iter().cloned(),
        target_types.iter().cloned(),
        incidence,
    );
    let f = Infomorphism::new("f", source, Arc::new(target), type_map, instance_map).unwrap();
    assert!(check_infomorphism(&f).is_empty());
    Some(f)
}

/// Adds to every edge target the image of its source axioms until nothing
/// changes, so that every edge becomes a theory morphism.
pub fn propagate(s: &mut InformationSystem) {
    loop {
        let mut changed = false;
        for (edge, (src, dst)) in &s.shape.edges {
            let f = &s.edge_map[edge];
            let images: Vec<Sequent> = s.node_theory[src]
                .axioms
                .iter()
                .map(|a| a.map_types(f).unwrap())
                .collect();
            let target = s.node_theory.get_mut(dst).unwrap();
            for a in images {
                changed |= target.axioms.insert(a);
            }
        }
        if !changed {
            return;
        }
    }
}

/// Random valid unpopulated system on up to `max_nodes` nodes with up to
/// `max_types` types per node and edges running from lower to higher node
/// index.
pub fn random_system(
    rng: &mut TestRng,
    max_nodes: usize,
    max_types: usize,
    max_axioms: usize,
) -> InformationSystem {
    let nodes = ids("N", rng.gen_range(1..=max_nodes));
    let languages: BTreeMap<Id, IdSet> = nodes
        .iter()
        .map(|n| {
            let k = rng.gen_range(1..=max_types);
            (
                n.clone(),
                ids(&format!("{}t", n.to_lowercase()), k)
                    .into_iter()
                    .collect(),
            )
        })
        .collect();
    let mut edges = BTreeMap::new();
    let mut edge_map = BTreeMap::new();
    for (i, src) in nodes.iter().enumerate() {
        for dst in &nodes[i + 1..] {
            if rng.gen_bool(0.6) {
                let id = format!("e{}", edges.len());
                let targets: Vec<&Id> = languages[dst].iter().collect();
                let map = languages[src]
                    .iter()
                    .map(|t| (t.clone(), (*targets.choose(rng).unwrap()).clone()))
                    .collect();
                let f = TypeFunction::new(&id, languages[src].clone(), languages[dst].clone(), map)
                    .unwrap();
                edges.insert(id.clone(), (src.clone(), dst.clone()));
                edge_map.insert(id, f);
            }
        }
    }
    let node_theory = languages
        .iter()
        .map(|(n, types)| (n.clone(), random_theory(rng, types, max_axioms)))
        .collect();
    let mut s = InformationSystem {
        shape: ShapeGraph {
            nodes: nodes.iter().cloned().collect(),
            edges,
        },
        node_theory,
        edge_map,
        ..Default::default()
    };
    propagate(&mut s);
    s
}

/// Joint states of a system: one truth value per (node, type), each node
/// part a model of its theory, and values equal along every edge.
pub fn joint_models(s: &InformationSystem) -> Vec<BTreeMap<Id, IdSet>> {
    let slots: Vec<(Id, Id)> = s
        .node_theory
        .iter()
        .flat_map(|(n, t)| t.types.iter().map(move |ty| (n.clone(), ty.clone())))
        .collect();
    assert!(slots.len() <= 16, "joint oracle is exponential");
    let mut out = Vec::new();
    for mask in 0..1u32 << slots.len() {
        let mut parts: BTreeMap<Id, IdSet> = s
            .node_theory
            .keys()
            .map(|n| (n.clone(), IdSet::new()))
            .collect();
        for (i, (n, ty)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                parts.get_mut(n).unwrap().insert(ty.clone());
            }
        }
        let locally = s
            .node_theory
            .iter()
            .all(|(n, t)| t.axioms.iter().all(|a| satisfies(&parts[n], a)));
        let glued = s.shape.edges.iter().all(|(e, (src, dst))| {
            s.edge_map[e]
                .as_map()
                .iter()
                .all(|(a, b)| parts[src].contains(a) == parts[dst].contains(b))
        });
        if locally && glued {
            out.push(parts);
        }
    }
    out
}

pub fn joint_entails(joint: &[BTreeMap<Id, IdSet>], node: &str, q: &Sequent) -> bool {
    joint.iter().all(|parts| satisfies(&parts[node], q))
}
