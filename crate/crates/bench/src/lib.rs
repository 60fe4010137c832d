//! Workloads shared by the criterion benches. Every generator is seeded so
//! runs compare like with like.

use std::collections::BTreeMap;
use std::sync::Arc;

use ifk_core::classification::Infomorphism;
use ifk_core::{Classification, ClsDiagram, IdSet, Sequent, SequentTheory, ShapeGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn pick(rng: &mut ChaCha8Rng, types: &[String], p: f64) -> IdSet {
    types.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

/// Horn-like random theory: `axioms` sequents with small sides over
/// `types` types.
pub fn random_theory(seed: u64, types: usize, axioms: usize) -> SequentTheory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = names("p", types);
    let p = 2.0 / types.max(2) as f64;
    let axioms = (0..axioms)
        .map(|_| Sequent {
            ant: pick(&mut rng, &sigma, p),
            con: pick(&mut rng, &sigma, p),
        })
        .collect();
    SequentTheory {
        types: sigma.into_iter().collect(),
        axioms,
    }
}

/// Queries over the same language as [`random_theory`].
pub fn random_queries(seed: u64, types: usize, count: usize) -> Vec<Sequent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let sigma = names("p", types);
    (0..count)
        .map(|_| Sequent {
            ant: pick(&mut rng, &sigma, 0.2),
            con: pick(&mut rng, &sigma, 0.2),
        })
        .collect()
}

/// Random formal context with the given density.
pub fn random_context(seed: u64, instances: usize, types: usize, density: f64) -> Classification {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = names("g", instances);
    let ty = names("m", types);
    let mut incidence = Vec::new();
    for i in &inst {
        for t in &ty {
            if rng.gen_bool(density) {
                incidence.push((i.clone(), t.clone()));
            }
        }
    }
    Classification::new("K", inst, ty, incidence)
}

/// Star diagram: a hub with `instances` instances and one type, and
/// `spokes` nodes each mapping the hub type onto their first type. Every
/// spoke instance maps to a hub instance round-robin.
pub fn star_diagram(spokes: usize, instances: usize) -> ClsDiagram {
    let hub_inst = names("h", instances);
    let hub = Arc::new(Classification::new(
        "hub",
        hub_inst.clone(),
        ["x".to_string()],
        hub_inst
            .iter()
            .step_by(2)
            .map(|i| (i.clone(), "x".to_string())),
    ));
    let mut node_cls = BTreeMap::from([("hub".to_string(), hub.clone())]);
    let mut edge_info = BTreeMap::new();
    let mut edges = Vec::new();
    for s in 0..spokes {
        let node = format!("s{s}");
        let inst = names(&format!("{node}i"), instances);
        let incidence: Vec<(String, String)> = inst
            .iter()
            .enumerate()
            .flat_map(|(k, i)| {
                let mut row = vec![(i.clone(), "y".to_string())];
                if k % 2 == 0 {
                    row.push((i.clone(), "x".to_string()));
                }
                row
            })
            .collect();
        let c = Arc::new(Classification::new(
            &node,
            inst.clone(),
            ["x".to_string(), "y".to_string()],
            incidence,
        ));
        let instance_map = inst
            .iter()
            .zip(&hub_inst)
            .map(|(i, h)| (i.clone(), h.clone()))
            .collect();
        let edge = format!("e{s}");
        let f = Infomorphism::new(
            &edge,
            hub.clone(),
            c.clone(),
            [("x".to_string(), "x".to_string())].into(),
            instance_map,
        )
        .expect("total maps");
        edge_info.insert(edge.clone(), f);
        node_cls.insert(node.clone(), c);
        edges.push((edge, node));
    }
    let triples: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(e, n)| (e.as_str(), "hub", n.as_str()))
        .collect();
    let mut nodes = vec!["hub".to_string()];
    nodes.extend(edges.iter().map(|(_, n)| n.clone()));
    ClsDiagram {
        shape: ShapeGraph::new(nodes, &triples),
        node_cls,
        edge_info,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ifk_core::classification::check_infomorphism;

    #[test]
    fn workloads_are_valid_and_repeatable() {
        assert_eq!(random_theory(1, 12, 20), random_theory(1, 12, 20));
        assert!(random_theory(1, 12, 20).validate("t").is_empty());
        assert!(random_context(3, 8, 8, 0.4).validate().is_empty());
        let d = star_diagram(3, 4);
        assert!(d.validate().is_empty());
        assert!(d
            .edge_info
            .values()
            .all(|f| check_infomorphism(f).is_empty()));
    }
}
