//! Formal concepts of a classification and the concept lattice.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::{Classification, Error, Id, IdSet, Result};

/// Largest type count accepted by [`concepts`].
pub const MAX_CONCEPT_TYPES: usize = 20;

/// Which side of the classification a set lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Instances,
    Types,
}

/// A fixed pair of the derivation operators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalConcept {
    pub extent: IdSet,
    pub intent: IdSet,
}

/// Common types of a set of instances, or common instances of a set of
/// types.
pub fn derive(c: &Classification, side: Side, set: &IdSet) -> Result<IdSet> {
    match side {
        Side::Instances => {
            if let Some(i) = set.iter().find(|i| !c.instances.contains(*i)) {
                return Err(Error::UnknownInstance(i.clone()));
            }
            Ok(c.types
                .iter()
                .filter(|t| set.iter().all(|i| c.holds(i, t)))
                .cloned()
                .collect())
        }
        Side::Types => c.extent(set),
    }
}

/// Bitset view of a classification, types and instances in sorted order.
struct Context<'a> {
    instances: Vec<&'a Id>,
    types: Vec<&'a Id>,
    /// Types of each instance.
    rows: Vec<FixedBitSet>,
    /// Instances of each type.
    cols: Vec<FixedBitSet>,
}

impl<'a> Context<'a> {
    fn new(c: &'a Classification) -> Self {
        let instances: Vec<&Id> = c.instances.iter().collect();
        let types: Vec<&Id> = c.types.iter().collect();
        let mut rows = vec![FixedBitSet::with_capacity(types.len()); instances.len()];
        let mut cols = vec![FixedBitSet::with_capacity(instances.len()); types.len()];
        for (i, inst) in instances.iter().enumerate() {
            for (t, ty) in types.iter().enumerate() {
                if c.holds(inst, ty) {
                    rows[i].insert(t);
                    cols[t].insert(i);
                }
            }
        }
        Context {
            instances,
            types,
            rows,
            cols,
        }
    }

    fn extent_of(&self, intent: &FixedBitSet) -> FixedBitSet {
        let mut ext = FixedBitSet::with_capacity(self.instances.len());
        ext.insert_range(..);
        for t in intent.ones() {
            ext.intersect_with(&self.cols[t]);
        }
        ext
    }

    fn intent_of(&self, extent: &FixedBitSet) -> FixedBitSet {
        let mut int = FixedBitSet::with_capacity(self.types.len());
        int.insert_range(..);
        for i in extent.ones() {
            int.intersect_with(&self.rows[i]);
        }
        int
    }

    fn closure(&self, intent: &FixedBitSet) -> FixedBitSet {
        self.intent_of(&self.extent_of(intent))
    }

    /// The lectically next closed intent after `current`, if any.
    fn next_closure(&self, current: &FixedBitSet) -> Option<FixedBitSet> {
        let mut prefix = current.clone();
        for i in (0..self.types.len()).rev() {
            if prefix.contains(i) {
                prefix.set(i, false);
                continue;
            }
            let mut candidate = prefix.clone();
            candidate.insert(i);
            let closed = self.closure(&candidate);
            if closed.difference(&prefix).all(|j| j >= i) {
                return Some(closed);
            }
        }
        None
    }

    fn concept(&self, intent: &FixedBitSet) -> FormalConcept {
        let extent = self.extent_of(intent);
        FormalConcept {
            extent: extent.ones().map(|i| self.instances[i].clone()).collect(),
            intent: intent.ones().map(|t| self.types[t].clone()).collect(),
        }
    }
}

fn canonical_order(concepts: &mut [FormalConcept]) {
    concepts.sort_by(|a, b| {
        a.extent
            .len()
            .cmp(&b.extent.len())
            .then_with(|| a.extent.cmp(&b.extent))
    });
}

/// All formal concepts, by next-closure over type subsets, in canonical
/// order (extent size, then extent).
pub fn concepts(c: &Classification) -> Result<Vec<FormalConcept>> {
    if c.types.len() > MAX_CONCEPT_TYPES {
        return Err(Error::cap(
            "concept enumeration (types)",
            c.types.len() as u128,
            MAX_CONCEPT_TYPES,
        ));
    }
    let ctx = Context::new(c);
    let mut intent = ctx.closure(&FixedBitSet::with_capacity(ctx.types.len()));
    let mut out = vec![ctx.concept(&intent)];
    while let Some(next) = ctx.next_closure(&intent) {
        out.push(ctx.concept(&next));
        intent = next;
    }
    canonical_order(&mut out);
    Ok(out)
}

/// Concepts with the extent-inclusion order, as index pairs `(i, j)` for
/// `concepts[i] <= concepts[j]` (reflexive pairs included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptLattice {
    pub concepts: Vec<FormalConcept>,
    pub order: BTreeSet<(usize, usize)>,
}

pub fn lattice(c: &Classification) -> Result<ConceptLattice> {
    let concepts = concepts(c)?;
    let mut order = BTreeSet::new();
    for (i, a) in concepts.iter().enumerate() {
        for (j, b) in concepts.iter().enumerate() {
            if a.extent.is_subset(&b.extent) {
                order.insert((i, j));
            }
        }
    }
    Ok(ConceptLattice { concepts, order })
}

impl ConceptLattice {
    pub fn concept(&self, i: usize) -> Result<&FormalConcept> {
        self.concepts.get(i).ok_or(Error::UnknownConcept(i))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order.contains(&(i, j))
    }

    /// The concept with the largest extent.
    pub fn top(&self) -> usize {
        self.concepts.len() - 1
    }

    /// The concept with the smallest extent.
    pub fn bottom(&self) -> usize {
        0
    }

    fn by_extent(&self, extent: &IdSet) -> Option<usize> {
        self.concepts.iter().position(|c| &c.extent == extent)
    }

    fn by_intent(&self, intent: &IdSet) -> Option<usize> {
        self.concepts.iter().position(|c| &c.intent == intent)
    }

    /// Greatest lower bound: its extent is the intersection of extents.
    pub fn meet(&self, i: usize, j: usize) -> Result<usize> {
        let ext: IdSet = self
            .concept(i)?
            .extent
            .intersection(&self.concept(j)?.extent)
            .cloned()
            .collect();
        Ok(self
            .by_extent(&ext)
            .expect("extents are closed under intersection"))
    }

    /// Least upper bound: its intent is the intersection of intents.
    pub fn join(&self, i: usize, j: usize) -> Result<usize> {
        let int: IdSet = self
            .concept(i)?
            .intent
            .intersection(&self.concept(j)?.intent)
            .cloned()
            .collect();
        Ok(self
            .by_intent(&int)
            .expect("intents are closed under intersection"))
    }

    /// Cover pairs `(lower, upper)` of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.order
            .iter()
            .filter(|(i, j)| i != j)
            .filter(|(i, j)| {
                !(0..self.concepts.len())
                    .any(|k| k != *i && k != *j && self.leq(*i, k) && self.leq(k, *j))
            })
            .copied()
            .collect()
    }

    /// Graphviz rendering of the Hasse diagram, bottom to top.
    pub fn to_dot(&self) -> String {
        let list = |s: &IdSet| s.iter().map(String::as_str).collect::<Vec<_>>().join(", ");
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, c) in self.concepts.iter().enumerate() {
            let label = format!("{{{}}} | {{{}}}", list(&c.extent), list(&c.intent));
            let _ = writeln!(out, "  c{i} [label=\"{}\"];", label.replace('"', "\\\""));
        }
        for (lower, upper) in self.covers() {
            let _ = writeln!(out, "  c{lower} -> c{upper};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn meet(l: &ConceptLattice, i: usize, j: usize) -> Result<usize> {
    l.meet(i, j)
}

pub fn join(l: &ConceptLattice, i: usize, j: usize) -> Result<usize> {
    l.join(i, j)
}

pub fn object_concept(c: &Classification, instance: &str) -> Result<FormalConcept> {
    let intent = derive(c, Side::Instances, &[instance.to_string()].into())?;
    Ok(FormalConcept {
        extent: derive(c, Side::Types, &intent)?,
        intent,
    })
}

pub fn attribute_concept(c: &Classification, ty: &str) -> Result<FormalConcept> {
    let extent = derive(c, Side::Types, &[ty.to_string()].into())?;
    Ok(FormalConcept {
        intent: derive(c, Side::Instances, &extent)?,
        extent,
    })
}
