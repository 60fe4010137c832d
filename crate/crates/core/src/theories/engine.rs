//! Clause-form satisfiability by backtracking with unit propagation.
//!
//! A sequent `Γ |- Δ` is the clause "some Γ-type fails or some Δ-type
//! holds". Entailment of `Γ |- Δ` is refutation: the theory together with
//! the units "every Γ-type holds" and "every Δ-type fails" is unsatisfiable.

use std::collections::BTreeMap;

use crate::{Error, Id, IdSet, Result, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Lit {
    pub var: usize,
    pub positive: bool,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct ClauseSet {
    vars: usize,
    clauses: Vec<Vec<Lit>>,
}

impl ClauseSet {
    pub fn new(vars: usize) -> Self {
        ClauseSet {
            vars,
            clauses: Vec::new(),
        }
    }

    /// Adds the clause for a sequent given as antecedent and consequent
    /// variable lists.
    pub fn add_sequent(&mut self, ant: &[usize], con: &[usize]) {
        let mut clause: Vec<Lit> = ant
            .iter()
            .map(|&var| Lit {
                var,
                positive: false,
            })
            .chain(con.iter().map(|&var| Lit {
                var,
                positive: true,
            }))
            .collect();
        clause.sort_by_key(|l| (l.var, l.positive));
        clause.dedup();
        // A clause with both polarities of a variable is a tautology.
        if clause.windows(2).any(|w| w[0].var == w[1].var) {
            return;
        }
        self.clauses.push(clause);
    }

    /// Whether some assignment satisfies every clause and every assumption.
    pub fn satisfiable(&self, assumptions: &[Lit]) -> bool {
        let mut assign: Vec<Option<bool>> = vec![None; self.vars];
        for lit in assumptions {
            match assign[lit.var] {
                Some(v) if v != lit.positive => return false,
                _ => assign[lit.var] = Some(lit.positive),
            }
        }
        let mut trail = Vec::new();
        self.search(&mut assign, &mut trail)
    }

    fn search(&self, assign: &mut [Option<bool>], trail: &mut Vec<usize>) -> bool {
        let mark = trail.len();
        if !self.propagate(assign, trail) {
            undo(assign, trail, mark);
            return false;
        }
        let Some(var) = self.branch_variable(assign) else {
            return true;
        };
        for value in [true, false] {
            let branch = trail.len();
            assign[var] = Some(value);
            trail.push(var);
            if self.search(assign, trail) {
                return true;
            }
            undo(assign, trail, branch);
        }
        undo(assign, trail, mark);
        false
    }

    /// Unit propagation to fixpoint; false on conflict.
    fn propagate(&self, assign: &mut [Option<bool>], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for lit in clause {
                    match assign[lit.var] {
                        Some(v) if v == lit.positive => {
                            satisfied = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            open += 1;
                            unassigned = Some(*lit);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some(lit)) => {
                        assign[lit.var] = Some(lit.positive);
                        trail.push(lit.var);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn branch_variable(&self, assign: &[Option<bool>]) -> Option<usize> {
        self.clauses
            .iter()
            .filter(|clause| !clause.iter().any(|l| assign[l.var] == Some(l.positive)))
            .flat_map(|clause| clause.iter())
            .find(|l| assign[l.var].is_none())
            .map(|l| l.var)
    }
}

fn undo(assign: &mut [Option<bool>], trail: &mut Vec<usize>, mark: usize) {
    for var in trail.drain(mark..) {
        assign[var] = None;
    }
}

/// A theory compiled to clauses over a fixed variable numbering of its
/// language.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    index: BTreeMap<Id, usize>,
    clauses: ClauseSet,
}

impl Compiled {
    pub fn new<'a>(
        language: &IdSet,
        axioms: impl IntoIterator<Item = &'a Sequent>,
    ) -> Result<Self> {
        let index: BTreeMap<Id, usize> = language
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let mut compiled = Compiled {
            clauses: ClauseSet::new(index.len()),
            index,
        };
        for axiom in axioms {
            compiled.add(axiom)?;
        }
        Ok(compiled)
    }

    pub fn var(&self, ty: &str) -> Result<usize> {
        self.index
            .get(ty)
            .copied()
            .ok_or_else(|| Error::UnknownType(ty.to_string()))
    }

    fn vars_of(&self, types: &IdSet) -> Result<Vec<usize>> {
        types.iter().map(|t| self.var(t)).collect()
    }

    pub fn add(&mut self, s: &Sequent) -> Result<()> {
        let ant = self.vars_of(&s.ant)?;
        let con = self.vars_of(&s.con)?;
        self.clauses.add_sequent(&ant, &con);
        Ok(())
    }

    pub fn is_consistent(&self) -> bool {
        self.clauses.satisfiable(&[])
    }

    pub fn entails(&self, s: &Sequent) -> Result<bool> {
        let ant = self.vars_of(&s.ant)?;
        let con = self.vars_of(&s.con)?;
        Ok(self.entails_vars(&ant, &con))
    }

    pub fn entails_vars(&self, ant: &[usize], con: &[usize]) -> bool {
        let assumptions: Vec<Lit> = ant
            .iter()
            .map(|&var| Lit {
                var,
                positive: true,
            })
            .chain(con.iter().map(|&var| Lit {
                var,
                positive: false,
            }))
            .collect();
        !self.clauses.satisfiable(&assumptions)
    }

    pub fn entails_masks(&self, ant: u64, con: u64) -> bool {
        self.entails_vars(&mask_vars(ant), &mask_vars(con))
    }
}

pub(crate) fn mask_vars(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}
