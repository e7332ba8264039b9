//! Ground congruence closure.
//!
//! Variables are treated as uninterpreted constants, so the congruent closure
//! `[S]` of a finite system restricted to any finite set of terms is computed
//! by union-find with a signature table and upward propagation along use
//! lists. The term universe grows on demand.

use rustc_hash::FxHashMap;

use crate::sigterm::{EquationSystem, SymbolId, Term, TermKind};

#[derive(Debug, Clone, Default)]
pub struct CongruenceTable {
    terms: Vec<Term>,
    node_of: FxHashMap<u32, usize>,
    parent: Vec<usize>,
    rank: Vec<u32>,
    /// Application nodes with an argument in the class, keyed by representative.
    uses: Vec<Vec<usize>>,
    signatures: FxHashMap<(SymbolId, Box<[usize]>), usize>,
    pending: Vec<(usize, usize)>,
}

impl CongruenceTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The closure of `system` over `universe` (plus all subterms of both).
    pub fn close(system: &EquationSystem, universe: &[Term]) -> Self {
        let mut table = CongruenceTable::new();
        for t in universe {
            table.add_term(t);
        }
        for eq in system.equations() {
            table.merge(&eq.lhs, &eq.rhs);
        }
        table
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Adds `t` and its subterms to the universe, keeping the table closed.
    pub fn add_term(&mut self, t: &Term) -> usize {
        let node = self.insert(t);
        self.propagate();
        node
    }

    fn insert(&mut self, t: &Term) -> usize {
        if let Some(&n) = self.node_of.get(&t.id()) {
            return n;
        }
        let children: Vec<usize> = t.args().iter().map(|a| self.insert(a)).collect();
        let node = self.terms.len();
        self.terms.push(t.clone());
        self.node_of.insert(t.id(), node);
        self.parent.push(node);
        self.rank.push(0);
        self.uses.push(Vec::new());
        if let TermKind::App(sym, _) = t.kind() {
            let key: Box<[usize]> = children.iter().map(|&c| self.find(c)).collect();
            for &c in key.iter() {
                self.uses[c].push(node);
            }
            match self.signatures.get(&(*sym, key.clone())) {
                Some(&other) => self.pending.push((node, other)),
                None => {
                    self.signatures.insert((*sym, key), node);
                }
            }
        }
        node
    }

    fn find(&self, mut n: usize) -> usize {
        while self.parent[n] != n {
            n = self.parent[n];
        }
        n
    }

    /// Merges the classes of `t` and `s` and restores congruence.
    pub fn merge(&mut self, t: &Term, s: &Term) {
        let a = self.insert(t);
        let b = self.insert(s);
        self.pending.push((a, b));
        self.propagate();
    }

    fn propagate(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (mut ra, mut rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            if self.rank[ra] < self.rank[rb] {
                std::mem::swap(&mut ra, &mut rb);
            }
            // rb is absorbed into ra
            self.parent[rb] = ra;
            if self.rank[ra] == self.rank[rb] {
                self.rank[ra] += 1;
            }
            let moved = std::mem::take(&mut self.uses[rb]);
            for &u in &moved {
                let TermKind::App(sym, _) = self.terms[u].kind() else {
                    continue;
                };
                let sym = *sym;
                let key: Box<[usize]> = self.terms[u]
                    .args()
                    .iter()
                    .map(|a| self.find(self.node_of[&a.id()]))
                    .collect();
                match self.signatures.get(&(sym, key.clone())) {
                    Some(&other) if self.find(other) != self.find(u) => {
                        self.pending.push((u, other))
                    }
                    Some(_) => {}
                    None => {
                        self.signatures.insert((sym, key), u);
                    }
                }
            }
            self.uses[ra].extend(moved);
        }
    }

    /// Whether `t ~ s`, growing the universe if either term is new.
    pub fn equivalent(&mut self, t: &Term, s: &Term) -> bool {
        let a = self.add_term(t);
        let b = self.add_term(s);
        self.find(a) == self.find(b)
    }

    /// Read-only query; `None` if a term is outside the universe.
    pub fn query(&self, t: &Term, s: &Term) -> Option<bool> {
        let a = *self.node_of.get(&t.id())?;
        let b = *self.node_of.get(&s.id())?;
        Some(self.find(a) == self.find(b))
    }

    /// Partition of the universe, each class in insertion order, classes
    /// ordered by their first member.
    pub fn classes(&self) -> Vec<Vec<Term>> {
        let mut index: FxHashMap<usize, usize> = FxHashMap::default();
        let mut out: Vec<Vec<Term>> = Vec::new();
        for n in 0..self.terms.len() {
            let r = self.find(n);
            let slot = *index.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[slot].push(self.terms[n].clone());
        }
        out
    }
}

/// Whether `(t = s)` lies in the congruent closure of `system`.
pub fn in_closure(t: &Term, s: &Term, system: &EquationSystem) -> bool {
    if t == s {
        return true;
    }
    let mut table = CongruenceTable::close(system, &[]);
    table.equivalent(t, s)
}
