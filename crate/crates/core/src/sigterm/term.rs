use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use super::signature::{Signature, SymbolId, VariableSet};

/// A hash-consed term. Structurally equal terms share one node, so equality
/// and hashing go through the node id.
#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    id: u32,
    kind: TermKind,
    depth: u32,
    size: u32,
    max_var: Option<u32>,
}

#[derive(Clone, Debug)]
pub enum TermKind {
    /// Variable by 0-based index into the variable set.
    Var(u32),
    App(SymbolId, Box<[Term]>),
}

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Var(u32),
    App(u32, Box<[u32]>),
}

#[derive(Default)]
struct Interner {
    table: FxHashMap<Key, Term>,
}

fn interner() -> &'static Mutex<Interner> {
    static INTERNER: OnceLock<Mutex<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

fn intern(key: Key, make: impl FnOnce(u32) -> Node) -> Term {
    let mut guard = interner().lock().unwrap_or_else(|e| e.into_inner());
    let next = guard.table.len() as u32;
    guard
        .table
        .entry(key)
        .or_insert_with(|| Term(Arc::new(make(next))))
        .clone()
}

impl Term {
    pub fn var(index: usize) -> Term {
        let index = index as u32;
        intern(Key::Var(index), |id| Node {
            id,
            kind: TermKind::Var(index),
            depth: 0,
            size: 1,
            max_var: Some(index),
        })
    }

    /// Builds `sym(args…)`. Arity is not checked here; use
    /// [`Signature`]-aware constructors when the input is untrusted.
    pub fn app(sym: SymbolId, args: impl Into<Vec<Term>>) -> Term {
        let args: Vec<Term> = args.into();
        let key = Key::App(sym.0, args.iter().map(Term::id).collect());
        intern(key, move |id| {
            let depth = args.iter().map(|a| a.depth() + 1).max().unwrap_or(0);
            let size = 1 + args.iter().map(|a| a.size()).sum::<u32>();
            let max_var = args.iter().filter_map(|a| a.0.max_var).max();
            Node {
                id,
                kind: TermKind::App(sym, args.into_boxed_slice()),
                depth,
                size,
                max_var,
            }
        })
    }

    pub fn constant(sym: SymbolId) -> Term {
        Term::app(sym, Vec::new())
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn as_var(&self) -> Option<usize> {
        match self.0.kind {
            TermKind::Var(i) => Some(i as usize),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match &self.0.kind {
            TermKind::Var(_) => &[],
            TermKind::App(_, args) => args,
        }
    }

    /// Number of variables the term needs: one past its largest variable index.
    pub fn var_bound(&self) -> usize {
        self.0.max_var.map_or(0, |v| v as usize + 1)
    }

    /// Simultaneous substitution of `map[i]` for variable `i`.
    ///
    /// # Panics
    /// If the term mentions a variable with no entry in `map`.
    pub fn substitute(&self, map: &[Term]) -> Term {
        let mut memo: FxHashMap<u32, Term> = FxHashMap::default();
        self.substitute_memo(map, &mut memo)
    }

    fn substitute_memo(&self, map: &[Term], memo: &mut FxHashMap<u32, Term>) -> Term {
        if let Some(t) = memo.get(&self.id()) {
            return t.clone();
        }
        let out = match &self.0.kind {
            TermKind::Var(i) => map[*i as usize].clone(),
            TermKind::App(sym, args) => {
                let args: Vec<Term> = args.iter().map(|a| a.substitute_memo(map, memo)).collect();
                Term::app(*sym, args)
            }
        };
        memo.insert(self.id(), out.clone());
        out
    }

    /// Every distinct subterm, children before parents.
    pub fn subterms(&self) -> Vec<Term> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut out = Vec::new();
        self.collect_subterms(&mut seen, &mut out);
        out
    }

    pub(crate) fn collect_subterms(
        &self,
        seen: &mut rustc_hash::FxHashSet<u32>,
        out: &mut Vec<Term>,
    ) {
        if !seen.insert(self.id()) {
            return;
        }
        for a in self.args() {
            a.collect_subterms(seen, out);
        }
        out.push(self.clone());
    }

    pub fn display<'a>(&'a self, sig: &'a Signature, vars: &'a VariableSet) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            sig,
            vars,
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

/// Size first, then a structural comparison. Independent of interning order,
/// so sorted output is reproducible across runs.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.size()
            .cmp(&other.size())
            .then_with(|| structural_cmp(self, other))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn structural_cmp(a: &Term, b: &Term) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    match (a.kind(), b.kind()) {
        (TermKind::Var(i), TermKind::Var(j)) => i.cmp(j),
        (TermKind::Var(_), TermKind::App(..)) => Ordering::Less,
        (TermKind::App(..), TermKind::Var(_)) => Ordering::Greater,
        (TermKind::App(f, xs), TermKind::App(g, ys)) => f.cmp(g).then_with(|| {
            for (x, y) in xs.iter().zip(ys.iter()) {
                let c = structural_cmp(x, y);
                if c != Ordering::Equal {
                    return c;
                }
            }
            xs.len().cmp(&ys.len())
        }),
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TermKind::Var(i) => write!(f, "v{i}"),
            TermKind::App(s, args) => {
                write!(f, "#{}", s.0)?;
                if !args.is_empty() {
                    f.debug_list().entries(args.iter()).finish()?;
                }
                Ok(())
            }
        }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    vars: &'a VariableSet,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term.kind() {
            TermKind::Var(i) => f.write_str(self.vars.name(*i as usize)),
            TermKind::App(s, args) => {
                f.write_str(self.sig.name(*s))?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", a.display(self.sig, self.vars))?;
                }
                f.write_str(")")
            }
        }
    }
}
