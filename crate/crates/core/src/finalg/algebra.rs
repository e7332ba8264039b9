use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::{checked_pow, Limits};
use crate::sigterm::{Equation, Signature, SymbolId, Term, TermKind};

pub type Elem = u32;

/// A finite algebra on the carrier `{0, …, size-1}` with one total table per
/// symbol. The entry for `f(a_1, …, a_m)` sits at `Σ a_i · size^(m-i)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    signature: Arc<Signature>,
    size: usize,
    tables: Vec<Vec<Elem>>,
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAlgebra")
            .field("signature", &self.signature.to_string())
            .field("size", &self.size)
            .field("tables", &self.tables)
            .finish()
    }
}

impl FiniteAlgebra {
    pub fn new(signature: Arc<Signature>, size: usize, tables: Vec<Vec<Elem>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidTable {
                symbol: String::new(),
                message: "carrier must be non-empty".into(),
            });
        }
        if tables.len() != signature.len() {
            return Err(Error::InvalidTable {
                symbol: String::new(),
                message: format!("{} tables for {} symbols", tables.len(), signature.len()),
            });
        }
        for (id, sym) in signature.symbols() {
            let table = &tables[id.index()];
            let expected = checked_pow(size as u128, sym.arity);
            if table.len() as u128 != expected {
                return Err(Error::InvalidTable {
                    symbol: sym.name.clone(),
                    message: format!("expected {expected} entries, found {}", table.len()),
                });
            }
            if let Some(bad) = table.iter().find(|&&v| v as usize >= size) {
                return Err(Error::InvalidTable {
                    symbol: sym.name.clone(),
                    message: format!("entry {bad} outside carrier of size {size}"),
                });
            }
        }
        Ok(FiniteAlgebra {
            signature,
            size,
            tables,
        })
    }

    /// Builds the tables by calling `op(symbol, arguments)` on every tuple.
    pub fn from_fn(
        signature: Arc<Signature>,
        size: usize,
        limits: &Limits,
        mut op: impl FnMut(SymbolId, &[Elem]) -> Elem,
    ) -> Result<Self> {
        limits.check_carrier(size as u128)?;
        let mut tables = Vec::with_capacity(signature.len());
        for (id, sym) in signature.symbols() {
            let entries = checked_pow(size as u128, sym.arity);
            limits.check_points(entries)?;
            let mut table = Vec::with_capacity(entries as usize);
            let mut args = vec![0 as Elem; sym.arity];
            for _ in 0..entries {
                table.push(op(id, &args));
                increment(&mut args, size as Elem);
            }
            tables.push(table);
        }
        Self::new(signature, size, tables)
    }

    /// The one-element algebra.
    pub fn trivial(signature: Arc<Signature>) -> Self {
        let tables = signature.symbols().map(|_| vec![0]).collect();
        FiniteAlgebra {
            signature,
            size: 1,
            tables,
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn table(&self, sym: SymbolId) -> &[Elem] {
        &self.tables[sym.index()]
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    pub fn table_index(&self, args: &[Elem]) -> usize {
        args.iter()
            .fold(0usize, |acc, &a| acc * self.size + a as usize)
    }

    pub fn apply(&self, sym: SymbolId, args: &[Elem]) -> Elem {
        self.tables[sym.index()][self.table_index(args)]
    }

    pub fn constant(&self, sym: SymbolId) -> Elem {
        self.tables[sym.index()][0]
    }

    /// Value of `t` at `point` (variable `i` takes `point[i]`).
    pub fn eval(&self, t: &Term, point: &[Elem]) -> Elem {
        TermProgram::compile(self, std::slice::from_ref(t)).eval_one(point)
    }

    pub fn holds(&self, eq: &Equation, point: &[Elem]) -> bool {
        let prog = TermProgram::compile(self, &[eq.lhs.clone(), eq.rhs.clone()]);
        let mut scratch = prog.scratch();
        prog.run(point, &mut scratch);
        prog.root(&scratch, 0) == prog.root(&scratch, 1)
    }

    /// An element `e` with `f(e, …, e) = e` for every symbol.
    pub fn has_trivial_subalgebra(&self) -> Option<Elem> {
        (0..self.size as Elem).find(|&e| {
            self.signature.symbols().all(|(id, sym)| {
                let args = vec![e; sym.arity];
                self.apply(id, &args) == e
            })
        })
    }

    /// `A^d`, tuples encoded with the first coordinate most significant.
    pub fn direct_power(&self, d: usize, limits: &Limits) -> Result<FiniteAlgebra> {
        let factors: Vec<&FiniteAlgebra> = std::iter::repeat_n(self, d).collect();
        direct_product(self.signature.clone(), &factors, limits)
    }

    /// Quotient by a partition given as a class label per element. Labels
    /// are renumbered by first occurrence; the projection is returned too.
    pub fn quotient(&self, labels: &[usize]) -> Result<(FiniteAlgebra, Vec<Elem>)> {
        if labels.len() != self.size {
            return Err(Error::IncompatiblePartition(format!(
                "{} labels for a carrier of size {}",
                labels.len(),
                self.size
            )));
        }
        let mut renumber = rustc_hash::FxHashMap::default();
        let mut projection = Vec::with_capacity(self.size);
        let mut reps = Vec::new();
        for (a, &l) in labels.iter().enumerate() {
            let next = renumber.len() as Elem;
            let class = *renumber.entry(l).or_insert_with(|| {
                reps.push(a as Elem);
                next
            });
            projection.push(class);
        }
        let q = reps.len();
        let mut tables = Vec::with_capacity(self.signature.len());
        for (id, sym) in self.signature.symbols() {
            let mut table = vec![Elem::MAX; checked_pow(q as u128, sym.arity) as usize];
            let mut args = vec![0 as Elem; sym.arity];
            let mut qargs = vec![0 as Elem; sym.arity];
            for _ in 0..self.tables[id.index()].len() {
                for (qa, &a) in qargs.iter_mut().zip(&args) {
                    *qa = projection[a as usize];
                }
                let value = projection[self.apply(id, &args) as usize];
                let idx = qargs.iter().fold(0usize, |acc, &a| acc * q + a as usize);
                if table[idx] == Elem::MAX {
                    table[idx] = value;
                } else if table[idx] != value {
                    return Err(Error::IncompatiblePartition(format!(
                        "`{}` does not respect the partition at {:?}",
                        sym.name, args
                    )));
                }
                increment(&mut args, self.size as Elem);
            }
            tables.push(table);
        }
        Ok((
            FiniteAlgebra::new(self.signature.clone(), q, tables)?,
            projection,
        ))
    }

    /// The same algebra over `signature` extended by one constant per
    /// element, named `c0, c1, …` (suffixed `_1`, `_2`, … on collision).
    pub fn extend_with_constants(&self) -> Result<(FiniteAlgebra, Vec<SymbolId>)> {
        let mut sig = (*self.signature).clone();
        let mut ids = Vec::with_capacity(self.size);
        for a in 0..self.size {
            let base = format!("c{a}");
            let mut name = base.clone();
            let mut k = 1;
            while sig.lookup(&name).is_some() {
                name = format!("{base}_{k}");
                k += 1;
            }
            ids.push(sig.add(&name, 0)?);
        }
        let mut tables = self.tables.clone();
        tables.extend((0..self.size as Elem).map(|a| vec![a]));
        Ok((FiniteAlgebra::new(Arc::new(sig), self.size, tables)?, ids))
    }

    /// The same tables read over another signature with identical symbol list.
    pub fn with_signature(&self, signature: Arc<Signature>) -> Result<FiniteAlgebra> {
        if *signature != *self.signature {
            return Err(Error::precondition("signatures differ"));
        }
        Ok(FiniteAlgebra {
            signature,
            size: self.size,
            tables: self.tables.clone(),
        })
    }

    /// DSL block `algebra NAME over SIG { carrier K; f = [...]; }`.
    pub fn to_dsl_block(&self, name: &str, signature_name: &str) -> String {
        let mut out = format!(
            "algebra {name} over {signature_name} {{\n  carrier {};\n",
            self.size
        );
        for (id, sym) in self.signature.symbols() {
            out.push_str(&format!(
                "  {} = {};\n",
                sym.name,
                nested_table(&self.tables[id.index()], self.size, sym.arity)
            ));
        }
        out.push('}');
        out
    }
}

fn nested_table(table: &[Elem], size: usize, arity: usize) -> String {
    if arity == 0 {
        return table[0].to_string();
    }
    if arity == 1 {
        let items: Vec<String> = table.iter().map(|v| v.to_string()).collect();
        return format!("[{}]", items.join(","));
    }
    let stride = table.len() / size;
    let rows: Vec<String> = table
        .chunks(stride)
        .map(|chunk| nested_table(chunk, size, arity - 1))
        .collect();
    format!("[{}]", rows.join(","))
}

/// Odometer increment, last position fastest.
pub(crate) fn increment(args: &mut [Elem], base: Elem) -> bool {
    for a in args.iter_mut().rev() {
        *a += 1;
        if *a < base {
            return true;
        }
        *a = 0;
    }
    false
}

/// Direct product with mixed-radix encoding, first factor most significant.
/// The empty product is the trivial algebra.
pub fn direct_product(
    signature: Arc<Signature>,
    factors: &[&FiniteAlgebra],
    limits: &Limits,
) -> Result<FiniteAlgebra> {
    for f in factors {
        if **f.signature() != *signature {
            return Err(Error::precondition("factors use different signatures"));
        }
    }
    let size = factors
        .iter()
        .fold(1u128, |acc, f| acc.saturating_mul(f.size() as u128));
    limits.check_carrier(size)?;
    let size = size as usize;
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let decode = |mut code: usize, out: &mut [Elem]| {
        for i in (0..sizes.len()).rev() {
            out[i] = (code % sizes[i]) as Elem;
            code /= sizes[i];
        }
    };
    let mut comps: Vec<Vec<Elem>> = Vec::new();
    let mut buf = vec![0 as Elem; factors.len()];
    let mut fargs: Vec<Elem> = Vec::new();
    FiniteAlgebra::from_fn(signature, size, limits, |sym, args| {
        comps.resize(args.len(), Vec::new());
        for (c, &a) in comps.iter_mut().zip(args) {
            decode(a as usize, &mut buf);
            c.clear();
            c.extend_from_slice(&buf);
        }
        let mut code = 0usize;
        for (i, f) in factors.iter().enumerate() {
            fargs.clear();
            fargs.extend(comps.iter().map(|c| c[i]));
            code = code * sizes[i] + f.apply(sym, &fargs) as usize;
        }
        code as Elem
    })
}

/// Terms compiled against one algebra: a topologically ordered instruction
/// list over the shared DAG, evaluated into a scratch buffer.
#[derive(Debug, Clone)]
pub struct TermProgram<'a> {
    algebra: &'a FiniteAlgebra,
    instrs: Vec<Instr>,
    args: Vec<usize>,
    roots: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Var(usize),
    Const(Elem),
    Op {
        sym: usize,
        start: usize,
        len: usize,
    },
}

impl<'a> TermProgram<'a> {
    pub fn compile(algebra: &'a FiniteAlgebra, terms: &[Term]) -> Self {
        let mut slot_of: rustc_hash::FxHashMap<u32, usize> = Default::default();
        let mut prog = TermProgram {
            algebra,
            instrs: Vec::new(),
            args: Vec::new(),
            roots: Vec::new(),
        };
        let mut seen = rustc_hash::FxHashSet::default();
        let mut order = Vec::new();
        for t in terms {
            t.collect_subterms(&mut seen, &mut order);
        }
        for t in &order {
            let instr = match t.kind() {
                TermKind::Var(i) => Instr::Var(*i as usize),
                TermKind::App(s, a) if a.is_empty() => Instr::Const(algebra.constant(*s)),
                TermKind::App(s, a) => {
                    let start = prog.args.len();
                    prog.args.extend(a.iter().map(|c| slot_of[&c.id()]));
                    Instr::Op {
                        sym: s.index(),
                        start,
                        len: a.len(),
                    }
                }
            };
            slot_of.insert(t.id(), prog.instrs.len());
            prog.instrs.push(instr);
        }
        prog.roots = terms.iter().map(|t| slot_of[&t.id()]).collect();
        prog
    }

    pub fn scratch(&self) -> Vec<Elem> {
        vec![0; self.instrs.len()]
    }

    pub fn run(&self, point: &[Elem], scratch: &mut [Elem]) {
        let size = self.algebra.size;
        for (i, instr) in self.instrs.iter().enumerate() {
            scratch[i] = match *instr {
                Instr::Var(v) => point[v],
                Instr::Const(c) => c,
                Instr::Op { sym, start, len } => {
                    let mut idx = 0usize;
                    for &s in &self.args[start..start + len] {
                        idx = idx * size + scratch[s] as usize;
                    }
                    self.algebra.tables[sym][idx]
                }
            };
        }
    }

    pub fn root(&self, scratch: &[Elem], i: usize) -> Elem {
        scratch[self.roots[i]]
    }

    pub fn roots(&self) -> usize {
        self.roots.len()
    }

    pub fn eval_one(&self, point: &[Elem]) -> Elem {
        let mut scratch = self.scratch();
        self.run(point, &mut scratch);
        self.root(&scratch, 0)
    }
}
