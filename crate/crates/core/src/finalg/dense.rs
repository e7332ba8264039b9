//! Closure over a small `A^w` with tuples as base-`k` codes.
//!
//! Each code is split into chunks of `c` coordinates, and every operation
//! gets a table on whole chunks, so applying an operation costs one lookup
//! per chunk instead of one per coordinate. Membership is a direct array
//! index. Rounds and their order match the general engine exactly.

use crate::error::Result;
use crate::limits::{checked_pow, Limits};
use crate::sigterm::SymbolId;

use super::algebra::{Elem, FiniteAlgebra};
use super::closure::{Provenance, TupleClosure, TupleIndex};

/// Largest `k^w` handled here.
pub(crate) const DENSE_LIMIT: u128 = 1 << 22;
/// Largest chunk table.
const TABLE_LIMIT: u128 = 1 << 16;
const EMPTY: u32 = u32::MAX;

/// Whether the dense engine applies to full-width closures in `A^w`.
pub(crate) fn applies(algebra: &FiniteAlgebra, width: usize) -> bool {
    let k = algebra.size() as u128;
    let max_arity = algebra.signature().max_arity().max(1);
    width > 0 && checked_pow(k, width) <= DENSE_LIMIT && checked_pow(k, max_arity) <= TABLE_LIMIT
}

struct Layout {
    /// Coordinates per chunk, most significant chunk first.
    widths: Vec<usize>,
    /// `k^(width of chunk)`.
    radix: Vec<u32>,
    /// Weight of each chunk in the full code.
    scale: Vec<u32>,
}

impl Layout {
    fn new(k: u128, width: usize, max_arity: usize) -> Self {
        let mut c = 1;
        while c < width && checked_pow(k, (c + 1) * max_arity) <= TABLE_LIMIT {
            c += 1;
        }
        let mut widths = Vec::new();
        let mut left = width;
        while left > 0 {
            let cw = c.min(left);
            widths.push(cw);
            left -= cw;
        }
        let radix: Vec<u32> = widths.iter().map(|&cw| checked_pow(k, cw) as u32).collect();
        let mut scale = vec![1u32; widths.len()];
        for t in (0..widths.len().saturating_sub(1)).rev() {
            scale[t] = scale[t + 1] * radix[t + 1];
        }
        Layout { widths, radix, scale }
    }
}

/// Operation tables on chunks, one per distinct chunk width.
struct OpTables {
    arity: usize,
    sym: SymbolId,
    /// Indexed like `Layout::widths`.
    tables: Vec<std::sync::Arc<Vec<u32>>>,
}

fn chunk_table(algebra: &FiniteAlgebra, sym: SymbolId, arity: usize, cw: usize) -> Vec<u32> {
    let k = algebra.size() as u32;
    let radix = k.pow(cw as u32);
    let entries = (radix as usize).pow(arity as u32);
    let mut out = Vec::with_capacity(entries);
    let mut digits = vec![vec![0 as Elem; cw]; arity];
    let mut args = vec![0 as Elem; arity];
    for index in 0..entries {
        let mut rest = index as u32;
        for a in (0..arity).rev() {
            let mut chunk = rest % radix;
            rest /= radix;
            for d in digits[a].iter_mut().rev() {
                *d = chunk % k;
                chunk /= k;
            }
        }
        let mut code = 0u32;
        for pos in 0..cw {
            for (arg, ds) in args.iter_mut().zip(&digits) {
                *arg = ds[pos];
            }
            code = code * k + algebra.apply(sym, &args);
        }
        out.push(code);
    }
    out
}

struct Dense<'a> {
    algebra: &'a FiniteAlgebra,
    width: usize,
    layout: Layout,
    id_of: Vec<u32>,
    chunks: Vec<u32>,
    codes: Vec<u32>,
    provenance: Vec<Provenance>,
    depth: Vec<u32>,
    generators: Vec<u32>,
    full: usize,
    limit: u64,
}

pub(crate) enum Outcome {
    Done,
    Saturated,
}

impl Dense<'_> {
    fn encode(&self, tuple: &[Elem]) -> u32 {
        let k = self.algebra.size() as u32;
        tuple.iter().fold(0, |c, &x| c * k + x)
    }

    fn len(&self) -> usize {
        self.codes.len()
    }

    /// Adds `code` if new; `Ok(true)` once every tuple has been reached.
    fn add(&mut self, code: u32, prov: impl FnOnce() -> Provenance, depth: u32) -> Result<bool> {
        if self.id_of[code as usize] != EMPTY {
            return Ok(false);
        }
        if self.len() as u64 >= self.limit {
            return Err(crate::Error::capacity("closure", self.len() as u128 + 1, self.limit));
        }
        self.id_of[code as usize] = self.len() as u32;
        for t in 0..self.layout.widths.len() {
            self.chunks.push(code / self.layout.scale[t] % self.layout.radix[t]);
        }
        self.codes.push(code);
        self.provenance.push(prov());
        self.depth.push(depth);
        Ok(self.len() == self.full)
    }

    fn round(&mut self, op: &OpTables, start: usize, end: usize, depth: u32) -> Result<Outcome> {
        match op.arity {
            1 => self.round_unary(op, start, end, depth),
            2 => self.round_binary(op, start, end, depth),
            _ => self.round_general(op, start, end, depth),
        }
    }

    fn round_unary(&mut self, op: &OpTables, start: usize, end: usize, depth: u32) -> Result<Outcome> {
        let nch = self.layout.widths.len();
        for i in start..end {
            let mut code = 0u32;
            for t in 0..nch {
                code += op.tables[t][self.chunks[i * nch + t] as usize] * self.layout.scale[t];
            }
            if self.add(code, || Provenance::Op(op.sym, Box::new([i as u32])), depth)? {
                return Ok(Outcome::Saturated);
            }
        }
        Ok(Outcome::Done)
    }

    fn round_binary(&mut self, op: &OpTables, start: usize, end: usize, depth: u32) -> Result<Outcome> {
        let nch = self.layout.widths.len();
        let tables: Vec<std::sync::Arc<Vec<u32>>> = op.tables.clone();
        let radix = self.layout.radix.clone();
        let scale = self.layout.scale.clone();
        let mut row = vec![0usize; nch];
        for i in 0..end {
            for t in 0..nch {
                row[t] = self.chunks[i * nch + t] as usize * radix[t] as usize;
            }
            let from = if i >= start { 0 } else { start };
            for j in from..end {
                let mut code = 0u32;
                let cj = &self.chunks[j * nch..(j + 1) * nch];
                for t in 0..nch {
                    code += tables[t][row[t] + cj[t] as usize] * scale[t];
                }
                if self.id_of[code as usize] == EMPTY
                    && self.add(code, || Provenance::Op(op.sym, Box::new([i as u32, j as u32])), depth)?
                {
                    return Ok(Outcome::Saturated);
                }
            }
        }
        Ok(Outcome::Done)
    }

    fn round_general(&mut self, op: &OpTables, start: usize, end: usize, depth: u32) -> Result<Outcome> {
        let nch = self.layout.widths.len();
        let m = op.arity;
        let mut idx = vec![0u32; m];
        let last = m - 1;
        'outer: loop {
            let has_new = idx[..last].iter().any(|&i| i as usize >= start);
            let from = if has_new { 0 } else { start };
            for j in from..end {
                idx[last] = j as u32;
                let mut code = 0u32;
                for t in 0..nch {
                    let r = self.layout.radix[t] as usize;
                    let mut index = 0usize;
                    for &a in &idx {
                        index = index * r + self.chunks[a as usize * nch + t] as usize;
                    }
                    code += op.tables[t][index] * self.layout.scale[t];
                }
                if self.add(code, || Provenance::Op(op.sym, idx.clone().into()), depth)? {
                    return Ok(Outcome::Saturated);
                }
            }
            let mut p = last;
            loop {
                if p == 0 {
                    break 'outer;
                }
                p -= 1;
                idx[p] += 1;
                if (idx[p] as usize) < end {
                    break;
                }
                idx[p] = 0;
            }
        }
        Ok(Outcome::Done)
    }
}

/// Same result as the general engine for `key_width == width`.
pub(crate) fn close_dense(
    algebra: &FiniteAlgebra,
    width: usize,
    generators: &[Vec<Elem>],
    limits: &Limits,
) -> Result<TupleClosure> {
    let k = algebra.size() as u128;
    let sig = algebra.signature().clone();
    let layout = Layout::new(k, width, sig.max_arity().max(1));
    let full = checked_pow(k, width) as usize;
    let mut d = Dense {
        algebra,
        width,
        layout,
        id_of: vec![EMPTY; full],
        chunks: Vec::new(),
        codes: Vec::new(),
        provenance: Vec::new(),
        depth: Vec::new(),
        generators: Vec::with_capacity(generators.len()),
        full,
        limit: limits.max_closure,
    };
    let mut saturated = false;
    for (i, g) in generators.iter().enumerate() {
        let code = d.encode(g);
        saturated |= d.add(code, || Provenance::Generator(i), 0)?;
        d.generators.push(d.id_of[code as usize]);
    }
    for c in sig.constants() {
        let code = d.encode(&vec![algebra.constant(c); width]);
        saturated |= d.add(code, || Provenance::Op(c, Box::new([])), 0)?;
    }
    let mut ops = Vec::new();
    for (sym, s) in sig.symbols().filter(|(_, s)| s.arity > 0) {
        let mut by_width: Vec<(usize, std::sync::Arc<Vec<u32>>)> = Vec::new();
        let tables = d
            .layout
            .widths
            .iter()
            .map(|&cw| {
                if let Some((_, t)) = by_width.iter().find(|(w, _)| *w == cw) {
                    return t.clone();
                }
                let t = std::sync::Arc::new(chunk_table(algebra, sym, s.arity, cw));
                by_width.push((cw, t.clone()));
                t
            })
            .collect();
        ops.push(OpTables {
            arity: s.arity,
            sym,
            tables,
        });
    }
    let mut start = 0;
    let mut depth = 0;
    if saturated {
        return Ok(d.finish());
    }
    'rounds: loop {
        let end = d.len();
        if start == end || ops.is_empty() {
            break;
        }
        depth += 1;
        for op in &ops {
            if let Outcome::Saturated = d.round(op, start, end, depth)? {
                break 'rounds;
            }
        }
        start = end;
    }
    Ok(d.finish())
}

impl Dense<'_> {
    fn finish(self) -> TupleClosure {
        let k = self.algebra.size() as u32;
        let w = self.width;
        let mut data = vec![0 as Elem; self.codes.len() * w];
        for (e, &code) in self.codes.iter().enumerate() {
            let mut c = code;
            for x in data[e * w..(e + 1) * w].iter_mut().rev() {
                *x = c % k;
                c /= k;
            }
        }
        let index = TupleIndex::build(w, &data, self.codes.len());
        TupleClosure::from_parts(w, data, self.provenance, self.depth, self.generators, index)
    }
}
