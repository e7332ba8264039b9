//! Closure of a set of tuples under the componentwise operations of `A^w`.
//!
//! One engine serves subalgebra generation (`w = 1`), algebras of term
//! functions (`w = |Y|`) and closure tests, where a conflict (two tuples
//! agreeing on a key prefix but not on the rest) aborts the computation.
//!
//! Rounds are semi-naive: round `r` only combines argument tuples containing
//! at least one element found in round `r - 1`, so every element is reached
//! at the least possible depth. Within a round, symbols are taken in
//! declaration order and argument index tuples in lexicographic order.

use crate::error::Result;
use crate::limits::{checked_pow, Limits};
use crate::sigterm::SymbolId;

use super::algebra::{Elem, FiniteAlgebra};

/// How an element entered the closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// The `i`-th generator.
    Generator(usize),
    /// A symbol applied to earlier elements (constants have no arguments).
    Op(SymbolId, Box<[u32]>),
}

const EMPTY: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct TupleIndex {
    key_width: usize,
    slots: Vec<u32>,
    mask: usize,
}

fn hash_key(key: &[Elem]) -> usize {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &x in key {
        h = (h.rotate_left(5) ^ x as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
    (h ^ (h >> 29)) as usize
}

impl TupleIndex {
    pub fn new(key_width: usize) -> Self {
        TupleIndex {
            key_width,
            slots: vec![EMPTY; 16],
            mask: 15,
        }
    }

    /// Finds the element whose key prefix equals that of `tuple`, or the
    /// free slot where it would go.
    fn probe(
        &self,
        data: &[Elem],
        width: usize,
        tuple: &[Elem],
    ) -> std::result::Result<u32, usize> {
        let key = &tuple[..self.key_width];
        let mut slot = hash_key(key) & self.mask;
        loop {
            let e = self.slots[slot];
            if e == EMPTY {
                return Err(slot);
            }
            let start = e as usize * width;
            if &data[start..start + self.key_width] == key {
                return Ok(e);
            }
            slot = (slot + 1) & self.mask;
        }
    }

    pub fn lookup(&self, data: &[Elem], width: usize, tuple: &[Elem]) -> Option<u32> {
        self.probe(data, width, tuple).ok()
    }

    fn insert_at(&mut self, slot: usize, elem: u32, data: &[Elem], width: usize, len: usize) {
        self.slots[slot] = elem;
        if len * 2 > self.slots.len() {
            self.grow(data, width, len);
        }
    }

    pub(crate) fn build(key_width: usize, data: &[Elem], len: usize) -> Self {
        let mut index = TupleIndex::new(key_width);
        let mut cap = 16;
        while len * 2 > cap {
            cap *= 2;
        }
        index.slots = vec![EMPTY; cap];
        index.mask = cap - 1;
        index.rehash(data, key_width, len);
        index
    }

    fn grow(&mut self, data: &[Elem], width: usize, len: usize) {
        let cap = self.slots.len() * 2;
        self.slots = vec![EMPTY; cap];
        self.mask = cap - 1;
        self.rehash(data, width, len);
    }

    fn rehash(&mut self, data: &[Elem], width: usize, len: usize) {
        for e in 0..len {
            let key = &data[e * width..e * width + self.key_width];
            let mut slot = hash_key(key) & self.mask;
            while self.slots[slot] != EMPTY {
                slot = (slot + 1) & self.mask;
            }
            self.slots[slot] = e as u32;
        }
    }
}

/// The elements of a closure in discovery order.
#[derive(Debug, Clone)]
pub struct TupleClosure {
    width: usize,
    data: Vec<Elem>,
    provenance: Vec<Provenance>,
    depth: Vec<u32>,
    generators: Vec<u32>,
    index: TupleIndex,
}

impl TupleClosure {
    pub(crate) fn from_parts(
        width: usize,
        data: Vec<Elem>,
        provenance: Vec<Provenance>,
        depth: Vec<u32>,
        generators: Vec<u32>,
        index: TupleIndex,
    ) -> Self {
        TupleClosure {
            width,
            data,
            provenance,
            depth,
            generators,
            index,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.provenance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provenance.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[Elem] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn provenance(&self, i: usize) -> &Provenance {
        &self.provenance[i]
    }

    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    /// Element index of each generator (duplicates share an element).
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn index_of(&self, tuple: &[Elem]) -> Option<u32> {
        if tuple.len() != self.width {
            return None;
        }
        let e = self.index.lookup(&self.data, self.width, tuple)?;
        (self.tuple(e as usize) == tuple).then_some(e)
    }

    fn push(&mut self, slot: usize, tuple: &[Elem], prov: Provenance, depth: u32) -> u32 {
        let e = self.len() as u32;
        self.data.extend_from_slice(tuple);
        self.provenance.push(prov);
        self.depth.push(depth);
        let len = self.len();
        self.index.insert_at(slot, e, &self.data, self.width, len);
        e
    }
}

pub(crate) enum Closed {
    Done(TupleClosure),
    /// Two elements share a key prefix but differ elsewhere.
    Conflict,
}

enum Added {
    New,
    Old,
    Conflict,
}

struct Engine<'a> {
    algebra: &'a FiniteAlgebra,
    closure: TupleClosure,
    limit: u64,
    /// Number of distinct tuples in `A^w`; reaching it ends the closure.
    full: u128,
}

impl Engine<'_> {
    fn add(
        &mut self,
        tuple: &[Elem],
        prov: impl FnOnce() -> Provenance,
        depth: u32,
    ) -> Result<Added> {
        let c = &mut self.closure;
        match c.index.probe(&c.data, c.width, tuple) {
            Ok(e) => {
                if c.tuple(e as usize) == tuple {
                    Ok(Added::Old)
                } else {
                    Ok(Added::Conflict)
                }
            }
            Err(slot) => {
                if c.len() as u64 >= self.limit {
                    return Err(crate::Error::capacity(
                        "closure",
                        c.len() as u128 + 1,
                        self.limit,
                    ));
                }
                c.push(slot, tuple, prov(), depth);
                Ok(Added::New)
            }
        }
    }

    fn saturated(&self) -> bool {
        self.closure.len() as u128 == self.full
    }
}

/// Closes `generators` (each of length `width`) under `algebra`'s operations
/// applied componentwise. Tuples are keyed by their first `key_width`
/// coordinates; `key_width < width` turns on conflict detection.
pub(crate) fn close(
    algebra: &FiniteAlgebra,
    width: usize,
    generators: &[Vec<Elem>],
    key_width: usize,
    limits: &Limits,
) -> Result<Closed> {
    debug_assert!(key_width <= width);
    if key_width == width && super::dense::applies(algebra, width) {
        return Ok(Closed::Done(super::dense::close_dense(algebra, width, generators, limits)?));
    }
    close_general(algebra, width, generators, key_width, limits)
}

/// The hashed engine; also the reference for the dense one.
pub(crate) fn close_general(
    algebra: &FiniteAlgebra,
    width: usize,
    generators: &[Vec<Elem>],
    key_width: usize,
    limits: &Limits,
) -> Result<Closed> {
    let k = algebra.size();
    let mut engine = Engine {
        algebra,
        closure: TupleClosure {
            width,
            data: Vec::new(),
            provenance: Vec::new(),
            depth: Vec::new(),
            generators: Vec::with_capacity(generators.len()),
            index: TupleIndex::new(key_width),
        },
        limit: limits.max_closure,
        full: if key_width == width {
            checked_pow(k as u128, width)
        } else {
            u128::MAX
        },
    };
    for (i, g) in generators.iter().enumerate() {
        debug_assert_eq!(g.len(), width);
        match engine.add(g, || Provenance::Generator(i), 0)? {
            Added::Conflict => return Ok(Closed::Conflict),
            Added::New => engine
                .closure
                .generators
                .push(engine.closure.len() as u32 - 1),
            Added::Old => {
                let e = engine.closure.index_of(g).expect("present");
                engine.closure.generators.push(e);
            }
        }
    }
    let sig = algebra.signature().clone();
    let mut buf = vec![0 as Elem; width];
    for c in sig.constants() {
        buf.fill(algebra.constant(c));
        if let Added::Conflict = engine.add(&buf, || Provenance::Op(c, Box::new([])), 0)? {
            return Ok(Closed::Conflict);
        }
    }
    let ops: Vec<(SymbolId, usize)> = sig
        .symbols()
        .filter(|(_, s)| s.arity > 0)
        .map(|(id, s)| (id, s.arity))
        .collect();
    let mut start = 0usize;
    let mut depth = 0u32;
    loop {
        let end = engine.closure.len();
        if start == end || engine.saturated() || ops.is_empty() {
            break;
        }
        depth += 1;
        for &(sym, arity) in &ops {
            let done = match arity {
                1 => round_unary(&mut engine, sym, start, end, depth, &mut buf)?,
                2 => round_binary(&mut engine, sym, start, end, depth, &mut buf)?,
                _ => round_general(&mut engine, sym, arity, start, end, depth, &mut buf)?,
            };
            match done {
                Step::Continue => {}
                Step::Saturated => return Ok(Closed::Done(engine.closure)),
                Step::Conflict => return Ok(Closed::Conflict),
            }
        }
        start = end;
    }
    Ok(Closed::Done(engine.closure))
}

enum Step {
    Continue,
    Saturated,
    Conflict,
}

fn record(
    engine: &mut Engine<'_>,
    buf: &[Elem],
    sym: SymbolId,
    args: &[u32],
    depth: u32,
) -> Result<Step> {
    match engine.add(buf, || Provenance::Op(sym, args.into()), depth)? {
        Added::Conflict => Ok(Step::Conflict),
        Added::New if engine.saturated() => Ok(Step::Saturated),
        _ => Ok(Step::Continue),
    }
}

fn round_unary(
    engine: &mut Engine<'_>,
    sym: SymbolId,
    start: usize,
    end: usize,
    depth: u32,
    buf: &mut [Elem],
) -> Result<Step> {
    let alg = engine.algebra;
    let table = alg.table(sym);
    let w = engine.closure.width;
    for i in start..end {
        {
            let a = &engine.closure.data[i * w..(i + 1) * w];
            for (o, &x) in buf.iter_mut().zip(a) {
                *o = table[x as usize];
            }
        }
        match record(engine, buf, sym, &[i as u32], depth)? {
            Step::Continue => {}
            other => return Ok(other),
        }
    }
    Ok(Step::Continue)
}

fn round_binary(
    engine: &mut Engine<'_>,
    sym: SymbolId,
    start: usize,
    end: usize,
    depth: u32,
    buf: &mut [Elem],
) -> Result<Step> {
    let alg = engine.algebra;
    let k = alg.size();
    let table = alg.table(sym);
    let w = engine.closure.width;
    let mut row = vec![0usize; w];
    for i in 0..end {
        for (r, &x) in row.iter_mut().zip(&engine.closure.data[i * w..(i + 1) * w]) {
            *r = x as usize * k;
        }
        let from = if i >= start { 0 } else { start };
        for j in from..end {
            {
                let b = &engine.closure.data[j * w..(j + 1) * w];
                for ((o, &r), &y) in buf.iter_mut().zip(&row).zip(b) {
                    *o = table[r + y as usize];
                }
            }
            match record(engine, buf, sym, &[i as u32, j as u32], depth)? {
                Step::Continue => {}
                other => return Ok(other),
            }
        }
    }
    Ok(Step::Continue)
}

fn round_general(
    engine: &mut Engine<'_>,
    sym: SymbolId,
    arity: usize,
    start: usize,
    end: usize,
    depth: u32,
    buf: &mut [Elem],
) -> Result<Step> {
    let alg = engine.algebra;
    let k = alg.size();
    let table = alg.table(sym);
    let w = engine.closure.width;
    let mut idx = vec![0u32; arity];
    let last = arity - 1;
    'outer: loop {
        let has_new = idx[..last].iter().any(|&i| i as usize >= start);
        let from = if has_new { 0 } else { start };
        for j in from..end {
            idx[last] = j as u32;
            for (c, o) in buf.iter_mut().enumerate() {
                let mut t = 0usize;
                for &a in &idx {
                    t = t * k + engine.closure.data[a as usize * w + c] as usize;
                }
                *o = table[t];
            }
            match record(engine, buf, sym, &idx, depth)? {
                Step::Continue => {}
                other => return Ok(other),
            }
        }
        // advance the prefix odometer over [0, end)^(arity-1)
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
    Ok(Step::Continue)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sigterm::Signature;

    fn zn(n: u32) -> FiniteAlgebra {
        let sig = Arc::new(Signature::from_symbols([("+", 2), ("0", 0)]).unwrap());
        FiniteAlgebra::from_fn(sig, n as usize, &Limits::default(), |s, a| {
            if s.0 == 0 {
                (a[0] + a[1]) % n
            } else {
                0
            }
        })
        .unwrap()
    }

    fn done(c: Closed) -> TupleClosure {
        match c {
            Closed::Done(c) => c,
            Closed::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn dense_engine_matches_general() {
        let sig = Arc::new(Signature::from_symbols([("f", 2), ("g", 1), ("h", 3), ("c", 0)]).unwrap());
        let mut seed = 7u64;
        let mut next = move |m: u32| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % m as u64) as u32
        };
        for k in 1..=3u32 {
            for trial in 0..6 {
                let a = FiniteAlgebra::from_fn(sig.clone(), k as usize, &Limits::default(), |_, _| next(k)).unwrap();
                for width in 1..=4usize {
                    let gens: Vec<Vec<Elem>> = (0..(trial % 3))
                        .map(|_| (0..width).map(|_| next(k)).collect())
                        .collect();
                    let l = Limits::default();
                    let x = done(super::super::dense::close_dense(&a, width, &gens, &l).map(Closed::Done).unwrap());
                    let y = done(close_general(&a, width, &gens, width, &l).unwrap());
                    assert_eq!(x.data, y.data);
                    assert_eq!(x.provenance, y.provenance);
                    assert_eq!(x.depth, y.depth);
                    assert_eq!(x.generators, y.generators);
                    for i in 0..x.len() {
                        assert_eq!(x.index_of(x.tuple(i)), Some(i as u32));
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_subgroup() {
        let a = zn(4);
        let c = done(close(&a, 1, &[vec![2]], 1, &Limits::default()).unwrap());
        let mut elems: Vec<Elem> = (0..c.len()).map(|i| c.tuple(i)[0]).collect();
        elems.sort();
        assert_eq!(elems, vec![0, 2]);
        assert_eq!(c.provenance(0), &Provenance::Generator(0));
        assert_eq!(c.provenance(1), &Provenance::Op(SymbolId(1), Box::new([])));
    }

    #[test]
    fn depths_are_minimal() {
        let a = zn(8);
        let c = done(close(&a, 1, &[vec![1]], 1, &Limits::default()).unwrap());
        assert_eq!(c.len(), 8);
        // depth of m·1 is ceil(log2 m)
        for i in 0..c.len() {
            let m = c.tuple(i)[0];
            let expected = match m {
                0 | 1 => 0,
                2 => 1,
                3 | 4 => 2,
                _ => 3,
            };
            assert_eq!(c.depth(i), expected, "element {m}");
        }
    }

    #[test]
    fn conflict_on_key_collision() {
        let a = zn(2);
        // key (x) = 1 twice with different tails
        let r = close(&a, 2, &[vec![1, 0], vec![1, 1]], 1, &Limits::default()).unwrap();
        assert!(matches!(r, Closed::Conflict));
    }

    #[test]
    fn capacity_is_reported() {
        let a = zn(8);
        let limits = Limits {
            max_closure: 3,
            ..Limits::default()
        };
        assert!(close(&a, 1, &[vec![1]], 1, &limits).is_err());
    }

    #[test]
    fn ternary_operations() {
        let sig = Arc::new(Signature::from_symbols([("m", 3)]).unwrap());
        let a = FiniteAlgebra::from_fn(sig, 3, &Limits::default(), |_, x| (x[0] + x[1] + x[2]) % 3)
            .unwrap();
        let c = done(close(&a, 1, &[vec![1]], 1, &Limits::default()).unwrap());
        assert_eq!(c.len(), 3);
    }
}
