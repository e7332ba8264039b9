use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A functional language: function symbols with arities, constants being the
/// symbols of arity zero. Symbol ids are positions in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
    by_name: HashMap<String, SymbolId>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a signature from `(name, arity)` pairs, rejecting duplicates.
    pub fn from_symbols<'a>(symbols: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Self> {
        let mut sig = Signature::new();
        for (name, arity) in symbols {
            sig.add(name, arity)?;
        }
        Ok(sig)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<SymbolId> {
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(Symbol {
            name: name.to_string(),
            arity,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.index()].name
    }

    pub fn arity(&self, id: SymbolId) -> usize {
        self.symbols[id.index()].arity
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i as u32), s))
    }

    pub fn constants(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols()
            .filter(|(_, s)| s.arity == 0)
            .map(|(id, _)| id)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    /// The body of a signature block: `op f/2; const e;` with one entry per line.
    pub fn to_dsl_body(&self) -> String {
        let mut out = String::new();
        for s in &self.symbols {
            if s.arity == 0 {
                out.push_str(&format!("const {};", s.name));
            } else {
                out.push_str(&format!("op {}/{};", s.name, s.arity));
            }
            out.push(' ');
        }
        out.pop();
        out
    }

    pub fn to_dsl_block(&self, name: &str) -> String {
        let mut out = format!("signature {name} {{\n");
        for s in &self.symbols {
            if s.arity == 0 {
                out.push_str(&format!("  const {};\n", s.name));
            } else {
                out.push_str(&format!("  op {}/{};\n", s.name, s.arity));
            }
        }
        out.push('}');
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        write!(f, "}}")
    }
}

/// An ordered, non-empty list of variable names. The position of a name is
/// its coordinate in the affine space (0-based in code, `x_1` is index 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableSet {
    names: Vec<String>,
}

impl VariableSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidVariables(
                "variable set must be non-empty".into(),
            ));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidVariables(format!("duplicate variable `{n}`")));
            }
        }
        Ok(VariableSet { names })
    }

    /// `x` for one variable, `x1, …, xn` otherwise.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 1 {
            return VariableSet::new(["x"]);
        }
        VariableSet::new((1..=n).map(|i| format!("x{i}")))
    }

    /// Checks that no variable name is also a symbol of `sig`.
    pub fn check_disjoint(&self, sig: &Signature) -> Result<()> {
        for n in &self.names {
            if sig.lookup(n).is_some() {
                return Err(Error::InvalidVariables(format!(
                    "variable `{n}` clashes with a signature symbol"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Concatenation; names of `other` that clash get primes appended.
    pub fn concat(&self, other: &VariableSet, sig: &Signature) -> VariableSet {
        let mut names = self.names.clone();
        for n in &other.names {
            let mut candidate = n.clone();
            while names.contains(&candidate) || sig.lookup(&candidate).is_some() {
                candidate.push('\'');
            }
            names.push(candidate);
        }
        VariableSet { names }
    }
}

impl fmt::Display for VariableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(","))
    }
}
