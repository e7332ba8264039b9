//! Whole documents of `signature`, `algebra`, `diophantine` and `system`
//! blocks. Names are unique per kind and must be defined before use.
//!
//! ```text
//! signature G { op +/2; op -/1; const zero; }
//! algebra Z2 over G { carrier 2; + = [[0,1],[1,0]]; - = [0,1]; zero = 0; }
//! diophantine Z2c from Z2;   // Z2 with one constant per element
//! system S over G vars x,y { +(x,y) = zero; }
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finalg::{Elem, FiniteAlgebra};
use crate::limits::checked_pow;
use crate::sigterm::{EquationSystem, Parser, Signature, VariableSet};

#[derive(Debug, Clone)]
pub struct NamedAlgebra {
    pub name: String,
    pub signature: String,
    pub algebra: Arc<FiniteAlgebra>,
}

#[derive(Debug, Clone)]
pub struct NamedSystem {
    pub name: String,
    pub signature: String,
    pub system: EquationSystem,
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub signatures: Vec<(String, Arc<Signature>)>,
    pub algebras: Vec<NamedAlgebra>,
    pub systems: Vec<NamedSystem>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = Document::default();
        doc.extend(text)?;
        Ok(doc)
    }

    /// Adds the blocks of another source; earlier definitions stay visible.
    pub fn extend(&mut self, text: &str) -> Result<()> {
        let mut p = Parser::new(text)?;
        while !p.at_eof() {
            if p.is_keyword("signature") {
                self.signature_block(&mut p)?;
            } else if p.is_keyword("algebra") {
                self.algebra_block(&mut p)?;
            } else if p.is_keyword("diophantine") {
                self.diophantine_block(&mut p)?;
            } else if p.is_keyword("system") {
                self.system_block(&mut p)?;
            } else {
                return Err(p.error("expected `signature`, `algebra`, `diophantine` or `system`"));
            }
        }
        Ok(())
    }

    pub fn signature(&self, name: &str) -> Result<&Arc<Signature>> {
        self.signatures
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| unresolved("signature", name))
    }

    pub fn algebra(&self, name: &str) -> Result<&NamedAlgebra> {
        self.algebras
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| unresolved("algebra", name))
    }

    pub fn system(&self, name: &str) -> Result<&NamedSystem> {
        self.systems
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| unresolved("system", name))
    }

    /// Name under which an identical signature was declared, if any.
    pub fn signature_name(&self, sig: &Signature) -> Option<&str> {
        self.signatures
            .iter()
            .find(|(_, s)| **s == *sig)
            .map(|(n, _)| n.as_str())
    }

    fn fresh(&self, kind: &'static str, name: &str) -> Result<()> {
        let taken = match kind {
            "signature" => self.signatures.iter().any(|(n, _)| n == name),
            "algebra" => self.algebras.iter().any(|a| a.name == name),
            _ => self.systems.iter().any(|s| s.name == name),
        };
        if taken {
            return Err(Error::DuplicateSymbol(format!("{kind} {name}")));
        }
        Ok(())
    }

    fn signature_block(&mut self, p: &mut Parser) -> Result<()> {
        p.expect_keyword("signature")?;
        let name = p.ident()?;
        self.fresh("signature", &name)?;
        p.expect_punct('{')?;
        let sig = p.signature_body()?;
        p.expect_punct('}')?;
        self.signatures.push((name, Arc::new(sig)));
        Ok(())
    }

    fn algebra_block(&mut self, p: &mut Parser) -> Result<()> {
        p.expect_keyword("algebra")?;
        let name = p.ident()?;
        self.fresh("algebra", &name)?;
        p.expect_keyword("over")?;
        let sig_name = p.ident()?;
        let sig = self.signature(&sig_name)?.clone();
        p.expect_punct('{')?;
        p.expect_keyword("carrier")?;
        let size = p.int()?;
        if size < 1 {
            return Err(p.error("carrier size must be positive"));
        }
        let size = size as usize;
        p.expect_punct(';')?;
        let mut tables: Vec<Option<Vec<Elem>>> = vec![None; sig.len()];
        while !p.is_punct('}') {
            let sym_name = p.ident()?;
            let sym = sig
                .lookup(&sym_name)
                .ok_or_else(|| Error::UnknownIdentifier(sym_name.clone()))?;
            p.expect_punct('=')?;
            let value = nested(p)?;
            p.expect_punct(';')?;
            let mut flat = Vec::new();
            flatten(&value, sig.arity(sym), size, &mut flat).map_err(|message| Error::InvalidTable {
                symbol: sym_name.clone(),
                message,
            })?;
            if tables[sym.index()].replace(flat).is_some() {
                return Err(Error::InvalidTable {
                    symbol: sym_name,
                    message: "defined twice".into(),
                });
            }
        }
        p.expect_punct('}')?;
        let mut out = Vec::with_capacity(sig.len());
        for (id, sym) in sig.symbols() {
            match tables[id.index()].take() {
                Some(t) => out.push(t),
                None => {
                    return Err(Error::InvalidTable {
                        symbol: sym.name.clone(),
                        message: "missing table".into(),
                    })
                }
            }
        }
        let algebra = FiniteAlgebra::new(sig, size, out)?;
        self.algebras.push(NamedAlgebra {
            name,
            signature: sig_name,
            algebra: Arc::new(algebra),
        });
        Ok(())
    }

    fn diophantine_block(&mut self, p: &mut Parser) -> Result<()> {
        p.expect_keyword("diophantine")?;
        let name = p.ident()?;
        self.fresh("signature", &name)?;
        self.fresh("algebra", &name)?;
        p.expect_keyword("from")?;
        let base = p.ident()?;
        p.expect_punct(';')?;
        let (ext, _) = self.algebra(&base)?.algebra.extend_with_constants()?;
        self.signatures.push((name.clone(), ext.signature().clone()));
        self.algebras.push(NamedAlgebra {
            name: name.clone(),
            signature: name,
            algebra: Arc::new(ext),
        });
        Ok(())
    }

    fn system_block(&mut self, p: &mut Parser) -> Result<()> {
        p.expect_keyword("system")?;
        let name = p.ident()?;
        self.fresh("system", &name)?;
        p.expect_keyword("over")?;
        let sig_name = p.ident()?;
        let sig = self.signature(&sig_name)?.clone();
        p.expect_keyword("vars")?;
        let mut names = vec![p.ident()?];
        while p.eat_punct(',') {
            names.push(p.ident()?);
        }
        let vars = VariableSet::new(names)?;
        vars.check_disjoint(&sig)?;
        p.expect_punct('{')?;
        let eqs = p.system_body(&sig, &vars)?;
        p.expect_punct('}')?;
        let system = EquationSystem::new(sig, vars, eqs)?;
        self.systems.push(NamedSystem {
            name,
            signature: sig_name,
            system,
        });
        Ok(())
    }
}

fn unresolved(kind: &'static str, name: &str) -> Error {
    Error::Unresolved {
        kind,
        name: name.to_string(),
    }
}

enum Nested {
    Int(i64),
    List(Vec<Nested>),
}

fn nested(p: &mut Parser) -> Result<Nested> {
    if p.eat_punct('[') {
        let mut items = Vec::new();
        if !p.is_punct(']') {
            loop {
                items.push(nested(p)?);
                if !p.eat_punct(',') {
                    break;
                }
            }
        }
        p.expect_punct(']')?;
        Ok(Nested::List(items))
    } else {
        Ok(Nested::Int(p.int()?))
    }
}

fn flatten(v: &Nested, arity: usize, size: usize, out: &mut Vec<Elem>) -> std::result::Result<(), String> {
    match (v, arity) {
        (Nested::Int(x), 0) => {
            if *x < 0 || *x as usize >= size {
                return Err(format!("entry {x} outside carrier of size {size}"));
            }
            out.push(*x as Elem);
            Ok(())
        }
        (Nested::List(items), m) if m > 0 => {
            if items.len() != size {
                return Err(format!("expected a list of {size} entries, found {}", items.len()));
            }
            items.iter().try_for_each(|i| flatten(i, m - 1, size, out))
        }
        (Nested::Int(_), m) => Err(format!(
            "expected a table nested {m} deep ({} entries)",
            checked_pow(size as u128, m)
        )),
        (Nested::List(_), _) => Err("expected a single element".into()),
    }
}
