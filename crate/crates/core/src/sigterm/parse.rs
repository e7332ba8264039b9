use std::sync::Arc;

use crate::error::{Error, Result};

use super::signature::{Signature, VariableSet};
use super::system::{Equation, EquationSystem};
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Int(i64),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

const PUNCT: &str = "{}()[],;/=";
const SYMBOLIC: &str = "+-*^~!&|<>?.@#$%\\:";

fn is_word_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub(crate) struct Lexer;

impl Lexer {
    pub fn tokenize(text: &str) -> Result<Vec<Spanned>> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
        let advance = |i: &mut usize, line: &mut usize, column: &mut usize, c: char| {
            *i += 1;
            if c == '\n' {
                *line += 1;
                *column = 1;
            } else {
                *column += 1;
            }
        };
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                advance(&mut i, &mut line, &mut column, c);
                continue;
            }
            if c == '/' && chars.get(i + 1) == Some(&'/') {
                while i < chars.len() && chars[i] != '\n' {
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut column, ch);
                    }
                }
                continue;
            }
            let (l, col) = (line, column);
            let negative = c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
            let token = if c.is_ascii_digit() || negative {
                let start = i;
                advance(&mut i, &mut line, &mut column, c);
                while i < chars.len() && chars[i].is_ascii_digit() {
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut column, ch);
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<i64>().map_err(|_| Error::Syntax {
                    line: l,
                    column: col,
                    message: format!("integer `{s}` out of range"),
                })?;
                Token::Int(v)
            } else if is_word_start(c) {
                let start = i;
                while i < chars.len() && is_word(chars[i]) {
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut column, ch);
                    }
                }
                Token::Ident(chars[start..i].iter().collect())
            } else if SYMBOLIC.contains(c) {
                let start = i;
                while i < chars.len() && SYMBOLIC.contains(chars[i]) {
                    if chars[i] == '-'
                        && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
                        && i > start
                    {
                        break;
                    }
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut column, ch);
                    }
                }
                Token::Ident(chars[start..i].iter().collect())
            } else if PUNCT.contains(c) {
                advance(&mut i, &mut line, &mut column, c);
                Token::Punct(c)
            } else {
                return Err(Error::Syntax {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                });
            };
            out.push(Spanned {
                token,
                line: l,
                column: col,
            });
        }
        out.push(Spanned {
            token: Token::Eof,
            line,
            column,
        });
        Ok(out)
    }
}

/// Recursive-descent parser over a token stream. Shared by the single-item
/// entry points below and the document parser.
pub(crate) struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: Lexer::tokenize(text)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    pub fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].token
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Token::Eof)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].token.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let s = &self.tokens[self.pos];
        Error::Syntax {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn describe(t: &Token) -> String {
        match t {
            Token::Ident(s) => format!("`{s}`"),
            Token::Int(v) => format!("`{v}`"),
            Token::Punct(c) => format!("`{c}`"),
            Token::Eof => "end of input".into(),
        }
    }

    pub fn is_punct(&self, c: char) -> bool {
        *self.peek() == Token::Punct(c)
    }

    pub fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.error(format!(
                "expected `{c}`, found {}",
                Self::describe(self.peek())
            )))
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Token::Ident(s) if s == kw)
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected `{kw}`, found {}",
                Self::describe(self.peek())
            )))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Token::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.error(format!("expected identifier, found {}", Self::describe(&t)))),
        }
    }

    pub fn int(&mut self) -> Result<i64> {
        match *self.peek() {
            Token::Int(v) => {
                self.bump();
                Ok(v)
            }
            ref t => Err(self.error(format!("expected integer, found {}", Self::describe(t)))),
        }
    }

    pub fn expect_eof(&self) -> Result<()> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", Self::describe(self.peek()))))
        }
    }

    /// `(op IDENT/ARITY; | const IDENT;)*` up to `}` or end of input.
    pub fn signature_body(&mut self) -> Result<Signature> {
        let mut sig = Signature::new();
        while !self.is_punct('}') && !self.at_eof() {
            if self.is_keyword("op") {
                self.bump();
                let name = self.ident()?;
                self.expect_punct('/')?;
                let arity = self.int()?;
                if arity < 0 {
                    return Err(Error::NegativeArity { name, arity });
                }
                sig.add(&name, arity as usize)?;
            } else if self.is_keyword("const") {
                self.bump();
                let name = self.ident()?;
                sig.add(&name, 0)?;
            } else {
                return Err(self.error(format!(
                    "expected `op` or `const`, found {}",
                    Self::describe(self.peek())
                )));
            }
            self.expect_punct(';')?;
        }
        Ok(sig)
    }

    pub fn term(&mut self, sig: &Signature, vars: &VariableSet) -> Result<Term> {
        let name = self.ident()?;
        let has_args = self.is_punct('(');
        if let Some(i) = vars.index_of(&name) {
            if has_args {
                return Err(Error::ArityMismatch {
                    name,
                    expected: 0,
                    found: self.count_args(sig, vars)?,
                });
            }
            return Ok(Term::var(i));
        }
        let Some(sym) = sig.lookup(&name) else {
            return Err(Error::UnknownIdentifier(name));
        };
        let mut args = Vec::new();
        if self.eat_punct('(') {
            if !self.is_punct(')') {
                loop {
                    args.push(self.term(sig, vars)?);
                    if !self.eat_punct(',') {
                        break;
                    }
                }
            }
            self.expect_punct(')')?;
        }
        let expected = sig.arity(sym);
        if args.len() != expected {
            return Err(Error::ArityMismatch {
                name,
                expected,
                found: args.len(),
            });
        }
        Ok(Term::app(sym, args))
    }

    fn count_args(&mut self, sig: &Signature, vars: &VariableSet) -> Result<usize> {
        self.expect_punct('(')?;
        let mut n = 0;
        if !self.is_punct(')') {
            loop {
                self.term(sig, vars)?;
                n += 1;
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        self.expect_punct(')')?;
        Ok(n)
    }

    pub fn equation(&mut self, sig: &Signature, vars: &VariableSet) -> Result<Equation> {
        let lhs = self.term(sig, vars)?;
        self.expect_punct('=')?;
        let rhs = self.term(sig, vars)?;
        Ok(Equation::new(lhs, rhs))
    }

    /// `(equation ;)*` up to `}` or end of input; the final `;` may be omitted.
    pub fn system_body(&mut self, sig: &Signature, vars: &VariableSet) -> Result<Vec<Equation>> {
        let mut eqs = Vec::new();
        while !self.is_punct('}') && !self.at_eof() {
            eqs.push(self.equation(sig, vars)?);
            if !self.eat_punct(';') && !self.is_punct('}') && !self.at_eof() {
                return Err(self.error(format!(
                    "expected `;`, found {}",
                    Self::describe(self.peek())
                )));
            }
        }
        Ok(eqs)
    }
}

/// Parses `op f/2; const e;` or a full `signature NAME { … }` block.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut p = Parser::new(text)?;
    let sig = if p.is_keyword("signature") && !matches!(p.peek_at(1), Token::Punct('/')) {
        p.bump();
        p.ident()?;
        p.expect_punct('{')?;
        let sig = p.signature_body()?;
        p.expect_punct('}')?;
        sig
    } else {
        p.signature_body()?
    };
    p.expect_eof()?;
    Ok(sig)
}

pub fn parse_term(text: &str, sig: &Signature, vars: &VariableSet) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let t = p.term(sig, vars)?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_equation(text: &str, sig: &Signature, vars: &VariableSet) -> Result<Equation> {
    let mut p = Parser::new(text)?;
    let e = p.equation(sig, vars)?;
    p.eat_punct(';');
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_system(
    text: &str,
    sig: &Arc<Signature>,
    vars: &VariableSet,
) -> Result<EquationSystem> {
    let mut p = Parser::new(text)?;
    let eqs = p.system_body(sig, vars)?;
    p.expect_eof()?;
    EquationSystem::new(sig.clone(), vars.clone(), eqs)
}
