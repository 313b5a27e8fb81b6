//! Constraint files.
//!
//! ```text
//! # comment
//! vars: a b
//! a >= b/2 >= 0
//! ```
//!
//! Each constraint line is a chain `e0 R1 e1 R2 e2 …`, read as the pairs
//! `e0 R1 e1`, `e1 R2 e2`, …. A term is a product of integers and at most
//! one variable, optionally divided by integers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::gfalg::{GfError, RationalGF};
use crate::system::{ConstraintSystem, RawConstraint, RawRelation, SystemError, VarTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}, column {col}: unknown variable `{name}`")]
    UnknownVariable {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}, column {col}: division by zero")]
    ZeroDenominator { line: usize, col: usize },
    #[error("line {line}: {source}")]
    System { line: usize, source: SystemError },
    #[error("missing `vars:` line")]
    MissingVars,
    #[error("line {line}: {source}")]
    Gf { line: usize, source: GfError },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Rel(RawRelation),
}

fn tokenize(src: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('>', Some('=')) => (Tok::Rel(RawRelation::Ge), 2),
            ('<', Some('=')) => (Tok::Rel(RawRelation::Le), 2),
            ('=', Some('=')) => (Tok::Rel(RawRelation::Eq), 2),
            ('>', _) => (Tok::Rel(RawRelation::Gt), 1),
            ('<', _) => (Tok::Rel(RawRelation::Lt), 1),
            ('=', _) => (Tok::Rel(RawRelation::Eq), 1),
            ('≥', _) => (Tok::Rel(RawRelation::Ge), 1),
            ('≤', _) => (Tok::Rel(RawRelation::Le), 1),
            _ => return Err(err(col, format!("unexpected character `{c}`"))),
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

/// Linear form `constant + Σ coeffs·λ`.
#[derive(Debug, Clone)]
struct Linear {
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

struct ExprParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'a VarTable,
}

impl<'a> ExprParser<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn term(&mut self, out: &mut Linear) -> Result<(), ParseError> {
        let mut coeff = BigRational::from_integer(1.into());
        let mut var = None;
        let mut expect_atom = true;
        loop {
            if expect_atom {
                match self.peek().cloned() {
                    Some(Tok::Int(v)) => {
                        self.pos += 1;
                        coeff *= BigRational::from_integer(v);
                    }
                    Some(Tok::Ident(name)) => {
                        let col = self.col();
                        let Some(v) = self.vars.index_of(&name) else {
                            return Err(ParseError::UnknownVariable {
                                line: self.line,
                                col,
                                name,
                            });
                        };
                        if var.is_some() {
                            return self.err("nonlinear term: two variables multiplied");
                        }
                        self.pos += 1;
                        var = Some(v);
                    }
                    _ => return self.err("expected an integer or a variable"),
                }
                expect_atom = false;
                continue;
            }
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    expect_atom = true;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(ParseError::ZeroDenominator {
                            line: self.line,
                            col,
                        });
                    }
                    coeff /= BigRational::from_integer(d);
                }
                _ => break,
            }
        }
        match var {
            Some(v) => out.coeffs[v] += coeff,
            None => out.constant += coeff,
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Linear, ParseError> {
        let mut out = Linear {
            coeffs: vec![BigRational::zero(); self.vars.len()],
            constant: BigRational::zero(),
        };
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                Some(Tok::Plus) => self.pos += 1,
                Some(Tok::Minus) => {
                    self.pos += 1;
                    negative = true;
                }
                _ if !first => break,
                _ => {}
            }
            let mut t = Linear {
                coeffs: vec![BigRational::zero(); self.vars.len()],
                constant: BigRational::zero(),
            };
            self.term(&mut t)?;
            for (o, c) in out.coeffs.iter_mut().zip(t.coeffs) {
                if negative {
                    *o -= c
                } else {
                    *o += c
                }
            }
            if negative {
                out.constant -= t.constant;
            } else {
                out.constant += t.constant;
            }
            first = false;
        }
        Ok(out)
    }

    /// `e0 R1 e1 R2 e2 …` as pairwise constraints.
    fn chain(&mut self) -> Result<Vec<RawConstraint>, ParseError> {
        let mut lhs = self.expr()?;
        let mut out = Vec::new();
        while let Some(Tok::Rel(rel)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.expr()?;
            out.push(RawConstraint {
                coeffs: lhs
                    .coeffs
                    .iter()
                    .zip(&rhs.coeffs)
                    .map(|(a, b)| a - b)
                    .collect(),
                constant: &lhs.constant - &rhs.constant,
                relation: rel,
            });
            lhs = rhs;
        }
        if self.pos < self.toks.len() {
            return self.err("expected `+`, `-` or a relation");
        }
        if out.is_empty() {
            return self.err("expected a relation");
        }
        Ok(out)
    }
}

/// Parses one constraint line (possibly a chain) over `vars`.
pub fn parse_constraint_line(
    src: &str,
    line: usize,
    vars: &VarTable,
) -> Result<Vec<RawConstraint>, ParseError> {
    let toks = tokenize(src, line)?;
    ExprParser {
        toks: &toks,
        pos: 0,
        line,
        end_col: src.chars().count() + 1,
        vars,
    }
    .chain()
}

/// The variable table and the constraints as written.
#[derive(Debug, Clone)]
pub struct ConstraintFile {
    pub vars: Arc<VarTable>,
    pub raw: Vec<RawConstraint>,
}

impl ConstraintFile {
    pub fn system(&self) -> Result<ConstraintSystem, ParseError> {
        crate::system::normalize(&self.raw, self.vars.clone())
            .map_err(|source| ParseError::System { line: 0, source })
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Reads the `vars:` header, returning the table and the index of the
/// first line after it.
fn read_vars(lines: &[&str]) -> Result<(Arc<VarTable>, usize), ParseError> {
    for (idx, raw) in lines.iter().enumerate() {
        let text = strip_comment(raw).trim();
        if text.is_empty() {
            continue;
        }
        let line = idx + 1;
        let Some(rest) = text.strip_prefix("vars:") else {
            return Err(ParseError::MissingVars);
        };
        let names: Vec<&str> = rest.split_whitespace().collect();
        for name in &names {
            let ok = name
                .chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                let col = raw.find(name).map_or(1, |b| raw[..b].chars().count() + 1);
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("invalid variable name `{name}`"),
                });
            }
        }
        let vars = VarTable::new(names).map_err(|source| ParseError::System { line, source })?;
        return Ok((Arc::new(vars), idx + 1));
    }
    Err(ParseError::MissingVars)
}

pub fn parse_constraint_file(text: &str) -> Result<ConstraintFile, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let (vars, start) = read_vars(&lines)?;
    let mut raw = Vec::new();
    for (idx, l) in lines.iter().enumerate().skip(start) {
        let body = strip_comment(l);
        if body.trim().is_empty() {
            continue;
        }
        if body.trim_start().starts_with("vars:") {
            return Err(ParseError::Syntax {
                line: idx + 1,
                col: 1,
                msg: "second `vars:` line".into(),
            });
        }
        raw.extend(parse_constraint_line(body, idx + 1, &vars)?);
    }
    Ok(ConstraintFile { vars, raw })
}

/// Parses and normalizes a constraint file.
pub fn parse_file(text: &str) -> Result<ConstraintSystem, ParseError> {
    parse_constraint_file(text)?.system()
}

/// A `vars:` header followed by generating-function text.
pub fn parse_gf_file(text: &str) -> Result<RationalGF, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let (vars, start) = read_vars(&lines)?;
    let body: Vec<&str> = lines[start..].iter().map(|l| strip_comment(l)).collect();
    RationalGF::parse(&body.join("\n"), vars).map_err(|source| ParseError::Gf {
        line: start + 1,
        source,
    })
}
