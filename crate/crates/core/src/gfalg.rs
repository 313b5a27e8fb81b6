//! Generating functions in the form `Σ ± c·X^a / ∏(1 − X^b)`.
//!
//! A [`RationalGF`] is a finite sum of [`SimpleTerm`]s. No common denominators
//! are ever formed; two generating functions are compared through their
//! series expansions (see [`crate::series::specialize`]).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::system::{VarId, VarTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("generating functions are over different variable tables")]
    MismatchedVars,
    #[error("exponent vector has length {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("denominator factor (1 - 1) is a division by zero")]
    UnitDenominator,
    #[error("substitution collapsed a geometric factor")]
    CollapsedFactor,
    #[error("substitution needs two distinct variables")]
    SameVariable,
    #[error("exponent overflow")]
    Overflow,
    #[error("coefficient extraction only supports powers 0 and 1 (got {0})")]
    UnsupportedPower(u32),
    #[error("cannot extract a coefficient of `{0}`: it has a negative exponent")]
    NegativeExponent(String),
    #[error("variable index {0} out of range")]
    VarOutOfRange(VarId),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Signed exponent vector; the all-zero vector is the unit monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial(exps)
    }

    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, v: VarId) -> Self {
        let mut e = vec![0; n];
        e[v] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exp(&self, v: VarId) -> i64 {
        self.0[v]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial, GfError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(GfError::Overflow))
            .collect::<Result<_, _>>()
            .map(Monomial)
    }

    /// Image under `x_j ← x_j·x_i^a`: `exps[i] += a·exps[j]`.
    fn substituted(&self, j: VarId, i: VarId, a: i64) -> Result<Monomial, GfError> {
        let mut e = self.0.clone();
        let delta = a.checked_mul(e[j]).ok_or(GfError::Overflow)?;
        e[i] = e[i].checked_add(delta).ok_or(GfError::Overflow)?;
        Ok(Monomial(e))
    }

    fn without(&self, v: VarId) -> Monomial {
        let mut e = self.0.clone();
        e.remove(v);
        Monomial(e)
    }

    pub fn with_exp(&self, v: VarId, value: i64) -> Monomial {
        let mut e = self.0.clone();
        e[v] = value;
        Monomial(e)
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, vars }
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    vars: &'a VarTable,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, &e) in self.m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.vars.name(v))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// `coeff · num / ∏_{m ∈ den} (1 − m)`; `den` is a sorted multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleTerm {
    pub coeff: BigInt,
    pub num: Monomial,
    den: Vec<Monomial>,
}

impl SimpleTerm {
    pub fn new(coeff: BigInt, num: Monomial, mut den: Vec<Monomial>) -> Result<Self, GfError> {
        if den.iter().any(Monomial::is_unit) {
            return Err(GfError::UnitDenominator);
        }
        let n = num.len();
        if let Some(bad) = den.iter().find(|m| m.len() != n) {
            return Err(GfError::Arity {
                expected: n,
                got: bad.len(),
            });
        }
        den.sort();
        Ok(SimpleTerm { coeff, num, den })
    }

    pub fn den(&self) -> &[Monomial] {
        &self.den
    }

    /// Distinct denominator factors with multiplicities.
    pub fn den_with_multiplicity(&self) -> Vec<(&Monomial, usize)> {
        let mut out: Vec<(&Monomial, usize)> = Vec::new();
        for m in &self.den {
            match out.last_mut() {
                Some((last, k)) if *last == m => *k += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }
}

/// Finite sum of simple terms over a shared variable table, always canonical:
/// no two terms share `(num, den)`, no zero coefficients, terms ordered by
/// numerator exponents then denominators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalGF {
    vars: Arc<VarTable>,
    terms: Vec<SimpleTerm>,
}

impl RationalGF {
    pub fn zero(vars: Arc<VarTable>) -> Self {
        RationalGF {
            vars,
            terms: Vec::new(),
        }
    }

    pub fn one(vars: Arc<VarTable>) -> Self {
        let n = vars.len();
        Self::from_terms(
            vars,
            vec![SimpleTerm {
                coeff: BigInt::one(),
                num: Monomial::unit(n),
                den: Vec::new(),
            }],
        )
        .expect("unit term is well formed")
    }

    /// `num / ∏(1 − d)` with coefficient one.
    pub fn simple(vars: Arc<VarTable>, num: Monomial, den: Vec<Monomial>) -> Result<Self, GfError> {
        let t = SimpleTerm::new(BigInt::one(), num, den)?;
        Self::from_terms(vars, vec![t])
    }

    pub fn from_terms(vars: Arc<VarTable>, terms: Vec<SimpleTerm>) -> Result<Self, GfError> {
        let n = vars.len();
        for t in &terms {
            if t.num.len() != n {
                return Err(GfError::Arity {
                    expected: n,
                    got: t.num.len(),
                });
            }
            if t.den.iter().any(Monomial::is_unit) {
                return Err(GfError::UnitDenominator);
            }
        }
        Ok(RationalGF { vars, terms }.canonicalize())
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &[SimpleTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sorts denominators, merges equal `(num, den)` pairs, drops zeros and
    /// orders terms deterministically. Idempotent.
    pub fn canonicalize(self) -> Self {
        let mut merged: BTreeMap<(Monomial, Vec<Monomial>), BigInt> = BTreeMap::new();
        for mut t in self.terms {
            t.den.sort();
            *merged.entry((t.num, t.den)).or_insert_with(BigInt::zero) += t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((num, den), coeff)| SimpleTerm { coeff, num, den })
            .collect();
        RationalGF {
            vars: self.vars,
            terms,
        }
    }

    fn check_same_vars(&self, other: &RationalGF) -> Result<(), GfError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(GfError::MismatchedVars)
        }
    }

    pub fn add(&self, other: &RationalGF) -> Result<RationalGF, GfError> {
        self.check_same_vars(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(RationalGF {
            vars: self.vars.clone(),
            terms,
        }
        .canonicalize())
    }

    pub fn sub(&self, other: &RationalGF) -> Result<RationalGF, GfError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalGF {
        RationalGF {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| SimpleTerm {
                    coeff: -&t.coeff,
                    ..t.clone()
                })
                .collect(),
        }
    }

    /// Multiplies every numerator by `num_factor` and appends `new_den` to
    /// every denominator.
    pub fn mul_factors(
        &self,
        num_factor: &Monomial,
        new_den: &[Monomial],
    ) -> Result<RationalGF, GfError> {
        let n = self.vars.len();
        if num_factor.len() != n {
            return Err(GfError::Arity {
                expected: n,
                got: num_factor.len(),
            });
        }
        if new_den.iter().any(Monomial::is_unit) {
            return Err(GfError::UnitDenominator);
        }
        if let Some(bad) = new_den.iter().find(|m| m.len() != n) {
            return Err(GfError::Arity {
                expected: n,
                got: bad.len(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut den = t.den.clone();
                den.extend(new_den.iter().cloned());
                Ok(SimpleTerm {
                    coeff: t.coeff.clone(),
                    num: t.num.checked_mul(num_factor)?,
                    den,
                })
            })
            .collect::<Result<Vec<_>, GfError>>()?;
        Ok(RationalGF {
            vars: self.vars.clone(),
            terms,
        }
        .canonicalize())
    }

    /// Product of two generating functions, term by term.
    pub fn mul(&self, other: &RationalGF) -> Result<RationalGF, GfError> {
        self.check_same_vars(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut den = a.den.clone();
                den.extend(b.den.iter().cloned());
                terms.push(SimpleTerm {
                    coeff: &a.coeff * &b.coeff,
                    num: a.num.checked_mul(&b.num)?,
                    den,
                });
            }
        }
        Ok(RationalGF {
            vars: self.vars.clone(),
            terms,
        }
        .canonicalize())
    }

    /// `F(X; x_j ← x_j·x_i^a)`: every numerator and denominator monomial
    /// gets `exps[i] += a·exps[j]`.
    pub fn substitute(&self, j: VarId, i: VarId, a: i64) -> Result<RationalGF, GfError> {
        let n = self.vars.len();
        if i >= n {
            return Err(GfError::VarOutOfRange(i));
        }
        if j >= n {
            return Err(GfError::VarOutOfRange(j));
        }
        if i == j {
            return Err(GfError::SameVariable);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let den = t
                    .den
                    .iter()
                    .map(|m| {
                        let s = m.substituted(j, i, a)?;
                        if s.is_unit() {
                            Err(GfError::CollapsedFactor)
                        } else {
                            Ok(s)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(SimpleTerm {
                    coeff: t.coeff.clone(),
                    num: t.num.substituted(j, i, a)?,
                    den,
                })
            })
            .collect::<Result<Vec<_>, GfError>>()?;
        Ok(RationalGF {
            vars: self.vars.clone(),
            terms,
        }
        .canonicalize())
    }

    /// `[x_v^k] F` for `k ∈ {0, 1}`, as a generating function over the
    /// remaining variables.
    pub fn extract_coeff(&self, v: VarId, k: u32) -> Result<RationalGF, GfError> {
        let n = self.vars.len();
        if v >= n {
            return Err(GfError::VarOutOfRange(v));
        }
        if k > 1 {
            return Err(GfError::UnsupportedPower(k));
        }
        let vars = Arc::new(self.vars.without(v));
        let mut out = Vec::new();
        for t in &self.terms {
            if t.num.exp(v) < 0 || t.den.iter().any(|m| m.exp(v) < 0) {
                return Err(GfError::NegativeExponent(self.vars.name(v).to_string()));
            }
            let free: Vec<Monomial> = t
                .den
                .iter()
                .filter(|m| m.exp(v) == 0)
                .map(|m| m.without(v))
                .collect();
            let e = t.num.exp(v);
            match (k, e) {
                (0, 0) | (1, 1) => out.push(SimpleTerm {
                    coeff: t.coeff.clone(),
                    num: t.num.without(v),
                    den: free,
                }),
                (1, 0) => {
                    for (m, mult) in t.den_with_multiplicity() {
                        if m.exp(v) != 1 {
                            continue;
                        }
                        let num = t.num.checked_mul(&m.with_exp(v, 0))?.without(v);
                        out.push(SimpleTerm {
                            coeff: &t.coeff * BigInt::from(mult),
                            num,
                            den: free.clone(),
                        });
                    }
                }
                _ => {}
            }
        }
        if out.iter().any(|t| t.den.iter().any(Monomial::is_unit)) {
            return Err(GfError::UnitDenominator);
        }
        Ok(RationalGF { vars, terms: out }.canonicalize())
    }

    /// Re-indexes a generating function over `sub` variables into `full`,
    /// where `embedding[k]` is the position of sub-variable `k` in `full`.
    pub fn embed(&self, full: Arc<VarTable>, embedding: &[VarId]) -> Result<RationalGF, GfError> {
        if embedding.len() != self.vars.len() {
            return Err(GfError::Arity {
                expected: self.vars.len(),
                got: embedding.len(),
            });
        }
        let n = full.len();
        let lift = |m: &Monomial| {
            let mut e = vec![0; n];
            for (k, &pos) in embedding.iter().enumerate() {
                e[pos] = m.exp(k);
            }
            Monomial(e)
        };
        let terms = self
            .terms
            .iter()
            .map(|t| SimpleTerm {
                coeff: t.coeff.clone(),
                num: lift(&t.num),
                den: t.den.iter().map(lift).collect(),
            })
            .collect();
        Ok(RationalGF { vars: full, terms }.canonicalize())
    }

    /// Same terms over a renamed table of equal arity.
    pub fn with_vars(&self, vars: Arc<VarTable>) -> Result<RationalGF, GfError> {
        if vars.len() != self.vars.len() {
            return Err(GfError::Arity {
                expected: self.vars.len(),
                got: vars.len(),
            });
        }
        Ok(RationalGF {
            vars,
            terms: self.terms.clone(),
        })
    }

    /// The corollary's normal form: every term is a monomial with nonnegative
    /// exponents over a product of `(1 − monomial)` factors, none of them unit.
    pub fn is_corollary_form(&self) -> bool {
        self.terms.iter().all(|t| {
            t.num.is_nonnegative() && t.den.iter().all(|m| m.is_nonnegative() && !m.is_unit())
        })
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parses the canonical text produced by `Display` (terms only, no
    /// `vars:` header) over the given variable table.
    pub fn parse(text: &str, vars: Arc<VarTable>) -> Result<RationalGF, GfError> {
        parse::parse_gf(text, vars)
    }
}

impl fmt::Display for RationalGF {
    /// One term per line: `± [c*]MONO [/ (1 - MONO)^d ...]`; the zero
    /// function prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for t in &self.terms {
            let sign = if t.coeff.is_negative() { '-' } else { '+' };
            let mag = t.coeff.abs();
            write!(f, "{sign} ")?;
            if mag.is_one() {
                write!(f, "{}", t.num.display(&self.vars))?;
            } else if t.num.is_unit() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{}", t.num.display(&self.vars))?;
            }
            if !t.den.is_empty() {
                write!(f, " /")?;
                for (m, d) in t.den_with_multiplicity() {
                    write!(f, " (1 - {})", m.display(&self.vars))?;
                    if d > 1 {
                        write!(f, "^{d}")?;
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

mod parse {
    use super::*;

    struct Cursor<'a> {
        src: &'a [u8],
        pos: usize,
    }

    impl<'a> Cursor<'a> {
        fn err<T>(&self, msg: impl Into<String>) -> Result<T, GfError> {
            Err(GfError::Parse {
                col: self.pos + 1,
                msg: msg.into(),
            })
        }

        fn skip_ws(&mut self) {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.src.get(self.pos).copied()
        }

        fn eat(&mut self, b: u8) -> bool {
            if self.peek() == Some(b) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expect(&mut self, b: u8) -> Result<(), GfError> {
            if self.eat(b) {
                Ok(())
            } else {
                self.err(format!("expected `{}`", b as char))
            }
        }

        fn integer(&mut self) -> Result<BigInt, GfError> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected an integer");
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            Ok(s.parse().expect("digits parse"))
        }

        fn signed_small(&mut self) -> Result<i64, GfError> {
            let neg = self.eat(b'-');
            let v = self.integer()?;
            let v: i64 = i64::try_from(v).or_else(|_| self.err("exponent too large"))?;
            Ok(if neg { -v } else { v })
        }

        fn ident(&mut self) -> Option<&'a str> {
            self.skip_ws();
            let start = self.pos;
            let first = *self.src.get(self.pos)?;
            if !(first.is_ascii_alphabetic() || first == b'_') {
                return None;
            }
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident"))
        }
    }

    /// `1` or `name[^e]*name[^e]...`
    fn monomial(cur: &mut Cursor<'_>, vars: &VarTable) -> Result<Monomial, GfError> {
        let mut e = vec![0i64; vars.len()];
        if cur.peek() == Some(b'1') {
            cur.pos += 1;
            return Ok(Monomial(e));
        }
        loop {
            let Some(name) = cur.ident() else {
                return cur.err("expected a variable name");
            };
            let Some(v) = vars.index_of(name) else {
                return cur.err(format!("unknown variable `{name}`"));
            };
            let p = if cur.eat(b'^') {
                cur.signed_small()?
            } else {
                1
            };
            e[v] = e[v].checked_add(p).ok_or(GfError::Overflow)?;
            let save = cur.pos;
            if cur.eat(b'*') {
                if cur
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphabetic() || b == b'_')
                {
                    continue;
                }
                cur.pos = save;
            }
            break;
        }
        Ok(Monomial(e))
    }

    pub(super) fn parse_gf(text: &str, vars: Arc<VarTable>) -> Result<RationalGF, GfError> {
        let mut cur = Cursor {
            src: text.as_bytes(),
            pos: 0,
        };
        let n = vars.len();
        let mut terms = Vec::new();
        if cur.peek() == Some(b'0') {
            cur.pos += 1;
            if cur.peek().is_none() {
                return Ok(RationalGF::zero(vars));
            }
            return cur.err("trailing input after `0`");
        }
        while cur.peek().is_some() {
            let negative = if cur.eat(b'-') {
                true
            } else {
                cur.eat(b'+');
                false
            };
            // optional integer coefficient
            let mut coeff = BigInt::one();
            let mut num = Monomial::unit(n);
            if cur.peek().is_some_and(|b| b.is_ascii_digit()) {
                let c = cur.integer()?;
                if cur.eat(b'*') {
                    coeff = c;
                    num = monomial(&mut cur, &vars)?;
                } else {
                    coeff = c;
                }
            } else {
                num = monomial(&mut cur, &vars)?;
            }
            let mut den = Vec::new();
            if cur.eat(b'/') {
                while cur.peek() == Some(b'(') {
                    cur.pos += 1;
                    if cur.integer()? != BigInt::one() {
                        return cur.err("denominator factors must read `(1 - m)`");
                    }
                    cur.expect(b'-')?;
                    let m = monomial(&mut cur, &vars)?;
                    cur.expect(b')')?;
                    let d = if cur.eat(b'^') {
                        cur.integer()?
                    } else {
                        BigInt::one()
                    };
                    let d: usize =
                        usize::try_from(d).or_else(|_| cur.err("multiplicity too large"))?;
                    if m.is_unit() {
                        return Err(GfError::UnitDenominator);
                    }
                    den.extend(std::iter::repeat_n(m, d));
                }
                if den.is_empty() {
                    return cur.err("expected `(` after `/`");
                }
            }
            if negative {
                coeff = -coeff;
            }
            terms.push(SimpleTerm::new(coeff, num, den)?);
            match cur.peek() {
                None | Some(b'+') | Some(b'-') => {}
                Some(c) => return cur.err(format!("unexpected `{}`", c as char)),
            }
        }
        RationalGF::from_terms(vars, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Arc<VarTable> {
        Arc::new(VarTable::numbered("x", n))
    }

    fn m(e: &[i64]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn f_minus_f_is_zero() {
        let v = vars(2);
        let f = RationalGF::simple(v.clone(), m(&[1, 0]), vec![m(&[1, 1]), m(&[0, 1])]).unwrap();
        assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn no_common_denominator_merging() {
        let v = vars(1);
        let a = RationalGF::simple(v.clone(), m(&[0]), vec![m(&[1])]).unwrap();
        let b = RationalGF::simple(v.clone(), m(&[1]), vec![m(&[1])]).unwrap();
        assert_eq!(a.add(&b).unwrap().len(), 2);
    }

    #[test]
    fn mul_by_unit_is_identity() {
        let v = vars(2);
        let f = RationalGF::simple(v.clone(), m(&[1, 0]), vec![m(&[1, 1])]).unwrap();
        assert_eq!(f.mul_factors(&Monomial::unit(2), &[]).unwrap(), f);
        assert_eq!(
            f.mul_factors(&m(&[0, 1]), &[m(&[0, 0])]),
            Err(GfError::UnitDenominator)
        );
    }

    #[test]
    fn substitute_single_factor() {
        let v = vars(2);
        // 1/(1 - x2) under x2 ← x2·x1
        let f = RationalGF::simple(v.clone(), m(&[0, 0]), vec![m(&[0, 1])]).unwrap();
        let g = f.substitute(1, 0, 1).unwrap();
        assert_eq!(
            g,
            RationalGF::simple(v, m(&[0, 0]), vec![m(&[1, 1])]).unwrap()
        );
    }

    #[test]
    fn substitute_negative_then_back() {
        let v = vars(2);
        // 1/((1 - x1)(1 - x1 x2)) under x1 ← x1 x2^-1
        let f = RationalGF::simple(v.clone(), m(&[0, 0]), vec![m(&[1, 0]), m(&[1, 1])]).unwrap();
        let g = f.substitute(0, 1, -1).unwrap();
        let expect =
            RationalGF::simple(v.clone(), m(&[0, 0]), vec![m(&[1, -1]), m(&[1, 0])]).unwrap();
        assert_eq!(g, expect);
        assert_eq!(g.substitute(0, 1, 1).unwrap(), f);
    }

    #[test]
    fn substitute_rejects_same_variable() {
        let f = RationalGF::simple(vars(2), m(&[0, 0]), vec![m(&[1, -1])]).unwrap();
        assert_eq!(f.substitute(1, 1, 1), Err(GfError::SameVariable));
    }

    #[test]
    fn extract_numerator_power() {
        let v = vars(2);
        // [x1^1] x1/(1 - x2)
        let f = RationalGF::simple(v, m(&[1, 0]), vec![m(&[0, 1])]).unwrap();
        let g = f.extract_coeff(0, 1).unwrap();
        let w = Arc::new(VarTable::new(["x2"]).unwrap());
        assert_eq!(g, RationalGF::simple(w, m(&[0]), vec![m(&[1])]).unwrap());
    }

    #[test]
    fn extract_from_denominator() {
        let v = vars(3);
        // [x1^1] 1/((1 - x1 x2)(1 - x3)) = x2/(1 - x3)
        let f = RationalGF::simple(v, m(&[0, 0, 0]), vec![m(&[1, 1, 0]), m(&[0, 0, 1])]).unwrap();
        let g = f.extract_coeff(0, 1).unwrap();
        let w = Arc::new(VarTable::new(["x2", "x3"]).unwrap());
        assert_eq!(
            g,
            RationalGF::simple(w, m(&[1, 0]), vec![m(&[0, 1])]).unwrap()
        );
    }

    #[test]
    fn extract_homogenized_lower_bound() {
        // vars (x1, x0); 1/((1 - x0 x1^3)(1 - x1)) → x1^3/(1 - x1)
        let v = Arc::new(VarTable::new(["x1", "x0"]).unwrap());
        let f = RationalGF::simple(v, m(&[0, 0]), vec![m(&[3, 1]), m(&[1, 0])]).unwrap();
        let g = f.extract_coeff(1, 1).unwrap();
        let w = Arc::new(VarTable::new(["x1"]).unwrap());
        assert_eq!(g, RationalGF::simple(w, m(&[3]), vec![m(&[1])]).unwrap());
    }

    #[test]
    fn extract_uses_multiplicity() {
        let v = vars(2);
        // [x1^1] 1/(1 - x1 x2)^2 = 2 x2
        let f = RationalGF::simple(v, m(&[0, 0]), vec![m(&[1, 1]), m(&[1, 1])]).unwrap();
        let g = f.extract_coeff(0, 1).unwrap();
        assert_eq!(g.terms().len(), 1);
        assert_eq!(g.terms()[0].coeff, BigInt::from(2));
        assert_eq!(g.terms()[0].num, m(&[1]));
        assert!(g.terms()[0].den().is_empty());
    }

    #[test]
    fn extract_rejects_negative_and_high_power() {
        let v = vars(2);
        let f = RationalGF::simple(v, m(&[0, 0]), vec![m(&[-1, 1])]).unwrap();
        assert!(matches!(
            f.extract_coeff(0, 1),
            Err(GfError::NegativeExponent(_))
        ));
        assert_eq!(f.extract_coeff(1, 2), Err(GfError::UnsupportedPower(2)));
    }

    #[test]
    fn canonical_cancellation_and_idempotence() {
        let v = vars(1);
        let t1 = SimpleTerm::new(BigInt::one(), m(&[1]), vec![m(&[1])]).unwrap();
        let t2 = SimpleTerm::new(-BigInt::one(), m(&[1]), vec![m(&[1])]).unwrap();
        assert!(RationalGF::from_terms(v.clone(), vec![t1, t2])
            .unwrap()
            .is_zero());

        let sq = RationalGF::simple(v.clone(), m(&[0]), vec![m(&[1]), m(&[1])]).unwrap();
        assert_eq!(sq.to_string(), "+ 1 / (1 - x1)^2\n");
        assert_eq!(sq.clone().canonicalize(), sq);
    }

    #[test]
    fn text_round_trip() {
        let v = vars(3);
        let f = RationalGF::from_terms(
            v.clone(),
            vec![
                SimpleTerm::new(
                    BigInt::from(-3),
                    m(&[2, 0, 1]),
                    vec![m(&[1, 0, 0]), m(&[1, -1, 2])],
                )
                .unwrap(),
                SimpleTerm::new(BigInt::one(), m(&[0, 0, 0]), vec![]).unwrap(),
                SimpleTerm::new(BigInt::from(5), m(&[0, 0, 0]), vec![m(&[0, 1, 0])]).unwrap(),
            ],
        )
        .unwrap();
        let text = f.to_string();
        let g = RationalGF::parse(&text, v.clone()).unwrap();
        assert_eq!(g, f);
        assert_eq!(g.to_string(), text);
        assert!(RationalGF::parse("0", v.clone()).unwrap().is_zero());
        assert!(RationalGF::parse("+ x1 / (1 - 1)", v.clone()).is_err());
        assert!(RationalGF::parse("+ y", v).is_err());
    }
}
