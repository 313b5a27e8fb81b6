//! Constraint systems over nonnegative integer variables.
//!
//! A [`ConstraintSystem`] holds an ordered list of nonbasic constraints
//! `a_0 + a_1 λ_1 + … + a_n λ_n (≥|=) 0` with integer coefficients, plus one
//! basic constraint per variable (`λ_i ≥ 0` or `λ_i = 0`). Every constraint
//! is kept in normalized form: integral, with the gcd of its coefficients
//! and constant equal to one.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type VarId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable table is empty")]
    EmptyVarTable,
    #[error("coefficient vector has length {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("negation is only defined for `>=` constraints")]
    NegateEquality,
    #[error("substitution needs two distinct variables (got {0} twice)")]
    SameVariable(VarId),
    #[error("variable index {0} out of range")]
    VarOutOfRange(VarId),
    #[error("zero denominator in a rational coefficient")]
    ZeroDenominator,
}

/// Ordered, duplicate-free variable names. Exponent vectors index into it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<I, S>(names: I) -> Result<Self, SystemError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (k, name) in names.iter().enumerate() {
            if names[..k].contains(name) {
                return Err(SystemError::DuplicateVariable(name.clone()));
            }
        }
        Ok(VarTable { names })
    }

    /// `prefix1 … prefixn`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        VarTable {
            names: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn lookup(&self, name: &str) -> Result<VarId, SystemError> {
        self.index_of(name)
            .ok_or_else(|| SystemError::UnknownVariable(name.to_string()))
    }

    /// Table with `name` appended, renamed with trailing `_` until unique.
    pub fn with_fresh(&self, name: &str) -> (VarTable, VarId) {
        let mut fresh = name.to_string();
        while self.names.contains(&fresh) {
            fresh.push('_');
        }
        let mut names = self.names.clone();
        names.push(fresh);
        let id = names.len() - 1;
        (VarTable { names }, id)
    }

    pub fn without(&self, v: VarId) -> VarTable {
        let mut names = self.names.clone();
        names.remove(v);
        VarTable { names }
    }

    pub fn subset(&self, vars: &[VarId]) -> VarTable {
        VarTable {
            names: vars.iter().map(|&v| self.names[v].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Geq,
    Eq,
}

/// Basic constraint of a single variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basic {
    /// `λ_i ≥ 0`
    NonNeg,
    /// `λ_i = 0`
    Zero,
}

/// `constant + Σ coeffs[i]·λ_i (≥|=) 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub coeffs: Vec<BigInt>,
    pub constant: BigInt,
    pub relation: Relation,
}

impl Constraint {
    /// Builds and normalizes.
    pub fn new(coeffs: Vec<BigInt>, constant: BigInt, relation: Relation) -> Self {
        let mut c = Constraint {
            coeffs,
            constant,
            relation,
        };
        c.normalize_in_place();
        c
    }

    pub fn geq<I: IntoIterator<Item = i64>>(coeffs: I, constant: i64) -> Self {
        Self::new(
            coeffs.into_iter().map(BigInt::from).collect(),
            BigInt::from(constant),
            Relation::Geq,
        )
    }

    pub fn eq<I: IntoIterator<Item = i64>>(coeffs: I, constant: i64) -> Self {
        Self::new(
            coeffs.into_iter().map(BigInt::from).collect(),
            BigInt::from(constant),
            Relation::Eq,
        )
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }

    /// Single variable with positive coefficient and constant 0, i.e. `λ_i ≥ 0`
    /// (or `λ_i = 0` for equalities) after normalization.
    pub fn as_basic(&self) -> Option<(VarId, Basic)> {
        if !self.constant.is_zero() {
            return None;
        }
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (v, c) = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        match self.relation {
            Relation::Geq if c.is_positive() => Some((v, Basic::NonNeg)),
            // -λ ≥ 0 together with λ ≥ 0
            Relation::Geq => Some((v, Basic::Zero)),
            Relation::Eq => Some((v, Basic::Zero)),
        }
    }

    /// GEQ: divide the coefficients by their gcd `g` and floor the constant
    /// (`a·λ ≥ -a_0` ⇔ `(a/g)·λ ≥ ⌈-a_0/g⌉` over the integers).
    /// EQ: divide everything by the common gcd and make the leading
    /// coefficient positive.
    fn normalize_in_place(&mut self) {
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        match self.relation {
            Relation::Geq => {
                if g.is_zero() {
                    self.constant = if self.constant.is_negative() {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    };
                    return;
                }
                if !g.is_one() {
                    for c in &mut self.coeffs {
                        *c /= &g;
                    }
                    self.constant = self.constant.div_floor(&g);
                }
            }
            Relation::Eq => {
                let g = g.gcd(&self.constant);
                if g.is_zero() {
                    return;
                }
                if !g.is_one() {
                    for c in &mut self.coeffs {
                        *c /= &g;
                    }
                    self.constant /= &g;
                }
                let lead_negative = self
                    .coeffs
                    .iter()
                    .find(|c| !c.is_zero())
                    .map_or(self.constant.is_negative(), |c| c.is_negative());
                if lead_negative {
                    for c in &mut self.coeffs {
                        *c = -&*c;
                    }
                    self.constant = -&self.constant;
                }
            }
        }
    }

    /// Value of `constant + coeffs·point`.
    pub fn value(&self, point: &[i64]) -> BigInt {
        self.coeffs
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (c, &p)| acc + c * p)
    }

    pub fn holds(&self, point: &[i64]) -> bool {
        let v = self.value(point);
        match self.relation {
            Relation::Geq => !v.is_negative(),
            Relation::Eq => v.is_zero(),
        }
    }

    /// `¬[a_0 + a·λ ≥ 0]` is `[-a_0 - a·λ - 1 ≥ 0]`.
    pub fn negate(&self) -> Result<Constraint, SystemError> {
        if self.relation != Relation::Geq {
            return Err(SystemError::NegateEquality);
        }
        Ok(Constraint::new(
            self.coeffs.iter().map(|c| -c).collect(),
            -&self.constant - 1,
            Relation::Geq,
        ))
    }

    /// Replace `λ_i` by `λ_i + a·λ_j`: the coefficient of `λ_j` gains `a·coeff_i`.
    pub fn substituted(&self, i: VarId, a: &BigInt, j: VarId) -> Constraint {
        let mut coeffs = self.coeffs.clone();
        let delta = a * &coeffs[i];
        coeffs[j] += delta;
        Constraint::new(coeffs, self.constant.clone(), self.relation)
    }

    /// Same constraint over `n + 1` variables, the constant moved onto the new one.
    fn homogenized(&self) -> Constraint {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(self.constant.clone());
        Constraint::new(coeffs, BigInt::zero(), self.relation)
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> ConstraintDisplay<'a> {
        ConstraintDisplay { c: self, vars }
    }
}

pub struct ConstraintDisplay<'a> {
    c: &'a Constraint,
    vars: &'a VarTable,
}

impl fmt::Display for ConstraintDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.c.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{}", self.vars.name(v))?;
            } else {
                write!(f, "{mag}*{}", self.vars.name(v))?;
            }
            first = false;
        }
        let k = &self.c.constant;
        if first {
            write!(f, "{k}")?;
        } else if !k.is_zero() {
            let sign = if k.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", k.abs())?;
        }
        let rel = match self.c.relation {
            Relation::Geq => ">=",
            Relation::Eq => "=",
        };
        write!(f, " {rel} 0")
    }
}

/// User-facing relation before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawRelation {
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
}

/// `constant + Σ coeffs[i]·λ_i REL 0` with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConstraint {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub relation: RawRelation,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintSystem {
    vars: Arc<VarTable>,
    nonbasic: Vec<Constraint>,
    basic: Vec<Basic>,
}

impl ConstraintSystem {
    /// System with the given nonbasic constraints and `λ_i ≥ 0` for every variable.
    pub fn new(vars: Arc<VarTable>, nonbasic: Vec<Constraint>) -> Result<Self, SystemError> {
        let basic = vec![Basic::NonNeg; vars.len()];
        Self::with_basics(vars, nonbasic, basic)
    }

    pub fn with_basics(
        vars: Arc<VarTable>,
        nonbasic: Vec<Constraint>,
        basic: Vec<Basic>,
    ) -> Result<Self, SystemError> {
        let n = vars.len();
        if basic.len() != n {
            return Err(SystemError::Arity {
                expected: n,
                got: basic.len(),
            });
        }
        for c in &nonbasic {
            if c.arity() != n {
                return Err(SystemError::Arity {
                    expected: n,
                    got: c.arity(),
                });
            }
        }
        Ok(ConstraintSystem {
            vars,
            nonbasic,
            basic,
        })
    }

    pub fn basics_only(vars: Arc<VarTable>) -> Self {
        let n = vars.len();
        ConstraintSystem {
            vars,
            nonbasic: Vec::new(),
            basic: vec![Basic::NonNeg; n],
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn nonbasic(&self) -> &[Constraint] {
        &self.nonbasic
    }

    pub fn basics(&self) -> &[Basic] {
        &self.basic
    }

    pub fn basic(&self, v: VarId) -> Basic {
        self.basic[v]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.nonbasic.iter().all(Constraint::is_homogeneous)
    }

    /// Basic constraint of `v` as an ordinary constraint.
    pub fn basic_constraint(&self, v: VarId) -> Constraint {
        let mut coeffs = vec![BigInt::zero(); self.num_vars()];
        coeffs[v] = BigInt::one();
        let rel = match self.basic[v] {
            Basic::NonNeg => Relation::Geq,
            Basic::Zero => Relation::Eq,
        };
        Constraint::new(coeffs, BigInt::zero(), rel)
    }

    /// All constraints, basics included.
    pub fn all_constraints(&self) -> Vec<Constraint> {
        let mut all = self.nonbasic.clone();
        all.extend((0..self.num_vars()).map(|v| self.basic_constraint(v)));
        all
    }

    /// Point membership; `point` must be nonnegative to be a solution.
    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.num_vars()
            && point.iter().all(|&p| p >= 0)
            && self
                .basic
                .iter()
                .zip(point)
                .all(|(b, &p)| *b == Basic::NonNeg || p == 0)
            && self.nonbasic.iter().all(|c| c.holds(point))
    }

    /// Appends a nonbasic constraint (a basic-shaped one updates the basic instead).
    pub fn with_constraint(&self, c: Constraint) -> Result<ConstraintSystem, SystemError> {
        if c.arity() != self.num_vars() {
            return Err(SystemError::Arity {
                expected: self.num_vars(),
                got: c.arity(),
            });
        }
        let mut next = self.clone();
        match c.as_basic() {
            Some((_, Basic::NonNeg)) => {}
            Some((v, Basic::Zero)) => next.basic[v] = Basic::Zero,
            None => next.nonbasic.push(c),
        }
        Ok(next)
    }

    pub fn without_nonbasic(&self, idx: usize) -> ConstraintSystem {
        let mut next = self.clone();
        next.nonbasic.remove(idx);
        next
    }

    pub fn with_basic(&self, v: VarId, b: Basic) -> ConstraintSystem {
        let mut next = self.clone();
        next.basic[v] = b;
        next
    }

    pub fn position(&self, c: &Constraint) -> Option<usize> {
        self.nonbasic.iter().position(|d| d == c)
    }

    /// `S_{λ_i ← λ_i + aλ_j}`: in every nonbasic constraint the coefficient of
    /// `λ_j` becomes `coeff_j + a·coeff_i`. Basics stay as they are; when
    /// `a < 0` the image of `λ_i ≥ 0`, namely `λ_i + aλ_j ≥ 0`, is no longer
    /// implied by the basics and is appended as a nonbasic constraint.
    pub fn substitute(
        &self,
        i: VarId,
        a: &BigInt,
        j: VarId,
    ) -> Result<ConstraintSystem, SystemError> {
        let n = self.num_vars();
        if i >= n {
            return Err(SystemError::VarOutOfRange(i));
        }
        if j >= n {
            return Err(SystemError::VarOutOfRange(j));
        }
        if i == j {
            return Err(SystemError::SameVariable(i));
        }
        if a.is_zero() {
            return Ok(self.clone());
        }
        let mut next = self.clone();
        next.nonbasic = self
            .nonbasic
            .iter()
            .map(|c| c.substituted(i, a, j))
            .collect();
        if a.is_negative() || self.basic[i] == Basic::Zero {
            let image = self.basic_constraint(i).substituted(i, a, j);
            next.basic[i] = Basic::NonNeg;
            return next.with_constraint(image);
        }
        Ok(next)
    }

    /// Moves every constant onto a fresh variable `λ_0` (appended last).
    /// Solutions of `self` are the solutions of the result with `λ_0 = 1`.
    pub fn homogenize(&self) -> (ConstraintSystem, VarId) {
        let (vars, v0) = self.vars.with_fresh("lambda0");
        let nonbasic = self.nonbasic.iter().map(Constraint::homogenized).collect();
        let mut basic = self.basic.clone();
        basic.push(Basic::NonNeg);
        (
            ConstraintSystem {
                vars: Arc::new(vars),
                nonbasic,
                basic,
            },
            v0,
        )
    }

    /// Same constraints over a variable table with identical arity (renaming).
    pub fn with_vars(&self, vars: Arc<VarTable>) -> Result<ConstraintSystem, SystemError> {
        if vars.len() != self.num_vars() {
            return Err(SystemError::Arity {
                expected: self.num_vars(),
                got: vars.len(),
            });
        }
        let mut next = self.clone();
        next.vars = vars;
        Ok(next)
    }
}

impl fmt::Display for ConstraintSystem {
    /// Constraint-file text: parsing it back yields an identical system.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.names().join(" "))?;
        for c in &self.nonbasic {
            writeln!(f, "{}", c.display(&self.vars))?;
        }
        for (v, b) in self.basic.iter().enumerate() {
            if *b == Basic::Zero {
                writeln!(f, "{} = 0", self.vars.name(v))?;
            }
        }
        Ok(())
    }
}

fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a BigRational>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

impl RawConstraint {
    /// Clears denominators and rewrites the relation as `>= 0` or `= 0`.
    pub fn to_constraint(&self) -> Constraint {
        let scale = lcm_of_denominators(self.coeffs.iter().chain(std::iter::once(&self.constant)));
        let scale = BigRational::from_integer(scale);
        let to_int = |r: &BigRational| (r * &scale).to_integer();
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().map(to_int).collect();
        let mut constant = to_int(&self.constant);
        let relation = match self.relation {
            RawRelation::Ge => Relation::Geq,
            RawRelation::Eq => Relation::Eq,
            RawRelation::Gt => {
                constant -= 1;
                Relation::Geq
            }
            RawRelation::Le | RawRelation::Lt => {
                for c in &mut coeffs {
                    *c = -&*c;
                }
                constant = -constant;
                if self.relation == RawRelation::Lt {
                    constant -= 1;
                }
                Relation::Geq
            }
        };
        Constraint::new(coeffs, constant, relation)
    }
}

/// Turns rational user constraints into a normalized [`ConstraintSystem`].
///
/// Each constraint is scaled by the lcm of its denominators; `≤`/`<` are
/// flipped; `e > 0` becomes `e - 1 ≥ 0`. A single-variable `λ_i = 0` (or
/// `λ_i ≤ 0`) sets that variable's basic to `λ_i = 0`; a bare `λ_i ≥ 0` is
/// absorbed by the basic already present.
pub fn normalize(
    raw: &[RawConstraint],
    vars: Arc<VarTable>,
) -> Result<ConstraintSystem, SystemError> {
    let n = vars.len();
    let mut nonbasic = Vec::new();
    let mut basic = vec![Basic::NonNeg; n];
    for rc in raw {
        if rc.coeffs.len() != n {
            return Err(SystemError::Arity {
                expected: n,
                got: rc.coeffs.len(),
            });
        }
        let c = rc.to_constraint();
        match c.as_basic() {
            Some((_, Basic::NonNeg)) => {}
            Some((v, Basic::Zero)) => basic[v] = Basic::Zero,
            None => {
                if !nonbasic.contains(&c) {
                    nonbasic.push(c)
                }
            }
        }
    }
    ConstraintSystem::with_basics(vars, nonbasic, basic)
}
