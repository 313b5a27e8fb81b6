//! Exact Fourier–Motzkin elimination over the rationals.
//!
//! Rows are integer vectors read as `constant + coeffs·λ ≥ 0`; every
//! combination of integer rows with positive integer multipliers is again
//! integral, so no fractions appear until the witness is built.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::system::{Basic, Constraint, ConstraintSystem, Relation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImplicationStatus {
    /// `S ∪ {¬c}` is infeasible over the rationals.
    Implied,
    /// No contradiction found; `c` may still be implied over the integers.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationResult {
    pub status: ImplicationStatus,
    /// For `Unknown`, a rational point of `S ∪ {¬c}`.
    pub witness: Option<Vec<BigRational>>,
}

impl ImplicationResult {
    pub fn is_implied(&self) -> bool {
        self.status == ImplicationStatus::Implied
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    coeffs: Vec<BigInt>,
    constant: BigInt,
}

impl Row {
    fn from_geq(coeffs: &[BigInt], constant: &BigInt) -> Row {
        let mut r = Row {
            coeffs: coeffs.to_vec(),
            constant: constant.clone(),
        };
        r.reduce();
        r
    }

    /// Divides by the gcd of all entries (a positive rational scaling).
    fn reduce(&mut self) {
        let g = self
            .coeffs
            .iter()
            .fold(self.constant.clone(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.constant /= &g;
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `λ_v + k ≥ 0` for a single `v`. It carries `λ_v ≥ 0` once the two
    /// rows are merged, and pruning relies on that, so it is never pruned.
    fn is_unit(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
            && self.coeffs.iter().any(One::is_one)
    }

    /// Given `λ ≥ 0`, `other ≥ 0` implies `self ≥ 0` when every entry of
    /// `self` is at least the matching entry of `other`.
    fn dominates_implied_by(&self, other: &Row) -> bool {
        self.constant >= other.constant
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a >= b)
    }
}

/// Rows for `S` (basics included, `λ = 0` as two rows, equalities split).
fn system_rows(s: &ConstraintSystem) -> Vec<Row> {
    let mut rows = Vec::new();
    let mut push = |c: &Constraint| {
        rows.push(Row::from_geq(&c.coeffs, &c.constant));
        if c.relation == Relation::Eq {
            let neg: Vec<BigInt> = c.coeffs.iter().map(|x| -x).collect();
            rows.push(Row::from_geq(&neg, &-&c.constant));
        }
    };
    for c in s.nonbasic() {
        push(c);
    }
    for v in 0..s.num_vars() {
        let mut unit = vec![BigInt::zero(); s.num_vars()];
        unit[v] = BigInt::one();
        push(&Constraint {
            coeffs: unit,
            constant: BigInt::zero(),
            relation: match s.basic(v) {
                Basic::NonNeg => Relation::Geq,
                Basic::Zero => Relation::Eq,
            },
        });
    }
    rows
}

/// Keeps the tightest constant per coefficient vector and drops rows
/// dominated by another one. Returns `None` on a contradiction `c ≥ 0`
/// with `c < 0`.
fn tidy(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
    for r in rows {
        if r.is_trivial() {
            if r.constant.is_negative() {
                return None;
            }
            continue;
        }
        best.entry(r.coeffs)
            .and_modify(|c| {
                if r.constant < *c {
                    *c = r.constant.clone();
                }
            })
            .or_insert(r.constant);
    }
    let rows: Vec<Row> = best
        .into_iter()
        .map(|(coeffs, constant)| Row { coeffs, constant })
        .collect();
    let keep: Vec<bool> = rows
        .iter()
        .enumerate()
        .map(|(a, ra)| {
            ra.is_unit()
                || !rows
                    .iter()
                    .enumerate()
                    .any(|(b, rb)| a != b && ra.dominates_implied_by(rb))
        })
        .collect();
    Some(
        rows.into_iter()
            .zip(keep)
            .filter_map(|(r, k)| k.then_some(r))
            .collect(),
    )
}

/// Eliminates `v` from `rows`.
fn eliminate(rows: &[Row], v: usize) -> Vec<Row> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for r in rows {
        match r.coeffs[v].sign() {
            num_bigint::Sign::NoSign => out.push(r.clone()),
            num_bigint::Sign::Plus => pos.push(r),
            num_bigint::Sign::Minus => neg.push(r),
        }
    }
    for p in &pos {
        for q in &neg {
            let a = -&q.coeffs[v];
            let b = p.coeffs[v].clone();
            let mut r = Row {
                coeffs: p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x * &a + y * &b)
                    .collect(),
                constant: &p.constant * &a + &q.constant * &b,
            };
            r.reduce();
            out.push(r);
        }
    }
    out
}

/// Decides rational feasibility of `rows` over `n` variables; returns a
/// rational point when feasible.
fn feasible_point(rows: Vec<Row>, n: usize) -> Option<Vec<BigRational>> {
    // stages[k] holds the rows before eliminating variable k
    let mut stages = Vec::with_capacity(n);
    let mut cur = tidy(rows)?;
    for v in 0..n {
        stages.push(cur.clone());
        cur = tidy(eliminate(&cur, v))?;
    }
    let mut point = vec![BigRational::zero(); n];
    for v in (0..n).rev() {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for r in &stages[v] {
            let a = &r.coeffs[v];
            if a.is_zero() {
                continue;
            }
            let rest = r.coeffs.iter().zip(&point).skip(v + 1).fold(
                BigRational::from_integer(r.constant.clone()),
                |acc, (c, x)| acc + BigRational::from_integer(c.clone()) * x,
            );
            let bound = -rest / BigRational::from_integer(a.clone());
            if a.is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
        point[v] = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u.min(BigRational::zero()),
            (None, None) => BigRational::zero(),
        };
    }
    Some(point)
}

/// Whether `c` is implied by `s`, certified by rational infeasibility of
/// `s ∪ {¬c}`. An equality is implied when both of its halves are.
pub fn implied(s: &ConstraintSystem, c: &Constraint) -> ImplicationResult {
    if c.relation == Relation::Eq {
        let up = Constraint::new(c.coeffs.clone(), c.constant.clone(), Relation::Geq);
        let down = Constraint::new(
            c.coeffs.iter().map(|x| -x).collect(),
            -&c.constant,
            Relation::Geq,
        );
        let first = implied(s, &up);
        if !first.is_implied() {
            return first;
        }
        return implied(s, &down);
    }
    let negated = c.negate().expect("GEQ constraints can be negated");
    let mut rows = system_rows(s);
    rows.push(Row::from_geq(&negated.coeffs, &negated.constant));
    match feasible_point(rows, s.num_vars()) {
        None => ImplicationResult {
            status: ImplicationStatus::Implied,
            witness: None,
        },
        Some(p) => ImplicationResult {
            status: ImplicationStatus::Unknown,
            witness: Some(p),
        },
    }
}

/// Rational feasibility of the system itself.
pub fn rationally_feasible(s: &ConstraintSystem) -> bool {
    feasible_point(system_rows(s), s.num_vars()).is_some()
}
