//! Automatic computation of full generating functions by Elliott reduction.
//!
//! Homogeneous systems are reduced on their first nonbasic constraint
//! `c_1` until no nonbasic constraints remain. Inhomogeneous systems are
//! homogenized first and the coefficient of `x_0^1` is extracted at the end.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::gfalg::{GfError, Monomial, RationalGF};
use crate::system::{Basic, ConstraintSystem, Relation, VarId, VarTable};

/// Default cap on reduction steps.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_STEP_BUDGET`].
pub const STEP_BUDGET_ENV: &str = "GGF_STEP_BUDGET";

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("step budget of {0} reduction steps exhausted")]
    BudgetExhausted(u64),
    #[error("termination measure did not decrease: {parent:?} -> {child:?}")]
    MeasureNotDecreasing {
        parent: Box<ReductionMeasure>,
        child: Box<ReductionMeasure>,
    },
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// `(r, M, e_max, |m|, e_min)` of the first nonbasic constraint, compared
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReductionMeasure {
    pub r: usize,
    pub max: BigInt,
    pub e_max: usize,
    pub min_abs: BigInt,
    pub e_min: usize,
}

/// Which reduction applies to `c_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElliottCase {
    /// No nonbasic constraints.
    Empty,
    /// All coefficients nonnegative: `c_1` is redundant.
    Redundant,
    /// All coefficients nonpositive: these variables are forced to zero.
    ForceZero { vars: Vec<VarId> },
    /// Split on `[λ_i ≥ λ_j]`, `i` carrying the most negative and `j` the
    /// most positive coefficient (lowest index on ties).
    Split { i: VarId, j: VarId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub case: ElliottCase,
    pub before: ReductionMeasure,
    /// Measures of the child problems, in branch order.
    pub after: Vec<ReductionMeasure>,
}

/// Counters from one solve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub steps: u64,
    pub measure_checks: u64,
    pub memo_hits: u64,
}

/// Solver configuration.
#[derive(Debug, Clone)]
pub struct Solver {
    pub budget: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            budget: DEFAULT_STEP_BUDGET,
        }
    }
}

impl Solver {
    /// Budget from `GGF_STEP_BUDGET` when set and valid, else the default.
    pub fn from_env() -> Self {
        let budget = std::env::var(STEP_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_STEP_BUDGET);
        Solver { budget }
    }

    pub fn with_budget(budget: u64) -> Self {
        Solver { budget }
    }

    pub fn solve(&self, s: &ConstraintSystem) -> Result<RationalGF, SolveError> {
        self.solve_with_stats(s).map(|(f, _)| f)
    }

    pub fn solve_with_stats(
        &self,
        s: &ConstraintSystem,
    ) -> Result<(RationalGF, SolveStats), SolveError> {
        if s.is_homogeneous() {
            return self.solve_homogeneous(s);
        }
        let (h, v0) = s.homogenize();
        let (f, stats) = self.solve_homogeneous(&h)?;
        let f = f.extract_coeff(v0, 1)?.with_vars(s.vars().clone())?;
        Ok((f, stats))
    }

    fn solve_homogeneous(
        &self,
        s: &ConstraintSystem,
    ) -> Result<(RationalGF, SolveStats), SolveError> {
        let p = Problem::from_system(s);
        let mut ctx = Ctx {
            vars: s.vars().clone(),
            budget: self.budget,
            stats: SolveStats::default(),
            memo: HashMap::new(),
        };
        let f = ctx.reduce(p)?;
        Ok((f, ctx.stats))
    }
}

/// [`Solver::solve`] with the budget taken from the environment.
pub fn solve(s: &ConstraintSystem) -> Result<RationalGF, SolveError> {
    Solver::from_env().solve(s)
}

/// Homogeneous `rows·λ ≥ 0` plus basics, with every `λ = 0` column zeroed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Problem {
    rows: Vec<Vec<BigInt>>,
    basics: Vec<Basic>,
}

impl Problem {
    /// Equalities become two opposite inequalities.
    fn from_system(s: &ConstraintSystem) -> Problem {
        let mut rows = Vec::new();
        for c in s.nonbasic() {
            debug_assert!(c.constant.is_zero());
            rows.push(c.coeffs.clone());
            if c.relation == Relation::Eq {
                rows.push(c.coeffs.iter().map(|x| -x).collect());
            }
        }
        let mut p = Problem {
            rows,
            basics: s.basics().to_vec(),
        };
        for v in 0..p.basics.len() {
            if p.basics[v] == Basic::Zero {
                p.zero_column(v);
            }
        }
        p.simplify();
        p
    }

    fn zero_column(&mut self, v: VarId) {
        for row in &mut self.rows {
            row[v] = BigInt::zero();
        }
    }

    /// Divides rows by their gcd and drops rows that are trivially true
    /// (all coefficients nonnegative) or repeat an earlier row. Row order
    /// is kept, so `c_1` only changes when it is dropped.
    fn simplify(&mut self) {
        let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows.len());
        for mut row in std::mem::take(&mut self.rows) {
            if row.iter().all(|c| !c.is_negative()) {
                continue;
            }
            let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            if !g.is_one() {
                for c in &mut row {
                    *c /= &g;
                }
            }
            if !out.contains(&row) {
                out.push(row);
            }
        }
        self.rows = out;
    }

    fn measure(&self) -> ReductionMeasure {
        let r = self.rows.len();
        let Some(c1) = self.rows.first() else {
            return ReductionMeasure {
                r,
                max: BigInt::zero(),
                e_max: 0,
                min_abs: BigInt::zero(),
                e_min: 0,
            };
        };
        let max = c1
            .iter()
            .filter(|c| c.is_positive())
            .max()
            .cloned()
            .unwrap_or_default();
        let min = c1
            .iter()
            .filter(|c| c.is_negative())
            .min()
            .cloned()
            .unwrap_or_default();
        let e_max = if max.is_zero() {
            0
        } else {
            c1.iter().filter(|c| **c == max).count()
        };
        let e_min = if min.is_zero() {
            0
        } else {
            c1.iter().filter(|c| **c == min).count()
        };
        ReductionMeasure {
            r,
            max,
            e_max,
            min_abs: min.abs(),
            e_min,
        }
    }

    fn case(&self) -> ElliottCase {
        let Some(c1) = self.rows.first() else {
            return ElliottCase::Empty;
        };
        let max = c1.iter().max().expect("nonempty row");
        let min = c1.iter().min().expect("nonempty row");
        if !min.is_negative() {
            return ElliottCase::Redundant;
        }
        if !max.is_positive() {
            return ElliottCase::ForceZero {
                vars: (0..c1.len()).filter(|&v| c1[v].is_negative()).collect(),
            };
        }
        let i = c1.iter().position(|c| c == min).expect("min is attained");
        let j = c1.iter().position(|c| c == max).expect("max is attained");
        ElliottCase::Split { i, j }
    }

    /// Replace `λ_i` by `λ_i + λ_j` in every row (`a = 1`, so the basic of
    /// `λ_i` needs no image).
    fn shift(&self, i: VarId, j: VarId) -> Problem {
        let mut p = self.clone();
        for row in &mut p.rows {
            let d = row[i].clone();
            row[j] += d;
        }
        p
    }

    /// The child problems of one reduction step, with the generating-function
    /// recombination they need.
    fn children(&self) -> (ElliottCase, Vec<(Problem, Combine)>) {
        let case = self.case();
        let children = match &case {
            ElliottCase::Empty => Vec::new(),
            ElliottCase::Redundant => {
                let mut p = self.clone();
                p.rows.remove(0);
                p.simplify();
                vec![(p, Combine::Plus(None))]
            }
            ElliottCase::ForceZero { vars } => {
                let mut p = self.clone();
                for &v in vars {
                    p.basics[v] = Basic::Zero;
                    p.zero_column(v);
                }
                p.simplify();
                vec![(p, Combine::Plus(None))]
            }
            ElliottCase::Split { i, j } => {
                let (i, j) = (*i, *j);
                // [λ_i ≥ λ_j], then λ_i ← λ_i + λ_j
                let mut a = self.shift(i, j);
                a.simplify();
                // [λ_j > λ_i], then λ_j ← λ_j + λ_i leaves [λ_j ≥ 1];
                // guideline 5 on it gives F(λ_j ≥ 0) − F(λ_j = 0)
                let mut b = self.shift(j, i);
                let mut b0 = b.clone();
                b0.basics[j] = Basic::Zero;
                b0.zero_column(j);
                b.simplify();
                b0.simplify();
                vec![
                    (a, Combine::Plus(Some((j, i)))),
                    (b, Combine::Plus(Some((i, j)))),
                    (b0, Combine::Minus(Some((i, j)))),
                ]
            }
        };
        (case, children)
    }
}

/// How a child's GF enters the parent's: sign and optional post-substitution
/// `x_a ← x_a x_b`.
#[derive(Debug, Clone, Copy)]
enum Combine {
    Plus(Option<(VarId, VarId)>),
    Minus(Option<(VarId, VarId)>),
}

struct Ctx {
    vars: Arc<VarTable>,
    budget: u64,
    stats: SolveStats,
    memo: HashMap<Problem, RationalGF>,
}

impl Ctx {
    fn reduce(&mut self, p: Problem) -> Result<RationalGF, SolveError> {
        if let Some(f) = self.memo.get(&p) {
            self.stats.memo_hits += 1;
            return Ok(f.clone());
        }
        self.stats.steps += 1;
        if self.stats.steps > self.budget {
            return Err(SolveError::BudgetExhausted(self.budget));
        }
        let n = self.vars.len();
        let (case, children) = p.children();
        let f = if case == ElliottCase::Empty {
            let den: Vec<Monomial> = (0..n)
                .filter(|&v| p.basics[v] == Basic::NonNeg)
                .map(|v| Monomial::var(n, v))
                .collect();
            RationalGF::simple(self.vars.clone(), Monomial::unit(n), den)?
        } else {
            let parent = p.measure();
            let mut acc = RationalGF::zero(self.vars.clone());
            for (child, how) in children {
                let child_m = child.measure();
                self.stats.measure_checks += 1;
                if child_m.cmp(&parent) != Ordering::Less {
                    return Err(SolveError::MeasureNotDecreasing {
                        parent: Box::new(parent),
                        child: Box::new(child_m),
                    });
                }
                let g = self.reduce(child)?;
                acc = match how {
                    Combine::Plus(sub) => acc.add(&post(&g, sub)?)?,
                    Combine::Minus(sub) => acc.sub(&post(&g, sub)?)?,
                };
            }
            acc
        };
        self.memo.insert(p, f.clone());
        Ok(f)
    }
}

fn post(g: &RationalGF, sub: Option<(VarId, VarId)>) -> Result<RationalGF, GfError> {
    match sub {
        None => Ok(g.clone()),
        Some((a, b)) => g.substitute(a, b, 1),
    }
}

/// Case analysis of the first reduction step on a homogeneous system,
/// with the measures before and after.
pub fn elliott_case(s: &ConstraintSystem) -> CaseReport {
    let p = Problem::from_system(s);
    let (case, children) = p.children();
    CaseReport {
        case,
        before: p.measure(),
        after: children.iter().map(|(c, _)| c.measure()).collect(),
    }
}

/// Case analysis on `c_1` exactly as given (no simplification of the
/// system beforehand), for inspecting single constraints.
pub fn classify_first(s: &ConstraintSystem) -> ElliottCase {
    let p = Problem {
        rows: s.nonbasic().iter().map(|c| c.coeffs.clone()).collect(),
        basics: s.basics().to_vec(),
    };
    p.case()
}

/// For a homogeneous system of exactly `n` inequalities whose coefficient
/// matrix `C` has an inverse `B` with nonnegative integer entries, the
/// generating function is `∏_j 1/(1 − ∏_i x_i^{b_ij})`. Returns `None`
/// whenever that does not apply.
pub fn cmatrix_fast_path(s: &ConstraintSystem) -> Option<RationalGF> {
    let n = s.num_vars();
    if s.nonbasic().len() != n
        || !s.is_homogeneous()
        || s.basics().contains(&Basic::Zero)
        || s.nonbasic().iter().any(|c| c.relation != Relation::Geq)
    {
        return None;
    }
    let c: Vec<Vec<BigRational>> = s
        .nonbasic()
        .iter()
        .map(|row| {
            row.coeffs
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let b = invert(c)?;
    let mut den = Vec::with_capacity(n);
    for j in 0..n {
        let mut exps = Vec::with_capacity(n);
        for row in &b {
            let e = &row[j];
            if !e.is_integer() || e.is_negative() {
                return None;
            }
            exps.push(e.to_integer().to_i64()?);
        }
        den.push(Monomial::new(exps));
    }
    RationalGF::simple(s.vars().clone(), Monomial::unit(n), den).ok()
}

/// Gauss–Jordan inverse over the rationals.
fn invert(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for k in 0..n {
            a[col][k] = &a[col][k] / &p;
            inv[col][k] = &inv[col][k] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for k in 0..n {
                let d = &f * &a[col][k];
                a[r][k] -= d;
                let d = &f * &inv[col][k];
                inv[r][k] -= d;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{specialize, SpecializationMap};
    use crate::system::Constraint;

    fn sys(n: usize, rows: &[(&[i64], i64)]) -> ConstraintSystem {
        let v = Arc::new(VarTable::numbered("x", n));
        let cs = rows
            .iter()
            .map(|(c, k)| Constraint::geq(c.iter().copied(), *k))
            .collect();
        ConstraintSystem::new(v, cs).unwrap()
    }

    fn series(f: &RationalGF, n: usize) -> Vec<i64> {
        let s = specialize(f, &SpecializationMap::all_q(f.vars().len()), n).unwrap();
        s.q_coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn basics_only() {
        let f = solve(&sys(2, &[])).unwrap();
        assert_eq!(f.to_string(), "+ 1 / (1 - x2) (1 - x1)\n");
    }

    #[test]
    fn two_part_partitions() {
        let f = solve(&sys(2, &[(&[1, -1], 0)])).unwrap();
        assert_eq!(series(&f, 9), vec![1, 1, 2, 2, 3, 3, 4, 4, 5, 5]);
    }

    #[test]
    fn anti_lecture_hall_two() {
        let f = solve(&sys(2, &[(&[2, -1], 0)])).unwrap();
        // (1+q)(1+q^2)/((1-q^2)(1-q^3))
        assert_eq!(series(&f, 7), vec![1, 1, 2, 3, 3, 4, 5, 5]);
        assert!(f.is_corollary_form());
    }

    #[test]
    fn inhomogeneous_threshold() {
        let f = solve(&sys(1, &[(&[1], -3)])).unwrap();
        assert_eq!(f.to_string(), "+ x1^3 / (1 - x1)\n");
    }

    #[test]
    fn cases() {
        assert_eq!(
            classify_first(&sys(2, &[(&[1, 1], 0)])),
            ElliottCase::Redundant
        );
        assert_eq!(
            classify_first(&sys(2, &[(&[-1, -2], 0)])),
            ElliottCase::ForceZero { vars: vec![0, 1] }
        );
        assert_eq!(
            classify_first(&sys(2, &[(&[2, -1], 0)])),
            ElliottCase::Split { i: 1, j: 0 }
        );
        let rep = elliott_case(&sys(2, &[(&[2, -1], 0)]));
        assert!(rep.after.iter().all(|m| *m < rep.before));
    }

    #[test]
    fn fast_path() {
        let f = cmatrix_fast_path(&sys(2, &[(&[1, -1], 0), (&[0, 1], 0)])).unwrap();
        assert_eq!(f.to_string(), "+ 1 / (1 - x1) (1 - x1*x2)\n");
        assert!(cmatrix_fast_path(&sys(2, &[(&[2, -1], 0), (&[0, 1], 0)])).is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let s = sys(3, &[(&[3, -2, -1], 0), (&[-1, 3, -2], 0)]);
        assert!(matches!(
            Solver::with_budget(3).solve(&s),
            Err(SolveError::BudgetExhausted(3))
        ));
    }
}
