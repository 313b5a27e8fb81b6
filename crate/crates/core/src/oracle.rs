//! Ground truth by exhaustive enumeration of nonnegative integer points.
//!
//! The search assigns `λ_1, λ_2, …` in order with the remaining weight as
//! the only bound. A branch is cut only when some constraint is already
//! decided: every unassigned variable has a coefficient of one sign and the
//! partial value is on the wrong side. Every leaf is checked in full.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::series::TruncatedSeries;
use crate::system::{Basic, Constraint, ConstraintSystem, Relation};

/// Solutions grouped by weight, each group lex-sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionSet {
    pub by_weight: BTreeMap<usize, Vec<Vec<i64>>>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.by_weight.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weight(&self, w: usize) -> &[Vec<i64>] {
        self.by_weight.get(&w).map_or(&[], Vec::as_slice)
    }
}

impl fmt::Display for SolutionSet {
    /// `# weight N` headers, one space-separated vector per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, pts) in &self.by_weight {
            writeln!(f, "# weight {w}")?;
            for p in pts {
                let s: Vec<String> = p.iter().map(i64::to_string).collect();
                writeln!(f, "{}", s.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Sign pattern of a constraint's coefficients from position `k` on.
#[derive(Clone, Copy)]
struct Tail {
    all_nonneg: bool,
    all_nonpos: bool,
}

struct Search<'a> {
    s: &'a ConstraintSystem,
    // tails[c][k] describes coefficients k.. of constraint c
    tails: Vec<Vec<Tail>>,
    max_weight: usize,
    point: Vec<i64>,
    partial: Vec<BigInt>,
}

impl<'a> Search<'a> {
    fn new(s: &'a ConstraintSystem, max_weight: usize) -> Self {
        let n = s.num_vars();
        let tails = s
            .nonbasic()
            .iter()
            .map(|c| {
                let mut t = vec![
                    Tail {
                        all_nonneg: true,
                        all_nonpos: true,
                    };
                    n + 1
                ];
                for k in (0..n).rev() {
                    t[k] = Tail {
                        all_nonneg: t[k + 1].all_nonneg && !c.coeffs[k].is_negative(),
                        all_nonpos: t[k + 1].all_nonpos && !c.coeffs[k].is_positive(),
                    };
                }
                t
            })
            .collect();
        Search {
            s,
            tails,
            max_weight,
            point: vec![0; n],
            partial: s.nonbasic().iter().map(|c| c.constant.clone()).collect(),
        }
    }

    /// Whether the constraints are already violated for every completion of
    /// the first `k` assigned variables.
    fn decided_false(&self, k: usize) -> bool {
        self.s.nonbasic().iter().enumerate().any(|(ci, c)| {
            let t = self.tails[ci][k];
            let v = &self.partial[ci];
            match c.relation {
                Relation::Geq => t.all_nonpos && v.is_negative(),
                Relation::Eq => {
                    (t.all_nonpos && v.is_negative()) || (t.all_nonneg && v.is_positive())
                }
            }
        })
    }

    fn run<F: FnMut(&[i64], usize)>(&mut self, k: usize, used: usize, visit: &mut F) {
        if self.decided_false(k) {
            return;
        }
        let n = self.point.len();
        if k == n {
            if self.s.contains(&self.point) {
                visit(&self.point, used);
            }
            return;
        }
        let top = match self.s.basic(k) {
            Basic::Zero => 0,
            Basic::NonNeg => self.max_weight - used,
        };
        for val in 0..=top {
            self.point[k] = val as i64;
            for (ci, c) in self.s.nonbasic().iter().enumerate() {
                if val > 0 {
                    self.partial[ci] += &c.coeffs[k];
                }
            }
            self.run(k + 1, used + val, visit);
        }
        for (ci, c) in self.s.nonbasic().iter().enumerate() {
            self.partial[ci] -= &c.coeffs[k] * BigInt::from(top);
        }
        self.point[k] = 0;
    }
}

fn walk<F: FnMut(&[i64], usize)>(s: &ConstraintSystem, max_weight: usize, mut visit: F) {
    Search::new(s, max_weight).run(0, 0, &mut visit);
}

/// All solutions of weight at most `n`.
pub fn enumerate(s: &ConstraintSystem, n: usize) -> SolutionSet {
    let mut by_weight: BTreeMap<usize, Vec<Vec<i64>>> = BTreeMap::new();
    walk(s, n, |p, w| {
        by_weight.entry(w).or_default().push(p.to_vec())
    });
    for pts in by_weight.values_mut() {
        pts.sort();
        pts.dedup();
    }
    SolutionSet { by_weight }
}

/// Number of solutions of each weight up to `n`.
pub fn count_series(s: &ConstraintSystem, n: usize) -> TruncatedSeries {
    let mut counts = vec![0u64; n + 1];
    walk(s, n, |_, w| counts[w] += 1);
    TruncatedSeries::from_coeffs(n, counts)
}

/// Counts by weight, with the value of `tracked` as the `s`-degree.
pub fn count_bivariate(s: &ConstraintSystem, n: usize, tracked: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(n, n);
    walk(s, n + n, |p, w| {
        let t = p[tracked] as usize;
        let rest = w - t;
        if rest <= n && t <= n {
            let c = out.get(rest, t) + 1;
            out.set(rest, t, c);
        }
    });
    out
}

/// The weight-`n` slice of the solution set, i.e. the monomials of the
/// coefficient of `q^n` in `F(q x_1, …, q x_n)`.
pub fn slice_polynomial(s: &ConstraintSystem, n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    walk(s, n, |p, w| {
        if w == n {
            out.push(p.to_vec());
        }
    });
    out.sort();
    out
}

/// Whether `c` holds on every solution of `s` of weight at most `n`.
pub fn holds_up_to(s: &ConstraintSystem, c: &Constraint, n: usize) -> bool {
    let mut ok = true;
    walk(s, n, |p, _| ok &= c.holds(p));
    ok
}
