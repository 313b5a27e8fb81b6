//! Truncated power series in `q` (and optionally a second variable `s`)
//! with arbitrary-precision integer coefficients.
//!
//! A series carries a box truncation: coefficients of `q^a s^b` are stored
//! for `a ≤ q_trunc`, `b ≤ s_trunc`. Univariate series have `s_trunc = 0`.
//! Binary operations on series with different bounds truncate to the
//! smaller box; [`check_identity`] insists on equal bounds.

pub mod identities;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gfalg::RationalGF;
use crate::system::VarId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("non-positively-graded factor (1 - q^{q}*s^{s}) cannot be expanded")]
    NonPositiveFactor { q: i64, s: i64 },
    #[error("numerator specializes to q^{q}*s^{s}, which has a negative exponent")]
    NegativeNumerator { q: i64, s: i64 },
    #[error("specialization map covers {got} variables, generating function has {expected}")]
    Arity { expected: usize, got: usize },
    #[error("truncation bounds differ: ({0}, {1}) vs ({2}, {3})")]
    MismatchedBounds(usize, usize, usize, usize),
    #[error("series is not invertible over the integers (constant term {0})")]
    NotInvertible(BigInt),
    #[error("q-binomial [{n}; {k}] needs 0 <= k <= n")]
    BinomialRange { n: i64, k: i64 },
    #[error("exponent overflow during specialization")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    q_trunc: usize,
    s_trunc: usize,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(q_trunc: usize, s_trunc: usize) -> Self {
        TruncatedSeries {
            q_trunc,
            s_trunc,
            coeffs: vec![BigInt::zero(); (q_trunc + 1) * (s_trunc + 1)],
        }
    }

    pub fn one(q_trunc: usize, s_trunc: usize) -> Self {
        Self::monomial(q_trunc, s_trunc, 0, 0, BigInt::one())
    }

    /// `c·q^a·s^b`, or zero if it lies outside the box.
    pub fn monomial(q_trunc: usize, s_trunc: usize, a: usize, b: usize, c: BigInt) -> Self {
        let mut out = Self::zero(q_trunc, s_trunc);
        if a <= q_trunc && b <= s_trunc {
            out.coeffs[b * (q_trunc + 1) + a] = c;
        }
        out
    }

    /// Univariate series from its leading coefficients (missing ones are zero).
    pub fn from_coeffs<I>(q_trunc: usize, coeffs: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        let mut out = Self::zero(q_trunc, 0);
        for (k, c) in coeffs.into_iter().take(q_trunc + 1).enumerate() {
            out.coeffs[k] = c.into();
        }
        out
    }

    pub fn q_trunc(&self) -> usize {
        self.q_trunc
    }

    pub fn s_trunc(&self) -> usize {
        self.s_trunc
    }

    pub fn is_univariate(&self) -> bool {
        self.s_trunc == 0
    }

    #[inline]
    fn idx(&self, a: usize, b: usize) -> usize {
        b * (self.q_trunc + 1) + a
    }

    /// Coefficient of `q^a s^b` (zero outside the box).
    pub fn get(&self, a: usize, b: usize) -> BigInt {
        if a <= self.q_trunc && b <= self.s_trunc {
            self.coeffs[self.idx(a, b)].clone()
        } else {
            BigInt::zero()
        }
    }

    /// Coefficient of `q^a` (with `s^0`).
    pub fn coeff(&self, a: usize) -> &BigInt {
        &self.coeffs[a]
    }

    pub fn set(&mut self, a: usize, b: usize, c: BigInt) {
        let i = self.idx(a, b);
        self.coeffs[i] = c;
    }

    /// `q`-coefficients of the `s^0` row.
    pub fn q_coeffs(&self) -> &[BigInt] {
        &self.coeffs[..=self.q_trunc]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, q_trunc: usize, s_trunc: usize) -> Self {
        let q_trunc = q_trunc.min(self.q_trunc);
        let s_trunc = s_trunc.min(self.s_trunc);
        let mut out = Self::zero(q_trunc, s_trunc);
        for b in 0..=s_trunc {
            for a in 0..=q_trunc {
                let i = out.idx(a, b);
                out.coeffs[i] = self.coeffs[self.idx(a, b)].clone();
            }
        }
        out
    }

    fn common_box(&self, other: &Self) -> (usize, usize) {
        (
            self.q_trunc.min(other.q_trunc),
            self.s_trunc.min(other.s_trunc),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncatedSeries {
            q_trunc: self.q_trunc,
            s_trunc: self.s_trunc,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `q^a s^b`.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        let mut out = Self::zero(self.q_trunc, self.s_trunc);
        for y in 0..=self.s_trunc.saturating_sub(b) {
            if y + b > self.s_trunc {
                break;
            }
            for x in 0..=self.q_trunc.saturating_sub(a) {
                if x + a > self.q_trunc {
                    break;
                }
                let i = out.idx(x + a, y + b);
                out.coeffs[i] = self.coeffs[self.idx(x, y)].clone();
            }
        }
        out
    }

    /// In-place multiplication by `1/(1 − q^a s^b)`, `(a, b) ≠ (0, 0)`.
    pub fn div_geometric_in_place(&mut self, a: usize, b: usize) {
        assert!(a > 0 || b > 0, "geometric factor must be positively graded");
        for y in b..=self.s_trunc {
            for x in a..=self.q_trunc {
                let src = self.idx(x - a, y - b);
                let dst = self.idx(x, y);
                let v = self.coeffs[src].clone();
                self.coeffs[dst] += v;
            }
        }
    }

    pub fn div_geometric(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.div_geometric_in_place(a, b);
        out
    }

    /// Multiplies by `(1 − c·q^a s^b)`.
    pub fn mul_binomial(&self, c: &BigInt, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        if a > self.q_trunc || b > self.s_trunc {
            return out;
        }
        for y in (b..=self.s_trunc).rev() {
            for x in (a..=self.q_trunc).rev() {
                let src = self.idx(x - a, y - b);
                let dst = self.idx(x, y);
                let v = &self.coeffs[src] * c;
                out.coeffs[dst] -= v;
            }
        }
        out
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0].clone();
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(SeriesError::NotInvertible(c0));
        }
        let mut out = Self::zero(self.q_trunc, self.s_trunc);
        for y in 0..=self.s_trunc {
            for x in 0..=self.q_trunc {
                let mut acc = if x == 0 && y == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                for yy in 0..=y {
                    for xx in 0..=x {
                        if xx == 0 && yy == 0 {
                            continue;
                        }
                        let a = &self.coeffs[self.idx(xx, yy)];
                        if a.is_zero() {
                            continue;
                        }
                        acc -= a * &out.coeffs[out.idx(x - xx, y - yy)];
                    }
                }
                let i = out.idx(x, y);
                out.coeffs[i] = acc * &c0;
            }
        }
        Ok(out)
    }

    /// `self / other` via the inverse of `other`.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.inverse()?)
    }

    /// Substitutes `s → q^c s^d`; coefficients leaving the box are dropped.
    pub fn subst_s(&self, c: usize, d: usize) -> Self {
        let mut out = Self::zero(self.q_trunc, self.s_trunc);
        for y in 0..=self.s_trunc {
            let ny = y * d;
            if ny > self.s_trunc {
                break;
            }
            for x in 0..=self.q_trunc {
                let nx = x + c * y;
                if nx > self.q_trunc {
                    break;
                }
                let v = &self.coeffs[self.idx(x, y)];
                if !v.is_zero() {
                    let i = out.idx(nx, ny);
                    out.coeffs[i] += v;
                }
            }
        }
        out
    }

    /// Sets `s = q^c`, giving a univariate series with the same `q` bound.
    /// Exact only when every contributing `s`-power lies in the box, which
    /// holds when `c ≥ 1` and `c·s_trunc ≥ q_trunc`.
    pub fn at_s_power(&self, c: usize) -> Self {
        let mut out = Self::zero(self.q_trunc, 0);
        for y in 0..=self.s_trunc {
            for x in 0..=self.q_trunc {
                let nx = x + c * y;
                if nx > self.q_trunc {
                    break;
                }
                let v = &self.coeffs[self.idx(x, y)];
                if !v.is_zero() {
                    out.coeffs[nx] += v;
                }
            }
        }
        out
    }

    /// Univariate series as a bivariate one with no `s` dependence.
    pub fn lift_s(&self, s_trunc: usize) -> Self {
        let mut out = Self::zero(self.q_trunc, s_trunc);
        for x in 0..=self.q_trunc {
            out.coeffs[x] = self.coeffs[x].clone();
        }
        out
    }

    /// Lowest `q`-degree with a nonzero coefficient in the `s^0` row.
    pub fn valuation(&self) -> Option<usize> {
        self.q_coeffs().iter().position(|c| !c.is_zero())
    }

    /// Divides by `q^k` (the low coefficients must vanish); the `q` bound
    /// shrinks by `k`.
    pub fn unshift_q(&self, k: usize) -> Option<Self> {
        if k > self.q_trunc {
            return None;
        }
        let mut out = Self::zero(self.q_trunc - k, self.s_trunc);
        for y in 0..=self.s_trunc {
            for x in 0..=self.q_trunc {
                let v = &self.coeffs[self.idx(x, y)];
                if x < k {
                    if !v.is_zero() {
                        return None;
                    }
                } else {
                    let i = out.idx(x - k, y);
                    out.coeffs[i] = v.clone();
                }
            }
        }
        Some(out)
    }

    /// One coefficient per line (`s^0` row for bivariate series).
    pub fn to_list(&self) -> String {
        let mut out = String::new();
        if self.is_univariate() {
            for c in self.q_coeffs() {
                out.push_str(&c.to_string());
                out.push('\n');
            }
        } else {
            for x in 0..=self.q_trunc {
                let row: Vec<String> = (0..=self.s_trunc)
                    .map(|y| self.coeffs[self.idx(x, y)].to_string())
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

fn binop<F: Fn(&BigInt, &BigInt) -> BigInt>(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    f: F,
) -> TruncatedSeries {
    let (qt, st) = a.common_box(b);
    let mut out = TruncatedSeries::zero(qt, st);
    for y in 0..=st {
        for x in 0..=qt {
            let i = out.idx(x, y);
            out.coeffs[i] = f(&a.coeffs[a.idx(x, y)], &b.coeffs[b.idx(x, y)]);
        }
    }
    out
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        binop(self, rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        binop(self, rhs, |a, b| a - b)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            q_trunc: self.q_trunc,
            s_trunc: self.s_trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let (qt, st) = self.common_box(rhs);
        let mut out = TruncatedSeries::zero(qt, st);
        for y1 in 0..=st {
            for x1 in 0..=qt {
                let a = &self.coeffs[self.idx(x1, y1)];
                if a.is_zero() {
                    continue;
                }
                for y2 in 0..=(st - y1) {
                    for x2 in 0..=(qt - x1) {
                        let b = &rhs.coeffs[rhs.idx(x2, y2)];
                        if b.is_zero() {
                            continue;
                        }
                        let i = out.idx(x1 + x2, y1 + y2);
                        out.coeffs[i] += a * b;
                    }
                }
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for TruncatedSeries {
    /// `c0 + c1*q + c2*q^2 + ...`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for y in 0..=self.s_trunc {
            for x in 0..=self.q_trunc {
                let c = &self.coeffs[self.idx(x, y)];
                if c.is_zero() {
                    continue;
                }
                let mag = c.abs();
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
                }
                first = false;
                let mut factors = Vec::new();
                if x == 1 {
                    factors.push("q".to_string());
                } else if x > 1 {
                    factors.push(format!("q^{x}"));
                }
                if y == 1 {
                    factors.push("s".to_string());
                } else if y > 1 {
                    factors.push(format!("s^{y}"));
                }
                if factors.is_empty() {
                    write!(f, "{mag}")?;
                } else if mag.is_one() {
                    write!(f, "{}", factors.join("*"))?;
                } else {
                    write!(f, "{mag}*{}", factors.join("*"))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Per-variable weights: variable `i` maps to `q^{w_i} s^{u_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationMap {
    weights: Vec<(u32, u32)>,
}

impl SpecializationMap {
    pub fn new(weights: Vec<(u32, u32)>) -> Self {
        SpecializationMap { weights }
    }

    /// Every variable to `q`.
    pub fn all_q(n: usize) -> Self {
        SpecializationMap {
            weights: vec![(1, 0); n],
        }
    }

    /// Every variable to `q` except `tracked`, which goes to `s`.
    pub fn tracking(n: usize, tracked: VarId) -> Self {
        let mut weights = vec![(1, 0); n];
        weights[tracked] = (0, 1);
        SpecializationMap { weights }
    }

    pub fn weights(&self) -> &[(u32, u32)] {
        &self.weights
    }

    pub fn uses_s(&self) -> bool {
        self.weights.iter().any(|&(_, u)| u > 0)
    }

    fn image(&self, exps: &[i64]) -> Result<(i64, i64), SeriesError> {
        let mut q = 0i64;
        let mut s = 0i64;
        for (&e, &(w, u)) in exps.iter().zip(&self.weights) {
            q = e
                .checked_mul(i64::from(w))
                .and_then(|d| q.checked_add(d))
                .ok_or(SeriesError::Overflow)?;
            s = e
                .checked_mul(i64::from(u))
                .and_then(|d| s.checked_add(d))
                .ok_or(SeriesError::Overflow)?;
        }
        Ok((q, s))
    }
}

/// Expands a generating function under a specialization map, exactly, up to
/// `q`-degree `n` (and `s`-degree `n` when the map uses `s`).
pub fn specialize(
    f: &RationalGF,
    map: &SpecializationMap,
    n: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let nvars = f.vars().len();
    if map.weights.len() != nvars {
        return Err(SeriesError::Arity {
            expected: nvars,
            got: map.weights.len(),
        });
    }
    let s_trunc = if map.uses_s() { n } else { 0 };
    // group terms by specialized denominator so each product is expanded once
    let mut groups: BTreeMap<Vec<(usize, usize)>, TruncatedSeries> = BTreeMap::new();
    for t in f.terms() {
        let (a, b) = map.image(t.num.exps())?;
        if a < 0 || b < 0 {
            return Err(SeriesError::NegativeNumerator { q: a, s: b });
        }
        let mut den = Vec::with_capacity(t.den().len());
        for m in t.den() {
            let (da, db) = map.image(m.exps())?;
            if da < 0 || db < 0 || (da == 0 && db == 0) {
                return Err(SeriesError::NonPositiveFactor { q: da, s: db });
            }
            den.push((da as usize, db as usize));
        }
        den.sort_unstable();
        let acc = groups
            .entry(den)
            .or_insert_with(|| TruncatedSeries::zero(n, s_trunc));
        let (a, b) = (a as usize, b as usize);
        if a <= n && b <= s_trunc {
            let i = acc.idx(a, b);
            acc.coeffs[i] += &t.coeff;
        }
    }
    let mut total = TruncatedSeries::zero(n, s_trunc);
    for (den, mut num) in groups {
        if num.is_zero() {
            continue;
        }
        for (a, b) in den {
            num.div_geometric_in_place(a, b);
        }
        total = &total + &num;
    }
    Ok(total)
}

/// `∏_{i=0}^{count-1} (1 − sign·q^{a+i})`, e.g. `(q;q)_n` for `sign = +1,
/// a = 1` and `(−q;q)_n` for `sign = −1, a = 1`.
pub fn poch(sign: i8, a: usize, count: usize, n: usize) -> TruncatedSeries {
    let c = BigInt::from(sign.signum());
    (0..count).fold(TruncatedSeries::one(n, 0), |acc, i| {
        if a + i == 0 {
            // (1 − sign)
            acc.scale(&(BigInt::one() - &c))
        } else {
            acc.mul_binomial(&c, a + i, 0)
        }
    })
}

/// Gaussian binomial `[n; k]_q` by the Pascal recurrence
/// `[n;k] = [n−1;k−1] + q^k [n−1;k]`.
pub fn qbinomial(n: i64, k: i64, trunc: usize) -> Result<TruncatedSeries, SeriesError> {
    if n < 0 || k < 0 || k > n {
        return Err(SeriesError::BinomialRange { n, k });
    }
    let (n, k) = (n as usize, k as usize);
    // row[j] = [m; j] for the current m
    let mut row: Vec<TruncatedSeries> = vec![TruncatedSeries::one(trunc, 0)];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let left = if j >= 1 { Some(&row[j - 1]) } else { None };
            let right = row.get(j).map(|r| r.shift(j, 0));
            let v = match (left, right) {
                (Some(l), Some(r)) => l + &r,
                (Some(l), None) => l.clone(),
                (None, Some(r)) => r,
                (None, None) => TruncatedSeries::zero(trunc, 0),
            };
            next.push(v);
        }
        row = next;
    }
    Ok(row.swap_remove(k))
}

/// Coefficientwise equality of two series with identical truncation bounds.
pub fn check_identity(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Result<bool, SeriesError> {
    if lhs.q_trunc != rhs.q_trunc || lhs.s_trunc != rhs.s_trunc {
        return Err(SeriesError::MismatchedBounds(
            lhs.q_trunc,
            lhs.s_trunc,
            rhs.q_trunc,
            rhs.s_trunc,
        ));
    }
    Ok(lhs.coeffs == rhs.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfalg::Monomial;
    use crate::system::VarTable;
    use std::sync::Arc;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.q_coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn parts_one_and_three() {
        let v = Arc::new(VarTable::numbered("x", 1));
        let f = RationalGF::simple(
            v,
            Monomial::new(vec![0]),
            vec![Monomial::new(vec![1]), Monomial::new(vec![3])],
        )
        .unwrap();
        let s = specialize(&f, &SpecializationMap::all_q(1), 5).unwrap();
        // brute force: partitions of k into parts {1, 3}
        let brute: Vec<i64> = (0..=5).map(|k| (0..=k / 3).count() as i64).collect();
        assert_eq!(ints(&s), brute);
        assert_eq!(ints(&s), vec![1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn unit_gf_specializes_to_one() {
        let v = Arc::new(VarTable::numbered("x", 2));
        let s = specialize(&RationalGF::one(v), &SpecializationMap::all_q(2), 4).unwrap();
        assert_eq!(ints(&s), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn non_positive_factor_rejected() {
        let v = Arc::new(VarTable::numbered("x", 2));
        let f = RationalGF::simple(
            v,
            Monomial::new(vec![0, 0]),
            vec![Monomial::new(vec![1, -1])],
        )
        .unwrap();
        assert!(matches!(
            specialize(&f, &SpecializationMap::all_q(2), 4),
            Err(SeriesError::NonPositiveFactor { .. })
        ));
    }

    #[test]
    fn tracked_variable_goes_to_s() {
        let v = Arc::new(VarTable::numbered("x", 2));
        // 1/((1 - x1)(1 - x1 x2)) with x2 → s
        let f = RationalGF::simple(
            v,
            Monomial::new(vec![0, 0]),
            vec![Monomial::new(vec![1, 0]), Monomial::new(vec![1, 1])],
        )
        .unwrap();
        let s = specialize(&f, &SpecializationMap::tracking(2, 1), 4).unwrap();
        // coefficient of q^a s^b counts (i, j) with i + j = a, j = b
        for a in 0..=4usize {
            for b in 0..=4usize {
                let expect = i64::from(b <= a);
                assert_eq!(s.get(a, b), BigInt::from(expect));
            }
        }
    }

    #[test]
    fn poch_examples() {
        assert_eq!(ints(&poch(1, 1, 2, 6)), vec![1, -1, -1, 1, 0, 0, 0]);
        assert_eq!(ints(&poch(-1, 1, 2, 6)), vec![1, 1, 1, 1, 0, 0, 0]);
        assert_eq!(ints(&poch(1, 3, 0, 4)), vec![1, 0, 0, 0, 0]);
        assert_eq!(ints(&poch(-1, 3, 0, 4)), vec![1, 0, 0, 0, 0]);
        // (-1; q)_2 = (1 + 1)(1 + q)
        assert_eq!(ints(&poch(-1, 0, 2, 3)), vec![2, 2, 0, 0]);
    }

    #[test]
    fn poch_telescopes() {
        for a in 1..4usize {
            for n in 0..6usize {
                let lhs = poch(1, a, n + 1, 30);
                let rhs = poch(1, a, n, 30).mul_binomial(&BigInt::one(), a + n, 0);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn qbinomial_examples() {
        assert_eq!(
            ints(&qbinomial(5, 0, 8).unwrap()),
            vec![1, 0, 0, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(ints(&qbinomial(2, 1, 4).unwrap()), vec![1, 1, 0, 0, 0]);
        assert_eq!(
            ints(&qbinomial(4, 2, 6).unwrap()),
            vec![1, 1, 2, 1, 1, 0, 0]
        );
        assert!(qbinomial(3, 4, 5).is_err());
        assert!(qbinomial(3, -1, 5).is_err());
    }

    #[test]
    fn qbinomial_matches_pochhammer_quotient() {
        let n = 30;
        for m in 0..8usize {
            for k in 0..=m {
                let num = poch(1, 1, m, n);
                let den = &poch(1, 1, k, n) * &poch(1, 1, m - k, n);
                let q = num.div(&den).unwrap();
                assert_eq!(q, qbinomial(m as i64, k as i64, n).unwrap());
            }
        }
    }

    #[test]
    fn identity_with_itself() {
        let s = poch(-1, 1, 4, 40);
        assert!(check_identity(&s, &s).unwrap());
        assert!(check_identity(&s, &poch(-1, 1, 4, 39)).is_err());
    }

    #[test]
    fn inverse_bivariate() {
        let f = TruncatedSeries::one(6, 6).mul_binomial(&BigInt::one(), 1, 1);
        let g = f.inverse().unwrap();
        assert_eq!(g, TruncatedSeries::one(6, 6).div_geometric(1, 1));
        assert!(TruncatedSeries::monomial(3, 0, 0, 0, BigInt::from(2))
            .inverse()
            .is_err());
    }

    #[test]
    fn display_forms() {
        let s = TruncatedSeries::from_coeffs(4, [1, -1, 2, 0, 1]);
        assert_eq!(s.to_string(), "1 - q + 2*q^2 + q^4");
        assert_eq!(s.to_list(), "1\n-1\n2\n0\n1\n");
        assert_eq!(TruncatedSeries::zero(2, 0).to_string(), "0");
    }

    #[test]
    fn subst_and_specialize_s() {
        // 1/(1 - s): s → q s^2 gives 1/(1 - q s^2)
        let f = TruncatedSeries::one(6, 6).div_geometric(0, 1);
        assert_eq!(
            f.subst_s(1, 2),
            TruncatedSeries::one(6, 6).div_geometric(1, 2)
        );
        // s = q^2 gives 1/(1 - q^2)
        assert_eq!(
            f.at_s_power(2),
            TruncatedSeries::one(6, 0).div_geometric(2, 0)
        );
    }
}
