//! Two-rowed plane partitions `a_1 ≥ … ≥ a_n`, `b_1 ≥ … ≥ b_n`, `a_i ≥ b_i`.
//!
//! The specialized recurrence divides by `q^{n−1} − s`, so it is run on
//! exact rational functions: a polynomial numerator over a product of
//! `(1 − q^a s^b)` factors, with the division checked to leave no remainder.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{poch, SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatFnError {
    #[error("numerator is not divisible by (q^{0} - s)")]
    NotDivisible(usize),
}

/// Polynomial in `q, s` keyed by `(deg_q, deg_s)`.
pub type Poly = BTreeMap<(usize, usize), BigInt>;

fn poly_add_term(p: &mut Poly, key: (usize, usize), c: BigInt) {
    if c.is_zero() {
        return;
    }
    let e = p.entry(key).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        p.remove(&key);
    }
}

fn poly_mul_factor(p: &Poly, a: usize, b: usize) -> Poly {
    // p · (1 − q^a s^b)
    let mut out = p.clone();
    for (&(x, y), c) in p {
        poly_add_term(&mut out, (x + a, y + b), -c);
    }
    out
}

/// `num / ∏ (1 − q^a s^b)`, denominators kept as a sorted multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiRational {
    pub num: Poly,
    pub den: Vec<(usize, usize)>,
}

impl BiRational {
    pub fn one() -> Self {
        let mut num = Poly::new();
        num.insert((0, 0), BigInt::one());
        BiRational {
            num,
            den: Vec::new(),
        }
    }

    /// `s = q^m`.
    pub fn at_s_power(&self, m: usize) -> BiRational {
        let mut num = Poly::new();
        for (&(x, y), c) in &self.num {
            poly_add_term(&mut num, (x + m * y, 0), c.clone());
        }
        let mut den: Vec<(usize, usize)> = self.den.iter().map(|&(a, b)| (a + m * b, 0)).collect();
        den.sort_unstable();
        BiRational { num, den }
    }

    /// Multiplies the numerator by `q^a s^b`.
    pub fn shift(&self, a: usize, b: usize) -> BiRational {
        BiRational {
            num: self
                .num
                .iter()
                .map(|(&(x, y), c)| ((x + a, y + b), c.clone()))
                .collect(),
            den: self.den.clone(),
        }
    }

    /// Rewrites over the multiset union (maximum multiplicities) `den`.
    fn over(&self, den: &[(usize, usize)]) -> Poly {
        let mut missing: Vec<(usize, usize)> = den.to_vec();
        for f in &self.den {
            let pos = missing
                .iter()
                .position(|g| g == f)
                .expect("den is a superset");
            missing.swap_remove(pos);
        }
        missing
            .into_iter()
            .fold(self.num.clone(), |p, (a, b)| poly_mul_factor(&p, a, b))
    }

    fn common_den(&self, other: &BiRational) -> Vec<(usize, usize)> {
        let mut counts: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for f in &self.den {
            counts.entry(*f).or_default().0 += 1;
        }
        for f in &other.den {
            counts.entry(*f).or_default().1 += 1;
        }
        let mut out = Vec::new();
        for (f, (a, b)) in counts {
            out.extend(std::iter::repeat_n(f, a.max(b)));
        }
        out
    }

    pub fn sub(&self, other: &BiRational) -> BiRational {
        let den = self.common_den(other);
        let mut num = self.over(&den);
        for (k, c) in other.over(&den) {
            poly_add_term(&mut num, k, -c);
        }
        BiRational { num, den }
    }

    /// Exact division of the numerator by `q^m − s`.
    pub fn div_q_minus_s(&self, m: usize) -> Result<BiRational, RatFnError> {
        // group by s-degree: N = Σ_b c_b(q) s^b
        let mut by_s: BTreeMap<usize, Poly> = BTreeMap::new();
        for (&(x, y), c) in &self.num {
            by_s.entry(y).or_default().insert((x, 0), c.clone());
        }
        let Some(&d) = by_s.keys().next_back() else {
            return Ok(self.clone());
        };
        if d == 0 {
            return Err(RatFnError::NotDivisible(m));
        }
        let coeff = |b: usize| by_s.get(&b).cloned().unwrap_or_default();
        // (q^m − s)·Σ e_b s^b: c_d = −e_{d−1}, c_b = q^m e_b − e_{b−1}, c_0 = q^m e_0
        let mut e: Vec<Poly> = vec![Poly::new(); d];
        e[d - 1] = coeff(d).into_iter().map(|(k, c)| (k, -c)).collect();
        for b in (1..d).rev() {
            let mut next: Poly = e[b]
                .iter()
                .map(|(&(x, _), c)| ((x + m, 0), c.clone()))
                .collect();
            for (k, c) in coeff(b) {
                poly_add_term(&mut next, k, -c);
            }
            e[b - 1] = next;
        }
        let check: Poly = e[0]
            .iter()
            .map(|(&(x, _), c)| ((x + m, 0), c.clone()))
            .collect();
        if check != coeff(0) {
            return Err(RatFnError::NotDivisible(m));
        }
        let mut num = Poly::new();
        for (b, p) in e.into_iter().enumerate() {
            for ((x, _), c) in p {
                poly_add_term(&mut num, (x, b), c);
            }
        }
        Ok(BiRational {
            num,
            den: self.den.clone(),
        })
    }

    pub fn with_factor(&self, a: usize, b: usize) -> BiRational {
        let mut den = self.den.clone();
        den.push((a, b));
        den.sort_unstable();
        BiRational {
            num: self.num.clone(),
            den,
        }
    }

    /// Box expansion, exact up to `q^q_trunc s^s_trunc`.
    pub fn expand(&self, q_trunc: usize, s_trunc: usize) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(q_trunc, s_trunc);
        for (&(x, y), c) in &self.num {
            if x <= q_trunc && y <= s_trunc {
                let v = out.get(x, y) + c;
                out.set(x, y, v);
            }
        }
        for &(a, b) in &self.den {
            out.div_geometric_in_place(a, b);
        }
        out
    }
}

/// `G*_n(q, s)` by `G*_n = [q^{n−1} G*_{n−1}(q, q^{n−1}) − s G*_{n−1}(q, s)] /
/// ((q^{n−1} − s)(1 − s q^n))`, `G*_1 = 1/((1 − s)(1 − sq))`.
pub fn g_star(n: usize) -> Result<BiRational, RatFnError> {
    let mut g = BiRational::one().with_factor(0, 1).with_factor(1, 1);
    for m in 2..=n {
        let first = g.at_s_power(m - 1).shift(m - 1, 0);
        let second = g.shift(0, 1);
        g = first.sub(&second).div_q_minus_s(m - 1)?.with_factor(m, 1);
    }
    Ok(g)
}

/// `1/((1−s)(1−sq)(q;q)_{n−1}(q²;q)_{n−1})`.
pub fn g_star_closed(n: usize) -> BiRational {
    let mut g = BiRational::one().with_factor(0, 1).with_factor(1, 1);
    for i in 1..n {
        g = g.with_factor(i, 0).with_factor(i + 1, 0);
    }
    g
}

/// `P_n(q) = G*_n(q, q^n)`.
pub fn recurrence_series(n: usize, weight: usize) -> Result<TruncatedSeries, RatFnError> {
    Ok(g_star(n)?.at_s_power(n).expand(weight, 0))
}

/// `1/((q;q)_n (q²;q)_n)`.
pub fn closed_series(n: usize, weight: usize) -> Result<TruncatedSeries, SeriesError> {
    TruncatedSeries::one(weight, 0).div(&(&poch(1, 1, n, weight) * &poch(1, 2, n, weight)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_closed_form() {
        for n in 1..=5 {
            assert_eq!(
                g_star(n).unwrap().expand(15, 15),
                g_star_closed(n).expand(15, 15),
                "n = {n}"
            );
            assert_eq!(
                recurrence_series(n, 15).unwrap(),
                closed_series(n, 15).unwrap()
            );
        }
    }

    #[test]
    fn one_column() {
        assert_eq!(
            recurrence_series(1, 5).unwrap(),
            TruncatedSeries::from_coeffs(5, [1, 1, 2, 2, 3, 3])
        );
    }

    #[test]
    fn division_remainder_detected() {
        // 1 is not divisible by (q - s)
        assert!(BiRational::one().div_q_minus_s(1).is_err());
    }
}
