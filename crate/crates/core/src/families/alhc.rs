//! Anti-lecture-hall compositions `λ_1/1 ≥ λ_2/2 ≥ … ≥ λ_n/n ≥ 0`.

use num_bigint::BigInt;
use num_traits::One;

use crate::series::{poch, SeriesError, TruncatedSeries};

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `A_m(q, s)` for `m = 0..=n` by
/// `A_m = A_{m−1}(q,q)/(1−s) − A_{m−1}(q,qs)·s(1 − s^{m−1}q^{C(m,2)}) / ((1−s)(1 − s^m q^{C(m,2)}))`,
/// `A_0 = 1`, in a `(weight+1)²` box.
pub fn bivariate(n: usize, weight: usize) -> Vec<TruncatedSeries> {
    let one = BigInt::one();
    let mut out = vec![TruncatedSeries::one(weight, weight)];
    for m in 1..=n {
        let prev = &out[m - 1];
        let c = choose2(m);
        let first = prev.at_s_power(1).lift_s(weight).div_geometric(0, 1);
        let mut second = prev
            .subst_s(1, 1)
            .shift(0, 1)
            .mul_binomial(&one, c, m - 1)
            .div_geometric(0, 1);
        second.div_geometric_in_place(c, m);
        out.push(&first - &second);
    }
    out
}

/// `A_n(q, q)` from the bivariate recurrence.
pub fn recurrence_series(n: usize, weight: usize) -> TruncatedSeries {
    bivariate(n, weight)
        .pop()
        .expect("m = 0 is always present")
        .at_s_power(1)
}

/// `A_n(q, q)` by first summing the iterated form
/// `A_n(q,s) = Σ_{i<n} (−1)^i A_{n−1−i}(q,q) s^i q^{C(i,2)} (1 − s^{n−i} q^{C(n,2)−C(i,2)}) / ((s;q)_{i+1}(1 − s^n q^{C(n,2)}))`
/// and then setting `s = q`. Lower `A_m(q,q)` come from the same form.
pub fn iterated_series(n: usize, weight: usize) -> TruncatedSeries {
    let one = BigInt::one();
    let mut at_q: Vec<TruncatedSeries> = vec![TruncatedSeries::one(weight, 0)];
    for m in 1..=n {
        let cm = choose2(m);
        let mut total = TruncatedSeries::zero(weight, weight);
        for i in 0..m {
            let mut t = at_q[m - 1 - i]
                .lift_s(weight)
                .shift(choose2(i), i)
                .mul_binomial(&one, cm - choose2(i), m - i);
            // 1 / (s;q)_{i+1}
            for k in 0..=i {
                t.div_geometric_in_place(k, 1);
            }
            t.div_geometric_in_place(cm, m);
            total = if i % 2 == 0 { &total + &t } else { &total - &t };
        }
        at_q.push(total.at_s_power(1));
    }
    at_q.pop().expect("nonempty")
}

/// `A_n(q,q) = Σ_{i<n} (−1)^i A_{n−1−i}(q,q) (q^{C(i+1,2)} − q^{C(n+1,2)}) / ((q;q)_{i+1}(1 − q^{C(n+1,2)}))`.
pub fn univariate_series(n: usize, weight: usize) -> Result<TruncatedSeries, SeriesError> {
    let mut at_q: Vec<TruncatedSeries> = vec![TruncatedSeries::one(weight, 0)];
    for m in 1..=n {
        let top = choose2(m + 1);
        let mut total = TruncatedSeries::zero(weight, 0);
        for i in 0..m {
            let diff = &TruncatedSeries::monomial(weight, 0, choose2(i + 1), 0, BigInt::one())
                - &TruncatedSeries::monomial(weight, 0, top, 0, BigInt::one());
            let t = (&at_q[m - 1 - i] * &diff)
                .div(&poch(1, 1, i + 1, weight))?
                .div_geometric(top, 0);
            total = if i % 2 == 0 { &total + &t } else { &total - &t };
        }
        at_q.push(total);
    }
    Ok(at_q.pop().expect("nonempty"))
}

/// `(−q;q)_n / (q²;q)_n`.
pub fn closed_series(n: usize, weight: usize) -> Result<TruncatedSeries, SeriesError> {
    poch(-1, 1, n, weight).div(&poch(1, 2, n, weight))
}
