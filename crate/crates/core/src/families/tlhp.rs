//! Lecture hall partitions `λ_1/n ≥ λ_2/(n−1) ≥ … ≥ λ_n/1 ≥ 0` and their
//! truncations `λ_1/n ≥ … ≥ λ_k/(n−k+1) > 0`.

use num_bigint::BigInt;
use num_traits::One;

use crate::series::{poch, qbinomial, SeriesError, TruncatedSeries};

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `L̄_{n,k}(q, s)` by
/// `L̄_{n,k} = s/(1−s)·L̄_{n,k−1}(q,q) − L̄_{n,k−1}(q,qs)·(1/(1−s) + z/(1−z))`
/// with `z = s^{n−k+1} q^{C(n+1,2) − C(n−k+2,2)}` and `L̄_{n,1} = s/(1−s)`.
pub fn bivariate(n: usize, k: usize, weight: usize) -> TruncatedSeries {
    let base = TruncatedSeries::one(weight, weight)
        .shift(0, 1)
        .div_geometric(0, 1);
    let mut cur = base.clone();
    for m in 2..=k {
        let e = choose2(n + 1) - choose2(n - m + 2);
        let b = n - m + 1;
        let first = &base * &cur.at_s_power(1).lift_s(weight);
        let x = cur.subst_s(1, 1);
        let tail = &x.div_geometric(0, 1) + &x.shift(e, b).div_geometric(e, b);
        cur = &first - &tail;
    }
    cur
}

pub fn recurrence_series(n: usize, k: usize, weight: usize) -> TruncatedSeries {
    bivariate(n, k, weight).at_s_power(1)
}

/// `L̄_{n,k}(q) = Σ_{j=1}^{k} (−1)^{j−1} q^j/(q;q)_j · (1 − q^{k(n−k+j) + C(k−j+1,2)}) /
/// (1 − q^{C(n+1,2) − C(n−k+1,2)}) · L̄_{n,k−j}(q)`, with `L̄_{n,0} = 1`.
pub fn jsum_series(n: usize, k: usize, weight: usize) -> Result<TruncatedSeries, SeriesError> {
    let one = BigInt::one();
    let mut l: Vec<TruncatedSeries> = vec![TruncatedSeries::one(weight, 0)];
    for m in 1..=k {
        let den = choose2(n + 1) - choose2(n - m + 1);
        let mut total = TruncatedSeries::zero(weight, 0);
        for j in 1..=m {
            let t = l[m - j]
                .shift(j, 0)
                .mul_binomial(&one, m * (n - m + j) + choose2(m - j + 1), 0)
                .div(&poch(1, 1, j, weight))?
                .div_geometric(den, 0);
            total = if j % 2 == 1 { &total + &t } else { &total - &t };
        }
        l.push(total);
    }
    Ok(l.pop().expect("nonempty"))
}

/// `q^{C(k+1,2)} [n;k]_q (−q^{n−k+1};q)_k / (q^{2n−k+1};q)_k`.
pub fn closed_series(n: usize, k: usize, weight: usize) -> Result<TruncatedSeries, SeriesError> {
    let b = qbinomial(n as i64, k as i64, weight)?;
    let num = &b * &poch(-1, n - k + 1, k, weight);
    Ok(num
        .div(&poch(1, 2 * n - k + 1, k, weight))?
        .shift(choose2(k + 1), 0))
}

/// `∏_{i=1}^{n} 1/(1 − q^{2i−1})`.
pub fn lhp_closed(n: usize, weight: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(weight, 0);
    for i in 1..=n {
        s.div_geometric_in_place(2 * i - 1, 0);
    }
    s
}
