//! The anti-lecture-hall q-series identities and the two q-Chu–Vandermonde
//! specializations behind them, as (lhs, rhs) series pairs.

use num_bigint::BigInt;
use num_traits::One;

use super::{check_identity, poch, qbinomial, SeriesError, TruncatedSeries};

/// Default truncation order for identity checks.
pub const DEFAULT_ORDER: usize = 40;

#[derive(Debug, Clone)]
pub struct IdentityCase {
    pub name: &'static str,
    pub n: usize,
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
}

impl IdentityCase {
    pub fn holds(&self) -> Result<bool, SeriesError> {
        check_identity(&self.lhs, &self.rhs)
    }
}

fn signed(s: TruncatedSeries, negative: bool) -> TruncatedSeries {
    if negative {
        -&s
    } else {
        s
    }
}

fn triangular(i: usize) -> usize {
    i * (i + 1) / 2
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `Σ_{i=0}^{m-1} (−1)^i [q^{C(i+1,2)}] (−q)_{m−1−i} / ((q²)_{m−1−i} (q)_{i+1})`,
/// the weight factor present when `quadratic` is set.
fn alternating_sum(
    m: usize,
    quadratic: bool,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let mut total = TruncatedSeries::zero(order, 0);
    for i in 0..m {
        let den = &poch(1, 2, m - 1 - i, order) * &poch(1, 1, i + 1, order);
        let mut t = poch(-1, 1, m - 1 - i, order).div(&den)?;
        if quadratic {
            t = t.shift(triangular(i), 0);
        }
        total = &total + &signed(t, i % 2 == 1);
    }
    Ok(total)
}

/// `(−q)_m / (q²)_m`.
fn alhc_closed(m: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    poch(-1, 1, m, order).div(&poch(1, 2, m, order))
}

pub fn odd1(n: usize, order: usize) -> Result<IdentityCase, SeriesError> {
    Ok(IdentityCase {
        name: "odd1",
        n,
        lhs: alternating_sum(2 * n + 1, false, order)?,
        rhs: alhc_closed(2 * n + 1, order)?,
    })
}

pub fn even1(n: usize, order: usize) -> Result<IdentityCase, SeriesError> {
    let tail = TruncatedSeries::one(order, 0).div(&poch(1, 2, 2 * n, order))?;
    Ok(IdentityCase {
        name: "even1",
        n,
        lhs: alternating_sum(2 * n, false, order)?,
        rhs: &alhc_closed(2 * n, order)? - &tail,
    })
}

pub fn odd2(n: usize, order: usize) -> Result<IdentityCase, SeriesError> {
    Ok(IdentityCase {
        name: "odd2",
        n,
        lhs: alternating_sum(2 * n + 1, true, order)?,
        rhs: alhc_closed(2 * n + 1, order)?,
    })
}

fn even2_tail(n: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    Ok(TruncatedSeries::one(order, 0)
        .div(&poch(1, 2, 2 * n, order))?
        .shift(choose2(2 * n + 1), 0))
}

/// `(even2)` with the tail subtracted, which is the form that holds.
pub fn even2(n: usize, order: usize) -> Result<IdentityCase, SeriesError> {
    Ok(IdentityCase {
        name: "even2",
        n,
        lhs: alternating_sum(2 * n, true, order)?,
        rhs: &alhc_closed(2 * n, order)? - &even2_tail(n, order)?,
    })
}

/// `(even2)` with the tail added. Fails whenever the tail is visible below
/// `order`; kept so the sign discrepancy can be reported.
pub fn even2_plus(n: usize, order: usize) -> Result<IdentityCase, SeriesError> {
    Ok(IdentityCase {
        name: "even2(+)",
        n,
        lhs: alternating_sum(2 * n, true, order)?,
        rhs: &alhc_closed(2 * n, order)? + &even2_tail(n, order)?,
    })
}

/// Degree bound for the binomial identities at `n`, so truncation is exact.
fn binomial_bound(n: usize) -> usize {
    // (−1;q)_j has degree C(j,2), [n;j] degree j(n−j), q^{C(n−j,2)} adds the rest
    n * n + 1
}

/// `Σ_j (−1)^j (−1;q)_j [n;j]_q = (−1)^n`, exact polynomial equality.
pub fn binomial1(n: usize) -> Result<IdentityCase, SeriesError> {
    let order = binomial_bound(n);
    let mut lhs = TruncatedSeries::zero(order, 0);
    for j in 0..=n {
        let t = &poch(-1, 0, j, order) * &qbinomial(n as i64, j as i64, order)?;
        lhs = &lhs + &signed(t, j % 2 == 1);
    }
    let rhs = signed(TruncatedSeries::one(order, 0), n % 2 == 1);
    Ok(IdentityCase {
        name: "binomial",
        n,
        lhs,
        rhs,
    })
}

/// `Σ_j (−1)^j (−1;q)_j [n;j]_q q^{C(n−j,2)} = (−1)^n q^{C(n,2)}`, exact.
pub fn binomial2(n: usize) -> Result<IdentityCase, SeriesError> {
    let order = binomial_bound(n);
    let mut lhs = TruncatedSeries::zero(order, 0);
    for j in 0..=n {
        let t = (&poch(-1, 0, j, order) * &qbinomial(n as i64, j as i64, order)?)
            .shift(choose2(n - j), 0);
        lhs = &lhs + &signed(t, j % 2 == 1);
    }
    let rhs = signed(
        TruncatedSeries::one(order, 0).shift(choose2(n), 0),
        n % 2 == 1,
    );
    Ok(IdentityCase {
        name: "binomial-shifted",
        n,
        lhs,
        rhs,
    })
}

/// `∏_{i<j} (q^{n−i} − 1)`, which equals `(q^{−n})_j q^{nj − C(j,2)}`.
fn cleared_neg_poch(n: usize, j: usize, order: usize) -> TruncatedSeries {
    // (q^{n-i} - 1) = -(1 - q^{n-i})
    let p = (0..j).fold(TruncatedSeries::one(order, 0), |acc, i| {
        acc.mul_binomial(&BigInt::one(), n - i, 0)
    });
    signed(p, j % 2 == 1)
}

/// First q-Chu–Vandermonde form at `a = −1`, `c → ∞`:
/// `Σ_j (−1;q)_j (q^{−n})_j q^{nj−C(j,2)} / (q)_j = (−1)^n`.
pub fn qchu_limit(n: usize, order: usize) -> Result<IdentityCase, SeriesError> {
    let mut lhs = TruncatedSeries::zero(order, 0);
    for j in 0..=n {
        let num = &poch(-1, 0, j, order) * &cleared_neg_poch(n, j, order);
        lhs = &lhs + &num.div(&poch(1, 1, j, order))?;
    }
    Ok(IdentityCase {
        name: "qchu-limit",
        n,
        lhs,
        rhs: signed(TruncatedSeries::one(order, 0), n % 2 == 1),
    })
}

/// Second q-Chu–Vandermonde form at `a = −1`, `c = 0`:
/// `Σ_j (−1;q)_j (q^{−n})_j q^j / (q)_j = (−1)^n`, both sides times `q^{n²}`.
pub fn qchu_zero(n: usize, order: usize) -> Result<IdentityCase, SeriesError> {
    // keep the shifted right-hand side inside the window
    let order = order.max(n * n + 1);
    let mut lhs = TruncatedSeries::zero(order, 0);
    for j in 0..=n {
        // (q^{-n})_j q^j q^{n²} = cleared · q^{n² + j − nj + C(j,2)}
        let shift = n * n + j + choose2(j) - n * j;
        let num = (&poch(-1, 0, j, order) * &cleared_neg_poch(n, j, order)).shift(shift, 0);
        lhs = &lhs + &num.div(&poch(1, 1, j, order))?;
    }
    let rhs = signed(TruncatedSeries::one(order, 0).shift(n * n, 0), n % 2 == 1);
    Ok(IdentityCase {
        name: "qchu-zero",
        n,
        lhs,
        rhs,
    })
}

/// Every identity case of the acceptance suite.
pub fn all_cases(order: usize) -> Result<Vec<IdentityCase>, SeriesError> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(odd1(n, order)?);
        out.push(even1(n, order)?);
        out.push(odd2(n, order)?);
        out.push(even2(n, order)?);
    }
    for n in 0..=8 {
        out.push(binomial1(n)?);
        out.push(binomial2(n)?);
        out.push(qchu_limit(n, order)?);
        out.push(qchu_zero(n, order)?);
    }
    Ok(out)
}
