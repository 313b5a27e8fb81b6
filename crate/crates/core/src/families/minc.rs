//! Compositions in which each part is at most twice the preceding one.

use num_bigint::BigInt;
use num_traits::One;

use crate::series::TruncatedSeries;

/// `C_n(q, s)` for `n = 1..=max_len` by `C_n = s/(1−s)·(C_{n−1}(q,q) −
/// C_{n−1}(q, q s²))`, `C_1 = s/(1−s)`, each in a `(weight+1)²` box.
/// `s` marks the last part, `q` the others.
fn bivariate_terms(weight: usize, max_len: usize) -> Vec<TruncatedSeries> {
    let mut out = Vec::with_capacity(max_len);
    let mut c = TruncatedSeries::one(weight, weight)
        .shift(0, 1)
        .div_geometric(0, 1);
    for n in 1..=max_len {
        if n > 1 {
            let at_q = c.at_s_power(1).lift_s(weight);
            let diff = &at_q - &c.subst_s(1, 2);
            c = diff.shift(0, 1).div_geometric(0, 1);
        }
        out.push(c.clone());
    }
    out
}

/// `C_n(q, q)`: compositions with exactly `n` parts.
pub fn fixed_length_series(n: usize, weight: usize) -> TruncatedSeries {
    if n == 0 {
        return TruncatedSeries::one(weight, 0);
    }
    bivariate_terms(weight, n)
        .pop()
        .expect("n >= 1")
        .at_s_power(1)
}

/// `ν(q) = 1 + Σ_n C_n(q, q)`; an `n`-part composition weighs at least `n`,
/// so `n ≤ weight` suffices.
pub fn nu_series(weight: usize) -> TruncatedSeries {
    bivariate_terms(weight, weight)
        .iter()
        .fold(TruncatedSeries::one(weight, 0), |acc, c| {
            &acc + &c.at_s_power(1)
        })
}

/// `ν(q) = 1 / (1 + Σ_{i≥1} (−1)^i q^{2^{i+1}−i−2} / ∏_{k=1}^{i} (1 − q^{2^k−1}))`.
pub fn closed_series(weight: usize) -> TruncatedSeries {
    let mut d = TruncatedSeries::one(weight, 0);
    let mut i = 1u32;
    loop {
        let e = (1usize << (i + 1)) - i as usize - 2;
        if e > weight {
            break;
        }
        let mut t = TruncatedSeries::monomial(weight, 0, e, 0, BigInt::one());
        for k in 1..=i {
            t.div_geometric_in_place((1usize << k) - 1, 0);
        }
        d = if i % 2 == 1 { &d - &t } else { &d + &t };
        i += 1;
    }
    d.inverse().expect("constant term is one")
}

/// Direct enumeration of all such compositions (the empty one included).
pub fn brute_series(weight: usize) -> TruncatedSeries {
    fn go(left: usize, cap: usize, used: usize, counts: &mut [u64]) {
        counts[used] += 1;
        for p in 1..=cap.min(left) {
            go(left - p, 2 * p, used + p, counts);
        }
    }
    let mut counts = vec![0u64; weight + 1];
    go(weight, weight, 0, &mut counts);
    TruncatedSeries::from_coeffs(weight, counts)
}
