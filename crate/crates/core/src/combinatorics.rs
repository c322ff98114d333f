//! Counting formulas and trend curves.
//!
//! Everything returning a [`BigCount`] is exact. The `ln_*` functions and
//! the curve builders work in natural-log space with `f64` and are only
//! meant for plotting data and asymptotic trend checks.
//!
//! Where a formula needs the square root of `n` as a number of through
//! strands, it uses `⌊√n⌋` ([`isqrt`]).

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

/// Exact non-negative integer count.
pub type BigCount = BigUint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("{0} is not a perfect square")]
    NotPerfectSquare(usize),
}

/// A positive real stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LogValue(f64);

impl LogValue {
    pub fn from_ln(ln: f64) -> LogValue {
        LogValue(ln)
    }

    pub fn of(count: &BigCount) -> LogValue {
        LogValue(ln_big(count))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }
}

pub fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(a, b)` with the convention that it vanishes for `b < 0` or `b > a`.
pub fn binomial_signed(a: i64, b: i64) -> BigCount {
    if a < 0 || b < 0 || b > a {
        BigUint::zero()
    } else {
        binomial(a as usize, b as usize)
    }
}

/// The Motzkin number `M_m`: crossingless partial matchings of `m` points.
///
/// Summed as `Σ_j C(m, 2j) · Cat(j)`, stepping each term from the previous
/// one.
pub fn motzkin_number(m: usize) -> BigCount {
    // T_j = C(m, 2j) Cat(j);  T_{j+1} / T_j = (m-2j)(m-2j-1) / ((j+1)(j+2))
    let mut term = BigUint::one();
    let mut sum = BigUint::zero();
    let mut j = 0;
    while 2 * j <= m {
        sum += &term;
        if 2 * j + 2 > m {
            break;
        }
        term *= (m - 2 * j) * (m - 2 * j - 1);
        term /= (j + 1) * (j + 2);
        j += 1;
    }
    sum
}

/// `M_0, …, M_{len-1}` by the convolution `M_{m+1} = M_m + Σ_i M_i M_{m-1-i}`.
pub fn motzkin_sequence(len: usize) -> Vec<BigCount> {
    let mut seq: Vec<BigCount> = Vec::with_capacity(len);
    for m in 0..len {
        let next = if m == 0 {
            BigUint::one()
        } else {
            let prev = &seq[m - 1];
            let conv: BigUint = (0..m.saturating_sub(1))
                .map(|i| &seq[i] * &seq[m - 2 - i])
                .sum();
            prev + conv
        };
        seq.push(next);
    }
    seq
}

/// Number of half-diagrams on `n` nodes with `k` through endpoints (the
/// common size of the left and right cells in the J-cell of rank `k`):
///
/// `Σ_t (k+1)/(k+t+1) · C(n, k+2t) · C(k+2t, t)`.
pub fn lcell_size(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    (0..=(n - k) / 2)
        .map(|t| {
            let num = binomial(n, k + 2 * t) * binomial(k + 2 * t, t) * (k + 1);
            let (q, r) = num_integer::Integer::div_rem(&num, &BigUint::from(k + t + 1));
            debug_assert!(r.is_zero());
            q
        })
        .sum()
}

/// The summand `(k+1)/(k+t+1) · C(n, t) · C(n-t, k+t)`, exactly.
pub fn summand(n: usize, k: usize, t: usize) -> BigRational {
    let num = binomial(n, t) * binomial_signed(n as i64 - t as i64, (k + t) as i64) * (k + 1);
    BigRational::new(num.into(), (k + t + 1).into())
}

/// The cell size at `k = √n` summed in the rewritten binomial form. Only
/// defined at perfect squares.
pub fn lcell_size_binomial_form(n: usize) -> Result<BigCount, CombinatoricsError> {
    let k = isqrt(n);
    if k * k != n {
        return Err(CombinatoricsError::NotPerfectSquare(n));
    }
    let total: BigRational = (0..=n).map(|t| summand(n, k, t)).sum();
    debug_assert!(total.is_integer());
    Ok(total.to_integer().to_biguint().expect("non-negative"))
}

/// Size of the full-rank block found among the rows whose `k` through
/// strands sit on the first `k` nodes:
/// `Σ_t 1/(t+1) · C(n-k, 2t) · C(2t, t)`.
pub fn submatrix_bound(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let m = n - k;
    (0..=m / 2)
        .map(|t| binomial(m, 2 * t) * binomial(2 * t, t) / (t + 1))
        .sum()
}

/// The default lower-bound instance, `k = ⌊√n⌋`.
pub fn submatrix_bound_default(n: usize) -> BigCount {
    submatrix_bound(n, isqrt(n))
}

/// `k` maximising `lcell_size(n, k)` (smallest on ties).
pub fn argmax_lcell(n: usize) -> usize {
    let sizes: Vec<BigCount> = (0..=n).map(|k| lcell_size(n, k)).collect();
    argmax_first(&sizes)
}

fn argmax_first<T: PartialOrd>(xs: &[T]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if *x > xs[best] {
            best = i;
        }
    }
    best
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.filter(|x| x.is_finite()).collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return f64::NEG_INFINITY;
    }
    max + terms.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `ln M_m`.
pub fn ln_motzkin(m: usize) -> f64 {
    // C(m, 2j) Cat(j) = m! / ((m-2j)! j! (j+1)!)
    let lm = ln_gamma(m as f64 + 1.0);
    log_sum_exp((0..=m / 2).map(|j| {
        lm - ln_gamma((m - 2 * j) as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma(j as f64 + 2.0)
    }))
}

/// `ln` of [`summand`].
pub fn ln_summand(n: usize, k: usize, t: usize) -> f64 {
    if t > n || k + 2 * t > n {
        return f64::NEG_INFINITY;
    }
    ((k + 1) as f64).ln() - ((k + t + 1) as f64).ln() + ln_binomial(n, t) + ln_binomial(n - t, k + t)
}

/// `ln lcell_size(n, k)`.
pub fn ln_lcell_size(n: usize, k: usize) -> f64 {
    log_sum_exp((0..=n).map(|t| ln_summand(n, k, t)))
}

/// Below this size [`peak_t`] compares the summands exactly.
pub const EXACT_PEAK_LIMIT: usize = 256;

/// The `t` maximising the binomial-form summand at `k = ⌊√n⌋`, smallest on
/// ties. Exact up to [`EXACT_PEAK_LIMIT`], log space above.
pub fn peak_t(n: usize) -> usize {
    if n <= EXACT_PEAK_LIMIT {
        peak_t_exact(n)
    } else {
        peak_t_log(n)
    }
}

pub fn peak_t_exact(n: usize) -> usize {
    let k = isqrt(n);
    let terms: Vec<BigRational> = (0..=n).map(|t| summand(n, k, t)).collect();
    argmax_first(&terms)
}

pub fn peak_t_log(n: usize) -> usize {
    let k = isqrt(n);
    let terms: Vec<f64> = (0..=n).map(|t| ln_summand(n, k, t)).collect();
    // values within rounding of each other count as a tie
    let mut best = 0;
    for (i, &x) in terms.iter().enumerate() {
        if x - terms[best] > 1e-12 * terms[best].abs().max(1.0) {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NthRootPoint {
    pub n: usize,
    pub k: usize,
    /// `(M_{n-k})^{1/n}`.
    pub value: f64,
    /// `3 / 3^{1/√n}`.
    pub reference: f64,
}

/// `submatrix_bound(n, ⌊√n⌋)^{1/n}` along `ns`.
pub fn nth_root_curve(ns: impl IntoIterator<Item = usize>) -> Vec<NthRootPoint> {
    ns.into_iter()
        .filter(|&n| n > 0)
        .map(|n| {
            let k = isqrt(n);
            NthRootPoint {
                n,
                k,
                value: (ln_motzkin(n - k) / n as f64).exp(),
                reference: 3.0 / 3f64.powf(1.0 / (n as f64).sqrt()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub n: usize,
    /// `lcell_size(n, ⌊√n⌋) / √|Mo_n|`.
    pub ssgapr: f64,
    /// `(submatrix_bound(n, ⌊√n⌋) / √|Mo_n|)^{1/n}`.
    pub gapr_root: f64,
    /// `lcell_size(n, k_odd) / √|Mo_n|`, `k_odd` the largest odd `k ≤ ⌊√n⌋`.
    pub faithr: f64,
}

pub fn largest_odd_at_most(k: usize) -> Option<usize> {
    match k {
        0 => None,
        k if k % 2 == 1 => Some(k),
        k => Some(k - 1),
    }
}

pub fn ratio_curves(ns: impl IntoIterator<Item = usize>) -> Vec<RatioPoint> {
    ns.into_iter()
        .filter(|&n| n > 0)
        .map(|n| {
            let k = isqrt(n);
            let half_size = 0.5 * ln_motzkin(2 * n);
            let kodd = largest_odd_at_most(k).expect("n >= 1 gives k >= 1");
            RatioPoint {
                n,
                ssgapr: (ln_lcell_size(n, k) - half_size).exp(),
                gapr_root: ((ln_motzkin(n - k) - half_size) / n as f64).exp(),
                faithr: (ln_lcell_size(n, kodd) - half_size).exp(),
            }
        })
        .collect()
}

/// `(k, lcell_size(n, k))` for `k = 0..=n`.
pub fn ssdim_curve(n: usize) -> Vec<(usize, BigCount)> {
    (0..=n).map(|k| (k, lcell_size(n, k))).collect()
}

/// `(t, ln summand)` at `k = ⌊√n⌋` over the support of the sum.
pub fn summand_curve(n: usize) -> Vec<(usize, f64)> {
    let k = isqrt(n);
    (0..=(n - k) / 2).map(|t| (t, ln_summand(n, k, t))).collect()
}

/// Decimal strings, for JSON export of exact counts.
pub fn decimal_strings<'a>(xs: impl IntoIterator<Item = &'a BigCount>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigCount {
        BigUint::from(x)
    }

    #[test]
    fn small_motzkin_numbers() {
        let first: Vec<BigCount> = (0..10).map(motzkin_number).collect();
        let expect: Vec<BigCount> = [1u64, 1, 2, 4, 9, 21, 51, 127, 323, 835]
            .into_iter()
            .map(big)
            .collect();
        assert_eq!(first, expect);
        assert_eq!(motzkin_sequence(10), expect);
    }

    #[test]
    fn lcell_examples() {
        assert_eq!(lcell_size(3, 1), big(5));
        assert_eq!(lcell_size(4, 2), big(9));
        assert_eq!(lcell_size(5, 1), big(30));
        for n in 0..10 {
            assert_eq!(lcell_size(n, n), big(1));
        }
        assert_eq!(lcell_size(3, 4), big(0));
    }

    #[test]
    fn binomial_form_rejects_non_squares() {
        assert_eq!(lcell_size_binomial_form(1).unwrap(), big(1));
        assert_eq!(lcell_size_binomial_form(4).unwrap(), big(9));
        assert_eq!(
            lcell_size_binomial_form(5),
            Err(CombinatoricsError::NotPerfectSquare(5))
        );
    }

    #[test]
    fn submatrix_bound_examples() {
        assert_eq!(submatrix_bound(5, 1), big(9));
        assert_eq!(submatrix_bound(4, 2), big(2));
        assert_eq!(submatrix_bound(7, 7), big(1));
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(5, 6), big(0));
        assert_eq!(binomial_signed(5, -1), big(0));
        assert_eq!(binomial_signed(-1, 0), big(0));
    }

    #[test]
    fn isqrt_is_floor() {
        for n in 0..2000 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }

    #[test]
    fn log_space_agrees_with_exact() {
        for m in [0usize, 1, 5, 30, 120] {
            let exact = LogValue::of(&motzkin_number(m)).ln();
            assert!((ln_motzkin(m) - exact).abs() < 1e-9 * exact.max(1.0), "m={m}");
        }
        for (n, k) in [(9, 3), (40, 6), (100, 10)] {
            let exact = LogValue::of(&lcell_size(n, k)).ln();
            assert!((ln_lcell_size(n, k) - exact).abs() < 1e-9 * exact);
        }
    }

    #[test]
    fn peak_routes_agree() {
        for n in [9usize, 50, 100, 200, 256] {
            assert_eq!(peak_t_exact(n), peak_t_log(n), "n={n}");
        }
        assert!(peak_t(9) <= 9);
    }

    #[test]
    fn small_ratio_matches_exact_values() {
        let p = ratio_curves([3]).pop().unwrap();
        assert!((p.ssgapr - 5.0 / 51f64.sqrt()).abs() < 1e-12);
        assert!((p.faithr - 5.0 / 51f64.sqrt()).abs() < 1e-12);
        assert!((p.gapr_root - (2.0 / 51f64.sqrt()).powf(1.0 / 3.0)).abs() < 1e-12);
    }
}
