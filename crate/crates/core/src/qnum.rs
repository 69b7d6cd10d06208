//! Exact evaluation of Gaussian binomials and the closed-form sizes, thresholds
//! and upper bounds attached to the three families.
//!
//! Every value is an exact [`BigInt`]. Arguments are taken as `i64` so that
//! callers can pass differences such as `n - c` directly; a Gaussian binomial
//! whose lower index is negative or exceeds the upper index is zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact integer used for every count and bound.
pub type ExactInt = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QnumError {
    #[error("c = {c} is not admissible for k = {k}, t = {t}, n = {n}: expected k+1..=2k-t or n")]
    InadmissibleC { c: i64, k: i64, t: i64, n: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), QnumError> {
    if cond {
        Ok(())
    } else {
        Err(QnumError::Precondition(msg()))
    }
}

/// `q^e` for `e >= 0`.
pub fn qpow(q: u64, e: i64) -> BigInt {
    assert!(e >= 0, "negative exponent {e}");
    num_traits::pow(BigInt::from(q), e as usize)
}

/// True when `q` is a prime power `p^d` with `d >= 1`.
pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

/// Gaussian binomial `[a, b]_q` by the telescoping product.
///
/// All numerator factors are multiplied before the single exact division.
/// Returns 1 for `b = 0` and 0 when `b < 0`, `b > a` or `a < 0`.
pub fn gauss_binom(a: i64, b: i64, q: u64) -> BigInt {
    assert!(q >= 2, "field order must be at least 2");
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let one = BigInt::one();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..b {
        num *= qpow(q, a - i) - &one;
        den *= qpow(q, b - i) - &one;
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// Gaussian binomial through the recurrence `[m,i] = [m-1,i-1] + q^i [m-1,i]`.
///
/// Independent of [`gauss_binom`]; the two are used to check each other.
pub fn gauss_binom_pascal(a: i64, b: i64, q: u64) -> BigInt {
    assert!(q >= 2, "field order must be at least 2");
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let (a, b) = (a as usize, b as usize);
    // row[i] holds [m, i] for the current m
    let mut row = vec![BigInt::zero(); b + 1];
    row[0] = BigInt::one();
    let qb = BigInt::from(q);
    for m in 1..=a {
        let top = m.min(b);
        for i in (1..=top).rev() {
            let mut qi = BigInt::one();
            for _ in 0..i {
                qi *= &qb;
            }
            let shifted = &qi * &row[i];
            row[i] = &row[i - 1] + shifted;
        }
    }
    row[b].clone()
}

/// `[m, 1]_q = (q^m - 1)/(q - 1)`; zero for `m < 1`.
pub fn q_int(m: i64, q: u64) -> BigInt {
    gauss_binom(m, 1, q)
}

fn gb(a: i64, b: i64, q: u64) -> BigInt {
    gauss_binom(a, b, q)
}

/// Exact difference `lhs - rhs` together with its sign.
pub fn margin(lhs: &BigInt, rhs: &BigInt) -> (BigInt, Ordering) {
    let d = lhs - rhs;
    let s = if d.is_positive() {
        Ordering::Greater
    } else if d.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    };
    (d, s)
}

/// Number of `m`-subspaces of an `(e+l)`-space meeting a fixed `l`-subspace in
/// dimension exactly `h`.
pub fn type_count(m: i64, h: i64, e: i64, l: i64, q: u64) -> BigInt {
    if !(0 <= h && h <= l && 0 <= m - h && m - h <= e) {
        return BigInt::zero();
    }
    qpow(q, (m - h) * (l - h)) * gb(e, m - h, q) * gb(l, h, q)
}

/// Number of type-`(m, h)` subspaces containing a fixed type-`(m1, h1)` subspace.
pub fn containing_count(m1: i64, h1: i64, m: i64, h: i64, e: i64, l: i64, q: u64) -> BigInt {
    if !(0 <= h1 && h1 <= h && h <= l && 0 <= m1 - h1 && m1 - h1 <= m - h && m - h <= e) {
        return BigInt::zero();
    }
    qpow(q, (l - h) * (m - h - m1 + h1)) * gb(e - (m1 - h1), (m - h) - (m1 - h1), q) * gb(l - h1, h - h1, q)
}

/// Size threshold `f(n,k,t)` in the lower-bound hypothesis on maximal families.
pub fn f_threshold(n: i64, k: i64, t: i64, q: u64) -> BigInt {
    q_int(k - t, q) * gb(n - t - 1, k - t - 1, q) - BigInt::from(q) * gb(k - t, 2, q) * gb(n - t - 2, k - t - 2, q)
}

pub fn g1(t: i64, n: i64, q: u64) -> BigInt {
    q_int(t + 2, q) * gb(n - t - 1, t + 1, q) - BigInt::from(q) * q_int(t + 1, q) * gb(n - t - 2, t, q)
}

pub fn g2(t: i64, n: i64, q: u64) -> BigInt {
    gb(n - t, t + 2, q) - qpow(q, (t + 2) * (t + 2)) * gb(n - 2 * t - 2, t + 2, q)
}

/// The sum that equals `g1 - g2`.
pub fn g_difference_sum(t: i64, n: i64, q: u64) -> BigInt {
    (1..=t).map(|j| qpow(q, j * (t + 2) + 1) * q_int(t + 1 - j, q) * gb(n - t - 2 - j, t, q)).sum()
}

/// `|H1(X, M)|` with `dim X = t`, `dim M = k + 1`.
pub fn h1_size(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    gb(n - t, k - t, q) - qpow(q, (k + 1 - t) * (k - t)) * gb(n - k - 1, k - t, q) + qpow(q, k + 1 - t) * q_int(t, q)
}

/// True when `c` lies in `{k+1, ..., 2k-t} ∪ {n}`.
pub fn c_admissible(t: i64, k: i64, c: i64, n: i64) -> bool {
    c == n || (k + 1..=2 * k - t).contains(&c)
}

/// The three disjoint parts of `H2(X, M, C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Parts {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl H2Parts {
    pub fn total(&self) -> BigInt {
        &self.a + &self.b + &self.c
    }
}

pub fn h2_parts(t: i64, k: i64, c: i64, n: i64, q: u64) -> Result<H2Parts, QnumError> {
    if !c_admissible(t, k, c, n) || c > n {
        return Err(QnumError::InadmissibleC { c, k, t, n });
    }
    let sq = (k - t) * (k - t);
    Ok(H2Parts {
        a: gb(n - t, k - t, q) - qpow(q, sq) * gb(n - k, k - t, q),
        b: qpow(q, sq) * gb(n - c, 2 * k - c - t, q),
        c: qpow(q, k - t + 1) * q_int(c - k, q) * q_int(t, q),
    })
}

/// `|H2(X, M, C)|` with `dim C = c`.
pub fn h2_size(t: i64, k: i64, c: i64, n: i64, q: u64) -> Result<BigInt, QnumError> {
    h2_parts(t, k, c, n, q).map(|p| p.total())
}

/// `|H3(Z)|` with `dim Z = t + 2`.
pub fn h3_size(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    q_int(t + 2, q) * gb(n - t - 1, k - t - 1, q) - BigInt::from(q) * q_int(t + 1, q) * gb(n - t - 2, k - t - 2, q)
}

/// Weaker upper bound on `h1` valid for `t <= k - 3`.
pub fn h1_upper_loose(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    q_int(k - t + 1, q) * gb(n - t - 1, k - t - 1, q)
}

/// Sharper upper bound on `h1` valid for `t <= k - 4`.
pub fn h1_upper_sharp(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    h1_upper_loose(t, k, n, q)
        - qpow(q, (k - t - 1) * (k - t - 2) + 1) * gb(n - k - 1, k - t - 2, q) * gb(k + 1 - t, 2, q)
}

/// Bound for `τ_t = t + 1` with a single covering `(t+1)`-subspace.
pub fn bound_tau1_single(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    gb(n - t - 1, k - t - 1, q)
        + BigInt::from(q) * q_int(t + 1, q) * q_int(k - t, q) * q_int(k - t + 1, q) * gb(n - t - 2, k - t - 2, q)
}

fn interval_head(t: i64, k: i64, n: i64, l: i64, q: u64) -> BigInt {
    q_int(l - t, q) * gb(n - t - 1, k - t - 1, q)
        + qpow(q, l - t) * q_int(k - l + 1, q) * q_int(k - t + 1, q) * gb(n - t - 2, k - t - 2, q)
}

/// Bound for `τ_t = t + 1` when the covers all contain a `t`-space `X` and
/// span an `l`-space, in its general form (valid for every `l`).
pub fn bound_tau1_interval_general(t: i64, k: i64, n: i64, l: i64, q: u64) -> Result<BigInt, QnumError> {
    require(t + 1 <= l && l <= k + 1, || format!("need t+1 <= l <= k+1, got t={t}, l={l}, k={k}"))?;
    Ok(interval_head(t, k, n, l, q) + qpow(q, k + 1 - t) * q_int(t, q) * gb(n - l, k - l + 1, q))
}

/// The sharper form of the interval bound, only valid for `l = t + 2`.
pub fn bound_tau1_interval_sharp(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    let l = t + 2;
    interval_head(t, k, n, l, q) + qpow(q, 2) * q_int(t, q) * q_int(k - t + 1, q) * gb(n - t - 2, k - t - 2, q)
}

/// Interval bound: the sharp form when `l = t + 2`, the general form otherwise.
pub fn bound_tau1_interval(t: i64, k: i64, n: i64, l: i64, q: u64) -> Result<BigInt, QnumError> {
    let general = bound_tau1_interval_general(t, k, n, l, q)?;
    if l == t + 2 {
        Ok(bound_tau1_interval_sharp(t, k, n, q))
    } else {
        Ok(general)
    }
}

/// `[m,t] [k,1]^{m-t-2} [k-t+1,1]^2 [n-m,k-m]`, the bound for `τ_t = m >= t + 2`.
pub fn bound_tau_ge_t2(t: i64, k: i64, n: i64, m: i64, q: u64) -> Result<BigInt, QnumError> {
    require(t >= 2, || format!("need t >= 2, got {t}"))?;
    require(t + 2 <= m && m <= k, || format!("need t+2 <= m <= k, got t={t}, m={m}, k={k}"))?;
    require(n >= 2 * k, || format!("need n >= 2k, got n={n}, k={k}"))?;
    let kt = q_int(k - t + 1, q);
    Ok(gb(m, t, q) * num_traits::pow(q_int(k, q), (m - t - 2) as usize) * &kt * &kt * gb(n - m, k - m, q))
}

/// The `m`-free bound `[t+2,2] [k-t+1,1]^2 [n-t-2,k-t-2]`, valid for `n >= 2k+t+1`.
pub fn bound_tau_ge_t2_uniform(t: i64, k: i64, n: i64, q: u64) -> Result<BigInt, QnumError> {
    require(t >= 2, || format!("need t >= 2, got {t}"))?;
    require(t + 2 <= k, || format!("need t+2 <= k, got t={t}, k={k}"))?;
    require(n >= 2 * k + t + 1, || format!("need n >= 2k+t+1, got n={n}"))?;
    let kt = q_int(k - t + 1, q);
    Ok(gb(t + 2, 2, q) * &kt * &kt * gb(n - t - 2, k - t - 2, q))
}

/// The monotone factor in the `τ_t >= t+2` argument:
/// `p(m) = [m,t] [k,1]^{m-t-2} [n-m,k-m]`.
pub fn tau_ge_t2_profile(t: i64, k: i64, n: i64, m: i64, q: u64) -> BigInt {
    gb(m, t, q) * num_traits::pow(q_int(k, q), (m - t - 2).max(0) as usize) * gb(n - m, k - m, q)
}

/// Case selector for the imported `t = 1` bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T1Case {
    /// `τ_1 = m = k`.
    FullCover,
    /// `m < k` with at least two covering `m`-subspaces.
    ManyCovers,
    /// `m < k` with a unique covering `m`-subspace.
    OneCover,
}

/// Upper bounds for maximal intersecting (`t = 1`) families with `τ_1 = m >= 3`.
pub fn bound_t1_imported(k: i64, n: i64, m: i64, q: u64, case: T1Case) -> Result<BigInt, QnumError> {
    require(3 <= m && m <= k, || format!("need 3 <= m <= k, got m={m}, k={k}"))?;
    let kq = q_int(k, q);
    let pow_k = |e: i64| num_traits::pow(kq.clone(), e as usize);
    Ok(match case {
        T1Case::FullCover => pow_k(k),
        T1Case::ManyCovers => {
            q_int(m - 1, q) * pow_k(m - 1) * gb(n - m, k - m, q)
                + qpow(q, 2 * (m - 1)) * pow_k(m - 2) * gb(n - m, k - m, q)
        }
        T1Case::OneCover => {
            q_int(m - 1, q) * q_int(m, q) * pow_k(m - 2) * gb(n - m, k - m, q)
                + qpow(q, m - 1) * q_int(k - m + 1, q) * q_int(m, q) * pow_k(m - 1) * gb(n - m - 1, k - m - 1, q)
        }
    })
}

/// `(q+1)[k,1]^2 [n-3,k-3] + q^4 [k,1] [n-3,k-3]`: the bound for `3 <= τ_1 < k`.
pub fn bound_t1_closed(k: i64, n: i64, q: u64) -> BigInt {
    let kq = q_int(k, q);
    BigInt::from(q + 1) * &kq * &kq * gb(n - 3, k - 3, q) + qpow(q, 4) * kq * gb(n - 3, k - 3, q)
}

/// Bound on `|F_S|` for an `s`-space `S` meeting some member in dimension `r < t`.
pub fn fs_bound(k: i64, t: i64, r: i64, s: i64, n: i64, q: u64) -> Result<BigInt, QnumError> {
    require(t - 1 <= s && s <= k - 1, || format!("need t-1 <= s <= k-1, got s={s}"))?;
    require(0 <= r && r < t, || format!("need 0 <= r < t, got r={r}"))?;
    Ok(gb(k - r, t - r, q) * gb(n - s - t + r, k - s - t + r, q))
}

/// Parameters of a construction point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Params {
    pub n: i64,
    pub k: i64,
    pub t: i64,
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
}

impl Params {
    pub fn new(n: i64, k: i64, t: i64, q: u64) -> Self {
        Params { n, k, t, q, c: None }
    }

    pub fn with_c(mut self, c: i64) -> Self {
        self.c = Some(c);
        self
    }

    /// Checks `q` prime power, `1 <= t <= k-2`, `2k <= n` and, if present, `c`.
    pub fn validate_construction(&self) -> Result<(), QnumError> {
        let Params { n, k, t, q, c } = *self;
        require(is_prime_power(q), || format!("q = {q} is not a prime power"))?;
        require(1 <= t && t <= k - 2, || format!("need 1 <= t <= k-2, got t={t}, k={k}"))?;
        require(2 * k <= n, || format!("need 2k <= n, got k={k}, n={n}"))?;
        if let Some(c) = c {
            if !c_admissible(t, k, c, n) {
                return Err(QnumError::InadmissibleC { c, k, t, n });
            }
        }
        Ok(())
    }

    /// True on the range `2k + t + min(4, 2t) <= n`, `t <= k - 2` where the extremal results apply.
    pub fn in_extremal_range(&self) -> bool {
        self.t >= 1 && self.t <= self.k - 2 && 2 * self.k + self.t + (2 * self.t).min(4) <= self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// Counts reduced-echelon k x n matrices over the prime field GF(p) by
    /// brute force over all matrices.
    fn count_rref_forms(n: usize, k: usize, p: u8) -> u64 {
        let cells = n * k;
        let total = (p as u64).pow(cells as u32);
        let mut count = 0;
        for code in 0..total {
            let mut m = vec![0u8; cells];
            let mut c = code;
            for cell in m.iter_mut() {
                *cell = (c % p as u64) as u8;
                c /= p as u64;
            }
            let mut last_pivot: Option<usize> = None;
            let mut ok = true;
            let mut pivots = Vec::new();
            for r in 0..k {
                let row = &m[r * n..(r + 1) * n];
                match row.iter().position(|&x| x != 0) {
                    Some(pc) if last_pivot.map_or(true, |lp| pc > lp) && row[pc] == 1 => {
                        last_pivot = Some(pc);
                        pivots.push(pc);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                for (r, &pc) in pivots.iter().enumerate() {
                    for r2 in 0..k {
                        if r2 != r && m[r2 * n + pc] != 0 {
                            ok = false;
                        }
                    }
                }
            }
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn gauss_binom_matches_brute_force_rref_count() {
        assert_eq!(count_rref_forms(4, 2, 2), 35);
        for &(n, k, p) in &[(4usize, 2usize, 2u8), (5, 2, 2), (4, 1, 3), (4, 2, 3), (3, 2, 5)] {
            let brute = count_rref_forms(n, k, p);
            assert_eq!(gauss_binom(n as i64, k as i64, p as u64), b(brute as i64), "({n},{k},{p})");
        }
    }

    #[test]
    fn gauss_binom_conventions() {
        assert_eq!(gauss_binom(4, 2, 2), b(35));
        assert_eq!(gauss_binom(7, 0, 3), b(1));
        assert_eq!(gauss_binom(5, -1, 2), b(0));
        assert_eq!(gauss_binom(5, 5, 2), b(1));
        assert_eq!(gauss_binom(5, 9, 2), b(0));
        assert_eq!(gauss_binom(9, 3, 2), b(788035));
    }

    #[test]
    fn product_and_recurrence_agree() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for a in 0..=25 {
                for bb in -1..=a + 1 {
                    assert_eq!(gauss_binom(a, bb, q), gauss_binom_pascal(a, bb, q), "[{a},{bb}]_{q}");
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<u64> = (1..=30).filter(|&q| is_prime_power(q)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]);
    }

    #[test]
    fn type_and_containing_counts() {
        assert_eq!(type_count(2, 1, 2, 2, 2), b(18));
        assert_eq!(type_count(0, 0, 2, 2, 2), b(1));
        assert_eq!(type_count(2, 3, 2, 2, 2), b(0));
        assert_eq!(containing_count(1, 1, 2, 1, 2, 2, 2), b(6));
        assert_eq!(containing_count(0, 0, 2, 1, 2, 2, 2), b(18));
        assert_eq!(containing_count(2, 0, 1, 0, 2, 2, 2), b(0));
    }

    #[test]
    fn type_counts_partition_the_grassmannian() {
        for q in [2u64, 3] {
            for total in 2..=10 {
                for l in 1..total {
                    let e = total - l;
                    for m in 0..=total {
                        let s: BigInt = (0..=m).map(|h| type_count(m, h, e, l, q)).sum();
                        assert_eq!(s, gauss_binom(total, m, q));
                    }
                }
            }
        }
    }

    #[test]
    fn threshold_values() {
        // Recomputed with the recurrence path.
        let p = gauss_binom_pascal;
        let f = |n: i64, k: i64, t: i64, q: u64| {
            p(k - t, 1, q) * p(n - t - 1, k - t - 1, q) - BigInt::from(q) * p(k - t, 2, q) * p(n - t - 2, k - t - 2, q)
        };
        assert_eq!(f(9, 3, 1, 2), b(379));
        assert_eq!(f_threshold(9, 3, 1, 2), b(379));
        assert_eq!(f_threshold(6, 3, 1, 2), b(43));
        for n in 8..20 {
            assert_eq!(f_threshold(n, 4, 2, 3), f(n, 4, 2, 3));
        }
    }

    #[test]
    fn g_values_and_identity() {
        assert_eq!(g1(1, 6, 2), b(203));
        assert_eq!(g2(1, 6, 2), b(155));
        assert_eq!(g_difference_sum(1, 6, 2), b(48));
        assert_eq!(g1(4, 20, 3) - g2(4, 20, 3), g_difference_sum(4, 20, 3));
    }

    #[test]
    fn family_sizes() {
        assert_eq!(h1_size(1, 3, 9, 2), b(883));
        // q^{k+1-t} = 8 here, so the last term is 8 rather than 4.
        assert_eq!(h1_size(1, 3, 6, 2), b(155 - 64 + 8));
        assert_eq!(h2_size(1, 3, 5, 9, 2).unwrap(), b(419));
        assert_eq!(h2_size(1, 3, 9, 9, 2).unwrap(), b(883));
        assert_eq!(h2_size(1, 3, 4, 9, 2).unwrap(), h1_size(1, 3, 9, 2));
        assert_eq!(h3_size(1, 3, 9, 2), b(883));
        assert_eq!(h3_size(1, 3, 6, 2), b(99));
        assert_eq!(h3_size(1, 3, 6, 3), b(508));
        let parts = h2_parts(1, 3, 5, 9, 2).unwrap();
        assert_eq!(parts.b, b(16));
        assert_eq!(parts.total(), b(419));
    }

    #[test]
    fn h2_rejects_inadmissible_c() {
        assert!(matches!(h2_size(1, 3, 3, 9, 2), Err(QnumError::InadmissibleC { .. })));
        assert!(matches!(h2_size(1, 3, 6, 9, 2), Err(QnumError::InadmissibleC { .. })));
    }

    #[test]
    fn degenerate_t_equals_k_minus_2() {
        for (t, n) in [(1, 7), (2, 9), (3, 12)] {
            let k = t + 2;
            assert_eq!(h3_size(t, k, n, 2), h2_size(t, k, n, n, 2).unwrap());
            // [2,2] = 1 and [n-t-2, 0] = 1 in the second term of f
            let direct = q_int(2, 2) * gauss_binom(n - t - 1, 1, 2) - b(2);
            assert_eq!(f_threshold(n, k, t, 2), direct);
        }
    }

    #[test]
    fn covering_bounds() {
        assert_eq!(bound_tau1_single(1, 3, 9, 2), b(253));
        assert_eq!(bound_tau1_single(1, 3, 10, 2), b(381));
        let sharp = bound_tau1_interval(1, 4, 12, 3, 2).unwrap();
        let general = bound_tau1_interval_general(1, 4, 12, 3, 2).unwrap();
        assert!(sharp < general);
        let l4 = bound_tau1_interval(1, 4, 12, 4, 2).unwrap();
        assert_eq!(l4, bound_tau1_interval_general(1, 4, 12, 4, 2).unwrap());
        // l = t + 1 collapses the first addend to [1,1]·[n-t-1, k-t-1]
        let head = interval_head(1, 4, 12, 2, 2);
        let tail = qpow(2, 1) * q_int(3, 2) * q_int(4, 2) * gauss_binom(9, 1, 2);
        assert_eq!(head, gauss_binom(10, 2, 2) + tail);
        assert!(bound_tau1_interval(1, 4, 12, 6, 2).is_err());
    }

    #[test]
    fn tau_ge_t2_bounds() {
        assert_eq!(bound_tau_ge_t2(2, 4, 13, 4, 2).unwrap(), b(1715));
        assert_eq!(bound_tau_ge_t2_uniform(2, 4, 13, 2).unwrap(), b(1715));
        assert!(bound_tau_ge_t2(1, 4, 13, 4, 2).is_err());
        assert!(bound_tau_ge_t2_uniform(2, 4, 10, 2).is_err());
    }

    #[test]
    fn imported_t1_bounds() {
        assert_eq!(bound_t1_imported(3, 9, 3, 2, T1Case::FullCover).unwrap(), b(343));
        assert_eq!(bound_t1_imported(4, 11, 3, 2, T1Case::ManyCovers).unwrap(), b(233325));
        for (k, n) in [(4, 11), (5, 13), (6, 15)] {
            for q in [2, 3] {
                assert_eq!(bound_t1_imported(k, n, 3, q, T1Case::ManyCovers).unwrap(), bound_t1_closed(k, n, q));
            }
        }
        assert!(bound_t1_imported(4, 11, 2, 2, T1Case::OneCover).is_err());
    }

    #[test]
    fn fs_bounds() {
        assert_eq!(fs_bound(3, 1, 0, 1, 8, 2).unwrap(), b(441));
        let (k, t, n) = (5, 3, 12);
        // second factor degenerates to [n-k, 0] = 1
        assert_eq!(fs_bound(k, t, t - 1, k - 1, n, 2).unwrap(), q_int(k - t + 1, 2));
        assert!(fs_bound(3, 1, 0, 1, 9, 2).unwrap() > fs_bound(3, 1, 0, 1, 8, 2).unwrap());
        assert!(fs_bound(3, 1, 1, 1, 8, 2).is_err());
    }

    #[test]
    fn margin_sign() {
        assert_eq!(margin(&b(883), &b(379)), (b(504), Ordering::Greater));
        assert_eq!(margin(&b(3), &b(3)).1, Ordering::Equal);
        assert_eq!(margin(&b(1), &b(3)).1, Ordering::Less);
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(9, 3, 1, 2).validate_construction().is_ok());
        assert!(Params::new(9, 3, 1, 6).validate_construction().is_err());
        assert!(Params::new(5, 3, 1, 2).validate_construction().is_err());
        assert!(Params::new(9, 3, 1, 2).with_c(3).validate_construction().is_err());
        assert!(Params::new(9, 3, 1, 2).in_extremal_range());
        assert!(!Params::new(8, 3, 1, 2).in_extremal_range());
    }
}
