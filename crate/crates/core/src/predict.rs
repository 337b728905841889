//! Closed-form probabilities for random abelianizations, each with a
//! truncation error bound.
//!
//! `ζ(s)` is evaluated by Euler–Maclaurin summation. Euler products over
//! primes are split as `ζ(k)^{-1} · ∏_p (factor / (1 − p^{-k}))` so that the
//! truncated part converges like `C^{-k}` instead of `C^{1-k}`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default prime cutoff for Euler products.
pub const DEFAULT_CUTOFF: u64 = 1_000_000;

/// A probability with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbValue {
    pub value: f64,
    pub err_bound: f64,
}

impl ProbValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            err_bound: 0.0,
        }
    }

    /// Value truncated (not rounded) to `digits` decimal places.
    pub fn truncated(&self, digits: u32) -> f64 {
        truncate(self.value, digits)
    }

    /// Whether `x` lies within the error bound.
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.err_bound
    }
}

pub fn truncate(x: f64, digits: u32) -> f64 {
    let scale = 10f64.powi(digits as i32);
    (x * scale).floor() / scale
}

/// Four-digit truncated value formatted without the leading zero, e.g. `.6079`.
pub fn format_truncated(x: f64, digits: u32) -> String {
    let scaled = (x * 10f64.powi(digits as i32)).floor() as u64;
    let unit = 10u64.pow(digits);
    if scaled >= unit {
        format!("{}.{:0width$}", scaled / unit, scaled % unit, width = digits as usize)
    } else {
        format!(".{:0width$}", scaled, width = digits as usize)
    }
}

// B_2, B_4, ..., B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];
const EM_TERMS: usize = 16;
const EM_CORRECTIONS: usize = 8;

/// `ζ(s)` for integer `s ≥ 2`, with error bound.
pub fn zeta(s: i64) -> Result<ProbValue> {
    if s < 2 {
        return Err(Error::Divergent(s));
    }
    let sf = s as f64;
    let n = EM_TERMS as f64;
    let head: f64 = (1..EM_TERMS).rev().map(|k| (k as f64).powf(-sf)).sum();
    let mut total = head + n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);

    // term_j = B_{2j}/(2j)! · s(s+1)⋯(s+2j−2) · N^{−s−2j+1}
    let mut coef = sf * n.powf(-sf - 1.0) / 2.0; // j = 1 without B_2
    let mut omitted = 0.0;
    for j in 1..=EM_CORRECTIONS + 1 {
        if j > 1 {
            let a = 2.0 * j as f64;
            coef *= (sf + a - 3.0) * (sf + a - 2.0) / ((a - 1.0) * a * n * n);
        }
        let term = BERNOULLI[j - 1] * coef;
        if j <= EM_CORRECTIONS {
            total += term;
        } else {
            omitted = term.abs();
        }
    }
    Ok(ProbValue {
        value: total,
        err_bound: omitted + 4.0 * f64::EPSILON * total,
    })
}

fn product_of(values: impl IntoIterator<Item = ProbValue>) -> ProbValue {
    let mut value = 1.0;
    let mut rel = 0.0;
    for v in values {
        value *= v.value;
        rel += v.err_bound / v.value;
    }
    ProbValue {
        value,
        err_bound: value * rel,
    }
}

fn reciprocal(v: ProbValue) -> ProbValue {
    let value = 1.0 / v.value;
    ProbValue {
        value,
        err_bound: value * v.err_bound / v.value,
    }
}

/// `Z(m) = ζ(2)ζ(3)⋯ζ(m)`.
pub fn zeta_product(m: usize) -> Result<ProbValue> {
    if m < 2 {
        return Err(Error::InvalidRank(m));
    }
    let zs = (2..=m as i64).map(zeta).collect::<Result<Vec<_>>>()?;
    Ok(product_of(zs))
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn default_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(DEFAULT_CUTOFF))
}

/// Runs `f` on the primes up to `cutoff`, reusing the cached sieve when it suffices.
fn with_primes<T>(cutoff: u64, f: impl FnOnce(&[u64]) -> T) -> T {
    if cutoff <= DEFAULT_CUTOFF {
        let ps = default_primes();
        let end = ps.partition_point(|&p| p <= cutoff);
        f(&ps[..end])
    } else {
        f(&sieve(cutoff))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Rounding allowance for a product of `n` floating point factors.
fn rounding(n: usize) -> f64 {
    (n as f64 + 8.0) * f64::EPSILON
}

/// `P(m) = ∏_p (1 + p^{-2} + ⋯ + p^{-m})` truncated at `cutoff`.
///
/// Uses `(1 − p^{-2})(1 + p^{-2} + ⋯ + p^{-m}) = 1 + p^{-3} − p^{-m-1} − p^{-m-2}`
/// (for `m = 2` the right side is `1 − p^{-4}`), so the truncated tail has
/// relative size at most `3/C²`.
pub fn euler_p_with_cutoff(m: usize, cutoff: u64) -> Result<ProbValue> {
    if m < 2 {
        return Err(Error::InvalidRank(m));
    }
    if cutoff < 2 {
        return Err(Error::InvalidConfig(format!("prime cutoff {cutoff}")));
    }
    let z2 = zeta(2)?;
    let mf = m as f64;
    let (prod, count) = with_primes(cutoff, |ps| {
        let mut prod = 1.0f64;
        for &p in ps {
            let pf = p as f64;
            let f = if m == 2 {
                1.0 - pf.powi(-4)
            } else {
                1.0 + pf.powi(-3) - pf.powf(-mf - 1.0) - pf.powf(-mf - 2.0)
            };
            prod *= f;
        }
        (prod, ps.len())
    });
    let c = cutoff as f64;
    let value = z2.value * prod;
    Ok(ProbValue {
        value,
        err_bound: value * (3.0 / (c * c) + z2.err_bound / z2.value + rounding(count)),
    })
}

pub fn euler_p(m: usize) -> Result<ProbValue> {
    euler_p_with_cutoff(m, DEFAULT_CUTOFF)
}

/// Probability that `Z^m/⟨R⟩` has rank below `m` for `r` random vectors: `1/ζ(rm)`.
pub fn prob_rank_drop(m: usize, r: usize) -> Result<ProbValue> {
    if m < 2 {
        return Err(Error::InvalidRank(m));
    }
    if r < 1 {
        return Err(Error::InvalidConfig("relator count must be at least 1".into()));
    }
    Ok(reciprocal(zeta((r * m) as i64)?))
}

/// Probability that `Z^m/⟨R⟩` is cyclic for `r = m − 1` or `r = m` random vectors.
pub fn prob_cyclic(m: usize, r: usize) -> Result<ProbValue> {
    prob_cyclic_with_cutoff(m, r, DEFAULT_CUTOFF)
}

pub fn prob_cyclic_with_cutoff(m: usize, r: usize, cutoff: u64) -> Result<ProbValue> {
    if m < 2 {
        return Err(Error::InvalidRank(m));
    }
    let z = zeta_product(m)?;
    if r + 1 == m {
        Ok(reciprocal(z))
    } else if r == m {
        let p = euler_p_with_cutoff(m, cutoff)?;
        Ok(product_of([p, reciprocal(z)]))
    } else {
        Err(Error::Unsupported(format!(
            "cyclic probability for m = {m}, r = {r}"
        )))
    }
}

/// Probability that `r > m` random vectors span `Z^m`: `1/(ζ(r−m+1)⋯ζ(r))`.
/// For `r ≤ m` this is exactly zero.
pub fn prob_trivial(m: usize, r: usize) -> Result<ProbValue> {
    if m < 1 {
        return Err(Error::InvalidRank(m));
    }
    if r <= m {
        return Ok(ProbValue::exact(0.0));
    }
    let zs = ((r - m + 1)..=r)
        .map(|s| zeta(s as i64))
        .collect::<Result<Vec<_>>>()?;
    Ok(reciprocal(product_of(zs)))
}

/// Limiting probability that a random weight vector in `Z^m` is primitive.
pub fn prob_primitive(m: usize) -> Result<ProbValue> {
    Ok(reciprocal(zeta(m as i64)?))
}

/// `1 − (1 − 1/p)(1 − 1/p²)⋯(1 − 1/p^m)`: the probability that a random
/// `m × m` matrix is singular mod `p`.
#[allow(non_snake_case)]
pub fn P_m_p(p: u64, m: usize) -> Result<f64> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(singular_mod_p(p as f64, m))
}

fn singular_mod_p(p: f64, m: usize) -> f64 {
    // 1 − ∏(1 − x_i) accumulated directly to avoid cancellation for large p.
    let mut s = 0.0;
    for i in 1..=m {
        let x = p.powi(-(i as i32));
        s = s + x - s * x;
    }
    s
}

/// Limiting probability that the determinants of `k` random `m × m` integer
/// matrices are coprime: `∏_p (1 − P_m(p)^k)`.
///
/// For `k ≥ 2` the primes up to `cutoff` are evaluated exactly after
/// factoring out `1/ζ(k)`; since `p^{-1} ≤ P_m(p) ≤ 1/(p − 1)`, the dropped
/// tail has relative size at most `4/(C − 2)^k`. For `k = 1` the product
/// diverges to zero and the exact limit `0` is returned.
pub fn prob_gcd_dets_one(m: usize, k: usize, cutoff: u64) -> Result<ProbValue> {
    if m < 2 {
        return Err(Error::InvalidRank(m));
    }
    if k < 1 {
        return Err(Error::InvalidConfig("matrix count must be at least 1".into()));
    }
    if k == 1 {
        return Ok(ProbValue::exact(0.0));
    }
    if cutoff < 3 {
        return Err(Error::InvalidConfig(format!("prime cutoff {cutoff}")));
    }
    let zk = zeta(k as i64)?;
    let (prod, count) = with_primes(cutoff, |ps| {
        let mut prod = 1.0f64;
        for &p in ps {
            let pf = p as f64;
            let q = singular_mod_p(pf, m).powi(k as i32);
            prod *= (1.0 - q) / (1.0 - pf.powi(-(k as i32)));
        }
        (prod, ps.len())
    });
    let value = prod / zk.value;
    let tail = 4.0 / (cutoff as f64 - 2.0).powi(k as i32);
    Ok(ProbValue {
        value,
        err_bound: value * (tail + zk.err_bound / zk.value + 2.0 * rounding(count)),
    })
}

/// The raw truncated product `∏_{p ≤ cutoff} (1 − P_m(p)^k)`, nonincreasing in the cutoff.
pub fn gcd_dets_partial_product(m: usize, k: usize, cutoff: u64) -> f64 {
    with_primes(cutoff, |ps| {
        ps.iter()
            .map(|&p| 1.0 - singular_mod_p(p as f64, m).powi(k as i32))
            .product()
    })
}

fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let m = rows.len();
    let r = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..r {
        let Some(piv) = (rank..m).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for i in rank + 1..m {
            let f = rows[i][col] * inv % p;
            if f != 0 {
                for j in col..r {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Corank distribution by enumerating all `p^{mr}` matrices.
pub fn corank_dist_enumerate(m: usize, r: usize, p: u64) -> Result<Vec<BigRational>> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let cells = (m * r) as u32;
    let total = p
        .checked_pow(cells)
        .ok_or_else(|| Error::Unsupported(format!("enumerating {p}^{cells} matrices")))?;
    let mut counts = vec![0u64; m + 1];
    let mut digits = vec![0u64; m * r];
    for _ in 0..total {
        let mut rows: Vec<Vec<u64>> = digits.chunks(r.max(1)).map(|c| c.to_vec()).collect();
        rows.resize(m, vec![0; r]);
        if r == 0 {
            rows.iter_mut().for_each(Vec::clear);
        }
        let rank = rank_mod_p(&mut rows, p);
        counts[m - rank] += 1;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    let denom = BigInt::from(total);
    Ok(counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), denom.clone()))
        .collect())
}

/// Corank distribution by adding columns one at a time: a new uniform
/// column lies in a rank-`j` column space with probability `p^{j−m}`.
pub fn corank_dist_recursive(m: usize, r: usize, p: u64) -> Result<Vec<BigRational>> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let pb = BigInt::from(p);
    let mut by_rank = vec![BigRational::zero(); m + 1];
    by_rank[0] = BigRational::one();
    for _ in 0..r {
        let mut next = vec![BigRational::zero(); m + 1];
        for (j, prob) in by_rank.iter().enumerate() {
            if prob.is_zero() {
                continue;
            }
            let stay = BigRational::new(BigInt::one(), num_traits::pow(pb.clone(), m - j));
            if j < m {
                next[j + 1] += prob * (BigRational::one() - &stay);
            }
            next[j] += prob * stay;
        }
        by_rank = next;
    }
    by_rank.reverse();
    Ok(by_rank)
}

/// Exact distribution of the corank (`m − rank`) of a uniform `m × r` matrix
/// over `F_p`, indexed by corank `0..=m`.
pub fn corank_dist_mod_p(m: usize, r: usize, p: u64) -> Result<Vec<BigRational>> {
    let small = (p as f64).powi((m * r) as i32) <= 1e7;
    if small {
        corank_dist_enumerate(m, r, p)
    } else {
        corank_dist_recursive(m, r, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_closed_forms() {
        let z2 = zeta(2).unwrap();
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-14);
        assert!(z2.err_bound < 1e-12);
        let z4 = zeta(4).unwrap();
        assert!((z4.value - PI.powi(4) / 90.0).abs() < 1e-14);
        let z6 = zeta(6).unwrap();
        assert!((z6.value - PI.powi(6) / 945.0).abs() < 1e-14);
        assert!(matches!(zeta(1), Err(Error::Divergent(1))));
        let mut prev = z2.value;
        for s in 3..80 {
            let z = zeta(s).unwrap().value;
            assert!(z <= prev && z >= 1.0);
            prev = z;
        }
        assert_eq!(zeta(400).unwrap().value, 1.0);
    }

    #[test]
    fn cyclic_table_values() {
        let nearly = [(2, ".6079"), (3, ".5057"), (4, ".4672"), (10, ".4361"), (100, ".4357")];
        for (m, want) in nearly {
            let v = prob_cyclic(m, m - 1).unwrap();
            assert_eq!(format_truncated(v.value, 4), want, "m = {m}");
        }
        let balanced = [(2, ".9239"), (3, ".8845"), (4, ".8653"), (10, ".8472"), (100, ".8469")];
        for (m, want) in balanced {
            let v = prob_cyclic(m, m).unwrap();
            assert!(v.err_bound < 1e-8);
            assert_eq!(format_truncated(v.value, 4), want, "m = {m}");
        }
        assert!(matches!(prob_cyclic(4, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn trivial_prediction_list() {
        let want = [506, 769, 891, 948, 975, 988, 994, 997];
        for (r, w) in (3..=10).zip(want) {
            let v = prob_trivial(2, r).unwrap().value;
            assert_eq!((v * 1000.0).round() as i64, w, "r = {r}");
        }
        assert_eq!(prob_trivial(2, 2).unwrap().value, 0.0);
        for m in 2..8 {
            let a = prob_trivial(m, m + 1).unwrap().value;
            let b = prob_cyclic(m + 1, m).unwrap().value;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_drop_and_primitive() {
        assert!((prob_rank_drop(2, 1).unwrap().value - 6.0 / (PI * PI)).abs() < 1e-12);
        assert_eq!(format_truncated(prob_rank_drop(2, 2).unwrap().value, 4), ".9239");
        assert!(prob_rank_drop(2, 40).unwrap().value > 1.0 - 1e-15);
        assert!((prob_primitive(2).unwrap().value - 0.6079271).abs() < 1e-6);
        assert!((prob_primitive(3).unwrap().value - 0.8319073).abs() < 1e-6);
    }

    #[test]
    fn singular_probabilities() {
        assert_eq!(P_m_p(2, 1).unwrap(), 0.5);
        assert_eq!(P_m_p(2, 2).unwrap(), 0.625);
        assert!(matches!(P_m_p(4, 2), Err(Error::InvalidPrime(4))));
        let p = 1_000_003u64;
        let v = P_m_p(p, 3).unwrap();
        assert!((v * p as f64 - 1.0).abs() < 2e-6);
    }

    #[test]
    fn gcd_dets_behaviour() {
        let mut prev = 0.0;
        for k in 2..8 {
            let v = prob_gcd_dets_one(2, k, DEFAULT_CUTOFF).unwrap();
            assert!(v.value > prev && v.value < 1.0);
            assert!(v.err_bound < 1e-8);
            prev = v.value;
        }
        assert_eq!(prob_gcd_dets_one(2, 1, DEFAULT_CUTOFF).unwrap().value, 0.0);
        let a = gcd_dets_partial_product(2, 1, 1_000);
        let b = gcd_dets_partial_product(2, 1, 100_000);
        assert!(b < a);
    }

    #[test]
    fn error_bounds_cover_doubled_cutoff() {
        for cutoff in [1_000u64, 10_000, 100_000] {
            for m in [2, 3, 10] {
                let a = euler_p_with_cutoff(m, cutoff).unwrap();
                let b = euler_p_with_cutoff(m, 2 * cutoff).unwrap();
                assert!((a.value - b.value).abs() <= a.err_bound);
            }
            for (m, k) in [(2, 2), (2, 3), (3, 2)] {
                let a = prob_gcd_dets_one(m, k, cutoff).unwrap();
                let b = prob_gcd_dets_one(m, k, 2 * cutoff).unwrap();
                assert!((a.value - b.value).abs() <= a.err_bound);
            }
        }
    }

    #[test]
    fn corank_examples() {
        let d = corank_dist_mod_p(1, 1, 2).unwrap();
        assert_eq!(d[1], BigRational::new(1.into(), 2.into()));
        let d = corank_dist_mod_p(3, 0, 5).unwrap();
        assert_eq!(d, vec![BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::one()]);
        for (m, r, p) in [(2, 2, 2), (2, 3, 3), (3, 2, 2), (3, 3, 3), (2, 5, 5), (1, 4, 7)] {
            assert_eq!(
                corank_dist_enumerate(m, r, p).unwrap(),
                corank_dist_recursive(m, r, p).unwrap(),
                "(m, r, p) = ({m}, {r}, {p})"
            );
        }
        // 6 of the 16 binary 2x2 matrices are invertible.
        let d = corank_dist_mod_p(2, 2, 2).unwrap();
        assert_eq!(d[0], BigRational::new(6.into(), 16.into()));
    }
}
