use nilrand::predict::{
    corank_dist_enumerate, corank_dist_mod_p, corank_dist_recursive, gcd_dets_partial_product, prob_cyclic,
    prob_gcd_dets_one, prob_trivial, sieve, zeta, zeta_product, DEFAULT_CUTOFF,
};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Direct partial sum with the integral tail bound added at the midpoint.
fn zeta_series(s: i32) -> f64 {
    let n = 2_000_000u64;
    let head: f64 = (1..=n).rev().map(|k| (k as f64).powi(-s)).sum();
    head + (n as f64).powi(1 - s) / (s as f64 - 1.0) - 0.5 * (n as f64).powi(-s)
}

#[test]
fn zeta_agrees_with_direct_series() {
    for s in 2..=12 {
        let z = zeta(s as i64).unwrap();
        assert!((z.value - zeta_series(s)).abs() < 1e-12, "s = {s}");
        assert!(z.err_bound < 1e-12);
    }
}

/// Probability that an `m × r` matrix mod `p` has corank at most 1, via the column recursion in floats.
fn corank_le_one(m: usize, r: usize, p: f64) -> f64 {
    let mut d = vec![0.0; m + 1];
    d[0] = 1.0;
    for _ in 0..r {
        let mut n = vec![0.0; m + 1];
        for (j, &x) in d.iter().enumerate() {
            let stay = p.powi(j as i32 - m as i32);
            n[j] += x * stay;
            if j < m {
                n[j + 1] += x * (1.0 - stay);
            }
        }
        d = n;
    }
    d[m] + d[m - 1]
}

#[test]
fn cyclic_probability_matches_prime_by_prime_product() {
    let primes = sieve(200_000);
    for m in [2usize, 3, 4, 10] {
        for r in [m - 1, m] {
            let direct: f64 = primes.iter().map(|&p| corank_le_one(m, r, p as f64)).product();
            let v = prob_cyclic(m, r).unwrap().value;
            // The direct product's own tail is about 1/(C log C).
            assert!((v - direct).abs() < 2e-6, "m = {m}, r = {r}: {v} vs {direct}");
        }
    }
}

#[test]
fn trivial_probability_matches_corank_product() {
    // r vectors span Z^m iff the matrix has full rank m mod every prime.
    let primes = sieve(100_000);
    for (m, r) in [(2usize, 3usize), (2, 5), (3, 4)] {
        let direct: f64 = primes
            .iter()
            .map(|&p| {
                let d = corank_dist_recursive(m, r, p).unwrap();
                d[0].to_f64().unwrap()
            })
            .product();
        let v = prob_trivial(m, r).unwrap().value;
        assert!((v - direct).abs() < 1e-5, "({m}, {r})");
    }
}

#[test]
fn duality_between_trivial_and_cyclic() {
    for m in 2..=12 {
        let a = prob_trivial(m, m + 1).unwrap().value;
        let b = prob_cyclic(m + 1, m).unwrap().value;
        let c = 1.0 / zeta_product(m + 1).unwrap().value;
        assert!((a - b).abs() < 1e-10 && (a - c).abs() < 1e-10);
    }
}

#[test]
fn gcd_dets_product_against_raw_truncation() {
    for (m, k) in [(2, 2), (2, 3), (3, 2), (4, 5)] {
        let v = prob_gcd_dets_one(m, k, DEFAULT_CUTOFF).unwrap();
        let raw = gcd_dets_partial_product(m, k, DEFAULT_CUTOFF);
        // The raw product overshoots by its tail, roughly C^(1-k).
        assert!(raw >= v.value - v.err_bound);
        assert!(raw - v.value < 2e-5, "({m}, {k})");
    }
    let mut prev = 1.0;
    for cutoff in [10u64, 100, 1_000, 10_000, 100_000] {
        let x = gcd_dets_partial_product(2, 1, cutoff);
        assert!(x < prev);
        prev = x;
    }
}

#[test]
fn corank_paths_agree_and_sum_to_one() {
    for p in [2u64, 3, 5, 7] {
        for m in 0..=3 {
            for r in 0..=3 {
                if (p as f64).powi((m * r) as i32) > 1e6 {
                    continue;
                }
                let a = corank_dist_enumerate(m, r, p).unwrap();
                let b = corank_dist_recursive(m, r, p).unwrap();
                assert_eq!(a, b, "(m, r, p) = ({m}, {r}, {p})");
                assert_eq!(a.iter().sum::<BigRational>(), BigRational::one());
            }
        }
    }
    assert!(corank_dist_mod_p(2, 2, 6).is_err());
    // Too large to enumerate; only the recursion runs.
    let big = corank_dist_mod_p(6, 6, 101).unwrap();
    assert_eq!(big.iter().sum::<BigRational>(), BigRational::one());
}
