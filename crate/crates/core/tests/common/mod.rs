//! Oracles shared by the integration suites. Kept independent of the
//! library's elimination code.
#![allow(dead_code)]

use nilrand::heiscalc::{heis_conj, heis_inv, heis_mul, malcev_coords, MalcevTriple};
use nilrand::intlinalg::{span_min_gcd, IntMatrix};
use nilrand::randwalk::{random_relator, RngStream};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return BigInt::from(a[0][0]);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if a[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let term = BigInt::from(a[0][j]) * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all `k × k` minors.
pub fn minor_gcd(a: &[Vec<i64>], k: usize) -> BigInt {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
            g = g.gcd(&cofactor_det(&sub));
        }
    }
    g
}

/// Smith invariants from determinantal divisors: `d_k = D_k / D_{k-1}`.
pub fn invariants_from_minors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=rows.min(cols) {
        let dk = minor_gcd(a, k);
        if dk.is_zero() {
            out.push(BigInt::zero());
            prev = BigInt::zero();
        } else {
            out.push(&dk / &prev);
            prev = dk;
        }
    }
    out
}

pub fn random_triples(rng: &mut RngStream, r: usize, len: usize) -> Vec<MalcevTriple> {
    (0..r)
        .map(|_| malcev_coords(&random_relator(2, len, rng).unwrap()).unwrap())
        .collect()
}

pub fn random_element<R: Rng>(rng: &mut R, bound: i64) -> MalcevTriple {
    MalcevTriple::new(
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
    )
}

/// Product of a few conjugates of relators and their inverses; lies in the normal closure.
pub fn normal_closure_element<R: Rng>(rng: &mut R, rels: &[MalcevTriple], factors: usize) -> MalcevTriple {
    let mut acc = MalcevTriple::identity();
    for _ in 0..factors {
        let mut g = rels[rng.random_range(0..rels.len())].clone();
        if rng.random_bool(0.5) {
            g = heis_inv(&g);
        }
        let h = random_element(rng, 6);
        acc = heis_mul(&acc, &heis_conj(&g, &h));
    }
    acc
}

pub fn abs_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b).abs()
}

/// Smallest gcd of a nonzero vector `M x` with `x` in a coefficient box.
pub fn brute_span_min_gcd(a: &[[i64; 3]; 2], bound: i64) -> i64 {
    let mut best = 0;
    for x in -bound..=bound {
        for y in -bound..=bound {
            for z in -bound..=bound {
                let u = a[0][0] * x + a[0][1] * y + a[0][2] * z;
                let v = a[1][0] * x + a[1][1] * y + a[1][2] * z;
                let g = u.gcd(&v);
                if g != 0 && (best == 0 || g < best) {
                    best = g;
                    if best == 1 {
                        return 1;
                    }
                }
            }
        }
    }
    best
}

/// Compares `span_min_gcd` with the brute force on every 2x3 matrix with
/// entries in [-4, 4]; returns the number of matrices checked.
pub fn span_min_gcd_exhaustive() -> usize {
    let mut checked = 0;
    let mut a = [[0i64; 3]; 2];
    for code in 0..9usize.pow(6) {
        let mut c = code;
        for cell in a.iter_mut().flatten() {
            *cell = (c % 9) as i64 - 4;
            c /= 9;
        }
        let m = IntMatrix::from_rows(&a);
        assert_eq!(span_min_gcd(&m), BigInt::from(brute_span_min_gcd(&a, 4)), "{a:?}");
        checked += 1;
    }
    checked
}
