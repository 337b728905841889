//! Arithmetic statistics of random walks.
//!
//! Exact single-coordinate distributions of the simple random walk, their
//! monotonicity, and Monte Carlo frequencies (residues, primitivity,
//! determinant gcds) of relator weight vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::heiscalc::weight_vector;
use crate::intlinalg::{det, IntMatrix};
use crate::randwalk::{fold_trials, random_relator, random_string, RngStream};

/// Distribution of one coordinate of an `ℓ`-step simple random walk on `Z^m`.
///
/// Stored as integer path counts over the common denominator `(2m)^ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordDist {
    pub len: usize,
    pub m: usize,
    counts: Vec<BigInt>,
    denom: BigInt,
}

impl CoordDist {
    /// Number of walks ending with coordinate `x`.
    pub fn count(&self, x: i64) -> BigInt {
        let l = self.len as i64;
        if x.abs() > l {
            BigInt::zero()
        } else {
            self.counts[(x + l) as usize].clone()
        }
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn prob(&self, x: i64) -> BigRational {
        BigRational::new(self.count(x), self.denom.clone())
    }

    pub fn probs(&self) -> BTreeMap<i64, BigRational> {
        let l = self.len as i64;
        (-l..=l).map(|x| (x, self.prob(x))).collect()
    }

    pub fn total(&self) -> BigRational {
        BigRational::new(self.counts.iter().sum(), self.denom.clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().eq(self.counts.iter().rev())
    }

    /// Distribution after one more step.
    pub fn step(&self) -> CoordDist {
        let stay = BigInt::from(2 * self.m - 2);
        let mut next = vec![BigInt::zero(); self.counts.len() + 2];
        for (i, c) in self.counts.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c * &stay;
            next[i + 2] += c;
        }
        CoordDist {
            len: self.len + 1,
            m: self.m,
            counts: next,
            denom: &self.denom * BigInt::from(2 * self.m),
        }
    }
}

/// Exact distribution via `p_ℓ(x) = p(x−1)/2m + (m−1)/m · p(x) + p(x+1)/2m`
/// starting from `p_0(0) = 1`.
pub fn exact_coord_dist(m: usize, len: usize) -> Result<CoordDist> {
    if m < 2 {
        return Err(Error::Unsupported(format!(
            "coordinate distribution needs rank at least 2, got {m}"
        )));
    }
    let mut d = CoordDist {
        len: 0,
        m,
        counts: vec![BigInt::one()],
        denom: BigInt::one(),
    };
    for _ in 0..len {
        d = d.step();
    }
    Ok(d)
}

/// `p(x) > p(x+1)` for all `0 ≤ x < ℓ`.
pub fn check_monotonicity(d: &CoordDist) -> bool {
    (0..d.len as i64).all(|x| d.count(x) > d.count(x + 1))
}

/// Empirical histogram of the first coordinate of `random_string` walks.
pub fn string_coord_histogram(m: usize, len: usize, trials: usize, seed: u64) -> Result<BTreeMap<i64, u64>> {
    random_string(m, 0, &mut RngStream::new(seed, 0))?;
    let hist = fold_trials(
        seed,
        0,
        trials,
        || vec![0u64; 2 * len + 1],
        |rng, acc| {
            let x: i64 = random_string(m, len, rng)
                .expect("validated")
                .iter()
                .map(|&l| match l {
                    1 => 1,
                    -1 => -1,
                    _ => 0,
                })
                .sum();
            acc[(x + len as i64) as usize] += 1;
        },
        add_counts,
    );
    Ok(hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(i, c)| (i as i64 - len as i64, c))
        .collect())
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn check_relator_params(m: usize, len: usize) -> Result<()> {
    random_relator(m, len, &mut RngStream::new(0, 0)).map(|_| ())
}

/// Largest deviation of the empirical residue distribution of relator
/// weights mod `n` from uniform.
///
/// With `coords = 1` only the first weight is binned (target `1/n`); with
/// `coords = 2` the first two weights are binned jointly (target `1/n²`).
pub fn residue_deviation(m: usize, len: usize, n: u64, trials: usize, seed: u64, coords: usize) -> Result<f64> {
    check_relator_params(m, len)?;
    if n == 0 {
        return Err(Error::InvalidConfig("modulus must be positive".into()));
    }
    if !(coords == 1 || coords == 2) || coords > m {
        return Err(Error::Unsupported(format!("residue binning over {coords} coordinates")));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    let cells = (n as usize).pow(coords as u32);
    let hist = fold_trials(
        seed,
        0,
        trials,
        || vec![0u64; cells],
        |rng, acc| {
            let w = weight_vector(&random_relator(m, len, rng).expect("validated"));
            let idx = w.entries()[..coords]
                .iter()
                .fold(0usize, |i, &x| i * n as usize + x.rem_euclid(n as i64) as usize);
            acc[idx] += 1;
        },
        add_counts,
    );
    let target = 1.0 / cells as f64;
    Ok(hist
        .iter()
        .map(|&c| (c as f64 / trials as f64 - target).abs())
        .fold(0.0, f64::max))
}

/// Fraction of random relators whose weight vector is primitive.
pub fn primitivity_frequency(m: usize, len: usize, trials: usize, seed: u64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidRank(m));
    }
    check_relator_params(m, len)?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    let hits = fold_trials(
        seed,
        0,
        trials,
        || 0u64,
        |rng, acc| {
            let w = weight_vector(&random_relator(m, len, rng).expect("validated"));
            if w.is_primitive() {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    Ok(hits as f64 / trials as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetGcdFrequency {
    pub trials: usize,
    /// Fraction of trials whose `k` determinants have gcd 1.
    pub coprime: f64,
    /// Fraction of all drawn matrices that are singular.
    pub singular: f64,
}

/// Draws `k` square matrices per trial, each with `m` relator weight vectors
/// as columns, and tests whether their determinants are coprime.
pub fn det_gcd_frequency(m: usize, k: usize, len: usize, trials: usize, seed: u64) -> Result<DetGcdFrequency> {
    if m < 2 {
        return Err(Error::InvalidRank(m));
    }
    if k < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 matrices, got {k}")));
    }
    check_relator_params(m, len)?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    let (coprime, singular) = fold_trials(
        seed,
        0,
        trials,
        || (0u64, 0u64),
        |rng, acc| {
            let mut g = BigInt::zero();
            for _ in 0..k {
                let cols: Vec<Vec<BigInt>> = (0..m)
                    .map(|_| {
                        weight_vector(&random_relator(m, len, rng).expect("validated"))
                            .entries()
                            .iter()
                            .map(|&x| BigInt::from(x))
                            .collect()
                    })
                    .collect();
                let d = det(&IntMatrix::from_columns(m, &cols).expect("square")).expect("square");
                if d.is_zero() {
                    acc.1 += 1;
                }
                g = g.gcd(&d);
            }
            if g.is_one() {
                acc.0 += 1;
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(DetGcdFrequency {
        trials,
        coprime: coprime as f64 / trials as f64,
        singular: singular as f64 / (trials * k) as f64,
    })
}
