//! Arithmetic in the integer Heisenberg group `H(Z) = N_{2,2}`.
//!
//! Elements are kept in Mal'cev normal form `a^A b^B c^C` with `c = [a, b]`.
//! From `ba = abc⁻¹` the product is
//!
//! ```text
//! (A, B, C) · (A', B', C') = (A + A', B + B', C + C' − A'·B)
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::randwalk::Word;

/// Mal'cev coordinates of an element of `H(Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MalcevTriple {
    /// Exponent of `a`.
    pub a: BigInt,
    /// Exponent of `b`.
    pub b: BigInt,
    /// Exponent of the central generator `c`.
    pub c: BigInt,
}

impl MalcevTriple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(0, 0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// The `(A, B)` part, i.e. the image in the abelianization `Z²`.
    pub fn weights(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.b)
    }
}

impl fmt::Display for MalcevTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Abelianized weights `A(g) ∈ Z^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    pub fn add(&self, other: &WeightVector) -> WeightVector {
        WeightVector(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect())
    }
}

pub fn heis_mul(g: &MalcevTriple, h: &MalcevTriple) -> MalcevTriple {
    MalcevTriple {
        a: &g.a + &h.a,
        b: &g.b + &h.b,
        c: &g.c + &h.c - &h.a * &g.b,
    }
}

pub fn heis_inv(g: &MalcevTriple) -> MalcevTriple {
    MalcevTriple {
        a: -&g.a,
        b: -&g.b,
        c: -&g.c - &g.a * &g.b,
    }
}

/// `h · g · h⁻¹`.
pub fn heis_conj(g: &MalcevTriple, h: &MalcevTriple) -> MalcevTriple {
    MalcevTriple {
        a: g.a.clone(),
        b: g.b.clone(),
        c: &g.c + &h.a * &g.b - &h.b * &g.a,
    }
}

/// `g^n` for any integer `n`, via `C_n = nC − AB·n(n−1)/2`.
pub fn heis_pow(g: &MalcevTriple, n: &BigInt) -> MalcevTriple {
    let tri: BigInt = (n * (n - 1u32)) / 2u32;
    MalcevTriple {
        a: &g.a * n,
        b: &g.b * n,
        c: &g.c * n - &g.a * &g.b * tri,
    }
}

fn require_heisenberg_rank(w: &Word) -> Result<()> {
    if w.rank() != 2 {
        return Err(Error::WrongRank {
            expected: 2,
            found: w.rank(),
        });
    }
    Ok(())
}

fn require_two_letters(letters: &[i32]) -> Result<()> {
    match letters.iter().find(|x| !matches!(x.abs(), 1 | 2)) {
        Some(&letter) => Err(Error::LetterOutOfRange { letter, rank: 2 }),
        None => Ok(()),
    }
}

/// Mal'cev coordinates of a word over `{a, b}`.
pub fn malcev_coords(w: &Word) -> Result<MalcevTriple> {
    require_heisenberg_rank(w)?;
    malcev_coords_of_letters(w.letters())
}

/// Left fold of [`heis_mul`] over generator images, for any (possibly
/// unreduced) letter sequence over `{a, b}`.
///
/// The fold runs in `i128`: `|A|, |B| ≤ n` and `|C| ≤ n²` for `n` letters, so
/// no sequence that fits in memory can overflow.
pub fn malcev_coords_of_letters(letters: &[i32]) -> Result<MalcevTriple> {
    require_two_letters(letters)?;
    let (mut a, mut b, mut c) = (0i128, 0i128, 0i128);
    for &x in letters {
        match x {
            1 => {
                c -= b;
                a += 1;
            }
            -1 => {
                c += b;
                a -= 1;
            }
            2 => b += 1,
            _ => b -= 1,
        }
    }
    Ok(MalcevTriple::new(a, b, c))
}

/// Signed area between the lattice path of `w` and the x-axis, closed off by
/// the vertical segment through the endpoint.
pub fn signed_area(w: &Word) -> Result<BigInt> {
    require_heisenberg_rank(w)?;
    signed_area_of_letters(w.letters())
}

pub fn signed_area_of_letters(letters: &[i32]) -> Result<BigInt> {
    require_two_letters(letters)?;
    let mut y = 0i128;
    let mut area = 0i128;
    for &l in letters {
        let (dx, dy) = match l {
            1 => (1, 0),
            -1 => (-1, 0),
            2 => (0, 1),
            _ => (0, -1),
        };
        // A horizontal unit step at height y sweeps a strip of area y; the
        // orientation makes rightward strips above the axis count negative.
        area -= dx * y;
        y += dy;
    }
    Ok(BigInt::from(area))
}

/// Exponent sums of each generator.
pub fn weight_vector(w: &Word) -> WeightVector {
    weight_of_letters(w.rank(), w.letters())
}

pub fn weight_of_letters(rank: usize, letters: &[i32]) -> WeightVector {
    let mut v = vec![0i64; rank];
    for &x in letters {
        let i = x.unsigned_abs() as usize - 1;
        v[i] += x.signum() as i64;
    }
    WeightVector(v)
}

/// Effect of the basis-change automorphism sending `a^A b^B c^C` to `b^d c^mu`.
///
/// Returns `(d, mu)` with `d = gcd(A, B)` and
/// `mu = (A/d)(B/d)·d(d−1)/2 + C`.
pub fn basis_change_reduce(t: &MalcevTriple) -> Result<(BigInt, BigInt)> {
    if t.a.is_zero() && t.b.is_zero() {
        return Err(Error::CentralElement);
    }
    let d = t.a.gcd(&t.b);
    let pairs: BigInt = &d * (&d - 1u32) / 2u32;
    let mu = (&t.a / &d) * (&t.b / &d) * pairs + &t.c;
    debug_assert!(d.is_positive());
    Ok((d, mu))
}
