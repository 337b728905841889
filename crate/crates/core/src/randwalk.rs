//! Random relators.
//!
//! A relator is a uniform freely reduced word, i.e. the trace of a
//! non-backtracking simple random walk on the Cayley graph of `F_m`. Each trial
//! gets its own [`RngStream`], keyed by `(seed, stream_id)`, so results do not
//! depend on how trials are scheduled across threads.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A freely reduced word in `F_m`.
///
/// Letters are signed generator indices: `+i` is `a_i`, `-i` is `a_i⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<i32>,
}

impl Word {
    /// Validates `letters` as a freely reduced word over `rank` generators.
    pub fn new(rank: usize, letters: Vec<i32>) -> Result<Self> {
        check_rank(rank)?;
        check_letters(rank, &letters)?;
        if let Some(pos) = letters.windows(2).position(|w| w[0] == -w[1]) {
            return Err(Error::NotReduced(pos));
        }
        Ok(Self { rank, letters })
    }

    pub fn empty(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self {
            rank,
            letters: Vec::new(),
        })
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduced(rank: usize, letters: &[i32]) -> Result<Self> {
        check_rank(rank)?;
        check_letters(rank, letters)?;
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for &x in letters {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Ok(Self { rank, letters: out })
    }

    /// Parses `a..z` as generators and `A..Z` as their inverses.
    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(Error::Parse(format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rank, letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    /// Product in the free group (concatenation followed by free reduction).
    pub fn concat(&self, other: &Word) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::WrongRank {
                expected: self.rank,
                found: other.rank,
            });
        }
        let mut all = self.letters.clone();
        all.extend_from_slice(&other.letters);
        Self::reduced(self.rank, &all)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &x in &self.letters {
            if self.rank <= 26 {
                let base = if x > 0 { b'a' } else { b'A' };
                write!(f, "{}", (base + (x.unsigned_abs() - 1) as u8) as char)?;
            } else if x > 0 {
                write!(f, "a{x}")?;
            } else {
                write!(f, "a{}^-1", -x)?;
            }
        }
        Ok(())
    }
}

fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 || rank > i32::MAX as usize {
        return Err(Error::InvalidRank(rank));
    }
    Ok(())
}

fn check_letters(rank: usize, letters: &[i32]) -> Result<()> {
    match letters
        .iter()
        .find(|&&x| x == 0 || x.unsigned_abs() as usize > rank)
    {
        Some(&letter) => Err(Error::LetterOutOfRange { letter, rank }),
        None => Ok(()),
    }
}

/// Deterministic random stream for one trial.
///
/// Backed by ChaCha8 with the 64-bit seed expanded into the key and the trial
/// index used as the ChaCha stream number, giving 2^64 independent streams per
/// seed.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Runs `trials` independent trials in parallel and folds their results.
///
/// Trial `t` draws from `RngStream::new(seed, stream_base + t)`. The result
/// does not depend on the thread count as long as `merge` is associative and
/// commutative.
pub fn fold_trials<T, I, F, M>(seed: u64, stream_base: u64, trials: usize, init: I, trial: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut RngStream, &mut T) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    (0..trials as u64)
        .into_par_iter()
        .fold(&init, |mut acc, t| {
            let mut rng = RngStream::new(seed, stream_base + t);
            trial(&mut rng, &mut acc);
            acc
        })
        .reduce(&init, &merge)
}

// Letter codes 0..2m: code 2(i-1) is a_i, code 2(i-1)+1 is a_i⁻¹, and the
// inverse of a code flips its low bit.
fn code_to_letter(code: usize) -> i32 {
    let gen = (code / 2 + 1) as i32;
    if code % 2 == 0 {
        gen
    } else {
        -gen
    }
}

/// Uniform freely reduced word of exactly `len` letters.
pub fn random_reduced_word<R: Rng + ?Sized>(rank: usize, len: usize, rng: &mut R) -> Result<Word> {
    check_rank(rank)?;
    let alphabet = 2 * rank;
    let mut letters = Vec::with_capacity(len);
    let mut prev: Option<usize> = None;
    for _ in 0..len {
        let code = match prev {
            None => rng.random_range(0..alphabet),
            Some(p) => {
                let forbidden = p ^ 1;
                let j = rng.random_range(0..alphabet - 1);
                if j >= forbidden {
                    j + 1
                } else {
                    j
                }
            }
        };
        letters.push(code_to_letter(code));
        prev = Some(code);
    }
    Ok(Word { rank, letters })
}

/// Relator of length `len` or `len - 1`, each with probability 1/2.
///
/// The coin is drawn before the letters. With `len = 1` the short branch is
/// the empty word.
pub fn random_relator<R: Rng + ?Sized>(rank: usize, len: usize, rng: &mut R) -> Result<Word> {
    check_rank(rank)?;
    if len == 0 {
        return Err(Error::InvalidLength(len));
    }
    let actual = if rng.random_bool(0.5) { len } else { len - 1 };
    random_reduced_word(rank, actual, rng)
}

/// Uniform string of `len` letters, not necessarily reduced (simple random walk).
pub fn random_string<R: Rng + ?Sized>(rank: usize, len: usize, rng: &mut R) -> Result<Vec<i32>> {
    check_rank(rank)?;
    let alphabet = 2 * rank;
    Ok((0..len)
        .map(|_| code_to_letter(rng.random_range(0..alphabet)))
        .collect())
}
