//! Random nilpotent groups.
//!
//! Relators are drawn as uniform freely reduced words (non-backtracking walks)
//! and pushed into free nilpotent groups. The crate covers the exact side of
//! the story (Heisenberg Mal'cev coordinates, one-relator classification,
//! orders and concrete multiplication tables of finite Heisenberg quotients,
//! Smith and Hermite normal forms over the integers), the closed-form
//! asymptotic probabilities built from zeta values and Euler products, and the
//! seeded parallel Monte Carlo campaigns that compare the two.
//!
//! Conventions used throughout:
//!
//! * `c = [a, b] = a b a⁻¹ b⁻¹`, normal form `a^A b^B c^C`, so `ba = abc⁻¹`.
//! * Invariant factors are listed in ascending divisibility order
//!   `d_1 | d_2 | …`, with `0` standing for a free `Z` summand.
//! * `gcd` of an empty list is `0`, and `gcd(d, 0) = d`.

pub mod arithstat;
pub mod error;
pub mod experiments;
pub mod heiscalc;
pub mod intlinalg;
pub mod predict;
pub mod quotients;
pub mod randwalk;

pub use error::{Error, Result};
pub use heiscalc::{MalcevTriple, WeightVector};
pub use intlinalg::{IntMatrix, SmithForm};
pub use predict::ProbValue;
pub use randwalk::{RngStream, Word};
