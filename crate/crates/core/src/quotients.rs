//! Quotients of the Heisenberg group and of free nilpotent groups.
//!
//! One-relator quotients `H(Z)/⟨⟨g⟩⟩` are classified exactly from the
//! relator's Mal'cev coordinates. For any finite relator set the order of `c`
//! in the quotient is `γ = gcd(d, K)` where `d` is the gcd of all weights and
//! `K` is the gcd of `k·W` for a kernel basis `W` of the weight matrix; the
//! quotient has order `Δ·γ` with `Δ` the index of the weight lattice. Finite
//! quotients can be materialized as multiplication tables.
//!
//! For general `N_{s,m}` only the abelianization is needed: a nilpotent group
//! is generated by any set whose image generates its abelianization, so rank,
//! finiteness and triviality are read off the cokernel of the weight matrix.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heiscalc::{basis_change_reduce, heis_inv, heis_mul, heis_pow, weight_vector, MalcevTriple};
use crate::intlinalg::{cokernel_invariants, column_hermite, gcd_vec, kernel_matrix, rank_and_dim, IntMatrix};
use crate::randwalk::Word;

pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// JSON number when the value fits in an `i64`, decimal string otherwise.
pub(crate) fn big_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DescriptorKind {
    /// The relator is a power of `c`.
    CentralRelator,
    Generic,
}

/// Isomorphism data of a one-relator Heisenberg quotient.
///
/// `GENERIC`: `(Z/(d²/D) × Z/D) ⋊ Z` with `d = gcd(A, B)`, `D = gcd(d, mu)`.
/// `CENTRAL_RELATOR`: `(Z × Z/k) ⋊ Z`, recorded with `d = 0`, `D = k` so that
/// the torsion pair reads `(0, k)` under the convention `Z/0 = Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub kind: DescriptorKind,
    pub d: BigInt,
    pub mu: BigInt,
    pub dd: BigInt,
    pub k: Option<BigInt>,
    pub torsion_pair: (BigInt, BigInt),
    pub is_abelian: bool,
    pub is_cyclic_z: bool,
    pub is_bs_type: bool,
}

impl GroupDescriptor {
    /// Equality up to the data the classification keeps (the semidirect
    /// action is not tracked).
    pub fn same_group(&self, other: &GroupDescriptor) -> bool {
        self.kind == other.kind && self.torsion_pair == other.torsion_pair
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": match self.kind {
                DescriptorKind::CentralRelator => "CENTRAL_RELATOR",
                DescriptorKind::Generic => "GENERIC",
            },
            "d": big_json(&self.d),
            "mu": big_json(&self.mu),
            "D": big_json(&self.dd),
            "k": self.k.as_ref().map(big_json),
            "torsion_pair": [big_json(&self.torsion_pair.0), big_json(&self.torsion_pair.1)],
            "is_abelian": self.is_abelian,
            "is_cyclic_z": self.is_cyclic_z,
            "is_bs_type": self.is_bs_type,
            "group": self.to_string(),
        })
    }
}

fn cyclic_name(n: &BigInt) -> String {
    if n.is_zero() {
        "Z".to_string()
    } else {
        format!("Z/{n}")
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = &self.torsion_pair;
        if self.kind == DescriptorKind::Generic && self.d.is_one() {
            return f.write_str("Z");
        }
        let mut parts = Vec::new();
        for x in [p, q] {
            if !x.is_one() {
                parts.push(cyclic_name(x));
            }
        }
        let base = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" x ")
        };
        write!(f, "({base}) x| Z")
    }
}

pub fn classify_one_relator(t: &MalcevTriple) -> Result<GroupDescriptor> {
    if t.is_identity() {
        return Err(Error::DegenerateRelator);
    }
    if t.a.is_zero() && t.b.is_zero() {
        let k = t.c.abs();
        return Ok(GroupDescriptor {
            kind: DescriptorKind::CentralRelator,
            d: BigInt::zero(),
            mu: t.c.clone(),
            dd: k.clone(),
            torsion_pair: (BigInt::zero(), k.clone()),
            is_abelian: k.is_one(),
            is_cyclic_z: false,
            is_bs_type: false,
            k: Some(k),
        });
    }
    let (d, mu) = basis_change_reduce(t)?;
    let dd = d.gcd(&mu);
    let torsion_pair = (&d * &d / &dd, dd.clone());
    let cyclic = d.is_one();
    Ok(GroupDescriptor {
        kind: DescriptorKind::Generic,
        is_abelian: cyclic,
        is_cyclic_z: cyclic,
        is_bs_type: dd.is_one() && d > BigInt::one(),
        d,
        mu,
        dd,
        k: None,
        torsion_pair,
    })
}

/// Order data of `H(Z)/⟨⟨R⟩⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientOrder {
    /// gcd of all `(A, B)` entries.
    pub d: BigInt,
    /// Index of the weight lattice in `Z²`; `0` when it has rank < 2.
    pub delta: BigInt,
    /// gcd of `k·W`; `0` when the weight matrix has trivial kernel.
    pub k_factor: BigInt,
    /// Order of `c` in the quotient; `0` means infinite.
    pub gamma: BigInt,
    /// `Δ·γ`, or `None` when the quotient is infinite.
    pub order: Option<BigInt>,
}

impl QuotientOrder {
    pub fn is_finite(&self) -> bool {
        self.order.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": big_json(&self.d),
            "delta": big_json(&self.delta),
            "K": big_json(&self.k_factor),
            "gamma": big_json(&self.gamma),
            "order": match &self.order {
                Some(o) => big_json(o),
                None => json!("INFINITE"),
            },
        })
    }
}

/// The `2 × r` matrix whose columns are the relators' `(A, B)`.
pub fn weight_matrix(rels: &[MalcevTriple]) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = rels.iter().map(|t| vec![t.a.clone(), t.b.clone()]).collect();
    IntMatrix::from_columns(2, &cols).expect("two-entry columns")
}

pub fn heis_quotient_order(rels: &[MalcevTriple]) -> Result<QuotientOrder> {
    if rels.is_empty() {
        return Err(Error::EmptyRelatorSet);
    }
    let m = weight_matrix(rels);
    let d = gcd_vec(m.entries());
    let inv = cokernel_invariants(&m);
    let delta = if inv.iter().any(Zero::is_zero) {
        BigInt::zero()
    } else {
        inv.iter().product()
    };

    let w = kernel_matrix(&m);
    let kw: Vec<BigInt> = (0..w.cols())
        .map(|j| {
            rels.iter()
                .enumerate()
                .map(|(i, t)| &t.c * w.get(i, j))
                .sum()
        })
        .collect();
    let k_factor = gcd_vec(&kw);
    let gamma = d.gcd(&k_factor);
    let order = if delta.is_zero() {
        None
    } else {
        Some(&delta * &gamma)
    };
    Ok(QuotientOrder {
        d,
        delta,
        k_factor,
        gamma,
        order,
    })
}

/// Canonical coset representatives for a finite Heisenberg quotient.
///
/// With the weight lattice in Hermite form, spanned by `v1 = (h11, 0)` and
/// `v2 = (h21, h22)`, every coset has a unique representative
/// `(x, y, z)` with `0 ≤ x < h11`, `0 ≤ y < h22`, `0 ≤ z < γ`.
#[derive(Debug, Clone)]
struct CosetReducer {
    h11: BigInt,
    h22: BigInt,
    gamma: BigInt,
    lift1: MalcevTriple,
    lift2: MalcevTriple,
}

impl CosetReducer {
    fn new(rels: &[MalcevTriple], gamma: &BigInt) -> Self {
        let m = weight_matrix(rels);
        let hf = column_hermite(&m);
        assert_eq!(hf.rank(), 2, "finite quotient needs a full-rank weight lattice");
        let (_, c2) = hf.pivots[0];
        let (_, c1) = hf.pivots[1];
        let lift = |col: usize| {
            // Relator powers multiplied in a fixed order; the result lies in
            // the normal closure and has the Hermite vector as its weight.
            let mut acc = MalcevTriple::identity();
            for (i, g) in rels.iter().enumerate() {
                let e = hf.v.get(i, col);
                if !e.is_zero() {
                    acc = heis_mul(&acc, &heis_pow(g, e));
                }
            }
            debug_assert_eq!(&acc.a, hf.h.get(0, col));
            debug_assert_eq!(&acc.b, hf.h.get(1, col));
            acc.c = acc.c.mod_floor(gamma);
            acc
        };
        Self {
            h11: hf.h.get(0, c1).clone(),
            h22: hf.h.get(1, c2).clone(),
            gamma: gamma.clone(),
            lift1: lift(c1),
            lift2: lift(c2),
        }
    }

    fn reduce(&self, g: &MalcevTriple) -> MalcevTriple {
        let q = g.b.div_floor(&self.h22);
        let g = heis_mul(g, &heis_pow(&self.lift2, &-q));
        let q = g.a.div_floor(&self.h11);
        let mut g = heis_mul(&g, &heis_pow(&self.lift1, &-q));
        g.c = g.c.mod_floor(&self.gamma);
        g
    }

    fn index(&self, canon: &MalcevTriple) -> usize {
        let i = (&canon.a * &self.h22 + &canon.b) * &self.gamma + &canon.c;
        i.to_usize().expect("index within table size")
    }
}

/// Multiplication table of a finite quotient `H(Z)/⟨⟨R⟩⟩`.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    pub elements: Vec<MalcevTriple>,
    mul: Vec<u32>,
    pub meta: QuotientOrder,
    reducer: CosetReducer,
}

impl FiniteGroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of the identity; the representative `(0, 0, 0)` always comes first.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.order() + j] as usize
    }

    /// Canonical representative of the coset of `g`.
    pub fn canonical(&self, g: &MalcevTriple) -> MalcevTriple {
        self.reducer.reduce(g)
    }

    /// Table index of the element represented by `g`.
    pub fn index_of(&self, g: &MalcevTriple) -> usize {
        self.reducer.index(&self.reducer.reduce(g))
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index_of(&heis_inv(&self.elements[i]))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity() {
            x = self.product(x, i);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (i + 1..n).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// Checks identity, inverses and associativity. Associativity is checked
    /// on all triples when the order is at most 64 and on `samples` random
    /// triples otherwise.
    pub fn check_axioms<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> Result<(), String> {
        let n = self.order();
        let e = self.identity();
        for i in 0..n {
            if self.product(e, i) != i || self.product(i, e) != i {
                return Err(format!("identity fails on element {i}"));
            }
            if !(0..n).any(|j| self.product(i, j) == e) {
                return Err(format!("element {i} has no inverse"));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            self.product(self.product(a, b), c) == self.product(a, self.product(b, c))
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(format!("associativity fails on ({a},{b},{c})"));
                        }
                    }
                }
            }
        } else {
            for _ in 0..samples {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !assoc(a, b, c) {
                    return Err(format!("associativity fails on ({a},{b},{c})"));
                }
            }
        }
        Ok(())
    }

    /// Subgroup generated by the given elements, as a sorted index list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.identity()]);
        seen[self.identity()] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.product(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    }

    /// Images of the generators `a` and `b`.
    pub fn generator_images(&self) -> (usize, usize) {
        (
            self.index_of(&MalcevTriple::new(1, 0, 0)),
            self.index_of(&MalcevTriple::new(0, 1, 0)),
        )
    }
}

pub fn build_finite_quotient(rels: &[MalcevTriple]) -> Result<FiniteGroupTable> {
    build_finite_quotient_with_cap(rels, DEFAULT_ORDER_CAP)
}

pub fn build_finite_quotient_with_cap(rels: &[MalcevTriple], cap: usize) -> Result<FiniteGroupTable> {
    let meta = heis_quotient_order(rels)?;
    let order = meta.order.clone().ok_or(Error::InfiniteGroup)?;
    let n = match order.to_usize() {
        Some(n) if n <= cap => n,
        _ => {
            return Err(Error::CapExceeded {
                order: order.to_string(),
                cap,
            })
        }
    };
    let reducer = CosetReducer::new(rels, &meta.gamma);
    let (h11, h22, gamma) = (
        reducer.h11.to_usize().expect("bounded by order"),
        reducer.h22.to_usize().expect("bounded by order"),
        reducer.gamma.to_usize().expect("bounded by order"),
    );
    debug_assert_eq!(h11 * h22 * gamma, n);

    let mut elements = Vec::with_capacity(n);
    for x in 0..h11 {
        for y in 0..h22 {
            for z in 0..gamma {
                elements.push(MalcevTriple::new(x as u64, y as u64, z as u64));
            }
        }
    }
    let mut mul = Vec::with_capacity(n * n);
    for g in &elements {
        for h in &elements {
            mul.push(reducer.index(&reducer.reduce(&heis_mul(g, h))) as u32);
        }
    }
    Ok(FiniteGroupTable {
        elements,
        mul,
        meta,
        reducer,
    })
}

/// Number of elements of each order.
pub fn element_order_census(t: &FiniteGroupTable) -> BTreeMap<usize, usize> {
    let mut census = BTreeMap::new();
    for i in 0..t.order() {
        *census.entry(t.element_order(i)).or_insert(0) += 1;
    }
    census
}

fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors (ascending) of a finite abelian group of order `n`
/// from its element-order census.
///
/// For each prime `p`, `#{x : x^(p^j) = 1} / #{x : x^(p^(j-1)) = 1} = p^(r_j)`
/// where `r_j` counts the cyclic `p`-factors of exponent at least `j`.
fn abelian_invariants_from_census(n: usize, census: &BTreeMap<usize, usize>) -> Vec<usize> {
    let killed_by = |k: usize| -> usize {
        census
            .iter()
            .filter(|(&o, _)| k % o == 0)
            .map(|(_, &c)| c)
            .sum()
    };
    // exps[p] = exponents of the p-primary cyclic factors, largest first.
    let mut primary: Vec<(usize, Vec<u32>)> = Vec::new();
    for (p, e) in prime_factors(n) {
        let mut at_least = Vec::new();
        let mut prev = 1usize;
        for j in 1..=e {
            let cur = killed_by(p.pow(j));
            let mut ratio = cur / prev;
            let mut r = 0;
            while ratio > 1 {
                ratio /= p;
                r += 1;
            }
            at_least.push(r);
            prev = cur;
        }
        let count = at_least.first().copied().unwrap_or(0);
        let exps: Vec<u32> = (0..count)
            .map(|i| at_least.iter().filter(|&&r| r > i).count() as u32)
            .collect();
        primary.push((p, exps));
    }
    let len = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..len)
        .map(|i| {
            primary
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

fn abelian_name(invariants: &[usize]) -> String {
    if invariants.is_empty() {
        "1".to_string()
    } else {
        invariants
            .iter()
            .map(|d| format!("Z{d}"))
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// Abelianization invariants of a finite table, via the commutator subgroup.
fn abelianization_invariants(t: &FiniteGroupTable) -> Vec<usize> {
    let n = t.order();
    let inv: Vec<usize> = (0..n).map(|i| t.inverse(i)).collect();
    let mut comms: Vec<usize> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let c = t.product(t.product(t.product(x, y), inv[x]), inv[y]);
            comms.push(c);
        }
    }
    comms.sort_unstable();
    comms.dedup();
    let derived = t.closure(&comms);
    let mut in_derived = vec![false; n];
    for &g in &derived {
        in_derived[g] = true;
    }
    // Order of each coset xG' in G/G'; each coset contributes |G'| elements.
    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    let mut seen = vec![false; n];
    for x in 0..n {
        if seen[x] {
            continue;
        }
        for &g in &derived {
            seen[t.product(x, g)] = true;
        }
        let mut k = 1;
        let mut p = x;
        while !in_derived[p] {
            p = t.product(p, x);
            k += 1;
        }
        *census.entry(k).or_insert(0) += 1;
    }
    abelian_invariants_from_census(n / derived.len(), &census)
}

/// Names a small group from its table.
///
/// Abelian groups are named by invariant factors (`Z2xZ4`), the two
/// nonabelian groups of order 8 as `Q8` and `D4`, and anything else by a
/// signature of order, abelianization and order census.
pub fn identify_small_group(t: &FiniteGroupTable) -> String {
    let n = t.order();
    let census = element_order_census(t);
    if t.is_abelian() {
        return abelian_name(&abelian_invariants_from_census(n, &census));
    }
    let involutions = census.get(&2).copied().unwrap_or(0);
    if n == 8 {
        match involutions {
            1 => return "Q8".to_string(),
            5 => return "D4".to_string(),
            _ => {}
        }
    }
    let orders: Vec<String> = census.iter().map(|(o, c)| format!("{o}:{c}")).collect();
    format!(
        "G{n}[ab={};orders={}]",
        abelian_name(&abelianization_invariants(t)),
        orders.join(",")
    )
}

/// Abelianization-level invariants of `N_{s,m}/⟨⟨R⟩⟩`, valid for every step `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentProfile {
    pub invariants: Vec<BigInt>,
    pub rank: usize,
    pub dim: usize,
    pub is_trivial: bool,
    pub is_finite: bool,
    pub is_cyclic: bool,
}

pub fn nilpotent_quotient_profile(m: usize, rels: &[Word]) -> Result<NilpotentProfile> {
    if m == 0 {
        return Err(Error::InvalidRank(m));
    }
    let mut cols = Vec::with_capacity(rels.len());
    for w in rels {
        if w.rank() != m {
            return Err(Error::WrongRank {
                expected: m,
                found: w.rank(),
            });
        }
        cols.push(weight_vector(w).0.into_iter().map(BigInt::from).collect());
    }
    let mat = IntMatrix::from_columns(m, &cols)?;
    Ok(profile_from_weights(&mat))
}

/// Profile from an `m × r` weight matrix.
pub fn profile_from_weights(mat: &IntMatrix) -> NilpotentProfile {
    let invariants = cokernel_invariants(mat);
    let (rank, dim) = rank_and_dim(&invariants);
    NilpotentProfile {
        invariants,
        rank,
        dim,
        is_trivial: rank == 0,
        is_finite: dim == 0,
        is_cyclic: rank <= 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcsFlag {
    /// `G` is trivial, so the random group `Γ` equals its commutator subgroup.
    Perfect,
    /// `G` is abelian and nontrivial: `Γ_2 = Γ_3 = ⋯`.
    StabilizesAfterFirstStep,
    /// `G` has step 2: `Γ_i/Γ_{i+1} ≅ G_i/G_{i+1}` for `i ≤ 2`.
    QuotientsAgreeThroughStep2,
}

impl fmt::Display for LcsFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LcsFlag::Perfect => "Gamma perfect (Gamma = Gamma_2)",
            LcsFlag::StabilizesAfterFirstStep => "Gamma_2 = Gamma_3 = ...",
            LcsFlag::QuotientsAgreeThroughStep2 => {
                "Gamma_i/Gamma_(i+1) = G_i/G_(i+1) for i <= 2"
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcsReport {
    /// Nilpotency step of `G`; `0` for the trivial group.
    pub step: u8,
    pub order: QuotientOrder,
    pub flags: Vec<LcsFlag>,
}

/// Lower-central-series consequences for `Γ = F_2/⟨⟨R⟩⟩` of the Heisenberg
/// quotient `G = Γ/Γ_3`. Only `(m, s) = (2, 2)` is supported.
pub fn lcs_report(m: usize, s: usize, rels: &[MalcevTriple]) -> Result<LcsReport> {
    if (m, s) != (2, 2) {
        return Err(Error::Unsupported(format!(
            "lower central series report for m = {m}, s = {s}"
        )));
    }
    let order = heis_quotient_order(rels)?;
    let ab = cokernel_invariants(&weight_matrix(rels));
    let (step, flag) = if ab.iter().all(One::is_one) {
        (0, LcsFlag::Perfect)
    } else if order.gamma.is_one() {
        (1, LcsFlag::StabilizesAfterFirstStep)
    } else {
        (2, LcsFlag::QuotientsAgreeThroughStep2)
    };
    Ok(LcsReport {
        step,
        order,
        flags: vec![flag],
    })
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Necklace polynomial `(1/j) Σ_{e|j} μ(e) m^{j/e}`: the number of basic
/// commutators of weight `j` on `m` generators.
pub fn necklace(j: u32, m: u64) -> BigInt {
    assert!(j >= 1 && m >= 1, "necklace needs j, m >= 1");
    let mut total = BigInt::zero();
    for e in (1..=j).filter(|e| j % e == 0) {
        let mu = mobius(e as u64);
        if mu != 0 {
            total += BigInt::from(mu) * num_traits::pow(BigInt::from(m), (j / e) as usize);
        }
    }
    total / j
}

/// Hirsch length of `N_{s,m}`.
pub fn hirsch_length(s: u32, m: u64) -> BigInt {
    (1..=s).map(|j| necklace(j, m)).sum()
}

/// Counts how often each element occurs in a list; used for order censuses
/// that only need sizes.
pub fn tally<K: std::hash::Hash + Eq + Ord + Clone>(items: impl IntoIterator<Item = K>) -> BTreeMap<K, usize> {
    let mut h: HashMap<K, usize> = HashMap::new();
    for k in items {
        *h.entry(k).or_insert(0) += 1;
    }
    h.into_iter().collect()
}
