//! Exact integer linear algebra.
//!
//! Everything is computed over arbitrary-precision integers. Smith forms use
//! smallest-absolute-value pivoting, which keeps intermediate entries small on
//! the random matrices this crate produces but makes no promise in general.
//!
//! Invariant factors are always reported in ascending divisibility order
//! `d_1 | d_2 | … | d_k`, with zeros (free summands) last.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&x| BigInt::from(x)));
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a `rows × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Shape(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += x * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        out
    }

    fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    fn from_nested(rows: usize, cols: usize, nested: Vec<Vec<BigInt>>) -> Self {
        Self {
            rows,
            cols,
            data: nested.into_iter().flatten().collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// gcd of all entries; `0` for an empty or all-zero vector.
pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_vec(v).is_one()
}

/// Smith normal form `U · M · V = diag(invariants)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `d_1 | d_2 | … | d_min(rows, cols)`, all non-negative.
    pub invariants: Vec<BigInt>,
    /// Unimodular `rows × rows` row transform.
    pub u: IntMatrix,
    /// Unimodular `cols × cols` column transform.
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal matrix `U · M · V`, shaped like `M`.
    pub fn diagonal(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.invariants.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.invariants.iter().filter(|x| !x.is_zero()).count()
    }
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn new(m: &IntMatrix) -> Self {
        Self {
            a: m.to_rows(),
            u: IntMatrix::identity(m.rows).to_rows(),
            v: IntMatrix::identity(m.cols).to_rows(),
            rows: m.rows,
            cols: m.cols,
        }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            self.a.swap(i, k);
            self.u.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j != k {
            for row in self.a.iter_mut().chain(self.v.iter_mut()) {
                row.swap(j, k);
            }
        }
    }

    /// row_i -= q · row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        for mat in [&mut self.a, &mut self.u] {
            let (src, dst) = pick_two(mat, k, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
    }

    /// col_j -= q · col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !row[k].is_zero() {
                let delta = q * &row[k];
                row[j] -= delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row[j] = -&row[j];
        }
    }

    fn min_nonzero_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

fn pick_two(mat: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = mat.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = mat.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

pub fn snf(m: &IntMatrix) -> SmithForm {
    let mut r = Reducer::new(m);
    let n = m.rows.min(m.cols);
    let mut invariants = vec![BigInt::zero(); n];

    'diag: for t in 0..n {
        loop {
            let Some((pi, pj)) = r.min_nonzero_from(t) else {
                break 'diag;
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r.rows {
                if !r.a[i][t].is_zero() {
                    let q = r.a[i][t].div_floor(&r.a[t][t]);
                    r.row_sub(i, t, &q);
                    clean &= r.a[i][t].is_zero();
                }
            }
            for j in t + 1..r.cols {
                if !r.a[t][j].is_zero() {
                    let q = r.a[t][j].div_floor(&r.a[t][t]);
                    r.col_sub(j, t, &q);
                    clean &= r.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }

            let pivot = r.a[t][t].clone();
            let offender = (t + 1..r.rows)
                .find(|&i| (t + 1..r.cols).any(|j| !r.a[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into row t.
                    r.row_sub(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if r.a[t][t].is_negative() {
            r.negate_row(t);
        }
        invariants[t] = r.a[t][t].clone();
    }

    SmithForm {
        invariants,
        u: IntMatrix::from_nested(m.rows, m.rows, r.u),
        v: IntMatrix::from_nested(m.cols, m.cols, r.v),
    }
}

/// Invariant factors of `Z^m / colspan(M)` for an `m × r` matrix, padded with
/// zeros to length exactly `m`.
pub fn cokernel_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut inv = snf(m).invariants;
    inv.resize(m.rows, BigInt::zero());
    inv
}

/// `(rank, dim)` of `⊕ Z/d_i`: rank counts the `d_i ≠ 1`, dim counts the `d_i = 0`.
pub fn rank_and_dim(invariants: &[BigInt]) -> (usize, usize) {
    let rank = invariants.iter().filter(|d| !d.is_one()).count();
    let dim = invariants.iter().filter(|d| d.is_zero()).count();
    (rank, dim)
}

/// Column-style Hermite form `M · V = H`.
///
/// Rows are processed bottom-up; each pivot lands in the rightmost free
/// column, so `H` has its zero columns first and its pivot columns last in
/// upper-echelon shape. Pivots are positive and entries to the right of a
/// pivot in its row are reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnHermite {
    pub h: IntMatrix,
    pub v: IntMatrix,
    /// `(row, column)` of each pivot, bottom row first.
    pub pivots: Vec<(usize, usize)>,
}

impl ColumnHermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Number of leading zero columns, i.e. the nullity of `M`.
    pub fn nullity(&self) -> usize {
        self.h.cols() - self.pivots.len()
    }
}

pub fn column_hermite(m: &IntMatrix) -> ColumnHermite {
    let mut r = Reducer::new(m);
    let mut free = m.cols;
    let mut pivots = Vec::new();

    for i in (0..m.rows).rev() {
        if free == 0 {
            break;
        }
        let target = free - 1;
        loop {
            let best = (0..free)
                .filter(|&j| !r.a[i][j].is_zero())
                .min_by(|&x, &y| r.a[i][x].abs().cmp(&r.a[i][y].abs()));
            let Some(j) = best else { break };
            r.swap_cols(j, target);
            let mut done = true;
            for j in 0..target {
                if !r.a[i][j].is_zero() {
                    let q = r.a[i][j].div_floor(&r.a[i][target]);
                    r.col_sub(j, target, &q);
                    done &= r.a[i][j].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if r.a[i][target].is_zero() {
            continue;
        }
        if r.a[i][target].is_negative() {
            r.negate_col(target);
        }
        for j in target + 1..m.cols {
            let q = r.a[i][j].div_floor(&r.a[i][target]);
            if !q.is_zero() {
                r.col_sub(j, target, &q);
            }
        }
        pivots.push((i, target));
        free -= 1;
    }

    ColumnHermite {
        h: IntMatrix::from_nested(m.rows, m.cols, r.a),
        v: IntMatrix::from_nested(m.cols, m.cols, r.v),
        pivots,
    }
}

/// Basis of the integer kernel `{x : Mx = 0}` as the columns of a
/// `cols × nullity` matrix.
pub fn kernel_matrix(m: &IntMatrix) -> IntMatrix {
    let hf = column_hermite(m);
    let q = hf.nullity();
    let idx: Vec<usize> = (0..q).collect();
    let rows: Vec<usize> = (0..m.cols).collect();
    hf.v.select(&rows, &idx)
}

/// Smallest gcd achievable by a nonzero vector in the column span, which is
/// the gcd of all entries of `M`.
pub fn span_min_gcd(m: &IntMatrix) -> BigInt {
    gcd_vec(m.entries())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}
