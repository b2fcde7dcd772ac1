//! Dense linear algebra over a prime field GF(p).
//!
//! Elements are plain `u32` residues in `[0, p)`; the modulus lives in a
//! [`Field`] value that every matrix and form carries. Elimination always
//! pivots on the first nonzero entry in row order, so every routine here is
//! a deterministic function of its input.

use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime field GF(p) with p an odd prime below 2^31.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
}

impl Field {
    pub const DEFAULT_PRIME: u32 = 31991;

    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 31).contains(&p) || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Field { p: p as u32 })
    }

    pub fn default_prime() -> Self {
        Field {
            p: Self::DEFAULT_PRIME,
        }
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, for display.
    pub fn to_signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `(-1)^k` as a field element.
    pub fn sign(self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.p - 1
        }
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.p)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_root(self) -> u32 {
        let order = self.p as u64 - 1;
        let factors = prime_factors(order);
        (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("multiplicative group of a prime field is cyclic")
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Field::new(p as u64)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ScalarMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        debug_assert!(data.iter().all(|&v| v < field.modulus()));
        ScalarMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_data(field, rows, cols, data)
    }

    /// Builds a matrix from signed integer rows, reducing mod p.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self::from_data(field, rows, cols, data)
    }

    /// Random skew-symmetric matrix (zero diagonal).
    pub fn random_skew<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = field.random(rng);
                m[(i, j)] = v;
                m[(j, i)] = field.neg(v);
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)] == 0
                    && (i + 1..self.cols).all(|j| self[(j, i)] == self.field.neg(self[(i, j)]))
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_data(
            f,
            self.rows,
            self.cols,
            self.data.iter().map(|&v| f.mul(v, c)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Self::from_data(f, self.rows, self.cols, data)
    }

    /// `self += c * other`, entrywise.
    pub fn add_scaled(&mut self, c: u32, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c == 0 {
            return;
        }
        let p = self.field.modulus() as u64;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = ((*a as u64 + c as u64 * b as u64) % p) as u32;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let p = self.field.modulus() as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self[(i, k)] as u64;
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
        }
        Self::from_data(
            self.field,
            self.rows,
            other.cols,
            out.into_iter().map(|v| v as u32).collect(),
        )
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.modulus() as u64;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
            })
            .collect()
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])]
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * c);
        head[lo * c..(lo + 1) * c].swap_with_slice(&mut tail[..c]);
    }

    /// Row-reduces in place, pivoting on the first nonzero entry at or below
    /// the current row. Only the first `pivot_cols` columns are searched for
    /// pivots; later columns are carried along. Pivot rows are normalized to
    /// a leading 1. With `reduced`, entries above pivots are cleared as well.
    ///
    /// Returns the pivot columns in row order.
    fn eliminate(&mut self, pivot_cols: usize, reduced: bool) -> Vec<usize> {
        let p = self.field.modulus() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols.min(cols) {
            if r == self.rows {
                break;
            }
            let Some(found) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            self.swap_rows(found, r);
            let inv = self.field.inv(self.data[r * cols + c]);
            for v in &mut self.data[r * cols + c..(r + 1) * cols] {
                *v = ((*v as u64 * inv as u64) % p) as u32;
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let pivot_tail = &pivot_row[c..];
            let clear = |row: &mut [u32]| {
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                let neg = p - factor as u64;
                for (x, &y) in row[c..].iter_mut().zip(pivot_tail) {
                    *x = ((*x as u64 + neg * y as u64) % p) as u32;
                }
            };
            for row in after.chunks_exact_mut(cols) {
                clear(row);
            }
            if reduced {
                for row in before.chunks_exact_mut(cols) {
                    clear(row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.eliminate(self.cols, false).len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let mut work = self.clone();
        let pivots = work.eliminate(self.cols, true);
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        (0..self.cols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(work[(row, free)]);
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<u32> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let f = self.field;
        let mut work = self.clone();
        // Track the product of pivots before normalization.
        let n = self.rows;
        let mut det = 1u32;
        let mut r = 0;
        let mut odd = false;
        for c in 0..n {
            let Some(found) = (r..n).find(|&i| work[(i, c)] != 0) else {
                return Ok(0);
            };
            if found != r {
                work.swap_rows(found, r);
                odd = !odd;
            }
            let pivot = work[(r, c)];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for i in r + 1..n {
                let factor = f.mul(work[(i, c)], inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(work[(i, j)], f.mul(factor, work[(r, j)]));
                    work[(i, j)] = v;
                }
            }
            r += 1;
        }
        Ok(if odd { f.neg(det) } else { det })
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.eliminate(n, true);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(self.field, n, n, |i, j| aug[(i, n + j)]))
    }

    /// Solves `self · X = rhs` for a full-column-rank `self`, sharing one
    /// elimination across all right-hand sides.
    pub fn solve_many(&self, rhs: &Self) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::SizeMismatch(format!(
                "right-hand side has {} rows, system has {}",
                rhs.rows, self.rows
            )));
        }
        let (n, k) = (self.cols, rhs.cols);
        let width = n + k;
        let mut aug = Self::zeros(self.field, self.rows, width);
        for i in 0..self.rows {
            aug.data[i * width..i * width + n].copy_from_slice(self.row(i));
            aug.data[i * width + n..(i + 1) * width].copy_from_slice(rhs.row(i));
        }
        let pivots = aug.eliminate(n, true);
        if pivots.len() < n {
            return Err(Error::RankDeficient {
                rank: pivots.len(),
                cols: n,
            });
        }
        if (n..self.rows).any(|i| aug.row(i)[n..].iter().any(|&v| v != 0)) {
            return Err(Error::Inconsistent);
        }
        Ok(Self::from_fn(self.field, n, k, |i, j| aug[(i, n + j)]))
    }
}

impl Index<(usize, usize)> for ScalarMatrix {
    type Output = u32;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ScalarMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ScalarMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<i64> = self.row(i).iter().map(|&v| self.field.to_signed(v)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}
