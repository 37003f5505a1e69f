//! Linear algebra over the two-element field on bit-packed rows.

use std::fmt;
use std::ops::{Add, Mul};

use itertools::Itertools;
use thiserror::Error;

const WORD: usize = 64;

fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// Dense matrix over GF(2). Each row is a packed bitset, low bit first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows.
    pub fn from_rows<R: AsRef<[u8]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given bit vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &b) in c.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.bits[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.bits[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    /// row[dst] ^= row[src]
    fn xor_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.bits.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.bits.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.bits.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.ones_in_row(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Column indices of the set bits of row `i`, ascending.
    pub fn ones_in_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + b)
            })
        })
    }

    pub fn column(&self, j: usize) -> Vec<bool> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.ones_in_row(i).filter(|&j| v[j]).count() % 2 == 1)
            .collect()
    }

    /// Copies `block` into this matrix with its top-left corner at `(r0, c0)`.
    /// Entries are XOR-ed in, so overlapping blocks accumulate.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Gf2Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in block.ones_in_row(i) {
                self.flip(r0 + i, c0 + j);
            }
        }
    }

    /// The submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if self.get(i, j) {
                    m.set(a, b, true);
                }
            }
        }
        m
    }

    /// Row-reduces in place to reduced echelon form and returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; no back substitution needed for rank.
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in r + 1..m.rows {
                if m.get(i, c) {
                    m.xor_row(i, r);
                }
            }
            r += 1;
        }
        r
    }

    /// Columns spanning the kernel `{x : A·x = 0}`, one per free variable.
    pub fn kernel_basis(&self) -> Self {
        let mut red = self.clone();
        let pivots = red.reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, true);
            for (r, &p) in pivots.iter().enumerate() {
                if red.get(r, f) {
                    k.set(p, col, true);
                }
            }
        }
        k
    }

    /// Solves `A·x = b`, returning one solution when the system is consistent.
    pub fn solve(&self, b: &[bool]) -> Option<Vec<bool>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in self.ones_in_row(i) {
                aug.set(i, j, true);
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.reduce();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![false; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

impl Mul for &Gf2Matrix {
    type Output = Gf2Matrix;
    fn mul(self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Gf2Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let dst = i * out.stride;
            for k in self.ones_in_row(i) {
                let src = k * rhs.stride;
                for w in 0..out.stride {
                    out.bits[dst + w] ^= rhs.bits[src + w];
                }
            }
        }
        out
    }
}

impl Add for &Gf2Matrix {
    type Output = Gf2Matrix;
    fn add(self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&rhs.bits) {
            *a ^= *b;
        }
        out
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("boundary {degree} has shape {found:?}, expected {expected:?}")]
    Shape { degree: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("composite of boundaries {degree} and {} is nonzero", degree + 1)]
    NotAComplex { degree: usize },
}

/// Graded GF(2) vector spaces `C_0..C_n` with boundaries `∂_k : C_k → C_{k−1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k`.
    boundaries: Vec<Gf2Matrix>,
}

impl ChainComplex {
    /// Checks shapes and `∂_k ∘ ∂_{k+1} = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<Gf2Matrix>) -> Result<Self, ChainError> {
        assert_eq!(boundaries.len() + 1, dims.len().max(1), "need one boundary per positive degree");
        for (i, b) in boundaries.iter().enumerate() {
            let k = i + 1;
            let expected = (dims[k - 1], dims[k]);
            if (b.rows(), b.cols()) != expected {
                return Err(ChainError::Shape { degree: k, expected, found: (b.rows(), b.cols()) });
            }
        }
        for i in 1..boundaries.len() {
            if !(&boundaries[i - 1] * &boundaries[i]).is_zero() {
                return Err(ChainError::NotAComplex { degree: i });
            }
        }
        Ok(Self { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// `∂_k` for `1 ≤ k ≤ n`.
    pub fn boundary(&self, k: usize) -> &Gf2Matrix {
        &self.boundaries[k - 1]
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(Gf2Matrix::rank).collect();
        (0..self.dims.len())
            .map(|k| {
                let out = if k == 0 { 0 } else { ranks[k - 1] };
                let inc = ranks.get(k).copied().unwrap_or(0);
                self.dims[k] - out - inc
            })
            .collect()
    }
}

/// `q`-element subsets of `0..n` in lexicographic order of sorted tuples.
pub fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(q).collect()
}

/// Matrix of the map induced on `q`-th exterior powers, in the lexicographic
/// subset bases. Entry `(S, T)` is `det A[S, T]` reduced mod 2.
pub fn exterior_power(a: &Gf2Matrix, q: usize) -> Gf2Matrix {
    let rs = subsets(a.rows(), q);
    let cs = subsets(a.cols(), q);
    let mut out = Gf2Matrix::zeros(rs.len(), cs.len());
    for (i, s) in rs.iter().enumerate() {
        for (j, t) in cs.iter().enumerate() {
            if a.submatrix(s, t).rank() == q {
                out.set(i, j, true);
            }
        }
    }
    out
}
