//! Exact integer matrices with Hermite and Smith normal forms.
//!
//! Conventions: the Hermite form is row-style (`H = U·A`, echelon, positive
//! pivots, entries above each pivot reduced into `[0, pivot)`); the Smith form
//! returns `S = U·A·V` with positive diagonal `d_1 | d_2 | …`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have the
    /// same length; `cols` disambiguates the empty case.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given integer vectors of length `rows`.
    pub fn from_columns<C: AsRef<[i64]>>(rows: usize, cols: &[C]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn from_bigint_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_range(&self, start: usize, end: usize) -> Self {
        let mut m = Self::zeros(end - start, self.cols);
        for i in start..end {
            for j in 0..self.cols {
                m[(i - start, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_range(&self, start: usize, end: usize) -> Self {
        let mut m = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m[(i, j - start)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m[(k, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            for i in r + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let (f, g) = (a[(r, c)].clone(), a[(i, c)].clone());
                for j in c..a.cols {
                    let v = &a[(i, j)] * &f - &a[(r, j)] * &g;
                    a[(i, j)] = v;
                }
            }
            r += 1;
        }
        r
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Reduction of every entry modulo 2.
    pub fn mod2(&self) -> crate::gf2::Gf2Matrix {
        let mut m = crate::gf2::Gf2Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_odd() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(r, j)]);
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self[(i, c)]);
            self[(i, c)] = v;
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    /// Replaces rows (a, b) by (x·a + y·b, u·a + v·b).
    fn combine_rows(&mut self, a: usize, b: usize, [x, y, u, v]: [&BigInt; 4]) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = x * &ra + y * &rb;
            self[(b, j)] = u * &ra + v * &rb;
        }
    }

    /// Replaces columns (a, b) by (x·a + y·b, u·a + v·b).
    fn combine_cols(&mut self, a: usize, b: usize, [x, y, u, v]: [&BigInt; 4]) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of a row-style Hermite reduction.
#[derive(Clone, Debug)]
pub struct Hermite {
    /// `h = u · a`
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Inverse of `u`, tracked alongside it.
    pub u_inv: IntMatrix,
    /// Number of nonzero rows of `h`.
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Returns `(g, x, y)` with `x·a + y·b = g = gcd(a, b) ≥ 0`.
fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Row-style Hermite normal form with the transformation and its inverse.
pub fn hermite_normal_form(a: &IntMatrix) -> Hermite {
    let m = a.rows;
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..a.cols {
        if pr == m {
            break;
        }
        for r in pr + 1..m {
            if h[(r, col)].is_zero() {
                continue;
            }
            let (g, x, y) = extended_gcd(&h[(pr, col)], &h[(r, col)]);
            let ap = &h[(pr, col)] / &g;
            let bp = &h[(r, col)] / &g;
            let nbp = -&bp;
            // E = [[x, y], [-b', a']] has determinant 1; E^-1 = [[a', -y], [b', x]].
            h.combine_rows(pr, r, [&x, &y, &nbp, &ap]);
            u.combine_rows(pr, r, [&x, &y, &nbp, &ap]);
            let ny = -&y;
            u_inv.combine_cols(pr, r, [&ap, &bp, &ny, &x]);
        }
        if h[(pr, col)].is_zero() {
            continue;
        }
        if h[(pr, col)].is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
            u_inv.negate_col(pr);
        }
        let pivot = h[(pr, col)].clone();
        for r in 0..pr {
            let q = h[(r, col)].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            let nq = -&q;
            h.add_row_multiple(r, pr, &nq);
            u.add_row_multiple(r, pr, &nq);
            u_inv.add_col_multiple(pr, r, &q);
        }
        pivots.push(col);
        pr += 1;
    }
    Hermite { h, u, u_inv, rank: pr, pivots }
}

/// Result of a Smith reduction: `s = u · a · v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// The nonzero invariant factors `d_1 | d_2 | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // Move a nonzero entry of least magnitude to (t, t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_smith(s, u, v);
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = s[(i, t)].div_floor(&pivot);
                let nq = -&q;
                s.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = s[(t, j)].div_floor(&pivot);
                let nq = -&q;
                s.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(s, u, v)
}

fn finish_smith(mut s: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> Smith {
    for t in 0..s.rows.min(s.cols) {
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { s, u, v }
}

/// Basis (as columns) of the saturation `(ℚ-span of B) ∩ ℤⁿ` of the column span of `b`.
pub fn saturation(b: &IntMatrix) -> IntMatrix {
    let herm = hermite_normal_form(b);
    herm.u_inv.col_range(0, herm.rank)
}

/// A split of ℤⁿ along the saturation of a sublattice.
#[derive(Clone, Debug)]
pub struct QuotientLattice {
    /// Rank of the sublattice.
    pub rank: usize,
    /// Columns form a basis of the saturated sublattice.
    pub saturation: IntMatrix,
    /// Surjection ℤⁿ → ℤ^{n−r} whose kernel is the saturation.
    pub projection: IntMatrix,
    /// Right inverse of `projection`.
    pub section: IntMatrix,
}

pub fn quotient_lattice(n: usize, b: &IntMatrix) -> QuotientLattice {
    assert_eq!(b.rows, n, "sublattice generators must live in Z^{n}");
    let herm = hermite_normal_form(b);
    let r = herm.rank;
    QuotientLattice {
        rank: r,
        saturation: herm.u_inv.col_range(0, r),
        projection: herm.u.row_range(r, n),
        section: herm.u_inv.col_range(r, n),
    }
}

/// One surjection ℤⁿ → ℤ^{n−r} with kernel equal to the saturation of the column span of `b`.
pub fn quotient_projection(n: usize, b: &IntMatrix) -> IntMatrix {
    quotient_lattice(n, b).projection
}

/// Index of the lattice spanned by the columns of `b` inside its saturation.
pub fn saturation_index(b: &IntMatrix) -> BigInt {
    let f = smith_normal_form(b).invariant_factors();
    f.into_iter().product()
}

/// Divides an integer vector by the gcd of its entries. Zero vectors are returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}
