//! Dense exact matrices over [`FieldScalar`].
//!
//! Row reduction uses the fraction-free (Bareiss) update, so integer inputs
//! keep integer intermediates; only back substitution divides.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use serde::{Deserialize, Serialize};

use crate::field::FieldScalar;

/// A row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![FieldScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, FieldScalar::one())
    }

    pub fn scalar(n: usize, c: FieldScalar) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<FieldScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<FieldScalar>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldScalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
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

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x - y).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|x| x * c).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// `self - c*I`.
    pub fn shift(&self, c: &FieldScalar) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] -= c;
        }
        m
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = FieldScalar::zero();
                for (x, y) in self.row(i).iter().zip(v) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x * y);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![FieldScalar::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in self.row(i).iter().enumerate() {
                if !y.is_zero() {
                    out[j] += &(x * y);
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = &self[(i, k)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let y = &other[(k, j)];
                    if !y.is_zero() {
                        let p = x * y;
                        out[(i, j)] += &p;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    /// Row echelon form by fraction-free elimination. Returns the reduced
    /// matrix and the pivot columns.
    pub fn echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prev = FieldScalar::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let piv = m[(r, c)].clone();
            for i in r + 1..m.rows {
                let f = m[(i, c)].clone();
                for j in c + 1..m.cols {
                    let mut v = &piv * &m[(i, j)];
                    if !f.is_zero() && !m[(r, j)].is_zero() {
                        v -= &(&f * &m[(r, j)]);
                    }
                    m[(i, j)] = if prev.is_one() { v } else { v / &prev };
                }
                m[(i, c)] = FieldScalar::zero();
            }
            // Rows above the pivot row were not rescaled by the Bareiss
            // step, which is fine for echelon form.
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Reduced row echelon form by Gauss-Jordan elimination, with the pivot
    /// columns. Pivots are normalised to 1, so the nonzero rows are a
    /// canonical basis of the row space.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = &m[(r, j)] * &inv;
                }
            }
            for i in (0..m.rows).filter(|&i| i != r) {
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let d = &f * &m[(r, j)];
                        m[(i, j)] -= &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<FieldScalar>> {
        let (e, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![FieldScalar::zero(); self.cols];
                v[free] = FieldScalar::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -e[(r, free)].clone();
                }
                v
            })
            .collect()
    }

    /// Inverse, if the matrix is square and nonsingular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = FieldScalar::one();
        }
        for c in 0..n {
            let p = (c..n).find(|&i| !aug[(i, c)].is_zero())?;
            aug.swap_rows(c, p);
            let inv = aug[(c, c)].inv().ok()?;
            for j in 0..2 * n {
                aug[(c, j)] = &aug[(c, j)] * &inv;
            }
            for i in (0..n).filter(|&i| i != c) {
                let f = aug[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let d = &f * &aug[(c, j)];
                    aug[(i, j)] -= &d;
                }
            }
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    /// Characteristic polynomial `det(xI - self)`, coefficients from the
    /// constant term up. Reduces to upper Hessenberg form by elementary
    /// similarities, then expands the Hessenberg determinant recursively.
    pub fn charpoly(&self) -> Vec<FieldScalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for k in 1..n.saturating_sub(1) {
            let Some(p) = (k..n).find(|&i| !h[(i, k - 1)].is_zero()) else {
                continue;
            };
            if p != k {
                h.swap_rows(p, k);
                h.swap_cols(p, k);
            }
            let piv = h[(k, k - 1)].clone();
            for i in k + 1..n {
                if h[(i, k - 1)].is_zero() {
                    continue;
                }
                let f = &h[(i, k - 1)] / &piv;
                // row_i -= f row_k, then col_k += f col_i
                for j in 0..n {
                    if !h[(k, j)].is_zero() {
                        let d = &f * &h[(k, j)];
                        h[(i, j)] -= &d;
                    }
                }
                for r in 0..n {
                    if !h[(r, i)].is_zero() {
                        let d = &f * &h[(r, i)];
                        h[(r, k)] += &d;
                    }
                }
            }
        }
        // p_0 = 1; p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im prod_{j=i+1}^{m} h_{j,j-1} p_{i-1}
        let mut polys: Vec<Vec<FieldScalar>> = vec![vec![FieldScalar::one()]];
        for m in 0..n {
            let prev = &polys[m];
            let mut next = vec![FieldScalar::zero(); m + 2];
            for (d, c) in prev.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= &(c * &h[(m, m)]);
            }
            let mut sub = FieldScalar::one();
            for i in (0..m).rev() {
                sub = &sub * &h[(i + 1, i)];
                if sub.is_zero() {
                    break;
                }
                let coef = &h[(i, m)] * &sub;
                if coef.is_zero() {
                    continue;
                }
                for (d, c) in polys[i].iter().enumerate() {
                    next[d] -= &(&coef * c);
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    /// Dimension of the span of `vectors` (all of equal length).
    pub fn span_rank(vectors: &[Vec<FieldScalar>]) -> usize {
        if vectors.is_empty() {
            return 0;
        }
        Self::from_rows(vectors.to_vec()).rank()
    }

    /// The canonical (reduced echelon) basis of the span of `vectors`.
    pub fn span_basis(vectors: &[Vec<FieldScalar>]) -> Vec<Vec<FieldScalar>> {
        if vectors.is_empty() {
            return Vec::new();
        }
        let (e, pivots) = Self::from_rows(vectors.to_vec()).rref();
        (0..pivots.len()).map(|i| e.row(i).to_vec()).collect()
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
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Multiplicity of `root` as a root of the polynomial `coeffs`
/// (constant term first).
pub fn root_multiplicity(coeffs: &[FieldScalar], root: &FieldScalar) -> usize {
    let mut p: Vec<FieldScalar> = coeffs.to_vec();
    let mut mult = 0;
    while p.len() > 1 {
        // Synthetic division by (x - root).
        let n = p.len() - 1;
        let mut q = vec![FieldScalar::zero(); n];
        let mut carry = FieldScalar::zero();
        for d in (0..=n).rev() {
            let v = &p[d] + &(&carry * root);
            if d == 0 {
                carry = v;
            } else {
                q[d - 1] = v.clone();
                carry = v;
            }
        }
        if !carry.is_zero() {
            break;
        }
        mult += 1;
        p = q;
    }
    mult
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldScalar;
    fn index(&self, (i, j): (usize, usize)) -> &FieldScalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
