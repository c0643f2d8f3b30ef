//! Dense exact linear algebra over an arbitrary field.
//!
//! Everything is plain Gaussian elimination; the matrices here are tiny
//! (fiber dimension at most a few dozen) and exactness matters more than
//! asymptotics. The same code runs over rational numbers for pointwise
//! fiber computations and over rational-function fields for the symbolic
//! Moser identities.

use num::rational::BigRational;
use num::{One, Zero};

use crate::expr::ScalarExpr;

/// Field operations with context-carrying zero/one (a `ScalarExpr` zero
/// needs to know its chart, so constants are built from a witness element).
pub trait FieldElem: Clone + PartialEq {
    fn zero_like(witness: &Self) -> Self;
    fn one_like(witness: &Self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` when dividing by zero.
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl FieldElem for BigRational {
    fn zero_like(_: &Self) -> Self {
        BigRational::zero()
    }
    fn one_like(_: &Self) -> Self {
        BigRational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl FieldElem for ScalarExpr {
    fn zero_like(witness: &Self) -> Self {
        ScalarExpr::zero(witness.chart())
    }
    fn one_like(witness: &Self) -> Self {
        ScalarExpr::one(witness.chart())
    }
    fn add(&self, o: &Self) -> Self {
        ScalarExpr::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ScalarExpr::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarExpr::mul(self, o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        ScalarExpr::div(self, o).ok()
    }
    fn neg(&self) -> Self {
        ScalarExpr::neg(self)
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: FieldElem> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, witness: &T) -> Matrix<T> {
        Matrix {
            rows,
            cols,
            data: vec![T::zero_like(witness); rows * cols],
        }
    }

    pub fn identity(n: usize, witness: &T) -> Matrix<T> {
        let mut m = Matrix::zeros(n, n, witness);
        for i in 0..n {
            m[(i, i)] = T::one_like(witness);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Matrix<T> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix<T> {
        let w = &self.data[0.min(self.data.len().saturating_sub(1))];
        let mut out = Matrix::zeros(self.cols, self.rows, w);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let w = &self.data[0];
        let mut out = Matrix::zeros(self.rows, other.cols, w);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&t);
                }
            }
        }
        out
    }

    pub fn add_mat(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub_mat(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.sub(b);
        }
        out
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.mul(c);
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero_like(&self.data[0]);
                for j in 0..self.cols {
                    acc = acc.add(&self[(i, j)].mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = T::one_like(&self.data[0])
                .div(&self[(r, c)])
                .expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].mul(&inv);
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)].clone();
                    for j in c..self.cols {
                        let t = factor.mul(&self[(r, j)]);
                        self[(i, j)] = self[(i, j)].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Canonical basis of the row space: the nonzero rows of the rref.
    /// Equal row spaces yield identical output.
    pub fn row_space_basis(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        (0..pivots.len()).map(|i| m.row(i).to_vec()).collect()
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        if self.data.is_empty() {
            // No constraints at all: the kernel is everything.
            return Vec::new();
        }
        let w = &self.data[0];
        let mut m = self.clone();
        let pivots = m.rref();
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![T::zero_like(w); self.cols];
            v[free] = T::one_like(w);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m[(r, free)].neg();
            }
            out.push(v);
        }
        out
    }

    /// Inverse by Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let w = &self.data[0];
        let mut a = self.clone();
        let mut b = Matrix::identity(n, w);
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return None;
            };
            a.swap_rows(c, pr);
            b.swap_rows(c, pr);
            let inv = T::one_like(w).div(&a[(c, c)]).expect("nonzero pivot");
            for j in 0..n {
                a[(c, j)] = a[(c, j)].mul(&inv);
                b[(c, j)] = b[(c, j)].mul(&inv);
            }
            for i in 0..n {
                if i != c && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in 0..n {
                        let t = f.mul(&a[(c, j)]);
                        a[(i, j)] = a[(i, j)].sub(&t);
                        let t = f.mul(&b[(c, j)]);
                        b[(i, j)] = b[(i, j)].sub(&t);
                    }
                }
            }
        }
        Some(b)
    }

    /// Determinant by elimination.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let w = &self.data[0];
        let mut a = self.clone();
        let mut det = T::one_like(w);
        let n = self.rows;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return T::zero_like(w);
            };
            if pr != c {
                a.swap_rows(c, pr);
                det = det.neg();
            }
            det = det.mul(&a[(c, c)]);
            let inv = T::one_like(w).div(&a[(c, c)]).expect("nonzero pivot");
            for i in c + 1..n {
                if !a[(i, c)].is_zero() {
                    let f = a[(i, c)].mul(&inv);
                    for j in c..n {
                        let t = f.mul(&a[(c, j)]);
                        a[(i, j)] = a[(i, j)].sub(&t);
                    }
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

/// Intersection of the row spaces of `a` and `b`, as a canonical basis.
pub fn row_space_intersection<T: FieldElem>(a: &Matrix<T>, b: &Matrix<T>) -> Vec<Vec<T>> {
    assert_eq!(a.ncols(), b.ncols(), "ambient dimension mismatch");
    if a.nrows() == 0 || b.nrows() == 0 {
        return Vec::new();
    }
    let w = &a[(0, 0)];
    // x = uᵀa = vᵀb  ⇔  (u, v) in ker [aᵀ | -bᵀ].
    let n = a.ncols();
    let mut stacked = Matrix::zeros(n, a.nrows() + b.nrows(), w);
    for j in 0..a.nrows() {
        for i in 0..n {
            stacked[(i, j)] = a[(j, i)].clone();
        }
    }
    for j in 0..b.nrows() {
        for i in 0..n {
            stacked[(i, a.nrows() + j)] = b[(j, i)].neg();
        }
    }
    let kernel = stacked.kernel_basis();
    let mut vectors = Vec::new();
    for k in kernel {
        let mut x = vec![T::zero_like(w); n];
        for (j, u) in k.iter().take(a.nrows()).enumerate() {
            for i in 0..n {
                x[i] = x[i].add(&u.mul(&a[(j, i)]));
            }
        }
        if x.iter().any(|c| !c.is_zero()) {
            vectors.push(x);
        }
    }
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_rows(vectors).row_space_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
    }

    /// Independent inverse oracle: adjugate over cofactors.
    fn adjugate_inverse(a: &Matrix<BigRational>) -> Option<Matrix<BigRational>> {
        let n = a.nrows();
        let det = a.det();
        if num::Zero::is_zero(&det) {
            return None;
        }
        let minor = |r: usize, c: usize| {
            let rows: Vec<Vec<BigRational>> = (0..n)
                .filter(|&i| i != r)
                .map(|i| {
                    (0..n)
                        .filter(|&j| j != c)
                        .map(|j| a[(i, j)].clone())
                        .collect()
                })
                .collect();
            Matrix::from_rows(rows).det()
        };
        let mut out = Matrix::zeros(n, n, &det);
        for i in 0..n {
            for j in 0..n {
                let mut c = minor(j, i) / &det;
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                out[(i, j)] = c;
            }
        }
        Some(out)
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(num::Zero::is_zero));
        }
    }

    #[test]
    fn inverse_against_adjugate_oracle() {
        let a = m(&[&[2, 1, 0], &[1, -1, 3], &[0, 5, 1]]);
        let inv = a.inverse().unwrap();
        let oracle = adjugate_inverse(&a).unwrap();
        assert_eq!(inv, oracle);
        assert_eq!(a.matmul(&inv), Matrix::identity(3, &rat(1, 1)));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn row_space_canonical_basis() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = m(&[&[1, 2, 1], &[1, 0, -1]]);
        assert_eq!(a.row_space_basis(), b.row_space_basis());
    }

    #[test]
    fn intersection_of_planes() {
        // Two planes in R^3 meeting in a line.
        let a = m(&[&[1, 0, 0], &[0, 1, 0]]);
        let b = m(&[&[0, 1, 0], &[0, 0, 1]]);
        let i = row_space_intersection(&a, &b);
        assert_eq!(i.len(), 1);
        assert_eq!(i[0], vec![rat(0, 1), rat(1, 1), rat(0, 1)]);
        // Trivial intersection.
        let c = m(&[&[1, 0, 0]]);
        let d = m(&[&[0, 1, 0]]);
        assert!(row_space_intersection(&c, &d).is_empty());
    }

    #[test]
    fn symbolic_matrix_inverse() {
        use crate::expr::{parse, Chart};
        let chart = Chart::new("T", &["t"]).unwrap();
        let t = parse("t", &chart).unwrap();
        let one = ScalarExpr::one(&chart);
        let a = Matrix::from_rows(vec![
            vec![one.clone(), t.clone()],
            vec![t.clone(), one.clone()],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.matmul(&inv), Matrix::identity(2, &one));
        // det = 1 - t^2.
        assert_eq!(a.det(), parse("1 - t^2", &chart).unwrap());
    }
}
