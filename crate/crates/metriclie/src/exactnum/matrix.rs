//! Dense matrices over [`Scalar`] with the exact kernel/solve/signature
//! routines the geometric layers are built on.

use super::scalar::Scalar;
use crate::error::Error;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coordinate vector over the scalar tower.
pub type Vector = Vec<Scalar>;

/// A square matrix used as a linear map on the algebra's underlying space.
pub type Endomorphism = Matrix;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn add_vectors(x: &[Scalar], y: &[Scalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub_vectors(x: &[Scalar], y: &[Scalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale_vector(c: &Scalar, x: &[Scalar]) -> Vector {
    x.iter().map(|a| c * a).collect()
}

pub fn vector_is_zero(x: &[Scalar]) -> bool {
    x.iter().all(Scalar::is_zero)
}

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector], dim: usize) -> Self {
        Matrix::from_fn(dim, cols.len(), |r, c| cols[c][r].clone())
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

    pub fn row(&self, r: usize) -> Vector {
        (0..self.cols).map(|c| self[(r, c)].clone()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self[(r, c)] != self[(c, r)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t = &t + &self[(i, i)];
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix apply");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for c in 0..self.cols {
                    if !self[(r, c)].is_zero() && !v[c].is_zero() {
                        acc = &acc + &(&self[(r, c)] * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    /// Reduced row echelon form; returns (rref, pivot column per pivot row).
    fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // Prefer the largest entry in float mode, the first nonzero otherwise.
            let mut pick = None;
            for r in row..m.rows {
                if !m[(r, col)].is_zero() {
                    match &pick {
                        None => pick = Some(r),
                        Some(p) => {
                            if m[(r, col)].is_float()
                                && m[(r, col)].to_f64().abs() > m[(*p, col)].to_f64().abs()
                            {
                                pick = Some(r);
                            }
                        }
                    }
                    if !m[(r, col)].is_float() {
                        break;
                    }
                }
            }
            let Some(p) = pick else { continue };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m[(row, col)].inv();
            for c in col..m.cols {
                m[(row, c)] = &m[(row, c)] * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        m[(r, c)] = &m[(r, c)] - &(&factor * &m[(row, c)]);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : m x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = Some(prow);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = zero_vector(self.cols);
            x[free] = Scalar::one();
            for (col, p) in pivot_set.iter().enumerate() {
                if let Some(prow) = p {
                    x[col] = -&r[(*prow, free)];
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Solves `m x = b`; returns a particular solution together with a kernel
    /// basis, or `None` when the system is inconsistent.
    pub fn affine_solve(&self, b: &[Scalar]) -> Option<(Vector, Vec<Vector>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (r, pivots) = aug.rref();
        aug = r;
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = zero_vector(self.cols);
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug[(prow, self.cols)].clone();
        }
        Some((x, self.nullspace()))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            det = &det * &m[(col, col)];
            let inv = m[(col, col)].inv();
            for r in (col + 1)..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                for c in col..n {
                    let delta = &f * &m[(col, c)];
                    m[(r, c)] = &m[(r, c)] - &delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Signature `(p, q, r)` of a symmetric matrix: positive index, negative
    /// index and nullity, computed by congruence (symmetric Gaussian
    /// elimination with hyperbolic 2x2 pivots for zero diagonals).
    pub fn signature(&self) -> Result<(usize, usize, usize), Error> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let mut g = self.clone();
        let n = g.rows;
        let mut active: Vec<usize> = (0..n).collect();
        let (mut p, mut q) = (0usize, 0usize);
        while !active.is_empty() {
            // Diagonal pivot if available.
            if let Some(&k) = active.iter().find(|&&k| !g[(k, k)].is_zero()) {
                match g[(k, k)].sign() {
                    1 => p += 1,
                    -1 => q += 1,
                    _ => unreachable!(),
                }
                let inv = g[(k, k)].inv();
                let others: Vec<usize> = active.iter().copied().filter(|&j| j != k).collect();
                // cache the pivot row: it must survive the whole elimination
                let pivot_row: Vec<Scalar> = others.iter().map(|&j| g[(k, j)].clone()).collect();
                for &i in &others {
                    if g[(i, k)].is_zero() {
                        continue;
                    }
                    let f = &g[(i, k)] * &inv;
                    for (pos, &j) in others.iter().enumerate() {
                        let delta = &f * &pivot_row[pos];
                        g[(i, j)] = &g[(i, j)] - &delta;
                    }
                }
                for &i in &others {
                    g[(i, k)] = Scalar::zero();
                    g[(k, i)] = Scalar::zero();
                }
                active.retain(|&j| j != k);
                continue;
            }
            // All active diagonal entries vanish: look for an off-diagonal
            // entry and split it into a hyperbolic +/- pair.
            let mut pair = None;
            'outer: for (ai, &i) in active.iter().enumerate() {
                for &j in &active[ai + 1..] {
                    if !g[(i, j)].is_zero() {
                        pair = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = pair else {
                // The active block is identically zero.
                return Ok((p, q, active.len()));
            };
            // Basis change e_i -> e_i + e_j puts 2 g_ij on the diagonal.
            let cols: Vec<usize> = (0..n).collect();
            for &c in &cols {
                g[(i, c)] = &g[(i, c)] + &g[(j, c)];
            }
            for &c in &cols {
                g[(c, i)] = &g[(c, i)] + &g[(c, j)];
            }
        }
        Ok((p, q, 0))
    }

    pub fn to_float(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Scalar::float(x.to_f64())).collect(),
        }
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if !self[(r, k)].is_zero() && !rhs[(k, c)].is_zero() {
                    acc = &acc + &(&self[(r, k)] * &rhs[(k, c)]);
                }
            }
            acc
        })
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

/// Reduced (row echelon) basis of the span of the given vectors.
pub fn span_basis(vectors: &[Vector], dim: usize) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(vectors.len(), dim, |r, c| vectors[r][c].clone());
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(v: &[Scalar], basis: &[Vector], dim: usize) -> bool {
    if vector_is_zero(v) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let m = Matrix::from_columns(basis, dim);
    m.affine_solve(v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect())
    }

    #[test]
    fn nullspace_full_rank_identity() {
        assert!(Matrix::identity(4).nullspace().is_empty());
    }

    #[test]
    fn nullspace_rank_one() {
        let m = mat(&[&[1, 1], &[2, 2]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(vector_is_zero(&m.apply(&ns[0])));
        // span{(1,-1)}
        let t = &ns[0][0] * &Scalar::from_int(-1);
        assert_eq!(ns[0][1], t);
    }

    #[test]
    fn affine_solve_identity_and_inconsistent() {
        let id = Matrix::identity(3);
        let b = vec![s(1), s(2), s(3)];
        let (x, ker) = id.affine_solve(&b).unwrap();
        assert_eq!(x, b);
        assert!(ker.is_empty());

        let zero = Matrix::zeros(2, 2);
        assert!(zero.affine_solve(&[s(1), s(0)]).is_none());
    }

    #[test]
    fn signature_basics() {
        assert_eq!(Matrix::identity(4).signature().unwrap(), (4, 0, 0));
        let m = mat(&[&[1, 0], &[0, -1]]);
        assert_eq!(m.signature().unwrap(), (1, 1, 0));
        // Gram matrix of e1.e2 + e3.e4 (two hyperbolic planes).
        let h = mat(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(h.signature().unwrap(), (2, 2, 0));
        assert_eq!(Matrix::zeros(3, 3).signature().unwrap(), (0, 0, 3));
        assert!(mat(&[&[0, 1], &[2, 0]]).signature().is_err());
    }

    #[test]
    fn signature_pivot_row_survives_elimination() {
        // regression: eliminating several rows against one pivot must not
        // clobber the pivot row mid-loop
        let m = Matrix::from_rows(vec![
            vec![Scalar::rat(1, 3), s(1), s(2)],
            vec![s(1), s(0), s(0)],
            vec![s(2), s(0), s(2)],
        ]);
        assert_eq!(m.signature().unwrap(), (2, 1, 0));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        assert!(mat(&[&[1, 1], &[2, 2]]).inverse().is_none());
    }

    #[test]
    fn rank_nullity() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        assert_eq!(m.rank() + m.nullspace().len(), m.cols());
    }
}
