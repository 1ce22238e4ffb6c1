//! Lie algebras given by structure constants: bracket, Chevalley-Eilenberg
//! differential, structural series and the derivation algebra.
//!
//! The global sign convention ties differentials to brackets by
//! `d alpha(x, y) = -alpha([x, y])`, so the algebra `(0,0,e12)` with
//! `de^3 = e^1 ^ e^2` has `[e_1, e_2] = -e_3`. Every curvature quantity
//! downstream is invariant under the overall sign choice; the convention is
//! fixed once here and guarded by the notation round-trip tests.

use crate::error::Error;
use crate::exactnum::{
    basis_vector, in_span, span_basis, vector_is_zero, zero_vector, Matrix, Scalar, Vector,
};
use crate::exterior::KForm;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    /// `table[i][j]` holds the coordinates of `[e_i, e_j]`.
    table: Vec<Vec<Vector>>,
    labels: Vec<String>,
}

/// Structural invariants of a Lie algebra.
#[derive(Debug, Clone)]
pub struct StructuralReport {
    /// `Some(step)` when nilpotent.
    pub nilpotent: Option<usize>,
    pub solvable: bool,
    pub center: Vec<Vector>,
    pub unimodular: bool,
    pub killing_form: Matrix,
    pub killing_zero: bool,
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

impl LieAlgebra {
    /// Builds from a full bracket table, checking antisymmetry and Jacobi.
    pub fn new(dim: usize, table: Vec<Vec<Vector>>) -> Result<Self, Error> {
        let alg = Self::new_unchecked(dim, table);
        for i in 0..dim {
            for j in i..dim {
                let sum = crate::exactnum::add_vectors(&alg.table[i][j], &alg.table[j][i]);
                if !vector_is_zero(&sum) {
                    return Err(Error::NotAntisymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        if let Some((i, j, k)) = alg.jacobi_defect() {
            return Err(Error::JacobiViolation { i: i + 1, j: j + 1, k: k + 1 });
        }
        Ok(alg)
    }

    /// Builds without validating the Jacobi identity. Intended for tests that
    /// compare the Jacobi and `d^2 = 0` predicates on invalid data.
    pub fn new_unchecked(dim: usize, table: Vec<Vec<Vector>>) -> Self {
        assert_eq!(table.len(), dim);
        assert!(table.iter().all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim)));
        LieAlgebra { dim, table, labels: default_labels(dim) }
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        let table = vec![vec![zero_vector(dim); dim]; dim];
        Self::new_unchecked(dim, table)
    }

    /// Builds from sparse structure constants `[e_i, e_j] = sum_k c[(i,j,k)] e_k`
    /// given for `i < j` (0-based).
    pub fn from_structure_constants(
        dim: usize,
        constants: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self, Error> {
        let mut table = vec![vec![zero_vector(dim); dim]; dim];
        for (i, j, k, c) in constants {
            table[*i][*j][*k] = &table[*i][*j][*k] + c;
            table[*j][*i][*k] = &table[*j][*i][*k] - c;
        }
        Self::new(dim, table)
    }

    /// Builds the algebra with the prescribed generator differentials,
    /// `c^k_{ij} = -de^k(e_i, e_j)`.
    pub fn from_differentials(diffs: &[KForm]) -> Result<Self, Error> {
        let dim = diffs.len();
        let mut table = vec![vec![zero_vector(dim); dim]; dim];
        for (k, dk) in diffs.iter().enumerate() {
            assert_eq!(dk.degree(), 2);
            assert_eq!(dk.dim(), dim);
            for (idx, c) in dk.terms() {
                let (i, j) = (idx[0], idx[1]);
                table[i][j][k] = -c;
                table[j][i][k] = c.clone();
            }
        }
        Self::new(dim, table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !self.table[i][j][k].is_zero() {
                        out[k] = &out[k] + &(&c * &self.table[i][j][k]);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(v) = [v, .]`.
    pub fn ad(&self, v: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> =
            (0..self.dim).map(|j| self.bracket(v, &basis_vector(self.dim, j))).collect();
        Matrix::from_columns(&cols, self.dim)
    }

    /// `de^k` as 2-forms, for every generator.
    pub fn differentials(&self) -> Vec<KForm> {
        (0..self.dim)
            .map(|k| {
                let mut f = KForm::zero(self.dim, 2);
                for i in 0..self.dim {
                    for j in (i + 1)..self.dim {
                        if !self.table[i][j][k].is_zero() {
                            f.add_term(&[i, j], &-&self.table[i][j][k]);
                        }
                    }
                }
                f
            })
            .collect()
    }

    /// Chevalley-Eilenberg differential, extended from the generators as an
    /// antiderivation of degree +1.
    pub fn cedifferential(&self, form: &KForm) -> KForm {
        assert_eq!(form.dim(), self.dim);
        let diffs = self.differentials();
        let mut out = KForm::zero(self.dim, form.degree() + 1);
        for (idx, c) in form.terms() {
            for (t, &i) in idx.iter().enumerate() {
                let rest: Vec<usize> =
                    idx.iter().enumerate().filter(|&(s, _)| s != t).map(|(_, &v)| v).collect();
                let sign = if t % 2 == 0 { c.clone() } else { -c };
                let partial = diffs[i].wedge(&KForm::basis(self.dim, &rest));
                out = out.add(&partial.scale(&sign));
            }
        }
        out
    }

    /// First basis triple violating the Jacobi identity, if any (0-based).
    pub fn jacobi_defect(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let ei = basis_vector(self.dim, i);
                    let ej = basis_vector(self.dim, j);
                    let ek = basis_vector(self.dim, k);
                    let mut acc = self.bracket(&self.table[i][j], &ek);
                    acc = crate::exactnum::add_vectors(&acc, &self.bracket(&self.table[j][k], &ei));
                    acc = crate::exactnum::add_vectors(&acc, &self.bracket(&self.table[k][i], &ej));
                    if !vector_is_zero(&acc) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Whether `d(de^k) = 0` for every generator; equivalent to Jacobi.
    pub fn d_squared_vanishes(&self) -> bool {
        self.differentials().iter().all(|dk| self.cedifferential(dk).is_zero())
    }

    fn bracket_span(&self, left: &[Vector], right: &[Vector]) -> Vec<Vector> {
        let mut products = Vec::new();
        for x in left {
            for y in right {
                let b = self.bracket(x, y);
                if !vector_is_zero(&b) {
                    products.push(b);
                }
            }
        }
        span_basis(&products, self.dim)
    }

    fn full_basis(&self) -> Vec<Vector> {
        (0..self.dim).map(|i| basis_vector(self.dim, i)).collect()
    }

    /// Lower central series `g, [g,g], [g,[g,g]], ...` down to stabilization.
    pub fn lower_central_series(&self) -> Vec<Vec<Vector>> {
        let mut series = vec![self.full_basis()];
        loop {
            let next = self.bracket_span(&self.full_basis(), series.last().unwrap());
            if next.len() == series.last().unwrap().len() {
                break;
            }
            let stop = next.is_empty();
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    pub fn derived_series(&self) -> Vec<Vec<Vector>> {
        let mut series = vec![self.full_basis()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(last, last);
            if next.len() == last.len() {
                break;
            }
            let stop = next.is_empty();
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    /// `Some(step)` when nilpotent: the number of nonzero terms of the lower
    /// central series.
    pub fn nilpotency_step(&self) -> Option<usize> {
        let series = self.lower_central_series();
        if series.last().unwrap().is_empty() {
            Some(series.len() - 1)
        } else {
            None
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_empty()
    }

    pub fn center(&self) -> Vec<Vector> {
        // x in center iff sum_i x_i c^k_{ij} = 0 for all (j,k).
        let m = Matrix::from_fn(self.dim * self.dim, self.dim, |row, i| {
            let (j, k) = (row / self.dim, row % self.dim);
            self.table[i][j][k].clone()
        });
        m.nullspace()
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.ad(&basis_vector(self.dim, i)).trace().is_zero())
    }

    pub fn killing_form(&self) -> Matrix {
        let ads: Vec<Matrix> = (0..self.dim).map(|i| self.ad(&basis_vector(self.dim, i))).collect();
        Matrix::from_fn(self.dim, self.dim, |i, j| (&ads[i] * &ads[j]).trace())
    }

    pub fn structural_report(&self) -> StructuralReport {
        let killing = self.killing_form();
        StructuralReport {
            nilpotent: self.nilpotency_step(),
            solvable: self.is_solvable(),
            center: self.center(),
            unimodular: self.is_unimodular(),
            killing_zero: killing.is_zero(),
            killing_form: killing,
        }
    }

    pub fn is_derivation(&self, d: &Matrix) -> bool {
        if d.rows() != self.dim || d.cols() != self.dim {
            return false;
        }
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let lhs = d.apply(&self.table[i][j]);
                let dei = d.column(i);
                let dej = d.column(j);
                let rhs = crate::exactnum::add_vectors(
                    &self.bracket(&dei, &basis_vector(self.dim, j)),
                    &self.bracket(&basis_vector(self.dim, i), &dej),
                );
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Linear system whose kernel is `Der(g)`, acting on row-major matrix
    /// entries. Exposed so constrained variants can stack extra conditions.
    pub fn derivation_system(&self) -> Matrix {
        let n = self.dim;
        let rows = n * n * (n - 1) / 2;
        let mut m = Matrix::zeros(rows.max(1), n * n);
        if n < 2 {
            return Matrix::zeros(1, n * n);
        }
        let mut row = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    // D([ei,ej])_k - [D ei, ej]_k - [ei, D ej]_k = 0
                    for mm in 0..n {
                        //   D[k][mm] * c^mm_{ij}
                        let c = self.table[i][j][mm].clone();
                        if !c.is_zero() {
                            m[(row, k * n + mm)] = &m[(row, k * n + mm)] + &c;
                        }
                        // - D[mm][i] * c^k_{mm,j}
                        let c = self.table[mm][j][k].clone();
                        if !c.is_zero() {
                            m[(row, mm * n + i)] = &m[(row, mm * n + i)] - &c;
                        }
                        // - D[mm][j] * c^k_{i,mm}
                        let c = self.table[i][mm][k].clone();
                        if !c.is_zero() {
                            m[(row, mm * n + j)] = &m[(row, mm * n + j)] - &c;
                        }
                    }
                    row += 1;
                }
            }
        }
        m
    }

    /// Basis of the derivation algebra.
    pub fn derivation_space(&self) -> Vec<Matrix> {
        let n = self.dim;
        self.derivation_system()
            .nullspace()
            .into_iter()
            .map(|flat| Matrix::from_fn(n, n, |r, c| flat[r * n + c].clone()))
            .collect()
    }

    pub fn in_center(&self, v: &[Scalar]) -> bool {
        self.ad(v).is_zero()
    }

    pub fn is_subalgebra(&self, basis: &[Vector]) -> bool {
        for x in basis {
            for y in basis {
                if !in_span(&self.bracket(x, y), basis, self.dim) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ideal(&self, basis: &[Vector]) -> bool {
        for j in 0..self.dim {
            let ej = basis_vector(self.dim, j);
            for y in basis {
                if !in_span(&self.bracket(&ej, y), basis, self.dim) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ad_nilpotent(&self, v: &[Scalar]) -> bool {
        let ad = self.ad(v);
        let mut power = ad.clone();
        for _ in 0..self.dim {
            if power.is_zero() {
                return true;
            }
            power = &power * &ad;
        }
        power.is_zero()
    }

    /// The algebra realized on a subspace `W` spanned by `basis`, with the
    /// bracket projected along `complement`; requires `W (+) complement = g`
    /// and the projected bracket to close on `W`.
    pub fn realized_on_basis(
        &self,
        basis: &[Vector],
        complement: &[Vector],
    ) -> Result<LieAlgebra, Error> {
        let k = basis.len();
        assert_eq!(k + complement.len(), self.dim);
        let mut cols: Vec<Vector> = basis.to_vec();
        cols.extend_from_slice(complement);
        let change = Matrix::from_columns(&cols, self.dim);
        let inv = change.inverse().ok_or(Error::Input(
            "subspace and complement do not span the ambient algebra".into(),
        ))?;
        let mut table = vec![vec![zero_vector(k); k]; k];
        for i in 0..k {
            for j in 0..k {
                let w = self.bracket(&basis[i], &basis[j]);
                let coords = inv.apply(&w);
                table[i][j] = coords[..k].to_vec();
            }
        }
        LieAlgebra::new(k, table)
    }
}


#[cfg(test)]
pub use tests::{heisenberg, step3};
