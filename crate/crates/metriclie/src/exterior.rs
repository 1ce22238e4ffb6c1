//! Multilinear algebra on a metric vector space: k-forms over the strictly
//! increasing index basis, wedge, contraction, musical isomorphisms and the
//! induced inner products.

use crate::exactnum::{Matrix, Scalar, Vector};
use crate::error::Error;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lexicographic rank of a strictly increasing k-subset of `0..n`.
fn rank(indices: &[usize], n: usize) -> usize {
    let k = indices.len();
    let mut r = 0;
    let mut prev: isize = -1;
    for (pos, &idx) in indices.iter().enumerate() {
        for j in (prev + 1) as usize..idx {
            r += binomial(n - 1 - j, k - 1 - pos);
        }
        prev = idx as isize;
    }
    r
}

/// Inverse of [`rank`].
fn unrank(mut r: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for pos in 0..k {
        for j in next..n {
            let c = binomial(n - 1 - j, k - 1 - pos);
            if r < c {
                out.push(j);
                next = j + 1;
                break;
            }
            r -= c;
        }
    }
    out
}

/// Sorts a multi-index, returning the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i8)> {
    let mut v = indices.to_vec();
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// An alternating k-form, stored densely on sorted multi-indices (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm { dim, degree, coeffs: vec![Scalar::zero(); binomial(dim, degree)] }
    }

    /// The basis monomial `e^{i_1...i_k}` for a strictly increasing index set.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut f = KForm::zero(dim, indices.len());
        f.coeffs[rank(indices, dim)] = Scalar::one();
        f
    }

    pub fn one_form(coeffs: Vector) -> Self {
        KForm { dim: coeffs.len(), degree: 1, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Coefficient on a sorted multi-index.
    pub fn coeff(&self, indices: &[usize]) -> &Scalar {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        &self.coeffs[rank(indices, self.dim)]
    }

    /// Adds `c` on a possibly unsorted multi-index, with the sorting sign.
    pub fn add_term(&mut self, indices: &[usize], c: &Scalar) {
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            let r = rank(&sorted, self.dim);
            let signed = if sign < 0 { -c } else { c.clone() };
            self.coeffs[r] = &self.coeffs[r] + &signed;
        }
    }

    /// Iterates (sorted multi-index, coefficient) over nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(r, c)| (unrank(r, self.dim, self.degree), c))
    }

    pub fn scale(&self, c: &Scalar) -> KForm {
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &KForm) -> KForm {
        assert!(self.dim == other.dim && self.degree == other.degree);
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Wedge product; degrees exceeding the ambient dimension give the zero
    /// form.
    pub fn wedge(&self, other: &KForm) -> KForm {
        assert_eq!(self.dim, other.dim, "ambient dimension mismatch");
        let deg = self.degree + other.degree;
        if deg > self.dim {
            // binomial(dim, deg) = 0: structurally the zero form
            return KForm::zero(self.dim, deg);
        }
        let mut out = KForm::zero(self.dim, deg);
        for (i_idx, a) in self.terms() {
            for (j_idx, b) in other.terms() {
                let mut merged = i_idx.clone();
                merged.extend_from_slice(&j_idx);
                out.add_term(&merged, &(a * b));
            }
        }
        out
    }

    /// Interior product `v  |_  self`.
    pub fn contract(&self, v: &[Scalar]) -> KForm {
        assert_eq!(v.len(), self.dim, "ambient dimension mismatch");
        if self.degree == 0 {
            return KForm::zero(self.dim, 0);
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (idx, c) in self.terms() {
            for (t, &i) in idx.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let mut rest: Vec<usize> = idx.clone();
                rest.remove(t);
                let sign = if t % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
                let r = rank(&rest, self.dim);
                out.coeffs[r] = &out.coeffs[r] + &(&(&sign * &v[i]) * c);
            }
        }
        out
    }

    /// Evaluates the form on `k` vectors.
    pub fn eval(&self, vectors: &[&[Scalar]]) -> Scalar {
        assert_eq!(vectors.len(), self.degree);
        let mut acc = Scalar::zero();
        for (idx, c) in self.terms() {
            let m = Matrix::from_fn(self.degree, self.degree, |a, b| vectors[b][idx[a]].clone());
            acc = &acc + &(c * &m.determinant());
        }
        acc
    }

    /// 2-form as the antisymmetric matrix `[sigma(e_i, e_j)]`.
    pub fn to_antisym_matrix(&self) -> Matrix {
        assert_eq!(self.degree, 2);
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (idx, c) in self.terms() {
            m[(idx[0], idx[1])] = c.clone();
            m[(idx[1], idx[0])] = -c;
        }
        m
    }

    /// 2-form from an antisymmetric matrix.
    pub fn from_antisym_matrix(m: &Matrix) -> KForm {
        assert!(m.is_square());
        let n = m.rows();
        let mut f = KForm::zero(n, 2);
        for i in 0..n {
            for j in (i + 1)..n {
                f.add_term(&[i, j], &m[(i, j)]);
            }
        }
        f
    }

    /// Natural action of an endomorphism on a form as a (negated) derivation:
    /// `(A.f)(x_1,...,x_k) = -sum_i f(x_1,...,A x_i,...,x_k)`.
    pub fn endo_action(&self, a: &Matrix) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree);
        for (idx, c) in self.terms() {
            for (t, &i) in idx.iter().enumerate() {
                // A . e^i = -sum_j A[i,j] e^j, extended as a derivation.
                for j in 0..self.dim {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    let mut replaced = idx.clone();
                    replaced[t] = j;
                    out.add_term(&replaced, &-&(&a[(i, j)] * c));
                }
            }
        }
        out
    }
}

/// Musical flat: the 1-form `g(v, .)`.
pub fn flat(g: &Matrix, v: &[Scalar]) -> KForm {
    KForm::one_form(g.apply(v))
}

/// Musical sharp on 1-forms: the unique `v` with `g(v, .) = alpha`.
pub fn sharp(g_inv: &Matrix, alpha: &KForm) -> Vector {
    assert_eq!(alpha.degree(), 1);
    g_inv.apply(&alpha.coeffs)
}

/// Induced inner product of two k-forms: `<e^I, e^J> = det(g^{i_a j_b})`.
pub fn form_inner(g_inv: &Matrix, a: &KForm, b: &KForm) -> Result<Scalar, Error> {
    if a.degree() != b.degree() || a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.degree(), got: b.degree() });
    }
    let k = a.degree();
    let mut acc = Scalar::zero();
    for (i_idx, ca) in a.terms() {
        for (j_idx, cb) in b.terms() {
            let m = Matrix::from_fn(k, k, |r, c| g_inv[(i_idx[r], j_idx[c])].clone());
            acc = &acc + &(&(ca * cb) * &m.determinant());
        }
    }
    Ok(acc)
}

/// The endomorphism `S` with `sigma(x, y) = g(x, S y)`.
pub fn two_form_to_endo(g_inv: &Matrix, sigma: &KForm) -> Matrix {
    g_inv * &sigma.to_antisym_matrix()
}

/// The 2-form `omega(x, y) = g(x, J y)` of an endomorphism `J` (only
/// meaningful when `G J` is antisymmetric, i.e. `J` is g-skew).
pub fn two_form_from_endo(g: &Matrix, j: &Matrix) -> KForm {
    KForm::from_antisym_matrix(&(g * j))
}
