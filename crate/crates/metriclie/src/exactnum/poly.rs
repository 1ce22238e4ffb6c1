//! Univariate polynomials over the scalar tower, used for minimal/characteristic
//! polynomials, semisimplicity tests and rational eigenvalue extraction.

use super::matrix::{basis_vector, Matrix, Vector};
use super::scalar::Scalar;
use crate::error::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

/// Dense polynomial, coefficients from constant term up.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(vec![Scalar::zero()])
    }

    pub fn one() -> Self {
        Poly(vec![Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    fn leading(&self) -> &Scalar {
        self.0.last().unwrap()
    }

    pub fn monic(&self) -> Poly {
        let inv = self.leading().inv();
        Poly::new(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; the divisor's leading coefficient must be invertible.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dn = divisor.degree();
        if self.degree() < dn || self.is_zero() {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = divisor.leading().inv();
        let mut quot = vec![Scalar::zero(); self.degree() - dn + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dn] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.0.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * d);
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::zero();
        }
        Poly::new(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| &Scalar::from_int((i + 1) as i64) * c)
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &(&acc * m) + &Matrix::identity(n).scale(c);
        }
        acc
    }

    /// True when `gcd(p, p')` is constant.
    pub fn is_squarefree(&self) -> bool {
        if self.degree() == 0 {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }
}

/// Minimal polynomial via per-vector Krylov chains and lcm.
pub fn minimal_polynomial(m: &Matrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Poly::one();
    }
    let mut result = Poly::one();
    for j in 0..n {
        let mut krylov: Vec<Vector> = vec![basis_vector(n, j)];
        loop {
            let next = m.apply(krylov.last().unwrap());
            // Express `next` in terms of the chain so far, if possible.
            let mat = Matrix::from_columns(&krylov, n);
            if let Some((coeffs, _)) = mat.affine_solve(&next) {
                // A^k v = sum c_i A^i v  =>  p_j = x^k - sum c_i x^i.
                let mut p = vec![Scalar::zero(); krylov.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    p[i] = -c;
                }
                p[krylov.len()] = Scalar::one();
                let pj = Poly::new(p);
                let g = result.gcd(&pj);
                let (q, r) = pj.divmod(&g);
                debug_assert!(r.is_zero());
                result = result.mul(&q);
                break;
            }
            krylov.push(next);
        }
        if result.degree() == n {
            break;
        }
    }
    result.monic()
}

/// Characteristic polynomial of `m` by the Faddeev-LeVerrier recursion,
/// normalized to be monic.
pub fn characteristic_polynomial(m: &Matrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Poly::one();
    }
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut aux = Matrix::identity(n);
    for k in 1..=n {
        let prod = m * &aux;
        let c = &prod.trace() * &Scalar::rat(-1, k as i64);
        coeffs[n - k] = c.clone();
        aux = &prod + &Matrix::identity(n).scale(&c);
    }
    Poly::new(coeffs)
}

/// Whether the endomorphism is semisimple over the complex numbers, i.e. its
/// minimal polynomial is squarefree. Float input is rejected: squarefreeness
/// is not a float-stable property.
pub fn is_semisimple(m: &Matrix) -> Result<bool, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m[(r, c)].is_float() {
                return Err(Error::FloatModeUnsupported("is_semisimple"));
            }
        }
    }
    Ok(minimal_polynomial(m).is_squarefree())
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n > BigInt::from(1_000_000_000_000u64) {
        return None; // out of scope for trial division
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= n {
        if (&n % &k).is_zero() {
            small.push(k.clone());
            large.push(&n / &k);
        }
        k += 1;
    }
    large.reverse();
    small.extend(large);
    small.dedup();
    Some(small)
}

/// Eigenvalues with algebraic multiplicities, when the characteristic
/// polynomial has rational coefficients and splits over the rationals.
/// Returns `None` otherwise.
pub fn rational_eigenvalues(m: &Matrix) -> Option<Vec<(BigRational, usize)>> {
    let chi = characteristic_polynomial(m);
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(chi.coeffs().len());
    for c in chi.coeffs() {
        coeffs.push(c.as_rational()?.clone());
    }
    // Clear denominators to an integer polynomial.
    let mut den = BigInt::one();
    for c in &coeffs {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> =
        coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();

    let mut remaining = coeffs.clone();
    let mut roots: Vec<(BigRational, usize)> = Vec::new();

    // Strip roots at zero first.
    let mut zero_mult = 0;
    while remaining.len() > 1 && remaining[0].is_zero() {
        remaining.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((BigRational::zero(), zero_mult));
    }

    let lead = ints.last()?.clone();
    let tail = ints.iter().find(|c| !c.is_zero())?.clone();
    let ps = divisors(&tail)?;
    let qs = divisors(&lead)?;
    let mut candidates: Vec<BigRational> = Vec::new();
    for p in &ps {
        for q in &qs {
            let r = BigRational::new(p.clone(), q.clone());
            if !candidates.contains(&r) {
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
    }

    fn eval(poly: &[BigRational], x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in poly.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
    fn deflate(poly: &[BigRational], r: &BigRational) -> Vec<BigRational> {
        // Synthetic division by (x - r); assumes r is a root.
        let n = poly.len() - 1;
        let mut out = vec![BigRational::zero(); n];
        let mut carry = BigRational::zero();
        for k in (0..n).rev() {
            carry = &poly[k + 1] + r * &carry;
            out[k] = carry.clone();
        }
        out
    }

    for cand in candidates {
        let mut mult = 0;
        while remaining.len() > 1 && eval(&remaining, &cand).is_zero() {
            remaining = deflate(&remaining, &cand);
            mult += 1;
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
        if remaining.len() == 1 {
            break;
        }
    }
    if remaining.len() > 1 {
        return None; // does not split over the rationals
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some(roots)
}
