//! Shared helpers for the integration suites: seeded random scalars,
//! metrics, and constructively valid random Lie algebras.

#![allow(dead_code)]

use metriclie::curvature::MetricLieAlgebra;
use metriclie::exactnum::{zero_vector, Matrix, Scalar, Vector};
use metriclie::exterior::KForm;
use metriclie::liealg::LieAlgebra;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let n = rng.gen_range(-3i64..=3);
    let d = *[1i64, 1, 1, 2, 3].get(rng.gen_range(0..5)).unwrap();
    Scalar::rat(n, d)
}

pub fn nonzero_small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let entries: Vec<Vec<Scalar>> =
        (0..rows).map(|_| (0..cols).map(|_| small_scalar(rng)).collect()).collect();
    Matrix::from_rows(entries)
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

pub fn random_symmetric_nondegenerate(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = small_scalar(rng);
                g[(i, j)] = v.clone();
                g[(j, i)] = v;
            }
        }
        if g.rank() == n {
            return g;
        }
    }
}

/// Random antisymmetric structure constants (not necessarily Jacobi).
pub fn random_constants(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<Vector>> {
    let mut table = vec![vec![zero_vector(dim); dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            for k in 0..dim {
                if rng.gen_bool(0.3) {
                    let c = small_scalar(rng);
                    table[i][j][k] = c.clone();
                    table[j][i][k] = -c;
                }
            }
        }
    }
    table
}

/// Constructively valid random algebras: central extensions of abelian
/// algebras (2-step nilpotent) optionally extended by a random derivation.
pub fn random_valid_algebra(rng: &mut ChaCha8Rng) -> LieAlgebra {
    let base_dim = rng.gen_range(2..=4usize);
    let centrals = rng.gen_range(1..=2usize);
    let dim = base_dim + centrals;
    let mut diffs = vec![KForm::zero(dim, 2); dim];
    for s in 0..centrals {
        let mut sigma = KForm::zero(dim, 2);
        for i in 0..base_dim {
            for j in (i + 1)..base_dim {
                if rng.gen_bool(0.5) {
                    sigma.add_term(&[i, j], &small_scalar(rng));
                }
            }
        }
        diffs[base_dim + s] = sigma;
    }
    let nil = LieAlgebra::from_differentials(&diffs).expect("central extensions satisfy Jacobi");
    if !rng.gen_bool(0.5) {
        return nil;
    }
    // extend by a random derivation
    let ders = nil.derivation_space();
    let mut d = Matrix::zeros(dim, dim);
    for psi in ders.iter() {
        if rng.gen_bool(0.4) {
            d = &d + &psi.scale(&small_scalar(rng));
        }
    }
    let g = Matrix::identity(dim);
    let base = MetricLieAlgebra::new(nil, g).unwrap();
    let (ext, _) = metriclie::extensions::standard_extension(&base, &d, 1).unwrap();
    ext.algebra().clone()
}

/// Random nilpotent metric Lie algebra (2-step) with a nondegenerate metric.
pub fn random_nilpotent_metric(rng: &mut ChaCha8Rng) -> MetricLieAlgebra {
    loop {
        let base_dim = rng.gen_range(2..=4usize);
        let centrals = rng.gen_range(1..=2usize);
        let dim = base_dim + centrals;
        let mut diffs = vec![KForm::zero(dim, 2); dim];
        for s in 0..centrals {
            let mut sigma = KForm::zero(dim, 2);
            for i in 0..base_dim {
                for j in (i + 1)..base_dim {
                    if rng.gen_bool(0.5) {
                        sigma.add_term(&[i, j], &small_scalar(rng));
                    }
                }
            }
            diffs[base_dim + s] = sigma;
        }
        let alg = LieAlgebra::from_differentials(&diffs).unwrap();
        let g = random_symmetric_nondegenerate(rng, dim);
        if let Ok(mla) = MetricLieAlgebra::new(alg, g) {
            return mla;
        }
    }
}

/// A random derivation of the algebra, as a combination of the basis of the
/// derivation space.
pub fn random_derivation(rng: &mut ChaCha8Rng, alg: &LieAlgebra) -> Matrix {
    let ders = alg.derivation_space();
    let mut d = Matrix::zeros(alg.dim(), alg.dim());
    for psi in ders.iter() {
        if rng.gen_bool(0.3) {
            d = &d + &psi.scale(&small_scalar(rng));
        }
    }
    d
}
