//! Central and standard extensions, the generalized nilsoliton check, and the
//! Sasaki-Einstein / Kahler-Einstein builders with their reductions.

use crate::curvature::MetricLieAlgebra;
use crate::error::Error;
use crate::exactnum::{basis_vector, zero_vector, Matrix, Scalar, Vector};
use crate::exterior::KForm;
use crate::liealg::LieAlgebra;
use crate::nikolayevsky::{
    constrained_derivations, nikolayevsky_derivation, HKind, NikOutcome,
};
use crate::structures::{
    check_pseudo_kahler, check_sasaki, check_standard_decomposition, check_z_standard,
    AlmostContactMetric, PseudoKahler, StandardDecomposition,
};

/// One central direction: a label, the metric sign `eps = +-1`, and the
/// closed cocycle `de^s = sigma`.
#[derive(Debug, Clone)]
pub struct CentralCocycle {
    pub label: String,
    pub epsilon: i8,
    pub sigma: KForm,
}

#[derive(Debug, Clone, Default)]
pub struct CentralExtensionSpec {
    pub cocycles: Vec<CentralCocycle>,
}

fn embed(v: &[Scalar], total: usize) -> Vector {
    let mut out = zero_vector(total);
    out[..v.len()].clone_from_slice(v);
    out
}

/// Central extension `0 -> R^k -> g -> g< -> 0` with
/// `[v,w] = [v,w]_base - sum_s sigma_s(v,w) e_s` and metric
/// `g< + sum_s eps_s e^s (x) e^s`. The base is typically nilpotent (the
/// curvature lemmas assume it) but this is not enforced here.
pub fn central_extension(
    base: &MetricLieAlgebra,
    spec: &CentralExtensionSpec,
) -> Result<MetricLieAlgebra, Error> {
    let n = base.dim();
    let k = spec.cocycles.len();
    let total = n + k;
    for c in &spec.cocycles {
        if c.sigma.dim() != n || c.sigma.degree() != 2 {
            return Err(Error::Input(format!("cocycle `{}` has wrong shape", c.label)));
        }
        if !base.algebra().cedifferential(&c.sigma).is_zero() {
            return Err(Error::NonClosedCocycle(c.label.clone()));
        }
    }
    let mut table = vec![vec![zero_vector(total); total]; total];
    for i in 0..n {
        for j in 0..n {
            let mut w = embed(base.algebra().basis_bracket(i, j), total);
            if i != j {
                let (ei, ej) = (basis_vector(n, i), basis_vector(n, j));
                for (s, c) in spec.cocycles.iter().enumerate() {
                    let val = c.sigma.eval(&[&ei, &ej]);
                    w[n + s] = &w[n + s] - &val;
                }
            }
            table[i][j] = w;
        }
    }
    let mut alg = LieAlgebra::new(total, table)?;
    let mut labels = base.algebra().labels().to_vec();
    labels.extend(spec.cocycles.iter().map(|c| c.label.clone()));
    alg.set_labels(labels);

    let mut metric = Matrix::zeros(total, total);
    for i in 0..n {
        for j in 0..n {
            metric[(i, j)] = base.metric()[(i, j)].clone();
        }
    }
    for (s, c) in spec.cocycles.iter().enumerate() {
        metric[(n + s, n + s)] = Scalar::from_int(c.epsilon as i64);
    }
    MetricLieAlgebra::new(alg, metric)
}

/// Standard extension `g x|_D <e0>` with metric `g + tau e^0 (x) e^0`;
/// `e0` is appended as the last basis vector.
pub fn standard_extension(
    base: &MetricLieAlgebra,
    d: &Matrix,
    tau: i8,
) -> Result<(MetricLieAlgebra, StandardDecomposition), Error> {
    if !base.algebra().is_derivation(d) {
        return Err(Error::NotADerivation);
    }
    let n = base.dim();
    let total = n + 1;
    let mut table = vec![vec![zero_vector(total); total]; total];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = embed(base.algebra().basis_bracket(i, j), total);
        }
    }
    for i in 0..n {
        let dv = embed(&d.column(i), total);
        table[n][i] = dv.clone();
        table[i][n] = crate::exactnum::scale_vector(&Scalar::from_int(-1), &dv);
    }
    let mut alg = LieAlgebra::new(total, table)?;
    let mut labels = base.algebra().labels().to_vec();
    labels.push("e0".into());
    alg.set_labels(labels);

    let mut metric = Matrix::zeros(total, total);
    for i in 0..n {
        for j in 0..n {
            metric[(i, j)] = base.metric()[(i, j)].clone();
        }
    }
    metric[(n, n)] = Scalar::from_int(tau as i64);
    let mla = MetricLieAlgebra::new(alg, metric)?;
    let ideal: Vec<Vector> = (0..n).map(|i| basis_vector(total, i)).collect();
    let dec = check_standard_decomposition(&mla, &ideal, &basis_vector(total, n))?;
    Ok((mla, dec))
}

/// Verdict of the generalized nilsoliton evaluation for `(g, D, tau)`.
#[derive(Debug, Clone)]
pub struct NilsolitonReport {
    /// The operator identity
    /// `Ric = tau(-Tr((D^s)^2) id - 1/2 [D, D*] + (Tr D) D^s)`.
    pub equation_holds: bool,
    /// `Tr(ad v . D*) = 0` for every basis vector.
    pub trace_condition_holds: bool,
    /// `-Tr D` is not an eigenvalue of `D`, which makes the trace condition
    /// redundant.
    pub minus_trace_not_eigenvalue: bool,
    /// The standard extension is Einstein.
    pub einstein: bool,
    /// `-tau Tr((D^s)^2)`, the Einstein constant when the check passes.
    pub lambda: Scalar,
}

/// Evaluates the generalized nilsoliton identity, the companion trace
/// condition, and the eigenvalue shortcut.
pub fn check_generalized_nilsoliton(
    base: &MetricLieAlgebra,
    d: &Matrix,
    tau: i8,
) -> Result<NilsolitonReport, Error> {
    if base.algebra().nilpotency_step().is_none() {
        return Err(Error::ConditionViolated("nilsoliton check needs a nilpotent base".into()));
    }
    if !base.algebra().is_derivation(d) {
        return Err(Error::NotADerivation);
    }
    let n = base.dim();
    let tau_s = Scalar::from_int(tau as i64);
    let d_star = base.adjoint(d);
    let d_sym = base.symmetric_part(d);
    let tr_ds2 = (&d_sym * &d_sym).trace();

    let mut rhs = Matrix::identity(n).scale(&-&tr_ds2);
    rhs = &rhs - &d.commutator(&d_star).scale(&Scalar::rat(1, 2));
    rhs = &rhs + &d_sym.scale(&d.trace());
    rhs = rhs.scale(&tau_s);
    let equation_holds = base.ricci().operator == rhs;

    let trace_condition_holds = (0..n).all(|i| {
        (&base.algebra().ad(&basis_vector(n, i)) * &d_star).trace().is_zero()
    });

    let shifted = d + &Matrix::identity(n).scale(&d.trace());
    let minus_trace_not_eigenvalue = shifted.rank() == n;

    Ok(NilsolitonReport {
        equation_holds,
        trace_condition_holds,
        minus_trace_not_eigenvalue,
        einstein: equation_holds && trace_condition_holds,
        lambda: -&(&tau_s * &tr_ds2),
    })
}

/// Input data for the z-standard Sasaki construction: a pseudo-Kahler
/// reduction, a compatible derivation, the transversal sign `tau` and the
/// constant `h` from the bracket `[e0, b] = h b - 2 tau xi`.
#[derive(Debug, Clone)]
pub struct ZStandardData {
    pub reduction: PseudoKahler,
    pub d_check: Matrix,
    pub tau: i8,
    pub h: Scalar,
}

/// Verifies the construction prerequisites, naming the violated condition.
pub fn validate_z_standard_data(data: &ZStandardData) -> Result<(), Error> {
    let pk = check_pseudo_kahler(&data.reduction);
    if !pk.ok {
        return Err(Error::NotPseudoKahler(pk.failure_summary()));
    }
    let red = &data.reduction.mla;
    if !red.algebra().is_derivation(&data.d_check) {
        return Err(Error::ConditionViolated("D_check is not a derivation".into()));
    }
    if red.algebra().nilpotency_step().is_none() {
        return Err(Error::ConditionViolated("reduction is not nilpotent".into()));
    }
    if !data.d_check.commutator(&data.reduction.j).is_zero() {
        return Err(Error::ConditionViolated("[J, D_check] != 0".into()));
    }
    let ds = red.symmetric_part(&data.d_check);
    let da = red.antisymmetric_part(&data.d_check);
    let lhs = ds.commutator(&da);
    let rhs = &ds.scale(&data.h) - &(&ds * &ds).scale(&Scalar::from_int(2));
    if lhs != rhs {
        return Err(Error::ConditionViolated(
            "[D^s, D^a] != h D^s - 2 (D^s)^2".into(),
        ));
    }
    // d(2 omega) = 0 holds by the pseudo-Kahler check; D.omega is closed
    // because the endomorphism action of a derivation commutes with d.
    let domega = red.algebra().cedifferential(&data.reduction.omega.endo_action(&data.d_check));
    if !domega.is_zero() {
        return Err(Error::NonClosedCocycle("D_check . omega".into()));
    }
    Ok(())
}

/// Builds the z-standard Sasaki algebra determined by the data: the central
/// extension of the reduction by `(b, xi)` with `d xi^b = 2 omega`,
/// `d b^b = D_check . omega`, followed by the standard extension by `e0`
/// acting as `D_check` on the reduction and `[e0, b] = h b - 2 tau xi`.
/// The output basis order is `(reduction..., b, xi, e0)`.
pub fn build_z_standard_sasaki(
    data: &ZStandardData,
) -> Result<(AlmostContactMetric, StandardDecomposition), Error> {
    validate_z_standard_data(data)?;
    let red = &data.reduction.mla;
    let n2 = red.dim();
    let tau_s = Scalar::from_int(data.tau as i64);

    // d b^flat = D.omega and b^flat = tau b^*, so d b^* = tau (D.omega).
    let sigma_b = data.reduction.omega.endo_action(&data.d_check).scale(&tau_s);
    let sigma_xi = data.reduction.omega.scale(&Scalar::from_int(2));
    let spec = CentralExtensionSpec {
        cocycles: vec![
            CentralCocycle { label: "b".into(), epsilon: data.tau, sigma: sigma_b },
            CentralCocycle { label: "xi".into(), epsilon: 1, sigma: sigma_xi },
        ],
    };
    let central = central_extension(red, &spec)?;

    // ad(e0) on the central extension.
    let m = n2 + 2;
    let mut d_ext = Matrix::zeros(m, m);
    for r in 0..n2 {
        for c in 0..n2 {
            d_ext[(r, c)] = data.d_check[(r, c)].clone();
        }
    }
    d_ext[(n2, n2)] = data.h.clone(); // [e0, b] = h b - 2 tau xi
    d_ext[(n2 + 1, n2)] = &Scalar::from_int(-2) * &tau_s;
    if !central.algebra().is_derivation(&d_ext) {
        return Err(Error::ConditionViolated(
            "extension data does not define a derivation of the central extension".into(),
        ));
    }
    let (total, dec) = standard_extension(&central, &d_ext, data.tau)?;

    // phi = J on the reduction, phi(b) = e0, phi(xi) = 0, phi(e0) = -b.
    let dim = m + 1;
    let mut phi = Matrix::zeros(dim, dim);
    for r in 0..n2 {
        for c in 0..n2 {
            phi[(r, c)] = data.reduction.j[(r, c)].clone();
        }
    }
    phi[(m, n2)] = Scalar::one();
    phi[(n2, m)] = Scalar::from_int(-1);
    let xi = basis_vector(dim, n2 + 1);
    let eta = KForm::basis(dim, &[n2 + 1]);
    let acm = AlmostContactMetric::new(total, phi, xi, eta)?;
    let sas = check_sasaki(&acm);
    if !sas.ok {
        return Err(Error::NotSasaki(sas.failure_summary()));
    }
    let z = check_z_standard(&acm, &dec);
    if !z.ok {
        return Err(Error::NotZStandard(z.failure_summary()));
    }
    Ok((acm, dec))
}

fn require_symmetric_part_identity(
    reduction: &PseudoKahler,
    d_check: &Matrix,
) -> Result<(), Error> {
    if reduction.mla.symmetric_part(d_check) != Matrix::identity(reduction.mla.dim()) {
        // symmetric_part_identity_family enumerates the admissible choices
        return Err(Error::NoSymmetricPartIdentity);
    }
    Ok(())
}

/// Sasaki-Einstein extension of a pseudo-Kahler nilpotent reduction by a
/// derivation with symmetric part the identity: specializes the z-standard
/// construction with `tau = -1`, `h = 2`, so `d xi^* = d b^* = 2 omega` and
/// `[e0, b] = 2b + 2 xi`. The output is verified Sasaki and Einstein.
pub fn build_sasaki_einstein(
    reduction: &PseudoKahler,
    d_check: &Matrix,
) -> Result<(AlmostContactMetric, StandardDecomposition), Error> {
    require_symmetric_part_identity(reduction, d_check)?;
    let data = ZStandardData {
        reduction: reduction.clone(),
        d_check: d_check.clone(),
        tau: -1,
        h: Scalar::from_int(2),
    };
    let (acm, dec) = build_z_standard_sasaki(&data)?;
    let ric = acm.mla.ricci();
    if ric.einstein_constant.is_none() {
        return Err(Error::ConditionViolated(
            "constructed Sasaki extension is unexpectedly not Einstein".into(),
        ));
    }
    Ok((acm, dec))
}

/// Kahler-Einstein extension: central extension by `b` alone with
/// `d b^* = 2 omega` and `eps = -1`, then the standard extension by
/// `D_check + 2 tau b^b (x) b` with `tau = -1` (so `[e0, b] = 2b`).
/// Output basis order `(reduction..., b, e0)`; the Einstein constant is
/// `dim + 2`.
pub fn build_kahler_einstein(
    reduction: &PseudoKahler,
    d_check: &Matrix,
) -> Result<(PseudoKahler, StandardDecomposition), Error> {
    require_symmetric_part_identity(reduction, d_check)?;
    let red = &reduction.mla;
    if red.algebra().nilpotency_step().is_none() {
        return Err(Error::ConditionViolated("reduction is not nilpotent".into()));
    }
    if !d_check.commutator(&reduction.j).is_zero() {
        return Err(Error::ConditionViolated("[J, D_check] != 0".into()));
    }
    let n2 = red.dim();
    let spec = CentralExtensionSpec {
        cocycles: vec![CentralCocycle {
            label: "b".into(),
            epsilon: -1,
            sigma: reduction.omega.scale(&Scalar::from_int(2)),
        }],
    };
    let central = central_extension(red, &spec)?;
    let m = n2 + 1;
    let mut d_ext = Matrix::zeros(m, m);
    for r in 0..n2 {
        for c in 0..n2 {
            d_ext[(r, c)] = d_check[(r, c)].clone();
        }
    }
    d_ext[(n2, n2)] = Scalar::from_int(2);
    let (total, dec) = standard_extension(&central, &d_ext, -1)?;

    let dim = m + 1;
    let mut j_ext = Matrix::zeros(dim, dim);
    for r in 0..n2 {
        for c in 0..n2 {
            j_ext[(r, c)] = reduction.j[(r, c)].clone();
        }
    }
    j_ext[(m, n2)] = Scalar::one(); // J(b) = -g(b,b) e0 = e0
    j_ext[(n2, m)] = Scalar::from_int(-1); // J(e0) = -b
    let omega = total.two_form_from_endo(&j_ext);
    let pk = PseudoKahler::new(total, j_ext, omega)?;
    let expected = Scalar::from_int(dim as i64 + 2);
    if pk.mla.is_einstein() != Some(expected) {
        return Err(Error::ConditionViolated(
            "constructed Kahler extension is unexpectedly not Einstein".into(),
        ));
    }
    Ok((pk, dec))
}

/// Result of the Kahler reduction of a z-standard Sasaki algebra: the data
/// that rebuilds it together with the distinguished ambient vectors.
#[derive(Debug, Clone)]
pub struct KahlerReductionResult {
    pub data: ZStandardData,
    pub b: Vector,
    pub xi: Vector,
    pub e0: Vector,
    /// Basis of the reduction inside the ambient algebra.
    pub reduction_basis: Vec<Vector>,
}

/// Extracts `(g<, J, omega, D_check, tau, h)` from a z-standard Sasaki
/// algebra, realizing the reduction on the orthogonal complement of
/// `span{b, xi}` inside the ideal. Inverse to [`build_z_standard_sasaki`] on
/// canonical bases.
pub fn kahler_reduction(
    s: &AlmostContactMetric,
    dec: &StandardDecomposition,
) -> Result<KahlerReductionResult, Error> {
    let z = check_z_standard(s, dec);
    if !z.ok {
        return Err(Error::NotZStandard(z.failure_summary()));
    }
    let n = s.mla.dim();
    let alg = s.mla.algebra();
    let b: Vector = s.phi.apply(&dec.e0).iter().map(|c| -c).collect();
    let xi = s.xi.clone();
    let tau_s = Scalar::from_int(dec.tau as i64);
    if s.mla.inner(&b, &b) != tau_s {
        return Err(Error::NotZStandard("g(b,b) != tau".into()));
    }
    if !s.mla.inner(&b, &xi).is_zero() {
        return Err(Error::NotZStandard("b is not orthogonal to xi".into()));
    }
    if !crate::exactnum::vector_is_zero(&alg.bracket(&dec.e0, &xi)) {
        return Err(Error::NotZStandard("[e0, xi] != 0".into()));
    }
    // [e0, b] = h b - 2 tau xi fixes h.
    let w = alg.bracket(&dec.e0, &b);
    let h = &s.mla.inner(&w, &b) * &tau_s.inv();
    let expected: Vector = (0..n)
        .map(|i| &(&h * &b[i]) - &(&(&Scalar::from_int(2) * &tau_s) * &xi[i]))
        .collect();
    if w != expected {
        return Err(Error::NotZStandard("[e0, b] is not of the form h b - 2 tau xi".into()));
    }

    // Reduction subspace: orthogonal to b, xi and e0.
    let rows = vec![
        s.mla.metric().apply(&b),
        s.mla.metric().apply(&xi),
        s.mla.metric().apply(&dec.e0),
    ];
    let basis = Matrix::from_rows(rows).nullspace();
    if basis.len() + 3 != n {
        return Err(Error::DegenerateMetric);
    }
    let k = basis.len();
    let mut complement = basis.clone();
    complement.push(b.clone());
    complement.push(xi.clone());
    complement.push(dec.e0.clone());
    let change = Matrix::from_columns(&complement, n);
    let inv = change.inverse().ok_or(Error::DegenerateMetric)?;

    let red_alg = alg.realized_on_basis(&basis, &complement[k..])?;
    let red_metric = Matrix::from_fn(k, k, |i, j| s.mla.inner(&basis[i], &basis[j]));
    let red_mla = MetricLieAlgebra::new(red_alg, red_metric)?;

    // J = phi restricted, D_check = projected ad(e0), both in the reduction basis.
    let project = |image: Vector| -> Vector { inv.apply(&image)[..k].to_vec() };
    let j_cols: Vec<Vector> = basis.iter().map(|v| project(s.phi.apply(v))).collect();
    let j = Matrix::from_columns(&j_cols, k);
    let d_cols: Vec<Vector> = basis.iter().map(|v| project(alg.bracket(&dec.e0, v))).collect();
    let d_check = Matrix::from_columns(&d_cols, k);

    let omega = red_mla.two_form_from_endo(&j);
    let reduction = PseudoKahler::new(red_mla, j, omega)?;
    let data = ZStandardData { reduction, d_check, tau: dec.tau, h };
    validate_z_standard_data(&data)?;
    Ok(KahlerReductionResult { data, b, xi, e0: dec.e0.clone(), reduction_basis: basis })
}

/// Einstein standard extension through the canonical conformal derivation:
/// computes the co-constrained derivation `N`; when `N = 0` there is no such
/// extension; otherwise the base must be Ricci-flat and the rescaled `N`
/// (symmetric part the identity) yields an Einstein extension with `tau = 1`.
pub fn einstein_extension_with_nik(
    base: &MetricLieAlgebra,
) -> Result<Option<(MetricLieAlgebra, StandardDecomposition)>, Error> {
    if base.algebra().nilpotency_step().is_none() {
        return Err(Error::ConditionViolated("base must be nilpotent".into()));
    }
    let space = constrained_derivations(base, HKind::Co, None)?;
    let outcome = nikolayevsky_derivation(base, &space)?;
    let nik = match outcome {
        NikOutcome::Derivation(res) => res,
        NikOutcome::UnresolvedFamily { .. } => {
            return Err(Error::ConditionViolated(
                "no semisimple representative found in the trace-normalized family".into(),
            ))
        }
    };
    if nik.n.is_zero() {
        return Ok(None);
    }
    let n = base.dim();
    let sym = base.symmetric_part(&nik.n);
    let c = sym[(0, 0)].clone();
    if c.is_zero() || sym != Matrix::identity(n).scale(&c) {
        return Err(Error::ConditionViolated(
            "canonical conformal derivation has no usable symmetric part".into(),
        ));
    }
    if !base.is_ricci_flat() {
        // contradicts the rescaling argument; flags bad input or conventions
        return Err(Error::ConditionViolated(
            "nonzero canonical conformal derivation forces Ricci-flatness, but the base is not Ricci-flat".into(),
        ));
    }
    let d = nik.n.scale(&c.inv());
    let (mla, dec) = standard_extension(base, &d, 1)?;
    Ok(Some((mla, dec)))
}


#[cfg(test)]
pub use tests::abelian_reduction;
