//! Recognition and verification of geometric structures: almost contact
//! metric, Sasaki and pseudo-Kahler structures, standard and z-standard
//! decompositions, and the Kahler quotient.

use crate::curvature::MetricLieAlgebra;
use crate::error::Error;
use crate::exactnum::{
    add_vectors, basis_vector, in_span, scale_vector, vector_is_zero, Matrix, Scalar, Vector,
};
use crate::exterior::KForm;
use crate::liealg::LieAlgebra;

/// One named identity check with an optional failure detail.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
    pub detail: Option<String>,
}

/// Outcome of a structure verification, with a per-condition breakdown.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub ok: bool,
    pub checks: Vec<CheckItem>,
}

impl Verdict {
    pub fn new() -> Self {
        Verdict { ok: true, checks: Vec::new() }
    }

    pub fn push(&mut self, name: &str, ok: bool, detail: Option<String>) {
        self.ok &= ok;
        self.checks.push(CheckItem { name: name.to_string(), ok, detail });
    }

    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.checks.iter().find(|c| !c.ok)
    }

    pub fn failure_summary(&self) -> String {
        match self.first_failure() {
            Some(item) => match &item.detail {
                Some(d) => format!("{} ({d})", item.name),
                None => item.name.clone(),
            },
            None => "ok".into(),
        }
    }
}

impl Default for Verdict {
    fn default() -> Self {
        Self::new()
    }
}

/// Almost contact metric structure `(phi, xi, eta, g)` on an odd-dimensional
/// metric Lie algebra; `Phi(X, Y) = g(X, phi Y)` is derived.
#[derive(Debug, Clone)]
pub struct AlmostContactMetric {
    pub mla: MetricLieAlgebra,
    pub phi: Matrix,
    pub xi: Vector,
    pub eta: KForm,
}

impl AlmostContactMetric {
    /// Builds and validates the almost contact metric identities.
    pub fn new(mla: MetricLieAlgebra, phi: Matrix, xi: Vector, eta: KForm) -> Result<Self, Error> {
        let acm = AlmostContactMetric { mla, phi, xi, eta };
        let v = acm.validate();
        if !v.ok {
            return Err(Error::ConditionViolated(format!(
                "almost contact metric identity fails: {}",
                v.failure_summary()
            )));
        }
        Ok(acm)
    }

    /// The fundamental 2-form `Phi(X,Y) = g(X, phi Y)`.
    pub fn phi_form(&self) -> KForm {
        self.mla.two_form_from_endo(&self.phi)
    }

    /// Per-identity verification of the almost contact metric conditions.
    pub fn validate(&self) -> Verdict {
        let mut v = Verdict::new();
        let n = self.mla.dim();
        v.push("odd_dimension", n % 2 == 1, Some(format!("dim = {n}")));
        let eta_xi = self.eta.eval(&[&self.xi]);
        v.push("eta(xi) = 1", eta_xi.is_one(), Some(format!("eta(xi) = {eta_xi}")));
        // eta o phi = 0
        let mut ok = true;
        for j in 0..n {
            if !self.eta.eval(&[&self.phi.column(j)]).is_zero() {
                ok = false;
                break;
            }
        }
        v.push("eta o phi = 0", ok, None);
        // phi^2 = -id + eta (x) xi
        let phi2 = &self.phi * &self.phi;
        let mut expected = -&Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let term = &self.xi[i] * self.eta.coeff(&[j]);
                expected[(i, j)] = &expected[(i, j)] + &term;
            }
        }
        v.push("phi^2 = -id + eta(x)xi", phi2 == expected, None);
        let gxx = self.mla.inner(&self.xi, &self.xi);
        v.push("g(xi,xi) = 1", gxx.is_one(), Some(format!("g(xi,xi) = {gxx}")));
        v.push("eta = xi flat", self.mla.flat(&self.xi) == self.eta, None);
        // g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)
        let lhs = &(&self.phi.transpose() * self.mla.metric()) * &self.phi;
        let mut rhs = self.mla.metric().clone();
        for i in 0..n {
            for j in 0..n {
                let term = self.eta.coeff(&[i]) * self.eta.coeff(&[j]);
                rhs[(i, j)] = &rhs[(i, j)] - &term;
            }
        }
        v.push("g(phi.,phi.) = g - eta(x)eta", lhs == rhs, None);
        // phi is g-skew, so Phi is a genuine 2-form
        let gphi = self.mla.metric() * &self.phi;
        v.push("Phi antisymmetric", (&gphi + &gphi.transpose()).is_zero(), None);
        v
    }
}

/// Pseudo-Kahler structure `(g, J, omega)` with `omega(X,Y) = g(X, JY)`.
#[derive(Debug, Clone)]
pub struct PseudoKahler {
    pub mla: MetricLieAlgebra,
    pub j: Matrix,
    pub omega: KForm,
}

impl PseudoKahler {
    /// Builds and validates all pseudo-Kahler conditions.
    pub fn new(mla: MetricLieAlgebra, j: Matrix, omega: KForm) -> Result<Self, Error> {
        let pk = PseudoKahler { mla, j, omega };
        let v = check_pseudo_kahler(&pk);
        if !v.ok {
            return Err(Error::NotPseudoKahler(v.failure_summary()));
        }
        Ok(pk)
    }

    /// Builds from `(g, J)` alone, deriving `omega`.
    pub fn from_metric_and_j(mla: MetricLieAlgebra, j: Matrix) -> Result<Self, Error> {
        let omega = mla.two_form_from_endo(&j);
        Self::new(mla, j, omega)
    }
}

/// The Nijenhuis tensor of an endomorphism, tabulated on basis pairs:
/// `N_A(X,Y) = A^2 [X,Y] + [AX, AY] - A[AX, Y] - A[X, AY]`.
#[derive(Debug, Clone)]
pub struct Nijenhuis {
    dim: usize,
    table: Vec<Vec<Vector>>,
}

pub fn nijenhuis(alg: &LieAlgebra, a: &Matrix) -> Nijenhuis {
    let n = alg.dim();
    let a2 = a * a;
    let mut table = vec![vec![crate::exactnum::zero_vector(n); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (ei, ej) = (basis_vector(n, i), basis_vector(n, j));
            let (ai, aj) = (a.column(i), a.column(j));
            let mut acc = a2.apply(&alg.bracket(&ei, &ej));
            acc = add_vectors(&acc, &alg.bracket(&ai, &aj));
            acc = crate::exactnum::sub_vectors(&acc, &a.apply(&alg.bracket(&ai, &ej)));
            acc = crate::exactnum::sub_vectors(&acc, &a.apply(&alg.bracket(&ei, &aj)));
            table[i][j] = acc.clone();
            table[j][i] = scale_vector(&Scalar::from_int(-1), &acc);
        }
    }
    Nijenhuis { dim: n, table }
}

impl Nijenhuis {
    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = crate::exactnum::zero_vector(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j || x[i].is_zero() || y[j].is_zero() {
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

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(|v| vector_is_zero(v)))
    }

    /// First basis pair with a nonzero value (0-based).
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if !vector_is_zero(&self.table[i][j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Sasaki verification: the almost contact metric identities together with
/// `N_phi + d eta (x) xi = 0` and `d eta = 2 Phi`.
pub fn check_sasaki(s: &AlmostContactMetric) -> Verdict {
    let mut v = s.validate();
    let n = s.mla.dim();
    let alg = s.mla.algebra();
    let deta = alg.cedifferential(&s.eta);

    let nphi = nijenhuis(alg, &s.phi);
    let mut ok = true;
    let mut detail = None;
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            let (ei, ej) = (basis_vector(n, i), basis_vector(n, j));
            let correction = scale_vector(&deta.eval(&[&ei, &ej]), &s.xi);
            let total = add_vectors(&nphi.eval(&ei, &ej), &correction);
            if !vector_is_zero(&total) {
                ok = false;
                detail = Some(format!("fails at basis pair (e{},e{})", i + 1, j + 1));
                break 'outer;
            }
        }
    }
    v.push("N_phi + d_eta(x)xi = 0", ok, detail);

    let two_phi = s.phi_form().scale(&Scalar::from_int(2));
    let diff = deta.sub(&two_phi);
    let detail = (!diff.is_zero()).then(|| {
        let (idx, c) = diff.terms().next().expect("nonzero form has a term");
        let pretty: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
        format!("(d_eta - 2 Phi) has coefficient {c} on e^{{{}}}", pretty.join(","))
    });
    v.push("d_eta = 2 Phi", diff.is_zero(), detail);
    v
}

/// Pseudo-Kahler verification: `J^2 = -id`, metric compatibility,
/// `omega = g(., J.)`, `N_J = 0`, `d omega = 0`.
pub fn check_pseudo_kahler(s: &PseudoKahler) -> Verdict {
    let mut v = Verdict::new();
    let n = s.mla.dim();
    v.push("even_dimension", n % 2 == 0, Some(format!("dim = {n}")));
    let j2 = &s.j * &s.j;
    v.push("J^2 = -id", j2 == -&Matrix::identity(n), None);
    let lhs = &(&s.j.transpose() * s.mla.metric()) * &s.j;
    v.push("g(J., J.) = g", lhs == *s.mla.metric(), None);
    v.push("omega = g(., J.)", s.omega == s.mla.two_form_from_endo(&s.j), None);
    let nj = nijenhuis(s.mla.algebra(), &s.j);
    let detail = nj.first_nonzero().map(|(i, j)| format!("N_J(e{},e{}) != 0", i + 1, j + 1));
    v.push("N_J = 0", nj.is_zero(), detail);
    let domega = s.mla.algebra().cedifferential(&s.omega);
    v.push("d_omega = 0", domega.is_zero(), None);
    v
}

/// An orthogonal standard decomposition `g~ = ideal x|^perp <e0>` with the
/// ideal nilpotent; `d = ad(e0)` restricted to the ideal, in the ideal basis.
#[derive(Debug, Clone)]
pub struct StandardDecomposition {
    pub ideal: Vec<Vector>,
    pub e0: Vector,
    pub tau: i8,
    pub d: Matrix,
}

/// Basis of the metric-orthogonal complement of the span of `vectors`.
pub fn orthogonal_complement(mla: &MetricLieAlgebra, vectors: &[Vector]) -> Vec<Vector> {
    let rows: Vec<Vector> = vectors.iter().map(|v| mla.metric().apply(v)).collect();
    if rows.is_empty() {
        return (0..mla.dim()).map(|i| basis_vector(mla.dim(), i)).collect();
    }
    Matrix::from_rows(rows).nullspace()
}

/// The metric Lie algebra realized on a subalgebra spanned by `basis`
/// (brackets must close on the span).
pub fn realized_subalgebra(
    mla: &MetricLieAlgebra,
    basis: &[Vector],
) -> Result<MetricLieAlgebra, Error> {
    let k = basis.len();
    let complement = complement_to_full(mla.dim(), basis)?;
    let alg = mla.algebra().realized_on_basis(basis, &complement)?;
    // check the bracket actually closes on the span
    for x in basis {
        for y in basis {
            if !in_span(&mla.algebra().bracket(x, y), basis, mla.dim()) {
                return Err(Error::Input("subspace is not a subalgebra".into()));
            }
        }
    }
    let g = Matrix::from_fn(k, k, |i, j| mla.inner(&basis[i], &basis[j]));
    MetricLieAlgebra::new(alg, g)
}

/// The quotient by a central subspace, realized on its metric-orthogonal
/// complement with the projected bracket and restricted metric.
pub fn realized_quotient(
    mla: &MetricLieAlgebra,
    central: &[Vector],
) -> Result<(MetricLieAlgebra, Vec<Vector>), Error> {
    for z in central {
        if !mla.algebra().in_center(z) {
            return Err(Error::Input("quotient subspace is not central".into()));
        }
    }
    let w = orthogonal_complement(mla, central);
    if w.len() + central.len() != mla.dim() {
        return Err(Error::DegenerateMetric);
    }
    let alg = mla.algebra().realized_on_basis(&w, central)?;
    let g = Matrix::from_fn(w.len(), w.len(), |i, j| mla.inner(&w[i], &w[j]));
    Ok((MetricLieAlgebra::new(alg, g)?, w))
}

fn complement_to_full(dim: usize, basis: &[Vector]) -> Result<Vec<Vector>, Error> {
    let mut cols: Vec<Vector> = basis.to_vec();
    for i in 0..dim {
        let cand = basis_vector(dim, i);
        if !in_span(&cand, &cols, dim) {
            cols.push(cand);
        }
    }
    if cols.len() != dim {
        return Err(Error::Input("vectors are linearly dependent".into()));
    }
    Ok(cols[basis.len()..].to_vec())
}

/// Express `v` in the basis `(basis, complement)`, returning only the
/// coordinates along `basis`; errors if the leftover part is nonzero.
fn coords_in_basis(dim: usize, basis: &[Vector], v: &[Scalar]) -> Option<Vector> {
    let m = Matrix::from_columns(basis, dim);
    m.affine_solve(v).map(|(x, _)| x)
}

/// Validates an orthogonal standard decomposition with the given nilpotent
/// ideal basis and the transversal vector `e0`.
pub fn check_standard_decomposition(
    mla: &MetricLieAlgebra,
    ideal: &[Vector],
    e0: &Vector,
) -> Result<StandardDecomposition, Error> {
    if ideal.len() + 1 != mla.dim() {
        return Err(Error::Input("ideal must have codimension one".into()));
    }
    let norm = mla.inner(e0, e0);
    let tau = if norm.is_one() {
        1
    } else if (-&norm).is_one() {
        -1
    } else {
        return Err(Error::Input(format!("g(e0,e0) = {norm} is not +-1")));
    };
    for v in ideal {
        if !mla.inner(e0, v).is_zero() {
            return Err(Error::Input("e0 is not orthogonal to the ideal".into()));
        }
    }
    if !mla.algebra().is_ideal(ideal) {
        return Err(Error::Input("subspace is not an ideal".into()));
    }
    let sub = realized_subalgebra(mla, ideal)?;
    if sub.algebra().nilpotency_step().is_none() {
        return Err(Error::Input("ideal is not nilpotent".into()));
    }
    // D = ad(e0) restricted to the ideal, in the ideal basis.
    let k = ideal.len();
    let mut cols = Vec::with_capacity(k);
    for v in ideal {
        let image = mla.algebra().bracket(e0, v);
        let coords = coords_in_basis(mla.dim(), ideal, &image)
            .ok_or_else(|| Error::Input("ad(e0) does not preserve the ideal".into()))?;
        cols.push(coords);
    }
    let d = Matrix::from_columns(&cols, k);
    Ok(StandardDecomposition { ideal: ideal.to_vec(), e0: e0.clone(), tau, d })
}

/// Searches for standard decompositions aligned with the fixed basis: every
/// unit-norm basis vector whose orthogonal complement is a nilpotent ideal.
pub fn find_standard_decompositions(mla: &MetricLieAlgebra) -> Vec<StandardDecomposition> {
    let n = mla.dim();
    let mut out = Vec::new();
    for i in 0..n {
        let e0 = basis_vector(n, i);
        let norm = mla.inner(&e0, &e0);
        if !(norm.is_one() || (-&norm).is_one()) {
            continue;
        }
        let complement = orthogonal_complement(mla, &[e0.clone()]);
        if complement.len() != n - 1 {
            continue;
        }
        if let Ok(dec) = check_standard_decomposition(mla, &complement, &e0) {
            out.push(dec);
        }
    }
    out
}

/// The metric Lie algebra realized on the ideal of a standard decomposition.
pub fn realized_ideal(
    mla: &MetricLieAlgebra,
    dec: &StandardDecomposition,
) -> Result<MetricLieAlgebra, Error> {
    realized_subalgebra(mla, &dec.ideal)
}

/// z-standard verification: the decomposition is standard and `phi(e0)` lies
/// in the center of the nilpotent ideal.
pub fn check_z_standard(s: &AlmostContactMetric, dec: &StandardDecomposition) -> Verdict {
    let mut v = Verdict::new();
    let phi_e0 = s.phi.apply(&dec.e0);
    let coords = coords_in_basis(s.mla.dim(), &dec.ideal, &phi_e0);
    v.push("phi(e0) in ideal", coords.is_some(), None);
    let Some(coords) = coords else {
        return v;
    };
    match realized_subalgebra(&s.mla, &dec.ideal) {
        Ok(sub) => {
            let central = sub.algebra().in_center(&coords);
            v.push("phi(e0) central in ideal", central, None);
        }
        Err(e) => v.push("ideal realization", false, Some(e.to_string())),
    }
    v
}

/// Pseudo-Iwasawa test: `ad(e0)` self-adjoint on the ideal with respect to
/// the restricted metric.
pub fn is_pseudo_iwasawa(mla: &MetricLieAlgebra, dec: &StandardDecomposition) -> bool {
    match realized_ideal(mla, dec) {
        Ok(sub) => sub.is_self_adjoint(&dec.d),
        Err(_) => false,
    }
}

/// Constraint on `chi(e0) - ad(e0)` for the isometric-modification
/// hypotheses: it must land in the stated subalgebra of `so(r, s)`.
pub enum AwConstraint {
    /// Skew-adjoint with respect to the ideal metric.
    Skew,
    /// Skew-adjoint and commuting with the given complex structure.
    SkewCommuting(Matrix),
}

/// Checks the hypotheses under which replacing `ad(e0)` by `chi(e0)` yields
/// an isometric semidirect product: `chi(e0)` is a derivation of the ideal,
/// `[chi(e0), ad(e0)] = 0`, and `chi(e0) - ad(e0)` lies in the constraint
/// subalgebra. Only the hypotheses are verified, not the isometry itself.
pub fn check_aw_hypotheses(
    mla: &MetricLieAlgebra,
    dec: &StandardDecomposition,
    chi: &Matrix,
    constraint: &AwConstraint,
) -> Result<Verdict, Error> {
    let sub = realized_ideal(mla, dec)?;
    let mut v = Verdict::new();
    v.push("chi(e0) is a derivation", sub.algebra().is_derivation(chi), None);
    v.push("[chi(e0), ad(e0)] = 0", chi.commutator(&dec.d).is_zero(), None);
    let diff = chi - &dec.d;
    match constraint {
        AwConstraint::Skew => {
            v.push("chi(e0) - ad(e0) skew", sub.is_skew_adjoint(&diff), None);
        }
        AwConstraint::SkewCommuting(j) => {
            v.push("chi(e0) - ad(e0) skew", sub.is_skew_adjoint(&diff), None);
            v.push("chi(e0) - ad(e0) commutes with J", diff.commutator(j).is_zero(), None);
        }
    }
    Ok(v)
}

/// The induced pseudo-Kahler structure on the quotient by the Reeb direction.
#[derive(Debug, Clone)]
pub struct KahlerQuotient {
    pub reduction: PseudoKahler,
    /// Basis of `xi^perp` realizing the quotient inside the ambient algebra.
    pub inclusion: Vec<Vector>,
}

/// Quotient of a Sasaki algebra with nonzero center by the Reeb direction.
/// The center must be spanned by `xi`; the quotient carries the induced
/// pseudo-Kahler structure and satisfies `ric< = ric + 2 g<`.
pub fn kahler_quotient(s: &AlmostContactMetric) -> Result<KahlerQuotient, Error> {
    let sas = check_sasaki(s);
    if !sas.ok {
        return Err(Error::NotSasaki(sas.failure_summary()));
    }
    let center = s.mla.algebra().center();
    if center.is_empty() {
        return Err(Error::CenterNotReeb);
    }
    let n = s.mla.dim();
    let xi_spans_center = center.iter().all(|z| in_span(z, &[s.xi.clone()], n))
        && s.mla.algebra().in_center(&s.xi);
    if !xi_spans_center {
        return Err(Error::CenterNotReeb);
    }
    let (quotient, w) = realized_quotient(&s.mla, &[s.xi.clone()])?;
    // J = phi restricted to xi^perp, in the quotient basis.
    let k = w.len();
    let mut cols = Vec::with_capacity(k);
    for b in &w {
        let image = s.phi.apply(b);
        let coords = coords_in_basis(n, &w, &image)
            .ok_or_else(|| Error::Input("phi does not preserve xi^perp".into()))?;
        cols.push(coords);
    }
    let j = Matrix::from_columns(&cols, k);
    let omega = quotient.two_form_from_endo(&j);
    let reduction = PseudoKahler::new(quotient, j, omega)?;
    Ok(KahlerQuotient { reduction, inclusion: w })
}

/// Verifies `ric<(x, y) = ric(x, y) + 2 g<(x, y)` on the quotient basis.
pub fn quotient_ricci_relation(s: &AlmostContactMetric, q: &KahlerQuotient) -> bool {
    let ambient = s.mla.ricci().ric;
    let reduced = q.reduction.mla.ricci().ric;
    let k = q.inclusion.len();
    for i in 0..k {
        for j in 0..k {
            // ric(x, y) on the ambient algebra for x, y in xi^perp
            let mut amb = Scalar::zero();
            for a in 0..s.mla.dim() {
                for b in 0..s.mla.dim() {
                    if !q.inclusion[i][a].is_zero() && !q.inclusion[j][b].is_zero() {
                        amb = &amb
                            + &(&(&q.inclusion[i][a] * &q.inclusion[j][b]) * &ambient[(a, b)]);
                    }
                }
            }
            let expected = &amb + &(&Scalar::from_int(2) * &q.reduction.mla.metric()[(i, j)]);
            if reduced[(i, j)] != expected {
                return false;
            }
        }
    }
    true
}


#[cfg(test)]
pub use tests::sasaki_dim3;
