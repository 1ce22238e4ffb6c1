//! Versioned JSON schemas for every artifact type. Scalars serialize as
//! canonical strings (`"3/4"`, `"1/2+1/4*sqrt(6)"`, `"0.125f"`), matrices as
//! row-major arrays of such strings, forms as coefficient maps keyed by
//! multi-index.

use super::expr::eval_scalar;
use super::ParseError;
use crate::curvature::{MetricLieAlgebra, RicciData};
use crate::error::Error;
use crate::exactnum::{Matrix, Scalar, Vector};
use crate::exterior::KForm;
use crate::extensions::ZStandardData;
use crate::liealg::LieAlgebra;
use crate::nikolayevsky::NikolayevskyResult;
use crate::structures::{AlmostContactMetric, PseudoKahler};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_ALGEBRA: &str = "metriclie/algebra/1";
pub const SCHEMA_METRIC_ALGEBRA: &str = "metriclie/metric-algebra/1";
pub const SCHEMA_CONTACT: &str = "metriclie/almost-contact/1";
pub const SCHEMA_KAHLER: &str = "metriclie/pseudo-kahler/1";
pub const SCHEMA_RICCI: &str = "metriclie/ricci/1";
pub const SCHEMA_NIKOLAYEVSKY: &str = "metriclie/nikolayevsky/1";
pub const SCHEMA_Z_STANDARD: &str = "metriclie/z-standard/1";

pub type MatrixJson = Vec<Vec<String>>;
pub type FormMap = BTreeMap<String, String>;

fn scalar_from_str(s: &str) -> Result<Scalar, Error> {
    eval_scalar(s).map_err(|e| Error::Input(e.to_string()))
}

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)].to_string()).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<Matrix, Error> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Input("ragged matrix rows".into()));
    }
    let mut out = Matrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            out[(i, j)] = scalar_from_str(entry)?;
        }
    }
    Ok(out)
}

pub fn vector_to_json(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

pub fn vector_from_json(v: &[String]) -> Result<Vector, Error> {
    v.iter().map(|s| scalar_from_str(s)).collect()
}

/// Multi-index key: concatenated digits when every index fits in one digit
/// (`"12"`), comma-separated otherwise (`"10,2"`). Indices are 1-based.
pub fn multi_index_key(indices: &[usize]) -> String {
    if indices.iter().all(|&i| i + 1 <= 9) {
        indices.iter().map(|&i| (i + 1).to_string()).collect()
    } else {
        indices.iter().map(|&i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn parse_multi_index_key(key: &str, dim: usize) -> Result<Vec<usize>, Error> {
    let raw: Vec<usize> = if key.contains(',') {
        key.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad index in key `{key}`"))))
            .collect::<Result<_, _>>()?
    } else {
        key.bytes()
            .map(|b| {
                if b.is_ascii_digit() {
                    Ok((b - b'0') as usize)
                } else {
                    Err(Error::Input(format!("bad index in key `{key}`")))
                }
            })
            .collect::<Result<_, _>>()?
    };
    raw.into_iter()
        .map(|i| {
            if i == 0 || i > dim {
                Err(Error::Input(format!("index {i} out of range for dimension {dim}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

pub fn form_to_map(f: &KForm) -> FormMap {
    f.terms().map(|(idx, c)| (multi_index_key(&idx), c.to_string())).collect()
}

pub fn form_from_map(map: &FormMap, dim: usize, degree: usize) -> Result<KForm, Error> {
    let mut f = KForm::zero(dim, degree);
    for (key, value) in map {
        let idx = parse_multi_index_key(key, dim)?;
        if idx.len() != degree {
            return Err(Error::Input(format!("key `{key}` does not have degree {degree}")));
        }
        f.add_term(&idx, &scalar_from_str(value)?);
    }
    Ok(f)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    /// `d[target][multi-index] = coefficient`, mirroring the tuple notation.
    pub d: BTreeMap<String, FormMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn algebra_to_json(alg: &LieAlgebra) -> AlgebraJson {
    let mut d = BTreeMap::new();
    for (k, dk) in alg.differentials().iter().enumerate() {
        let map = form_to_map(dk);
        if !map.is_empty() {
            d.insert((k + 1).to_string(), map);
        }
    }
    AlgebraJson { dim: alg.dim(), d, labels: Some(alg.labels().to_vec()) }
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<LieAlgebra, Error> {
    let mut diffs = vec![KForm::zero(j.dim, 2); j.dim];
    for (key, map) in &j.d {
        let target: usize =
            key.parse().map_err(|_| Error::Input(format!("bad generator key `{key}`")))?;
        if target == 0 || target > j.dim {
            return Err(Error::Input(format!("generator {target} out of range")));
        }
        diffs[target - 1] = form_from_map(map, j.dim, 2)?;
    }
    let mut alg = LieAlgebra::from_differentials(&diffs)?;
    if let Some(labels) = &j.labels {
        if labels.len() != j.dim {
            return Err(Error::Input("label count does not match dimension".into()));
        }
        alg.set_labels(labels.clone());
    }
    Ok(alg)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricAlgebraJson {
    pub schema: String,
    pub algebra: AlgebraJson,
    pub metric: MatrixJson,
}

pub fn mla_to_json(mla: &MetricLieAlgebra) -> MetricAlgebraJson {
    MetricAlgebraJson {
        schema: SCHEMA_METRIC_ALGEBRA.into(),
        algebra: algebra_to_json(mla.algebra()),
        metric: matrix_to_json(mla.metric()),
    }
}

pub fn mla_from_json(j: &MetricAlgebraJson) -> Result<MetricLieAlgebra, Error> {
    MetricLieAlgebra::new(algebra_from_json(&j.algebra)?, matrix_from_json(&j.metric)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContactJson {
    pub schema: String,
    pub algebra: AlgebraJson,
    pub metric: MatrixJson,
    pub phi: MatrixJson,
    pub xi: Vec<String>,
    pub eta: FormMap,
}

pub fn acm_to_json(s: &AlmostContactMetric) -> ContactJson {
    ContactJson {
        schema: SCHEMA_CONTACT.into(),
        algebra: algebra_to_json(s.mla.algebra()),
        metric: matrix_to_json(s.mla.metric()),
        phi: matrix_to_json(&s.phi),
        xi: vector_to_json(&s.xi),
        eta: form_to_map(&s.eta),
    }
}

pub fn acm_from_json(j: &ContactJson) -> Result<AlmostContactMetric, Error> {
    let mla =
        MetricLieAlgebra::new(algebra_from_json(&j.algebra)?, matrix_from_json(&j.metric)?)?;
    let dim = mla.dim();
    AlmostContactMetric::new(
        mla,
        matrix_from_json(&j.phi)?,
        vector_from_json(&j.xi)?,
        form_from_map(&j.eta, dim, 1)?,
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KahlerJson {
    pub schema: String,
    pub algebra: AlgebraJson,
    pub metric: MatrixJson,
    #[serde(rename = "J")]
    pub j: MatrixJson,
    pub omega: FormMap,
}

pub fn pk_to_json(s: &PseudoKahler) -> KahlerJson {
    KahlerJson {
        schema: SCHEMA_KAHLER.into(),
        algebra: algebra_to_json(s.mla.algebra()),
        metric: matrix_to_json(s.mla.metric()),
        j: matrix_to_json(&s.j),
        omega: form_to_map(&s.omega),
    }
}

pub fn pk_from_json(j: &KahlerJson) -> Result<PseudoKahler, Error> {
    let mla =
        MetricLieAlgebra::new(algebra_from_json(&j.algebra)?, matrix_from_json(&j.metric)?)?;
    let dim = mla.dim();
    PseudoKahler::new(mla, matrix_from_json(&j.j)?, form_from_map(&j.omega, dim, 2)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RicciJson {
    pub schema: String,
    pub ric: MatrixJson,
    pub operator: MatrixJson,
    /// The Einstein constant as a scalar string, or `null`.
    pub einstein: Option<String>,
}

pub fn ricci_to_json(r: &RicciData) -> RicciJson {
    RicciJson {
        schema: SCHEMA_RICCI.into(),
        ric: matrix_to_json(&r.ric),
        operator: matrix_to_json(&r.operator),
        einstein: r.einstein_constant.as_ref().map(Scalar::to_string),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NikolayevskyJson {
    pub schema: String,
    #[serde(rename = "N")]
    pub n: MatrixJson,
    /// Rational eigenvalues repeated by multiplicity, or `null` when the
    /// characteristic polynomial does not split over the rationals.
    pub eigenvalues: Option<Vec<String>>,
    pub semisimple: bool,
    pub space_dim: usize,
    pub h: String,
}

pub fn nik_to_json(r: &NikolayevskyResult) -> NikolayevskyJson {
    NikolayevskyJson {
        schema: SCHEMA_NIKOLAYEVSKY.into(),
        n: matrix_to_json(&r.n),
        eigenvalues: r.eigenvalues.as_ref().map(|eigs| {
            eigs.iter()
                .flat_map(|(v, m)| std::iter::repeat_n(Scalar::from_rational(v.clone()).to_string(), *m))
                .collect()
        }),
        semisimple: r.semisimple,
        space_dim: r.space_dim,
        h: r.h_kind.as_str().into(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZStandardJson {
    pub schema: String,
    pub reduction: KahlerJson,
    #[serde(rename = "D_check")]
    pub d_check: MatrixJson,
    pub tau: i8,
    pub h: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e0: Option<Vec<String>>,
}

pub fn zstd_to_json(data: &ZStandardData) -> ZStandardJson {
    ZStandardJson {
        schema: SCHEMA_Z_STANDARD.into(),
        reduction: pk_to_json(&data.reduction),
        d_check: matrix_to_json(&data.d_check),
        tau: data.tau,
        h: data.h.to_string(),
        b: None,
        xi: None,
        e0: None,
    }
}

pub fn zstd_from_json(j: &ZStandardJson) -> Result<ZStandardData, Error> {
    Ok(ZStandardData {
        reduction: pk_from_json(&j.reduction)?,
        d_check: matrix_from_json(&j.d_check)?,
        tau: j.tau,
        h: scalar_from_str(&j.h)?,
    })
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Input(e.to_string())
    }
}
