//! Built-in catalog of worked examples and classification families, stored as
//! data files in the canonical text formats. Each entry carries declarative
//! claims that name an operation and its expected outcome; [`verify`] runs
//! them all.

pub mod claims;
pub mod verify;

use crate::curvature::MetricLieAlgebra;
use crate::error::Error;
use crate::exactnum::Matrix;
use crate::exactnum::Scalar;
use crate::exterior::KForm;
use crate::notation::expr::{eval_expr, Params};
use crate::notation::text::{parse_algebra_with_params, parse_metric_with_params};
use crate::structures::{AlmostContactMetric, PseudoKahler};
use serde::Deserialize;
use std::collections::BTreeMap;

pub use claims::{Claim, ClaimRecord};
pub use verify::{run, Report};

/// The raw JSON shape of a catalog entry.
#[derive(Debug, Clone, Deserialize)]
pub struct EntryJson {
    pub schema: String,
    pub id: String,
    pub source: String,
    #[serde(default)]
    pub algebra: Option<String>,
    #[serde(default)]
    pub metric: Option<String>,
    #[serde(default)]
    pub structure: Option<StructureJson>,
    #[serde(default)]
    pub derivation: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub seed: Option<SeedJson>,
    #[serde(default)]
    pub params: Option<ParamsJson>,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct StructureJson {
    pub kind: String,
    #[serde(default)]
    pub phi: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub xi: Option<Vec<String>>,
    #[serde(default, rename = "J")]
    pub j: Option<Vec<Vec<String>>>,
}

/// Builder seed: a pseudo-Kahler reduction with a compatible derivation.
#[derive(Debug, Clone, Deserialize)]
pub struct SeedJson {
    pub algebra: String,
    pub metric: String,
    #[serde(rename = "J")]
    pub j: Vec<Vec<String>>,
    #[serde(rename = "D_check")]
    pub d_check: Vec<Vec<String>>,
    pub tau: i8,
    pub h: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct ParamsJson {
    #[serde(default)]
    pub grid: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub samples: Vec<BTreeMap<String, String>>,
    #[serde(default)]
    pub exclude: Vec<BTreeMap<String, String>>,
}

/// Evaluates a matrix of coefficient expressions.
pub fn eval_matrix(rows: &[Vec<String>], params: &Params) -> Result<Matrix, Error> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Input("ragged matrix rows".into()));
    }
    let mut out = Matrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            out[(i, j)] = eval_expr(entry, params)?;
        }
    }
    Ok(out)
}

pub fn eval_vector(entries: &[String], params: &Params) -> Result<Vec<Scalar>, Error> {
    entries.iter().map(|e| eval_expr(e, params).map_err(Error::from)).collect()
}

/// A catalog structure instantiated at a parameter sample.
#[derive(Debug, Clone)]
pub enum InstStructure {
    Sasaki(AlmostContactMetric),
    Kahler(PseudoKahler),
}

#[derive(Debug, Clone)]
pub struct InstSeed {
    pub reduction: PseudoKahler,
    pub d_check: Matrix,
    pub tau: i8,
    pub h: Scalar,
}

/// A catalog entry evaluated at one parameter binding.
pub struct EntryInstance {
    pub id: String,
    pub params: Params,
    pub mla: Option<MetricLieAlgebra>,
    pub structure: Option<InstStructure>,
    pub derivation: Option<Matrix>,
    pub seed: Option<InstSeed>,
}

impl EntryJson {
    /// All parameter bindings: the grid product crossed with the explicit
    /// samples, minus excluded combinations.
    pub fn parameter_samples(&self) -> Result<Vec<Params>, Error> {
        let Some(p) = &self.params else {
            return Ok(vec![Params::new()]);
        };
        let mut grid_points: Vec<Params> = vec![Params::new()];
        for (name, values) in &p.grid {
            let mut next = Vec::new();
            for point in &grid_points {
                for v in values {
                    let mut q = point.clone();
                    q.insert(name.clone(), eval_expr(v, &Params::new())?);
                    next.push(q);
                }
            }
            grid_points = next;
        }
        let samples: Vec<Params> = if p.samples.is_empty() {
            vec![Params::new()]
        } else {
            p.samples
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|(k, v)| Ok((k.clone(), eval_expr(v, &Params::new())?)))
                        .collect::<Result<Params, Error>>()
                })
                .collect::<Result<_, _>>()?
        };
        let mut out = Vec::new();
        'point: for g in &grid_points {
            for s in &samples {
                let mut merged = g.clone();
                merged.extend(s.clone());
                for ex in &p.exclude {
                    let matches = ex.iter().all(|(k, v)| {
                        let Ok(val) = eval_expr(v, &Params::new()) else { return false };
                        merged.get(k) == Some(&val)
                    });
                    if matches {
                        continue 'point;
                    }
                }
                out.push(merged);
            }
        }
        Ok(out)
    }

    pub fn instantiate(&self, params: &Params) -> Result<EntryInstance, Error> {
        let mla = match (&self.algebra, &self.metric) {
            (Some(a), Some(m)) => {
                let alg = parse_algebra_with_params(a, params)?;
                let dim = alg.dim();
                let metric = parse_metric_with_params(m, dim, params)?;
                Some(MetricLieAlgebra::new(alg, metric)?)
            }
            (Some(a), None) => {
                let alg = parse_algebra_with_params(a, params)?;
                let dim = alg.dim();
                Some(MetricLieAlgebra::new(alg, Matrix::identity(dim))?)
            }
            _ => None,
        };
        let structure = match (&self.structure, &mla) {
            (Some(s), Some(mla)) => Some(match s.kind.as_str() {
                "sasaki" => {
                    let phi = eval_matrix(
                        s.phi.as_ref().ok_or(Error::Input("sasaki structure needs phi".into()))?,
                        params,
                    )?;
                    let xi = eval_vector(
                        s.xi.as_ref().ok_or(Error::Input("sasaki structure needs xi".into()))?,
                        params,
                    )?;
                    let eta = crate::exterior::flat(mla.metric(), &xi);
                    InstStructure::Sasaki(AlmostContactMetric::new(
                        mla.clone(),
                        phi,
                        xi,
                        eta,
                    )?)
                }
                "pseudo-kahler" => {
                    let j = eval_matrix(
                        s.j.as_ref().ok_or(Error::Input("kahler structure needs J".into()))?,
                        params,
                    )?;
                    InstStructure::Kahler(PseudoKahler::from_metric_and_j(mla.clone(), j)?)
                }
                other => return Err(Error::Input(format!("unknown structure kind `{other}`"))),
            }),
            _ => None,
        };
        let derivation =
            self.derivation.as_ref().map(|d| eval_matrix(d, params)).transpose()?;
        let seed = self
            .seed
            .as_ref()
            .map(|s| -> Result<InstSeed, Error> {
                let alg = parse_algebra_with_params(&s.algebra, params)?;
                let dim = alg.dim();
                let metric = parse_metric_with_params(&s.metric, dim, params)?;
                let mla = MetricLieAlgebra::new(alg, metric)?;
                let j = eval_matrix(&s.j, params)?;
                let reduction = PseudoKahler::from_metric_and_j(mla, j)?;
                Ok(InstSeed {
                    reduction,
                    d_check: eval_matrix(&s.d_check, params)?,
                    tau: s.tau,
                    h: eval_expr(&s.h, params)?,
                })
            })
            .transpose()?;
        Ok(EntryInstance {
            id: self.id.clone(),
            params: params.clone(),
            mla,
            structure,
            derivation,
            seed,
        })
    }
}

impl EntryInstance {
    pub fn mla(&self) -> Result<&MetricLieAlgebra, Error> {
        self.mla.as_ref().ok_or(Error::Input("entry has no algebra/metric".into()))
    }

    pub fn sasaki(&self) -> Result<&AlmostContactMetric, Error> {
        match &self.structure {
            Some(InstStructure::Sasaki(s)) => Ok(s),
            _ => Err(Error::Input("entry has no Sasaki structure".into())),
        }
    }

    pub fn kahler(&self) -> Result<&PseudoKahler, Error> {
        match &self.structure {
            Some(InstStructure::Kahler(s)) => Ok(s),
            _ => Err(Error::Input("entry has no pseudo-Kahler structure".into())),
        }
    }

    pub fn seed(&self) -> Result<&InstSeed, Error> {
        self.seed.as_ref().ok_or(Error::Input("entry has no builder seed".into()))
    }

    pub fn derivation(&self) -> Result<&Matrix, Error> {
        self.derivation.as_ref().ok_or(Error::Input("entry has no derivation".into()))
    }

    /// The two cocycles of the full central extension `(b, xi)`.
    pub fn seed_cocycles(&self) -> Result<Vec<(i8, KForm)>, Error> {
        let seed = self.seed()?;
        let tau_s = Scalar::from_int(seed.tau as i64);
        let sigma_b = seed.reduction.omega.endo_action(&seed.d_check).scale(&tau_s);
        let sigma_xi = seed.reduction.omega.scale(&Scalar::from_int(2));
        Ok(vec![(seed.tau, sigma_b), (1, sigma_xi)])
    }
}

/// The embedded catalog, ordered by id.
pub fn entries() -> Result<Vec<EntryJson>, Error> {
    static SOURCES: &[&str] = &[
        include_str!("../../data/catalog/abelian-r2.json"),
        include_str!("../../data/catalog/abelian-r4.json"),
        include_str!("../../data/catalog/abelian-r6.json"),
        include_str!("../../data/catalog/dim9-final.json"),
        include_str!("../../data/catalog/ex1.json"),
        include_str!("../../data/catalog/ex2.json"),
        include_str!("../../data/catalog/h11-omega1.json"),
        include_str!("../../data/catalog/h11-omega2.json"),
        include_str!("../../data/catalog/heisenberg.json"),
        include_str!("../../data/catalog/prop5-dim3.json"),
        include_str!("../../data/catalog/prop5-dim3-doctored.json"),
        include_str!("../../data/catalog/prop5-dim5-neg.json"),
        include_str!("../../data/catalog/prop5-dim5-pos.json"),
        include_str!("../../data/catalog/thm4.1-family1.json"),
        include_str!("../../data/catalog/thm4.1-family2.json"),
        include_str!("../../data/catalog/thm4.1-family3.json"),
    ];
    let mut out: Vec<EntryJson> = SOURCES
        .iter()
        .map(|src| serde_json::from_str(src).map_err(|e| Error::Input(format!("catalog: {e}"))))
        .collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

pub fn find(id: &str) -> Result<EntryJson, Error> {
    entries()?
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Input(format!("no catalog entry with id `{id}`")))
}
