//! Command line interface: curvature reports, structure verification,
//! canonical-derivation computations, the extension/reduction pipeline, and
//! catalog re-verification.
//!
//! Exit codes: 0 success, 1 verdict/claim failure, 2 input error.

use clap::{Args, Parser, Subcommand};
use metriclie::catalog::{self, InstStructure};
use metriclie::curvature::{MetricLieAlgebra, DEFAULT_FLOAT_TOL};
use metriclie::error::Error;
use metriclie::exactnum::{basis_vector, Matrix};
use metriclie::extensions::{
    build_kahler_einstein, build_sasaki_einstein, check_generalized_nilsoliton, kahler_reduction,
};
use metriclie::nikolayevsky::{
    constrained_derivations, nikolayevsky_derivation, symmetric_part_identity_family, HKind,
    NikOutcome,
};
use metriclie::notation::expr::Params;
use metriclie::notation::json as schema;
use metriclie::notation::{parse_algebra, parse_metric, print_algebra, print_metric};
use metriclie::structures::{
    check_pseudo_kahler, check_sasaki, check_standard_decomposition, orthogonal_complement,
    AlmostContactMetric, PseudoKahler, StandardDecomposition, Verdict,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "metriclie", version, about = "Exact curvature and geometric structures on metric Lie algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// Input file: an algebra in tuple notation (.salg), or a JSON bundle.
    input: Option<PathBuf>,
    /// Metric file (.smet) accompanying a .salg input.
    #[arg(long)]
    metric: Option<PathBuf>,
    /// Catalog entry id instead of a file.
    #[arg(long)]
    id: Option<String>,
    /// Parameter binding `name=value` for parametric catalog entries.
    #[arg(long = "param")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ricci tensor, operator and Einstein verdict.
    Ricci(InputArgs),
    /// Verify the Sasaki conditions with a per-identity breakdown.
    Sasaki(InputArgs),
    /// Verify the pseudo-Kahler conditions.
    Kahler(InputArgs),
    /// The h-constrained canonical derivation (trace-normalized).
    Nikolayevsky {
        #[command(flatten)]
        input: InputArgs,
        /// Constraint algebra: gl, co or cu.
        #[arg(long, default_value = "gl")]
        h: String,
        /// JSON matrix file with the complex structure (required for cu
        /// unless the input bundle carries one).
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Evaluate the generalized nilsoliton identity for (g, D, tau).
    #[command(visible_alias = "check-nilsoliton")]
    Nilsoliton {
        #[command(flatten)]
        input: InputArgs,
        /// JSON matrix file with the derivation (defaults to the catalog
        /// entry's featured derivation).
        #[arg(long)]
        derivation: Option<PathBuf>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        tau: i8,
    },
    /// Sasaki-Einstein extension of a pseudo-Kahler reduction.
    ExtendSe {
        #[command(flatten)]
        input: InputArgs,
        /// JSON matrix file with the derivation; defaults to the seed's or a
        /// computed one with symmetric part the identity.
        #[arg(long)]
        derivation: Option<PathBuf>,
    },
    /// Kahler-Einstein extension of a pseudo-Kahler reduction.
    ExtendKe {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        derivation: Option<PathBuf>,
    },
    /// Kahler reduction of a z-standard Sasaki algebra.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        /// 1-based index of the transversal basis vector (default: the last).
        #[arg(long)]
        e0: Option<usize>,
    },
    /// Catalog inspection.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Re-verify every checkable catalog claim.
    VerifyPaper {
        /// Restrict to one entry id.
        #[arg(long)]
        id: Option<String>,
        /// Pin a parameter value `name=value`.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Write the machine-readable report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List entry ids and descriptions.
    List,
    /// Print one entry as JSON.
    Show {
        #[arg(long)]
        id: String,
    },
    /// Write an entry's algebra/metric/structure to files in a directory.
    Export {
        #[arg(long)]
        id: String,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

fn float_tol() -> f64 {
    std::env::var("METRICLIE_FLOAT_TOL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_FLOAT_TOL)
}

fn parse_params(raw: &[String]) -> Result<Params, Error> {
    let mut out = Params::new();
    for p in raw {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("parameter `{p}` is not of the form name=value")))?;
        out.insert(k.trim().to_string(), metriclie::notation::eval_scalar(v.trim())?);
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

/// Everything a subcommand might need, resolved from files or the catalog.
struct Loaded {
    mla: Option<MetricLieAlgebra>,
    sasaki: Option<AlmostContactMetric>,
    kahler: Option<PseudoKahler>,
    derivation: Option<Matrix>,
    seed: Option<metriclie::catalog::InstSeed>,
}

fn load(input: &InputArgs) -> Result<Loaded, Error> {
    if let Some(id) = &input.id {
        let entry = catalog::find(id)?;
        let samples = entry.parameter_samples()?;
        let bound = parse_params(&input.params)?;
        let sample = samples
            .iter()
            .find(|s| bound.iter().all(|(k, v)| s.get(k) == Some(v)))
            .ok_or_else(|| {
                Error::Input(format!("no parameter sample of `{id}` matches the bindings"))
            })?;
        let inst = entry.instantiate(sample)?;
        let (sas, kah) = match inst.structure {
            Some(InstStructure::Sasaki(s)) => (Some(s), None),
            Some(InstStructure::Kahler(k)) => (None, Some(k)),
            None => (None, None),
        };
        return Ok(Loaded {
            mla: inst.mla,
            sasaki: sas,
            kahler: kah,
            derivation: inst.derivation,
            seed: inst.seed,
        });
    }
    let Some(path) = &input.input else {
        return Err(Error::Input("provide an input file or --id".into()));
    };
    let text = read(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if ext == "json" {
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Error::Input(e.to_string()))?;
        let schema_tag = value.get("schema").and_then(|s| s.as_str()).unwrap_or("");
        if schema_tag == schema::SCHEMA_CONTACT {
            let bundle: schema::ContactJson =
                serde_json::from_value(value).map_err(|e| Error::Input(e.to_string()))?;
            let acm = schema::acm_from_json(&bundle)?;
            return Ok(Loaded {
                mla: Some(acm.mla.clone()),
                sasaki: Some(acm),
                kahler: None,
                derivation: None,
                seed: None,
            });
        }
        if schema_tag == schema::SCHEMA_KAHLER {
            let bundle: schema::KahlerJson =
                serde_json::from_value(value).map_err(|e| Error::Input(e.to_string()))?;
            let pk = schema::pk_from_json(&bundle)?;
            return Ok(Loaded {
                mla: Some(pk.mla.clone()),
                sasaki: None,
                kahler: Some(pk),
                derivation: None,
                seed: None,
            });
        }
        let bundle: schema::MetricAlgebraJson =
            serde_json::from_value(value).map_err(|e| Error::Input(e.to_string()))?;
        return Ok(Loaded {
            mla: Some(schema::mla_from_json(&bundle)?),
            sasaki: None,
            kahler: None,
            derivation: None,
            seed: None,
        });
    }
    // tuple-notation algebra with an optional metric file
    let alg = parse_algebra(&text.trim())?;
    let metric = match &input.metric {
        Some(mpath) => parse_metric(read(mpath)?.trim(), alg.dim())?,
        None => Matrix::identity(alg.dim()),
    };
    Ok(Loaded {
        mla: Some(MetricLieAlgebra::new(alg, metric)?),
        sasaki: None,
        kahler: None,
        derivation: None,
        seed: None,
    })
}

fn require_mla(l: &Loaded) -> Result<&MetricLieAlgebra, Error> {
    l.mla.as_ref().ok_or_else(|| Error::Input("no algebra/metric in the input".into()))
}

fn load_matrix_file(path: &Path) -> Result<Matrix, Error> {
    let rows: schema::MatrixJson =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Input(e.to_string()))?;
    schema::matrix_from_json(&rows)
}

fn print_json<T: ?Sized + serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn verdict_json(v: &Verdict) -> serde_json::Value {
    serde_json::json!({
        "ok": v.ok,
        "checks": v.checks.iter().map(|c| serde_json::json!({
            "name": c.name,
            "ok": c.ok,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

/// The reduction data for the extension verbs: from the seed when present,
/// else the input's pseudo-Kahler structure.
fn extension_inputs(
    loaded: &Loaded,
    derivation: &Option<PathBuf>,
) -> Result<(PseudoKahler, Matrix), Error> {
    let reduction = if let Some(seed) = &loaded.seed {
        seed.reduction.clone()
    } else if let Some(pk) = &loaded.kahler {
        pk.clone()
    } else {
        return Err(Error::Input("input carries no pseudo-Kahler reduction".into()));
    };
    let d = if let Some(path) = derivation {
        load_matrix_file(path)?
    } else if let Some(seed) = &loaded.seed {
        seed.d_check.clone()
    } else {
        let (particular, _) = symmetric_part_identity_family(&reduction.mla, &reduction.j)
            .ok_or(Error::NoSymmetricPartIdentity)?;
        particular
    };
    Ok((reduction, d))
}

fn decomposition(
    mla: &MetricLieAlgebra,
    e0_index: Option<usize>,
) -> Result<StandardDecomposition, Error> {
    let n = mla.dim();
    let idx = e0_index.unwrap_or(n);
    if idx == 0 || idx > n {
        return Err(Error::Input(format!("e0 index {idx} out of range")));
    }
    let e0 = basis_vector(n, idx - 1);
    let ideal = orthogonal_complement(mla, &[e0.clone()]);
    if ideal.len() != n - 1 {
        return Err(Error::DegenerateMetric);
    }
    check_standard_decomposition(mla, &ideal, &e0)
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Ricci(input) => {
            let loaded = load(&input)?;
            let mla = require_mla(&loaded)?;
            let ricci = mla.ricci_with_tol(float_tol());
            print_json(&schema::ricci_to_json(&ricci));
            Ok(true)
        }
        Cmd::Sasaki(input) => {
            let loaded = load(&input)?;
            let s = loaded
                .sasaki
                .as_ref()
                .ok_or_else(|| Error::Input("input carries no Sasaki structure".into()))?;
            let v = check_sasaki(s);
            print_json(&verdict_json(&v));
            Ok(v.ok)
        }
        Cmd::Kahler(input) => {
            let loaded = load(&input)?;
            let s = loaded
                .kahler
                .as_ref()
                .ok_or_else(|| Error::Input("input carries no pseudo-Kahler structure".into()))?;
            let v = check_pseudo_kahler(s);
            print_json(&verdict_json(&v));
            Ok(v.ok)
        }
        Cmd::Nikolayevsky { input, h, structure } => {
            let loaded = load(&input)?;
            let kind: HKind = h.parse()?;
            let (target, j) = match kind {
                HKind::Cu => {
                    // resolve the complex structure: flag, Kahler bundle, or seed
                    if let Some(path) = &structure {
                        (require_mla(&loaded)?.clone(), Some(load_matrix_file(path)?))
                    } else if let Some(pk) = &loaded.kahler {
                        (pk.mla.clone(), Some(pk.j.clone()))
                    } else if let Some(seed) = &loaded.seed {
                        (seed.reduction.mla.clone(), Some(seed.reduction.j.clone()))
                    } else {
                        return Err(Error::MissingComplexStructure);
                    }
                }
                _ => (require_mla(&loaded)?.clone(), None),
            };
            let space = constrained_derivations(&target, kind, j.as_ref())?;
            nik_report(&target, &space)
        }
        Cmd::Nilsoliton { input, derivation, tau } => {
            let loaded = load(&input)?;
            let mla = require_mla(&loaded)?;
            let d = match (&derivation, &loaded.derivation) {
                (Some(path), _) => load_matrix_file(path)?,
                (None, Some(d)) => d.clone(),
                (None, None) => return Err(Error::Input("provide --derivation".into())),
            };
            let rep = check_generalized_nilsoliton(mla, &d, tau)?;
            print_json(&serde_json::json!({
                "equation_holds": rep.equation_holds,
                "trace_condition_holds": rep.trace_condition_holds,
                "minus_trace_not_eigenvalue": rep.minus_trace_not_eigenvalue,
                "einstein": rep.einstein,
                "lambda": rep.lambda.to_string(),
            }));
            Ok(rep.einstein)
        }
        Cmd::ExtendSe { input, derivation } => {
            let loaded = load(&input)?;
            let (reduction, d) = extension_inputs(&loaded, &derivation)?;
            let (acm, _) = build_sasaki_einstein(&reduction, &d)?;
            print_json(&schema::acm_to_json(&acm));
            Ok(true)
        }
        Cmd::ExtendKe { input, derivation } => {
            let loaded = load(&input)?;
            let (reduction, d) = extension_inputs(&loaded, &derivation)?;
            let (pk, _) = build_kahler_einstein(&reduction, &d)?;
            print_json(&schema::pk_to_json(&pk));
            Ok(true)
        }
        Cmd::Reduce { input, e0 } => {
            let loaded = load(&input)?;
            let s = loaded
                .sasaki
                .as_ref()
                .ok_or_else(|| Error::Input("input carries no Sasaki structure".into()))?;
            let dec = decomposition(&s.mla, e0)?;
            let red = kahler_reduction(s, &dec)?;
            let mut bundle = schema::zstd_to_json(&red.data);
            bundle.b = Some(schema::vector_to_json(&red.b));
            bundle.xi = Some(schema::vector_to_json(&red.xi));
            bundle.e0 = Some(schema::vector_to_json(&red.e0));
            print_json(&bundle);
            Ok(true)
        }
        Cmd::Catalog { cmd } => match cmd {
            CatalogCmd::List => {
                for entry in catalog::entries()? {
                    println!("{:<22} {}", entry.id, entry.source);
                }
                Ok(true)
            }
            CatalogCmd::Show { id } => {
                let entry = catalog::find(&id)?;
                let raw: serde_json::Value = serde_json::json!({
                    "id": entry.id,
                    "source": entry.source,
                    "algebra": entry.algebra,
                    "metric": entry.metric,
                    "claims": entry.claims.len(),
                    "samples": entry.parameter_samples()?.len(),
                });
                print_json(&raw);
                Ok(true)
            }
            CatalogCmd::Export { id, dir, params } => {
                let entry = catalog::find(&id)?;
                let bound = parse_params(&params)?;
                let samples = entry.parameter_samples()?;
                let sample = samples
                    .iter()
                    .find(|s| bound.iter().all(|(k, v)| s.get(k) == Some(v)))
                    .ok_or_else(|| Error::Input("no matching parameter sample".into()))?;
                let inst = entry.instantiate(sample)?;
                std::fs::create_dir_all(&dir)
                    .map_err(|e| Error::Input(format!("cannot create {}: {e}", dir.display())))?;
                let mla = inst.mla.as_ref().ok_or_else(|| {
                    Error::Input("entry has no algebra/metric to export".into())
                })?;
                let write = |name: &str, contents: String| -> Result<(), Error> {
                    let path = dir.join(name);
                    std::fs::write(&path, contents)
                        .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
                    println!("wrote {}", path.display());
                    Ok(())
                };
                write(&format!("{id}.salg"), print_algebra(mla.algebra()) + "\n")?;
                write(&format!("{id}.smet"), print_metric(mla.metric()) + "\n")?;
                match &inst.structure {
                    Some(InstStructure::Sasaki(s)) => write(
                        &format!("{id}.json"),
                        serde_json::to_string_pretty(&schema::acm_to_json(s)).unwrap() + "\n",
                    )?,
                    Some(InstStructure::Kahler(s)) => write(
                        &format!("{id}.json"),
                        serde_json::to_string_pretty(&schema::pk_to_json(s)).unwrap() + "\n",
                    )?,
                    None => write(
                        &format!("{id}.json"),
                        serde_json::to_string_pretty(&schema::mla_to_json(mla)).unwrap() + "\n",
                    )?,
                }
                if let Some(d) = &inst.derivation {
                    write(
                        &format!("{id}.derivation.json"),
                        serde_json::to_string_pretty(&schema::matrix_to_json(d)).unwrap() + "\n",
                    )?;
                }
                Ok(true)
            }
        },
        Cmd::VerifyPaper { id, params, json } => {
            let filter = catalog::verify::Filter {
                id,
                params: params
                    .iter()
                    .map(|p| {
                        p.split_once('=')
                            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                            .ok_or_else(|| Error::Input(format!("bad parameter `{p}`")))
                    })
                    .collect::<Result<_, _>>()?,
            };
            let report = catalog::verify::run(&filter)?;
            // human summary: per-entry rollup plus every failure
            let mut current = String::new();
            let mut entry_total = 0;
            let mut entry_pass = 0;
            let flush = |entry: &str, pass: usize, total: usize| {
                if !entry.is_empty() {
                    println!("{entry:<22} {pass}/{total} checks passed");
                }
            };
            for r in &report.records {
                if r.entry != current {
                    flush(&current, entry_pass, entry_total);
                    current = r.entry.clone();
                    entry_total = 0;
                    entry_pass = 0;
                }
                entry_total += 1;
                if r.pass {
                    entry_pass += 1;
                } else {
                    println!("FAIL {} [{}] {}: {}", r.entry, r.params, r.claim, r.detail);
                }
            }
            flush(&current, entry_pass, entry_total);
            println!(
                "total: {} checks, {} passed, {} failed",
                report.total, report.passed, report.failed
            );
            if let Some(path) = json {
                std::fs::write(&path, serde_json::to_string_pretty(&report).unwrap())
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
                println!("report written to {}", path.display());
            }
            Ok(report.all_passed())
        }
    }
}

fn nik_report(
    mla: &MetricLieAlgebra,
    space: &metriclie::nikolayevsky::ConstrainedDerivationSpace,
) -> Result<bool, Error> {
    match nikolayevsky_derivation(mla, space)? {
        NikOutcome::Derivation(res) => {
            print_json(&schema::nik_to_json(&res));
            Ok(true)
        }
        NikOutcome::UnresolvedFamily { particular, kernel } => {
            print_json(&serde_json::json!({
                "error": "no semisimple representative found by the search strategy",
                "particular": schema::matrix_to_json(&particular),
                "kernel": kernel.iter().map(|k| schema::matrix_to_json(k)).collect::<Vec<_>>(),
            }));
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::NoSymmetricPartIdentity => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
