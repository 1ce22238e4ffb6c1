//! Runs the catalog claims and assembles a deterministic report.

use super::claims::{evaluate, ClaimRecord};
use super::EntryJson;
use crate::error::Error;
use crate::notation::expr::{eval_expr, Params};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub records: Vec<ClaimRecord>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// One human-readable line per claim record.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .records
            .iter()
            .map(|r| {
                let mark = if r.pass { "ok  " } else { "FAIL" };
                let detail = if r.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", r.detail)
                };
                format!("[{mark}] {} [{}] {}{detail}", r.entry, r.params, r.claim)
            })
            .collect();
        lines.push(format!("{} checks, {} passed, {} failed", self.total, self.passed, self.failed));
        lines
    }
}

/// Filter for a verification run: restrict to an entry id and/or pin
/// parameter values.
#[derive(Debug, Clone, Default)]
pub struct Filter {
    pub id: Option<String>,
    pub params: Vec<(String, String)>,
}

fn sample_matches(filter: &Filter, sample: &Params) -> Result<bool, Error> {
    for (k, v) in &filter.params {
        let want = eval_expr(v, &Params::new())?;
        if sample.get(k) != Some(&want) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs every claim of every matching entry over its parameter samples.
pub fn run(filter: &Filter) -> Result<Report, Error> {
    let mut records = Vec::new();
    for entry in super::entries()? {
        if let Some(id) = &filter.id {
            if entry.id != *id {
                continue;
            }
        }
        records.extend(run_entry(&entry, filter)?);
    }
    if records.is_empty() {
        return Err(Error::Input("no catalog entries matched the filter".into()));
    }
    let passed = records.iter().filter(|r| r.pass).count();
    Ok(Report {
        schema: "metriclie/report/1".into(),
        total: records.len(),
        passed,
        failed: records.len() - passed,
        records,
    })
}

fn run_entry(entry: &EntryJson, filter: &Filter) -> Result<Vec<ClaimRecord>, Error> {
    let mut records = Vec::new();
    let samples = entry.parameter_samples()?;
    for (i, sample) in samples.iter().enumerate() {
        if !sample_matches(filter, sample)? {
            continue;
        }
        let inst = match entry.instantiate(sample) {
            Ok(inst) => inst,
            Err(e) => {
                records.push(ClaimRecord {
                    entry: entry.id.clone(),
                    params: super::claims::params_key_public(sample),
                    claim: "instantiate".into(),
                    origin: "basic".into(),
                    pass: false,
                    detail: format!("error: {e}"),
                });
                continue;
            }
        };
        for claim in &entry.claims {
            if claim.once && i != 0 {
                continue;
            }
            records.push(evaluate(&inst, claim));
        }
    }
    Ok(records)
}
