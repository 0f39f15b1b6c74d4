//! Table emission and comparison against the embedded reference data.

use super::reference;
use super::registry::KnownFacts;
use super::scan::SpectrumRecord;
use crate::error::Result;
use serde_json::json;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Compress a sorted set into "a,b-c" interval notation.
pub fn intervals(set: &BTreeSet<u64>) -> String {
    let mut out = String::new();
    let mut iter = set.iter().copied().peekable();
    while let Some(start) = iter.next() {
        let mut end = start;
        while iter.peek() == Some(&(end + 1)) {
            end = iter.next().unwrap();
        }
        if !out.is_empty() {
            out.push(',');
        }
        if start == end {
            let _ = write!(out, "{start}");
        } else {
            let _ = write!(out, "{start}-{end}");
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<TableFormat> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(crate::error::Error::Parse(format!(
                "unknown table format {other:?} (expected csv, json, or md)"
            ))),
        }
    }
}

/// Render per-k spectrum rows: P(k), achieved intervals, bounds, G(k).
pub fn emit_tables(records: &[SpectrumRecord], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut out =
                String::from("k,p_bound,cyclic_achieved,any_achieved,ec_upper,e_upper,g_bound\n");
            for r in records {
                let _ = writeln!(
                    out,
                    "{},{},\"{}\",\"{}\",{},{},{}",
                    r.k,
                    r.p_bound,
                    intervals(&r.achieved_cyclic),
                    intervals(&r.achieved_any),
                    bound_str(r.ec_upper_bound()),
                    bound_str(r.e_upper_bound()),
                    r.g_bound
                );
            }
            out
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "p_bound": r.p_bound,
                        "cyclic_achieved": r.achieved_cyclic.iter().collect::<Vec<_>>(),
                        "any_achieved": r.achieved_any.iter().collect::<Vec<_>>(),
                        "ec_upper": r.ec_upper_bound().ok(),
                        "e_upper": r.e_upper_bound().ok(),
                        "g_bound": r.g_bound,
                        "scanned_to": r.scanned_to,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("json rows always serialise")
        }
        TableFormat::Markdown => {
            let mut out = String::from(
                "| k | P(k) | cyclic v achieved | any v achieved | E_c <= | E <= | G(k) |\n\
                 |---|------|-------------------|----------------|--------|------|------|\n",
            );
            for r in records {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} |",
                    r.k,
                    r.p_bound,
                    intervals(&r.achieved_cyclic),
                    intervals(&r.achieved_any),
                    bound_str(r.ec_upper_bound()),
                    bound_str(r.e_upper_bound()),
                    r.g_bound
                );
            }
            out
        }
    }
}

fn bound_str(b: Result<u64>) -> String {
    b.map(|v| v.to_string()).unwrap_or_else(|_| "?".into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Discrepancy {
    /// The reference lists v as achieved and this run did not reach it.
    MissingWitness { k: u64, v: u64 },
    /// This run achieved a v that the reference does not list (an
    /// improvement, not a failure).
    ExtraWitness { k: u64, v: u64 },
    /// A witness contradicts a nonexistence fact: a bug, never acceptable.
    RegistryConflict { k: u64, v: u64 },
}

#[derive(Debug, Default)]
pub struct DiffReport {
    pub discrepancies: Vec<Discrepancy>,
    /// (k, our E_c bound, reference E_c bound)
    pub ec_bounds: Vec<(u64, Option<u64>, u64)>,
}

impl DiffReport {
    pub fn registry_conflicts(&self) -> usize {
        self.discrepancies
            .iter()
            .filter(|d| matches!(d, Discrepancy::RegistryConflict { .. }))
            .count()
    }

    pub fn missing(&self) -> usize {
        self.discrepancies
            .iter()
            .filter(|d| matches!(d, Discrepancy::MissingWitness { .. }))
            .count()
    }
}

/// Diff scan records against the embedded reference: full existence sets
/// where the spectrum is settled (k <= 15), the published search results for
/// k = 16, and the E_c bound column elsewhere.
pub fn compare_reference(records: &[SpectrumRecord], registry: &KnownFacts) -> DiffReport {
    let mut report = DiffReport::default();
    for r in records {
        let reference_set: Option<BTreeSet<u64>> = if r.k == 16 {
            let mut set = reference::intervals_to_set(reference::K16_CLASSICAL);
            set.extend(reference::intervals_to_set(reference::K16_SEARCH_RESULTS));
            Some(set)
        } else {
            reference::cyclic_reference_set(r.k)
        };
        if let Some(reference_set) = reference_set {
            for &v in reference_set.iter() {
                if v <= r.scanned_to && !r.achieved_cyclic.contains(&v) {
                    report
                        .discrepancies
                        .push(Discrepancy::MissingWitness { k: r.k, v });
                }
            }
            for &v in &r.achieved_cyclic {
                if registry.no_cyclic(v, r.k) {
                    report
                        .discrepancies
                        .push(Discrepancy::RegistryConflict { k: r.k, v });
                } else if !reference_set.contains(&v) {
                    report
                        .discrepancies
                        .push(Discrepancy::ExtraWitness { k: r.k, v });
                }
            }
        } else {
            for &v in &r.achieved_cyclic {
                if registry.no_cyclic(v, r.k) {
                    report
                        .discrepancies
                        .push(Discrepancy::RegistryConflict { k: r.k, v });
                }
            }
        }
        if let Some(ec_ref) = reference::ec_upper_reference(r.k) {
            report.ec_bounds.push((r.k, r.ec_upper_bound().ok(), ec_ref));
        }
    }
    report
}
