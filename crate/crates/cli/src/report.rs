//! Machine-readable run reports.
//!
//! Every command produces one [`ReportDocument`]: tool identity, the resolved
//! config, per-item results, and a pass/fail summary.  With the same resolved
//! config the JSON bytes are identical run to run; wall-clock timings are
//! attached only on request since they would break that.

use serde::Serialize;

use purity_core::channels::ValidityReport;
use purity_core::lemma::{CsIdentityReport, FactorizedOperator, TraceBoundReport};
use purity_core::purity::{MultiplicativityReport, PurityReport};

use crate::config::RunConfig;

/// Name and version of the producing binary.
#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "purity",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Pass/fail counts over the report's items.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Summary {
    pub items: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn new(items: usize, passed: usize) -> Self {
        Summary {
            items,
            passed,
            failed: items - passed,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Wall-clock data, attached only with `--timings`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Timings {
    pub total_ms: u128,
}

/// One `nu` result: the optimizer report plus a flag marking values whose
/// closed form is only conjectured (products of depolarizing factors at
/// non-natural finite orders).
#[derive(Clone, Debug, Serialize)]
pub struct NuEntry {
    #[serde(flatten)]
    pub report: PurityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjectural: Option<bool>,
}

/// One multiplicativity comparison, with a caveat attached to candidates.
#[derive(Clone, Debug, Serialize)]
pub struct MultEntry {
    #[serde(flatten)]
    pub report: MultiplicativityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

/// Caveat attached to every violation candidate.
pub const CANDIDATE_NOTE: &str = "unconfirmed - optimizer lower bounds only";

/// A failing instance with everything needed to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaFailure<R: Serialize> {
    pub index: u32,
    pub operators: Vec<FactorizedOperator>,
    pub report: R,
}

/// Outcome of one seeded batch.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaBatch<R: Serialize> {
    pub instances: u32,
    pub passed: u32,
    pub failures: Vec<LemmaFailure<R>>,
}

/// Command-specific result payloads.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Results {
    Nu {
        entries: Vec<NuEntry>,
    },
    Mult {
        checks: Vec<MultEntry>,
    },
    Lemma {
        trace_bound: LemmaBatch<TraceBoundReport>,
        expansion: LemmaBatch<CsIdentityReport>,
    },
    Search {
        samples: usize,
        checks: Vec<MultEntry>,
        /// Indices into `checks` that are unconfirmed violation candidates.
        candidates: Vec<usize>,
    },
    Validate {
        reports: Vec<ValidityReport>,
    },
}

/// The complete report for one run.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub command: &'static str,
    pub config: RunConfig,
    pub results: Results,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl ReportDocument {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String, String> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| e.to_string())?;
        text.push('\n');
        Ok(text)
    }

    /// CSV with one row per (channel, p); only `nu` results have a natural
    /// sweep shape.
    pub fn to_csv(&self) -> Result<String, String> {
        let Results::Nu { entries } = &self.results else {
            return Err("csv output is only available for the nu command".into());
        };
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "channel",
                "p",
                "nu_p",
                "closed_form",
                "conjectural",
                "converged",
                "restarts",
            ])
            .map_err(|e| e.to_string())?;
        for entry in entries {
            let r = &entry.report;
            writer
                .write_record([
                    r.channel.clone(),
                    r.p.to_string(),
                    format_float(r.nu_p),
                    r.closed_form.map(format_float).unwrap_or_default(),
                    entry
                        .conjectural
                        .map(|c| c.to_string())
                        .unwrap_or_default(),
                    r.converged.to_string(),
                    r.restarts.to_string(),
                ])
                .map_err(|e| e.to_string())?;
        }
        let bytes = writer.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }
}

/// Shortest-roundtrip float formatting, matching the JSON output.
fn format_float(v: f64) -> String {
    let mut buf = ryu_format(v);
    // Trim a trailing ".0" for integral values so CSV cells read naturally.
    if buf.ends_with(".0") {
        buf.truncate(buf.len() - 2);
    }
    buf
}

fn ryu_format(v: f64) -> String {
    // serde_json's float formatting is shortest-roundtrip; reuse it so the
    // CSV and JSON views of the same number agree byte for byte.
    serde_json::to_string(&v).expect("finite float serializes")
}
