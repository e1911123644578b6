//! Report files: a summary block plus one record per evaluated sample.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use randers_core::report::{ConditionReport, SampleRecord, VerificationReport};
use randers_core::sampling::SkippedPoint;
use randers_core::verify::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub check: String,
    pub spec: String,
    pub seed: u64,
    pub requested_samples: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub tolerances: Tolerances,
    pub conditions: Vec<ConditionReport>,
    /// `[min, max]` of every recorded value over the records.
    pub value_ranges: BTreeMap<String, [f64; 2]>,
    pub verdict: String,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub summary: Summary,
    pub records: Vec<SampleRecord>,
    pub skipped: Vec<SkippedPoint>,
}

impl ReportFile {
    pub fn new(report: VerificationReport, seed: u64, requested: usize, tol: Tolerances, runtime_ms: u128) -> Self {
        let mut value_ranges: BTreeMap<String, [f64; 2]> = BTreeMap::new();
        for r in &report.records {
            for (k, &v) in &r.values {
                value_ranges
                    .entry(k.clone())
                    .and_modify(|m| {
                        m[0] = m[0].min(v);
                        m[1] = m[1].max(v);
                    })
                    .or_insert([v, v]);
            }
        }
        ReportFile {
            summary: Summary {
                check: report.check,
                spec: report.spec,
                seed,
                requested_samples: requested,
                evaluated: report.records.len(),
                skipped: report.skipped.len(),
                tolerances: tol,
                conditions: report.conditions,
                value_ranges,
                verdict: if report.passed { "pass" } else { "fail" }.into(),
                runtime_ms,
            },
            records: report.records,
            skipped: report.skipped,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.verdict == "pass"
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    /// One flat row per record: index, x, y, values, then residuals.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        let n = self.records.first().map_or(0, |r| r.x.len());
        let value_keys: Vec<&String> = self.summary.value_ranges.keys().collect();
        let cond_ids: Vec<&String> = self.summary.conditions.iter().map(|c| &c.id).collect();
        let mut header = vec!["index".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=n).map(|i| format!("y{i}")));
        header.extend(value_keys.iter().map(|k| k.to_string()));
        header.extend(cond_ids.iter().map(|c| format!("residual_{c}")));
        w.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![r.index.to_string()];
            row.extend(r.x.iter().chain(&r.y).map(|v| format!("{v:?}")));
            row.extend(value_keys.iter().map(|k| r.values.get(*k).map_or(String::new(), |v| format!("{v:?}"))));
            row.extend(cond_ids.iter().map(|c| r.residuals.get(*c).map_or(String::new(), |v| format!("{v:?}"))));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn print_summary(&self, out: &mut impl Write) -> std::io::Result<()> {
        let s = &self.summary;
        writeln!(out, "{} on {} (seed {}, {} evaluated, {} skipped)", s.check, s.spec, s.seed, s.evaluated, s.skipped)?;
        for c in &s.conditions {
            let status = match (c.informational, c.passed) {
                (true, _) => "info",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            writeln!(
                out,
                "  [{status}] {:<24} max residual {:.3e} (abs {:.3e}, tol {:.1e})  {}",
                c.id, c.max_residual, c.max_abs_residual, c.tolerance, c.description
            )?;
        }
        if let Some([lo, hi]) = s.value_ranges.get("c") {
            writeln!(out, "  c in [{}, {}]", sig(*lo), sig(*hi))?;
        }
        writeln!(out, "verdict: {}", s.verdict)
    }
}

/// `v` with 15 significant digits.
pub fn sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        format!("{:.*}", (14 - mag) as usize, v)
    } else {
        format!("{v:.14e}")
    }
}
