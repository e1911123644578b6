//! Verification reports: per-sample records and per-condition residual summaries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::sampling::SkippedPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub id: String,
    pub description: String,
    pub tolerance: f64,
    /// Largest scaled residual; compared against `tolerance`.
    pub max_residual: f64,
    /// Largest unscaled residual.
    pub max_abs_residual: f64,
    pub passed: bool,
    /// Reported only; does not enter the verdict.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: BTreeMap<String, f64>,
    /// Scaled residual per condition id.
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub spec: String,
    pub conditions: Vec<ConditionReport>,
    pub records: Vec<SampleRecord>,
    pub skipped: Vec<SkippedPoint>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn condition(&self, id: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.id == id)
    }

    /// Passed status of the named condition; panics if absent.
    pub fn condition_passed(&self, id: &str) -> bool {
        self.condition(id).unwrap_or_else(|| panic!("no condition `{id}` in `{}` report", self.check)).passed
    }

    pub fn max_residual(&self, id: &str) -> f64 {
        self.condition(id).map_or(f64::NAN, |c| c.max_residual)
    }

    /// Largest recorded value of `key` over all records (NaN if never recorded).
    pub fn max_value(&self, key: &str) -> f64 {
        self.records
            .iter()
            .filter_map(|r| r.values.get(key).copied())
            .fold(f64::NAN, |acc, v| if acc.is_nan() || v > acc { v } else { acc })
    }

    pub fn min_value(&self, key: &str) -> f64 {
        self.records
            .iter()
            .filter_map(|r| r.values.get(key).copied())
            .fold(f64::NAN, |acc, v| if acc.is_nan() || v < acc { v } else { acc })
    }
}

/// Declared condition of a check.
#[derive(Debug, Clone)]
pub struct Condition {
    pub id: &'static str,
    pub description: &'static str,
    pub tolerance: f64,
    pub informational: bool,
}

impl Condition {
    pub fn new(id: &'static str, description: &'static str, tolerance: f64) -> Self {
        Condition { id, description, tolerance, informational: false }
    }

    pub fn info(id: &'static str, description: &'static str, tolerance: f64) -> Self {
        Condition { id, description, tolerance, informational: true }
    }
}

/// Residual of one condition at one sample: scaled and unscaled maxima.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Residual {
    pub scaled: f64,
    pub abs: f64,
}

impl Residual {
    /// `abs / scale`, with NaN mapped to infinity so it always fails.
    pub fn of(abs: f64, scale: f64) -> Self {
        let abs = abs.abs();
        let scaled = abs / scale;
        if scaled.is_nan() {
            Residual { scaled: f64::INFINITY, abs: f64::INFINITY }
        } else {
            Residual { scaled, abs }
        }
    }

    pub fn absolute(abs: f64) -> Self {
        Residual::of(abs, 1.0)
    }

    pub fn worst(self, other: Residual) -> Residual {
        Residual { scaled: self.scaled.max(other.scaled), abs: self.abs.max(other.abs) }
    }
}

/// Fold per-sample residuals into a report; records stay in sample order.
pub fn assemble(
    check: &str,
    spec: &str,
    conditions: &[Condition],
    outcomes: Vec<(SampleRecord, Vec<Residual>)>,
    skipped: Vec<SkippedPoint>,
) -> VerificationReport {
    let mut worst = vec![Residual::default(); conditions.len()];
    let mut records = Vec::with_capacity(outcomes.len());
    for (mut record, residuals) in outcomes {
        for (k, (c, r)) in conditions.iter().zip(&residuals).enumerate() {
            worst[k] = worst[k].worst(*r);
            record.residuals.insert(c.id.to_string(), r.scaled);
        }
        records.push(record);
    }
    let conditions: Vec<ConditionReport> = conditions
        .iter()
        .zip(worst)
        .map(|(c, w)| ConditionReport {
            id: c.id.to_string(),
            description: c.description.to_string(),
            tolerance: c.tolerance,
            max_residual: w.scaled,
            max_abs_residual: w.abs,
            passed: w.scaled <= c.tolerance,
            informational: c.informational,
        })
        .collect();
    let passed = conditions.iter().filter(|c| !c.informational).all(|c| c.passed);
    VerificationReport { check: check.to_string(), spec: spec.to_string(), conditions, records, skipped, passed }
}
