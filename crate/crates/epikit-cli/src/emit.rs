//! Result rows and CSV/JSON emission.
//!
//! The CSV schema is fixed: `scenario,nu,quantity,lhs,rhs,slack,tol,status`
//! with numbers rendered at 12 significant digits, so re-running a scenario
//! with the same config yields a byte-identical file.

use std::fs;
use std::io::Write;
use std::path::Path;

use epikit::bounds::{BoundReport, BoundStatus};
use epikit::extreal::ExtReal;
use serde::Serialize;

use crate::config::OutputFormat;

pub const CSV_HEADER: &str = "scenario,nu,quantity,lhs,rhs,slack,tol,status";

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub scenario: String,
    pub nu: Option<u32>,
    pub quantity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub status: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusDetail {
    pub quantity: String,
    pub nu: Option<u32>,
    pub rho: f64,
    pub rho_bar: Option<f64>,
    pub rho_prime: Option<f64>,
    pub rho_hat: Option<f64>,
    pub admissible: bool,
    pub notes: Vec<String>,
    pub ingredients: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepResult {
    pub scenario: String,
    pub rows: Vec<Row>,
    pub radius_detail: Vec<RadiusDetail>,
}

impl SweepResult {
    pub fn new(scenario: &str) -> SweepResult {
        SweepResult {
            scenario: scenario.to_string(),
            ..SweepResult::default()
        }
    }

    pub fn push_bound(&mut self, nu: Option<u32>, report: &BoundReport) {
        self.push_bound_as(nu, report.theorem.as_str(), report);
    }

    /// Records a bound report under an explicit quantity label (scenarios
    /// that evaluate one theorem in several configurations disambiguate
    /// this way).
    pub fn push_bound_as(&mut self, nu: Option<u32>, quantity: &str, report: &BoundReport) {
        self.rows.push(Row {
            scenario: self.scenario.clone(),
            nu,
            quantity: quantity.to_string(),
            lhs: report.lhs.to_f64(),
            rhs: report.rhs.to_f64(),
            slack: report.slack(),
            tol: report.tol,
            status: report.status.as_str().to_string(),
        });
        self.radius_detail.push(RadiusDetail {
            quantity: quantity.to_string(),
            nu,
            rho: report.radii.rho,
            rho_bar: report.radii.rho_bar,
            rho_prime: report.radii.rho_prime,
            rho_hat: report.radii.rho_hat,
            admissible: report.radii.admissible,
            notes: report.radii.notes.clone(),
            ingredients: report.ingredients.clone(),
        });
        if let BoundStatus::Inapplicable(reason) = &report.status {
            if let Some(detail) = self.radius_detail.last_mut() {
                detail.notes.push(format!("inapplicable: {reason}"));
            }
        }
    }

    /// Records a check of the form `lhs <= rhs + tol`.
    pub fn push_check(
        &mut self,
        nu: Option<u32>,
        quantity: &str,
        lhs: ExtReal,
        rhs: ExtReal,
        tol: f64,
    ) {
        let pass = lhs <= rhs + ExtReal::new(tol);
        self.rows.push(Row {
            scenario: self.scenario.clone(),
            nu,
            quantity: quantity.to_string(),
            lhs: lhs.to_f64(),
            rhs: rhs.to_f64(),
            slack: rhs.to_f64() + tol - lhs.to_f64(),
            tol,
            status: if pass { "PASS" } else { "FAIL" }.to_string(),
        });
    }

    /// Records a check with an externally decided verdict.
    pub fn push_verdict(
        &mut self,
        nu: Option<u32>,
        quantity: &str,
        lhs: f64,
        rhs: f64,
        tol: f64,
        pass: bool,
    ) {
        self.rows.push(Row {
            scenario: self.scenario.clone(),
            nu,
            quantity: quantity.to_string(),
            lhs,
            rhs,
            slack: rhs + tol - lhs,
            tol,
            status: if pass { "PASS" } else { "FAIL" }.to_string(),
        });
    }

    pub fn push_error(&mut self, nu: Option<u32>, quantity: &str, message: &str) {
        self.rows.push(Row {
            scenario: self.scenario.clone(),
            nu,
            quantity: format!("{quantity}[{message}]"),
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            tol: 0.0,
            status: "ERROR".to_string(),
        });
    }

    pub fn merge(&mut self, other: SweepResult) {
        self.rows.extend(other.rows);
        self.radius_detail.extend(other.radius_detail);
    }

    pub fn has_fail(&self) -> bool {
        self.rows.iter().any(|r| r.status == "FAIL")
    }

    pub fn has_error(&self) -> bool {
        self.rows.iter().any(|r| r.status == "ERROR")
    }

    /// Process exit code: 0 clean, 1 any bound failure, 3 numerical
    /// degeneracy (error rows). Config errors exit 2 before a result
    /// exists.
    pub fn exit_code(&self) -> i32 {
        if self.has_error() {
            3
        } else if self.has_fail() {
            1
        } else {
            0
        }
    }
}

/// 12 significant digits; infinities and NaN spelled out.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.11e}")
    }
}

pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        let nu = row.nu.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.scenario,
            nu,
            row.quantity,
            fmt_sig(row.lhs),
            fmt_sig(row.rhs),
            fmt_sig(row.slack),
            fmt_sig(row.tol),
            row.status
        ));
    }
    out
}

pub fn to_json(result: &SweepResult) -> serde_json::Value {
    serde_json::json!({
        "scenario": result.scenario,
        "rows": result.rows.iter().map(|row| serde_json::json!({
            "scenario": row.scenario,
            "nu": row.nu,
            "quantity": row.quantity,
            "lhs": fmt_sig(row.lhs),
            "rhs": fmt_sig(row.rhs),
            "slack": fmt_sig(row.slack),
            "tol": fmt_sig(row.tol),
            "status": row.status,
        })).collect::<Vec<_>>(),
        "radius_detail": result.radius_detail.iter().map(|d| serde_json::json!({
            "quantity": d.quantity,
            "nu": d.nu,
            "rho": d.rho,
            "rho_bar": d.rho_bar,
            "rho_prime": d.rho_prime,
            "rho_hat": d.rho_hat,
            "admissible": d.admissible,
            "notes": d.notes,
            "ingredients": d.ingredients,
        })).collect::<Vec<_>>(),
        "exit": result.exit_code(),
    })
}

pub fn write_output(
    result: &SweepResult,
    format: OutputFormat,
    path: &Path,
) -> std::io::Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv(result),
        OutputFormat::Json => serde_json::to_string_pretty(&to_json(result)).expect("valid json"),
    };
    let mut file = fs::File::create(path)?;
    file.write_all(text.as_bytes())
}
