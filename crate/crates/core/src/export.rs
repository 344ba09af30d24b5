//! Deterministic CSV and JSON emission for reports and figure data.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! re-run with identical inputs produces byte-identical files. Every CSV
//! starts with a header row naming the columns and their units.

use std::fmt::Write as _;

use serde::Serialize;

use crate::checks::{EigenSeparationReport, GReport};
use crate::escauriaza::ConeBoundReport;
use crate::ode::ShootingResult;
use crate::pseudo::PseudoconvexityReport;

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string_pretty(value).map(|mut s| {
        s.push('\n');
        s
    })
}

/// Grid values of a cross-section report as "psi_rad,eq6_value".
pub fn report_csv(report: &PseudoconvexityReport) -> String {
    let mut out = String::from("psi_rad,eq6_value\n");
    for g in &report.values {
        let _ = writeln!(out, "{},{}", g.psi, g.value);
    }
    out
}

/// Budget cross-section as "psi_rad,g_value".
pub fn g_csv(report: &GReport) -> String {
    let mut out = String::from("psi_rad,g_value\n");
    for g in &report.values {
        let _ = writeln!(out, "{},{}", g.psi, g.value);
    }
    out
}

/// Eigenvalue curves as "psi_rad,lambda_min,lambda_max".
pub fn eigen_csv(report: &EigenSeparationReport) -> String {
    let mut out = String::from("psi_rad,lambda_min,lambda_max\n");
    for s in &report.values {
        let _ = writeln!(out, "{},{},{}", s.psi, s.lambda_min, s.lambda_max);
    }
    out
}

/// Trajectory knots as "psi_rad,f,fp,fpp".
pub fn trajectory_csv(result: &ShootingResult) -> String {
    let mut out = String::from("psi_rad,f,fp,fpp\n");
    for t in &result.trajectory {
        let _ = writeln!(out, "{},{},{},{}", t.psi, t.f, t.fp, t.fpp);
    }
    out
}

/// Cone scan rows as "r,psi_rad,abs_v".
pub fn cone_scan_csv(report: &ConeBoundReport) -> String {
    let mut out = String::from("r,psi_rad,abs_v\n");
    for row in &report.rows {
        let _ = writeln!(out, "{},{},{}", row.r, row.psi, row.abs_v);
    }
    out
}

/// Optimization trace as "iter,margin,params...".
pub fn trace_csv(result: &crate::search::OptimizeResult) -> String {
    let n = result.params.len();
    let mut out = String::from("iter,margin");
    for k in 0..n {
        let _ = write!(out, ",p{k}");
    }
    out.push('\n');
    for row in &result.trace {
        let _ = write!(out, "{},{}", row.iter, row.margin);
        for p in &row.params {
            let _ = write!(out, ",{p}");
        }
        out.push('\n');
    }
    out
}
