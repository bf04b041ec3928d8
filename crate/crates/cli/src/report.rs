//! Output shaping: JSON documents and aligned plain-text tables.

use pauc_core::inference::MctResult;
use pauc_core::simulation::{CalibratedEffect, ExperimentReport};
use serde::Serialize;

use crate::roc::RocCurve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    Json,
    Table,
}

#[derive(Serialize)]
pub struct TestReport {
    pub command: &'static str,
    pub markers: Vec<String>,
    pub delta: f64,
    pub bootstrap_reps: usize,
    pub seed: u64,
    pub results: Vec<TrimTestResult>,
    /// Present in grid mode: global p-values Holm-adjusted across windows.
    pub grid: Option<GridSummary>,
}

#[derive(Serialize)]
pub struct TrimTestResult {
    pub p: f64,
    pub q: f64,
    pub mct: MctResult,
}

#[derive(Serialize)]
pub struct GridSummary {
    pub raw_global_p: Vec<f64>,
    pub holm_adjusted_p: Vec<f64>,
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub preset: Option<String>,
    pub seed: u64,
    pub group_size: usize,
    pub delta: f64,
    pub bootstrap_reps: usize,
    pub sim_runs: usize,
    pub labels: Vec<String>,
    pub rows: Vec<SimulateRow>,
}

#[derive(Serialize)]
pub struct SimulateRow {
    pub p: f64,
    pub q: f64,
    pub effect: Option<CalibratedEffect>,
    pub report: ExperimentReport,
}

#[derive(Serialize)]
pub struct RocReport {
    pub command: &'static str,
    pub markers: Vec<RocCurve>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn test_table(report: &TestReport) -> String {
    let mut out = String::new();
    for r in &report.results {
        let m = &r.mct;
        out.push_str(&format!(
            "window (p, q) = ({:.2}, {:.2})   critical value {:.4}   global p {:.4}\n",
            r.p, r.q, m.critical_value, m.global_p
        ));
        out.push_str(&format!(
            "{:<16} {:>9} {:>10} {:>8} {:>6} {:>10} {:>10}\n",
            "contrast", "estimate", "statistic", "adj. p", "reject", "ci low", "ci high"
        ));
        for i in 0..m.labels.len() {
            out.push_str(&format!(
                "{:<16} {:>9.4} {:>10.4} {:>8.4} {:>6} {:>10.4} {:>10.4}\n",
                m.labels[i],
                m.estimates[i],
                m.statistics[i],
                m.adjusted_p[i],
                if m.decisions[i] { "yes" } else { "no" },
                m.intervals[i].0,
                m.intervals[i].1,
            ));
        }
        for w in &m.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push('\n');
    }
    if let Some(grid) = &report.grid {
        out.push_str(&format!("{:<16} {:>9} {:>9}\n", "window", "raw p", "holm p"));
        for (i, r) in report.results.iter().enumerate() {
            let window = format!("({:.2}, {:.2})", r.p, r.q);
            out.push_str(&format!(
                "{:<16} {:>9.4} {:>9.4}\n",
                window, grid.raw_global_p[i], grid.holm_adjusted_p[i]
            ));
        }
    }
    out
}

pub fn simulate_table(report: &SimulateReport) -> String {
    let mut out = String::new();
    for row in &report.rows {
        let r = &row.report;
        out.push_str(&format!(
            "window ({:.2}, {:.2})   runs {}   rejection rate {:.4}   mc se {:.4}   wall {:.1}s\n",
            row.p,
            row.q,
            r.runs,
            r.rejection_rate,
            r.mc_standard_error,
            r.wall_time.as_secs_f64()
        ));
        if let Some(e) = &row.effect {
            out.push_str(&format!("  calibrated mu {:.6}   lambda {:.4}\n", e.mu, e.lambda));
        }
        out.push_str("  per-hypothesis rates:");
        for (label, rate) in report.labels.iter().zip(&r.per_hypothesis_rates) {
            out.push_str(&format!("  {label} {rate:.4}"));
        }
        out.push_str("\n\n");
    }
    out
}

pub fn roc_table(report: &RocReport) -> String {
    let mut out = String::new();
    for c in &report.markers {
        out.push_str(&format!("marker {}   auc {:.4}", c.marker, c.auc));
        if let Some(w) = &c.window {
            let lower =
                w.lower.map_or("-inf".to_string(), |v| format!("{v:.6}"));
            out.push_str(&format!(
                "   window p={:.2} q={:.2} cuts [{lower}, {:.6}] segment ({:.4}, {:.4}) -> ({:.4}, {:.4})",
                w.p, w.q, w.upper, w.segment[0].0, w.segment[0].1, w.segment[1].0, w.segment[1].1
            ));
        }
        out.push('\n');
        out.push_str(&format!("{:>8} {:>8}\n", "fpr", "tpr"));
        for &(fpr, tpr) in &c.vertices {
            out.push_str(&format!("{fpr:>8.4} {tpr:>8.4}\n"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_pure_ascii() {
        let report = RocReport {
            command: "roc",
            markers: vec![RocCurve {
                marker: "m1".into(),
                auc: 0.75,
                vertices: vec![(0.0, 0.0), (0.5, 1.0), (1.0, 1.0)],
                window: None,
            }],
        };
        let text = roc_table(&report);
        assert!(text.is_ascii());
        assert!(text.contains("marker m1"));
        let json = to_json(&report);
        assert!(json.contains("\"command\": \"roc\""));
    }
}
