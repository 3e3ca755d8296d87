use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::SimReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Markdown,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format '{other}'")),
        }
    }
}

const COLUMNS: [&str; 5] = ["method", "D1_avg", "D3_avg", "coverage", "avg_length"];

fn fixed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_default()
}

fn cells(report: &SimReport) -> Vec<[String; 5]> {
    report
        .rows
        .iter()
        .map(|r| {
            [
                r.method.clone(),
                fixed(r.d1_avg),
                fixed(r.d3_avg),
                fixed(Some(r.coverage)),
                fixed(Some(r.avg_length)),
            ]
        })
        .collect()
}

/// Renders a report. Tables round to three decimals; JSON keeps full
/// precision and parses back to an equal report.
pub fn emit_report(report: &SimReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(report)
            .map(|s| s + "\n")
            .map_err(|e| Error::InvalidData(e.to_string())),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidData(e.to_string());
            w.write_record(COLUMNS).map_err(io)?;
            for row in cells(report) {
                w.write_record(&row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidData(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::InvalidData(e.to_string()))
        }
        ReportFormat::Markdown => {
            let mut out = format!("| {} |\n|{}\n", COLUMNS.join(" | "), "---|".repeat(5));
            for row in cells(report) {
                out.push_str(&format!("| {} |\n", row.join(" | ")));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::MethodRow;

    fn report(rows: Vec<MethodRow>) -> SimReport {
        SimReport {
            model: 1,
            n: 500,
            replications: 3,
            bootstrap_replications: 10,
            alpha: 0.05,
            master_seed: 42,
            theta0: 2.0,
            rows,
        }
    }

    fn row() -> MethodRow {
        MethodRow {
            method: "robust".into(),
            d1_avg: Some(0.912_345_678_9),
            d3_avg: None,
            coverage: 2.0 / 3.0,
            avg_length: 0.123_456_789,
            successes: 3,
            failures: 0,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = report(vec![]);
        assert_eq!(emit_report(&r, ReportFormat::Csv).unwrap(), "method,D1_avg,D3_avg,coverage,avg_length\n");
        assert_eq!(emit_report(&r, ReportFormat::Markdown).unwrap().lines().count(), 2);
    }

    #[test]
    fn one_row_has_five_columns() {
        let csv = emit_report(&report(vec![row()]), ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], "robust,0.912,,0.667,0.123");
        let md = emit_report(&report(vec![row()]), ReportFormat::Markdown).unwrap();
        assert_eq!(md.lines().nth(2).unwrap(), "| robust | 0.912 |  | 0.667 | 0.123 |");
    }

    #[test]
    fn json_round_trip() {
        let r = report(vec![row()]);
        let back: SimReport = serde_json::from_str(&emit_report(&r, ReportFormat::Json).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
