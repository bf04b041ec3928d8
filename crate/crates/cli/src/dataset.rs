//! CSV ingestion for diagnostic trial data.
//!
//! Layout: a header row, a subject id in the first column, a `status`
//! column holding 0 (non-diseased) or 1 (diseased), and one column per
//! marker. UTF-8, `.` as the decimal separator, no missing values.

use std::io::Read;
use std::path::Path;

use pauc_core::empdist::PairedSample;
use pauc_core::estimator::DiagnosticSample;

use crate::error::CliError;

#[derive(Debug)]
pub struct TrialDataset {
    pub marker_names: Vec<String>,
    pub sample: DiagnosticSample,
}

pub fn read_csv(path: &Path) -> Result<TrialDataset, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    from_reader(file)
}

pub fn from_reader<R: Read>(reader: R) -> Result<TrialDataset, CliError> {
    let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| CliError::Data(format!("header: {e}")))?
        .clone();
    if headers.len() < 3 {
        return Err(CliError::Data(
            "need at least an id column, a status column, and one marker column".into(),
        ));
    }
    if headers[0].trim().eq_ignore_ascii_case("status") {
        return Err(CliError::Data("first column must be the subject id, not status".into()));
    }
    let status_col = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("status"))
        .ok_or_else(|| CliError::Data("no status column in header".into()))?;
    let marker_cols: Vec<usize> =
        (1..headers.len()).filter(|&i| i != status_col).collect();
    if marker_cols.is_empty() {
        return Err(CliError::Data("no marker columns in header".into()));
    }
    let marker_names: Vec<String> =
        marker_cols.iter().map(|&i| headers[i].trim().to_string()).collect();

    let mut groups =
        [vec![Vec::new(); marker_cols.len()], vec![Vec::new(); marker_cols.len()]];
    for record in csv.records() {
        let record = record.map_err(|e| CliError::Data(format!("{e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(CliError::Data(format!(
                "line {line}: {} fields, header has {}",
                record.len(),
                headers.len()
            )));
        }
        if record[0].trim().is_empty() {
            return Err(CliError::Data(format!("line {line}: empty subject id")));
        }
        let group = match record[status_col].trim() {
            "0" => 0usize,
            "1" => 1,
            other => {
                return Err(CliError::Data(format!(
                    "line {line}: status must be 0 or 1, got `{other}`"
                )))
            }
        };
        for (k, &col) in marker_cols.iter().enumerate() {
            let field = record[col].trim();
            if field.is_empty() {
                return Err(CliError::Data(format!(
                    "line {line}, column `{}`: missing value",
                    marker_names[k]
                )));
            }
            let value: f64 = field.parse().map_err(|_| {
                CliError::Data(format!(
                    "line {line}, column `{}`: `{field}` is not a number",
                    marker_names[k]
                ))
            })?;
            if !value.is_finite() {
                return Err(CliError::Data(format!(
                    "line {line}, column `{}`: `{field}` is not finite",
                    marker_names[k]
                )));
            }
            groups[group][k].push(value);
        }
    }
    let [nondiseased, diseased] = groups;
    for (name, count) in [("non-diseased", nondiseased[0].len()), ("diseased", diseased[0].len())]
    {
        if count < 2 {
            return Err(CliError::Data(format!(
                "need at least 2 {name} subjects, got {count}"
            )));
        }
    }
    let sample = DiagnosticSample::new(
        PairedSample::new(nondiseased).map_err(|e| CliError::Data(e.to_string()))?,
        PairedSample::new(diseased).map_err(|e| CliError::Data(e.to_string()))?,
    )
    .map_err(|e| CliError::Data(e.to_string()))?;
    Ok(TrialDataset { marker_names, sample })
}

/// Writes a sample back out in the ingestion layout: non-diseased rows
/// first, sequential ids. Re-reading gives identical test results under
/// identical seeds.
pub fn write_csv(
    sample: &DiagnosticSample,
    marker_names: &[String],
    path: &Path,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    let mut header = vec!["id".to_string(), "status".to_string()];
    header.extend_from_slice(marker_names);
    w.write_record(&header).map_err(|e| CliError::Data(e.to_string()))?;
    let mut subject = 0usize;
    for (group, status) in [(sample.nondiseased(), "0"), (sample.diseased(), "1")] {
        for r in 0..group.len() {
            subject += 1;
            let mut record = vec![format!("s{subject}"), status.to_string()];
            for k in 0..group.markers() {
                record.push(format!("{:?}", group.column(k).unwrap().values()[r]));
            }
            w.write_record(&record).map_err(|e| CliError::Data(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(())
}
