//! Two-column (time, value) CSV ingestion and emission.

use std::fs;
use std::path::Path;

use kmr_core::FunctionalDataset;

use crate::CliError;

/// Metadata gathered while parsing a series file.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesInfo {
    pub rows: usize,
    pub span: (f64, f64),
    pub had_header: bool,
}

/// Load a two-column CSV: `time,value` per row, optional single header row
/// (auto-detected as the first row with a non-numeric cell), `#` comment
/// lines ignored, rows sorted by time, duplicate times rejected.
pub fn load_csv(path: &Path) -> Result<FunctionalDataset, CliError> {
    Ok(load_csv_info(path)?.0)
}

pub fn load_csv_info(path: &Path) -> Result<(FunctionalDataset, SeriesInfo), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<(f64, f64)> = Vec::new();
    let mut had_header = false;
    let mut seen_data = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 2 {
            return Err(CliError::Data(format!(
                "{}: line {}: expected 2 columns, found {}",
                path.display(),
                lineno + 1,
                cells.len()
            )));
        }
        let parsed: Vec<Result<f64, _>> = cells.iter().map(|c| c.parse::<f64>()).collect();
        match (&parsed[0], &parsed[1]) {
            (Ok(t), Ok(y)) => {
                rows.push((*t, *y));
                seen_data = true;
            }
            _ if !seen_data && !had_header => had_header = true,
            _ => {
                let col = if parsed[0].is_err() { 1 } else { 2 };
                return Err(CliError::Data(format!(
                    "{}: line {}: column {col}: not a number: {:?}",
                    path.display(),
                    lineno + 1,
                    cells[col - 1]
                )));
            }
        }
    }
    if rows.len() < 2 {
        return Err(CliError::Data(format!(
            "{}: needs at least 2 data rows, found {}",
            path.display(),
            rows.len()
        )));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in rows.windows(2) {
        if pair[1].0 == pair[0].0 {
            return Err(CliError::Data(format!(
                "{}: duplicate time {}",
                path.display(),
                pair[0].0
            )));
        }
    }
    let (times, values): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let ds = FunctionalDataset::new(times, values)?;
    let info = SeriesInfo {
        rows: ds.len(),
        span: ds.time_span(),
        had_header,
    };
    Ok((ds, info))
}

/// Write `(time, value)` rows with a header, shortest round-trip decimals.
pub fn write_series_csv(path: &Path, times: &[f64], values: &[f64]) -> Result<(), CliError> {
    let mut out = String::from("time,value\n");
    for (t, y) in times.iter().zip(values) {
        out.push_str(&format!("{t},{y}\n"));
    }
    fs::write(path, out).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Write arbitrary named columns, shortest round-trip decimals.
pub fn write_columns_csv(path: &Path, header: &[&str], cols: &[&[f64]]) -> Result<(), CliError> {
    assert_eq!(header.len(), cols.len());
    let n = cols.first().map_or(0, |c| c.len());
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = cols.iter().map(|c| format!("{}", c[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
