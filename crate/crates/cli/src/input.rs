//! Dataset ingestion from CSV files or the embedded study data.

use std::io::Read;

use tgiw::study::{failure_times, DATASET_TAG};
use tgiw::Dataset;

use crate::error::CliError;

/// Resolve `--data`: the embedded tag, `-` for stdin, or a file path.
pub fn load_dataset(source: &str, column: Option<&str>) -> Result<Dataset, CliError> {
    if source == DATASET_TAG {
        if column.is_some() {
            return Err(CliError::Input("--column does not apply to the embedded dataset".into()));
        }
        return Ok(failure_times());
    }
    let text = if source == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(source).map_err(|e| CliError::Input(format!("cannot read {source}: {e}")))?
    };
    parse_dataset(&text, column, source)
}

/// Parse CSV text holding one value per line, or a named column under a
/// single header row. Blank lines and lines starting with `#` are skipped.
pub fn parse_dataset(text: &str, column: Option<&str>, label: &str) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut index: Option<usize> = None;
    let mut values = Vec::new();
    for (pos, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("CSV error: {e}")))?;
        let line = record.position().map_or(pos as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let idx = match index {
            Some(idx) => idx,
            None => {
                let first_is_header = record.iter().any(|f| f.parse::<f64>().is_err());
                match (column, first_is_header) {
                    (Some(name), true) => {
                        let idx = record.iter().position(|f| f == name).ok_or_else(|| {
                            CliError::Input(format!("line {line}: no column named `{name}` in header"))
                        })?;
                        index = Some(idx);
                        continue;
                    }
                    (Some(name), false) => {
                        return Err(CliError::Input(format!(
                            "line {line}: --column {name} needs a header row"
                        )));
                    }
                    (None, true) if values.is_empty() && record.len() == 1 => {
                        index = Some(0);
                        continue;
                    }
                    (None, _) if record.len() > 1 => {
                        return Err(CliError::Input(format!(
                            "line {line}: {} columns found; select one with --column",
                            record.len()
                        )));
                    }
                    (None, _) => {
                        index = Some(0);
                        0
                    }
                }
            }
        };
        let field = record.get(idx).ok_or_else(|| CliError::Input(format!("line {line}: missing column {}", idx + 1)))?;
        let value: f64 = field
            .parse()
            .map_err(|_| CliError::Input(format!("line {line}: `{field}` is not a number")))?;
        if !value.is_finite() {
            return Err(CliError::Input(format!("line {line}: `{field}` is not finite")));
        }
        if value <= 0.0 {
            return Err(CliError::Input(format!("line {line}: {field} is not positive")));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::Input(format!("{label}: no observations")));
    }
    Ok(Dataset::new(values, label)?)
}
