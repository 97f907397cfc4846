use std::fs::File;
use std::path::Path;

use super::{Dataset, Features};
use crate::error::{Error, Result};

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl LabelColumn {
    /// A bare integer is taken as a zero-based index, anything else as a
    /// header name.
    pub fn parse(s: &str) -> LabelColumn {
        match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub has_header: bool,
    pub delimiter: u8,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            has_header: true,
            delimiter: b',',
        }
    }
}

/// Reads a numeric CSV. Cells in the label column equal to `positive_label`
/// (after trimming) become `+1`, everything else `-1`.
///
/// Row numbers in errors are 1-based file lines, so the header is line 1
/// when present.
pub fn load_csv(
    path: impl AsRef<Path>,
    label: &LabelColumn,
    positive_label: &str,
    options: &CsvOptions,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .delimiter(options.delimiter)
        .trim(csv::Trim::All)
        .from_reader(file);

    let header: Option<Vec<String>> = if options.has_header {
        let h = reader.headers().map_err(|e| csv_error(e, 1))?;
        Some(h.iter().map(str::to_string).collect())
    } else {
        None
    };

    let label_idx = match (label, &header) {
        (LabelColumn::Index(i), _) => *i,
        (LabelColumn::Name(name), Some(h)) => h
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Data(format!("label column '{name}' not found in header")))?,
        (LabelColumn::Name(name), None) => {
            return Err(Error::Usage(format!(
                "label column '{name}' given by name but the file has no header"
            )))
        }
    };

    let first_line = if options.has_header { 2 } else { 1 };
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;
    for (k, record) in reader.records().enumerate() {
        let line = first_line + k;
        let record = record.map_err(|e| csv_error(e, line))?;
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(Error::Parse {
                row: line,
                column: record.len(),
                message: format!("expected {w} fields, found {}", record.len()),
            });
        }
        if label_idx >= w {
            return Err(Error::Data(format!(
                "label column index {label_idx} out of range for {w} columns"
            )));
        }
        let mut row = Vec::with_capacity(w - 1);
        for (j, cell) in record.iter().enumerate() {
            if j == label_idx {
                labels.push(if cell == positive_label { 1 } else { -1 });
                continue;
            }
            let value = parse_cell(cell).ok_or_else(|| Error::Parse {
                row: line,
                column: j + 1,
                message: if cell.is_empty() {
                    "missing value".to_string()
                } else {
                    format!("'{cell}' is not a finite number")
                },
            })?;
            row.push(value);
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::Data(format!(
            "{} contains no data rows",
            path.display()
        )));
    }

    let dataset = Dataset::new(Features::from_rows(rows)?, labels)?;
    match header {
        Some(mut h) => {
            h.remove(label_idx);
            dataset.with_feature_names(h)
        }
        None => Ok(dataset),
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn csv_error(e: csv::Error, line: usize) -> Error {
    let row = e.position().map(|p| p.line() as usize).unwrap_or(line);
    Error::Parse {
        row,
        column: 0,
        message: e.to_string(),
    }
}
