//! CSV ingestion and emission.
//!
//! One dialect everywhere: comma delimiter, `.` decimal point, `\n` line
//! endings (a trailing `\r` is tolerated on input), UTF-8, no quoting.
//! Dataset files are plain numeric tables with an optional 0/1 label
//! column and an optional header row. Score files carry the header
//! `index,score,contributions[,label]`.
//!
//! Ingestion is strict: ragged rows, unparseable cells, non-finite values
//! and non-binary labels are reported with their 1-based row/column
//! position (rows counted over data rows, excluding any header).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scorer::ScoreVector;
use crate::Float;

/// Where dataset labels live in a CSV file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    /// Every column is a feature.
    None,
    /// The rightmost column holds labels.
    Last,
    /// 0-based column index of the label column.
    Index(usize),
}

/// Loads a numeric CSV file as a dataset. Row order is preserved; the
/// label column, when named, must contain only 0/1 values.
pub fn load_csv<F: Float>(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: LabelColumn,
) -> Result<Dataset<F>> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| shown.clone());
    let reader = BufReader::new(File::open(path)?);

    let mut features: Vec<F> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut width: Option<usize> = None;
    let mut label_idx: Option<usize> = None;
    let mut row = 0usize;

    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if has_header && line_no == 0 {
            continue;
        }
        if line.is_empty() {
            continue;
        }
        row += 1;
        let cells: Vec<&str> = line.split(',').collect();

        let w = *width.get_or_insert(cells.len());
        if cells.len() != w {
            return Err(Error::CsvRaggedRow {
                path: shown,
                row,
                expected: w,
                got: cells.len(),
            });
        }
        if label_idx.is_none() {
            label_idx = match label_column {
                LabelColumn::None => Some(usize::MAX),
                LabelColumn::Last => Some(w - 1),
                LabelColumn::Index(i) => {
                    if i >= w {
                        return Err(Error::InvalidConfig(format!(
                            "label column {i} out of range for a {w}-column file"
                        )));
                    }
                    Some(i)
                }
            };
        }
        let label_idx = label_idx.unwrap();

        for (col0, cell) in cells.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| Error::CsvNonNumeric {
                path: shown.clone(),
                row,
                col: col0 + 1,
                value: cell.to_string(),
            })?;
            if col0 == label_idx {
                if value == 0.0 {
                    labels.push(0);
                } else if value == 1.0 {
                    labels.push(1);
                } else {
                    return Err(Error::CsvNonBinaryLabel {
                        path: shown,
                        row,
                        value: cell.to_string(),
                    });
                }
            } else {
                if !value.is_finite() {
                    return Err(Error::CsvNonFinite {
                        path: shown,
                        row,
                        col: col0 + 1,
                    });
                }
                features.push(F::from_f64(value).unwrap());
            }
        }
    }

    if row == 0 {
        return Err(Error::CsvEmpty { path: shown });
    }
    let w = width.unwrap();
    let d = if label_idx == Some(usize::MAX) {
        w
    } else {
        w - 1
    };
    if d == 0 {
        return Err(Error::EmptyDataset);
    }
    let labels = if label_idx == Some(usize::MAX) {
        None
    } else {
        Some(labels)
    };
    Dataset::new(name, features, d, labels)
}

/// Writes a dataset as headerless numeric CSV, features first and the
/// label (when present) as the last column. Values use the shortest
/// representation that parses back exactly, so load/write/load round-trips
/// are lossless.
pub fn write_dataset_to<F: Float, W: Write>(out: &mut W, dataset: &Dataset<F>) -> Result<()> {
    let labels = dataset.labels();
    for i in 0..dataset.n() {
        let mut first = true;
        for v in dataset.row(i) {
            if !first {
                out.write_all(b",")?;
            }
            write!(out, "{v}")?;
            first = false;
        }
        if let Some(ls) = labels {
            write!(out, ",{}", ls[i])?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_dataset<F: Float>(path: impl AsRef<Path>, dataset: &Dataset<F>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_dataset_to(&mut out, dataset)?;
    out.flush()?;
    Ok(())
}

/// Writes scores as `index,score,contributions[,label]`, one row per point
/// in dataset order. Scores are printed with 12 significant digits.
pub fn write_scores_to<F: Float, W: Write>(
    out: &mut W,
    scores: &ScoreVector<F>,
    dataset: &Dataset<F>,
) -> Result<()> {
    if scores.len() != dataset.n() {
        return Err(Error::LengthMismatch(format!(
            "{} scores vs {} dataset rows",
            scores.len(),
            dataset.n()
        )));
    }
    let labels = dataset.labels();
    match labels {
        Some(_) => writeln!(out, "index,score,contributions,label")?,
        None => writeln!(out, "index,score,contributions")?,
    }
    for i in 0..dataset.n() {
        let score = scores.scores()[i].to_f64().unwrap();
        write!(out, "{i},{score:.11e},{}", scores.contributions()[i])?;
        if let Some(ls) = labels {
            write!(out, ",{}", ls[i])?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_scores<F: Float>(
    path: impl AsRef<Path>,
    scores: &ScoreVector<F>,
    dataset: &Dataset<F>,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_scores_to(&mut out, scores, dataset)?;
    out.flush()?;
    Ok(())
}
