//! UCR-format loading and z-normalization.
//!
//! One series per non-empty line: class label first, samples after. Fields
//! are comma-separated when the line contains a comma, whitespace-separated
//! otherwise.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Standard deviations below this are treated as a constant series.
pub const CONSTANT_STD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    series: Vec<TimeSeries>,
    pub source_path: String,
    pub normalized: bool,
}

impl Dataset {
    /// Builds a dataset, renumbering ids to match list positions.
    pub fn new(
        name: impl Into<String>,
        series: Vec<TimeSeries>,
        source_path: impl Into<String>,
    ) -> Self {
        let series = series
            .into_iter()
            .enumerate()
            .map(|(id, s)| s.with_id(id))
            .collect();
        Self {
            name: name.into(),
            series,
            source_path: source_path.into(),
            normalized: false,
        }
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.series.iter().map(TimeSeries::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.series.iter().map(TimeSeries::len).min().unwrap_or(0)
    }

    pub fn is_equal_length(&self) -> bool {
        self.min_len() == self.max_len()
    }

    /// Concatenates `other` after `self`, e.g. a TRAIN and a TEST split.
    pub fn concat(mut self, other: Dataset) -> Self {
        let offset = self.series.len();
        self.series.extend(
            other
                .series
                .into_iter()
                .enumerate()
                .map(|(k, s)| s.with_id(offset + k)),
        );
        self.source_path = format!("{};{}", self.source_path, other.source_path);
        self.normalized &= other.normalized;
        self
    }

    /// Z-normalizes every series.
    pub fn znormalized(self) -> Self {
        Self {
            series: self.series.iter().map(znormalize).collect(),
            normalized: true,
            ..self
        }
    }

    pub fn require_pairs(&self) -> Result<()> {
        if self.series.len() < 2 {
            return Err(Error::TooFewSeries(self.series.len()));
        }
        Ok(())
    }

    /// Serializes back to whitespace-separated UCR text. Samples use the
    /// shortest representation that re-parses to the same `f64`.
    pub fn to_ucr_text(&self) -> String {
        let mut out = String::new();
        for s in &self.series {
            write!(out, "{}", s.label()).unwrap();
            for v in s.values() {
                write!(out, " {v:?}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Loads one UCR file. The dataset name is the file stem with any
/// `_TRAIN`/`_TEST` suffix removed.
pub fn load_ucr(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ucr(&text, &dataset_name(path), &path.display().to_string())
}

/// Loads several files into one dataset, in order.
pub fn load_ucr_files<P: AsRef<Path>>(paths: &[P]) -> Result<Dataset> {
    let mut iter = paths.iter();
    let first = iter.next().ok_or(Error::TooFewSeries(0))?;
    iter.try_fold(load_ucr(first)?, |acc, p| Ok(acc.concat(load_ucr(p)?)))
}

pub fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    for suffix in ["_TRAIN", "_TEST"] {
        if let Some(base) = stem.strip_suffix(suffix) {
            return base.to_string();
        }
    }
    stem
}

pub fn parse_ucr(text: &str, name: &str, source: &str) -> Result<Dataset> {
    let mut series = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() < 2 {
            return Err(Error::ShortLine {
                path: source.to_string(),
                line: line_no,
                fields: fields.len(),
            });
        }
        let mut numbers = Vec::with_capacity(fields.len());
        for (col, field) in fields.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::ParseField {
                path: source.to_string(),
                line: line_no,
                column: col + 1,
                field: field.to_string(),
            })?;
            numbers.push(v);
        }
        let label = numbers[0];
        if !label.is_finite() {
            return Err(Error::ParseField {
                path: source.to_string(),
                line: line_no,
                column: 1,
                field: fields[0].to_string(),
            });
        }
        let values = numbers.split_off(1);
        let s = TimeSeries::new(series.len(), label.trunc() as i64, values).map_err(|e| {
            Error::InvalidSeries {
                path: source.to_string(),
                line: line_no,
                source: Box::new(e),
            }
        })?;
        series.push(s);
    }
    Ok(Dataset::new(name, series, source))
}

/// Zero mean, unit population standard deviation. Constant series map to
/// all zeros.
pub fn znormalize(s: &TimeSeries) -> TimeSeries {
    let v = s.values();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    let out = if std < CONSTANT_STD {
        vec![0.0; v.len()]
    } else {
        v.iter().map(|x| (x - mean) / std).collect()
    };
    s.with_values(out)
}
