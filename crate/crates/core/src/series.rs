use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One labeled sequence of real-valued samples.
///
/// Construction rejects empty and non-finite input, so the measures never
/// have to check for either.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    id: usize,
    label: i64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(id: usize, label: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index, value });
        }
        Ok(Self { id, label, values })
    }

    /// Unlabeled series with id 0, handy for single-pair comparisons.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(0, 0, values)
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn label(&self) -> i64 {
        self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            id: self.id,
            label: self.label,
            values,
        }
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
