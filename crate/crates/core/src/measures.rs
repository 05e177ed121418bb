//! Euclidean distance, banded DTW and banded LCS.
//!
//! The DP kernels keep one band-wide row per step, so a band of radius `r`
//! costs O(r·n) time and O(r) memory. Cells outside the band read as +∞ for
//! DTW and as 0 for LCS.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constraints::{Radius, ResolvedBand};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    Squared,
    Absolute,
}

/// Pointwise cost `d(q_i, c_j)` used by DTW.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundCost {
    pub kind: CostKind,
    /// Take the square root of the accumulated total.
    pub final_root: bool,
}

impl GroundCost {
    pub const fn new(kind: CostKind, final_root: bool) -> Self {
        Self { kind, final_root }
    }

    #[inline]
    fn point(&self, a: f64, b: f64) -> f64 {
        match self.kind {
            CostKind::Squared => (a - b) * (a - b),
            CostKind::Absolute => (a - b).abs(),
        }
    }

    fn finish(&self, total: f64) -> f64 {
        if self.final_root {
            total.sqrt()
        } else {
            total
        }
    }
}

/// Squared difference with a final square root: radius 0 is then exactly
/// the Euclidean metric.
impl Default for GroundCost {
    fn default() -> Self {
        Self::new(CostKind::Squared, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// `a(1-ε) < b < a(1+ε)`, bounds ordered for negative `a`.
    Relative,
    /// `|a - b| <= ε`.
    Absolute,
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchMode::Relative => "relative",
            MatchMode::Absolute => "absolute",
        })
    }
}

/// Approximate-equality rule for LCS sample matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatchSpec")]
pub struct MatchSpec {
    epsilon: f64,
    mode: MatchMode,
}

#[derive(Deserialize)]
struct RawMatchSpec {
    epsilon: f64,
    mode: MatchMode,
}

impl TryFrom<RawMatchSpec> for MatchSpec {
    type Error = Error;

    fn try_from(raw: RawMatchSpec) -> Result<Self> {
        MatchSpec::new(raw.epsilon, raw.mode)
    }
}

impl MatchSpec {
    pub fn new(epsilon: f64, mode: MatchMode) -> Result<Self> {
        let invalid = |reason| Error::InvalidEpsilon {
            epsilon,
            mode: match mode {
                MatchMode::Relative => "relative",
                MatchMode::Absolute => "absolute",
            },
            reason,
        };
        match mode {
            MatchMode::Relative if !(epsilon > 0.0 && epsilon < 1.0) => {
                Err(invalid("must satisfy 0 < epsilon < 1"))
            }
            MatchMode::Absolute if !(epsilon >= 0.0 && epsilon.is_finite()) => {
                Err(invalid("must be finite and non-negative"))
            }
            _ => Ok(Self { epsilon, mode }),
        }
    }

    pub fn absolute(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, MatchMode::Absolute)
    }

    pub fn relative(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, MatchMode::Relative)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    /// Whether `point_match(a, b) == point_match(b, a)` for all inputs.
    pub fn is_symmetric(&self) -> bool {
        self.mode == MatchMode::Absolute
    }
}

impl Default for MatchSpec {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            mode: MatchMode::Absolute,
        }
    }
}

pub fn euclidean(q: &TimeSeries, c: &TimeSeries) -> Result<f64> {
    if q.len() != c.len() {
        return Err(Error::LengthMismatch {
            left: q.len(),
            right: c.len(),
        });
    }
    let total: f64 = q
        .values()
        .iter()
        .zip(c.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(total.sqrt())
}

/// DTW restricted to a Sakoe-Chiba band of `radius` cells.
///
/// The radius is widened to `|n - m|` for unequal lengths, so the result is
/// always finite.
pub fn dtw_distance(q: &TimeSeries, c: &TimeSeries, radius: Radius, cost: GroundCost) -> f64 {
    let band = ResolvedBand::new(radius, q.len(), c.len());
    cost.finish(dtw_accumulated(q.values(), c.values(), &band, &cost))
}

pub(crate) fn dtw_accumulated(q: &[f64], c: &[f64], band: &ResolvedBand, cost: &GroundCost) -> f64 {
    let width = band.max_width();
    // prev holds row i-1 over columns prev_lo..=prev_hi; row 0 is the single
    // cell D(0,0) = 0.
    let mut prev = vec![f64::INFINITY; width.max(1)];
    let mut curr = vec![f64::INFINITY; width.max(1)];
    prev[0] = 0.0;
    let (mut prev_lo, mut prev_hi) = (0usize, 0usize);

    for (i, &qi) in q.iter().enumerate().map(|(k, v)| (k + 1, v)) {
        let (lo, hi) = band.window(i);
        let read_prev = |j: usize, prev: &[f64]| {
            if j >= prev_lo && j <= prev_hi {
                prev[j - prev_lo]
            } else {
                f64::INFINITY
            }
        };
        let mut left = f64::INFINITY;
        for j in lo..=hi {
            let best = read_prev(j - 1, &prev).min(read_prev(j, &prev)).min(left);
            let cell = cost.point(qi, c[j - 1]) + best;
            curr[j - lo] = cell;
            left = cell;
        }
        std::mem::swap(&mut prev, &mut curr);
        prev_lo = lo;
        prev_hi = hi;
    }
    debug_assert_eq!(prev_hi, c.len());
    prev[prev_hi - prev_lo]
}

/// Approximate equality of two samples under `spec`.
#[inline]
pub fn point_match(a: f64, b: f64, spec: MatchSpec) -> bool {
    match spec.mode {
        MatchMode::Relative => {
            let x = a * (1.0 - spec.epsilon);
            let y = a * (1.0 + spec.epsilon);
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            lo < b && b < hi
        }
        MatchMode::Absolute => (a - b).abs() <= spec.epsilon,
    }
}

/// Length of the longest ε-matching common subsequence inside the band.
pub fn lcs_length(q: &TimeSeries, c: &TimeSeries, radius: Radius, spec: MatchSpec) -> usize {
    let band = ResolvedBand::new(radius, q.len(), c.len());
    lcs_banded(q.values(), c.values(), &band, spec)
}

pub(crate) fn lcs_banded(q: &[f64], c: &[f64], band: &ResolvedBand, spec: MatchSpec) -> usize {
    let width = band.max_width();
    let mut prev = vec![0u32; width];
    let mut curr = vec![0u32; width];
    // Row 0 is all zeros; an empty window reads 0 everywhere.
    let (mut prev_lo, mut prev_hi) = (1usize, 0usize);

    for (i, &qi) in q.iter().enumerate().map(|(k, v)| (k + 1, v)) {
        let (lo, hi) = band.window(i);
        let read_prev = |j: usize, prev: &[u32]| {
            if j >= prev_lo && j <= prev_hi {
                prev[j - prev_lo]
            } else {
                0
            }
        };
        let mut left = 0u32;
        for j in lo..=hi {
            let cell = if point_match(qi, c[j - 1], spec) {
                1 + read_prev(j - 1, &prev)
            } else {
                read_prev(j, &prev).max(left)
            };
            curr[j - lo] = cell;
            left = cell;
        }
        std::mem::swap(&mut prev, &mut curr);
        prev_lo = lo;
        prev_hi = hi;
    }
    prev[prev_hi - prev_lo] as usize
}

/// `1 - L / min(n, m)`, in `[0, 1]`.
pub fn lcs_distance(q: &TimeSeries, c: &TimeSeries, radius: Radius, spec: MatchSpec) -> f64 {
    let l = lcs_length(q, c, radius, spec);
    lcs_normalize(l, q.len(), c.len())
}

pub(crate) fn lcs_normalize(l: usize, n: usize, m: usize) -> f64 {
    1.0 - l as f64 / n.min(m) as f64
}
