//! Sakoe-Chiba band resolution.
//!
//! A band is specified as a percentage of series length and resolved, for a
//! concrete pair of lengths, into a cell radius around the (scaled) diagonal.
//! Rows are 1-based throughout this module to match the DP recurrences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constraint schedule used by the graph-change experiments, widest first.
pub const DEFAULT_SCHEDULE: [f64; 9] = [75.0, 50.0, 25.0, 20.0, 15.0, 10.0, 5.0, 1.0, 0.0];

/// Band width as a percentage of the longer series, or no band at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BandRepr", into = "BandRepr")]
pub enum BandSpec {
    Unconstrained,
    Percent(f64),
}

impl BandSpec {
    pub fn percent(percent: f64) -> Result<Self> {
        if !(0.0..=100.0).contains(&percent) {
            return Err(Error::InvalidPercent(percent));
        }
        Ok(BandSpec::Percent(percent))
    }

    pub fn is_unconstrained(&self) -> bool {
        matches!(self, BandSpec::Unconstrained)
    }

    pub fn as_percent(&self) -> Option<f64> {
        match *self {
            BandSpec::Unconstrained => None,
            BandSpec::Percent(p) => Some(p),
        }
    }

    /// Default sweep schedule as band specs.
    pub fn default_schedule() -> Vec<BandSpec> {
        DEFAULT_SCHEDULE
            .iter()
            .map(|&p| BandSpec::Percent(p))
            .collect()
    }
}

impl fmt::Display for BandSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandSpec::Unconstrained => f.write_str("unconstrained"),
            BandSpec::Percent(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for BandSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("unconstrained") || s.eq_ignore_ascii_case("none") {
            return Ok(BandSpec::Unconstrained);
        }
        let digits = s.strip_suffix('%').unwrap_or(s);
        let p: f64 = digits
            .parse()
            .map_err(|_| Error::InvalidPercent(f64::NAN))?;
        BandSpec::percent(p)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BandRepr {
    Percent(f64),
    Keyword(String),
}

impl TryFrom<BandRepr> for BandSpec {
    type Error = Error;

    fn try_from(repr: BandRepr) -> Result<Self> {
        match repr {
            BandRepr::Percent(p) => BandSpec::percent(p),
            BandRepr::Keyword(s) => s.parse(),
        }
    }
}

impl From<BandSpec> for BandRepr {
    fn from(spec: BandSpec) -> Self {
        match spec {
            BandSpec::Unconstrained => BandRepr::Keyword("unconstrained".into()),
            BandSpec::Percent(p) => BandRepr::Percent(p),
        }
    }
}

/// Band half-width in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Radius {
    Unconstrained,
    Cells(usize),
}

impl Radius {
    pub fn cells(&self) -> Option<usize> {
        match *self {
            Radius::Unconstrained => None,
            Radius::Cells(r) => Some(r),
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Unconstrained => f.write_str("unconstrained"),
            Radius::Cells(r) => write!(f, "{r}"),
        }
    }
}

/// A radius bound to a concrete pair of lengths.
///
/// A constrained radius is always at least `|n - m|`, otherwise the corner
/// cell `(n, m)` would be unreachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedBand {
    radius: Radius,
    n: usize,
    m: usize,
}

impl ResolvedBand {
    /// Binds `radius` to lengths `n` (rows) and `m` (columns), widening it
    /// to `|n - m|` when needed. Radii covering the whole matrix collapse to
    /// [`Radius::Unconstrained`].
    pub fn new(radius: Radius, n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1, "band lengths must be positive");
        let radius = match radius {
            Radius::Cells(r) => {
                let r = r.max(n.abs_diff(m));
                if r >= n.max(m) {
                    Radius::Unconstrained
                } else {
                    Radius::Cells(r)
                }
            }
            Radius::Unconstrained => Radius::Unconstrained,
        };
        Self { radius, n, m }
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    /// True when the requested radius had to grow to reach the corner cell.
    pub fn was_widened(requested: Radius, n: usize, m: usize) -> bool {
        matches!(requested, Radius::Cells(r) if r < n.abs_diff(m))
    }

    /// Inclusive column range of in-band cells on row `i` (1-based).
    pub fn window(&self, i: usize) -> (usize, usize) {
        debug_assert!((1..=self.n).contains(&i));
        let r = match self.radius {
            Radius::Unconstrained => return (1, self.m),
            Radius::Cells(r) => r,
        };
        // Centre j* = i·m/n; window is [ceil(j* - r), floor(j* + r)].
        let (n, m, i, r) = (self.n as i128, self.m as i128, i as i128, r as i128);
        let lo = (i * m - r * n).div_euclid(n) + i128::from((i * m - r * n).rem_euclid(n) != 0);
        let hi = (i * m + r * n).div_euclid(n);
        (lo.max(1) as usize, hi.min(m) as usize)
    }

    /// Largest window width over all rows; sizes the banded DP buffers.
    pub fn max_width(&self) -> usize {
        match self.radius {
            Radius::Unconstrained => self.m,
            Radius::Cells(r) => (2 * r + 1).min(self.m),
        }
    }
}

/// Resolves a percentage band for lengths `n` and `m`.
///
/// The radius is `round(percent / 100 * max(n, m))` with halves rounded up,
/// then widened to `|n - m|`.
pub fn resolve_band(spec: BandSpec, n: usize, m: usize) -> ResolvedBand {
    ResolvedBand::new(percent_radius(spec, n.max(m)), n, m)
}

/// Radius in cells for `spec` on a series of `len` samples, before widening.
pub fn percent_radius(spec: BandSpec, len: usize) -> Radius {
    match spec {
        BandSpec::Unconstrained => Radius::Unconstrained,
        BandSpec::Percent(p) => Radius::Cells((p * len as f64 / 100.0 + 0.5).floor() as usize),
    }
}

pub fn band_window(i: usize, band: &ResolvedBand) -> (usize, usize) {
    band.window(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_percent_is_diagonal() {
        let b = resolve_band(BandSpec::Percent(0.0), 128, 128);
        assert_eq!(b.radius(), Radius::Cells(0));
    }

    #[test]
    fn five_percent_of_coffee_length() {
        let b = resolve_band(BandSpec::Percent(5.0), 286, 286);
        assert_eq!(b.radius(), Radius::Cells(14));
    }

    #[test]
    fn widening_to_length_difference() {
        let b = resolve_band(BandSpec::Percent(0.0), 10, 13);
        assert_eq!(b.radius(), Radius::Cells(3));
        assert!(ResolvedBand::was_widened(Radius::Cells(0), 10, 13));
    }

    #[test]
    fn half_rounds_up() {
        assert_eq!(percent_radius(BandSpec::Percent(5.0), 10), Radius::Cells(1));
        assert_eq!(percent_radius(BandSpec::Percent(1.0), 50), Radius::Cells(1));
        assert_eq!(percent_radius(BandSpec::Percent(1.0), 49), Radius::Cells(0));
    }

    #[test]
    fn full_radius_collapses_to_unconstrained() {
        let b = resolve_band(BandSpec::Percent(100.0), 20, 20);
        assert_eq!(b.radius(), Radius::Unconstrained);
        assert_eq!(b.window(3), (1, 20));
    }

    #[test]
    fn windows_for_equal_lengths() {
        let b = ResolvedBand::new(Radius::Cells(2), 10, 10);
        assert_eq!(band_window(5, &b), (3, 7));
        assert_eq!(band_window(1, &b), (1, 3));
        assert_eq!(band_window(10, &b), (8, 10));
        let d = ResolvedBand::new(Radius::Cells(0), 10, 10);
        assert_eq!(band_window(7, &d), (7, 7));
    }

    #[test]
    fn unconstrained_window_spans_all_columns() {
        let b = ResolvedBand::new(Radius::Unconstrained, 7, 50);
        for i in 1..=7 {
            assert_eq!(band_window(i, &b), (1, 50));
        }
    }

    #[test]
    fn scaled_diagonal_for_unequal_lengths() {
        // n=4, m=8: centre j* = 2i, radius widened to 4.
        let b = ResolvedBand::new(Radius::Cells(0), 4, 8);
        assert_eq!(b.radius(), Radius::Cells(4));
        assert_eq!(b.window(1), (1, 6));
        assert_eq!(b.window(4), (4, 8));
    }

    #[test]
    fn percent_parsing() {
        assert_eq!(
            "unconstrained".parse::<BandSpec>().unwrap(),
            BandSpec::Unconstrained
        );
        assert_eq!(
            "12.5%".parse::<BandSpec>().unwrap(),
            BandSpec::Percent(12.5)
        );
        assert!("101".parse::<BandSpec>().is_err());
        assert!("-1".parse::<BandSpec>().is_err());
        assert!("abc".parse::<BandSpec>().is_err());
    }

    #[test]
    fn serde_forms() {
        let json =
            serde_json::to_string(&[BandSpec::Unconstrained, BandSpec::Percent(5.0)]).unwrap();
        assert_eq!(json, r#"["unconstrained",5.0]"#);
        let back: Vec<BandSpec> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![BandSpec::Unconstrained, BandSpec::Percent(5.0)]);
        assert!(serde_json::from_str::<BandSpec>("150.0").is_err());
    }
}
