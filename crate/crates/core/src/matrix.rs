//! Pairwise distance matrices and their wall-clock timing.

use std::fmt;
use std::num::NonZeroUsize;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constraints::{percent_radius, resolve_band, BandSpec, Radius};
use crate::error::{Error, Result};
use crate::measures::{self, GroundCost, MatchSpec};
use crate::series::TimeSeries;
use crate::Dataset;

/// Which measure to evaluate, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "measure", rename_all = "snake_case")]
pub enum MeasureConfig {
    Euclidean,
    Dtw { band: BandSpec, cost: GroundCost },
    Lcs { band: BandSpec, matching: MatchSpec },
}

impl MeasureConfig {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureConfig::Euclidean => "euclidean",
            MeasureConfig::Dtw { .. } => "dtw",
            MeasureConfig::Lcs { .. } => "lcs",
        }
    }

    pub fn band(&self) -> Option<BandSpec> {
        match *self {
            MeasureConfig::Euclidean => None,
            MeasureConfig::Dtw { band, .. } | MeasureConfig::Lcs { band, .. } => Some(band),
        }
    }

    /// Same measure with a different band; Euclidean is returned unchanged.
    pub fn with_band(self, band: BandSpec) -> Self {
        match self {
            MeasureConfig::Euclidean => self,
            MeasureConfig::Dtw { cost, .. } => MeasureConfig::Dtw { band, cost },
            MeasureConfig::Lcs { matching, .. } => MeasureConfig::Lcs { band, matching },
        }
    }

    /// False only for relative-mode LCS, whose matching rule is asymmetric.
    pub fn is_symmetric(&self) -> bool {
        match self {
            MeasureConfig::Lcs { matching, .. } => matching.is_symmetric(),
            _ => true,
        }
    }

    /// Band radius applied to two series of `len` samples.
    pub fn radius_for(&self, len: usize) -> Option<Radius> {
        self.band().map(|b| percent_radius(b, len))
    }

    pub fn distance(&self, q: &TimeSeries, c: &TimeSeries) -> Result<f64> {
        match self {
            MeasureConfig::Euclidean => measures::euclidean(q, c),
            _ => Ok(self.pair_distance(q, c)),
        }
    }

    /// Like [`distance`](Self::distance) but assumes Euclidean inputs were
    /// already length-checked.
    fn pair_distance(&self, q: &TimeSeries, c: &TimeSeries) -> f64 {
        match *self {
            MeasureConfig::Euclidean => measures::euclidean(q, c).unwrap_or(f64::INFINITY),
            MeasureConfig::Dtw { band, cost } => {
                let band = resolve_band(band, q.len(), c.len());
                measures::dtw_distance(q, c, band.radius(), cost)
            }
            MeasureConfig::Lcs { band, matching } => {
                let band = resolve_band(band, q.len(), c.len());
                measures::lcs_distance(q, c, band.radius(), matching)
            }
        }
    }
}

impl fmt::Display for MeasureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureConfig::Euclidean => f.write_str("euclidean"),
            MeasureConfig::Dtw { band, cost } => write!(
                f,
                "dtw(band={band}, cost={:?}, root={})",
                cost.kind, cost.final_root
            ),
            MeasureConfig::Lcs { band, matching } => write!(
                f,
                "lcs(band={band}, epsilon={}, match={})",
                matching.epsilon(),
                matching.mode()
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Parallelism {
    #[default]
    Auto,
    Threads(NonZeroUsize),
}

impl Parallelism {
    pub fn threads(n: usize) -> Self {
        NonZeroUsize::new(n).map_or(Parallelism::Auto, Parallelism::Threads)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComputeOptions {
    pub parallelism: Parallelism,
    /// Number of timed runs; the reported time is their median.
    pub repeat: usize,
    /// Run once untimed before measuring.
    pub warmup: bool,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        Self {
            parallelism: Parallelism::Auto,
            repeat: 1,
            warmup: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    /// Median wall-clock milliseconds over `samples_ms`.
    pub wall_ms: f64,
    /// Distance evaluations per run.
    pub pair_count: u64,
    pub threads: usize,
    pub host: String,
    pub samples_ms: Vec<f64>,
}

/// Free-form machine descriptor recorded alongside timings.
pub fn host_descriptor() -> String {
    let name = std::fs::read_to_string("/etc/hostname")
        .ok()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .or_else(|| std::env::var("HOSTNAME").ok())
        .unwrap_or_else(|| "unknown".into());
    let cpus = std::thread::available_parallelism().map_or(1, NonZeroUsize::get);
    format!(
        "{name} {}-{} {cpus}cpu",
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}

/// Identifies the invocation that produced an artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub run_config: String,
    pub run_hash: String,
}

/// Full `N × N` matrix, row-major. The diagonal is zero. Values are mirrored
/// across the diagonal unless the measure is asymmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub dataset_name: String,
    pub config: MeasureConfig,
    pub normalized: bool,
    n: usize,
    values: Vec<f64>,
    pub timing: TimingRecord,
    pub provenance: Option<Provenance>,
}

impl DistanceMatrix {
    pub(crate) fn from_parts(
        dataset_name: String,
        config: MeasureConfig,
        normalized: bool,
        n: usize,
        values: Vec<f64>,
        timing: TimingRecord,
        provenance: Option<Provenance>,
    ) -> Self {
        debug_assert_eq!(values.len(), n * n);
        Self {
            dataset_name,
            config,
            normalized,
            n,
            values,
            timing,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_symmetric(&self) -> bool {
        self.config.is_symmetric()
    }

    /// Bitwise equality of the values, ignoring timing and provenance.
    pub fn same_values(&self, other: &DistanceMatrix) -> bool {
        self.n == other.n
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("id");
        for j in 0..self.n {
            write!(out, ",{j}").unwrap();
        }
        out.push('\n');
        for i in 0..self.n {
            write!(out, "{i}").unwrap();
            for v in self.row(i) {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn compute_matrix(
    dataset: &Dataset,
    config: &MeasureConfig,
    parallelism: Parallelism,
) -> Result<DistanceMatrix> {
    compute_matrix_with(
        dataset,
        config,
        &ComputeOptions {
            parallelism,
            ..ComputeOptions::default()
        },
    )
}

pub fn compute_matrix_with(
    dataset: &Dataset,
    config: &MeasureConfig,
    opts: &ComputeOptions,
) -> Result<DistanceMatrix> {
    dataset.require_pairs()?;
    if matches!(config, MeasureConfig::Euclidean) {
        check_equal_lengths(dataset.series())?;
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Parallelism::Threads(k) = opts.parallelism {
        builder = builder.num_threads(k.get());
    }
    let pool = builder
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let threads = pool.current_num_threads();

    let n = dataset.len();
    let pairs = pair_list(n, config.is_symmetric());
    let min_chunk = (pairs.len() / (threads * 8)).max(1);
    let series = dataset.series();

    let run = || -> Vec<f64> {
        let evaluated: Vec<f64> = pool.install(|| {
            pairs
                .par_iter()
                .with_min_len(min_chunk)
                .map(|&(i, j)| config.pair_distance(&series[i], &series[j]))
                .collect()
        });
        assemble(n, &pairs, &evaluated, config.is_symmetric())
    };

    if opts.warmup {
        run();
    }
    let repeat = opts.repeat.max(1);
    let mut samples = Vec::with_capacity(repeat);
    let mut values = Vec::new();
    for _ in 0..repeat {
        let start = Instant::now();
        values = run();
        samples.push(start.elapsed().as_secs_f64() * 1e3);
    }

    let timing = TimingRecord {
        wall_ms: median(&samples),
        pair_count: pairs.len() as u64,
        threads,
        host: host_descriptor(),
        samples_ms: samples,
    };
    Ok(DistanceMatrix::from_parts(
        dataset.name.clone(),
        *config,
        dataset.normalized,
        n,
        values,
        timing,
        None,
    ))
}

/// Row-major pairs: the upper triangle for symmetric measures, every
/// off-diagonal cell otherwise.
fn pair_list(n: usize, symmetric: bool) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(if symmetric {
        n * (n - 1) / 2
    } else {
        n * (n - 1)
    });
    for i in 0..n {
        let start = if symmetric { i + 1 } else { 0 };
        pairs.extend((start..n).filter(|&j| j != i).map(|j| (i, j)));
    }
    pairs
}

fn assemble(n: usize, pairs: &[(usize, usize)], evaluated: &[f64], symmetric: bool) -> Vec<f64> {
    let mut values = vec![0.0; n * n];
    for (&(i, j), &v) in pairs.iter().zip(evaluated) {
        values[i * n + j] = v;
        if symmetric {
            values[j * n + i] = v;
        }
    }
    values
}

fn check_equal_lengths(series: &[TimeSeries]) -> Result<()> {
    let first = &series[0];
    match series.iter().find(|s| s.len() != first.len()) {
        Some(s) => Err(Error::UnequalPair {
            left: first.id(),
            right: s.id(),
            left_len: first.len(),
            right_len: s.len(),
        }),
        None => Ok(()),
    }
}

pub fn median(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}
