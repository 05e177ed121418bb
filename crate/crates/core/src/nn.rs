//! 1-nearest-neighbor graphs and the constraint sweep.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constraints::{percent_radius, BandSpec, Radius};
use crate::error::{Error, Result};
use crate::matrix::{
    compute_matrix_with, host_descriptor, ComputeOptions, DistanceMatrix, MeasureConfig, Provenance,
};
use crate::measures::{GroundCost, MatchSpec};
use crate::{sha256_hex, Dataset};

/// Directed graph with one edge per series, pointing at its nearest
/// neighbor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NNGraph {
    pub dataset_name: String,
    pub config: MeasureConfig,
    nn: Vec<usize>,
}

impl NNGraph {
    pub fn neighbors(&self) -> &[usize] {
        &self.nn
    }

    pub fn len(&self) -> usize {
        self.nn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nn.is_empty()
    }

    /// Hash of the edge list only.
    pub fn fingerprint(&self) -> String {
        let mut text = String::with_capacity(self.nn.len() * 4);
        for j in &self.nn {
            write!(text, "{j},").unwrap();
        }
        sha256_hex(text.as_bytes())
    }
}

/// Row-wise argmin excluding the diagonal; ties go to the smallest id.
pub fn nn_graph(m: &DistanceMatrix) -> NNGraph {
    let n = m.len();
    let nn = (0..n)
        .map(|i| {
            let mut best = usize::MAX;
            let mut best_v = f64::INFINITY;
            for (j, &v) in m.row(i).iter().enumerate() {
                if j != i && (v < best_v || best == usize::MAX) {
                    best = j;
                    best_v = v;
                }
            }
            best
        })
        .collect();
    NNGraph {
        dataset_name: m.dataset_name.clone(),
        config: m.config,
        nn,
    }
}

/// Percentage of nodes whose nearest neighbor differs from `reference`.
pub fn graph_change(g: &NNGraph, reference: &NNGraph) -> Result<f64> {
    if g.dataset_name != reference.dataset_name {
        return Err(Error::GraphMismatch(format!(
            "dataset `{}` vs `{}`",
            g.dataset_name, reference.dataset_name
        )));
    }
    if g.len() != reference.len() {
        return Err(Error::GraphMismatch(format!(
            "{} nodes vs {} nodes",
            g.len(),
            reference.len()
        )));
    }
    if g.is_empty() {
        return Ok(0.0);
    }
    let changed =
        g.nn.iter()
            .zip(&reference.nn)
            .filter(|(a, b)| a != b)
            .count();
    Ok(100.0 * changed as f64 / g.len() as f64)
}

/// Measure family swept over band widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepFamily {
    Dtw { cost: GroundCost },
    Lcs { matching: MatchSpec },
}

impl SweepFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SweepFamily::Dtw { .. } => "dtw",
            SweepFamily::Lcs { .. } => "lcs",
        }
    }

    pub fn config(&self, band: BandSpec) -> MeasureConfig {
        match *self {
            SweepFamily::Dtw { cost } => MeasureConfig::Dtw { band, cost },
            SweepFamily::Lcs { matching } => MeasureConfig::Lcs { band, matching },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub band: BandSpec,
    /// Radius on the longest series of the dataset.
    pub radius: Radius,
    pub wall_ms: f64,
    pub pair_count: u64,
    pub change_percent: f64,
    pub graph: String,
    pub nn: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEnvironment {
    pub host: String,
    pub threads: usize,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub dataset_name: String,
    pub source_path: String,
    pub series_count: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub normalized: bool,
    pub family: SweepFamily,
    pub radius_rule: String,
    pub tie_break: String,
    /// Reference row first, then one row per constrained schedule entry.
    pub rows: Vec<SweepRow>,
    pub reference: String,
    pub environment: SweepEnvironment,
    pub provenance: Option<Provenance>,
}

pub const SWEEP_CSV_HEADER: &str = "dataset,family,percent,radius,wall_ms,change_percent,run_hash";

impl SweepReport {
    pub fn change_at(&self, band: BandSpec) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.band == band)
            .map(|r| r.change_percent)
    }

    pub fn row(&self, band: BandSpec) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.band == band)
    }

    pub fn to_csv(&self) -> String {
        let hash = self.provenance.as_ref().map_or("", |p| p.run_hash.as_str());
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{hash}",
                self.dataset_name,
                self.family.name(),
                r.band,
                r.radius,
                r.wall_ms,
                r.change_percent
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One parsed line of a sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCsvRow {
    pub dataset: String,
    pub family: String,
    pub band: BandSpec,
    pub radius: String,
    pub wall_ms: f64,
    pub change_percent: f64,
    pub run_hash: String,
}

pub fn parse_sweep_csv(text: &str, source: &str) -> Result<Vec<SweepCsvRow>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == SWEEP_CSV_HEADER => {}
        _ => {
            return Err(Error::Malformed(format!(
                "{source}: missing sweep CSV header"
            )))
        }
    }
    lines
        .map(|(idx, line)| {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |column: usize| Error::ParseField {
                path: source.to_string(),
                line: idx + 1,
                column,
                field: f.get(column - 1).unwrap_or(&"").to_string(),
            };
            if f.len() != 7 {
                return Err(Error::ShortLine {
                    path: source.to_string(),
                    line: idx + 1,
                    fields: f.len(),
                });
            }
            Ok(SweepCsvRow {
                dataset: f[0].to_string(),
                family: f[1].to_string(),
                band: f[2].parse().map_err(|_| bad(3))?,
                radius: f[3].to_string(),
                wall_ms: f[4].parse().map_err(|_| bad(5))?,
                change_percent: f[5].parse().map_err(|_| bad(6))?,
                run_hash: f[6].to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    pub compute: ComputeOptions,
    /// Return every computed matrix alongside the report.
    pub keep_matrices: bool,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub report: SweepReport,
    /// Same order as `report.rows`; empty unless requested.
    pub matrices: Vec<DistanceMatrix>,
}

/// Computes the unconstrained reference graph, then one matrix and graph per
/// constrained schedule entry, in order. Entries run one at a time so their
/// timings do not overlap.
pub fn constraint_sweep(
    dataset: &Dataset,
    family: SweepFamily,
    schedule: &[BandSpec],
    opts: &SweepOptions,
) -> Result<Sweep> {
    dataset.require_pairs()?;
    let max_len = dataset.max_len();

    let mut bands = vec![BandSpec::Unconstrained];
    for &b in schedule {
        if !bands.contains(&b) {
            bands.push(b);
        }
    }

    let mut rows = Vec::with_capacity(bands.len());
    let mut matrices = Vec::new();
    let mut reference: Option<NNGraph> = None;
    let mut threads = 0;
    for band in &bands {
        let m = compute_matrix_with(dataset, &family.config(*band), &opts.compute)?;
        let g = nn_graph(&m);
        let change = match &reference {
            Some(r) => graph_change(&g, r)?,
            None => 0.0,
        };
        threads = m.timing.threads;
        rows.push(SweepRow {
            band: *band,
            radius: percent_radius(*band, max_len),
            wall_ms: m.timing.wall_ms,
            pair_count: m.timing.pair_count,
            change_percent: change,
            graph: g.fingerprint(),
            nn: g.neighbors().to_vec(),
        });
        if reference.is_none() {
            reference = Some(g);
        }
        if opts.keep_matrices {
            matrices.push(m);
        }
    }

    let reference = reference.expect("schedule always starts with the reference");
    let config_hash = sweep_config_hash(dataset, &family, &bands);
    let report = SweepReport {
        dataset_name: dataset.name.clone(),
        source_path: dataset.source_path.clone(),
        series_count: dataset.len(),
        min_len: dataset.min_len(),
        max_len,
        normalized: dataset.normalized,
        family,
        radius_rule: "round-half-up(percent/100 * max(n,m)), widened to |n-m|".into(),
        tie_break: "smallest id".into(),
        rows,
        reference: reference.fingerprint(),
        environment: SweepEnvironment {
            host: host_descriptor(),
            threads,
            config_hash,
        },
        provenance: None,
    };
    Ok(Sweep { report, matrices })
}

fn sweep_config_hash(dataset: &Dataset, family: &SweepFamily, bands: &[BandSpec]) -> String {
    #[derive(Serialize)]
    struct Key<'a> {
        dataset: &'a str,
        series_count: usize,
        normalized: bool,
        family: &'a SweepFamily,
        bands: &'a [BandSpec],
    }
    let key = Key {
        dataset: &dataset.name,
        series_count: dataset.len(),
        normalized: dataset.normalized,
        family,
        bands,
    };
    sha256_hex(&serde_json::to_vec(&key).expect("key serializes"))
}
