use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use warpband_core::{
    BandSpec, ComputeOptions, CostKind, GroundCost, MatchSpec, MeasureConfig, Parallelism,
    SweepFamily, DEFAULT_SCHEDULE,
};

#[derive(Debug, Parser)]
#[command(
    name = "warpband",
    version,
    about = "Constrained DTW/LCS distance matrices and 1NN graph sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two series.
    Dist(DistArgs),
    /// Full pairwise distance matrix of a dataset, with timing.
    Matrix(MatrixArgs),
    /// 1NN graph change across a schedule of band widths.
    Sweep(SweepArgs),
    /// Change percent between the 1NN graphs of two matrix files.
    GraphDiff(GraphDiffArgs),
    /// Merge sweep CSVs into a datasets × percents table.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    Euclidean,
    Dtw,
    Lcs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostArg {
    Squared,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatchArg {
    Relative,
    Absolute,
}

#[derive(Debug, Args)]
#[group(id = "band", multiple = false)]
pub struct BandArgs {
    /// Band width as a percentage of the longer series.
    #[arg(long, value_name = "P")]
    pub percent: Option<BandSpec>,
    /// Comma-separated band schedule (sweep only).
    #[arg(long, value_name = "P1,P2,...", value_delimiter = ',', num_args = 1..)]
    pub percents: Option<Vec<BandSpec>>,
    /// No band at all.
    #[arg(long)]
    pub unconstrained: bool,
}

impl BandArgs {
    /// The single band for `dist` and `matrix`; unconstrained by default.
    pub fn single(&self) -> Result<BandSpec> {
        if self.percents.is_some() {
            bail!("--percents is only accepted by `sweep`; use --percent");
        }
        Ok(self.percent.unwrap_or(BandSpec::Unconstrained))
    }

    pub fn schedule(&self) -> Vec<BandSpec> {
        if let Some(list) = &self.percents {
            list.clone()
        } else if let Some(p) = self.percent {
            vec![p]
        } else if self.unconstrained {
            vec![]
        } else {
            DEFAULT_SCHEDULE
                .iter()
                .map(|&p| BandSpec::Percent(p))
                .collect()
        }
    }
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, value_enum, default_value = "dtw")]
    pub measure: MeasureKind,
    #[command(flatten)]
    pub band: BandArgs,
    /// DTW ground cost.
    #[arg(long, value_enum, default_value = "squared")]
    pub cost: CostArg,
    /// Take the square root of the accumulated squared cost (default).
    #[arg(long, overrides_with = "no_root")]
    pub root: bool,
    #[arg(long, overrides_with = "root")]
    pub no_root: bool,
    /// LCS matching threshold.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// LCS matching rule.
    #[arg(long = "match", value_enum, default_value = "absolute")]
    pub match_mode: MatchArg,
    /// Z-normalize every series on load.
    #[arg(long)]
    pub normalize: bool,
}

impl MeasureArgs {
    pub fn cost(&self) -> GroundCost {
        let kind = match self.cost {
            CostArg::Squared => CostKind::Squared,
            CostArg::Absolute => CostKind::Absolute,
        };
        GroundCost::new(kind, self.root || !self.no_root)
    }

    pub fn matching(&self) -> Result<MatchSpec> {
        Ok(match self.match_mode {
            MatchArg::Relative => MatchSpec::relative(self.epsilon)?,
            MatchArg::Absolute => MatchSpec::absolute(self.epsilon)?,
        })
    }

    pub fn config(&self, band: BandSpec) -> Result<MeasureConfig> {
        Ok(match self.measure {
            MeasureKind::Euclidean => MeasureConfig::Euclidean,
            MeasureKind::Dtw => MeasureConfig::Dtw {
                band,
                cost: self.cost(),
            },
            MeasureKind::Lcs => MeasureConfig::Lcs {
                band,
                matching: self.matching()?,
            },
        })
    }

    pub fn family(&self) -> Result<SweepFamily> {
        Ok(match self.measure {
            MeasureKind::Euclidean => {
                bail!("sweep needs an elastic measure: --measure dtw or --measure lcs")
            }
            MeasureKind::Dtw => SweepFamily::Dtw { cost: self.cost() },
            MeasureKind::Lcs => SweepFamily::Lcs {
                matching: self.matching()?,
            },
        })
    }
}

fn parse_threads(s: &str) -> Result<Parallelism, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Parallelism::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Parallelism::threads(n)),
        _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
    }
}

#[derive(Debug, Args)]
pub struct ExecArgs {
    /// Worker threads for matrix computation.
    #[arg(long, env = "WARPBAND_THREADS", default_value = "auto", value_parser = parse_threads)]
    pub threads: Parallelism,
    /// Timed runs per matrix; the median is reported.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeat: u32,
    /// One untimed run before measuring.
    #[arg(long)]
    pub warmup: bool,
}

impl ExecArgs {
    pub fn options(&self) -> ComputeOptions {
        ComputeOptions {
            parallelism: self.threads,
            repeat: self.repeat as usize,
            warmup: self.warmup,
        }
    }
}

fn parse_ids(s: &str) -> Result<(usize, usize), String> {
    let err = || format!("expected two indices `I,J`, got `{s}`");
    let (i, j) = s.split_once(',').ok_or_else(err)?;
    Ok((
        i.trim().parse().map_err(|_| err())?,
        j.trim().parse().map_err(|_| err())?,
    ))
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// One dataset file (with --ids) or two files (first series of each).
    #[arg(required = true, num_args = 1..=2, value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    /// Zero-based series indices; with two files, one index per file.
    #[arg(long, value_name = "I,J", value_parser = parse_ids)]
    pub ids: Option<(usize, usize)>,
    #[command(flatten)]
    pub measure: MeasureArgs,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// UCR files, concatenated in order (e.g. TRAIN then TEST).
    #[arg(required = true, value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out: PathBuf,
    /// Dataset name override; defaults to the first file's stem.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(required = true, value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long)]
    pub name: Option<String>,
    /// Also write every matrix of the sweep.
    #[arg(long)]
    pub save_matrices: bool,
}

#[derive(Debug, Args)]
pub struct GraphDiffArgs {
    #[arg(value_name = "MATRIX")]
    pub left: PathBuf,
    #[arg(value_name = "REFERENCE")]
    pub right: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Change,
    WallMs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(required = true, value_name = "CSV")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "change")]
    pub metric: Metric,
    /// Write the table to this file as well as stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
