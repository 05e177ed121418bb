//! Constrained and unconstrained elastic similarity for time series.
//!
//! DTW and LCS restricted to a Sakoe-Chiba band, pairwise distance matrices
//! with wall-clock timing, and 1-nearest-neighbor graph comparison across
//! band widths.

pub mod constraints;
pub mod dataset;
pub mod error;
pub mod matrix;
pub mod measures;
pub mod nn;
pub mod series;
pub mod store;

pub use constraints::{
    band_window, resolve_band, BandSpec, Radius, ResolvedBand, DEFAULT_SCHEDULE,
};
pub use dataset::{load_ucr, load_ucr_files, parse_ucr, znormalize, Dataset};
pub use error::{Error, Result};
pub use matrix::{
    compute_matrix, compute_matrix_with, ComputeOptions, DistanceMatrix, MeasureConfig,
    Parallelism, Provenance, TimingRecord,
};
pub use measures::{
    dtw_distance, euclidean, lcs_distance, lcs_length, point_match, CostKind, GroundCost,
    MatchMode, MatchSpec,
};
pub use nn::{
    constraint_sweep, graph_change, nn_graph, NNGraph, Sweep, SweepFamily, SweepOptions,
    SweepReport,
};
pub use series::TimeSeries;
pub use store::{read_matrix, write_matrix, write_matrix_csv};

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    use std::fmt::Write as _;
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
}
