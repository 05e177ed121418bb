//! Binary distance-matrix container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "WBMATRIX"
//! version  u32
//! hlen     u32      length of the JSON header
//! header   hlen bytes
//! values   f64 × k  upper triangle (i < j) row-major for symmetric measures,
//!                   every off-diagonal cell row-major otherwise
//! sha256   32 bytes over everything above
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{DistanceMatrix, MeasureConfig, Provenance, TimingRecord};

pub const MAGIC: &[u8; 8] = b"WBMATRIX";
pub const FORMAT_VERSION: u32 = 1;
const DIGEST_LEN: usize = 32;
const PREAMBLE_LEN: usize = 8 + 4 + 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Layout {
    UpperTriangle,
    OffDiagonal,
}

#[derive(Serialize, Deserialize)]
struct Header {
    dataset_name: String,
    n: usize,
    layout: Layout,
    normalized: bool,
    config: MeasureConfig,
    timing: TimingRecord,
    provenance: Option<Provenance>,
}

pub fn encode_matrix(m: &DistanceMatrix) -> Vec<u8> {
    let n = m.len();
    let layout = if m.is_symmetric() {
        Layout::UpperTriangle
    } else {
        Layout::OffDiagonal
    };
    let header = Header {
        dataset_name: m.dataset_name.clone(),
        n,
        layout,
        normalized: m.normalized,
        config: m.config,
        timing: m.timing.clone(),
        provenance: m.provenance.clone(),
    };
    let header = serde_json::to_vec(&header).expect("header serializes");

    let mut buf = Vec::with_capacity(PREAMBLE_LEN + header.len() + n * n * 8 + DIGEST_LEN);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(header.len() as u32).to_le_bytes());
    buf.extend_from_slice(&header);
    for (i, j) in cells(n, layout) {
        buf.extend_from_slice(&m.get(i, j).to_le_bytes());
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

pub fn decode_matrix(bytes: &[u8]) -> Result<DistanceMatrix> {
    if bytes.len() < PREAMBLE_LEN + DIGEST_LEN {
        return Err(if MAGIC.starts_with(&bytes[..bytes.len().min(8)]) {
            Error::Checksum
        } else {
            Error::BadMagic
        });
    }
    if &bytes[..8] != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::FormatVersion {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(Error::Checksum);
    }

    let hlen = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let header_end = PREAMBLE_LEN
        .checked_add(hlen)
        .filter(|&end| end <= body.len())
        .ok_or_else(|| Error::Malformed("header length exceeds file".into()))?;
    let header: Header = serde_json::from_slice(&body[PREAMBLE_LEN..header_end])
        .map_err(|e| Error::Malformed(format!("header: {e}")))?;

    let n = header.n;
    let payload = &body[header_end..];
    let expected = cells(n, header.layout).count() * 8;
    if payload.len() != expected {
        return Err(Error::Malformed(format!(
            "expected {expected} value bytes for n={n}, found {}",
            payload.len()
        )));
    }
    let mut values = vec![0.0; n * n];
    for ((i, j), chunk) in cells(n, header.layout).zip(payload.chunks_exact(8)) {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        values[i * n + j] = v;
        if header.layout == Layout::UpperTriangle {
            values[j * n + i] = v;
        }
    }
    Ok(DistanceMatrix::from_parts(
        header.dataset_name,
        header.config,
        header.normalized,
        n,
        values,
        header.timing,
        header.provenance,
    ))
}

fn cells(n: usize, layout: Layout) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| {
        let start = if layout == Layout::UpperTriangle {
            i + 1
        } else {
            0
        };
        (start..n).filter(move |&j| j != i).map(move |j| (i, j))
    })
}

pub fn write_matrix(m: &DistanceMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_matrix(m))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DistanceMatrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_matrix(&bytes)
}

pub fn write_matrix_csv(m: &DistanceMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), m.to_csv().as_bytes())
}

/// Writes through a temporary file in the target directory, so a failed
/// write never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
