//! Unlabeled point clouds from raw image files or a synthetic sphere.
//!
//! Supported layouts are IDX unsigned-byte files (MNIST) and the CIFAR-10
//! binary format. CIFAR label bytes are skipped and never returned.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::designs::sphere_point;
use crate::error::{invalid, Error, Result};
use crate::points::Points;

pub const CIFAR_PIXELS: usize = 3072;
pub const CIFAR_RECORD: usize = CIFAR_PIXELS + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataSource {
    Idx,
    CifarBin,
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalePolicy {
    /// Byte values 0..=255 as they are.
    RawBytes,
    /// Byte values divided by 255.
    UnitInterval,
}

impl ScalePolicy {
    fn apply(self, byte: u8) -> f64 {
        match self {
            ScalePolicy::RawBytes => f64::from(byte),
            ScalePolicy::UnitInterval => f64::from(byte) / 255.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Points,
    pub source: DataSource,
    pub scale_policy: ScalePolicy,
}

impl PointCloud {
    pub fn d(&self) -> usize {
        self.points.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn format_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset: offset as u64,
        message: message.into(),
    }
}

fn to_points(d: usize, payload: &[u8], scale: ScalePolicy) -> Result<Points> {
    Points::new(d, payload.iter().map(|&b| scale.apply(b)).collect())
}

/// Parses an IDX file of unsigned bytes. Item `i` is the flattened
/// row-major block following the first dimension.
pub fn parse_idx(bytes: &[u8], max_items: usize, scale: ScalePolicy) -> Result<PointCloud> {
    if bytes.len() < 4 {
        return Err(format_error(bytes.len(), "truncated IDX header"));
    }
    if bytes[0] != 0 || bytes[1] != 0 {
        return Err(format_error(0, "bad IDX magic"));
    }
    if bytes[2] != 0x08 {
        return Err(format_error(
            2,
            format!("unsupported IDX element type 0x{:02x}", bytes[2]),
        ));
    }
    let ndims = bytes[3] as usize;
    if ndims == 0 {
        return Err(format_error(3, "IDX file declares zero dimensions"));
    }
    let header = 4 + 4 * ndims;
    if bytes.len() < header {
        return Err(format_error(bytes.len(), "truncated IDX dimension list"));
    }
    let dims: Vec<usize> = bytes[4..header]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();
    let items = dims[0];
    let d: usize = dims[1..].iter().product();
    if d == 0 {
        return Err(format_error(4, "IDX item size is zero"));
    }
    let expected = items
        .checked_mul(d)
        .ok_or_else(|| format_error(4, "IDX dimensions overflow"))?;
    let payload = &bytes[header..];
    if payload.len() < expected {
        return Err(format_error(
            bytes.len(),
            format!(
                "truncated IDX payload: expected {expected} bytes, found {}",
                payload.len()
            ),
        ));
    }
    if payload.len() > expected {
        return Err(format_error(
            header + expected,
            format!(
                "IDX payload has {} trailing bytes",
                payload.len() - expected
            ),
        ));
    }
    let take = items.min(max_items);
    Ok(PointCloud {
        points: to_points(d, &payload[..take * d], scale)?,
        source: DataSource::Idx,
        scale_policy: scale,
    })
}

pub fn load_idx(
    path: impl AsRef<Path>,
    max_items: usize,
    scale: ScalePolicy,
) -> Result<PointCloud> {
    parse_idx(&fs::read(path)?, max_items, scale)
}

/// Parses CIFAR-10 binary records: one label byte then 3072 pixel bytes.
pub fn parse_cifar_bin(bytes: &[u8], max_items: usize, scale: ScalePolicy) -> Result<PointCloud> {
    if !bytes.len().is_multiple_of(CIFAR_RECORD) {
        let whole = bytes.len() / CIFAR_RECORD * CIFAR_RECORD;
        return Err(format_error(
            whole,
            format!(
                "file length {} is not a multiple of {CIFAR_RECORD}",
                bytes.len()
            ),
        ));
    }
    let pixels: Vec<f64> = bytes
        .chunks_exact(CIFAR_RECORD)
        .take(max_items)
        .flat_map(|record| record[1..].iter().map(|&b| scale.apply(b)))
        .collect();
    Ok(PointCloud {
        points: Points::new(CIFAR_PIXELS, pixels)?,
        source: DataSource::CifarBin,
        scale_policy: scale,
    })
}

pub fn load_cifar_bin(
    path: impl AsRef<Path>,
    max_items: usize,
    scale: ScalePolicy,
) -> Result<PointCloud> {
    parse_cifar_bin(&fs::read(path)?, max_items, scale)
}

/// Encodes unsigned bytes as an IDX file with the given dimensions.
pub fn encode_idx(dims: &[u32], payload: &[u8]) -> Result<Vec<u8>> {
    if dims.is_empty() || dims.len() > 255 {
        return Err(invalid("IDX needs between 1 and 255 dimensions"));
    }
    let expected: usize = dims.iter().map(|&d| d as usize).product();
    if expected != payload.len() {
        return Err(invalid(format!(
            "dimensions describe {expected} bytes, payload has {}",
            payload.len()
        )));
    }
    let mut out = vec![0, 0, 0x08, dims.len() as u8];
    for d in dims {
        out.extend_from_slice(&d.to_be_bytes());
    }
    out.extend_from_slice(payload);
    Ok(out)
}

pub fn write_idx(path: impl AsRef<Path>, dims: &[u32], payload: &[u8]) -> Result<()> {
    fs::write(path, encode_idx(dims, payload)?)?;
    Ok(())
}

/// Writes CIFAR-10 binary records from `(label, pixels)` pairs.
pub fn write_cifar_bin(path: impl AsRef<Path>, records: &[(u8, Vec<u8>)]) -> Result<()> {
    let mut out = Vec::with_capacity(records.len() * CIFAR_RECORD);
    for (i, (label, pixels)) in records.iter().enumerate() {
        if pixels.len() != CIFAR_PIXELS {
            return Err(invalid(format!(
                "record {i} has {} pixels, expected {CIFAR_PIXELS}",
                pixels.len()
            )));
        }
        out.push(*label);
        out.extend_from_slice(pixels);
    }
    fs::write(path, out)?;
    Ok(())
}

/// `count` points uniform on the sphere of radius `sqrt(d)` in `R^d`.
pub fn sphere_cloud(d: usize, count: usize, seed: u64) -> Result<PointCloud> {
    if d == 0 {
        return Err(invalid("sphere dimension must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<f64> = (0..count).flat_map(|_| sphere_point(&mut rng, d)).collect();
    Ok(PointCloud {
        points: Points::new(d, coords)?,
        source: DataSource::Synthetic,
        scale_policy: ScalePolicy::RawBytes,
    })
}
