//! Point-set files.
//!
//! Binary layout (all integers and floats little-endian):
//!
//! ```text
//! b"CAPF"  version: u16  dim: u32  count: u64
//! count * dim f64 coordinates, row-major
//! [optional] len: u32, then len bytes of JSON metadata
//! ```
//!
//! The JSON form is `{"dim": .., "points": [[..], ..], "metadata": ..}` with
//! shortest round-trip float formatting.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::sphere::UnitVector;

pub const MAGIC: &[u8; 4] = b"CAPF";
pub const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointFormat {
    Binary,
    Json,
}

impl PointFormat {
    /// `.json` means JSON, anything else binary.
    pub fn from_path(path: &Path) -> PointFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => PointFormat::Json,
            _ => PointFormat::Binary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.len(),
            });
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Format("non-finite coordinate".into()));
        }
        Ok(PointSet {
            dim,
            points,
            metadata: None,
        })
    }

    pub fn from_unit(dim: usize, points: &[UnitVector]) -> Result<Self> {
        PointSet::new(dim, points.iter().map(|p| p.coords().to_vec()).collect())
    }

    pub fn with_metadata(mut self, metadata: Value) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points normalized onto the sphere.
    pub fn to_unit_vectors(&self) -> Result<Vec<UnitVector>> {
        self.points.iter().map(|p| UnitVector::new(p.clone())).collect()
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        let dim = u32::try_from(self.dim).map_err(|_| Error::Format("dimension exceeds u32".into()))?;
        w.write_all(&dim.to_le_bytes())?;
        w.write_all(&(self.points.len() as u64).to_le_bytes())?;
        for c in self.points.iter().flatten() {
            w.write_all(&c.to_le_bytes())?;
        }
        if let Some(meta) = &self.metadata {
            let bytes = serde_json::to_vec(meta).map_err(|e| Error::Format(e.to_string()))?;
            let len = u32::try_from(bytes.len())
                .map_err(|_| Error::Format("metadata exceeds u32 length".into()))?;
            w.write_all(&len.to_le_bytes())?;
            w.write_all(&bytes)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("missing CAPF magic".into()));
        }
        let version = u16::from_le_bytes(read_array(&mut r)?);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported CAPF version {version}")));
        }
        let dim = u32::from_le_bytes(read_array(&mut r)?) as usize;
        let count = u64::from_le_bytes(read_array(&mut r)?);
        let count = usize::try_from(count).map_err(|_| Error::Format("count too large".into()))?;
        let mut points = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let mut p = Vec::with_capacity(dim);
            for _ in 0..dim {
                p.push(f64::from_le_bytes(read_array(&mut r)?));
            }
            points.push(p);
        }
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        let metadata = match rest.len() {
            0 => None,
            1..=3 => return Err(Error::Format("truncated metadata length".into())),
            _ => {
                let len = u32::from_le_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
                if rest.len() != 4 + len {
                    return Err(Error::Format(format!(
                        "metadata length {len} does not match {} trailing bytes",
                        rest.len() - 4
                    )));
                }
                Some(serde_json::from_slice(&rest[4..]).map_err(|e| Error::Format(e.to_string()))?)
            }
        };
        let mut set = PointSet::new(dim, points)?;
        set.metadata = metadata;
        Ok(set)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PointSet = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let metadata = raw.metadata;
        let mut set = PointSet::new(raw.dim, raw.points)?;
        set.metadata = metadata;
        Ok(set)
    }

    pub fn save(&self, path: &Path, format: PointFormat) -> Result<()> {
        let file = File::create(path)?;
        match format {
            PointFormat::Binary => self.write_binary(BufWriter::new(file)),
            PointFormat::Json => {
                let mut w = BufWriter::new(file);
                w.write_all(self.to_json()?.as_bytes())?;
                w.flush()?;
                Ok(())
            }
        }
    }

    /// Reads either format, recognizing binary files by their magic bytes.
    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
        if bytes.starts_with(MAGIC) {
            PointSet::read_binary(bytes.as_slice())
        } else {
            let text = std::str::from_utf8(&bytes).map_err(|e| Error::Format(e.to_string()))?;
            PointSet::from_json(text)
        }
    }
}

fn read_array<R: Read, const K: usize>(r: &mut R) -> Result<[u8; K]> {
    let mut buf = [0u8; K];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Format(format!("truncated CAPF data: {e}")))?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    fn sample() -> PointSet {
        PointSet::new(3, vec![vec![0.1, -0.2, 1e-300], vec![1.0 / 3.0, f64::MIN_POSITIVE, -0.0]])
            .unwrap()
    }

    #[test]
    fn header_layout() {
        let mut buf = Vec::new();
        sample().write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"CAPF");
        assert_eq!(&buf[4..6], &[1, 0]);
        assert_eq!(&buf[6..10], &[3, 0, 0, 0]);
        assert_eq!(&buf[10..18], &[2, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(buf.len(), 18 + 6 * 8);
        assert_eq!(&buf[18..26], &0.1f64.to_le_bytes());
    }

    #[test]
    fn metadata_trailer() {
        let set = sample().with_metadata(json!({"seed": 7, "psi": "pi/3"}));
        let mut buf = Vec::new();
        set.write_binary(&mut buf).unwrap();
        let back = PointSet::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back, set);
        buf.pop();
        assert!(matches!(PointSet::read_binary(buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_garbage() {
        assert!(PointSet::read_binary(&b"CAPX"[..]).is_err());
        assert!(PointSet::read_binary(&b"CAPF\x01\x00\x02\x00\x00\x00\x01"[..]).is_err());
        assert!(PointSet::new(2, vec![vec![1.0]]).is_err());
        assert!(PointSet::new(1, vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn files_in_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let set = sample().with_metadata(json!({"n": 3}));
        for (name, format) in [("a.capf", PointFormat::Binary), ("a.json", PointFormat::Json)] {
            let path = dir.path().join(name);
            assert_eq!(PointFormat::from_path(&path), format);
            set.save(&path, format).unwrap();
            let back = PointSet::load(&path).unwrap();
            assert_eq!(back.points.len(), 2);
            for (a, b) in back.points.iter().flatten().zip(set.points.iter().flatten()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            assert_eq!(back.metadata, set.metadata);
        }
    }

    proptest! {
        #[test]
        fn binary_round_trip_is_bit_exact(
            dim in 1usize..6,
            raw in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::ZERO | proptest::num::f64::SUBNORMAL, 0..60),
        ) {
            let count = raw.len() / dim;
            let points: Vec<Vec<f64>> = raw.chunks_exact(dim).take(count).map(<[f64]>::to_vec).collect();
            let set = PointSet::new(dim, points).unwrap();
            let mut buf = Vec::new();
            set.write_binary(&mut buf).unwrap();
            let back = PointSet::read_binary(buf.as_slice()).unwrap();
            prop_assert_eq!(back.dim, dim);
            prop_assert_eq!(back.points.len(), set.points.len());
            for (a, b) in back.points.iter().flatten().zip(set.points.iter().flatten()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }

        #[test]
        fn json_round_trip_is_exact(
            raw in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::ZERO, 0..40),
        ) {
            let points: Vec<Vec<f64>> = raw.chunks_exact(2).map(<[f64]>::to_vec).collect();
            let set = PointSet::new(2, points).unwrap();
            let back = PointSet::from_json(&set.to_json().unwrap()).unwrap();
            for (a, b) in back.points.iter().flatten().zip(set.points.iter().flatten()) {
                prop_assert_eq!(a, b);
            }
        }
    }
}
