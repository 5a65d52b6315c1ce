//! Index files.
//!
//! Layout: the 7 magic bytes `RQEIDX1`, a little-endian `u16` format version,
//! one byte naming the index kind, then the index as CBOR.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::approx_shannon::SamplingIndex;
use crate::error::{Error, Result};
use crate::exact1d::Exact1DIndex;
use crate::exactnd::ExactNDIndex;
use crate::oracle::OracleIndex;
use crate::sweep1d::Sweep1DIndex;

pub const MAGIC: &[u8; 7] = b"RQEIDX1";
pub const FORMAT_VERSION: u16 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexKind {
    Oracle,
    Exact1D,
    ExactND,
    Sampling,
    Deterministic,
}

impl IndexKind {
    pub const ALL: [IndexKind; 5] =
        [IndexKind::Oracle, IndexKind::Exact1D, IndexKind::ExactND, IndexKind::Sampling, IndexKind::Deterministic];

    fn tag(self) -> u8 {
        match self {
            IndexKind::Oracle => 1,
            IndexKind::Exact1D => 2,
            IndexKind::ExactND => 3,
            IndexKind::Sampling => 4,
            IndexKind::Deterministic => 5,
        }
    }

    fn from_tag(t: u8) -> Option<Self> {
        IndexKind::ALL.into_iter().find(|k| k.tag() == t)
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Oracle => "oracle",
            IndexKind::Exact1D => "exact1d",
            IndexKind::ExactND => "exactnd",
            IndexKind::Sampling => "sampling",
            IndexKind::Deterministic => "deterministic",
        }
    }
}

impl std::fmt::Display for IndexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Any index that can live in a file.
#[derive(Clone, Debug)]
pub enum AnyIndex {
    Oracle(OracleIndex),
    Exact1D(Exact1DIndex),
    ExactND(ExactNDIndex),
    Sampling(SamplingIndex),
    Deterministic(Sweep1DIndex),
}

impl AnyIndex {
    pub fn kind(&self) -> IndexKind {
        match self {
            AnyIndex::Oracle(_) => IndexKind::Oracle,
            AnyIndex::Exact1D(_) => IndexKind::Exact1D,
            AnyIndex::ExactND(_) => IndexKind::ExactND,
            AnyIndex::Sampling(_) => IndexKind::Sampling,
            AnyIndex::Deterministic(_) => IndexKind::Deterministic,
        }
    }
}

fn encode<T: Serialize, W: Write>(x: &T, out: W) -> Result<()> {
    ciborium::into_writer(x, out).map_err(|e| match e {
        ciborium::ser::Error::Io(io) => Error::Io(io),
        other => Error::Corrupt(other.to_string()),
    })
}

fn decode<T: for<'de> Deserialize<'de>, R: Read>(input: R) -> Result<T> {
    ciborium::from_reader(input).map_err(|e| Error::Corrupt(e.to_string()))
}

pub fn save<W: Write>(index: &AnyIndex, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&[index.kind().tag()])?;
    match index {
        AnyIndex::Oracle(x) => encode(x, &mut out)?,
        AnyIndex::Exact1D(x) => encode(x, &mut out)?,
        AnyIndex::ExactND(x) => encode(x, &mut out)?,
        AnyIndex::Sampling(x) => encode(x, &mut out)?,
        AnyIndex::Deterministic(x) => encode(x, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// Reads the header and returns the stored kind.
pub fn read_header<R: Read>(input: &mut R) -> Result<IndexKind> {
    let mut head = [0u8; 10];
    let mut got = 0;
    while got < head.len() {
        match input.read(&mut head[got..])? {
            0 => break,
            k => got += k,
        }
    }
    if got < MAGIC.len() || &head[..MAGIC.len()] != MAGIC {
        return Err(Error::NotAnIndex);
    }
    if got < head.len() {
        return Err(Error::Corrupt("truncated header".into()));
    }
    let version = u16::from_le_bytes([head[7], head[8]]);
    if version > FORMAT_VERSION {
        return Err(Error::UnsupportedVersion { found: version, supported: FORMAT_VERSION });
    }
    IndexKind::from_tag(head[9]).ok_or_else(|| Error::Corrupt(format!("unknown index kind tag {}", head[9])))
}

pub fn load<R: Read>(mut input: R) -> Result<AnyIndex> {
    let kind = read_header(&mut input)?;
    Ok(match kind {
        IndexKind::Oracle => AnyIndex::Oracle(decode(input)?),
        IndexKind::Exact1D => AnyIndex::Exact1D(decode(input)?),
        IndexKind::ExactND => AnyIndex::ExactND(decode(input)?),
        IndexKind::Sampling => AnyIndex::Sampling(decode(input)?),
        IndexKind::Deterministic => AnyIndex::Deterministic(decode(input)?),
    })
}

/// Like [`load`], failing with `WrongIndexKind` unless the file holds `expected`.
pub fn load_kind<R: Read>(mut input: R, expected: IndexKind) -> Result<AnyIndex> {
    let kind = read_header(&mut input)?;
    if kind != expected {
        return Err(Error::WrongIndexKind { expected: expected.to_string(), found: kind.to_string() });
    }
    load(std::io::Cursor::new(header_bytes(kind)).chain(input))
}

fn header_bytes(kind: IndexKind) -> Vec<u8> {
    let mut v = MAGIC.to_vec();
    v.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    v.push(kind.tag());
    v
}

pub fn save_file(index: &AnyIndex, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    save(index, std::io::BufWriter::new(f))
}

pub fn load_file(path: &Path) -> Result<AnyIndex> {
    load(std::io::BufReader::new(std::fs::File::open(path)?))
}
