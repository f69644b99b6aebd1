//! Binary snapshot files.
//!
//! Little-endian layout:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `NSCF` |
//! | 2     | `u16` version (1) |
//! | 8     | `f64` box length `L` |
//! | 4     | `u32` cutoff `K` |
//! | 8     | `f64` time |
//! | 48 n  | per wavevector in lattice order: `re, im` of the three components |
//!
//! The mode count `n = (2K+1)^3 - 1` follows from `K`, so the file length is
//! fully determined by the header.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::spectral::{Lattice, Mode, SpectralField};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"NSCF";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 4 + 2 + 8 + 4 + 8;
pub const MODE_LEN: usize = 48;
/// Relative tolerance for reality and incompressibility on read.
pub const READ_TOL: f64 = 1e-10;

pub fn encode_snapshot(field: &SpectralField, time: f64) -> Vec<u8> {
    let lat = field.lattice();
    let mut buf = Vec::with_capacity(HEADER_LEN + MODE_LEN * lat.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&lat.box_len().to_le_bytes());
    buf.extend_from_slice(&lat.k_max().to_le_bytes());
    buf.extend_from_slice(&time.to_le_bytes());
    for c in field.coeffs() {
        for z in c {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    buf
}

pub fn write_snapshot(field: &SpectralField, time: f64, path: impl AsRef<Path>) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode_snapshot(field, time))?;
    file.sync_all()?;
    Ok(())
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

/// Parses a snapshot; the header is checked before the payload is touched.
pub fn decode_snapshot(bytes: &[u8]) -> Result<(SpectralField, f64)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Snapshot(format!(
            "file is {} bytes, shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Snapshot(format!("bad magic {:?}", &bytes[0..4])));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let box_len = f64_at(bytes, 6);
    let k_max = u32::from_le_bytes(bytes[14..18].try_into().unwrap());
    let time = f64_at(bytes, 18);
    if !time.is_finite() {
        return Err(Error::Snapshot("non-finite time".into()));
    }
    let lattice = Lattice::new(box_len, k_max).map_err(|e| Error::Snapshot(format!("bad header: {e}")))?;
    let expected = HEADER_LEN + MODE_LEN * lattice.len();
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "expected {expected} bytes for K = {k_max}, found {}",
            bytes.len()
        )));
    }
    let coeffs: Vec<Mode> = bytes[HEADER_LEN..]
        .chunks_exact(MODE_LEN)
        .map(|chunk| {
            let v = |j: usize| Complex64::new(f64_at(chunk, 16 * j), f64_at(chunk, 16 * j + 8));
            [v(0), v(1), v(2)]
        })
        .collect();
    let field = SpectralField::from_coefficients(lattice, coeffs, READ_TOL)
        .map_err(|e| Error::Snapshot(format!("non-physical payload: {e}")))?;
    Ok((field, time))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(SpectralField, f64)> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::Snapshot(format!("{}: {e}", path.display())))?;
    decode_snapshot(&bytes)
}

/// Tabular dump: one row per wavevector with `kx, ky, kz` and the six reals.
pub fn snapshot_to_csv(field: &SpectralField, out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kx", "ky", "kz", "re_u1", "im_u1", "re_u2", "im_u2", "re_u3", "im_u3"])?;
    let lat = field.lattice();
    for (i, c) in field.coeffs().iter().enumerate() {
        let k = lat.wavevector(i);
        let mut row: Vec<String> = k.iter().map(|x| x.to_string()).collect();
        for z in c {
            row.push(format!("{:e}", z.re));
            row.push(format!("{:e}", z.im));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
