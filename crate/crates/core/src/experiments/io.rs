//! Flat-file formats: CSV tables and JSON manifests.
//!
//! Reals are written in shortest round-trip form, so reading a file back gives
//! the exact values that were written.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::spec::{RunManifest, MANIFEST_VERSION};
use crate::error::{Error, Result};
use crate::shape::SurfacePoint;
use crate::stats::Ecdf;

pub const ECDF_HEADER: [&str; 2] = ["value", "cdf"];
pub const SURFACE_HEADER: [&str; 3] = ["x", "y", "h"];
pub const TW_HEADER: [&str; 2] = ["v", "F2"];

fn writer(path: &Path, header: &[&str]) -> Result<csv::Writer<BufWriter<File>>> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(header)?;
    Ok(w)
}

fn reader(path: &Path, header: &[&str]) -> Result<csv::Reader<BufReader<File>>> {
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let found = r.headers()?.clone();
    for (k, want) in header.iter().enumerate() {
        if found.get(k) != Some(*want) {
            return Err(Error::Parse {
                line: 1,
                column: k + 1,
                message: format!(
                    "{}: expected header {:?}, found {:?}",
                    path.display(),
                    header,
                    found.iter().collect::<Vec<_>>()
                ),
            });
        }
    }
    if found.len() != header.len() {
        return Err(Error::Parse {
            line: 1,
            column: header.len() + 1,
            message: format!("{}: unexpected extra columns", path.display()),
        });
    }
    Ok(r)
}

fn rows<const K: usize>(path: &Path, header: &[&str; K]) -> Result<Vec<[f64; K]>> {
    let mut r = reader(path, header)?;
    let mut out = Vec::new();
    for (idx, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = idx + 2;
        let mut row = [0.0; K];
        for (k, cell) in row.iter_mut().enumerate() {
            let field = rec.get(k).ok_or_else(|| Error::Parse {
                line,
                column: k + 1,
                message: "missing field".into(),
            })?;
            *cell = field.trim().parse().map_err(|e| Error::Parse {
                line,
                column: k + 1,
                message: format!("{field:?}: {e}"),
            })?;
        }
        out.push(row);
    }
    Ok(out)
}

/// One row per sample value, in sorted order, with `cdf = (i + 1) / M`.
pub fn write_ecdf_csv(path: &Path, ecdf: &Ecdf) -> Result<()> {
    let mut w = writer(path, &ECDF_HEADER)?;
    let m = ecdf.len() as f64;
    for (i, v) in ecdf.values().iter().enumerate() {
        w.serialize((v, (i + 1) as f64 / m))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ecdf_csv(path: &Path) -> Result<Ecdf> {
    let data = rows(path, &ECDF_HEADER)?;
    let m = data.len() as f64;
    for (i, [v, c]) in data.iter().enumerate() {
        if *c != (i + 1) as f64 / m || (i > 0 && *v < data[i - 1][0]) {
            return Err(Error::Parse {
                line: i + 2,
                column: 2,
                message: "rows are not a sorted empirical CDF".into(),
            });
        }
    }
    Ecdf::new(data.into_iter().map(|[v, _]| v).collect())
}

pub fn write_surface_csv(path: &Path, points: &[SurfacePoint]) -> Result<()> {
    let mut w = writer(path, &SURFACE_HEADER)?;
    for p in points {
        w.serialize((p.x, p.y, p.h))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_surface_csv(path: &Path) -> Result<Vec<SurfacePoint>> {
    Ok(rows(path, &SURFACE_HEADER)?
        .into_iter()
        .map(|[x, y, h]| SurfacePoint { x, y, h })
        .collect())
}

pub fn write_tw_csv(path: &Path, table: &[(f64, f64)]) -> Result<()> {
    let mut w = writer(path, &TW_HEADER)?;
    for row in table {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_tw_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(rows(path, &TW_HEADER)?.into_iter().map(|[v, f]| (v, f)).collect())
}

/// Arbitrary numeric table with the given header.
pub fn write_table_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = writer(path, header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let m: RunManifest = read_json(path)?;
    if m.format_version != MANIFEST_VERSION {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("manifest version {} is not supported", m.format_version),
        });
    }
    Ok(m)
}
