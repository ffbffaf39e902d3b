//! On-disk chunk and manifest formats.
//!
//! Each (column, chunk) pair owns one file under the spill directory:
//! fixed-width little-endian values (8 bytes per cell) followed by the mask
//! bitmap, no header. The manifest is a text file of `key=value` lines that
//! records the schema, chunking geometry, and the chunk file list; it is the
//! unit a checkpoint token points at.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::bitmap::Bitmap;
use super::{ChunkData, ChunkStoreError, ColumnData, ColumnDesc, ColumnKind, Schema};

pub(super) fn chunk_file_name(col: u32, chunk: u32) -> String {
    format!("c{col}_{chunk}.bin")
}

pub(super) fn write_chunk(dir: &Path, col: u32, chunk: u32, data: &ChunkData) -> Result<(), ChunkStoreError> {
    let path = dir.join(chunk_file_name(col, chunk));
    let file = fs::File::create(&path)?;
    let mut w = BufWriter::new(file);
    match &data.values {
        ColumnData::F64(v) => {
            for x in v {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        ColumnData::I64(v) => {
            for x in v {
                w.write_all(&x.to_le_bytes())?;
            }
        }
    }
    w.write_all(data.mask.as_bytes())?;
    w.flush()?;
    Ok(())
}

pub(super) fn read_chunk(
    dir: &Path,
    col: u32,
    chunk: u32,
    kind: ColumnKind,
    rows: usize,
) -> Result<ChunkData, ChunkStoreError> {
    let path = dir.join(chunk_file_name(col, chunk));
    let expected = rows * 8 + rows.div_ceil(8);
    let mut buf = Vec::with_capacity(expected);
    fs::File::open(&path)?.read_to_end(&mut buf)?;
    if buf.len() != expected {
        return Err(ChunkStoreError::Manifest(format!(
            "chunk file {} has {} bytes, expected {}",
            path.display(),
            buf.len(),
            expected
        )));
    }
    let values = match kind {
        ColumnKind::Float64 => ColumnData::F64(
            buf[..rows * 8]
                .chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
                .collect(),
        ),
        ColumnKind::Int64 | ColumnKind::CategoryCode => ColumnData::I64(
            buf[..rows * 8]
                .chunks_exact(8)
                .map(|b| i64::from_le_bytes(b.try_into().unwrap()))
                .collect(),
        ),
    };
    let mask = Bitmap::from_bytes(buf[rows * 8..].to_vec(), rows);
    Ok(ChunkData { values, mask })
}

const MANIFEST_NAME: &str = "manifest.txt";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some(other) => out.push(other),
                None => {}
            }
        } else {
            out.push(c);
        }
    }
    out
}

pub(super) fn manifest_path(dir: &Path) -> PathBuf {
    dir.join(MANIFEST_NAME)
}

pub(super) fn write_manifest(
    dir: &Path,
    schema: &Schema,
    chunk_rows: usize,
    n_rows: u64,
    n_chunks: usize,
) -> Result<PathBuf, ChunkStoreError> {
    let path = manifest_path(dir);
    let file = fs::File::create(&path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "format=chunktable-v1")?;
    writeln!(w, "n_rows={n_rows}")?;
    writeln!(w, "chunk_rows={chunk_rows}")?;
    writeln!(w, "n_columns={}", schema.columns.len())?;
    for (i, col) in schema.columns.iter().enumerate() {
        writeln!(w, "column.{i}.name={}", escape(&col.name))?;
        writeln!(w, "column.{i}.kind={}", col.kind.as_str())?;
        writeln!(w, "column.{i}.categories={}", col.categories.len())?;
        for (k, label) in col.categories.iter().enumerate() {
            writeln!(w, "column.{i}.category.{k}={}", escape(label))?;
        }
    }
    for col in 0..schema.columns.len() as u32 {
        for chunk in 0..n_chunks as u32 {
            writeln!(w, "file.{col}.{chunk}={}", chunk_file_name(col, chunk))?;
        }
    }
    w.flush()?;
    Ok(path)
}

pub(super) struct ManifestContents {
    pub schema: Schema,
    pub chunk_rows: usize,
    pub n_rows: u64,
}

pub(super) fn read_manifest(path: &Path) -> Result<ManifestContents, ChunkStoreError> {
    let file = fs::File::open(path)
        .map_err(|e| ChunkStoreError::Manifest(format!("cannot open {}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ChunkStoreError::Manifest(format!("malformed line: {line}")));
        };
        pairs.push((key.to_string(), value.to_string()));
    }
    let get = |key: &str| -> Result<&str, ChunkStoreError> {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| ChunkStoreError::Manifest(format!("missing key {key}")))
    };
    if get("format")? != "chunktable-v1" {
        return Err(ChunkStoreError::Manifest("unsupported format".into()));
    }
    let n_rows: u64 = get("n_rows")?
        .parse()
        .map_err(|_| ChunkStoreError::Manifest("bad n_rows".into()))?;
    let chunk_rows: usize = get("chunk_rows")?
        .parse()
        .map_err(|_| ChunkStoreError::Manifest("bad chunk_rows".into()))?;
    let n_columns: usize = get("n_columns")?
        .parse()
        .map_err(|_| ChunkStoreError::Manifest("bad n_columns".into()))?;
    let mut columns = Vec::with_capacity(n_columns);
    for i in 0..n_columns {
        let name = unescape(get(&format!("column.{i}.name"))?);
        let kind = ColumnKind::from_str(get(&format!("column.{i}.kind"))?)
            .ok_or_else(|| ChunkStoreError::Manifest(format!("bad kind for column {i}")))?;
        let n_cat: usize = get(&format!("column.{i}.categories"))?
            .parse()
            .map_err(|_| ChunkStoreError::Manifest("bad category count".into()))?;
        let mut categories = Vec::with_capacity(n_cat);
        for k in 0..n_cat {
            categories.push(unescape(get(&format!("column.{i}.category.{k}"))?));
        }
        columns.push(ColumnDesc {
            name,
            kind,
            categories,
        });
    }
    Ok(ManifestContents {
        schema: Schema::new(columns)?,
        chunk_rows,
        n_rows,
    })
}
