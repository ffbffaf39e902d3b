//! CSV ingestion and row-at-a-time table construction.
//!
//! Ingestion is two-pass: the first pass counts rows, validates numeric
//! cells, and tallies category frequencies; the second pass dictionary-encodes
//! and writes chunks straight to their spill files. The cache starts cold, so
//! ingest memory is one chunk stripe (all columns of the current chunk),
//! independent of table size.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::bitmap::Bitmap;
use super::{
    chunk_byte_size, chunkfile, ChunkData, ChunkStoreError, ChunkedTable, ColumnData, ColumnDesc,
    ColumnKind, Schema, FLOAT_SENTINEL, INT_SENTINEL,
};

/// One cell handed to [`TableBuilder::push_row`].
#[derive(Clone, Copy, Debug)]
pub enum CellValue {
    F64(f64),
    I64(i64),
    Missing,
}

/// Streaming constructor for a [`ChunkedTable`]. Rows are appended in order;
/// full chunks are written to the spill directory immediately.
#[derive(Debug)]
pub struct TableBuilder {
    schema: Schema,
    chunk_rows: usize,
    cache_budget_bytes: usize,
    spill_dir: PathBuf,
    values: Vec<ColumnData>,
    masks: Vec<Vec<bool>>,
    filled: usize,
    n_rows: u64,
    chunks_sealed: u32,
}

impl TableBuilder {
    pub fn new(
        schema: Schema,
        chunk_rows: usize,
        cache_budget_bytes: usize,
        spill_dir: &Path,
    ) -> Result<Self, ChunkStoreError> {
        if chunk_rows == 0 {
            return Err(ChunkStoreError::Schema("chunk_rows must be >= 1".into()));
        }
        if schema.is_empty() {
            return Err(ChunkStoreError::Schema(
                "schema must declare at least one column".into(),
            ));
        }
        if cache_budget_bytes < chunk_byte_size(chunk_rows) {
            return Err(ChunkStoreError::BudgetTooSmall {
                budget: cache_budget_bytes,
                needed: chunk_byte_size(chunk_rows),
                context: "one full chunk must fit in the cache",
            });
        }
        fs::create_dir_all(spill_dir)?;
        let values = schema
            .columns
            .iter()
            .map(|c| match c.kind {
                ColumnKind::Float64 => ColumnData::F64(Vec::with_capacity(chunk_rows)),
                _ => ColumnData::I64(Vec::with_capacity(chunk_rows)),
            })
            .collect();
        let masks = vec![Vec::with_capacity(chunk_rows); schema.len()];
        Ok(TableBuilder {
            schema,
            chunk_rows,
            cache_budget_bytes,
            spill_dir: spill_dir.to_path_buf(),
            values,
            masks,
            filled: 0,
            n_rows: 0,
            chunks_sealed: 0,
        })
    }

    pub fn push_row(&mut self, cells: &[CellValue]) -> Result<(), ChunkStoreError> {
        if cells.len() != self.schema.len() {
            return Err(ChunkStoreError::LengthMismatch {
                rows: self.schema.len(),
                values: cells.len(),
            });
        }
        for (i, cell) in cells.iter().enumerate() {
            let desc = self.schema.column(i as u32);
            let missing = matches!(cell, CellValue::Missing);
            match (&mut self.values[i], cell, desc.kind) {
                (ColumnData::F64(v), CellValue::F64(x), ColumnKind::Float64) => v.push(*x),
                (ColumnData::F64(v), CellValue::Missing, _) => v.push(FLOAT_SENTINEL),
                (ColumnData::I64(v), CellValue::I64(x), _) => v.push(*x),
                (ColumnData::I64(v), CellValue::Missing, _) => v.push(INT_SENTINEL),
                _ => {
                    return Err(ChunkStoreError::KindMismatch {
                        column: desc.name.clone(),
                        expected: desc.kind.as_str(),
                    })
                }
            }
            self.masks[i].push(missing);
        }
        self.filled += 1;
        self.n_rows += 1;
        if self.filled == self.chunk_rows {
            self.seal_chunk()?;
        }
        Ok(())
    }

    fn seal_chunk(&mut self) -> Result<(), ChunkStoreError> {
        let chunk = self.chunks_sealed;
        for col in 0..self.schema.len() {
            let values = std::mem::replace(
                &mut self.values[col],
                match self.schema.column(col as u32).kind {
                    ColumnKind::Float64 => ColumnData::F64(Vec::with_capacity(self.chunk_rows)),
                    _ => ColumnData::I64(Vec::with_capacity(self.chunk_rows)),
                },
            );
            let mask_bools = std::mem::replace(
                &mut self.masks[col],
                Vec::with_capacity(self.chunk_rows),
            );
            let mut mask = Bitmap::zeroed(mask_bools.len());
            for (i, &m) in mask_bools.iter().enumerate() {
                if m {
                    mask.set(i, true);
                }
            }
            let data = ChunkData { values, mask };
            chunkfile::write_chunk(&self.spill_dir, col as u32, chunk, &data)?;
        }
        self.chunks_sealed += 1;
        self.filled = 0;
        Ok(())
    }

    pub fn finish(mut self) -> Result<ChunkedTable, ChunkStoreError> {
        if self.filled > 0 {
            self.seal_chunk()?;
        }
        let n_chunks = self.chunks_sealed as usize;
        chunkfile::write_manifest(
            &self.spill_dir,
            &self.schema,
            self.chunk_rows,
            self.n_rows,
            n_chunks,
        )?;
        ChunkedTable::from_parts(
            self.schema,
            self.chunk_rows,
            self.n_rows,
            self.spill_dir,
            self.cache_budget_bytes,
        )
    }
}

/// Ingestion settings. `missing_tokens` are matched against raw cell text.
#[derive(Clone, Debug)]
pub struct CsvOptions {
    pub missing_tokens: Vec<String>,
    pub chunk_rows: usize,
    pub cache_budget_bytes: usize,
    pub spill_dir: PathBuf,
}

impl CsvOptions {
    pub fn new(spill_dir: &Path) -> Self {
        CsvOptions {
            missing_tokens: vec!["NA".to_string(), String::new()],
            chunk_rows: 65_536,
            cache_budget_bytes: 1 << 30,
            spill_dir: spill_dir.to_path_buf(),
        }
    }
}

fn csv_format_err(e: csv::Error) -> ChunkStoreError {
    ChunkStoreError::Format(e.to_string())
}

/// Read a headered CSV into a chunked table. Declared columns must all appear
/// in the header; undeclared CSV columns are ignored. Cells matching a missing
/// token are masked and given a sentinel value; category columns are
/// dictionary-encoded by descending observed frequency, ties lexicographic.
pub fn ingest_csv(
    path: &Path,
    declared: &[(String, ColumnKind)],
    options: &CsvOptions,
) -> Result<ChunkedTable, ChunkStoreError> {
    let columns: Vec<ColumnDesc> = declared
        .iter()
        .map(|(name, kind)| ColumnDesc {
            name: name.clone(),
            kind: *kind,
            categories: Vec::new(),
        })
        .collect();
    let schema = Schema::new(columns)?;
    if schema.is_empty() {
        return Err(ChunkStoreError::Schema(
            "schema must declare at least one column".into(),
        ));
    }

    let mut reader = csv::Reader::from_path(path).map_err(csv_format_err)?;
    let headers = reader.headers().map_err(csv_format_err)?.clone();
    if headers.is_empty() {
        return Err(ChunkStoreError::Format("header row missing".into()));
    }
    let mut csv_index = Vec::with_capacity(schema.len());
    for desc in &schema.columns {
        let idx = headers
            .iter()
            .position(|h| h == desc.name)
            .ok_or_else(|| ChunkStoreError::UnknownColumn(desc.name.clone()))?;
        csv_index.push(idx);
    }

    let is_missing = |cell: &str| options.missing_tokens.iter().any(|t| t == cell);

    // Pass 1: validate numerics, count category frequencies.
    let mut freq: Vec<HashMap<String, u64>> = vec![HashMap::new(); schema.len()];
    let mut record = csv::StringRecord::new();
    let mut row: u64 = 0;
    while reader.read_record(&mut record).map_err(csv_format_err)? {
        for (i, desc) in schema.columns.iter().enumerate() {
            let cell = record.get(csv_index[i]).unwrap_or("");
            if is_missing(cell) {
                continue;
            }
            match desc.kind {
                ColumnKind::Float64 => {
                    if cell.parse::<f64>().is_err() {
                        return Err(ChunkStoreError::Parse {
                            row,
                            column: desc.name.clone(),
                            detail: format!("'{cell}' is not a float"),
                        });
                    }
                }
                ColumnKind::Int64 => {
                    if cell.parse::<i64>().is_err() {
                        return Err(ChunkStoreError::Parse {
                            row,
                            column: desc.name.clone(),
                            detail: format!("'{cell}' is not an integer"),
                        });
                    }
                }
                ColumnKind::CategoryCode => {
                    *freq[i].entry(cell.to_string()).or_insert(0) += 1;
                }
            }
        }
        row += 1;
    }

    // Dictionary: descending frequency, ties broken lexicographically.
    let mut dictionaries: Vec<HashMap<String, i64>> = Vec::with_capacity(schema.len());
    let mut columns = schema.columns.clone();
    for (i, desc) in columns.iter_mut().enumerate() {
        if desc.kind != ColumnKind::CategoryCode {
            dictionaries.push(HashMap::new());
            continue;
        }
        let mut entries: Vec<(String, u64)> = freq[i].drain().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut dict = HashMap::with_capacity(entries.len());
        desc.categories = entries
            .iter()
            .enumerate()
            .map(|(code, (label, _))| {
                dict.insert(label.clone(), code as i64);
                label.clone()
            })
            .collect();
        dictionaries.push(dict);
    }
    let schema = Schema::new(columns)?;

    // Pass 2: encode and write chunks.
    let mut builder = TableBuilder::new(
        schema,
        options.chunk_rows,
        options.cache_budget_bytes,
        &options.spill_dir,
    )?;
    let mut reader = csv::Reader::from_path(path).map_err(csv_format_err)?;
    let mut cells = Vec::with_capacity(csv_index.len());
    while reader.read_record(&mut record).map_err(csv_format_err)? {
        cells.clear();
        for (i, &idx) in csv_index.iter().enumerate() {
            let cell = record.get(idx).unwrap_or("");
            if is_missing(cell) {
                cells.push(CellValue::Missing);
                continue;
            }
            let cell_value = match builder.schema.column(i as u32).kind {
                ColumnKind::Float64 => CellValue::F64(cell.parse::<f64>().expect("validated")),
                ColumnKind::Int64 => CellValue::I64(cell.parse::<i64>().expect("validated")),
                ColumnKind::CategoryCode => CellValue::I64(dictionaries[i][cell]),
            };
            cells.push(cell_value);
        }
        builder.push_row(&cells)?;
    }
    builder.finish()
}
