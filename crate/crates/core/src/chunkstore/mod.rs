//! Disk-backed columnar table with fixed-size row chunks.
//!
//! A [`ChunkedTable`] splits every column into chunks of `chunk_rows` rows.
//! Each (column, chunk) pair is backed by a spill file; an LRU cache with a
//! hard byte budget decides which chunks are resident. Loading a chunk that
//! would exceed the budget evicts least-recently-used chunks first, writing
//! dirty ones back to disk, so peak residency never exceeds the budget plus
//! one chunk.
//!
//! Row identifiers are stable positions `0..n_rows` and no operation reorders
//! rows. Per-column masks record which cells were missing at ingest; masks are
//! never touched by value writes, so the original missingness pattern survives
//! any number of imputation passes.

mod bitmap;
mod cache;
mod chunkfile;
mod ingest;

pub use bitmap::Bitmap;
pub use cache::MemoryStats;
pub use ingest::{ingest_csv, CellValue, CsvOptions, TableBuilder};

use std::cell::RefCell;
use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use cache::ChunkCache;
use thiserror::Error;

/// Value sentinel stored in masked float cells. Masks are authoritative;
/// sentinels only make stray reads obvious.
pub const FLOAT_SENTINEL: f64 = f64::NAN;
/// Value sentinel stored in masked int/category cells.
pub const INT_SENTINEL: i64 = i64::MIN;

#[derive(Debug, Error)]
pub enum ChunkStoreError {
    #[error("unknown column '{0}'")]
    UnknownColumn(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("parse error at row {row}, column '{column}': {detail}")]
    Parse {
        row: u64,
        column: String,
        detail: String,
    },
    #[error("row id {row} out of range (n_rows = {n_rows})")]
    RowOutOfRange { row: u64, n_rows: u64 },
    #[error("value kind mismatch for column '{column}': expected {expected}")]
    KindMismatch {
        column: String,
        expected: &'static str,
    },
    #[error("length mismatch: {rows} row ids vs {values} values")]
    LengthMismatch { rows: usize, values: usize },
    #[error("cache budget {budget} bytes is below {needed} bytes ({context})")]
    BudgetTooSmall {
        budget: usize,
        needed: usize,
        context: &'static str,
    },
    #[error("cache over-commit: {needed} more bytes needed with {resident} resident and all chunks pinned")]
    OverCommit { needed: usize, resident: usize },
    #[error("checkpoint flushed {flushed} of {total} dirty chunks: {source}")]
    Checkpoint {
        flushed: usize,
        total: usize,
        source: std::io::Error,
    },
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("cell at row {row} of column '{column}' is already masked")]
    AlreadyMasked { row: u64, column: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Physical storage kind of a column. Category codes are dense i64 indices
/// into the column's dictionary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Float64,
    Int64,
    CategoryCode,
}

impl ColumnKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ColumnKind::Float64 => "float64",
            ColumnKind::Int64 => "int64",
            ColumnKind::CategoryCode => "category",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        match s {
            "float64" => Some(ColumnKind::Float64),
            "int64" => Some(ColumnKind::Int64),
            "category" => Some(ColumnKind::CategoryCode),
            _ => None,
        }
    }
}

/// Column descriptor: name, storage kind, and (for category columns) the
/// dictionary in code order. Code 0 is the most frequent observed category,
/// ties broken lexicographically.
#[derive(Clone, Debug)]
pub struct ColumnDesc {
    pub name: String,
    pub kind: ColumnKind,
    pub categories: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Schema {
    pub columns: Vec<ColumnDesc>,
    by_name: HashMap<String, u32>,
}

impl Schema {
    pub fn new(columns: Vec<ColumnDesc>) -> Result<Self, ChunkStoreError> {
        let mut by_name = HashMap::with_capacity(columns.len());
        for (i, col) in columns.iter().enumerate() {
            if by_name.insert(col.name.clone(), i as u32).is_some() {
                return Err(ChunkStoreError::Schema(format!(
                    "duplicate column name '{}'",
                    col.name
                )));
            }
        }
        Ok(Schema { columns, by_name })
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.by_name.get(name).copied()
    }

    pub fn column(&self, index: u32) -> &ColumnDesc {
        &self.columns[index as usize]
    }
}

/// One chunk's worth of a single column: values plus the missingness mask.
#[derive(Clone, Debug)]
pub struct ChunkData {
    pub values: ColumnData,
    pub mask: Bitmap,
}

impl ChunkData {
    pub fn byte_size(&self) -> usize {
        self.values.len() * 8 + self.mask.byte_len()
    }
}

#[derive(Clone, Debug)]
pub enum ColumnData {
    F64(Vec<f64>),
    I64(Vec<i64>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::F64(v) => v.len(),
            ColumnData::I64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Borrowed values passed to [`ChunkedTable::write_values`].
#[derive(Clone, Copy, Debug)]
pub enum ValuesRef<'a> {
    F64(&'a [f64]),
    I64(&'a [i64]),
}

impl ValuesRef<'_> {
    fn len(&self) -> usize {
        match self {
            ValuesRef::F64(v) => v.len(),
            ValuesRef::I64(v) => v.len(),
        }
    }
}

/// Read view over one chunk of the requested columns, in request order.
pub struct ChunkView {
    chunk: usize,
    row_start: u64,
    len: usize,
    cols: Vec<Arc<ChunkData>>,
}

impl ChunkView {
    pub fn chunk_index(&self) -> usize {
        self.chunk
    }

    /// Row id of the first row in this chunk.
    pub fn row_start(&self) -> u64 {
        self.row_start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn f64s(&self, i: usize) -> &[f64] {
        match &self.cols[i].values {
            ColumnData::F64(v) => v,
            ColumnData::I64(_) => panic!("column {i} of view is not float64"),
        }
    }

    pub fn i64s(&self, i: usize) -> &[i64] {
        match &self.cols[i].values {
            ColumnData::I64(v) => v,
            ColumnData::F64(_) => panic!("column {i} of view is not int64/category"),
        }
    }

    /// Cell as f64 regardless of storage kind.
    #[inline(always)]
    pub fn numeric(&self, i: usize, offset: usize) -> f64 {
        match &self.cols[i].values {
            ColumnData::F64(v) => v[offset],
            ColumnData::I64(v) => v[offset] as f64,
        }
    }

    pub fn mask(&self, i: usize) -> &Bitmap {
        &self.cols[i].mask
    }
}

/// Token returned by [`ChunkedTable::checkpoint`]; reopen with
/// [`ChunkedTable::reopen`]. Points at the manifest of the flushed state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointToken {
    manifest: PathBuf,
}

impl CheckpointToken {
    pub fn from_manifest_path(manifest: PathBuf) -> Self {
        CheckpointToken { manifest }
    }

    pub fn manifest_path(&self) -> &Path {
        &self.manifest
    }
}

impl std::fmt::Debug for ChunkedTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChunkedTable")
            .field("n_rows", &self.n_rows)
            .field("chunk_rows", &self.chunk_rows)
            .field("columns", &self.schema.len())
            .field("spill_dir", &self.spill_dir)
            .finish()
    }
}

/// Disk-backed columnar table. See the module docs for the storage model.
pub struct ChunkedTable {
    schema: Schema,
    chunk_rows: usize,
    n_rows: u64,
    spill_dir: PathBuf,
    cache: RefCell<ChunkCache>,
    obs_counts: RefCell<HashMap<u32, Arc<Vec<u64>>>>,
}

pub(crate) fn chunk_byte_size(rows: usize) -> usize {
    rows * 8 + rows.div_ceil(8)
}

impl ChunkedTable {
    pub(crate) fn from_parts(
        schema: Schema,
        chunk_rows: usize,
        n_rows: u64,
        spill_dir: PathBuf,
        cache_budget_bytes: usize,
    ) -> Result<Self, ChunkStoreError> {
        if chunk_rows == 0 {
            return Err(ChunkStoreError::Schema("chunk_rows must be >= 1".into()));
        }
        let one_chunk = chunk_byte_size(chunk_rows.min(n_rows as usize));
        if cache_budget_bytes < one_chunk {
            return Err(ChunkStoreError::BudgetTooSmall {
                budget: cache_budget_bytes,
                needed: one_chunk,
                context: "one full chunk must fit in the cache",
            });
        }
        Ok(ChunkedTable {
            schema,
            chunk_rows,
            n_rows,
            spill_dir,
            cache: RefCell::new(ChunkCache::new(cache_budget_bytes)),
            obs_counts: RefCell::new(HashMap::new()),
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn n_rows(&self) -> u64 {
        self.n_rows
    }

    pub fn chunk_rows(&self) -> usize {
        self.chunk_rows
    }

    pub fn n_chunks(&self) -> usize {
        (self.n_rows as usize).div_ceil(self.chunk_rows)
    }

    /// (first row id, row count) of chunk `c`.
    pub fn chunk_span(&self, c: usize) -> (u64, usize) {
        assert!(c < self.n_chunks(), "chunk index {c} out of range");
        let start = c as u64 * self.chunk_rows as u64;
        let len = (self.n_rows - start).min(self.chunk_rows as u64) as usize;
        (start, len)
    }

    pub fn cache_budget_bytes(&self) -> usize {
        self.cache.borrow().budget_bytes()
    }

    pub fn spill_dir(&self) -> &Path {
        &self.spill_dir
    }

    pub fn memory_stats(&self) -> MemoryStats {
        self.cache.borrow().stats.clone()
    }

    pub fn column_index(&self, name: &str) -> Result<u32, ChunkStoreError> {
        self.schema
            .index_of(name)
            .ok_or_else(|| ChunkStoreError::UnknownColumn(name.to_string()))
    }

    fn load_into_cache(&self, col: u32, chunk: u32) -> Result<(), ChunkStoreError> {
        let mut cache = self.cache.borrow_mut();
        if cache.data((col, chunk)).is_some() {
            return Ok(());
        }
        let (_, len) = self.chunk_span(chunk as usize);
        let kind = self.schema.column(col).kind;
        let data = chunkfile::read_chunk(&self.spill_dir, col, chunk, kind, len)?;
        let dir = &self.spill_dir;
        cache.insert(
            (col, chunk),
            Arc::new(data),
            false,
            &mut |c, k, d| chunkfile::write_chunk(dir, c, k, d),
        )
    }

    fn acquire(&self, col: u32, chunk: u32) -> Result<Arc<ChunkData>, ChunkStoreError> {
        self.load_into_cache(col, chunk)?;
        self.cache
            .borrow_mut()
            .get((col, chunk))
            .ok_or_else(|| ChunkStoreError::Internal("chunk vanished after load".into()))
    }

    fn with_chunk_mut<R>(
        &mut self,
        col: u32,
        chunk: u32,
        f: impl FnOnce(&mut ChunkData) -> R,
    ) -> Result<R, ChunkStoreError> {
        self.load_into_cache(col, chunk)?;
        let mut cache = self.cache.borrow_mut();
        cache.mark_dirty((col, chunk));
        let data = cache
            .get_mut((col, chunk))
            .ok_or_else(|| ChunkStoreError::Internal("chunk pinned during write".into()))?;
        Ok(f(data))
    }

    /// Pin one chunk of each requested column and hand the views to `f`.
    pub fn visit_chunk<R>(
        &self,
        chunk: usize,
        cols: &[u32],
        f: impl FnOnce(&ChunkView) -> R,
    ) -> Result<R, ChunkStoreError> {
        let (_, len) = self.chunk_span(chunk);
        let needed = cols.len() * chunk_byte_size(len);
        let budget = self.cache.borrow().budget_bytes();
        if needed > budget {
            return Err(ChunkStoreError::BudgetTooSmall {
                budget,
                needed,
                context: "scan width exceeds cache budget",
            });
        }
        let mut pinned = Vec::with_capacity(cols.len());
        for &col in cols {
            pinned.push(self.acquire(col, chunk as u32)?);
        }
        let (row_start, len) = self.chunk_span(chunk);
        let view = ChunkView {
            chunk,
            row_start,
            len,
            cols: pinned,
        };
        Ok(f(&view))
    }

    /// Stream every chunk of the requested columns in ascending row order.
    /// A scan of zero columns yields nothing.
    pub fn scan<E, F>(&self, cols: &[u32], mut f: F) -> Result<(), E>
    where
        E: From<ChunkStoreError>,
        F: FnMut(&ChunkView) -> Result<(), E>,
    {
        if cols.is_empty() {
            return Ok(());
        }
        for chunk in 0..self.n_chunks() {
            self.visit_chunk(chunk, cols, |view| f(view))??;
        }
        Ok(())
    }

    /// Resolve column names and stream chunks, as [`scan`](Self::scan).
    pub fn scan_named<E, F>(&self, names: &[&str], f: F) -> Result<(), E>
    where
        E: From<ChunkStoreError>,
        F: FnMut(&ChunkView) -> Result<(), E>,
    {
        let cols = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(E::from)?;
        self.scan(&cols, f)
    }

    /// Overwrite cells of one column in place. Masks are untouched; chunks
    /// become dirty and are spilled or checkpointed later.
    pub fn write_values(
        &mut self,
        col: u32,
        rows: &[u64],
        values: ValuesRef<'_>,
    ) -> Result<(), ChunkStoreError> {
        if rows.len() != values.len() {
            return Err(ChunkStoreError::LengthMismatch {
                rows: rows.len(),
                values: values.len(),
            });
        }
        let desc = self.schema.column(col);
        match (desc.kind, &values) {
            (ColumnKind::Float64, ValuesRef::F64(_)) => {}
            (ColumnKind::Int64 | ColumnKind::CategoryCode, ValuesRef::I64(_)) => {}
            (ColumnKind::Float64, _) => {
                return Err(ChunkStoreError::KindMismatch {
                    column: desc.name.clone(),
                    expected: "float64",
                })
            }
            (_, _) => {
                return Err(ChunkStoreError::KindMismatch {
                    column: desc.name.clone(),
                    expected: "int64",
                })
            }
        }
        for &row in rows {
            if row >= self.n_rows {
                return Err(ChunkStoreError::RowOutOfRange {
                    row,
                    n_rows: self.n_rows,
                });
            }
        }
        if rows.is_empty() {
            return Ok(());
        }
        // Group by chunk, preserving input order within each chunk.
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| rows[i] / self.chunk_rows as u64);
        let mut i = 0;
        while i < order.len() {
            let chunk = (rows[order[i]] / self.chunk_rows as u64) as u32;
            let mut j = i;
            while j < order.len() && rows[order[j]] / self.chunk_rows as u64 == chunk as u64 {
                j += 1;
            }
            let base = chunk as u64 * self.chunk_rows as u64;
            self.with_chunk_mut(col, chunk, |data| {
                for &idx in &order[i..j] {
                    let offset = (rows[idx] - base) as usize;
                    match (&mut data.values, &values) {
                        (ColumnData::F64(v), ValuesRef::F64(src)) => v[offset] = src[idx],
                        (ColumnData::I64(v), ValuesRef::I64(src)) => v[offset] = src[idx],
                        _ => unreachable!("kind checked above"),
                    }
                }
            })?;
            i = j;
        }
        Ok(())
    }

    /// Read cells of a numeric or category column as f64, in the order given.
    pub fn read_cells_f64(&self, col: u32, rows: &[u64]) -> Result<Vec<f64>, ChunkStoreError> {
        let mut out = vec![0.0f64; rows.len()];
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| rows[i] / self.chunk_rows as u64);
        let mut i = 0;
        while i < order.len() {
            let chunk = (rows[order[i]] / self.chunk_rows as u64) as usize;
            let mut j = i;
            while j < order.len() && (rows[order[j]] / self.chunk_rows as u64) as usize == chunk {
                j += 1;
            }
            let base = chunk as u64 * self.chunk_rows as u64;
            self.visit_chunk(chunk, &[col], |view| {
                for &idx in &order[i..j] {
                    out[idx] = view.numeric(0, (rows[idx] - base) as usize);
                }
            })?;
            i = j;
        }
        Ok(out)
    }

    /// Flush every dirty chunk to its spill file. Dirty flags clear only for
    /// chunks that flushed successfully.
    fn flush_dirty(&mut self) -> Result<usize, ChunkStoreError> {
        let keys = self.cache.borrow().dirty_keys();
        let total = keys.len();
        for (flushed, &key) in keys.iter().enumerate() {
            let result = {
                let cache = self.cache.borrow();
                let data = cache
                    .data(key)
                    .ok_or_else(|| ChunkStoreError::Internal("dirty chunk not resident".into()))?;
                chunkfile::write_chunk(&self.spill_dir, key.0, key.1, data)
            };
            match result {
                Ok(()) => self.cache.borrow_mut().clear_dirty(key),
                Err(ChunkStoreError::Io(source)) => {
                    return Err(ChunkStoreError::Checkpoint {
                        flushed,
                        total,
                        source,
                    })
                }
                Err(other) => return Err(other),
            }
        }
        Ok(total)
    }

    /// Flush dirty chunks and persist the manifest; the returned token
    /// reopens this exact state.
    pub fn checkpoint(&mut self) -> Result<CheckpointToken, ChunkStoreError> {
        self.flush_dirty()?;
        let manifest = chunkfile::write_manifest(
            &self.spill_dir,
            &self.schema,
            self.chunk_rows,
            self.n_rows,
            self.n_chunks(),
        )?;
        self.cache.borrow_mut().stats.checkpoint_events += 1;
        Ok(CheckpointToken::from_manifest_path(manifest))
    }

    /// Open a table from a checkpoint token. The new handle shares the chunk
    /// files the token points at; use [`clone_to`](Self::clone_to) for an
    /// independent copy.
    pub fn reopen(
        token: &CheckpointToken,
        cache_budget_bytes: usize,
    ) -> Result<Self, ChunkStoreError> {
        let contents = chunkfile::read_manifest(token.manifest_path())?;
        let dir = token
            .manifest_path()
            .parent()
            .ok_or_else(|| ChunkStoreError::Manifest("manifest has no parent directory".into()))?
            .to_path_buf();
        ChunkedTable::from_parts(
            contents.schema,
            contents.chunk_rows,
            contents.n_rows,
            dir,
            cache_budget_bytes,
        )
    }

    /// Copy this table's persisted state into `dir` and open it as an
    /// independent table with the same budget. Flushes dirty chunks first.
    pub fn clone_to(&mut self, dir: &Path) -> Result<ChunkedTable, ChunkStoreError> {
        self.flush_dirty()?;
        fs::create_dir_all(dir)?;
        for col in 0..self.schema.len() as u32 {
            for chunk in 0..self.n_chunks() as u32 {
                let name = chunkfile::chunk_file_name(col, chunk);
                fs::copy(self.spill_dir.join(&name), dir.join(&name))?;
            }
        }
        chunkfile::write_manifest(
            dir,
            &self.schema,
            self.chunk_rows,
            self.n_rows,
            self.n_chunks(),
        )?;
        ChunkedTable::from_parts(
            self.schema.clone(),
            self.chunk_rows,
            self.n_rows,
            dir.to_path_buf(),
            self.cache.borrow().budget_bytes(),
        )
    }

    /// Flush dirty chunks and drop all resident ones, e.g. after a source
    /// table has been cloned and will sit idle.
    pub fn clear_cache(&mut self) -> Result<(), ChunkStoreError> {
        self.flush_dirty()?;
        self.cache.borrow_mut().release_clean();
        Ok(())
    }

    /// Number of originally missing cells in a column.
    pub fn mask_count(&self, col: u32) -> Result<u64, ChunkStoreError> {
        let observed: u64 = self.observed_chunk_counts(col)?.iter().sum();
        Ok(self.n_rows - observed)
    }

    /// Per-chunk observed (unmasked) cell counts for a column; cached.
    pub fn observed_chunk_counts(&self, col: u32) -> Result<Arc<Vec<u64>>, ChunkStoreError> {
        if let Some(counts) = self.obs_counts.borrow().get(&col) {
            return Ok(Arc::clone(counts));
        }
        let mut counts = Vec::with_capacity(self.n_chunks());
        for chunk in 0..self.n_chunks() {
            let count = self.visit_chunk(chunk, &[col], |view| {
                view.len() as u64 - view.mask(0).count_ones() as u64
            })?;
            counts.push(count);
        }
        let counts = Arc::new(counts);
        self.obs_counts.borrow_mut().insert(col, Arc::clone(&counts));
        Ok(counts)
    }

    /// Mark observed cells as missing, returning their previous values as
    /// f64. This is an ingestion-side tool (MCAR amputation); the imputation
    /// engine never alters masks.
    pub fn mask_cells(&mut self, col: u32, rows: &[u64]) -> Result<Vec<f64>, ChunkStoreError> {
        for &row in rows {
            if row >= self.n_rows {
                return Err(ChunkStoreError::RowOutOfRange {
                    row,
                    n_rows: self.n_rows,
                });
            }
        }
        let column_name = self.schema.column(col).name.clone();
        let mut out = vec![0.0f64; rows.len()];
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| rows[i] / self.chunk_rows as u64);
        // Verify before mutating so an AlreadyMasked error leaves the table
        // untouched.
        let mut i = 0;
        while i < order.len() {
            let chunk = (rows[order[i]] / self.chunk_rows as u64) as usize;
            let mut j = i;
            while j < order.len() && (rows[order[j]] / self.chunk_rows as u64) as usize == chunk {
                j += 1;
            }
            let base = chunk as u64 * self.chunk_rows as u64;
            let clash = self.visit_chunk(chunk, &[col], |view| {
                order[i..j]
                    .iter()
                    .map(|&idx| rows[idx])
                    .find(|&row| view.mask(0).get((row - base) as usize))
            })?;
            if let Some(row) = clash {
                return Err(ChunkStoreError::AlreadyMasked {
                    row,
                    column: column_name,
                });
            }
            i = j;
        }
        let mut i = 0;
        while i < order.len() {
            let chunk = (rows[order[i]] / self.chunk_rows as u64) as u32;
            let mut j = i;
            while j < order.len() && rows[order[j]] / self.chunk_rows as u64 == chunk as u64 {
                j += 1;
            }
            let base = chunk as u64 * self.chunk_rows as u64;
            self.with_chunk_mut(col, chunk, |data| {
                for &idx in &order[i..j] {
                    let offset = (rows[idx] - base) as usize;
                    out[idx] = match &mut data.values {
                        ColumnData::F64(v) => {
                            let prev = v[offset];
                            v[offset] = FLOAT_SENTINEL;
                            prev
                        }
                        ColumnData::I64(v) => {
                            let prev = v[offset];
                            v[offset] = INT_SENTINEL;
                            prev as f64
                        }
                    };
                    data.mask.set(offset, true);
                }
            })?;
            i = j;
        }
        self.obs_counts.borrow_mut().remove(&col);
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
