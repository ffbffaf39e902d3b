use super::*;
use std::io::Write as _;

fn write_csv(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    let mut f = fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

fn options(dir: &Path) -> CsvOptions {
    let mut o = CsvOptions::new(&dir.join("spill"));
    o.chunk_rows = 4;
    o.cache_budget_bytes = 1 << 20;
    o
}

fn read_column_f64(table: &ChunkedTable, col: u32) -> (Vec<f64>, Vec<bool>) {
    let mut vals = Vec::new();
    let mut mask = Vec::new();
    table
        .scan::<ChunkStoreError, _>(&[col], |view| {
            vals.extend_from_slice(view.f64s(0));
            mask.extend((0..view.len()).map(|i| view.mask(0).get(i)));
            Ok(())
        })
        .unwrap();
    (vals, mask)
}

fn read_column_i64(table: &ChunkedTable, col: u32) -> (Vec<i64>, Vec<bool>) {
    let mut vals = Vec::new();
    let mut mask = Vec::new();
    table
        .scan::<ChunkStoreError, _>(&[col], |view| {
            vals.extend_from_slice(view.i64s(0));
            mask.extend((0..view.len()).map(|i| view.mask(0).get(i)));
            Ok(())
        })
        .unwrap();
    (vals, mask)
}

#[test]
fn ingest_masks_na_token() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_csv(tmp.path(), "d.csv", "x\n1.5\nNA\n2.5\n");
    let table = ingest_csv(
        &path,
        &[("x".into(), ColumnKind::Float64)],
        &options(tmp.path()),
    )
    .unwrap();
    assert_eq!(table.n_rows(), 3);
    let (vals, mask) = read_column_f64(&table, 0);
    assert_eq!(mask, vec![false, true, false]);
    assert_eq!(vals[0], 1.5);
    assert!(vals[1].is_nan());
    assert_eq!(vals[2], 2.5);
}

#[test]
fn ingest_masks_empty_string() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_csv(tmp.path(), "d.csv", "x,y\n1,2\n,3\n");
    let table = ingest_csv(
        &path,
        &[
            ("x".into(), ColumnKind::Float64),
            ("y".into(), ColumnKind::Int64),
        ],
        &options(tmp.path()),
    )
    .unwrap();
    let (_, mask) = read_column_f64(&table, 0);
    assert_eq!(mask, vec![false, true]);
}

#[test]
fn ingest_dictionary_frequency_then_lexicographic() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_csv(tmp.path(), "d.csv", "g\nb\na\nb\n");
    let table = ingest_csv(
        &path,
        &[("g".into(), ColumnKind::CategoryCode)],
        &options(tmp.path()),
    )
    .unwrap();
    assert_eq!(table.schema().column(0).categories, vec!["b", "a"]);
    let (vals, _) = read_column_i64(&table, 0);
    assert_eq!(vals, vec![0, 1, 0]);
}

#[test]
fn ingest_dictionary_tie_breaks_lexicographic() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_csv(tmp.path(), "d.csv", "g\nz\na\nz\na\nm\n");
    let table = ingest_csv(
        &path,
        &[("g".into(), ColumnKind::CategoryCode)],
        &options(tmp.path()),
    )
    .unwrap();
    // a and z tie at 2, lexicographic puts a first; m has 1.
    assert_eq!(table.schema().column(0).categories, vec!["a", "z", "m"]);
}

#[test]
fn ingest_unknown_column_is_schema_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_csv(tmp.path(), "d.csv", "x\n1\n");
    let err = ingest_csv(
        &path,
        &[("missing_col".into(), ColumnKind::Float64)],
        &options(tmp.path()),
    )
    .unwrap_err();
    assert!(matches!(err, ChunkStoreError::UnknownColumn(_)));
}

#[test]
fn ingest_parse_error_names_row_and_column() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_csv(tmp.path(), "d.csv", "x\n1.0\nbogus\n");
    let err = ingest_csv(
        &path,
        &[("x".into(), ColumnKind::Float64)],
        &options(tmp.path()),
    )
    .unwrap_err();
    match err {
        ChunkStoreError::Parse { row, column, .. } => {
            assert_eq!(row, 1);
            assert_eq!(column, "x");
        }
        other => panic!("unexpected error: {other}"),
    }
}

#[test]
fn ingest_missing_header_is_format_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_csv(tmp.path(), "d.csv", "");
    let err = ingest_csv(
        &path,
        &[("x".into(), ColumnKind::Float64)],
        &options(tmp.path()),
    )
    .unwrap_err();
    assert!(matches!(
        err,
        ChunkStoreError::Format(_) | ChunkStoreError::UnknownColumn(_)
    ));
}

fn small_table(tmp: &Path, n_rows: u64, chunk_rows: usize, budget: usize) -> ChunkedTable {
    let schema = Schema::new(vec![
        ColumnDesc {
            name: "x".into(),
            kind: ColumnKind::Float64,
            categories: vec![],
        },
        ColumnDesc {
            name: "k".into(),
            kind: ColumnKind::Int64,
            categories: vec![],
        },
    ])
    .unwrap();
    let mut b = TableBuilder::new(schema, chunk_rows, budget, &tmp.join("spill")).unwrap();
    for r in 0..n_rows {
        let cells = if r % 5 == 3 {
            vec![CellValue::Missing, CellValue::I64(r as i64)]
        } else {
            vec![CellValue::F64(r as f64), CellValue::I64(r as i64)]
        };
        b.push_row(&cells).unwrap();
    }
    b.finish().unwrap()
}

#[test]
fn scan_chunk_geometry() {
    let tmp = tempfile::tempdir().unwrap();
    let table = small_table(tmp.path(), 10, 4, 1 << 20);
    assert_eq!(table.n_chunks(), 3);
    let mut spans = Vec::new();
    table
        .scan::<ChunkStoreError, _>(&[0], |view| {
            spans.push((view.row_start(), view.len()));
            Ok(())
        })
        .unwrap();
    assert_eq!(spans, vec![(0, 4), (4, 4), (8, 2)]);
}

#[test]
fn scan_zero_columns_is_empty() {
    let tmp = tempfile::tempdir().unwrap();
    let table = small_table(tmp.path(), 10, 4, 1 << 20);
    let mut calls = 0;
    table
        .scan::<ChunkStoreError, _>(&[], |_| {
            calls += 1;
            Ok(())
        })
        .unwrap();
    assert_eq!(calls, 0);
}

#[test]
fn scan_respects_two_chunk_budget() {
    let tmp = tempfile::tempdir().unwrap();
    // 5 chunks of 4 rows; budget exactly two chunks.
    let budget = 2 * chunk_byte_size(4);
    let table = small_table(tmp.path(), 20, 4, budget);
    assert_eq!(table.n_chunks(), 5);
    for _ in 0..3 {
        table
            .scan::<ChunkStoreError, _>(&[0], |_| Ok(()))
            .unwrap();
    }
    let stats = table.memory_stats();
    assert!(
        stats.peak_resident_bytes <= budget,
        "peak {} > budget {}",
        stats.peak_resident_bytes,
        budget
    );
}

#[test]
fn write_read_back_and_mask_unchanged() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    let (_, mask_before) = read_column_f64(&table, 0);
    table
        .write_values(0, &[1], ValuesRef::F64(&[5.0]))
        .unwrap();
    let (vals, mask_after) = read_column_f64(&table, 0);
    assert_eq!(vals[1], 5.0);
    assert_eq!(mask_before, mask_after);
}

#[test]
fn write_empty_rows_is_noop() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    let (before, _) = read_column_f64(&table, 0);
    table.write_values(0, &[], ValuesRef::F64(&[])).unwrap();
    let (after, _) = read_column_f64(&table, 0);
    assert_eq!(
        before.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        after.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
}

#[test]
fn write_out_of_range_is_bounds_error() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    let err = table
        .write_values(0, &[10], ValuesRef::F64(&[1.0]))
        .unwrap_err();
    assert!(matches!(err, ChunkStoreError::RowOutOfRange { row: 10, .. }));
}

#[test]
fn write_kind_mismatch_is_type_error() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    let err = table
        .write_values(0, &[1], ValuesRef::I64(&[1]))
        .unwrap_err();
    assert!(matches!(err, ChunkStoreError::KindMismatch { .. }));
    let err = table
        .write_values(1, &[0, 1], ValuesRef::I64(&[1]))
        .unwrap_err();
    assert!(matches!(err, ChunkStoreError::LengthMismatch { .. }));
}

#[test]
fn checkpoint_round_trip_is_bit_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    table
        .write_values(0, &[3, 8], ValuesRef::F64(&[-1.25, 7.5]))
        .unwrap();
    let (before_vals, before_mask) = read_column_f64(&table, 0);
    let token = table.checkpoint().unwrap();
    let reopened = ChunkedTable::reopen(&token, 1 << 20).unwrap();
    let (after_vals, after_mask) = read_column_f64(&reopened, 0);
    assert_eq!(
        before_vals.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        after_vals.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
    assert_eq!(before_mask, after_mask);
    let (i_before, _) = read_column_i64(&table, 1);
    let (i_after, _) = read_column_i64(&reopened, 1);
    assert_eq!(i_before, i_after);
}

#[test]
fn checkpoint_without_writes_is_idempotent() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    let t1 = table.checkpoint().unwrap();
    let (v1, _) = read_column_f64(&ChunkedTable::reopen(&t1, 1 << 20).unwrap(), 0);
    let t2 = table.checkpoint().unwrap();
    let (v2, _) = read_column_f64(&ChunkedTable::reopen(&t2, 1 << 20).unwrap(), 0);
    assert_eq!(
        v1.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        v2.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
    assert_eq!(table.memory_stats().checkpoint_events, 2);
}

#[test]
fn budget_law_on_write_heavy_workload() {
    let tmp = tempfile::tempdir().unwrap();
    // 40 chunks of 8 rows per column, budget = 4 chunks: a 10x workload.
    let budget = 4 * chunk_byte_size(8);
    let mut table = small_table(tmp.path(), 320, 8, budget);
    for round in 0..3u64 {
        table
            .scan::<ChunkStoreError, _>(&[0, 1], |_| Ok(()))
            .unwrap();
        let rows: Vec<u64> = (0..320).step_by(7).collect();
        let vals: Vec<f64> = rows.iter().map(|&r| (r + round) as f64).collect();
        table.write_values(0, &rows, ValuesRef::F64(&vals)).unwrap();
    }
    let stats = table.memory_stats();
    assert!(
        stats.peak_resident_bytes <= budget + chunk_byte_size(8),
        "peak {} > budget {} + one chunk",
        stats.peak_resident_bytes,
        budget
    );
    assert!(stats.spill_events > 0, "workload should have spilled");
    // Spilled values must read back.
    let (vals, _) = read_column_f64(&table, 0);
    assert_eq!(vals[7], 7.0 + 2.0);
}

#[test]
fn mask_cells_returns_previous_values() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    let before = table.mask_count(0).unwrap();
    let prev = table.mask_cells(0, &[0, 4]).unwrap();
    assert_eq!(prev, vec![0.0, 4.0]);
    assert_eq!(table.mask_count(0).unwrap(), before + 2);
    let err = table.mask_cells(0, &[4]).unwrap_err();
    assert!(matches!(err, ChunkStoreError::AlreadyMasked { row: 4, .. }));
}

#[test]
fn clone_to_is_independent() {
    let tmp = tempfile::tempdir().unwrap();
    let mut table = small_table(tmp.path(), 10, 4, 1 << 20);
    let mut copy = table.clone_to(&tmp.path().join("copy")).unwrap();
    copy.write_values(0, &[0], ValuesRef::F64(&[99.0])).unwrap();
    let (orig, _) = read_column_f64(&table, 0);
    let (copied, _) = read_column_f64(&copy, 0);
    assert_eq!(orig[0], 0.0);
    assert_eq!(copied[0], 99.0);
}

#[test]
fn budget_below_one_chunk_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let schema = Schema::new(vec![ColumnDesc {
        name: "x".into(),
        kind: ColumnKind::Float64,
        categories: vec![],
    }])
    .unwrap();
    let err = TableBuilder::new(schema, 1024, 16, &tmp.path().join("s")).unwrap_err();
    assert!(matches!(err, ChunkStoreError::BudgetTooSmall { .. }));
}
