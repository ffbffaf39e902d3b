//! In-memory chunk cache with an enforced byte budget.
//!
//! The cache holds `Arc<ChunkData>` entries keyed by (column, chunk). Loading
//! a chunk that would push residency past the budget first evicts
//! least-recently-used entries, writing dirty ones to their spill files.
//! Entries whose `Arc` is shared with a live view (strong count > 1) are
//! pinned and skipped by eviction.

use std::collections::HashMap;
use std::sync::Arc;

use super::{ChunkData, ChunkStoreError};

/// Counters exposed by the cache. `peak_resident_bytes` is the high-water
/// mark of cached chunk bytes; the table-level contract keeps it at or below
/// `budget + one chunk`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MemoryStats {
    pub peak_resident_bytes: usize,
    pub spill_events: u64,
    pub checkpoint_events: u64,
    pub bytes_spilled: u64,
}

impl MemoryStats {
    /// Combine stats from independent caches (e.g. source plus per-imputation
    /// working tables): peaks take the max, event counters add.
    pub fn merge(&mut self, other: &MemoryStats) {
        self.peak_resident_bytes = self.peak_resident_bytes.max(other.peak_resident_bytes);
        self.spill_events += other.spill_events;
        self.checkpoint_events += other.checkpoint_events;
        self.bytes_spilled += other.bytes_spilled;
    }
}

pub(super) struct CacheEntry {
    pub data: Arc<ChunkData>,
    pub dirty: bool,
    last_use: u64,
}

pub(super) struct ChunkCache {
    budget_bytes: usize,
    resident_bytes: usize,
    tick: u64,
    entries: HashMap<(u32, u32), CacheEntry>,
    pub stats: MemoryStats,
}

impl ChunkCache {
    pub fn new(budget_bytes: usize) -> Self {
        ChunkCache {
            budget_bytes,
            resident_bytes: 0,
            tick: 0,
            entries: HashMap::new(),
            stats: MemoryStats::default(),
        }
    }

    pub fn budget_bytes(&self) -> usize {
        self.budget_bytes
    }

    pub fn resident_bytes(&self) -> usize {
        self.resident_bytes
    }

    pub fn get(&mut self, key: (u32, u32)) -> Option<Arc<ChunkData>> {
        self.tick += 1;
        let tick = self.tick;
        self.entries.get_mut(&key).map(|e| {
            e.last_use = tick;
            Arc::clone(&e.data)
        })
    }

    pub fn is_dirty(&self, key: (u32, u32)) -> bool {
        self.entries.get(&key).map(|e| e.dirty).unwrap_or(false)
    }

    pub fn mark_dirty(&mut self, key: (u32, u32)) {
        if let Some(e) = self.entries.get_mut(&key) {
            e.dirty = true;
        }
    }

    /// Exclusive access to a resident chunk's buffer. Fails if any view still
    /// holds the chunk; the single-writer rule makes that unreachable.
    pub fn get_mut(&mut self, key: (u32, u32)) -> Option<&mut ChunkData> {
        self.tick += 1;
        let tick = self.tick;
        self.entries.get_mut(&key).and_then(|e| {
            e.last_use = tick;
            Arc::get_mut(&mut e.data)
        })
    }

    /// Insert a freshly loaded or built chunk, evicting as needed first.
    /// `spill` writes a dirty chunk to its backing file.
    pub fn insert(
        &mut self,
        key: (u32, u32),
        data: Arc<ChunkData>,
        dirty: bool,
        spill: &mut dyn FnMut(u32, u32, &ChunkData) -> Result<(), ChunkStoreError>,
    ) -> Result<(), ChunkStoreError> {
        let bytes = data.byte_size();
        self.make_room(bytes, spill)?;
        self.tick += 1;
        let prev = self.entries.insert(
            key,
            CacheEntry {
                data,
                dirty,
                last_use: self.tick,
            },
        );
        debug_assert!(prev.is_none(), "chunk inserted twice");
        self.resident_bytes += bytes;
        if self.resident_bytes > self.stats.peak_resident_bytes {
            self.stats.peak_resident_bytes = self.resident_bytes;
        }
        Ok(())
    }

    /// Evict unpinned LRU entries until `incoming` more bytes fit under the
    /// budget. Errors only if every remaining entry is pinned by a live view
    /// and the budget still cannot accommodate the load.
    fn make_room(
        &mut self,
        incoming: usize,
        spill: &mut dyn FnMut(u32, u32, &ChunkData) -> Result<(), ChunkStoreError>,
    ) -> Result<(), ChunkStoreError> {
        while self.resident_bytes + incoming > self.budget_bytes {
            let victim = self
                .entries
                .iter()
                .filter(|(_, e)| Arc::strong_count(&e.data) == 1)
                .min_by_key(|(_, e)| e.last_use)
                .map(|(&k, _)| k);
            let Some(key) = victim else {
                if self.entries.is_empty() {
                    // Nothing cached at all: allow the single incoming chunk
                    // (construction already validated budget >= one chunk).
                    return Ok(());
                }
                return Err(ChunkStoreError::OverCommit {
                    needed: self.resident_bytes + incoming - self.budget_bytes,
                    resident: self.resident_bytes,
                });
            };
            let entry = self.entries.remove(&key).expect("victim vanished");
            if entry.dirty {
                spill(key.0, key.1, &entry.data)?;
                self.stats.spill_events += 1;
                self.stats.bytes_spilled += entry.data.byte_size() as u64;
            }
            self.resident_bytes -= entry.data.byte_size();
        }
        Ok(())
    }

    /// Keys of all dirty entries, sorted for deterministic flush order.
    pub fn dirty_keys(&self) -> Vec<(u32, u32)> {
        let mut keys: Vec<_> = self
            .entries
            .iter()
            .filter(|(_, e)| e.dirty)
            .map(|(&k, _)| k)
            .collect();
        keys.sort_unstable();
        keys
    }

    pub fn clear_dirty(&mut self, key: (u32, u32)) {
        if let Some(e) = self.entries.get_mut(&key) {
            e.dirty = false;
        }
    }

    pub fn data(&self, key: (u32, u32)) -> Option<&Arc<ChunkData>> {
        self.entries.get(&key).map(|e| &e.data)
    }

    /// Drop every clean resident chunk. Dirty chunks must be flushed first.
    pub fn release_clean(&mut self) {
        let clean: Vec<_> = self
            .entries
            .iter()
            .filter(|(_, e)| !e.dirty && Arc::strong_count(&e.data) == 1)
            .map(|(&k, _)| k)
            .collect();
        for key in clean {
            let e = self.entries.remove(&key).expect("entry vanished");
            self.resident_bytes -= e.data.byte_size();
        }
    }
}
