//! Packed bitmaps for per-chunk missingness masks.

/// Bit-packed boolean vector. Bit i set means cell i was missing at ingest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    bits: Vec<u8>,
    len: usize,
}

impl Bitmap {
    pub fn zeroed(len: usize) -> Self {
        Bitmap {
            bits: vec![0u8; len.div_ceil(8)],
            len,
        }
    }

    pub fn from_bytes(bytes: Vec<u8>, len: usize) -> Self {
        assert_eq!(bytes.len(), len.div_ceil(8));
        Bitmap { bits: bytes, len }
    }

    #[inline(always)]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline(always)]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.bits[i >> 3] & (1 << (i & 7)) != 0
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.bits[i >> 3] |= 1 << (i & 7);
        } else {
            self.bits[i >> 3] &= !(1 << (i & 7));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Raw backing bytes; tail bits past `len` are always zero.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bits
    }

    pub fn byte_len(&self) -> usize {
        self.bits.len()
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_count() {
        let mut b = Bitmap::zeroed(19);
        assert_eq!(b.count_ones(), 0);
        b.set(0, true);
        b.set(7, true);
        b.set(8, true);
        b.set(18, true);
        assert!(b.get(0) && b.get(7) && b.get(8) && b.get(18));
        assert!(!b.get(1) && !b.get(17));
        assert_eq!(b.count_ones(), 4);
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![0, 7, 8, 18]);
        b.set(7, false);
        assert_eq!(b.count_ones(), 3);
    }

    #[test]
    fn byte_round_trip() {
        let mut b = Bitmap::zeroed(10);
        b.set(3, true);
        b.set(9, true);
        let restored = Bitmap::from_bytes(b.as_bytes().to_vec(), 10);
        assert_eq!(b, restored);
    }
}
