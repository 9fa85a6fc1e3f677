//! Packed boolean sets with word-parallel union.

const WORD_BITS: usize = 64;

/// Fixed-capacity bit set over a dense `0..domain` index space.
///
/// Bits above `domain` are kept at zero so that whole-word operations and
/// equality stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    domain: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(domain: usize) -> Self {
        BitSet {
            domain,
            words: vec![0; domain.div_ceil(WORD_BITS)],
        }
    }

    #[inline]
    pub fn domain(&self) -> usize {
        self.domain
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.domain);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    /// Sets bit `i`; returns true if it was previously clear.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.domain, "bit {i} out of range for domain {}", self.domain);
        let word = &mut self.words[i / WORD_BITS];
        let mask = 1u64 << (i % WORD_BITS);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    /// Clears bit `i`; returns true if it was previously set.
    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        assert!(i < self.domain, "bit {i} out of range for domain {}", self.domain);
        let word = &mut self.words[i / WORD_BITS];
        let mask = 1u64 << (i % WORD_BITS);
        let present = *word & mask != 0;
        *word &= !mask;
        present
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count_ones() == self.domain
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    /// `self |= other`; returns the number of newly set bits.
    pub fn union_with(&mut self, other: &BitSet) -> usize {
        debug_assert_eq!(self.domain, other.domain);
        let mut added = 0;
        for (word, o) in self.words.iter_mut().zip(&other.words) {
            let merged = *word | o;
            added += (merged ^ *word).count_ones() as usize;
            *word = merged;
        }
        added
    }

    /// `self |= src & !mask`, word-parallel.
    pub fn or_and_not(&mut self, src: &BitSet, mask: &BitSet) {
        debug_assert_eq!(self.domain, src.domain);
        debug_assert_eq!(self.domain, mask.domain);
        for ((word, s), m) in self.words.iter_mut().zip(&src.words).zip(&mask.words) {
            *word |= s & !m;
        }
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Heap footprint of the word storage, in bytes.
    pub fn storage_bytes(&self) -> usize {
        self.words.capacity() * std::mem::size_of::<u64>()
    }
}
