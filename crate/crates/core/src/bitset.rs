//! Fixed-length bit vectors used for every subset of a universe.

use std::fmt;

const WORD: usize = 64;

/// A subset of `{0, .., len-1}`. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet {
            len,
            words: vec![!0; len.div_ceil(WORD)],
        };
        s.trim();
        s
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(len);
        for i in idx {
            s.insert(i);
        }
        s
    }

    /// Bit `i` of `mask` becomes member `i`. Requires `len <= 64`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "from_mask needs len <= 64");
        let mut s = Self::new(len);
        if len > 0 {
            s.words[0] = mask;
            s.trim();
        }
        s
    }

    /// Inverse of [`BitSet::from_mask`].
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= WORD, "to_mask needs len <= 64");
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the universe, not the number of members.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn universe_is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn set(&mut self, i: usize, on: bool) {
        if on {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    fn zip_with(&self, other: &BitSet, f: impl Fn(u64, u64) -> u64) -> BitSet {
        assert_eq!(self.len, other.len, "universe size mismatch");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let mut s = BitSet {
            len: self.len,
            words,
        };
        s.trim();
        s
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> BitSet {
        let mut s = BitSet {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        assert_eq!(self.len, other.len, "universe size mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        assert_eq!(self.len, other.len, "universe size mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        assert_eq!(self.len, other.len, "universe size mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        assert_eq!(self.len, other.len, "universe size mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .any(|(&a, &b)| a & b != 0)
    }

    /// Size of the intersection without allocating it.
    pub fn intersection_count(&self, other: &BitSet) -> usize {
        assert_eq!(self.len, other.len, "universe size mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Members in increasing order; handy as a canonical sort key.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
