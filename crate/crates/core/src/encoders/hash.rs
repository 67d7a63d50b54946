use crate::error::{argument, Result};

/// Fixed-length bit vector packed into 64-bit words, least significant bit first.
/// Bits past `len` in the last word are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i);
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Result<Self> {
        if words.len() != len.div_ceil(64) {
            return argument(format!("{} words cannot hold exactly {len} bits", words.len()));
        }
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last() {
                if last >> (len % 64) != 0 {
                    return argument("padding bits set past the end of the vector");
                }
            }
        }
        Ok(BitVector { len, words })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    /// Popcount of the XOR. Panics on length mismatch; use
    /// [`crate::memory::dissimilarity`] for the checked version.
    pub fn hamming(&self, other: &BitVector) -> u64 {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum()
    }
}

/// An encoded memory item: a binary hash for the hashing models, raw
/// grayscale bytes for perfect memory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HashVector {
    Binary(BitVector),
    Grey(Vec<u8>),
}

impl HashVector {
    pub fn dim(&self) -> usize {
        match self {
            HashVector::Binary(b) => b.len(),
            HashVector::Grey(g) => g.len(),
        }
    }

    pub fn as_binary(&self) -> Option<&BitVector> {
        match self {
            HashVector::Binary(b) => Some(b),
            HashVector::Grey(_) => None,
        }
    }

    pub fn as_grey(&self) -> Option<&[u8]> {
        match self {
            HashVector::Grey(g) => Some(g),
            HashVector::Binary(_) => None,
        }
    }

    /// Set-bit count for binary hashes; `None` for raw items.
    pub fn popcount(&self) -> Option<usize> {
        self.as_binary().map(BitVector::count_ones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_and_count() {
        let mut v = BitVector::zeros(130);
        for i in [0, 63, 64, 129] {
            v.set(i);
        }
        assert!(v.get(63) && v.get(64) && !v.get(65));
        assert_eq!(v.count_ones(), 4);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
    }

    #[test]
    fn hamming_of_small_patterns() {
        // 0b1100 vs 0b1010
        let a = BitVector::from_bools(&[true, true, false, false]);
        let b = BitVector::from_bools(&[true, false, true, false]);
        assert_eq!(a.hamming(&b), 2);
        assert_eq!(a.hamming(&a), 0);
    }

    #[test]
    fn from_words_rejects_dirty_padding() {
        assert!(BitVector::from_words(3, vec![0b1000]).is_err());
        assert!(BitVector::from_words(3, vec![0b0111]).is_ok());
        assert!(BitVector::from_words(65, vec![0]).is_err());
    }
}
