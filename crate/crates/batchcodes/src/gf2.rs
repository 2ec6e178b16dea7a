//! Bit vectors and incremental Gaussian elimination over GF(2).
//!
//! Everything downstream (encoding, recovery-set search, span membership)
//! reduces to XOR on packed words, so this module is deliberately small.

use std::fmt;

const WORD_BITS: usize = 64;

/// Fixed-length bit vector packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        debug_assert!(index < self.len);
        self.words[index / WORD_BITS] >> (index % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        debug_assert!(index < self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    #[inline]
    pub fn or_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when the two vectors share at least one set bit.
    pub fn intersects(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// First set bit, if any.
    pub fn leading_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self)
    }
}

/// Row space in echelon form; supports incremental insertion and
/// membership queries against the current span.
#[derive(Clone, Default)]
pub struct Echelon {
    rows: Vec<BitVec>, // each row keeps a distinct pivot (its leading one)
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for row in &self.rows {
            let pivot = row.leading_one().expect("echelon rows are nonzero");
            if v.get(pivot) {
                v.xor_with(row);
            }
        }
        v
    }

    /// Inserts `v` into the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let reduced = self.reduce(v);
        if reduced.is_zero() {
            return false;
        }
        self.rows.push(reduced);
        // Keep rows ordered by pivot so reduction stays canonical.
        self.rows
            .sort_by_key(|r| r.leading_one().expect("nonzero row"));
        true
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Rank of a set of vectors over GF(2).
pub fn rank(vectors: &[BitVec]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(70);
        assert!(v.is_zero());
        v.set(0, true);
        v.set(69, true);
        assert_eq!(v.ones(), vec![0, 69]);
        assert_eq!(v.count_ones(), 2);
        let u = BitVec::unit(70, 69);
        assert!(v.intersects(&u));
        assert!(u.is_subset_of(&v));
        v.xor_with(&u);
        assert_eq!(v.ones(), vec![0]);
    }

    #[test]
    fn rank_and_span() {
        let a = BitVec::from_bits(&[true, false, true]);
        let b = BitVec::from_bits(&[false, true, true]);
        let c = BitVec::from_bits(&[true, true, false]); // a ^ b
        assert_eq!(rank(&[a.clone(), b.clone(), c.clone()]), 2);

        let mut ech = Echelon::new();
        assert!(ech.insert(&a));
        assert!(ech.insert(&b));
        assert!(!ech.insert(&c));
        assert!(ech.contains(&c));
        assert!(!ech.contains(&BitVec::unit(3, 0)));
    }
}
