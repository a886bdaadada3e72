//! Fixed-width bitsets for the search hot paths. `W` words cover numbers
//! `0..64 * W`; callers pick the smallest width that holds `n`.

use crate::graph::DivisorGraph;
use crate::numset::NumSet;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Bits<const W: usize>(pub [u64; W]);

impl<const W: usize> Bits<W> {
    pub const EMPTY: Self = Bits([0; W]);

    #[inline]
    pub fn contains(&self, k: u32) -> bool {
        self.0[k as usize / 64] >> (k % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, k: u32) {
        self.0[k as usize / 64] |= 1 << (k % 64);
    }

    #[inline]
    pub fn remove(&mut self, k: u32) {
        self.0[k as usize / 64] &= !(1 << (k % 64));
    }

    #[inline]
    pub fn without(mut self, k: u32) -> Self {
        self.remove(k);
        self
    }

    #[inline]
    pub fn and(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..W {
            r.0[i] &= o.0[i];
        }
        r
    }

    #[inline]
    pub fn and_not(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..W {
            r.0[i] &= !o.0[i];
        }
        r
    }

    #[inline]
    pub fn or_assign(&mut self, o: &Self) {
        for i in 0..W {
            self.0[i] |= o.0[i];
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// Smallest element.
    #[inline]
    pub fn first(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i as u32 * 64 + w.trailing_zeros())
    }

    /// Size of the intersection, without materializing it.
    #[inline]
    pub fn count_and(&self, o: &Self) -> u32 {
        (0..W).map(|i| (self.0[i] & o.0[i]).count_ones()).sum()
    }

    pub fn iter(&self) -> BitsIter<W> {
        BitsIter { words: self.0, idx: 0 }
    }

    pub fn from_numset(s: &NumSet) -> Self {
        let mut b = Self::EMPTY;
        for k in s.iter() {
            b.insert(k);
        }
        b
    }

    pub fn to_numset(self, n: u32) -> NumSet {
        NumSet::from_iter_n(n, self.iter())
    }
}

pub(crate) struct BitsIter<const W: usize> {
    words: [u64; W],
    idx: usize,
}

impl<const W: usize> Iterator for BitsIter<W> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        while self.idx < W {
            let w = self.words[self.idx];
            if w != 0 {
                self.words[self.idx] = w & (w - 1);
                return Some(self.idx as u32 * 64 + w.trailing_zeros());
            }
            self.idx += 1;
        }
        None
    }
}

/// Adjacency rows as bitsets, indexed by number.
pub(crate) fn adjacency_rows<const W: usize>(g: &DivisorGraph) -> Vec<Bits<W>> {
    (0..=g.n())
        .map(|v| {
            let mut row = Bits::EMPTY;
            if v > 0 {
                for &u in g.neighbors(v) {
                    row.insert(u);
                }
            }
            row
        })
        .collect()
}

/// Largest `n` the fixed-width paths support.
pub const MAX_BITS_N: u32 = 1023;

/// Runs `$body` with `W` bound to the narrowest width that holds `$n`.
macro_rules! with_width {
    ($n:expr, $w:ident => $body:expr, else $fallback:expr) => {{
        let n: u32 = $n;
        if n < 64 {
            const $w: usize = 1;
            $body
        } else if n < 128 {
            const $w: usize = 2;
            $body
        } else if n < 256 {
            const $w: usize = 4;
            $body
        } else if n < 512 {
            const $w: usize = 8;
            $body
        } else if n < 1024 {
            const $w: usize = 16;
            $body
        } else {
            $fallback
        }
    }};
}
pub(crate) use with_width;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_ascending() {
        let mut b = Bits::<2>::EMPTY;
        for k in [100, 3, 64, 63, 1] {
            b.insert(k);
        }
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![1, 3, 63, 64, 100]);
        assert_eq!(b.first(), Some(1));
        assert_eq!(b.count(), 5);
        assert_eq!(b.without(3).count(), 4);
    }
}
