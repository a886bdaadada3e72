use std::fmt;

/// A subset of `1..=n` stored as a bit vector, bit `k` standing for the
/// number `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumSet {
    n: u32,
    words: Box<[u64]>,
}

impl NumSet {
    pub fn empty(n: u32) -> Self {
        let len = (n as usize + 1).div_ceil(64);
        Self { n, words: vec![0; len].into_boxed_slice() }
    }

    /// Every number of `1..=n`.
    pub fn full(n: u32) -> Self {
        let mut s = Self::empty(n);
        for k in 1..=n {
            s.insert(k);
        }
        s
    }

    pub fn from_iter_n(n: u32, items: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(n);
        for k in items {
            s.insert(k);
        }
        s
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn contains(&self, k: u32) -> bool {
        k != 0 && k <= self.n && self.words[k as usize / 64] >> (k % 64) & 1 == 1
    }

    /// Panics when `k` is outside `1..=n`.
    #[inline]
    pub fn insert(&mut self, k: u32) -> bool {
        assert!(k >= 1 && k <= self.n, "{k} outside 1..={}", self.n);
        let had = self.contains(k);
        self.words[k as usize / 64] |= 1 << (k % 64);
        !had
    }

    #[inline]
    pub fn remove(&mut self, k: u32) -> bool {
        let had = self.contains(k);
        if had {
            self.words[k as usize / 64] &= !(1 << (k % 64));
        }
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Ascending iteration.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(i as u32 * 64 + b)
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Canonical fixed-width form: character `k-1` is `1` iff `k` is in the set.
    pub fn to_bit_string(&self) -> String {
        (1..=self.n).map(|k| if self.contains(k) { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        let mut set = Self::empty(s.len() as u32);
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => {
                    set.insert(i as u32 + 1);
                }
                '0' => {}
                _ => return None,
            }
        }
        Some(set)
    }
}

impl fmt::Debug for NumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_set_spans_one_to_n() {
        let s = NumSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(!s.contains(0));
        assert!(s.contains(64));
        assert!(!s.contains(71));
        assert_eq!(s.iter().next(), Some(1));
        assert_eq!(s.iter().last(), Some(70));
    }

    proptest! {
        #[test]
        fn bit_string_round_trip(n in 1u32..300, picks in proptest::collection::vec(1u32..300, 0..40)) {
            let s = NumSet::from_iter_n(n, picks.into_iter().filter(|&k| k <= n));
            let text = s.to_bit_string();
            prop_assert_eq!(text.len(), n as usize);
            prop_assert_eq!(NumSet::from_bit_string(&text).unwrap(), s);
        }
    }
}
