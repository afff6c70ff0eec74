use std::fmt;

const WORDS: usize = 4;

/// Fixed-width bit set over edge indices (at most 256 edges).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EdgeSet([u64; WORDS]);

impl EdgeSet {
    pub const CAPACITY: usize = 64 * WORDS;

    pub const fn empty() -> Self {
        EdgeSet([0; WORDS])
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        self.0[i >> 6] ^= 1u64 << (i & 63);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a ^= b;
        }
        out
    }

    #[inline]
    pub fn and(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    #[inline]
    pub fn or(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
        out
    }

    /// Parity of `|self ∩ other|`.
    #[inline]
    pub fn odd_overlap(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Lowest set index.
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let a = EdgeSet::from_indices([0, 3, 64, 200]);
        let b = EdgeSet::from_indices([3, 65, 200]);
        assert_eq!(a.len(), 4);
        assert_eq!(a.and(&b).iter().collect::<Vec<_>>(), vec![3, 200]);
        assert_eq!(a.xor(&b).iter().collect::<Vec<_>>(), vec![0, 64, 65]);
        assert!(!a.odd_overlap(&b));
        assert_eq!(b.first(), Some(3));
        assert_eq!(EdgeSet::empty().first(), None);
    }
}
