//! Fixed-width element sets indexed by element rank.

/// Largest group the table-driven code supports.
pub const MAX_ELEMENTS: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet([u64; 4]);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet([0; 4]);

    pub fn singleton(x: u8) -> Self {
        let mut s = Self::EMPTY;
        s.insert(x);
        s
    }

    #[inline]
    pub fn insert(&mut self, x: u8) {
        self.0[(x >> 6) as usize] |= 1u64 << (x & 63);
    }

    #[inline]
    pub fn remove(&mut self, x: u8) {
        self.0[(x >> 6) as usize] &= !(1u64 << (x & 63));
    }

    #[inline]
    pub fn contains(&self, x: u8) -> bool {
        self.0[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a |= *b;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some((w as u32 * 64 + tz) as u8)
                }
            })
        })
    }
}

impl FromIterator<u8> for ElemSet {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}
