use crate::layout::Page;

/// Bitset of pages.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PageSet {
    words: Vec<u64>,
}

impl PageSet {
    pub fn empty(ell: usize) -> Self {
        PageSet {
            words: vec![0; ell.div_ceil(64)],
        }
    }

    pub fn full(ell: usize) -> Self {
        let mut s = Self::empty(ell);
        for (i, w) in s.words.iter_mut().enumerate() {
            let bits = (ell - i * 64).min(64);
            *w = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    pub fn insert(&mut self, p: Page) {
        self.words[p / 64] |= 1 << (p % 64);
    }

    pub fn remove(&mut self, p: Page) {
        if let Some(w) = self.words.get_mut(p / 64) {
            *w &= !(1 << (p % 64));
        }
    }

    pub fn contains(&self, p: Page) -> bool {
        self.words
            .get(p / 64)
            .is_some_and(|w| w & (1 << (p % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<Page> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = Page> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn is_subset(&self, other: &PageSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &PageSet) -> PageSet {
        PageSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter().chain(std::iter::repeat(&0)))
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &PageSet) -> PageSet {
        PageSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter().chain(std::iter::repeat(&0)))
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn union_with(&mut self, other: &PageSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}
