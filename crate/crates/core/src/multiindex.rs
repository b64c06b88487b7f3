use std::fmt;

use serde::Serialize;

/// Exponent tuple with every entry in `[0, p)`.
///
/// The derived ordering is lexicographic with the leftmost position most
/// significant, which is also the order of [`MultiIndex::rank`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>, p: u32) -> Option<Self> {
        entries.iter().all(|&e| e < p).then_some(MultiIndex(entries))
    }

    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn rank(&self, p: u32) -> usize {
        self.0.iter().fold(0usize, |acc, &e| acc * p as usize + e as usize)
    }

    pub fn from_rank(mut rank: usize, len: usize, p: u32) -> Self {
        let mut entries = vec![0; len];
        for slot in entries.iter_mut().rev() {
            *slot = (rank % p as usize) as u32;
            rank /= p as usize;
        }
        MultiIndex(entries)
    }

    /// All indices of the given length, in ascending order.
    pub fn all(len: usize, p: u32) -> impl Iterator<Item = MultiIndex> {
        let count = (p as usize).pow(len as u32);
        (0..count).map(move |r| MultiIndex::from_rank(r, len, p))
    }

    pub fn count(len: usize, p: u32) -> usize {
        (p as usize).pow(len as u32)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_lex_order() {
        let all: Vec<_> = MultiIndex::all(3, 3).collect();
        assert_eq!(all.len(), 27);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        for (r, idx) in all.iter().enumerate() {
            assert_eq!(idx.rank(3), r);
        }
        assert_eq!(MultiIndex::all(0, 2).count(), 1);
        assert!(MultiIndex::new(vec![2], 2).is_none());
    }
}
