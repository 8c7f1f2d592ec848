use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of `0..universe`, stored as a packed bit vector.
///
/// Iteration is always in ascending vertex order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SetRepr", try_from = "SetRepr")]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

/// Serialized form: the universe size and the members in ascending order.
#[derive(Serialize, Deserialize)]
struct SetRepr {
    universe: usize,
    members: Vec<usize>,
}

impl From<VertexSet> for SetRepr {
    fn from(s: VertexSet) -> Self {
        SetRepr { universe: s.universe, members: s.to_vec() }
    }
}

impl TryFrom<SetRepr> for VertexSet {
    type Error = String;

    fn try_from(r: SetRepr) -> Result<Self, String> {
        match r.members.iter().find(|&&v| v >= r.universe) {
            Some(v) => Err(format!("member {v} outside 0..{}", r.universe)),
            None => Ok(VertexSet::from_iter_in(r.universe, r.members)),
        }
    }
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet { universe, words: vec![0; universe.div_ceil(64)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn from_iter_in(universe: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(universe);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Inserts `v`, returning `true` if it was not already present.
    ///
    /// Panics if `v` lies outside the universe.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe of size {}", self.universe);
        let (w, b) = (v / 64, v % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / 64, v % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        let universe = self.universe.max(other.universe);
        let len = universe.div_ceil(64);
        let words = (0..len)
            .map(|i| {
                let a = self.words.get(i).copied().unwrap_or(0);
                let b = other.words.get(i).copied().unwrap_or(0);
                f(a, b)
            })
            .collect();
        VertexSet { universe, words }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a ^ b)
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &a)| a & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert!(s.contains(129));
        assert!(!s.contains(64));
        assert_eq!(s.to_vec(), vec![0, 129]);
        assert!(s.remove(0));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn serializes_as_members() {
        let s = VertexSet::from_iter_in(70, [3, 65]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"universe":70,"members":[3,65]}"#);
        assert_eq!(serde_json::from_str::<VertexSet>(&text).unwrap(), s);
        assert!(serde_json::from_str::<VertexSet>(r#"{"universe":3,"members":[3]}"#).is_err());
    }

    proptest! {
        #[test]
        fn matches_btreeset(a in proptest::collection::vec(0usize..200, 0..40),
                            b in proptest::collection::vec(0usize..200, 0..40)) {
            let sa = VertexSet::from_iter_in(200, a.iter().copied());
            let sb = VertexSet::from_iter_in(200, b.iter().copied());
            let ba: BTreeSet<_> = a.into_iter().collect();
            let bb: BTreeSet<_> = b.into_iter().collect();
            prop_assert_eq!(sa.union(&sb).to_vec(), ba.union(&bb).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection(&sb).to_vec(), ba.intersection(&bb).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.difference(&sb).to_vec(), ba.difference(&bb).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection_len(&sb), ba.intersection(&bb).count());
            prop_assert_eq!(sa.is_subset(&sb), ba.is_subset(&bb));
        }
    }
}
