use std::fmt;

use super::ValueId;

/// A local condition `L_k ⊆ V_{k−1} × V_k` between adjacent channels.
///
/// Implementations must return neighbor lists in ascending order; run
/// enumeration relies on it for its ordering guarantee.
pub trait LocalCondition: Send + Sync + fmt::Debug {
    fn holds(&self, from: ValueId, to: ValueId) -> bool;

    /// Values `to` with `(from, to)` in the relation, ascending.
    fn successors(&self, from: ValueId) -> Vec<ValueId>;

    /// Values `from` with `(from, to)` in the relation, ascending.
    fn predecessors(&self, to: ValueId) -> Vec<ValueId>;
}

/// An explicitly listed set of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitRelation {
    succ: Vec<Vec<ValueId>>,
    pred: Vec<Vec<ValueId>>,
}

impl ExplicitRelation {
    /// Returns `None` if a pair falls outside `from_len × to_len`.
    pub fn new(
        from_len: usize,
        to_len: usize,
        pairs: impl IntoIterator<Item = (ValueId, ValueId)>,
    ) -> Option<ExplicitRelation> {
        let mut succ = vec![Vec::new(); from_len];
        let mut pred = vec![Vec::new(); to_len];
        for (a, b) in pairs {
            if a >= from_len || b >= to_len {
                return None;
            }
            succ[a].push(b);
            pred[b].push(a);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Some(ExplicitRelation { succ, pred })
    }

    /// Every pair of `from_len × to_len`.
    pub fn full(from_len: usize, to_len: usize) -> ExplicitRelation {
        let pairs = (0..from_len).flat_map(|a| (0..to_len).map(move |b| (a, b)));
        ExplicitRelation::new(from_len, to_len, pairs).expect("pairs in range")
    }

    pub fn pair_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

impl LocalCondition for ExplicitRelation {
    fn holds(&self, from: ValueId, to: ValueId) -> bool {
        self.succ
            .get(from)
            .is_some_and(|s| s.binary_search(&to).is_ok())
    }

    fn successors(&self, from: ValueId) -> Vec<ValueId> {
        self.succ.get(from).cloned().unwrap_or_default()
    }

    fn predecessors(&self, to: ValueId) -> Vec<ValueId> {
        self.pred.get(to).cloned().unwrap_or_default()
    }
}

/// All words of a fixed length over an ordered alphabet.
///
/// A word's id is its base-`|alphabet|` numeral (first letter most
/// significant), so id order is lexicographic word order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSpace {
    len: usize,
    alphabet: Vec<char>,
    size: usize,
}

impl WordSpace {
    /// The alphabet is sorted and deduplicated. Returns `None` when the
    /// number of words does not fit in a `usize`, or the alphabet is empty.
    pub fn new(len: usize, alphabet: impl IntoIterator<Item = char>) -> Option<WordSpace> {
        let mut alphabet: Vec<char> = alphabet.into_iter().collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.is_empty() {
            return None;
        }
        let size = alphabet.len().checked_pow(u32::try_from(len).ok()?)?;
        Some(WordSpace {
            len,
            alphabet,
            size,
        })
    }

    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn base(&self) -> usize {
        self.alphabet.len()
    }

    pub fn digits(&self, id: ValueId) -> Vec<usize> {
        let mut out = vec![0; self.len];
        let mut rest = id;
        for slot in out.iter_mut().rev() {
            *slot = rest % self.base();
            rest /= self.base();
        }
        out
    }

    fn compose(&self, digits: &[usize]) -> ValueId {
        digits.iter().fold(0, |acc, d| acc * self.base() + d)
    }

    pub fn word(&self, id: ValueId) -> String {
        self.digits(id).into_iter().map(|d| self.alphabet[d]).collect()
    }

    pub fn id(&self, word: &str) -> Option<ValueId> {
        let mut digits = Vec::with_capacity(self.len);
        for c in word.chars() {
            digits.push(self.alphabet.binary_search(&c).ok()?);
        }
        (digits.len() == self.len).then(|| self.compose(&digits))
    }

    /// Number of positions at which two words differ.
    pub fn distance(&self, a: ValueId, b: ValueId) -> usize {
        let (mut a, mut b) = (a, b);
        let mut d = 0;
        for _ in 0..self.len {
            if a % self.base() != b % self.base() {
                d += 1;
            }
            a /= self.base();
            b /= self.base();
        }
        d
    }
}

/// Pairs of words at Hamming distance at most one. Symmetric and
/// reflexive; never materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingNeighbors {
    pub words: WordSpace,
}

impl LocalCondition for HammingNeighbors {
    fn holds(&self, from: ValueId, to: ValueId) -> bool {
        from < self.words.size() && to < self.words.size() && self.words.distance(from, to) <= 1
    }

    fn successors(&self, from: ValueId) -> Vec<ValueId> {
        if from >= self.words.size() {
            return Vec::new();
        }
        let digits = self.words.digits(from);
        let base = self.words.base();
        let mut out = Vec::with_capacity(1 + digits.len() * (base - 1));
        out.push(from);
        let mut weight = 1;
        for &d in digits.iter().rev() {
            let cleared = from - d * weight;
            out.extend((0..base).filter(|&c| c != d).map(|c| cleared + c * weight));
            weight *= base;
        }
        out.sort_unstable();
        out
    }

    fn predecessors(&self, to: ValueId) -> Vec<ValueId> {
        self.successors(to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_round_trip_and_order() {
        let ws = WordSpace::new(4, 'a'..='z').unwrap();
        assert_eq!(ws.size(), 456_976);
        let byte = ws.id("byte").unwrap();
        assert_eq!(ws.word(byte), "byte");
        assert!(ws.id("bite").unwrap() < byte);
        assert_eq!(ws.id("byt"), None);
        assert_eq!(ws.id("byt3"), None);
        assert_eq!(ws.word(0), "aaaa");
    }

    #[test]
    fn hamming_relation() {
        let ws = WordSpace::new(4, 'a'..='z').unwrap();
        let id = |w: &str| ws.id(w).unwrap();
        let rel = HammingNeighbors { words: ws.clone() };
        assert!(rel.holds(id("byte"), id("bite")));
        assert!(rel.holds(id("bite"), id("cite")));
        assert!(rel.holds(id("byte"), id("byte")));
        assert!(!rel.holds(id("byte"), id("book")));
        assert_eq!(ws.distance(id("byte"), id("book")), 3);

        let succ = rel.successors(id("byte"));
        assert_eq!(succ.len(), 1 + 4 * 25);
        assert!(succ.windows(2).all(|w| w[0] < w[1]));
        assert!(succ.iter().all(|&s| rel.holds(id("byte"), s)));
    }

    #[test]
    fn hamming_successors_agree_with_membership() {
        let ws = WordSpace::new(3, ['c', 'a', 'b']).unwrap();
        let rel = HammingNeighbors { words: ws.clone() };
        for u in 0..ws.size() {
            let expected: Vec<ValueId> = (0..ws.size()).filter(|&v| rel.holds(u, v)).collect();
            assert_eq!(rel.successors(u), expected);
            assert_eq!(rel.predecessors(u), expected);
        }
    }

    #[test]
    fn explicit_relation() {
        let rel = ExplicitRelation::new(2, 2, [(1, 0), (0, 1), (0, 1)]).unwrap();
        assert_eq!(rel.pair_count(), 2);
        assert!(rel.holds(0, 1));
        assert!(!rel.holds(0, 0));
        assert_eq!(rel.successors(0), vec![1]);
        assert_eq!(rel.predecessors(0), vec![1]);
        assert!(ExplicitRelation::new(2, 2, [(2, 0)]).is_none());
        assert_eq!(ExplicitRelation::full(2, 3).pair_count(), 6);
    }
}
