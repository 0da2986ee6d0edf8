//! The Telephone game: each player passes on a word after changing at most
//! one letter.

use std::sync::Arc;

use super::{
    AtomTable, ChainProtocol, ChannelData, HammingNeighbors, LocalCondition, ProtocolError,
    ValueSpace, WordSpace,
};

/// The 26 lowercase latin letters.
pub const LATIN: &str = "abcdefghijklmnopqrstuvwxyz";

/// Chain `0..chain_len` where every channel carries a `word_len`-letter word
/// over `alphabet`, adjacent words differ in at most one letter, and
/// `eq_<w>@k` holds exactly when channel `k` carries `w`.
pub fn telephone(
    word_len: usize,
    alphabet: &str,
    chain_len: usize,
) -> Result<ChainProtocol, ProtocolError> {
    let bad = |m: String| Err(ProtocolError::InvalidParameters(m));
    if word_len == 0 {
        return bad("word length must be positive".into());
    }
    if chain_len < 2 {
        return bad("the chain needs at least two channels".into());
    }
    if let Some(c) = alphabet.chars().find(|c| !(c.is_ascii_alphanumeric() || *c == '_')) {
        return bad(format!("alphabet letter {c:?} cannot appear in an atom name"));
    }
    let Some(words) = WordSpace::new(word_len, alphabet.chars()) else {
        return bad("the word space is empty or too large".into());
    };
    if words.alphabet().len() < 2 {
        return bad("the alphabet needs at least two letters".into());
    }
    let channels = (0..chain_len)
        .map(|_| ChannelData::new(ValueSpace::Words(words.clone()), AtomTable::WordEquality))
        .collect();
    let rel: Arc<dyn LocalCondition> = Arc::new(HammingNeighbors { words });
    ChainProtocol::new(0, channels, vec![rel; chain_len - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flagship_runs() {
        let p = telephone(4, LATIN, 3).unwrap();
        assert!(p.is_run_labels(&["byte", "bite", "cite"]).unwrap());
        assert!(p.is_run_labels(&["toon", "boon", "book"]).unwrap());
        assert!(p.is_run_labels(&["toon", "torn", "tort"]).unwrap());
        assert!(!p.is_run_labels(&["byte", "book", "book"]).unwrap());
        assert!(p.is_run_labels(&["byte", "bite", "cit"]).is_err());
    }

    #[test]
    fn local_condition_is_symmetric() {
        let p = telephone(2, "abc", 2).unwrap();
        let rel = p.local(1).unwrap();
        for u in 0..9 {
            for v in 0..9 {
                assert_eq!(rel.holds(u, v), rel.holds(v, u));
            }
        }
    }

    #[test]
    fn run_counts() {
        assert_eq!(telephone(1, "ab", 2).unwrap().run_count().unwrap(), 4);
        assert_eq!(telephone(3, "abc", 3).unwrap().run_count().unwrap(), 1323);
        let p = telephone(4, LATIN, 3).unwrap();
        let byte = p.value_id(0, "byte").unwrap();
        assert_eq!(p.count_fixing(0, byte).unwrap(), 10_201);
        assert_eq!(p.run_count().unwrap(), 456_976 * 101 * 101);
    }

    #[test]
    fn word_atoms() {
        let p = telephone(4, LATIN, 3).unwrap();
        let book = p.value_id(2, "book").unwrap();
        assert_eq!(p.atom_truth(2, "eq_book", book), Some(true));
        assert_eq!(p.atom_truth(2, "eq_book", book + 1), Some(false));
        assert_eq!(p.atom_truth(2, "eq_bk", book), None);
        assert_eq!(p.atom_truth(2, "p", book), None);
        assert_eq!(p.atom_truth(3, "eq_book", book), None);
    }

    #[test]
    fn preconditions() {
        assert!(telephone(0, "ab", 3).is_err());
        assert!(telephone(2, "a", 3).is_err());
        assert!(telephone(2, "aa", 3).is_err());
        assert!(telephone(2, "ab", 1).is_err());
        assert!(telephone(2, "a-", 2).is_err());
        assert!(telephone(40, LATIN, 2).is_err());
    }
}
