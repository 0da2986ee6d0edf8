use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::protocol::{AtomTable, ChainProtocol, ChannelData, ExplicitRelation, LocalCondition, ValueSpace};

/// One point of the bounded protocol space, in raw bitmask form.
///
/// `relations[j]` relates channel `j` to channel `j + 1`; bit `a * |V_{j+1}| + b`
/// stands for the pair `(a, b)`. `truths[k][i]` has bit `v` set when the
/// `i`-th atom holds at value `v` of channel `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub sizes: Vec<usize>,
    pub relations: Vec<u64>,
    pub truths: Vec<Vec<u64>>,
}

impl Candidate {
    /// The protocol on window `[0, n − 1]` with labels `v0`, `v1`, ...
    pub fn protocol(&self, atom_names: &[String]) -> ChainProtocol {
        let width = self.sizes.iter().max().map_or(1, |&m| digits(m.saturating_sub(1)));
        let channels = self
            .sizes
            .iter()
            .zip(&self.truths)
            .map(|(&s, masks)| {
                let labels = (0..s).map(|v| format!("v{v:0width$}"));
                let atoms: BTreeMap<String, Vec<bool>> = atom_names
                    .iter()
                    .zip(masks)
                    .map(|(name, &m)| (name.clone(), (0..s).map(|v| m >> v & 1 == 1).collect()))
                    .collect();
                ChannelData::new(ValueSpace::labels(labels), AtomTable::Explicit(atoms))
            })
            .collect();
        let local = self
            .relations
            .iter()
            .enumerate()
            .map(|(j, &mask)| {
                let (a, b) = (self.sizes[j], self.sizes[j + 1]);
                let pairs = (0..a * b).filter(|bit| mask >> bit & 1 == 1).map(|bit| (bit / b, bit % b));
                let rel = ExplicitRelation::new(a, b, pairs).expect("bits within the size product");
                Arc::new(rel) as Arc<dyn LocalCondition>
            })
            .collect();
        ChainProtocol::new(0, channels, local).expect("candidates are well-formed")
    }
}

fn digits(mut n: usize) -> usize {
    let mut d = 1;
    while n >= 10 {
        n /= 10;
        d += 1;
    }
    d
}

/// The canonically ordered exhaustive space for given dimensions.
#[derive(Debug, Clone)]
pub(crate) struct Space {
    atoms: usize,
    /// Size tuples in lexicographic order with their cumulative offsets.
    blocks: Vec<(Vec<usize>, u128)>,
    total: u128,
}

impl Space {
    pub(crate) fn new(channels: usize, max_values: usize, atoms: usize) -> Space {
        let mut blocks = Vec::new();
        let mut total: u128 = 0;
        let mut sizes = vec![1; channels];
        loop {
            blocks.push((sizes.clone(), total));
            total = total.saturating_add(block_len(&sizes, atoms));
            // next tuple, last position fastest
            let Some(j) = (0..channels).rev().find(|&j| sizes[j] < max_values) else {
                break;
            };
            sizes[j] += 1;
            sizes[j + 1..].fill(1);
        }
        Space { atoms, blocks, total }
    }

    pub(crate) fn total(&self) -> u128 {
        self.total
    }

    pub(crate) fn candidate(&self, index: u128) -> Candidate {
        assert!(index < self.total, "candidate index out of range");
        let b = self.blocks.partition_point(|(_, start)| *start <= index) - 1;
        let (sizes, start) = &self.blocks[b];
        let mut rest = index - start;
        let n = sizes.len();
        let mut truths = vec![vec![0u64; self.atoms]; n];
        for k in (0..n).rev() {
            for i in (0..self.atoms).rev() {
                let radix = 1u128 << sizes[k];
                truths[k][i] = (rest % radix) as u64;
                rest /= radix;
            }
        }
        let mut relations = vec![0u64; n.saturating_sub(1)];
        for j in (0..relations.len()).rev() {
            let radix = relation_choices(sizes[j], sizes[j + 1]);
            relations[j] = (rest % radix) as u64 + 1;
            rest /= radix;
        }
        Candidate {
            sizes: sizes.clone(),
            relations,
            truths,
        }
    }
}

/// Nonempty relations on an `a × b` grid.
fn relation_choices(a: usize, b: usize) -> u128 {
    (1u128 << (a * b)) - 1
}

fn block_len(sizes: &[usize], atoms: usize) -> u128 {
    let rels = sizes.windows(2).map(|w| relation_choices(w[0], w[1]));
    let truths = sizes.iter().map(|&s| {
        (1u128 << s)
            .checked_pow(atoms as u32)
            .unwrap_or(u128::MAX)
    });
    rels.chain(truths).fold(1u128, |acc, x| acc.saturating_mul(x))
}

/// A uniformly drawn candidate: sizes, then relations, then truth masks.
pub(crate) fn random_candidate<R: Rng + ?Sized>(
    rng: &mut R,
    channels: usize,
    max_values: usize,
    atoms: usize,
) -> Candidate {
    let sizes: Vec<usize> = (0..channels).map(|_| rng.gen_range(1..=max_values)).collect();
    let relations = sizes
        .windows(2)
        .map(|w| rng.gen_range(1..=relation_choices(w[0], w[1]) as u64))
        .collect();
    let truths = sizes
        .iter()
        .map(|&s| (0..atoms).map(|_| rng.gen_range(0..1u64 << s)).collect())
        .collect();
    Candidate {
        sizes,
        relations,
        truths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_sizes() {
        assert_eq!(block_len(&[2, 2], 0), 15);
        assert_eq!(block_len(&[1, 2, 1], 1), 3 * 3 * 2 * 4 * 2);
        assert_eq!(Space::new(2, 2, 0).total(), 1 + 3 + 3 + 15);
        assert_eq!(Space::new(1, 3, 2).total(), 4 + 16 + 64);
    }

    #[test]
    fn decoding_follows_canonical_order() {
        let space = Space::new(2, 2, 1);
        let all: Vec<Candidate> = (0..space.total()).map(|i| space.candidate(i)).collect();
        let keys: Vec<_> = all
            .iter()
            .map(|c| (c.sizes.clone(), c.relations.clone(), c.truths.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        assert_eq!(all[0], Candidate { sizes: vec![1, 1], relations: vec![1], truths: vec![vec![0], vec![0]] });
    }

    #[test]
    fn protocol_from_masks() {
        let c = Candidate {
            sizes: vec![2, 2],
            relations: vec![0b1001],
            truths: vec![vec![0b01], vec![0b11]],
        };
        let p = c.protocol(&["p".to_string()]);
        assert!(p.is_run_labels(&["v0", "v0"]).unwrap());
        assert!(p.is_run_labels(&["v1", "v1"]).unwrap());
        assert!(!p.is_run_labels(&["v0", "v1"]).unwrap());
        assert_eq!(p.atom_truth(0, "p", 0), Some(true));
        assert_eq!(p.atom_truth(0, "p", 1), Some(false));
        assert_eq!(p.atom_truth(1, "p", 1), Some(true));
    }

    #[test]
    fn labels_sort_numerically() {
        let c = Candidate { sizes: vec![11], relations: vec![], truths: vec![vec![]] };
        let p = c.protocol(&[]);
        assert_eq!(p.label(0, 2).unwrap(), "v02");
        assert_eq!(p.label(0, 10).unwrap(), "v10");
    }
}
