//! Lazy run enumeration and path counting.

use std::sync::Arc;

use super::{ChainProtocol, ProtocolError, Run, ValueId};
use crate::formula::Channel;

/// Values admitted at one window position.
#[derive(Debug, Clone)]
enum Layer {
    /// Values that can still reach the right end of the window.
    Live(Arc<Vec<Vec<bool>>>),
    /// An explicit ascending set.
    Only(Vec<ValueId>),
}

impl Layer {
    fn admits(&self, j: usize, v: ValueId) -> bool {
        match self {
            Layer::Live(live) => live[j][v],
            Layer::Only(set) => set.binary_search(&v).is_ok(),
        }
    }

    fn members(&self, j: usize) -> Vec<ValueId> {
        match self {
            Layer::Live(live) => (0..live[j].len()).filter(|&v| live[j][v]).collect(),
            Layer::Only(set) => set.clone(),
        }
    }
}

struct Frame {
    candidates: Vec<ValueId>,
    cursor: usize,
}

/// Runs in lexicographic order of their value ids, produced on demand.
pub struct Runs<'p> {
    protocol: &'p ChainProtocol,
    layers: Vec<Layer>,
    stack: Vec<Frame>,
    current: Vec<ValueId>,
}

impl<'p> Runs<'p> {
    fn new(protocol: &'p ChainProtocol, layers: Vec<Layer>) -> Runs<'p> {
        let first = Frame {
            candidates: layers[0].members(0),
            cursor: 0,
        };
        Runs {
            protocol,
            layers,
            stack: vec![first],
            current: Vec::new(),
        }
    }
}

impl Iterator for Runs<'_> {
    type Item = Run;

    fn next(&mut self) -> Option<Run> {
        let width = self.layers.len();
        loop {
            let depth = self.stack.len();
            let frame = self.stack.last_mut()?;
            if frame.cursor == frame.candidates.len() {
                self.stack.pop();
                continue;
            }
            let v = frame.candidates[frame.cursor];
            frame.cursor += 1;
            self.current.truncate(depth - 1);
            self.current.push(v);
            if depth == width {
                return Some(Run::new(self.protocol.lo(), self.current.clone()));
            }
            let layer = &self.layers[depth];
            let candidates = self
                .protocol
                .local_at(depth)
                .successors(v)
                .into_iter()
                .filter(|&s| layer.admits(depth, s))
                .collect();
            self.stack.push(Frame {
                candidates,
                cursor: 0,
            });
        }
    }
}

fn union_sorted(lists: impl Iterator<Item = Vec<ValueId>>) -> Vec<ValueId> {
    let mut out: Vec<ValueId> = lists.flatten().collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl ChainProtocol {
    /// Every run, each once, in lexicographic order of value labels.
    pub fn runs(&self) -> Runs<'_> {
        let live = self.live();
        Runs::new(self, vec![Layer::Live(live); self.width()])
    }

    /// The runs with value `value` at channel `k`, in [`runs`](Self::runs)
    /// order.
    pub fn runs_fixing(&self, k: Channel, value: ValueId) -> Result<Runs<'_>, ProtocolError> {
        let j = self.position(k).ok_or(ProtocolError::OutsideWindow(k))?;
        if value >= self.channel_at(j).values.len() {
            return Err(ProtocolError::UnknownValue {
                channel: k,
                label: format!("#{value}"),
            });
        }
        let n = self.width();
        let mut sets: Vec<Vec<ValueId>> = vec![Vec::new(); n];
        sets[j] = vec![value];
        // everything to the left that leads to `value`
        for i in (0..j).rev() {
            let rel = self.local_at(i + 1);
            sets[i] = union_sorted(sets[i + 1].iter().map(|&y| rel.predecessors(y)));
        }
        // everything to the right reachable from `value` ...
        for i in j + 1..n {
            let rel = self.local_at(i);
            sets[i] = union_sorted(sets[i - 1].iter().map(|&x| rel.successors(x)));
        }
        // ... that can still reach the right end
        for i in (j..n.saturating_sub(1)).rev() {
            let rel = self.local_at(i + 1);
            let next = std::mem::take(&mut sets[i + 1]);
            sets[i].retain(|&x| {
                rel.successors(x)
                    .iter()
                    .any(|s| next.binary_search(s).is_ok())
            });
            sets[i + 1] = next;
        }
        Ok(Runs::new(self, sets.into_iter().map(Layer::Only).collect()))
    }

    /// Label-based [`runs_fixing`](Self::runs_fixing).
    pub fn runs_fixing_label(&self, k: Channel, label: &str) -> Result<Runs<'_>, ProtocolError> {
        let v = self.value_id(k, label)?;
        self.runs_fixing(k, v)
    }

    /// Number of runs, by left-to-right path counting.
    pub fn run_count(&self) -> Result<u128, ProtocolError> {
        let counts = self.forward_counts(self.width() - 1)?;
        counts
            .into_iter()
            .try_fold(0u128, |acc, c| acc.checked_add(c))
            .ok_or(ProtocolError::CountOverflow)
    }

    /// Number of runs with value `value` at channel `k`, as
    /// (paths ending at `value`) × (paths starting at `value`).
    pub fn count_fixing(&self, k: Channel, value: ValueId) -> Result<u128, ProtocolError> {
        let j = self.position(k).ok_or(ProtocolError::OutsideWindow(k))?;
        let left = self.forward_counts(j)?;
        let right = self.backward_counts(j)?;
        let (Some(l), Some(r)) = (left.get(value), right.get(value)) else {
            return Err(ProtocolError::UnknownValue {
                channel: k,
                label: format!("#{value}"),
            });
        };
        l.checked_mul(*r).ok_or(ProtocolError::CountOverflow)
    }

    /// Paths over positions `0..=j`, counted by their last value.
    fn forward_counts(&self, j: usize) -> Result<Vec<u128>, ProtocolError> {
        let mut counts = vec![1u128; self.channel_at(0).values.len()];
        for i in 1..=j {
            let rel = self.local_at(i);
            let mut next = vec![0u128; self.channel_at(i).values.len()];
            for (x, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for s in rel.successors(x) {
                    next[s] = next[s].checked_add(c).ok_or(ProtocolError::CountOverflow)?;
                }
            }
            counts = next;
        }
        Ok(counts)
    }

    /// Paths over positions `j..width`, counted by their first value.
    fn backward_counts(&self, j: usize) -> Result<Vec<u128>, ProtocolError> {
        let n = self.width();
        let mut counts = vec![1u128; self.channel_at(n - 1).values.len()];
        for i in (j..n - 1).rev() {
            let rel = self.local_at(i + 1);
            let mut prev = vec![0u128; self.channel_at(i).values.len()];
            for (x, slot) in prev.iter_mut().enumerate() {
                for s in rel.successors(x) {
                    *slot = slot.checked_add(counts[s]).ok_or(ProtocolError::CountOverflow)?;
                }
            }
            counts = prev;
        }
        Ok(counts)
    }
}
