//! Chain protocols over a finite window of channels.
//!
//! A protocol models the channels `lo..=hi` explicitly. Every channel
//! outside the window carries one fixed default value and the local
//! conditions touching it are always satisfied, which embeds the finite
//! window into the infinite chain. In particular there is no constraint on
//! the value of channel `lo`.
//!
//! Values are identified by [`ValueId`], their position in the channel's
//! label order; labels are sorted, so id order is label order.

mod enumerate;
mod relation;
mod spec;
mod telephone;

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::formula::Channel;

pub use enumerate::Runs;
pub use relation::{ExplicitRelation, HammingNeighbors, LocalCondition, WordSpace};
pub use spec::{validate, ChannelSpec, LocalSpec, ProtocolSpec, Violation, ViolationKind};
pub use telephone::{telephone, LATIN};

pub type ValueId = usize;

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("invalid protocol ({} violation(s)): {}", .0.len(), .0.first().map(ToString::to_string).unwrap_or_default())]
    Invalid(Vec<Violation>),
    #[error("malformed protocol document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("channel {channel}: unknown value {label:?}")]
    UnknownValue { channel: Channel, label: String },
    #[error("channel {0} is outside the protocol window")]
    OutsideWindow(Channel),
    #[error("run assigns {found} values but the window has {expected} channels")]
    RunLength { expected: usize, found: usize },
    #[error("runs belong to different windows")]
    WindowMismatch,
    #[error("runs disagree at channel {0}")]
    SpliceMismatch(Channel),
    #[error("run count does not fit in 128 bits")]
    CountOverflow,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// The value set of one channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSpace {
    /// Explicit labels, sorted and distinct.
    Labels(Vec<String>),
    Words(WordSpace),
}

impl ValueSpace {
    /// Sorts and deduplicates.
    pub fn labels(labels: impl IntoIterator<Item = impl Into<String>>) -> ValueSpace {
        let mut v: Vec<String> = labels.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        ValueSpace::Labels(v)
    }

    pub fn len(&self) -> usize {
        match self {
            ValueSpace::Labels(v) => v.len(),
            ValueSpace::Words(w) => w.size(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, id: ValueId) -> Cow<'_, str> {
        match self {
            ValueSpace::Labels(v) => Cow::Borrowed(&v[id]),
            ValueSpace::Words(w) => Cow::Owned(w.word(id)),
        }
    }

    pub fn id_of(&self, label: &str) -> Option<ValueId> {
        match self {
            ValueSpace::Labels(v) => v.binary_search_by(|l| l.as_str().cmp(label)).ok(),
            ValueSpace::Words(w) => w.id(label),
        }
    }
}

/// The truth relation `Tr` restricted to one channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomTable {
    /// Per atom name, the truth value at each value id.
    Explicit(BTreeMap<String, Vec<bool>>),
    /// `eq_<word>` holds exactly at `<word>`; requires a word value space.
    WordEquality,
}

impl AtomTable {
    pub fn none() -> AtomTable {
        AtomTable::Explicit(BTreeMap::new())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelData {
    pub values: ValueSpace,
    pub atoms: AtomTable,
}

impl ChannelData {
    pub fn new(values: ValueSpace, atoms: AtomTable) -> ChannelData {
        ChannelData { values, atoms }
    }

    /// `None` when the atom is not declared for this channel.
    pub fn atom_truth(&self, name: &str, value: ValueId) -> Option<bool> {
        match &self.atoms {
            AtomTable::Explicit(map) => map.get(name).map(|t| t[value]),
            AtomTable::WordEquality => {
                let word = name.strip_prefix("eq_")?;
                Some(self.values.id_of(word)? == value)
            }
        }
    }

    pub fn declares_atom(&self, name: &str) -> bool {
        match &self.atoms {
            AtomTable::Explicit(map) => map.contains_key(name),
            AtomTable::WordEquality => name
                .strip_prefix("eq_")
                .is_some_and(|w| self.values.id_of(w).is_some()),
        }
    }
}

/// A protocol on the window `lo..=hi`.
#[derive(Debug, Clone)]
pub struct ChainProtocol {
    lo: Channel,
    channels: Vec<ChannelData>,
    /// `local[j - 1]` relates window positions `j - 1` and `j`.
    local: Vec<Arc<dyn LocalCondition>>,
    live: OnceLock<Arc<Vec<Vec<bool>>>>,
}

impl ChainProtocol {
    /// Assembles a protocol from its parts.
    ///
    /// Needs one channel at least, one local condition per adjacent pair,
    /// nonempty value sets, and explicit atom tables sized to their value
    /// sets.
    pub fn new(
        lo: Channel,
        channels: Vec<ChannelData>,
        local: Vec<Arc<dyn LocalCondition>>,
    ) -> Result<ChainProtocol, ProtocolError> {
        let bad = |m: &str| Err(ProtocolError::InvalidParameters(m.to_string()));
        if channels.is_empty() {
            return bad("a protocol needs at least one channel");
        }
        if local.len() + 1 != channels.len() {
            return bad("expected one local condition per adjacent channel pair");
        }
        if lo.checked_add(channels.len() as Channel - 1).is_none() {
            return bad("window exceeds the channel index range");
        }
        for ch in &channels {
            if ch.values.is_empty() {
                return bad("value sets must be nonempty");
            }
            match &ch.atoms {
                AtomTable::Explicit(map) => {
                    if map.values().any(|t| t.len() != ch.values.len()) {
                        return bad("atom truth table size differs from the value set");
                    }
                }
                AtomTable::WordEquality => {
                    if !matches!(ch.values, ValueSpace::Words(_)) {
                        return bad("word-equality atoms need a word value space");
                    }
                }
            }
        }
        Ok(ChainProtocol {
            lo,
            channels,
            local,
            live: OnceLock::new(),
        })
    }

    pub fn lo(&self) -> Channel {
        self.lo
    }

    pub fn hi(&self) -> Channel {
        self.lo + self.channels.len() as Channel - 1
    }

    pub fn window(&self) -> (Channel, Channel) {
        (self.lo, self.hi())
    }

    /// Number of channels in the window.
    pub fn width(&self) -> usize {
        self.channels.len()
    }

    pub fn in_window(&self, k: Channel) -> bool {
        self.position(k).is_some()
    }

    pub(crate) fn position(&self, k: Channel) -> Option<usize> {
        let j = k.checked_sub(self.lo)?;
        usize::try_from(j).ok().filter(|&j| j < self.channels.len())
    }

    pub fn channel(&self, k: Channel) -> Option<&ChannelData> {
        self.position(k).map(|j| &self.channels[j])
    }

    pub(crate) fn channel_at(&self, j: usize) -> &ChannelData {
        &self.channels[j]
    }

    /// The local condition into channel `k`, for `k` in `(lo, hi]`.
    pub fn local(&self, k: Channel) -> Option<&dyn LocalCondition> {
        let j = self.position(k)?;
        j.checked_sub(1).map(|i| self.local[i].as_ref())
    }

    pub(crate) fn local_at(&self, j: usize) -> &dyn LocalCondition {
        self.local[j - 1].as_ref()
    }

    pub fn value_id(&self, k: Channel, label: &str) -> Result<ValueId, ProtocolError> {
        self.channel(k)
            .ok_or(ProtocolError::OutsideWindow(k))?
            .values
            .id_of(label)
            .ok_or_else(|| ProtocolError::UnknownValue {
                channel: k,
                label: label.to_string(),
            })
    }

    pub fn label(&self, k: Channel, value: ValueId) -> Option<Cow<'_, str>> {
        self.channel(k).map(|c| c.values.label(value))
    }

    /// `Tr(v, name@k)`; `None` when the atom is undeclared or `k` lies
    /// outside the window.
    pub fn atom_truth(&self, k: Channel, name: &str, value: ValueId) -> Option<bool> {
        self.channel(k)?.atom_truth(name, value)
    }

    pub fn declares_atom(&self, k: Channel, name: &str) -> bool {
        self.channel(k).is_some_and(|c| c.declares_atom(name))
    }

    /// Builds a run from one label per window channel; does not check the
    /// local conditions.
    pub fn run_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Run, ProtocolError> {
        if labels.len() != self.width() {
            return Err(ProtocolError::RunLength {
                expected: self.width(),
                found: labels.len(),
            });
        }
        let values = labels
            .iter()
            .enumerate()
            .map(|(j, l)| self.value_id(self.lo + j as Channel, l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Run {
            lo: self.lo,
            values,
        })
    }

    /// Whether every adjacent pair satisfies its local condition.
    pub fn is_run(&self, run: &Run) -> bool {
        run.lo == self.lo
            && run.values.len() == self.width()
            && run
                .values
                .iter()
                .enumerate()
                .all(|(j, &v)| v < self.channels[j].values.len())
            && (1..self.width()).all(|j| self.local_at(j).holds(run.values[j - 1], run.values[j]))
    }

    /// [`is_run`](Self::is_run) on labels; unknown labels are an error.
    pub fn is_run_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<bool, ProtocolError> {
        Ok(self.is_run(&self.run_from_labels(labels)?))
    }

    pub fn run_labels(&self, run: &Run) -> Vec<String> {
        run.values
            .iter()
            .enumerate()
            .map(|(j, &v)| self.channels[j].values.label(v).into_owned())
            .collect()
    }

    /// Values at channel `k - 1` with no successor under `L_k`.
    pub fn continuity_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for j in 1..self.width() {
            let rel = self.local_at(j);
            let prev = &self.channels[j - 1].values;
            for v in 0..prev.len() {
                if rel.successors(v).is_empty() {
                    out.push(Violation {
                        channel: Some(self.lo + j as Channel),
                        kind: ViolationKind::NoSuccessor {
                            value: prev.label(v).into_owned(),
                        },
                    });
                }
            }
        }
        out
    }

    /// Well-formedness holds by construction, so only the optional
    /// continuity condition can fail here.
    pub fn validate(&self, require_continuity: bool) -> Vec<Violation> {
        if require_continuity {
            self.continuity_violations()
        } else {
            Vec::new()
        }
    }

    /// `live[j][v]`: some path continues from `v` at position `j` to `hi`.
    pub(crate) fn live(&self) -> Arc<Vec<Vec<bool>>> {
        self.live
            .get_or_init(|| {
                let n = self.width();
                let mut live: Vec<Vec<bool>> =
                    self.channels.iter().map(|c| vec![false; c.values.len()]).collect();
                live[n - 1].fill(true);
                for j in (0..n - 1).rev() {
                    let rel = self.local_at(j + 1);
                    let (head, tail) = live.split_at_mut(j + 1);
                    for (v, slot) in head[j].iter_mut().enumerate() {
                        *slot = rel.successors(v).iter().any(|&s| tail[0][s]);
                    }
                }
                Arc::new(live)
            })
            .clone()
    }
}

/// One value per window channel; channels outside the window carry the
/// default value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Run {
    lo: Channel,
    values: Vec<ValueId>,
}

impl Run {
    pub fn new(lo: Channel, values: Vec<ValueId>) -> Run {
        Run { lo, values }
    }

    pub fn lo(&self) -> Channel {
        self.lo
    }

    pub fn values(&self) -> &[ValueId] {
        &self.values
    }

    /// `None` stands for the default value outside the window.
    pub fn value_at(&self, k: Channel) -> Option<ValueId> {
        let j = usize::try_from(k.checked_sub(self.lo)?).ok()?;
        self.values.get(j).copied()
    }

    fn same_window(&self, other: &Run) -> Result<(), ProtocolError> {
        if self.lo == other.lo && self.values.len() == other.values.len() {
            Ok(())
        } else {
            Err(ProtocolError::WindowMismatch)
        }
    }

    fn glue(&self, other: &Run, take_self: impl Fn(Channel) -> bool) -> Run {
        let values = (0..self.values.len())
            .map(|j| {
                let x = self.lo + j as Channel;
                if take_self(x) {
                    self.values[j]
                } else {
                    other.values[j]
                }
            })
            .collect();
        Run {
            lo: self.lo,
            values,
        }
    }

    /// `self` on channels `≤ k`, `other` on channels `≥ k`. The runs must
    /// agree at `k`.
    pub fn splice(&self, other: &Run, k: Channel) -> Result<Run, ProtocolError> {
        self.same_window(other)?;
        if self.value_at(k) != other.value_at(k) {
            return Err(ProtocolError::SpliceMismatch(k));
        }
        Ok(self.glue(other, |x| x <= k))
    }

    /// `self` on channels `< n`, `other` from `n` on. The runs must agree
    /// at `n`.
    pub fn prefix_splice(&self, other: &Run, n: Channel) -> Result<Run, ProtocolError> {
        self.same_window(other)?;
        if self.value_at(n) != other.value_at(n) {
            return Err(ProtocolError::SpliceMismatch(n));
        }
        Ok(self.glue(other, |x| x < n))
    }

    /// `(v0, v1, ...)` with the protocol's labels.
    pub fn display<'a>(&'a self, protocol: &'a ChainProtocol) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Run, &'a ChainProtocol);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({})", self.1.run_labels(self.0).join(", "))
            }
        }
        D(self, protocol)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// `V_k = {0, 1}` on channels `0..=2` with the given relations.
    pub(crate) fn binary_chain(relations: [&[(usize, usize)]; 2]) -> ChainProtocol {
        let channels = (0..3)
            .map(|_| ChannelData::new(ValueSpace::labels(["0", "1"]), AtomTable::none()))
            .collect();
        let local = relations
            .iter()
            .map(|pairs| {
                Arc::new(ExplicitRelation::new(2, 2, pairs.iter().copied()).unwrap())
                    as Arc<dyn LocalCondition>
            })
            .collect();
        ChainProtocol::new(0, channels, local).unwrap()
    }

    pub(crate) const FULL: &[(usize, usize)] = &[(0, 0), (0, 1), (1, 0), (1, 1)];

    fn run(values: &[usize]) -> Run {
        Run::new(0, values.to_vec())
    }

    #[test]
    fn splice_takes_prefix_and_suffix() {
        // (u, x, z1) and (v, x, z2) spliced at 1
        let r1 = run(&[0, 5, 1]);
        let r2 = run(&[3, 5, 2]);
        assert_eq!(r1.splice(&r2, 1).unwrap(), run(&[0, 5, 2]));
        assert_eq!(r1.splice(&r1, 1).unwrap(), r1);
        assert!(matches!(
            r1.splice(&run(&[0, 4, 1]), 1),
            Err(ProtocolError::SpliceMismatch(1))
        ));
    }

    #[test]
    fn splice_outside_window_always_agrees() {
        let r1 = run(&[0, 1, 0]);
        let r2 = run(&[1, 0, 1]);
        assert_eq!(r1.splice(&r2, -1).unwrap(), r2);
        assert_eq!(r1.splice(&r2, 5).unwrap(), r1);
        assert!(matches!(
            r1.splice(&Run::new(1, vec![0, 0, 0]), 5),
            Err(ProtocolError::WindowMismatch)
        ));
    }

    #[test]
    fn prefix_splice() {
        let r = run(&[0, 5, 1]);
        let rp = run(&[3, 5, 2]);
        assert_eq!(r.prefix_splice(&rp, 1).unwrap(), run(&[0, 5, 2]));
        assert_eq!(r.prefix_splice(&run(&[3, 4, 2]), 0).unwrap_err().to_string(), "runs disagree at channel 0");
        assert_eq!(run(&[3, 4, 2]).prefix_splice(&run(&[3, 7, 7]), 0).unwrap(), run(&[3, 7, 7]));
        assert!(r.prefix_splice(&run(&[0, 4, 1]), 1).is_err());
    }

    #[test]
    fn is_run_checks_local_conditions() {
        let p = binary_chain([&[(0, 0), (1, 1)], FULL]);
        assert!(p.is_run(&run(&[1, 1, 0])));
        assert!(!p.is_run(&run(&[1, 0, 0])));
        assert!(!p.is_run(&run(&[0, 0])));
        assert!(!p.is_run(&run(&[0, 0, 2])));
        assert!(p.is_run_labels(&["0", "0", "1"]).unwrap());
        assert!(matches!(
            p.is_run_labels(&["0", "x", "1"]),
            Err(ProtocolError::UnknownValue { channel: 1, .. })
        ));
        assert!(matches!(
            p.is_run_labels(&["0", "1"]),
            Err(ProtocolError::RunLength { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn window_positions() {
        let p = binary_chain([FULL, FULL]);
        assert_eq!(p.window(), (0, 2));
        assert!(p.in_window(2) && !p.in_window(3) && !p.in_window(-1));
        assert!(p.local(0).is_none());
        assert!(p.local(1).is_some());
        assert_eq!(run(&[1, 0, 1]).value_at(-4), None);
        assert_eq!(run(&[1, 0, 1]).value_at(2), Some(1));
    }

    #[test]
    fn continuity() {
        let p = binary_chain([&[(0, 0)], FULL]);
        let v = p.validate(true);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].channel, Some(1));
        assert_eq!(v[0].kind, ViolationKind::NoSuccessor { value: "1".into() });
        assert!(p.validate(false).is_empty());
        assert!(binary_chain([FULL, FULL]).validate(true).is_empty());
    }

    #[test]
    fn constructor_rejects_inconsistent_parts() {
        let ch = || ChannelData::new(ValueSpace::labels(["a"]), AtomTable::none());
        assert!(ChainProtocol::new(0, vec![], vec![]).is_err());
        assert!(ChainProtocol::new(0, vec![ch(), ch()], vec![]).is_err());
        let empty = ChannelData::new(ValueSpace::labels(Vec::<String>::new()), AtomTable::none());
        assert!(ChainProtocol::new(0, vec![empty], vec![]).is_err());
        let mut atoms = BTreeMap::new();
        atoms.insert("p".to_string(), vec![true, false]);
        let wrong = ChannelData::new(ValueSpace::labels(["a"]), AtomTable::Explicit(atoms));
        assert!(ChainProtocol::new(0, vec![wrong], vec![]).is_err());
        assert!(ChainProtocol::new(Channel::MAX, vec![ch(), ch()], vec![Arc::new(ExplicitRelation::full(1, 1))]).is_err());
    }
}
