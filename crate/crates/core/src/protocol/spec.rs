//! The JSON protocol document and its validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    AtomTable, ChainProtocol, ChannelData, ExplicitRelation, LocalCondition, ProtocolError,
    ValueSpace,
};
use crate::formula::Channel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSpec {
    pub window: [Channel; 2],
    pub channels: Vec<ChannelSpec>,
    #[serde(default)]
    pub local: Vec<LocalSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub index: Channel,
    pub values: Vec<String>,
    #[serde(default)]
    pub atoms: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSpec {
    pub channel: Channel,
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// The channel the violation concerns, if any.
    pub channel: Option<Channel>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    EmptyWindow { lo: Channel, hi: Channel },
    MissingChannel,
    DuplicateChannel,
    ChannelOutsideWindow,
    EmptyValueSet,
    DuplicateValue(String),
    InvalidAtomName(String),
    AtomValueUnknown { atom: String, value: String },
    MissingLocal,
    DuplicateLocal,
    LocalOutsideWindow,
    PairOutsideDomain { from: String, to: String },
    NoSuccessor { value: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.channel {
            write!(f, "channel {k}: ")?;
        }
        match &self.kind {
            ViolationKind::EmptyWindow { lo, hi } => write!(f, "window [{lo}, {hi}] is empty"),
            ViolationKind::MissingChannel => f.write_str("no channel entry"),
            ViolationKind::DuplicateChannel => f.write_str("channel listed more than once"),
            ViolationKind::ChannelOutsideWindow => f.write_str("channel lies outside the window"),
            ViolationKind::EmptyValueSet => f.write_str("value set is empty"),
            ViolationKind::DuplicateValue(v) => write!(f, "value {v:?} listed more than once"),
            ViolationKind::InvalidAtomName(a) => write!(f, "atom name {a:?} is not an identifier"),
            ViolationKind::AtomValueUnknown { atom, value } => {
                write!(f, "atom {atom:?} is true at unknown value {value:?}")
            }
            ViolationKind::MissingLocal => f.write_str("no local condition"),
            ViolationKind::DuplicateLocal => f.write_str("local condition listed more than once"),
            ViolationKind::LocalOutsideWindow => {
                f.write_str("local condition for a channel outside (lo, hi]")
            }
            ViolationKind::PairOutsideDomain { from, to } => {
                write!(f, "pair ({from:?}, {to:?}) lies outside V_(k-1) x V_k")
            }
            ViolationKind::NoSuccessor { value } => {
                write!(f, "value {value:?} of the previous channel has no successor")
            }
        }
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Every well-formedness violation of `spec`, plus continuity violations
/// when `require_continuity` is set. Empty means the document describes a
/// valid protocol.
pub fn validate(spec: &ProtocolSpec, require_continuity: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |channel: Option<Channel>, kind| out.push(Violation { channel, kind });
    let [lo, hi] = spec.window;
    if lo > hi {
        push(None, ViolationKind::EmptyWindow { lo, hi });
        return out;
    }

    let mut values: BTreeMap<Channel, BTreeSet<&str>> = BTreeMap::new();
    for ch in &spec.channels {
        let k = Some(ch.index);
        if ch.index < lo || ch.index > hi {
            push(k, ViolationKind::ChannelOutsideWindow);
            continue;
        }
        if values.contains_key(&ch.index) {
            push(k, ViolationKind::DuplicateChannel);
            continue;
        }
        if ch.values.is_empty() {
            push(k, ViolationKind::EmptyValueSet);
        }
        let mut set = BTreeSet::new();
        for v in &ch.values {
            if !set.insert(v.as_str()) {
                push(k, ViolationKind::DuplicateValue(v.clone()));
            }
        }
        for (atom, truth) in &ch.atoms {
            if !is_identifier(atom) {
                push(k, ViolationKind::InvalidAtomName(atom.clone()));
            }
            for v in truth {
                if !set.contains(v.as_str()) {
                    push(
                        k,
                        ViolationKind::AtomValueUnknown {
                            atom: atom.clone(),
                            value: v.clone(),
                        },
                    );
                }
            }
        }
        values.insert(ch.index, set);
    }
    for k in lo..=hi {
        if !values.contains_key(&k) {
            push(Some(k), ViolationKind::MissingChannel);
        }
    }

    let mut seen = BTreeSet::new();
    for l in &spec.local {
        let k = Some(l.channel);
        if l.channel <= lo || l.channel > hi {
            push(k, ViolationKind::LocalOutsideWindow);
            continue;
        }
        if !seen.insert(l.channel) {
            push(k, ViolationKind::DuplicateLocal);
            continue;
        }
        let (prev, cur) = (values.get(&(l.channel - 1)), values.get(&l.channel));
        for (a, b) in &l.pairs {
            let ok = prev.is_some_and(|s| s.contains(a.as_str()))
                && cur.is_some_and(|s| s.contains(b.as_str()));
            if !ok {
                push(
                    k,
                    ViolationKind::PairOutsideDomain {
                        from: a.clone(),
                        to: b.clone(),
                    },
                );
            }
        }
        if require_continuity {
            if let Some(prev) = prev {
                for v in prev {
                    if !l.pairs.iter().any(|(a, _)| a == v) {
                        push(
                            k,
                            ViolationKind::NoSuccessor {
                                value: v.to_string(),
                            },
                        );
                    }
                }
            }
        }
    }
    for k in lo.saturating_add(1)..=hi {
        if !seen.contains(&k) {
            push(Some(k), ViolationKind::MissingLocal);
        }
    }
    out
}

impl ProtocolSpec {
    pub fn from_json(text: &str) -> Result<ProtocolSpec, ProtocolError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("protocol documents always serialize")
    }

    /// Builds the protocol, failing with every well-formedness violation.
    /// Continuity is not required.
    pub fn build(&self) -> Result<ChainProtocol, ProtocolError> {
        let violations = validate(self, false);
        if !violations.is_empty() {
            return Err(ProtocolError::Invalid(violations));
        }
        let [lo, hi] = self.window;
        let mut by_index: BTreeMap<Channel, &ChannelSpec> =
            self.channels.iter().map(|c| (c.index, c)).collect();
        let mut channels = Vec::new();
        for k in lo..=hi {
            let c = by_index.remove(&k).expect("validated");
            let values = ValueSpace::labels(c.values.iter().cloned());
            let atoms = c
                .atoms
                .iter()
                .map(|(name, truth)| {
                    let mut table = vec![false; values.len()];
                    for v in truth {
                        table[values.id_of(v).expect("validated")] = true;
                    }
                    (name.clone(), table)
                })
                .collect();
            channels.push(ChannelData::new(values, AtomTable::Explicit(atoms)));
        }
        let mut local: Vec<Arc<dyn LocalCondition>> = Vec::new();
        for k in lo + 1..=hi {
            let l = self.local.iter().find(|l| l.channel == k).expect("validated");
            let j = (k - lo) as usize;
            let (prev, cur) = (&channels[j - 1].values, &channels[j].values);
            let pairs = l.pairs.iter().map(|(a, b)| {
                (
                    prev.id_of(a).expect("validated"),
                    cur.id_of(b).expect("validated"),
                )
            });
            let rel = ExplicitRelation::new(prev.len(), cur.len(), pairs).expect("validated");
            local.push(Arc::new(rel));
        }
        ChainProtocol::new(lo, channels, local)
    }
}

impl ChainProtocol {
    pub fn from_json(text: &str) -> Result<ChainProtocol, ProtocolError> {
        ProtocolSpec::from_json(text)?.build()
    }

    /// Materializes the protocol as a document. Computed relations and
    /// word-equality atoms are expanded, so this is only sensible for small
    /// protocols.
    pub fn to_spec(&self) -> ProtocolSpec {
        let (lo, hi) = self.window();
        let channels = (0..self.width())
            .map(|j| {
                let ch = self.channel_at(j);
                let labels: Vec<String> = (0..ch.values.len())
                    .map(|v| ch.values.label(v).into_owned())
                    .collect();
                let atoms = match &ch.atoms {
                    AtomTable::Explicit(map) => map
                        .iter()
                        .map(|(name, table)| {
                            let truth = (0..labels.len())
                                .filter(|&v| table[v])
                                .map(|v| labels[v].clone())
                                .collect();
                            (name.clone(), truth)
                        })
                        .collect(),
                    AtomTable::WordEquality => labels
                        .iter()
                        .map(|w| (format!("eq_{w}"), vec![w.clone()]))
                        .collect(),
                };
                ChannelSpec {
                    index: lo + j as Channel,
                    values: labels,
                    atoms,
                }
            })
            .collect();
        let local = (1..self.width())
            .map(|j| {
                let rel = self.local_at(j);
                let (prev, cur) = (&self.channel_at(j - 1).values, &self.channel_at(j).values);
                let pairs = (0..prev.len())
                    .flat_map(|a| {
                        rel.successors(a).into_iter().map(move |b| {
                            (prev.label(a).into_owned(), cur.label(b).into_owned())
                        })
                    })
                    .collect();
                LocalSpec {
                    channel: lo + j as Channel,
                    pairs,
                }
            })
            .collect();
        ProtocolSpec {
            window: [lo, hi],
            channels,
            local,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_VALUE_FULL: &str = r#"{
        "window": [0, 1],
        "channels": [
            { "index": 0, "values": ["u", "v"], "atoms": { "p": ["u"] } },
            { "index": 1, "values": ["x", "y"] }
        ],
        "local": [ { "channel": 1, "pairs": [["u","x"],["u","y"],["v","x"],["v","y"]] } ]
    }"#;

    #[test]
    fn full_relation_is_valid_and_continuous() {
        let spec = ProtocolSpec::from_json(TWO_VALUE_FULL).unwrap();
        assert!(validate(&spec, true).is_empty());
        let p = spec.build().unwrap();
        assert_eq!(p.run_count().unwrap(), 4);
        assert_eq!(p.atom_truth(0, "p", 0), Some(true));
        assert_eq!(p.atom_truth(0, "p", 1), Some(false));
        assert_eq!(p.atom_truth(1, "p", 0), None);
        assert_eq!(p.to_spec(), spec);
    }

    #[test]
    fn missing_successor_breaks_continuity() {
        let mut spec = ProtocolSpec::from_json(TWO_VALUE_FULL).unwrap();
        spec.local[0].pairs = vec![("u".into(), "x".into())];
        let v = validate(&spec, true);
        assert_eq!(
            v,
            vec![Violation {
                channel: Some(1),
                kind: ViolationKind::NoSuccessor { value: "v".into() }
            }]
        );
        assert!(validate(&spec, false).is_empty());
        let p = spec.build().unwrap();
        assert_eq!(p.validate(true).len(), 1);
    }

    #[test]
    fn atom_outside_value_set() {
        let mut spec = ProtocolSpec::from_json(TWO_VALUE_FULL).unwrap();
        spec.channels[0].atoms.insert("q".into(), vec!["w".into()]);
        let v = validate(&spec, false);
        assert_eq!(v.len(), 1);
        assert_eq!(
            v[0].kind,
            ViolationKind::AtomValueUnknown {
                atom: "q".into(),
                value: "w".into()
            }
        );
        assert!(matches!(spec.build(), Err(ProtocolError::Invalid(_))));
    }

    #[test]
    fn structural_violations() {
        let spec = ProtocolSpec {
            window: [0, 2],
            channels: vec![
                ChannelSpec { index: 0, values: vec!["a".into(), "a".into()], atoms: BTreeMap::new() },
                ChannelSpec { index: 0, values: vec!["b".into()], atoms: BTreeMap::new() },
                ChannelSpec { index: 7, values: vec![], atoms: BTreeMap::new() },
                ChannelSpec { index: 2, values: vec![], atoms: BTreeMap::new() },
            ],
            local: vec![
                LocalSpec { channel: 0, pairs: vec![] },
                LocalSpec { channel: 2, pairs: vec![("a".into(), "zz".into())] },
                LocalSpec { channel: 2, pairs: vec![] },
            ],
        };
        let kinds: Vec<(Option<Channel>, ViolationKind)> =
            validate(&spec, false).into_iter().map(|v| (v.channel, v.kind)).collect();
        assert_eq!(
            kinds,
            vec![
                (Some(0), ViolationKind::DuplicateValue("a".into())),
                (Some(0), ViolationKind::DuplicateChannel),
                (Some(7), ViolationKind::ChannelOutsideWindow),
                (Some(2), ViolationKind::EmptyValueSet),
                (Some(1), ViolationKind::MissingChannel),
                (Some(0), ViolationKind::LocalOutsideWindow),
                (Some(2), ViolationKind::PairOutsideDomain { from: "a".into(), to: "zz".into() }),
                (Some(2), ViolationKind::DuplicateLocal),
                (Some(1), ViolationKind::MissingLocal),
            ]
        );
        let bad_window = ProtocolSpec { window: [3, 1], channels: vec![], local: vec![] };
        assert_eq!(validate(&bad_window, false).len(), 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = TWO_VALUE_FULL.replace("\"window\"", "\"extra\": 1, \"window\"");
        assert!(matches!(ProtocolSpec::from_json(&text), Err(ProtocolError::Json(_))));
        let text = TWO_VALUE_FULL.replace("\"index\": 1,", "\"index\": 1, \"colour\": 3,");
        assert!(ProtocolSpec::from_json(&text).is_err());
    }

    #[test]
    fn atom_names_must_be_identifiers() {
        let mut spec = ProtocolSpec::from_json(TWO_VALUE_FULL).unwrap();
        spec.channels[1].atoms.insert("not ok".into(), vec![]);
        assert_eq!(
            validate(&spec, false)[0].kind,
            ViolationKind::InvalidAtomName("not ok".into())
        );
    }
}
