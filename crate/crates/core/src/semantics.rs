//! Truth of formulas at runs of a protocol.
//!
//! `[k]φ` holds at `r` when `φ` holds at every run agreeing with `r` at
//! channel `k`. Its truth depends only on `r(k)`, so results are cached per
//! `(subformula, r(k))`. Channels outside the window all carry the same
//! default value, so `[k]φ` for such `k` quantifies over every run unless
//! the context is in strict-window mode.

use std::collections::HashMap;

use crate::formula::{Channel, Formula};
use crate::protocol::{ChainProtocol, ProtocolError, Run, ValueId};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("atom {name}@{channel} is not declared by the protocol")]
    UndeclaredAtom { name: String, channel: Channel },
    #[error("channel {0} lies outside the protocol window (strict window mode)")]
    OutsideWindow(Channel),
    #[error("the assignment is not a run of this protocol")]
    NotARun,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Bottom,
    Atom(Channel, String),
    Implies(NodeId, NodeId),
    Box(Channel, NodeId),
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Bottom,
    /// Index into `EvalContext::atoms`.
    Atom(usize),
    Implies(NodeId, NodeId),
    /// Window position of the channel, or `None` outside the window.
    Box(Option<usize>, NodeId),
}

#[derive(Debug, Clone)]
enum AtomTruth {
    Table(Vec<bool>),
    Equals(ValueId),
}

/// Evaluation state for one protocol.
///
/// Formulas are hash-consed into a node table, so the cache is shared by
/// every formula evaluated through the same context.
#[derive(Debug)]
pub struct EvalContext<'p> {
    protocol: &'p ChainProtocol,
    strict_window: bool,
    memoize: bool,
    keys: HashMap<Key, NodeId>,
    nodes: Vec<Node>,
    atoms: Vec<(usize, AtomTruth)>,
    memo: HashMap<(NodeId, Option<ValueId>), bool>,
}

impl<'p> EvalContext<'p> {
    pub fn new(protocol: &'p ChainProtocol) -> Self {
        EvalContext {
            protocol,
            strict_window: false,
            memoize: true,
            keys: HashMap::new(),
            nodes: Vec::new(),
            atoms: Vec::new(),
            memo: HashMap::new(),
        }
    }

    /// Reject boxes on channels outside the window instead of reading them
    /// as quantification over all runs.
    pub fn strict_window(mut self, strict: bool) -> Self {
        self.strict_window = strict;
        self
    }

    /// Disables the box cache. Results are identical, only slower.
    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    pub fn protocol(&self) -> &'p ChainProtocol {
        self.protocol
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn intern(&mut self, f: &Formula) -> Result<NodeId, EvalError> {
        let (key, node) = match f {
            Formula::Bottom => (Key::Bottom, Node::Bottom),
            Formula::Atom(a) => {
                let key = Key::Atom(a.channel, a.name.clone());
                if let Some(&id) = self.keys.get(&key) {
                    return Ok(id);
                }
                let undeclared = || EvalError::UndeclaredAtom {
                    name: a.name.clone(),
                    channel: a.channel,
                };
                let j = self.protocol.position(a.channel).ok_or_else(undeclared)?;
                let ch = self.protocol.channel_at(j);
                if !ch.declares_atom(&a.name) {
                    return Err(undeclared());
                }
                let truth = match &ch.atoms {
                    crate::protocol::AtomTable::Explicit(map) => AtomTruth::Table(map[&a.name].clone()),
                    crate::protocol::AtomTable::WordEquality => {
                        let word = a.name.strip_prefix("eq_").expect("declared");
                        AtomTruth::Equals(ch.values.id_of(word).expect("declared"))
                    }
                };
                self.atoms.push((j, truth));
                (key, Node::Atom(self.atoms.len() - 1))
            }
            Formula::Implies(l, r) => {
                let l = self.intern(l)?;
                let r = self.intern(r)?;
                (Key::Implies(l, r), Node::Implies(l, r))
            }
            Formula::Box(k, body) => {
                let body = self.intern(body)?;
                let pos = self.protocol.position(*k);
                if pos.is_none() && self.strict_window {
                    return Err(EvalError::OutsideWindow(*k));
                }
                (Key::Box(*k, body), Node::Box(pos, body))
            }
        };
        if let Some(&id) = self.keys.get(&key) {
            return Ok(id);
        }
        self.nodes.push(node);
        let id = self.nodes.len() - 1;
        self.keys.insert(key, id);
        Ok(id)
    }

    fn check_run(&self, run: &Run) -> Result<(), EvalError> {
        if self.protocol.is_run(run) {
            Ok(())
        } else {
            Err(EvalError::NotARun)
        }
    }

    fn holds(&mut self, run: &Run, id: NodeId) -> bool {
        match self.nodes[id] {
            Node::Bottom => false,
            Node::Atom(a) => {
                let (j, truth) = &self.atoms[a];
                let v = run.values()[*j];
                match truth {
                    AtomTruth::Table(t) => t[v],
                    AtomTruth::Equals(w) => v == *w,
                }
            }
            Node::Implies(l, r) => !self.holds(run, l) || self.holds(run, r),
            Node::Box(pos, body) => {
                let at = pos.map(|j| run.values()[j]);
                if self.memoize {
                    if let Some(&b) = self.memo.get(&(id, at)) {
                        return b;
                    }
                }
                let result = self.first_failure(pos, at, body).is_none();
                if self.memoize {
                    self.memo.insert((id, at), result);
                }
                result
            }
        }
    }

    /// First run (in enumeration order) agreeing at the given position
    /// with value `at` on which `body` fails.
    fn first_failure(&mut self, pos: Option<usize>, at: Option<ValueId>, body: NodeId) -> Option<Run> {
        let protocol = self.protocol;
        let runs = match (pos, at) {
            (Some(j), Some(v)) => protocol
                .runs_fixing(protocol.lo() + j as Channel, v)
                .expect("value taken from a run"),
            _ => protocol.runs(),
        };
        runs.into_iter().find(|r| !self.holds(r, body))
    }

    /// `run ⊩ f`.
    pub fn eval(&mut self, run: &Run, f: &Formula) -> Result<bool, EvalError> {
        let id = self.intern(f)?;
        self.check_run(run)?;
        Ok(self.holds(run, id))
    }

    /// [`eval`](Self::eval) with the run given by labels.
    pub fn eval_labels<S: AsRef<str>>(&mut self, labels: &[S], f: &Formula) -> Result<bool, EvalError> {
        let run = self.protocol.run_from_labels(labels)?;
        self.eval(&run, f)
    }

    /// Whether `f` holds at every run.
    pub fn valid_in(&mut self, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.counterexample(f)?.is_none())
    }

    /// The first run in enumeration order at which `f` fails.
    pub fn counterexample(&mut self, f: &Formula) -> Result<Option<Run>, EvalError> {
        let id = self.intern(f)?;
        let protocol = self.protocol;
        for r in protocol.runs() {
            if !self.holds(&r, id) {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// For `[k]φ` failing at `run`: the first run agreeing with `run` at
    /// `k` on which `φ` fails. `None` when the box holds.
    pub fn box_witness(&mut self, run: &Run, k: Channel, body: &Formula) -> Result<Option<Run>, EvalError> {
        let boxed = self.intern(&Formula::boxed(k, body.clone()))?;
        self.check_run(run)?;
        let Node::Box(pos, body) = self.nodes[boxed] else {
            unreachable!("interned a box")
        };
        let at = pos.map(|j| run.values()[j]);
        Ok(self.first_failure(pos, at, body))
    }

    /// When `f` is a box that fails at `run`, the run witnessing the
    /// failure.
    pub fn refutation(&mut self, run: &Run, f: &Formula) -> Result<Option<Run>, EvalError> {
        match f {
            Formula::Box(k, body) => self.box_witness(run, *k, body),
            _ => Ok(None),
        }
    }
}
