//! Formulas of the chain language: `⊥`, channel-tagged atoms, implication and
//! the per-channel knowledge modality `[k]`.
//!
//! Everything else (`!`, `&`, `|`, `true`, `<k>`) is sugar and is eliminated
//! when a formula is built or parsed, so downstream code only ever sees the
//! four core constructors.

mod cnf;
mod generate;
mod parse;
mod skeleton;

use std::collections::BTreeSet;
use std::fmt;

pub use cnf::{scoped_cnf, scoped_cnf_with_limit, Literal, ScopedCnf};
pub use generate::FormulaGenerator;
pub use parse::{parse, Sugared};
pub use skeleton::{
    is_tautology, is_tautology_with_limit, Prop, Skeleton, DEFAULT_VARIABLE_LIMIT,
};

/// Channel index on the chain.
pub type Channel = i64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("channel index {text:?} at offset {offset} is out of range")]
    ChannelOutOfRange { offset: usize, text: String },
    #[error("formula has {found} distinct propositional variables, limit is {limit}")]
    TooManyVariables { found: usize, limit: usize },
}

impl FormulaError {
    /// Byte offset of a parse failure, if this is one.
    pub fn offset(&self) -> Option<usize> {
        match self {
            FormulaError::Syntax { offset, .. } | FormulaError::ChannelOutOfRange { offset, .. } => {
                Some(*offset)
            }
            FormulaError::TooManyVariables { .. } => None,
        }
    }
}

/// An atomic proposition about the value carried by one channel.
///
/// The channel is part of the atom's identity, so `p@1` and `p@2` are
/// unrelated propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: String,
    pub channel: Channel,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.channel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Atom(Atom),
    Implies(Box<Formula>, Box<Formula>),
    /// `[k]φ`: whoever knows the value of channel `k` can conclude `φ`.
    Box(Channel, Box<Formula>),
}

impl Formula {
    pub fn bottom() -> Formula {
        Formula::Bottom
    }

    pub fn atom(name: impl Into<String>, channel: Channel) -> Formula {
        Formula::Atom(Atom {
            name: name.into(),
            channel,
        })
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn boxed(channel: Channel, body: Formula) -> Formula {
        Formula::Box(channel, Box::new(body))
    }

    /// `⊥ → ⊥`
    pub fn top() -> Formula {
        Formula::implies(Formula::Bottom, Formula::Bottom)
    }

    /// `φ → ⊥`
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::implies(f, Formula::Bottom)
    }

    /// `(φ → (ψ → ⊥)) → ⊥`
    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::not(Formula::implies(lhs, Formula::not(rhs)))
    }

    /// `(φ → ⊥) → ψ`
    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::implies(Formula::not(lhs), rhs)
    }

    /// `(φ → ψ) ∧ (ψ → φ)`
    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::and(
            Formula::implies(lhs.clone(), rhs.clone()),
            Formula::implies(rhs, lhs),
        )
    }

    /// `¬[k]¬φ`
    pub fn diamond(channel: Channel, body: Formula) -> Formula {
        Formula::not(Formula::boxed(channel, Formula::not(body)))
    }

    /// Left-folded conjunction; the empty conjunction is `true`.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Left-folded disjunction; the empty disjunction is `false`.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    /// The minimal channel set `A` with this formula in `Φ(A)`.
    ///
    /// Only outermost atoms and boxes count: the body of `[k]φ` never
    /// contributes anything beyond `k`.
    pub fn scope(&self) -> Scope {
        let mut out = BTreeSet::new();
        self.collect_scope(&mut out);
        Scope(out)
    }

    fn collect_scope(&self, out: &mut BTreeSet<Channel>) {
        match self {
            Formula::Bottom => {}
            Formula::Atom(a) => {
                out.insert(a.channel);
            }
            Formula::Implies(l, r) => {
                l.collect_scope(out);
                r.collect_scope(out);
            }
            Formula::Box(k, _) => {
                out.insert(*k);
            }
        }
    }

    /// Membership in `Φ(A)`.
    pub fn in_phi<'a>(&self, channels: impl IntoIterator<Item = &'a Channel>) -> bool {
        let allowed: BTreeSet<Channel> = channels.into_iter().copied().collect();
        self.scope().iter().all(|k| allowed.contains(&k))
    }

    /// Every channel index that occurs anywhere, nested boxes included.
    pub fn channels(&self) -> BTreeSet<Channel> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                out.insert(a.channel);
            }
            Formula::Box(k, _) => {
                out.insert(*k);
            }
            _ => {}
        });
        out
    }

    pub fn atoms(&self) -> BTreeSet<&Atom> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Bottom | Formula::Atom(_) => {}
            Formula::Implies(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Formula::Box(_, body) => body.visit(f),
        }
    }

    /// Adds `delta` to every channel index.
    pub fn shift(&self, delta: Channel) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(a) => Formula::atom(a.name.clone(), a.channel + delta),
            Formula::Implies(l, r) => Formula::implies(l.shift(delta), r.shift(delta)),
            Formula::Box(k, body) => Formula::boxed(k + delta, body.shift(delta)),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Atom(_) => 0,
            Formula::Implies(l, r) => 1 + l.depth().max(r.depth()),
            Formula::Box(_, body) => 1 + body.depth(),
        }
    }

    /// Canonical fully parenthesized core syntax; [`parse`] inverts it.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Human-oriented rendering that folds desugared patterns back into
    /// `!`, `&`, `|`, `true` and `<k>`. Also parses back to `self`.
    pub fn sugared(&self) -> Sugared<'_> {
        Sugared(self)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bottom => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Implies(l, r) => write!(f, "({l} -> {r})"),
            Formula::Box(k, body) => write!(f, "[{k}]{body}"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// `min`/`max` of a channel set, with `min(∅) = +∞` and `max(∅) = −∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(Channel),
    PosInf,
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(k) => write!(f, "{k}"),
            Extended::PosInf => f.write_str("+inf"),
        }
    }
}

/// A finite set of channel indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Scope(BTreeSet<Channel>);

impl Scope {
    pub fn new(indices: impl IntoIterator<Item = Channel>) -> Scope {
        Scope(indices.into_iter().collect())
    }

    pub fn min(&self) -> Extended {
        self.0
            .first()
            .map_or(Extended::PosInf, |k| Extended::Finite(*k))
    }

    pub fn max(&self) -> Extended {
        self.0
            .last()
            .map_or(Extended::NegInf, |k| Extended::Finite(*k))
    }

    pub fn contains(&self, k: Channel) -> bool {
        self.0.contains(&k)
    }

    pub fn is_subset_of(&self, other: &Scope) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Channel> + '_ {
        self.0.iter().copied()
    }

    pub fn indices(&self) -> &BTreeSet<Channel> {
        &self.0
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str, k: Channel) -> Formula {
        Formula::atom(name, k)
    }

    #[test]
    fn scope_of_box_is_its_channel_only() {
        let f = Formula::boxed(
            2,
            Formula::implies(Formula::boxed(3, p("p", 3)), Formula::boxed(4, p("q", 4))),
        );
        assert_eq!(f.scope(), Scope::new([2]));
    }

    #[test]
    fn scope_of_implication_is_union() {
        let phi = p("p", 7);
        let psi = p("q", 8);
        let f = Formula::implies(
            Formula::boxed(1, Formula::boxed(5, phi)),
            Formula::boxed(3, Formula::boxed(5, psi)),
        );
        assert_eq!(f.scope(), Scope::new([1, 3]));
        assert_eq!(Formula::Bottom.scope(), Scope::default());
    }

    #[test]
    fn phi_membership() {
        let f = Formula::boxed(1, p("p", 1));
        assert!(f.in_phi(&[1, 2]));
        assert!(!f.in_phi(&[2]));
        assert!(Formula::Bottom.in_phi(&[]));
    }

    #[test]
    fn empty_scope_uses_infinite_bounds() {
        let s = Scope::default();
        assert_eq!(s.min(), Extended::PosInf);
        assert_eq!(s.max(), Extended::NegInf);
        let s = Scope::new([3, -1, 2]);
        assert_eq!(s.min(), Extended::Finite(-1));
        assert_eq!(s.max(), Extended::Finite(3));
        assert!(Extended::NegInf < Extended::Finite(Channel::MIN));
        assert!(Extended::Finite(Channel::MAX) < Extended::PosInf);
    }

    #[test]
    fn negation_keeps_singleton_scope() {
        let sigma = Formula::boxed(4, p("p", 0));
        assert_eq!(Formula::not(sigma.clone()).scope(), sigma.scope());
    }

    #[test]
    fn channels_include_nested_ones() {
        let f = Formula::implies(Formula::boxed(1, p("p", 0)), Formula::boxed(2, p("p", 0)));
        assert_eq!(f.scope(), Scope::new([1, 2]));
        assert_eq!(f.channels().into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(f.shift(3).channels().into_iter().collect::<Vec<_>>(), vec![3, 4, 5]);
    }
}
