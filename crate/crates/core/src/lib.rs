//! Epistemic logic over linear communication chains.
//!
//! A chain is an integer-indexed sequence of channels; a protocol fixes the
//! values each channel may carry, which adjacent values are compatible, and
//! which atomic propositions hold of each value. `[k]φ` holds on a run when
//! `φ` holds on every run that agrees with it at channel `k`.
//!
//! The crate provides:
//!
//! * [`formula`]: the formula language, its parser, scopes, a truth-table
//!   tautology oracle and a scope-sorted CNF;
//! * [`protocol`]: finite-window chain protocols, run enumeration and
//!   counting, run splicing and the Telephone-game protocol;
//! * [`semantics`]: memoized model checking of formulas on runs;
//! * [`proofcheck`]: a checker for Hilbert-style proof scripts together with
//!   a corpus of worked derivations;
//! * [`search`]: bounded countermodel search and axiom soundness sweeps;
//! * [`cli`]: the `chainlogic` command line front end.

pub mod cli;
pub mod formula;
pub mod proofcheck;
pub mod protocol;
pub mod search;
pub mod semantics;

pub use formula::{parse, Channel, Formula, Scope};
pub use protocol::{ChainProtocol, Run};
pub use semantics::EvalContext;
