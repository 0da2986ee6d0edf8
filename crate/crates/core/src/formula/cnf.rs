//! Conjunctive normal form whose literals each mention a single channel.
//!
//! Literals are the skeleton's abstracted atoms and boxes (or their
//! negations), so each one has a scope of exactly one channel.

use super::skeleton::{check_limit, prop_is_valid, Prop, Skeleton, DEFAULT_VARIABLE_LIMIT};
use super::{Formula, FormulaError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

type Clause = Vec<Literal>;

/// A CNF over the variables of a skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopedCnf {
    pub skeleton: Skeleton,
    /// An empty list is `true`; an empty clause is `false`.
    pub clauses: Vec<Vec<Literal>>,
}

impl ScopedCnf {
    pub fn literal_formula(&self, lit: Literal) -> Formula {
        let base = self.skeleton.bindings[lit.var].clone();
        if lit.positive {
            base
        } else {
            Formula::not(base)
        }
    }

    /// Clauses with literals materialized as formulas; negative literals
    /// are rendered as `σ → ⊥`.
    pub fn formula_clauses(&self) -> Vec<Vec<Formula>> {
        self.clauses
            .iter()
            .map(|c| c.iter().map(|l| self.literal_formula(*l)).collect())
            .collect()
    }

    /// The conjunction of disjunctions, folded left.
    pub fn to_formula(&self) -> Formula {
        Formula::and_all(
            self.formula_clauses()
                .into_iter()
                .map(Formula::or_all),
        )
    }

    fn template(&self) -> Prop {
        let lit = |l: &Literal| {
            if l.positive {
                Prop::Var(l.var)
            } else {
                Prop::implies(Prop::Var(l.var), Prop::Bottom)
            }
        };
        let or = |a: Prop, b: Prop| Prop::implies(Prop::implies(a, Prop::Bottom), b);
        let and = |a: Prop, b: Prop| {
            Prop::implies(
                Prop::implies(a, Prop::implies(b, Prop::Bottom)),
                Prop::Bottom,
            )
        };
        self.clauses
            .iter()
            .map(|c| c.iter().map(lit).reduce(or).unwrap_or(Prop::Bottom))
            .reduce(and)
            .unwrap_or(Prop::implies(Prop::Bottom, Prop::Bottom))
    }
}

pub fn scoped_cnf(f: &Formula) -> Result<ScopedCnf, FormulaError> {
    scoped_cnf_with_limit(f, DEFAULT_VARIABLE_LIMIT)
}

pub fn scoped_cnf_with_limit(f: &Formula, limit: usize) -> Result<ScopedCnf, FormulaError> {
    let skeleton = Skeleton::of(f);
    check_limit(skeleton.var_count(), limit)?;
    let clauses = cnf_of(&skeleton.template, true);
    let out = ScopedCnf { skeleton, clauses };
    debug_assert!({
        let iff = |a: Prop, b: Prop| {
            let both = |x: Prop, y: Prop| {
                Prop::implies(
                    Prop::implies(x, Prop::implies(y, Prop::Bottom)),
                    Prop::Bottom,
                )
            };
            both(Prop::implies(a.clone(), b.clone()), Prop::implies(b, a))
        };
        prop_is_valid(
            &iff(out.skeleton.template.clone(), out.template()),
            out.skeleton.var_count(),
        )
    });
    Ok(out)
}

/// CNF of `p` (when `positive`) or of `¬p`.
fn cnf_of(p: &Prop, positive: bool) -> Vec<Clause> {
    match (p, positive) {
        (Prop::Bottom, true) => vec![Vec::new()],
        (Prop::Bottom, false) => Vec::new(),
        (Prop::Var(v), positive) => vec![vec![Literal { var: *v, positive }]],
        // a → b  ≡  ¬a ∨ b
        (Prop::Implies(a, b), true) => disjoin(cnf_of(a, false), cnf_of(b, true)),
        // ¬(a → b)  ≡  a ∧ ¬b
        (Prop::Implies(a, b), false) => conjoin(cnf_of(a, true), cnf_of(b, false)),
    }
}

fn conjoin(mut lhs: Vec<Clause>, rhs: Vec<Clause>) -> Vec<Clause> {
    for c in rhs {
        if !lhs.contains(&c) {
            lhs.push(c);
        }
    }
    lhs
}

fn disjoin(lhs: Vec<Clause>, rhs: Vec<Clause>) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    for a in &lhs {
        'pair: for b in &rhs {
            let mut clause = a.clone();
            for lit in b {
                if clause.contains(&Literal {
                    positive: !lit.positive,
                    ..*lit
                }) {
                    // complementary pair: clause is true
                    continue 'pair;
                }
                if !clause.contains(lit) {
                    clause.push(*lit);
                }
            }
            if !out.contains(&clause) {
                out.push(clause);
            }
        }
    }
    out
}
