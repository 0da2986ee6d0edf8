//! Propositional skeletons and the truth-table tautology oracle.
//!
//! A skeleton replaces every maximal atom or box subformula by a variable;
//! syntactically identical subformulas share a variable. A formula is a
//! propositional tautology exactly when its skeleton template is.

use std::collections::HashMap;

use super::{Formula, FormulaError};

pub const DEFAULT_VARIABLE_LIMIT: usize = 24;

/// Propositional formula over `⊥`, `→` and numbered variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prop {
    Bottom,
    Var(usize),
    Implies(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn implies(lhs: Prop, rhs: Prop) -> Prop {
        Prop::Implies(Box::new(lhs), Box::new(rhs))
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Prop::Bottom => None,
            Prop::Var(v) => Some(*v),
            Prop::Implies(l, r) => l.max_var().max(r.max_var()),
        }
    }

    /// Truth value under an assignment indexed by variable.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Prop::Bottom => false,
            Prop::Var(v) => assignment[*v],
            Prop::Implies(l, r) => !l.eval(assignment) || r.eval(assignment),
        }
    }

    /// Evaluates 64 assignments at once; bit `i` of `vars[v]` is the value
    /// of variable `v` in assignment `i`.
    pub(crate) fn eval_words(&self, vars: &[u64]) -> u64 {
        match self {
            Prop::Bottom => 0,
            Prop::Var(v) => vars[*v],
            Prop::Implies(l, r) => !l.eval_words(vars) | r.eval_words(vars),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub template: Prop,
    /// `bindings[v]` is the subformula abstracted as variable `v`, numbered
    /// by first occurrence in a left-to-right traversal.
    pub bindings: Vec<Formula>,
}

impl Skeleton {
    pub fn of(f: &Formula) -> Skeleton {
        let mut index: HashMap<&Formula, usize> = HashMap::new();
        let mut bindings = Vec::new();
        let template = abstract_formula(f, &mut index, &mut bindings);
        Skeleton { template, bindings }
    }

    pub fn var_count(&self) -> usize {
        self.bindings.len()
    }

    /// Puts the bound subformulas back into the template.
    pub fn substitute(&self) -> Formula {
        self.instantiate(&self.template)
    }

    /// Substitutes this skeleton's bindings into an arbitrary template over
    /// the same variables.
    pub fn instantiate(&self, template: &Prop) -> Formula {
        match template {
            Prop::Bottom => Formula::Bottom,
            Prop::Var(v) => self.bindings[*v].clone(),
            Prop::Implies(l, r) => Formula::implies(self.instantiate(l), self.instantiate(r)),
        }
    }
}

fn abstract_formula<'a>(
    f: &'a Formula,
    index: &mut HashMap<&'a Formula, usize>,
    bindings: &mut Vec<Formula>,
) -> Prop {
    match f {
        Formula::Bottom => Prop::Bottom,
        Formula::Implies(l, r) => {
            let l = abstract_formula(l, index, bindings);
            let r = abstract_formula(r, index, bindings);
            Prop::implies(l, r)
        }
        Formula::Atom(_) | Formula::Box(..) => {
            let next = bindings.len();
            let v = *index.entry(f).or_insert(next);
            if v == next {
                bindings.push(f.clone());
            }
            Prop::Var(v)
        }
    }
}

pub fn is_tautology(f: &Formula) -> Result<bool, FormulaError> {
    is_tautology_with_limit(f, DEFAULT_VARIABLE_LIMIT)
}

pub fn is_tautology_with_limit(f: &Formula, limit: usize) -> Result<bool, FormulaError> {
    let sk = Skeleton::of(f);
    check_limit(sk.var_count(), limit)?;
    Ok(prop_is_valid(&sk.template, sk.var_count()))
}

pub(crate) fn check_limit(found: usize, limit: usize) -> Result<(), FormulaError> {
    if found > limit {
        Err(FormulaError::TooManyVariables { found, limit })
    } else {
        Ok(())
    }
}

const LOW_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// True iff `template` holds under all `2^vars` assignments.
///
/// The first six variables are packed into the bits of a word; the rest
/// are enumerated one word at a time.
pub(crate) fn prop_is_valid(template: &Prop, vars: usize) -> bool {
    debug_assert!(template.max_var().is_none_or(|v| v < vars));
    let low = vars.min(6);
    let used: u64 = if low == 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << low)) - 1
    };
    let mut words: Vec<u64> = (0..vars)
        .map(|v| if v < 6 { LOW_MASKS[v] } else { 0 })
        .collect();
    let chunks: u64 = 1 << (vars - low);
    for chunk in 0..chunks {
        for (v, w) in words.iter_mut().enumerate().skip(6) {
            *w = if (chunk >> (v - 6)) & 1 == 1 { u64::MAX } else { 0 };
        }
        if template.eval_words(&words) & used != used {
            return false;
        }
    }
    true
}
