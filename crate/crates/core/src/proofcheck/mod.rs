//! Checking Hilbert-style proof scripts.
//!
//! A script is a list of numbered lines, each a formula with a
//! justification: a propositional tautology, an axiom instance with explicit
//! parameters, Modus Ponens, Necessitation, or a premise. The checker only
//! verifies; it never searches for parameters.
//!
//! Premises are tainted and so is everything derived from them by Modus
//! Ponens. Necessitation may not be applied to a tainted line, which keeps
//! `X ⊢ φ` restricted to Modus Ponens over the premises while ordinary
//! theorems can still be proved inside the same script.

mod axiom;
mod corpus;
mod script;

use std::collections::HashMap;
use std::fmt;

use crate::formula::{is_tautology_with_limit, Channel, Formula, FormulaError, DEFAULT_VARIABLE_LIMIT};

pub use axiom::{match_axiom, AxiomInstance, AxiomParams, Schema};
pub use corpus::corpus;

pub type LineId = u32;

/// Errors that make a script unreadable, as opposed to a rejected proof.
#[derive(Debug, thiserror::Error)]
pub enum ProofError {
    #[error("unknown axiom schema {0:?}")]
    UnknownSchema(String),
    #[error("schema {schema} needs parameter {param:?}")]
    MissingParameter { schema: &'static str, param: String },
    #[error("schema {schema} takes no parameter {param:?}")]
    UnexpectedParameter { schema: &'static str, param: String },
    #[error("malformed proof script: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}, field {field}: {source}")]
    Formula {
        line: LineId,
        field: &'static str,
        source: FormulaError,
    },
    #[error("goal: {0}")]
    Goal(FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Tautology,
    Axiom(AxiomInstance),
    /// From line `minor` (`φ`) and line `major` (`φ → ψ`) infer `ψ`.
    ModusPonens { minor: LineId, major: LineId },
    /// From line `from` (`φ`) infer `[k]φ`.
    Necessitation { k: Channel, from: LineId },
    Premise,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub id: LineId,
    pub formula: Formula,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub goal: Formula,
    pub premises_allowed: bool,
    pub lines: Vec<ProofLine>,
}

/// Why a line, or the script as a whole, was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Rejection {
    #[error("script has no lines")]
    Empty,
    #[error("line ids must be positive and strictly increasing")]
    IdOrder,
    #[error("line {0} does not precede this line")]
    BadReference(LineId),
    #[error("not a propositional tautology")]
    NotATautology,
    #[error("tautology check needs {found} variables, limit is {limit}; split the step")]
    TautologyTooLarge { found: usize, limit: usize },
    #[error("formula is not the {0} instance given by the parameters")]
    AxiomMismatch(Schema),
    #[error("{schema} side condition fails: {detail}")]
    SideCondition { schema: Schema, detail: String },
    #[error("line {major} is not line {minor} -> this formula")]
    ModusPonensMismatch { minor: LineId, major: LineId },
    #[error("formula is not [{k}] applied to line {from}")]
    NecessitationMismatch { k: Channel, from: LineId },
    #[error("necessitation applied to line {0}, which depends on a premise")]
    NecessitationOnPremise(LineId),
    #[error("premises are not allowed in this script")]
    PremiseNotAllowed,
    #[error("last line does not state the goal")]
    GoalMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineReport {
    pub id: LineId,
    /// Depends on a premise.
    pub tainted: bool,
    pub result: Result<(), Rejection>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub lines: Vec<LineReport>,
    /// First failing line (`None` for script-level failures) and reason.
    pub failure: Option<(Option<LineId>, Rejection)>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failing_line(&self) -> Option<LineId> {
        self.failure.as_ref().and_then(|(l, _)| *l)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => f.write_str("accepted"),
            Some((Some(line), why)) => write!(f, "rejected at line {line}: {why}"),
            Some((None, why)) => write!(f, "rejected: {why}"),
        }
    }
}

/// Checks `script` with the default tautology variable limit.
pub fn check_script(script: &ProofScript) -> Verdict {
    check_script_with_limit(script, DEFAULT_VARIABLE_LIMIT)
}

pub fn check_script_with_limit(script: &ProofScript, variable_limit: usize) -> Verdict {
    // id -> (position, tainted)
    let mut seen: HashMap<LineId, (usize, bool)> = HashMap::new();
    let mut reports = Vec::with_capacity(script.lines.len());
    let mut last_id = 0;
    for (pos, line) in script.lines.iter().enumerate() {
        let lookup = |id: LineId| -> Result<(&Formula, bool), Rejection> {
            match seen.get(&id) {
                Some(&(p, tainted)) if id < line.id => Ok((&script.lines[p].formula, tainted)),
                _ => Err(Rejection::BadReference(id)),
            }
        };
        let mut tainted = false;
        let result = if line.id <= last_id {
            Err(Rejection::IdOrder)
        } else {
            match &line.rule {
                Rule::Tautology => match is_tautology_with_limit(&line.formula, variable_limit) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(Rejection::NotATautology),
                    Err(FormulaError::TooManyVariables { found, limit }) => {
                        Err(Rejection::TautologyTooLarge { found, limit })
                    }
                    Err(e) => unreachable!("tautology check only fails on the limit: {e}"),
                },
                Rule::Axiom(inst) => {
                    if inst.formula() != line.formula {
                        Err(Rejection::AxiomMismatch(inst.schema()))
                    } else if let Some(detail) = inst.side_condition_failure() {
                        Err(Rejection::SideCondition {
                            schema: inst.schema(),
                            detail,
                        })
                    } else {
                        Ok(())
                    }
                }
                Rule::ModusPonens { minor, major } => (|| {
                    let (phi, t1) = lookup(*minor)?;
                    let (imp, t2) = lookup(*major)?;
                    tainted = t1 || t2;
                    match imp {
                        Formula::Implies(l, r) if **l == *phi && **r == line.formula => Ok(()),
                        _ => Err(Rejection::ModusPonensMismatch {
                            minor: *minor,
                            major: *major,
                        }),
                    }
                })(),
                Rule::Necessitation { k, from } => (|| {
                    let (phi, t) = lookup(*from)?;
                    if t {
                        tainted = true;
                        return Err(Rejection::NecessitationOnPremise(*from));
                    }
                    match &line.formula {
                        Formula::Box(j, body) if j == k && **body == *phi => Ok(()),
                        _ => Err(Rejection::NecessitationMismatch { k: *k, from: *from }),
                    }
                })(),
                Rule::Premise => {
                    tainted = true;
                    if script.premises_allowed {
                        Ok(())
                    } else {
                        Err(Rejection::PremiseNotAllowed)
                    }
                }
            }
        };
        if line.id > last_id {
            last_id = line.id;
            seen.insert(line.id, (pos, tainted));
        }
        reports.push(LineReport {
            id: line.id,
            tainted,
            result,
        });
    }

    let mut failure = reports
        .iter()
        .find_map(|r| r.result.clone().err().map(|e| (Some(r.id), e)));
    if failure.is_none() {
        failure = match script.lines.last() {
            None => Some((None, Rejection::Empty)),
            Some(last) if last.formula != script.goal => {
                Some((Some(last.id), Rejection::GoalMismatch))
            }
            Some(_) => None,
        };
    }
    Verdict {
        lines: reports,
        failure,
    }
}
