use std::fmt;
use std::str::FromStr;

use crate::formula::{Channel, Extended, Formula};

use super::ProofError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    Distributivity,
    Reflexivity,
    SelfAwareness,
    Gateway,
    Disjunction,
}

impl Schema {
    pub const ALL: [Schema; 5] = [
        Schema::Distributivity,
        Schema::Reflexivity,
        Schema::SelfAwareness,
        Schema::Gateway,
        Schema::Disjunction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::Distributivity => "distributivity",
            Schema::Reflexivity => "reflexivity",
            Schema::SelfAwareness => "self_awareness",
            Schema::Gateway => "gateway",
            Schema::Disjunction => "disjunction",
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Schema {
    type Err = ProofError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Schema::ALL
            .into_iter()
            .find(|schema| schema.name() == s)
            .ok_or_else(|| ProofError::UnknownSchema(s.to_string()))
    }
}

/// Instantiation parameters as they appear in a script.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomParams {
    pub k: Channel,
    pub n: Option<Channel>,
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
}

/// A fully instantiated axiom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AxiomInstance {
    /// `[k](φ → ψ) → ([k]φ → [k]ψ)`
    Distributivity { k: Channel, phi: Formula, psi: Formula },
    /// `[k]φ → φ`
    Reflexivity { k: Channel, phi: Formula },
    /// `φ → [k]φ` for `φ ∈ Φ({k})`
    SelfAwareness { k: Channel, phi: Formula },
    /// `[k]φ → [n]φ` for `k < n ≤ min(A)` or `max(A) ≤ n < k`, `A` the
    /// scope of `φ`
    Gateway { k: Channel, n: Channel, phi: Formula },
    /// `[k](φ ∨ ψ) → ([k]φ ∨ [k]ψ)` for `max(scope φ) ≤ k ≤ min(scope ψ)`
    Disjunction { k: Channel, phi: Formula, psi: Formula },
}

impl AxiomInstance {
    pub fn from_params(schema: Schema, params: AxiomParams) -> Result<AxiomInstance, ProofError> {
        let AxiomParams { k, n, phi, psi } = params;
        let missing = |p: &str| ProofError::MissingParameter {
            schema: schema.name(),
            param: p.to_string(),
        };
        let unexpected = |p: &str| ProofError::UnexpectedParameter {
            schema: schema.name(),
            param: p.to_string(),
        };
        let phi = phi.ok_or_else(|| missing("phi"))?;
        let wants_n = schema == Schema::Gateway;
        let wants_psi = matches!(schema, Schema::Distributivity | Schema::Disjunction);
        if n.is_some() && !wants_n {
            return Err(unexpected("n"));
        }
        if psi.is_some() && !wants_psi {
            return Err(unexpected("psi"));
        }
        Ok(match schema {
            Schema::Distributivity => AxiomInstance::Distributivity {
                k,
                phi,
                psi: psi.ok_or_else(|| missing("psi"))?,
            },
            Schema::Reflexivity => AxiomInstance::Reflexivity { k, phi },
            Schema::SelfAwareness => AxiomInstance::SelfAwareness { k, phi },
            Schema::Gateway => AxiomInstance::Gateway {
                k,
                n: n.ok_or_else(|| missing("n"))?,
                phi,
            },
            Schema::Disjunction => AxiomInstance::Disjunction {
                k,
                phi,
                psi: psi.ok_or_else(|| missing("psi"))?,
            },
        })
    }

    pub fn schema(&self) -> Schema {
        match self {
            AxiomInstance::Distributivity { .. } => Schema::Distributivity,
            AxiomInstance::Reflexivity { .. } => Schema::Reflexivity,
            AxiomInstance::SelfAwareness { .. } => Schema::SelfAwareness,
            AxiomInstance::Gateway { .. } => Schema::Gateway,
            AxiomInstance::Disjunction { .. } => Schema::Disjunction,
        }
    }

    pub fn params(&self) -> AxiomParams {
        match self.clone() {
            AxiomInstance::Distributivity { k, phi, psi }
            | AxiomInstance::Disjunction { k, phi, psi } => AxiomParams {
                k,
                n: None,
                phi: Some(phi),
                psi: Some(psi),
            },
            AxiomInstance::Reflexivity { k, phi } | AxiomInstance::SelfAwareness { k, phi } => {
                AxiomParams {
                    k,
                    n: None,
                    phi: Some(phi),
                    psi: None,
                }
            }
            AxiomInstance::Gateway { k, n, phi } => AxiomParams {
                k,
                n: Some(n),
                phi: Some(phi),
                psi: None,
            },
        }
    }

    /// The instantiated schema, sugar already eliminated.
    pub fn formula(&self) -> Formula {
        let b = Formula::boxed;
        match self.clone() {
            AxiomInstance::Distributivity { k, phi, psi } => Formula::implies(
                b(k, Formula::implies(phi.clone(), psi.clone())),
                Formula::implies(b(k, phi), b(k, psi)),
            ),
            AxiomInstance::Reflexivity { k, phi } => Formula::implies(b(k, phi.clone()), phi),
            AxiomInstance::SelfAwareness { k, phi } => Formula::implies(phi.clone(), b(k, phi)),
            AxiomInstance::Gateway { k, n, phi } => Formula::implies(b(k, phi.clone()), b(n, phi)),
            AxiomInstance::Disjunction { k, phi, psi } => Formula::implies(
                b(k, Formula::or(phi.clone(), psi.clone())),
                Formula::or(b(k, phi), b(k, psi)),
            ),
        }
    }

    /// `None` when the side condition holds, otherwise why it fails.
    pub fn side_condition_failure(&self) -> Option<String> {
        match self {
            AxiomInstance::Distributivity { .. } | AxiomInstance::Reflexivity { .. } => None,
            AxiomInstance::SelfAwareness { k, phi } => {
                let s = phi.scope();
                let inside = s.iter().all(|c| c == *k);
                (!inside).then(|| format!("scope {s} of phi is not contained in {{{k}}}"))
            }
            AxiomInstance::Gateway { k, n, phi } => {
                let s = phi.scope();
                let at = Extended::Finite(*n);
                let rightward = k < n && at <= s.min();
                let leftward = s.max() <= at && n < k;
                (!(rightward || leftward)).then(|| {
                    format!(
                        "neither {k} < {n} <= min{s} = {} nor max{s} = {} <= {n} < {k}",
                        s.min(),
                        s.max()
                    )
                })
            }
            AxiomInstance::Disjunction { k, phi, psi } => {
                let (a, b) = (phi.scope(), psi.scope());
                let at = Extended::Finite(*k);
                (!(a.max() <= at && at <= b.min())).then(|| {
                    format!(
                        "max{a} = {} <= {k} <= min{b} = {} fails",
                        a.max(),
                        b.min()
                    )
                })
            }
        }
    }

    pub fn side_condition_holds(&self) -> bool {
        self.side_condition_failure().is_none()
    }

    /// Whether `f` is exactly this instance and the side condition holds.
    pub fn matches(&self, f: &Formula) -> bool {
        self.formula() == *f && self.side_condition_holds()
    }
}

/// Schema lookup by name followed by [`AxiomInstance::matches`].
pub fn match_axiom(schema: &str, params: AxiomParams, f: &Formula) -> Result<bool, ProofError> {
    let schema: Schema = schema.parse()?;
    Ok(AxiomInstance::from_params(schema, params)?.matches(f))
}
