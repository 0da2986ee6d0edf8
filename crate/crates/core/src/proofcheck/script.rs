use serde::{Deserialize, Serialize};

use crate::formula::{parse, Channel, Formula};

use super::{AxiomInstance, AxiomParams, LineId, ProofError, ProofLine, ProofScript, Rule, Schema};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScriptDoc {
    goal: String,
    #[serde(default)]
    premises_allowed: bool,
    lines: Vec<LineDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineDoc {
    id: LineId,
    formula: String,
    rule: RuleDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RuleDoc {
    Axiom {
        schema: String,
        k: Channel,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<Channel>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        psi: Option<String>,
    },
    Mp {
        from: LineId,
        #[serde(rename = "impl")]
        major: LineId,
    },
    Nec {
        k: Channel,
        from: LineId,
    },
    Taut {},
    Premise {},
}

fn text(f: &Formula) -> String {
    f.sugared().to_string()
}

impl ProofScript {
    pub fn from_json(json: &str) -> Result<ProofScript, ProofError> {
        let doc: ScriptDoc = serde_json::from_str(json)?;
        let goal = parse(&doc.goal).map_err(ProofError::Goal)?;
        let mut lines = Vec::with_capacity(doc.lines.len());
        for l in doc.lines {
            let field = |field: &'static str, t: &str| {
                parse(t).map_err(|source| ProofError::Formula {
                    line: l.id,
                    field,
                    source,
                })
            };
            let formula = field("formula", &l.formula)?;
            let rule = match &l.rule {
                RuleDoc::Axiom {
                    schema,
                    k,
                    n,
                    phi,
                    psi,
                } => {
                    let schema: Schema = schema.parse()?;
                    let params = AxiomParams {
                        k: *k,
                        n: *n,
                        phi: phi.as_deref().map(|t| field("phi", t)).transpose()?,
                        psi: psi.as_deref().map(|t| field("psi", t)).transpose()?,
                    };
                    Rule::Axiom(AxiomInstance::from_params(schema, params)?)
                }
                RuleDoc::Mp { from, major } => Rule::ModusPonens {
                    minor: *from,
                    major: *major,
                },
                RuleDoc::Nec { k, from } => Rule::Necessitation { k: *k, from: *from },
                RuleDoc::Taut {} => Rule::Tautology,
                RuleDoc::Premise {} => Rule::Premise,
            };
            lines.push(ProofLine {
                id: l.id,
                formula,
                rule,
            });
        }
        Ok(ProofScript {
            goal,
            premises_allowed: doc.premises_allowed,
            lines,
        })
    }

    /// Pretty JSON with formulas in their sugared form.
    pub fn to_json(&self) -> String {
        let doc = ScriptDoc {
            goal: text(&self.goal),
            premises_allowed: self.premises_allowed,
            lines: self
                .lines
                .iter()
                .map(|l| LineDoc {
                    id: l.id,
                    formula: text(&l.formula),
                    rule: match &l.rule {
                        Rule::Tautology => RuleDoc::Taut {},
                        Rule::Premise => RuleDoc::Premise {},
                        Rule::ModusPonens { minor, major } => RuleDoc::Mp {
                            from: *minor,
                            major: *major,
                        },
                        Rule::Necessitation { k, from } => RuleDoc::Nec { k: *k, from: *from },
                        Rule::Axiom(inst) => {
                            let p = inst.params();
                            RuleDoc::Axiom {
                                schema: inst.schema().name().to_string(),
                                k: p.k,
                                n: p.n,
                                phi: p.phi.as_ref().map(text),
                                psi: p.psi.as_ref().map(text),
                            }
                        }
                    },
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("script serializes");
        out.push('\n');
        out
    }
}
