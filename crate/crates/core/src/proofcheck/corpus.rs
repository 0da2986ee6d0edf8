//! Worked derivations at fixed channels, built programmatically so every line
//! is constructed from the same AST helpers the checker uses.

use crate::formula::{Channel, Formula};

use super::{AxiomInstance, LineId, ProofLine, ProofScript, Rule};

struct Builder {
    lines: Vec<ProofLine>,
}

impl Builder {
    fn new() -> Self {
        Builder { lines: Vec::new() }
    }

    fn push(&mut self, formula: Formula, rule: Rule) -> LineId {
        let id = self.lines.len() as LineId + 1;
        self.lines.push(ProofLine { id, formula, rule });
        id
    }

    fn formula(&self, id: LineId) -> &Formula {
        &self.lines[id as usize - 1].formula
    }

    fn axiom(&mut self, inst: AxiomInstance) -> LineId {
        self.push(inst.formula(), Rule::Axiom(inst))
    }

    fn taut(&mut self, f: Formula) -> LineId {
        self.push(f, Rule::Tautology)
    }

    fn nec(&mut self, k: Channel, from: LineId) -> LineId {
        let f = Formula::boxed(k, self.formula(from).clone());
        self.push(f, Rule::Necessitation { k, from })
    }

    fn mp(&mut self, minor: LineId, major: LineId) -> LineId {
        let f = match self.formula(major) {
            Formula::Implies(_, rhs) => (**rhs).clone(),
            other => panic!("line {major} is not an implication: {other}"),
        };
        self.push(f, Rule::ModusPonens { minor, major })
    }

    /// From a line `φ → ψ`, derive `[k]φ → [k]ψ` (necessitation, distributivity, MP).
    fn lift(&mut self, k: Channel, imp: LineId) -> LineId {
        let (phi, psi) = split(self.formula(imp));
        let boxed = self.nec(k, imp);
        let dist = self.axiom(AxiomInstance::Distributivity { k, phi, psi });
        self.mp(boxed, dist)
    }

    /// From lines `a → b` and `b → c`, derive `a → c`.
    fn chain(&mut self, ab: LineId, bc: LineId) -> LineId {
        let (a, b) = split(self.formula(ab));
        let (_, c) = split(self.formula(bc));
        let t = self.taut(imp(imp(a.clone(), b.clone()), imp(imp(b, c.clone()), imp(a, c))));
        let step = self.mp(ab, t);
        self.mp(bc, step)
    }

    fn finish(self) -> ProofScript {
        let goal = self.lines.last().expect("nonempty proof").formula.clone();
        ProofScript {
            goal,
            premises_allowed: false,
            lines: self.lines,
        }
    }
}

fn split(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::Implies(a, b) => ((**a).clone(), (**b).clone()),
        other => panic!("not an implication: {other}"),
    }
}

fn imp(a: Formula, b: Formula) -> Formula {
    Formula::implies(a, b)
}

fn p(k: Channel) -> Formula {
    Formula::atom("p", k)
}

/// `[k]φ → [k][k]φ` via self-awareness, with `k = 0`, `φ = p@0`.
fn prop1() -> ProofScript {
    let mut b = Builder::new();
    b.axiom(AxiomInstance::SelfAwareness {
        k: 0,
        phi: Formula::boxed(0, p(0)),
    });
    b.finish()
}

/// `<k>φ → [k]<k>φ` with `k = 0`, `φ = p@1`.
fn prop2() -> ProofScript {
    let mut b = Builder::new();
    b.axiom(AxiomInstance::SelfAwareness {
        k: 0,
        phi: Formula::diamond(0, p(1)),
    });
    b.finish()
}

/// `[k]<n>φ → [m]<n>φ` with `k, m, n = 0, 1, 2`.
fn prop3() -> ProofScript {
    let mut b = Builder::new();
    b.axiom(AxiomInstance::Gateway {
        k: 0,
        n: 1,
        phi: Formula::diamond(2, p(2)),
    });
    b.finish()
}

/// `[k][n]φ → [k][m][n]φ` with `k, m, n = 0, 1, 2`.
fn prop4() -> ProofScript {
    let (k, m, n) = (0, 1, 2);
    let bn = Formula::boxed(n, p(n));
    let mut b = Builder::new();
    let gw = b.axiom(AxiomInstance::Gateway { k, n: m, phi: bn.clone() });
    let lifted = b.lift(k, gw);
    let trans = b.axiom(AxiomInstance::SelfAwareness {
        k,
        phi: Formula::boxed(k, bn),
    });
    b.chain(trans, lifted);
    b.finish()
}

/// `[m]([k]φ | [n]ψ) → ([m]φ | [m]ψ)` with `k, m, n = 0, 1, 2`.
fn prop5() -> ProofScript {
    let (k, m, n) = (0, 1, 2);
    let (phi, psi) = (p(k), Formula::atom("q", n));
    let (x, y) = (Formula::boxed(k, phi.clone()), Formula::boxed(n, psi.clone()));
    let mut b = Builder::new();
    let disj = b.axiom(AxiomInstance::Disjunction { k: m, phi: x.clone(), psi: y.clone() });
    let refl_x = b.axiom(AxiomInstance::Reflexivity { k, phi: phi.clone() });
    let left = b.lift(m, refl_x);
    let refl_y = b.axiom(AxiomInstance::Reflexivity { k: n, phi: psi.clone() });
    let right = b.lift(m, refl_y);

    let a = split(b.formula(disj)).0;
    let (bx, by) = (Formula::boxed(m, x), Formula::boxed(m, y));
    let (d, e) = (Formula::boxed(m, phi), Formula::boxed(m, psi));
    let t = b.taut(imp(
        imp(a.clone(), Formula::or(bx.clone(), by.clone())),
        imp(
            imp(bx, d.clone()),
            imp(imp(by, e.clone()), imp(a, Formula::or(d, e))),
        ),
    ));
    let s1 = b.mp(disj, t);
    let s2 = b.mp(left, s1);
    b.mp(right, s2);
    b.finish()
}

/// `[k](φ & ψ) → ([k]φ & [k]ψ)` with `k = 1`, `φ = p@1`, `ψ = q@1`.
fn lemma8() -> ProofScript {
    let k = 1;
    let (phi, psi) = (p(1), Formula::atom("q", 1));
    let both = Formula::and(phi.clone(), psi.clone());
    let mut b = Builder::new();
    let t1 = b.taut(imp(both.clone(), phi.clone()));
    let left = b.lift(k, t1);
    let t2 = b.taut(imp(both.clone(), psi.clone()));
    let right = b.lift(k, t2);
    let (x, y, z) = (
        Formula::boxed(k, both),
        Formula::boxed(k, phi),
        Formula::boxed(k, psi),
    );
    let t = b.taut(imp(
        imp(x.clone(), y.clone()),
        imp(imp(x.clone(), z.clone()), imp(x, Formula::and(y, z))),
    ));
    let s = b.mp(left, t);
    b.mp(right, s);
    b.finish()
}

/// Disjunction split over `A = {0}` and `B = {2, 3}` at `k = 1`.
fn lemma9_3way() -> ProofScript {
    let k = 1;
    let a_part = Formula::or_all([p(0)]);
    let b_part = Formula::or_all([p(2), p(3)]);
    let all = Formula::or_all([p(0), p(2), p(3)]);
    let mut b = Builder::new();
    let t = b.taut(imp(all, Formula::or(a_part.clone(), b_part.clone())));
    let lifted = b.lift(k, t);
    let disj = b.axiom(AxiomInstance::Disjunction { k, phi: a_part, psi: b_part });
    b.chain(lifted, disj);
    b.finish()
}

/// The bundled derivations, by name.
pub fn corpus() -> Vec<(&'static str, ProofScript)> {
    vec![
        ("prop1", prop1()),
        ("prop2", prop2()),
        ("prop3", prop3()),
        ("prop4", prop4()),
        ("prop5", prop5()),
        ("lemma8", lemma8()),
        ("lemma9_3way", lemma9_3way()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::proofcheck::check_script;

    fn named(name: &str) -> ProofScript {
        corpus().into_iter().find(|(n, _)| *n == name).unwrap().1
    }

    #[test]
    fn every_script_is_accepted() {
        for (name, script) in corpus() {
            let v = check_script(&script);
            assert!(v.accepted(), "{name}: {v}");
            assert!(v.lines.iter().all(|l| !l.tainted));
        }
    }

    #[test]
    fn goals() {
        let goals = [
            ("prop1", "[0]p@0 -> [0][0]p@0"),
            ("prop2", "<0>p@1 -> [0]<0>p@1"),
            ("prop3", "[0]<2>p@2 -> [1]<2>p@2"),
            ("prop4", "[0][2]p@2 -> [0][1][2]p@2"),
            ("prop5", "[1]([0]p@0 | [2]q@2) -> ([1]p@0 | [1]q@2)"),
            ("lemma8", "[1](p@1 & q@1) -> ([1]p@1 & [1]q@1)"),
            ("lemma9_3way", "[1](p@0 | p@2 | p@3) -> ([1]p@0 | [1](p@2 | p@3))"),
        ];
        for (name, goal) in goals {
            assert_eq!(named(name).goal, parse(goal).unwrap(), "{name}");
        }
    }

    #[test]
    fn proposition_four_outline() {
        let s = named("prop4");
        let kinds: Vec<&str> = s
            .lines
            .iter()
            .map(|l| match &l.rule {
                Rule::Axiom(a) => a.schema().name(),
                Rule::Tautology => "taut",
                Rule::ModusPonens { .. } => "mp",
                Rule::Necessitation { .. } => "nec",
                Rule::Premise => "premise",
            })
            .collect();
        assert_eq!(
            kinds,
            ["gateway", "nec", "distributivity", "mp", "self_awareness", "taut", "mp", "mp"]
        );
    }

    #[test]
    fn json_files_survive_round_trip() {
        for (name, script) in corpus() {
            let back = ProofScript::from_json(&script.to_json()).unwrap();
            assert_eq!(back, script, "{name}");
        }
    }
}
