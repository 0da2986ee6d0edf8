//! Brute-force oracles shared by the integration tests. They rely only on
//! the protocol's public tables (value counts, local `holds`, atom truth),
//! never on the library's run enumeration, evaluator or tautology checker.

#![allow(dead_code)]

use chainlogic::protocol::ValueId;
use chainlogic::{ChainProtocol, Formula};

/// Every run of the window, by filtering the full value product.
pub fn product_runs(p: &ChainProtocol) -> Vec<Vec<ValueId>> {
    let (lo, hi) = p.window();
    let sizes: Vec<usize> = (lo..=hi).map(|k| p.channel(k).unwrap().values.len()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0; sizes.len()];
    loop {
        let ok = (1..cur.len()).all(|j| p.local(lo + j as i64).unwrap().holds(cur[j - 1], cur[j]));
        if ok {
            out.push(cur.clone());
        }
        let Some(j) = (0..cur.len()).rev().find(|&j| cur[j] + 1 < sizes[j]) else {
            return out;
        };
        cur[j] += 1;
        cur[j + 1..].fill(0);
    }
}

/// `run ⊩ f` straight from the definition, quantifying over `runs`.
/// Boxes outside the window quantify over every run.
pub fn naive_eval(p: &ChainProtocol, runs: &[Vec<ValueId>], run: &[ValueId], f: &Formula) -> bool {
    let lo = p.lo();
    match f {
        Formula::Bottom => false,
        Formula::Atom(a) => {
            let j = (a.channel - lo) as usize;
            p.atom_truth(a.channel, &a.name, run[j]).expect("declared atom")
        }
        Formula::Implies(l, r) => !naive_eval(p, runs, run, l) || naive_eval(p, runs, run, r),
        Formula::Box(k, body) => {
            let pos = p.in_window(*k).then(|| (*k - lo) as usize);
            runs.iter()
                .filter(|other| pos.is_none_or(|j| other[j] == run[j]))
                .all(|other| naive_eval(p, runs, other, body))
        }
    }
}

/// Validity of `f` on the protocol by the naive evaluator; returns the first
/// failing run in product order.
pub fn naive_counterexample(p: &ChainProtocol, f: &Formula) -> Option<Vec<ValueId>> {
    let runs = product_runs(p);
    runs.iter().find(|r| !naive_eval(p, &runs, r, f)).cloned()
}

/// Tautology check by assigning truth values to the maximal atomic and
/// boxed subformulas. `None` when there are more than `limit` of them.
pub fn brute_tautology(f: &Formula, limit: usize) -> Option<bool> {
    let mut vars: Vec<&Formula> = Vec::new();
    collect(f, &mut vars);
    if vars.len() > limit {
        return None;
    }
    Some((0u64..1 << vars.len()).all(|mask| truth(f, &vars, mask)))
}

fn collect<'a>(f: &'a Formula, vars: &mut Vec<&'a Formula>) {
    match f {
        Formula::Bottom => {}
        Formula::Implies(l, r) => {
            collect(l, vars);
            collect(r, vars);
        }
        other => {
            if !vars.contains(&other) {
                vars.push(other);
            }
        }
    }
}

fn truth(f: &Formula, vars: &[&Formula], mask: u64) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Implies(l, r) => !truth(l, vars, mask) || truth(r, vars, mask),
        other => {
            let i = vars.iter().position(|v| *v == other).expect("collected");
            mask >> i & 1 == 1
        }
    }
}

/// Letters at which two equal-length words differ.
pub fn hamming(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).filter(|(x, y)| x != y).count()
}
