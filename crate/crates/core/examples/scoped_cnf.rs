//! Rewrite a formula as a conjunction of clauses whose literals each mention
//! a single channel.

use chainlogic::formula::scoped_cnf;
use chainlogic::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "[1]p@1 -> (q@0 & [2]r@2 | p@0)".to_string());
    let f = parse(&text)?;
    let cnf = scoped_cnf(&f)?;
    println!("{}", f.sugared());
    for (i, clause) in cnf.formula_clauses().iter().enumerate() {
        let lits: Vec<String> = clause
            .iter()
            .map(|l| format!("{} {}", l.sugared(), l.scope()))
            .collect();
        println!("  clause {}: {}", i + 1, lits.join("  |  "));
    }
    println!("as a formula: {}", cnf.to_formula().sugared());
    Ok(())
}
