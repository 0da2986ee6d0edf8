//! Load a protocol document and check formulas on it.
//!
//! cargo run --example model_check -- protocols/gateway.json "[1]p@0 -> [2]p@0"

use chainlogic::{parse, ChainProtocol, EvalContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/protocols/gateway.json").to_string());
    let formulas: Vec<String> = args.collect();
    let formulas = if formulas.is_empty() {
        vec!["[1]p@0 -> [2]p@0".to_string(), "[0]p@2 -> [1]p@2".to_string()]
    } else {
        formulas
    };

    let p = ChainProtocol::from_json(&std::fs::read_to_string(&path)?)?;
    let violations = p.validate(true);
    println!("window {:?}, {} runs", p.window(), p.run_count()?);
    for v in &violations {
        println!("  continuity: {v}");
    }
    for run in p.runs() {
        println!("  run {}", run.display(&p));
    }
    let mut ctx = EvalContext::new(&p);
    for text in formulas {
        let f = parse(&text)?;
        match ctx.counterexample(&f)? {
            None => println!("{text}: valid"),
            Some(r) => println!("{text}: fails at {}", r.display(&p)),
        }
    }
    Ok(())
}
