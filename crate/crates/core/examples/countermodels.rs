//! Search the smallest protocols for runs falsifying formulas that are not
//! theorems.

use chainlogic::parse;
use chainlogic::search::{falsify, SearchBounds};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bounds = SearchBounds::exhaustive(3, 2, 1);
    let formulas = [
        "[1]p@0 -> [2]p@0",
        "[0](p@1|p@2) -> ([0]p@1|[0]p@2)",
        "p@0 -> [1]p@0",
        "[1]p@1 -> [0]p@1",
        "[0]p@1 -> [1]p@1",
    ];
    for text in formulas {
        let report = falsify(&parse(text)?, &bounds, 100_000)?;
        match report.witness {
            Some(w) => {
                println!("{text}: falsified by protocol #{}", w.position);
                println!("  {}", serde_json::to_string(&w.protocol.to_spec())?);
                println!("  run {}", w.run.display(&w.protocol));
            }
            None => println!(
                "{text}: no countermodel among {} protocols",
                report.protocols_checked
            ),
        }
    }
    Ok(())
}
