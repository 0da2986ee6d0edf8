//! Parse formulas, show their canonical and sugared forms, and their scopes.
//!
//! cargo run --example formulas -- "[2]([3]p@3 -> [4]q@4)"

use chainlogic::parse;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        vec![
            "[2]([3]p@3 -> [4]q@4)".to_string(),
            "<0>p@1 -> [0]<0>p@1".to_string(),
            "p@0 & q@1 | !r@2".to_string(),
            "true -> false".to_string(),
        ]
    } else {
        args
    };
    for text in inputs {
        match parse(&text) {
            Ok(f) => {
                println!("input     {text}");
                println!("canonical {f}");
                println!("sugared   {}", f.sugared());
                println!("scope     {}  (min {}, max {})", f.scope(), f.scope().min(), f.scope().max());
                println!("size {}  depth {}", f.size(), f.depth());
                println!();
            }
            Err(e) => eprintln!("{text}: {e}"),
        }
    }
}
