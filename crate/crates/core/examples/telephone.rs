//! The Telephone game: four-letter words, one changed letter per hop.

use chainlogic::protocol::{telephone, LATIN};
use chainlogic::{parse, EvalContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = telephone(4, LATIN, 3)?;
    println!("runs: {}", p.run_count()?);
    let mut ctx = EvalContext::new(&p);
    let claims = [
        (["byte", "bite", "cite"], "[0]!(eq_book@2)"),
        (["byte", "bite", "cite"], "[0][1]!(eq_book@2)"),
        (["toon", "torn", "tort"], "[0]!(eq_book@2)"),
    ];
    for (labels, text) in claims {
        let f = parse(text)?;
        let run = p.run_from_labels(&labels)?;
        let holds = ctx.eval(&run, &f)?;
        println!("{} |= {text}: {holds}", run.display(&p));
        if let Some(w) = ctx.refutation(&run, &f)? {
            println!("  witness {}", w.display(&p));
        }
    }

    let small = telephone(3, "abc", 3)?;
    let mut ctx = EvalContext::new(&small);
    let every_word = (0..27).all(|id| {
        let w = small.label(0, id).unwrap().into_owned();
        let f = parse(&format!("[1]!(eq_{w}@0) -> [1]!(eq_{w}@2)")).unwrap();
        ctx.valid_in(&f).unwrap()
    });
    println!("3-letter words over abc: {} runs, symmetry holds for every word: {every_word}", small.run_count()?);
    Ok(())
}
