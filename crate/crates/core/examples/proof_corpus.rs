//! Check the bundled derivations; with `--export DIR`, also write them as
//! JSON proof scripts.

use std::path::PathBuf;

use chainlogic::proofcheck::{check_script, corpus};

fn main() -> std::io::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let export = match args.as_slice() {
        [flag, dir] if flag == "--export" => Some(PathBuf::from(dir)),
        [] => None,
        _ => {
            eprintln!("usage: proof_corpus [--export DIR]");
            std::process::exit(2);
        }
    };
    for (name, script) in corpus() {
        let verdict = check_script(&script);
        println!("{name:12} {} lines  {verdict}  goal {}", script.lines.len(), script.goal.sugared());
        if let Some(dir) = &export {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{name}.json")), script.to_json())?;
        }
    }
    Ok(())
}
