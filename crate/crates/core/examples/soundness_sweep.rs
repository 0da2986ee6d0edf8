//! Sample axiom instances and small protocols and look for violations, with
//! and without side conditions.

use chainlogic::proofcheck::Schema;
use chainlogic::search::{soundness_sweep_with, SearchBounds, SideConditions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bounds = SearchBounds::random(3, 2, 1, 2024, 1);
    for side in [SideConditions::Enforced, SideConditions::Ignored] {
        println!("side conditions {side:?}");
        for schema in Schema::ALL {
            let r = soundness_sweep_with(schema, &bounds, 1000, side)?;
            print!("  {:15} {} violations in {} trials", schema.name(), r.violations, r.trials);
            if let Some(v) = r.first {
                print!("; first: {} at {}", v.instance.formula().sugared(), v.run.display(&v.protocol));
            }
            println!();
        }
    }
    Ok(())
}
