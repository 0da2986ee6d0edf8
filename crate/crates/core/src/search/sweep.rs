use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::formula::{Channel, FormulaGenerator};
use crate::proofcheck::{AxiomInstance, Schema};
use crate::protocol::{ChainProtocol, Run};
use crate::semantics::{EvalContext, EvalError};

use super::{draw_runnable, SearchBounds, SearchError, SearchMode};

/// Draws per trial before giving up on an instance with a true side condition.
const INSTANCE_ATTEMPTS: usize = 10_000;

const FORMULA_DEPTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideConditions {
    Enforced,
    Ignored,
}

#[derive(Debug, Clone)]
pub struct SweepViolation {
    /// 0-based trial number.
    pub trial: usize,
    pub instance: AxiomInstance,
    pub protocol: ChainProtocol,
    pub run: Run,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub schema: Schema,
    pub trials: usize,
    pub violations: usize,
    pub first: Option<SweepViolation>,
}

/// [`soundness_sweep_with`] by schema name, side conditions enforced.
pub fn soundness_sweep(schema: &str, bounds: &SearchBounds, trials: usize) -> Result<SweepReport, SearchError> {
    let schema: Schema = schema
        .parse()
        .map_err(|_| SearchError::UnknownSchema(schema.to_string()))?;
    soundness_sweep_with(schema, bounds, trials, SideConditions::Enforced)
}

/// Samples `trials` pairs of a protocol with runs and a schema instance over
/// its window, then checks the instance at every run.
///
/// Protocols are always drawn at random within the size bounds; the seed
/// comes from the bounds' random mode, or 0 in exhaustive mode.
pub fn soundness_sweep_with(
    schema: Schema,
    bounds: &SearchBounds,
    trials: usize,
    side: SideConditions,
) -> Result<SweepReport, SearchError> {
    bounds.check()?;
    let seed = match bounds.mode {
        SearchMode::Random { seed, .. } => seed,
        SearchMode::Exhaustive => 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = bounds.atom_names();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let n = bounds.num_channels as Channel;
    let gen = FormulaGenerator::new(0..n, &name_refs, FORMULA_DEPTH);

    let mut cases = Vec::with_capacity(trials);
    for _ in 0..trials {
        let sample = draw_runnable(&mut rng, bounds.num_channels, bounds.max_values_per_channel, &names)?;
        let instance = draw_instance(&mut rng, schema, &gen, n, side)?;
        cases.push((sample.protocol, instance));
    }

    let results: Vec<Result<Option<Run>, EvalError>> = cases
        .par_iter()
        .map(|(p, inst)| EvalContext::new(p).counterexample(&inst.formula()))
        .collect();

    let mut violations = 0;
    let mut first = None;
    for (trial, ((protocol, instance), result)) in cases.into_iter().zip(results).enumerate() {
        if let Some(run) = result? {
            violations += 1;
            first.get_or_insert(SweepViolation {
                trial,
                instance,
                protocol,
                run,
            });
        }
    }
    Ok(SweepReport {
        schema,
        trials,
        violations,
        first,
    })
}

fn draw_instance(
    rng: &mut ChaCha8Rng,
    schema: Schema,
    gen: &FormulaGenerator,
    n: Channel,
    side: SideConditions,
) -> Result<AxiomInstance, SearchError> {
    for _ in 0..INSTANCE_ATTEMPTS {
        let k = rng.gen_range(0..n);
        let inst = match schema {
            Schema::Distributivity => AxiomInstance::Distributivity {
                k,
                phi: gen.generate(rng),
                psi: gen.generate(rng),
            },
            Schema::Reflexivity => AxiomInstance::Reflexivity { k, phi: gen.generate(rng) },
            Schema::SelfAwareness => AxiomInstance::SelfAwareness { k, phi: gen.generate(rng) },
            Schema::Gateway => AxiomInstance::Gateway {
                k,
                n: rng.gen_range(0..n),
                phi: gen.generate(rng),
            },
            Schema::Disjunction => AxiomInstance::Disjunction {
                k,
                phi: gen.generate(rng),
                psi: gen.generate(rng),
            },
        };
        if side == SideConditions::Ignored || inst.side_condition_holds() {
            return Ok(inst);
        }
    }
    Err(SearchError::NoInstance {
        schema: schema.name(),
        attempts: INSTANCE_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enforced_sweeps_are_clean() {
        let b = SearchBounds::random(3, 2, 1, 7, 1);
        for schema in Schema::ALL {
            let r = soundness_sweep(schema.name(), &b, 200).unwrap();
            assert_eq!(r.violations, 0, "{schema}: {:?}", r.first.map(|v| v.instance));
            assert_eq!(r.trials, 200);
        }
    }

    #[test]
    fn unguarded_gateway_is_caught() {
        let b = SearchBounds::random(3, 2, 1, 7, 1);
        let r = soundness_sweep_with(Schema::Gateway, &b, 1000, SideConditions::Ignored).unwrap();
        assert!(r.violations > 0);
        let v = r.first.unwrap();
        assert!(!v.instance.side_condition_holds());
        let mut ctx = EvalContext::new(&v.protocol);
        assert!(!ctx.eval(&v.run, &v.instance.formula()).unwrap());
    }

    #[test]
    fn unknown_schema() {
        let b = SearchBounds::exhaustive(2, 2, 1);
        assert!(matches!(soundness_sweep("cut", &b, 1), Err(SearchError::UnknownSchema(_))));
    }
}
