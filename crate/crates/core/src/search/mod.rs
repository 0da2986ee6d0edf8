//! Bounded countermodel search over small chain protocols.
//!
//! Protocols live on the window `[0, n − 1]`, value labels are `v0`, `v1`,
//! ... and every channel declares the same atom names `p`, `q`, `r`, ...
//! Exhaustive mode walks every candidate in a fixed canonical order:
//! value-set size tuples lexicographically, then local relations as nonzero
//! bitmasks, then atom truth tables as bitmasks. Random mode draws candidates
//! from a ChaCha8 stream seeded by the caller. Candidates without runs are
//! skipped in both modes.
//!
//! Work is spread over the rayon pool in chunks, but results are reduced in
//! candidate order, so the reported witness never depends on the thread count.
//! Finding nothing only means nothing exists within the bounds.

mod space;
mod sweep;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::formula::{Channel, Formula};
use crate::protocol::{ChainProtocol, Run};
use crate::semantics::{EvalContext, EvalError};

pub use space::Candidate;
pub use sweep::{soundness_sweep, soundness_sweep_with, SideConditions, SweepReport, SweepViolation};

use space::{random_candidate, Space};

/// Default limit on the exhaustive candidate count.
pub const DEFAULT_CEILING: u128 = 1_000_000;

/// Largest value set a candidate may have; relation masks are 64 bits wide.
pub const MAX_VALUES: usize = 8;

/// Random-mode draws allowed per protocol before giving up on finding runs.
const DRAW_ATTEMPTS: usize = 10_000;

const CHUNK: usize = 512;

/// Result of checking one candidate; `None` in the outer option means no runs.
type Checked = Result<Option<(ChainProtocol, Run)>, EvalError>;

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("exhaustive space has {candidates} candidates, above the ceiling of {ceiling}")]
    Ceiling { candidates: u128, ceiling: u128 },
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("formula spans {width} channels but the bounds allow {channels}")]
    DoesNotFit { width: usize, channels: usize },
    #[error("atom {0:?} is not among the search atoms")]
    UndeclaredAtom(String),
    #[error("unknown axiom schema {0:?}")]
    UnknownSchema(String),
    #[error("no {schema} instance satisfying its side condition after {attempts} draws")]
    NoInstance { schema: &'static str, attempts: usize },
    #[error("no protocol with runs after {0} random draws")]
    NoRunnableProtocol(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    pub num_channels: usize,
    pub max_values_per_channel: usize,
    pub atoms_per_channel: usize,
    pub mode: SearchMode,
    /// Upper limit on the exhaustive candidate count.
    pub ceiling: u128,
}

impl SearchBounds {
    pub fn exhaustive(num_channels: usize, max_values: usize, atoms: usize) -> SearchBounds {
        SearchBounds {
            num_channels,
            max_values_per_channel: max_values,
            atoms_per_channel: atoms,
            mode: SearchMode::Exhaustive,
            ceiling: DEFAULT_CEILING,
        }
    }

    pub fn random(num_channels: usize, max_values: usize, atoms: usize, seed: u64, samples: usize) -> SearchBounds {
        SearchBounds {
            mode: SearchMode::Random { seed, samples },
            ..SearchBounds::exhaustive(num_channels, max_values, atoms)
        }
    }

    pub fn with_ceiling(mut self, ceiling: u128) -> SearchBounds {
        self.ceiling = ceiling;
        self
    }

    /// `p`, `q`, `r`, ... wrapping around the alphabet.
    pub fn atom_names(&self) -> Vec<String> {
        (0..self.atoms_per_channel)
            .map(|i| char::from(b'a' + ((15 + i) % 26) as u8).to_string())
            .collect()
    }

    /// Number of candidates in the exhaustive space, runless ones included.
    pub fn exhaustive_size(&self) -> u128 {
        Space::new(self.num_channels, self.max_values_per_channel, self.atoms_per_channel).total()
    }

    fn check(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::InvalidBounds(m));
        if self.num_channels == 0 {
            return bad("at least one channel is needed".into());
        }
        if !(1..=MAX_VALUES).contains(&self.max_values_per_channel) {
            return bad(format!("values per channel must be between 1 and {MAX_VALUES}"));
        }
        if self.atoms_per_channel > 26 {
            return bad("at most 26 atoms per channel".into());
        }
        if let SearchMode::Random { samples: 0, .. } = self.mode {
            return bad("random mode needs at least one sample".into());
        }
        Ok(())
    }
}

/// A protocol of the stream together with its raw form.
#[derive(Debug, Clone)]
pub struct Sample {
    pub candidate: Candidate,
    pub protocol: ChainProtocol,
}

/// The ordered protocol stream described by a set of bounds.
#[derive(Debug)]
pub struct ProtocolStream {
    source: Source,
    atoms: Vec<String>,
}

#[derive(Debug)]
enum Source {
    Exhaustive { space: Space, next: u128 },
    Random {
        rng: Box<ChaCha8Rng>,
        left: usize,
        channels: usize,
        max_values: usize,
    },
}

impl ProtocolStream {
    fn new(bounds: &SearchBounds) -> Result<ProtocolStream, SearchError> {
        bounds.check()?;
        let (n, v, a) = (
            bounds.num_channels,
            bounds.max_values_per_channel,
            bounds.atoms_per_channel,
        );
        let source = match bounds.mode {
            SearchMode::Exhaustive => {
                let space = Space::new(n, v, a);
                if space.total() > bounds.ceiling {
                    return Err(SearchError::Ceiling {
                        candidates: space.total(),
                        ceiling: bounds.ceiling,
                    });
                }
                Source::Exhaustive { space, next: 0 }
            }
            SearchMode::Random { seed, samples } => Source::Random {
                rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
                left: samples,
                channels: n,
                max_values: v,
            },
        };
        Ok(ProtocolStream {
            source,
            atoms: bounds.atom_names(),
        })
    }

    /// Up to `limit` raw candidates in stream order, runless ones included
    /// in exhaustive mode. Empty once the stream is exhausted.
    fn next_chunk(&mut self, limit: usize) -> Result<Vec<Candidate>, SearchError> {
        match &mut self.source {
            Source::Exhaustive { space, next } => {
                let end = (*next + limit as u128).min(space.total());
                let out = (*next..end).map(|i| space.candidate(i)).collect();
                *next = end;
                Ok(out)
            }
            Source::Random {
                rng,
                left,
                channels,
                max_values,
            } => {
                let take = limit.min(*left);
                let mut out = Vec::with_capacity(take);
                for _ in 0..take {
                    out.push(draw_runnable(rng, *channels, *max_values, &self.atoms)?.candidate);
                }
                *left -= take;
                Ok(out)
            }
        }
    }
}

impl Iterator for ProtocolStream {
    type Item = Result<Sample, SearchError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let chunk = match self.next_chunk(1) {
                Ok(c) => c,
                Err(e) => return Some(Err(e)),
            };
            let candidate = chunk.into_iter().next()?;
            let protocol = candidate.protocol(&self.atoms);
            if protocol.runs().next().is_some() {
                return Some(Ok(Sample { candidate, protocol }));
            }
        }
    }
}

fn draw_runnable(
    rng: &mut ChaCha8Rng,
    channels: usize,
    max_values: usize,
    atoms: &[String],
) -> Result<Sample, SearchError> {
    for _ in 0..DRAW_ATTEMPTS {
        let candidate = random_candidate(rng, channels, max_values, atoms.len());
        let protocol = candidate.protocol(atoms);
        if protocol.runs().next().is_some() {
            return Ok(Sample { candidate, protocol });
        }
    }
    Err(SearchError::NoRunnableProtocol(DRAW_ATTEMPTS))
}

/// The protocols admitted by `bounds`, in canonical order (exhaustive) or
/// draw order (random). Protocols without runs are left out.
pub fn enumerate_protocols(bounds: &SearchBounds) -> Result<ProtocolStream, SearchError> {
    ProtocolStream::new(bounds)
}

/// A falsifying protocol and run for a translated formula.
#[derive(Debug, Clone)]
pub struct Witness {
    /// The searched formula after translation into the window.
    pub formula: Formula,
    /// Amount added to every channel index of the original formula.
    pub shift: Channel,
    pub candidate: Candidate,
    pub protocol: ChainProtocol,
    pub run: Run,
    /// 1-based position of the protocol in the stream.
    pub position: u64,
}

#[derive(Debug, Clone)]
pub struct FalsifyReport {
    pub witness: Option<Witness>,
    /// Protocols with runs that were checked.
    pub protocols_checked: u64,
    /// Whether the stream ran out before the budget did.
    pub exhausted: bool,
}

/// Translates `f` so its lowest channel becomes 0 and checks it fits.
pub fn translate(f: &Formula, bounds: &SearchBounds) -> Result<(Formula, Channel), SearchError> {
    let chans = f.channels();
    let (Some(&lo), Some(&hi)) = (chans.first(), chans.last()) else {
        return Ok((f.clone(), 0));
    };
    let width = (hi - lo) as usize + 1;
    if width > bounds.num_channels {
        return Err(SearchError::DoesNotFit {
            width,
            channels: bounds.num_channels,
        });
    }
    Ok((f.shift(-lo), -lo))
}

/// First protocol of the stream, within `budget` protocols, on which `f`
/// fails at some run; the run is the first failing one in run order.
pub fn falsify(f: &Formula, bounds: &SearchBounds, budget: u64) -> Result<FalsifyReport, SearchError> {
    let (g, shift) = translate(f, bounds)?;
    let names = bounds.atom_names();
    if let Some(a) = g.atoms().into_iter().find(|a| !names.contains(&a.name)) {
        return Err(SearchError::UndeclaredAtom(a.name.clone()));
    }
    let mut stream = ProtocolStream::new(bounds)?;
    let mut checked = 0u64;
    while checked < budget {
        let chunk = stream.next_chunk(CHUNK)?;
        if chunk.is_empty() {
            return Ok(FalsifyReport {
                witness: None,
                protocols_checked: checked,
                exhausted: true,
            });
        }
        let outcomes: Vec<Option<Checked>> = chunk
            .par_iter()
            .map(|c| {
                let p = c.protocol(&names);
                p.runs().next()?;
                let found = EvalContext::new(&p).counterexample(&g);
                Some(found.map(|r| r.map(|run| (p, run))))
            })
            .collect();
        for (c, outcome) in chunk.into_iter().zip(outcomes) {
            let Some(result) = outcome else { continue };
            if checked == budget {
                break;
            }
            checked += 1;
            if let Some((protocol, run)) = result? {
                return Ok(FalsifyReport {
                    witness: Some(Witness {
                        formula: g,
                        shift,
                        candidate: c,
                        protocol,
                        run,
                        position: checked,
                    }),
                    protocols_checked: checked,
                    exhausted: false,
                });
            }
        }
    }
    Ok(FalsifyReport {
        witness: None,
        protocols_checked: checked,
        exhausted: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn tiny_spaces() {
        let one: Vec<_> = enumerate_protocols(&SearchBounds::exhaustive(2, 1, 0)).unwrap().collect();
        assert_eq!(one.len(), 1);
        let two = enumerate_protocols(&SearchBounds::exhaustive(2, 2, 0)).unwrap().count();
        assert_eq!(two, 22);
    }

    #[test]
    fn ceiling_is_enforced() {
        let b = SearchBounds::exhaustive(3, 3, 1).with_ceiling(1000);
        assert!(matches!(enumerate_protocols(&b), Err(SearchError::Ceiling { .. })));
        assert!(matches!(
            enumerate_protocols(&SearchBounds::exhaustive(2, 9, 0)),
            Err(SearchError::InvalidBounds(_))
        ));
    }

    #[test]
    fn atom_names_start_at_p() {
        let b = SearchBounds::exhaustive(1, 1, 12);
        assert_eq!(b.atom_names()[..3], ["p", "q", "r"]);
        assert_eq!(b.atom_names()[11], "a");
    }

    #[test]
    fn random_stream_is_reproducible() {
        let b = SearchBounds::random(2, 2, 0, 42, 10);
        let a: Vec<Candidate> = enumerate_protocols(&b).unwrap().map(|s| s.unwrap().candidate).collect();
        let c: Vec<Candidate> = enumerate_protocols(&b).unwrap().map(|s| s.unwrap().candidate).collect();
        assert_eq!(a.len(), 10);
        assert_eq!(a, c);
    }

    #[test]
    fn falsifies_unguarded_gateway() {
        let b = SearchBounds::exhaustive(3, 2, 1);
        let r = falsify(&f("[1]p@0 -> [2]p@0"), &b, 100_000).unwrap();
        let w = r.witness.unwrap();
        let mut ctx = EvalContext::new(&w.protocol);
        assert!(w.protocol.is_run(&w.run));
        assert!(!ctx.eval(&w.run, &w.formula).unwrap());
    }

    #[test]
    fn guarded_gateway_survives() {
        let b = SearchBounds::exhaustive(2, 2, 1);
        let r = falsify(&f("[0]p@1 -> [1]p@1"), &b, u64::MAX).unwrap();
        assert!(r.witness.is_none());
        assert!(r.exhausted);
    }

    #[test]
    fn translation() {
        let b = SearchBounds::exhaustive(3, 2, 1);
        let (g, shift) = translate(&f("[5]p@4 -> [6]p@4"), &b).unwrap();
        assert_eq!((g, shift), (f("[1]p@0 -> [2]p@0"), -4));
        assert!(matches!(
            translate(&f("p@0 -> p@3"), &b),
            Err(SearchError::DoesNotFit { width: 4, channels: 3 })
        ));
        assert!(matches!(
            falsify(&f("q@0"), &b, 10),
            Err(SearchError::UndeclaredAtom(a)) if a == "q"
        ));
    }

    #[test]
    fn budget_limits_the_scan() {
        let b = SearchBounds::exhaustive(2, 2, 1);
        let r = falsify(&f("p@0 -> p@0"), &b, 5).unwrap();
        assert_eq!(r.protocols_checked, 5);
        assert!(!r.exhausted);
    }
}
