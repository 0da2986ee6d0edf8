use rand::Rng;

use super::{Channel, Formula};

/// Random formulas over a fixed set of channels and atom names.
#[derive(Debug, Clone)]
pub struct FormulaGenerator {
    pub channels: Vec<Channel>,
    pub atom_names: Vec<String>,
    pub max_depth: usize,
}

impl FormulaGenerator {
    pub fn new(channels: impl IntoIterator<Item = Channel>, atom_names: &[&str], max_depth: usize) -> Self {
        FormulaGenerator {
            channels: channels.into_iter().collect(),
            atom_names: atom_names.iter().map(|s| s.to_string()).collect(),
            max_depth,
        }
    }

    /// A formula of depth at most `max_depth`.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.generate_at(rng, self.max_depth)
    }

    pub fn generate_at<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        assert!(!self.channels.is_empty(), "generator needs at least one channel");
        let leaf_only = depth == 0;
        let choice = if leaf_only { rng.gen_range(0..4) } else { rng.gen_range(0..10) };
        match choice {
            0 => Formula::Bottom,
            1..=3 => self.leaf(rng),
            4..=6 => Formula::implies(self.generate_at(rng, depth - 1), self.generate_at(rng, depth - 1)),
            _ => {
                let k = self.channels[rng.gen_range(0..self.channels.len())];
                Formula::boxed(k, self.generate_at(rng, depth - 1))
            }
        }
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        if self.atom_names.is_empty() {
            return Formula::Bottom;
        }
        let k = self.channels[rng.gen_range(0..self.channels.len())];
        let name = &self.atom_names[rng.gen_range(0..self.atom_names.len())];
        Formula::atom(name.clone(), k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_depth_and_vocabulary() {
        let g = FormulaGenerator::new(0..3, &["p", "q"], 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = g.generate(&mut rng);
            assert!(f.depth() <= 4);
            assert!(f.channels().iter().all(|k| (0..3).contains(k)));
            assert!(f.atoms().iter().all(|a| a.name == "p" || a.name == "q"));
        }
    }
}
