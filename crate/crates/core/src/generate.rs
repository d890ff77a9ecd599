//! Seeded random SOP circuits for test corpora.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub vars: usize,
    pub terms: usize,
    pub min_literals: usize,
    pub max_literals: usize,
}

impl GenParams {
    fn validate(&self) -> Result<(), String> {
        if self.vars == 0 || self.vars > 26 {
            return Err(format!("vars must be in 1..=26, got {}", self.vars));
        }
        if self.terms == 0 {
            return Err("terms must be at least 1".into());
        }
        if self.min_literals == 0 || self.min_literals > self.max_literals {
            return Err(format!(
                "literal range {}..={} is empty or starts at zero",
                self.min_literals, self.max_literals
            ));
        }
        if self.max_literals > self.vars {
            return Err(format!(
                "max_literals {} exceeds vars {}",
                self.max_literals, self.vars
            ));
        }
        Ok(())
    }
}

/// Generates an expression over the first `vars` letters. Each term picks
/// distinct variables; every polarity is a fair coin flip.
pub fn generate(seed: u64, params: &GenParams) -> Result<String, String> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<String> = (0..params.terms)
        .map(|_| {
            let k = rng.gen_range(params.min_literals..=params.max_literals);
            let mut vars = sample(&mut rng, params.vars, k).into_vec();
            vars.sort_unstable();
            vars.into_iter()
                .map(|v| {
                    let letter = (b'a' + v as u8) as char;
                    if rng.gen_bool(0.5) {
                        format!("{letter}'")
                    } else {
                        letter.to_string()
                    }
                })
                .collect()
        })
        .collect();
    Ok(terms.join(" + "))
}
