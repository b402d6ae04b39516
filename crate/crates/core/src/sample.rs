//! Seeded random relations for sampling-based checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::relation::Relation;
use crate::universe::Universe;
use crate::value::Header;

/// Deterministic source of headers and relations. The same seed produces
/// the same sequence on every platform.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Each attribute of the universe independently with probability 1/2.
    pub fn header(&mut self, u: &Universe) -> Header {
        u.header()
            .iter()
            .filter(|_| self.rng.gen_bool(0.5))
            .cloned()
            .collect()
    }

    /// A relation over `header`. Each relation draws its own density from
    /// {0, 0.2, 0.4, 0.6, 0.8, 1}.
    pub fn relation(&mut self, u: &Universe, header: &Header) -> Relation {
        let rows = u.domain_product(header).expect("header within universe");
        let density = match self.rng.gen_range(0..6) {
            0 => 0.0,
            5 => 1.0,
            k => k as f64 / 5.0,
        };
        let chosen: Vec<_> = rows
            .into_iter()
            .filter(|_| self.rng.gen_bool(density))
            .collect();
        Relation::from_parts(header.clone(), chosen.into_iter().collect())
    }

    pub fn any_relation(&mut self, u: &Universe) -> Relation {
        let header = self.header(u);
        self.relation(u, &header)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }
}
