use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::Perm;

const SLOTS: usize = 10;
const WARM_UP: usize = 60;

/// Product-replacement generator of (nearly uniform) random group elements.
pub(crate) struct ProductReplacement {
    slots: Vec<Perm>,
    acc: Perm,
    rng: ChaCha8Rng,
}

impl ProductReplacement {
    pub(crate) fn new(degree: usize, gens: &[Perm], seed: u64) -> ProductReplacement {
        let mut slots: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut pr = ProductReplacement {
            slots: Vec::new(),
            acc: Perm::identity(degree),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        if slots.is_empty() {
            return pr;
        }
        let base = slots.len();
        while slots.len() < SLOTS {
            slots.push(slots[slots.len() % base].clone());
        }
        pr.slots = slots;
        for _ in 0..WARM_UP {
            pr.next_element();
        }
        pr
    }

    pub(crate) fn next_element(&mut self) -> Perm {
        if self.slots.is_empty() {
            return self.acc.clone();
        }
        let len = self.slots.len();
        let s = self.rng.random_range(0..len);
        let mut t = self.rng.random_range(0..len - 1);
        if t >= s {
            t += 1;
        }
        let other = if self.rng.random_bool(0.5) {
            self.slots[t].inverse()
        } else {
            self.slots[t].clone()
        };
        self.slots[s] = if self.rng.random_bool(0.5) {
            self.slots[s].then(&other)
        } else {
            other.then(&self.slots[s])
        };
        self.acc = self.acc.then(&self.slots[s]);
        self.acc.clone()
    }
}
