use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::{Perm, Sign};
use crate::permgroup::orbits::check_degrees;
use crate::permgroup::random::ProductReplacement;

/// Default largest degree for which full stabilizer chains are built.
pub const DEFAULT_MAX_DEGREE: usize = 1 << 10;

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMode {
    /// Random sifting with a seeded generator, then verification.
    Randomized { seed: u64 },
    /// Schreier generators only.
    Deterministic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchreierSimsConfig {
    pub max_degree: usize,
    pub mode: ChainMode,
    /// Consecutive random elements sifting to the identity before the
    /// randomized phase stops.
    pub quiet_sifts: usize,
}

impl Default for SchreierSimsConfig {
    fn default() -> Self {
        SchreierSimsConfig {
            max_degree: DEFAULT_MAX_DEGREE,
            mode: ChainMode::Randomized { seed: 0x5eed },
            quiet_sifts: 40,
        }
    }
}

/// How a chain was shown to be complete.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    /// The product of basic orbit lengths reached the order of the
    /// alternating or symmetric group on the support. That product never
    /// exceeds the group order, so equality is exact.
    OrderBound,
    /// Every Schreier generator at every level sifts to the identity.
    SchreierGenerators,
}

impl Verification {
    pub fn as_str(self) -> &'static str {
        match self {
            Verification::OrderBound => "order-bound",
            Verification::SchreierGenerators => "schreier-generators",
        }
    }
}

#[derive(Clone, Debug)]
struct StrongGen {
    perm: Perm,
    inv: Perm,
    /// The generator fixes the first `depth` base points and belongs to
    /// levels `0..=depth`.
    depth: usize,
}

/// Basic orbit with a Schreier tree: `label[p]` is the strong generator
/// that carried the parent of `p` to `p`.
#[derive(Clone, Debug)]
struct Level {
    base: u32,
    label: Vec<u32>,
    orbit: Vec<u32>,
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug)]
pub struct BsgsChain {
    degree: usize,
    levels: Vec<Level>,
    strong: Vec<StrongGen>,
    verification: Verification,
}

impl BsgsChain {
    fn empty(degree: usize) -> BsgsChain {
        BsgsChain {
            degree,
            levels: Vec::new(),
            strong: Vec::new(),
            verification: Verification::SchreierGenerators,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> impl Iterator<Item = &Perm> {
        self.strong.iter().map(|s| &s.perm)
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn verification(&self) -> Verification {
        self.verification
    }

    pub fn is_member(&self, p: &Perm) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, level) = self.sift_from(p.clone(), 0);
        level == self.levels.len() && residue.is_identity()
    }

    fn level_gens(&self, i: usize) -> Vec<usize> {
        (0..self.strong.len())
            .filter(|&s| self.strong[s].depth >= i)
            .collect()
    }

    /// Multiplies `h` by the inverse transversal element for `h(base_i)`;
    /// false if that point is outside the basic orbit.
    fn strip_level(&self, i: usize, h: &mut Perm) -> bool {
        let level = &self.levels[i];
        let mut p = h.image(level.base);
        if level.label[p as usize] == NONE {
            return false;
        }
        while p != level.base {
            let s = &self.strong[level.label[p as usize] as usize];
            h.then_in_place(&s.inv);
            p = s.inv.image(p);
        }
        true
    }

    fn sift_from(&self, mut h: Perm, start: usize) -> (Perm, usize) {
        for i in start..self.levels.len() {
            if !self.strip_level(i, &mut h) {
                return (h, i);
            }
        }
        (h, self.levels.len())
    }

    /// Maps the base point of level `i` to `p`.
    fn transversal(&self, i: usize, p: u32) -> Perm {
        let level = &self.levels[i];
        let mut path = Vec::new();
        let mut q = p;
        while q != level.base {
            let s = level.label[q as usize] as usize;
            path.push(s);
            q = self.strong[s].inv.image(q);
        }
        let mut u = Perm::identity(self.degree);
        for &s in path.iter().rev() {
            u.then_in_place(&self.strong[s].perm);
        }
        u
    }

    fn add_generator(&mut self, h: Perm, depth: usize) {
        debug_assert!(!h.is_identity());
        if depth == self.levels.len() {
            let base = h.first_moved_point().expect("nontrivial residue");
            let mut label = vec![NONE; self.degree];
            label[base as usize] = ROOT;
            self.levels.push(Level {
                base,
                label,
                orbit: vec![base],
            });
        }
        let inv = h.inverse();
        self.strong.push(StrongGen {
            perm: h,
            inv,
            depth,
        });
        let idx = self.strong.len() - 1;
        for i in 0..=depth {
            self.extend_orbit(i, idx);
        }
    }

    fn extend_orbit(&mut self, i: usize, new: usize) {
        let gens = self.level_gens(i);
        let level = &mut self.levels[i];
        let old_len = level.orbit.len();
        for pos in 0..old_len {
            let q = self.strong[new].perm.image(level.orbit[pos]);
            if level.label[q as usize] == NONE {
                level.label[q as usize] = new as u32;
                level.orbit.push(q);
            }
        }
        let mut head = old_len;
        while head < level.orbit.len() {
            let p = level.orbit[head];
            head += 1;
            for &s in &gens {
                let q = self.strong[s].perm.image(p);
                if level.label[q as usize] == NONE {
                    level.label[q as usize] = s as u32;
                    level.orbit.push(q);
                }
            }
        }
    }

    /// Sifts `h` and keeps the residue as a new strong generator if it is
    /// nontrivial. Returns whether the chain grew.
    fn absorb(&mut self, h: Perm) -> bool {
        let (residue, depth) = self.sift_from(h, 0);
        if residue.is_identity() {
            return false;
        }
        self.add_generator(residue, depth);
        true
    }

    fn schreier_residue(&self, i: usize) -> Option<(Perm, usize)> {
        let gens = self.level_gens(i);
        for &p in &self.levels[i].orbit {
            let u = self.transversal(i, p);
            for &s in &gens {
                let mut h = u.then(&self.strong[s].perm);
                let stripped = self.strip_level(i, &mut h);
                debug_assert!(stripped);
                let (residue, depth) = self.sift_from(h, i + 1);
                if !residue.is_identity() {
                    return Some((residue, depth));
                }
            }
        }
        None
    }

    /// Adds sifted Schreier generators until every level is closed, working
    /// from the deepest level up and restarting below any level that grew.
    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            match self.schreier_residue(i - 1) {
                Some((residue, depth)) => {
                    self.add_generator(residue, depth);
                    i = depth + 1;
                }
                None => i -= 1,
            }
        }
        self.verification = Verification::SchreierGenerators;
    }
}

/// `|Alt(support)|` if every generator is even, else `|Sym(support)|`.
pub fn order_upper_bound(degree: usize, gens: &[Perm]) -> BigUint {
    let support = (0..degree as u32)
        .filter(|&p| gens.iter().any(|g| g.image(p) != p))
        .count();
    let fact = factorial(support);
    if support >= 2 && gens.iter().all(|g| g.sign() == Sign::Even) {
        fact / 2u32
    } else {
        fact
    }
}

pub fn factorial(k: usize) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn schreier_sims(
    degree: usize,
    gens: &[Perm],
    config: &SchreierSimsConfig,
) -> Result<BsgsChain> {
    check_degrees(degree, gens)?;
    if degree > config.max_degree {
        return Err(Error::Budget(format!(
            "degree {degree} exceeds the stabilizer-chain limit of {}; use the giant test",
            config.max_degree
        )));
    }
    let mut chain = BsgsChain::empty(degree);
    for g in gens {
        chain.absorb(g.clone());
    }
    match config.mode {
        ChainMode::Deterministic => chain.complete(),
        ChainMode::Randomized { seed } => {
            let bound = order_upper_bound(degree, gens);
            let mut random = ProductReplacement::new(degree, gens, seed);
            let mut quiet = 0;
            let mut order = chain.order();
            while quiet < config.quiet_sifts && order != bound {
                if chain.absorb(random.next_element()) {
                    quiet = 0;
                    order = chain.order();
                } else {
                    quiet += 1;
                }
            }
            if order == bound {
                chain.verification = Verification::OrderBound;
            } else {
                chain.complete();
            }
        }
    }
    Ok(chain)
}
