//! Materialized permutations of `0..n`.
//!
//! Products follow the exponent convention used throughout the crate: for
//! permutations `σ` and `τ`, `σ.then(τ)` is the permutation `p ↦ τ(σ(p))`.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Even,
    Odd,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Even => 1,
            Sign::Odd => -1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Validates that `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = FixedBitSet::with_capacity(n);
        for (p, &q) in images.iter().enumerate() {
            if q as usize >= n {
                return Err(Error::NotAPermutation(format!("{p} maps to {q} >= {n}")));
            }
            if seen.put(q as usize) {
                return Err(Error::NotAPermutation(format!("{q} is hit twice")));
            }
        }
        Ok(Perm { images })
    }

    /// Builds from a product of cycles given as point lists.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Perm> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cycle in cycles {
            for (idx, &p) in cycle.iter().enumerate() {
                let q = cycle[(idx + 1) % cycle.len()];
                if p as usize >= n || q as usize >= n {
                    return Err(Error::NotAPermutation(format!(
                        "point out of range in {cycle:?}"
                    )));
                }
                images[p as usize] = q;
            }
        }
        Perm::from_images(images)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, p: u32) -> u32 {
        self.images[p as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn into_images(self) -> Vec<u32> {
        self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &q)| p as u32 == q)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            images: self
                .images
                .iter()
                .map(|&q| other.images[q as usize])
                .collect(),
        }
    }

    pub(crate) fn then_in_place(&mut self, other: &Perm) {
        for q in self.images.iter_mut() {
            *q = other.images[*q as usize];
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (p, &q) in self.images.iter().enumerate() {
            inv[q as usize] = p as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// Cycle decomposition including fixed points, each cycle starting at its
    /// smallest point, cycles ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start as u32;
            while !seen.put(p as usize) {
                cycle.push(p);
                p = self.images[p as usize];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen.put(p) {
                len += 1;
                p = self.images[p] as usize;
            }
            out.push(len);
        }
        out
    }

    pub fn order(&self) -> BigUint {
        lcm_of_lengths(self.cycle_lengths())
    }

    pub fn sign(&self) -> Sign {
        let cycles = self.cycle_lengths().len();
        if (self.degree() - cycles).is_multiple_of(2) {
            Sign::Even
        } else {
            Sign::Odd
        }
    }

    pub fn fixed_points(&self) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.degree());
        for (p, &q) in self.images.iter().enumerate() {
            if p as u32 == q {
                out.insert(p);
            }
        }
        out
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|&(p, &q)| p as u32 != q)
            .map(|(p, _)| p as u32)
    }

    /// Exchanges the images of `p` and `q`, i.e. post-composes with the
    /// transposition of their images.
    pub fn swap_images(&mut self, p: u32, q: u32) {
        self.images.swap(p as usize, q as usize);
    }
}

impl Perm {
    /// First 128 bits of the SHA-256 digest of the image array.
    pub fn content_hash(&self) -> u128 {
        let mut hasher = Sha256::new();
        for q in &self.images {
            hasher.update(q.to_le_bytes());
        }
        let digest = hasher.finalize();
        u128::from_le_bytes(digest[..16].try_into().expect("digest is 32 bytes"))
    }
}

/// Insertion-ordered set of permutations keyed by content hash. Equal
/// hashes are confirmed by comparing image arrays.
#[derive(Clone, Debug, Default)]
pub struct PermSet {
    index: HashMap<u128, Vec<usize>>,
    items: Vec<Perm>,
}

impl PermSet {
    pub fn new() -> PermSet {
        PermSet::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Perm] {
        &self.items
    }

    pub fn position(&self, p: &Perm) -> Option<usize> {
        self.position_hashed(p.content_hash(), p)
    }

    fn position_hashed(&self, hash: u128, p: &Perm) -> Option<usize> {
        self.index
            .get(&hash)?
            .iter()
            .copied()
            .find(|&i| &self.items[i] == p)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.position(p).is_some()
    }

    /// Returns the index of `p` and whether it was newly added.
    pub fn insert(&mut self, p: Perm) -> (usize, bool) {
        let hash = p.content_hash();
        if let Some(i) = self.position_hashed(hash, &p) {
            return (i, false);
        }
        self.items.push(p);
        let i = self.items.len() - 1;
        self.index.entry(hash).or_default().push(i);
        (i, true)
    }
}

impl FromIterator<Perm> for PermSet {
    fn from_iter<I: IntoIterator<Item = Perm>>(iter: I) -> Self {
        let mut set = PermSet::new();
        for p in iter {
            set.insert(p);
        }
        set
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "Perm(id; n={})", self.degree());
        }
        write!(f, "Perm(")?;
        for c in cycles.iter().take(8) {
            write!(f, "{c:?}")?;
        }
        if cycles.len() > 8 {
            write!(f, "…")?;
        }
        write!(f, "; n={})", self.degree())
    }
}

pub(crate) fn lcm_of_lengths(lengths: impl IntoIterator<Item = usize>) -> BigUint {
    let mut distinct: Vec<usize> = lengths.into_iter().collect();
    distinct.sort_unstable();
    distinct.dedup();
    distinct
        .into_iter()
        .fold(BigUint::one(), |acc, len| acc.lcm(&BigUint::from(len)))
}
