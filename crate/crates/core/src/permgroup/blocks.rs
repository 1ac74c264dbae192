use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::permgroup::orbits::{check_degrees, orbits};

/// A block system: a partition of the points preserved by the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    block_of: Vec<u32>,
    blocks: Vec<Vec<u32>>,
}

impl BlockSystem {
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_of(&self, p: u32) -> usize {
        self.block_of[p as usize] as usize
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    /// One block containing every point.
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    /// A nontrivial block system, found from the seed pair `(0, point)`.
    Imprimitive {
        seed: (u32, u32),
        system: BlockSystem,
    },
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut p: u32) -> u32 {
        while self.parent[p as usize] != p {
            let gp = self.parent[self.parent[p as usize] as usize];
            self.parent[p as usize] = gp;
            p = gp;
        }
        p
    }

    fn union(&mut self, a: u32, b: u32) -> Option<u32> {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return None;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        Some(b)
    }
}

/// Smallest block system in which `seed.0` and `seed.1` share a block. The
/// group must be transitive on `0..degree`.
pub fn minimal_blocks(degree: usize, gens: &[Perm], seed: (u32, u32)) -> Result<BlockSystem> {
    check_degrees(degree, gens)?;
    if !orbits(degree, gens)?.is_transitive() {
        return Err(Error::Intransitive);
    }
    Ok(minimal_blocks_unchecked(degree, gens, seed))
}

fn minimal_blocks_unchecked(degree: usize, gens: &[Perm], seed: (u32, u32)) -> BlockSystem {
    let mut uf = UnionFind::new(degree);
    let mut pending = Vec::new();
    if uf.union(seed.0, seed.1).is_some() {
        pending.push((seed.0, seed.1));
    }
    while let Some((p, q)) = pending.pop() {
        for g in gens {
            let (gp, gq) = (g.image(p), g.image(q));
            if uf.union(gp, gq).is_some() {
                pending.push((gp, gq));
            }
        }
    }
    let mut block_of = vec![u32::MAX; degree];
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut root_block = vec![u32::MAX; degree];
    for p in 0..degree as u32 {
        let r = uf.find(p) as usize;
        if root_block[r] == u32::MAX {
            root_block[r] = blocks.len() as u32;
            blocks.push(Vec::new());
        }
        block_of[p as usize] = root_block[r];
        blocks[root_block[r] as usize].push(p);
    }
    BlockSystem { block_of, blocks }
}

/// Tests primitivity of a transitive group by trying every seed pair
/// `(0, β)`; any nontrivial system contains such a pair.
pub fn primitivity(degree: usize, gens: &[Perm]) -> Result<Primitivity> {
    check_degrees(degree, gens)?;
    if !orbits(degree, gens)?.is_transitive() {
        return Err(Error::Intransitive);
    }
    for beta in 1..degree as u32 {
        let system = minimal_blocks_unchecked(degree, gens, (0, beta));
        if !system.is_trivial() {
            return Ok(Primitivity::Imprimitive {
                seed: (0, beta),
                system,
            });
        }
    }
    Ok(Primitivity::Primitive)
}
