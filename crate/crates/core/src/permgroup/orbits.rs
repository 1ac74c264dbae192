use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Partition of `0..degree` into orbits of a permutation group. Orbits are
/// numbered in order of their smallest point, which is also their
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    orbit_of: Vec<u32>,
    reps: Vec<u32>,
    sizes: Vec<usize>,
}

impl OrbitPartition {
    pub fn degree(&self) -> usize {
        self.orbit_of.len()
    }

    pub fn num_orbits(&self) -> usize {
        self.reps.len()
    }

    pub fn orbit_id(&self, p: u32) -> usize {
        self.orbit_of[p as usize] as usize
    }

    pub fn representative(&self, p: u32) -> u32 {
        self.reps[self.orbit_id(p)]
    }

    pub fn representatives(&self) -> &[u32] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn orbit_size(&self, p: u32) -> usize {
        self.sizes[self.orbit_id(p)]
    }

    pub fn is_transitive(&self) -> bool {
        self.reps.len() <= 1
    }

    /// Points of each orbit, ascending, orbits in id order.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (p, &id) in self.orbit_of.iter().enumerate() {
            out[id as usize].push(p as u32);
        }
        out
    }
}

pub(crate) fn check_degrees(degree: usize, gens: &[Perm]) -> Result<()> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    Ok(())
}

pub fn orbits(degree: usize, gens: &[Perm]) -> Result<OrbitPartition> {
    check_degrees(degree, gens)?;
    Ok(orbits_by(degree, gens.len(), |i, p| gens[i].image(p)))
}

/// Orbits of the group generated by `num_gens` permutations given only
/// through `image(generator, point)`.
pub fn orbits_by(
    degree: usize,
    num_gens: usize,
    image: impl Fn(usize, u32) -> u32,
) -> OrbitPartition {
    let mut orbit_of = vec![u32::MAX; degree];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..degree as u32 {
        if orbit_of[start as usize] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(start);
        orbit_of[start as usize] = id;
        queue.push_back(start);
        let mut size = 0;
        while let Some(p) = queue.pop_front() {
            size += 1;
            for g in 0..num_gens {
                let q = image(g, p);
                if orbit_of[q as usize] == u32::MAX {
                    orbit_of[q as usize] = id;
                    queue.push_back(q);
                }
            }
        }
        sizes.push(size);
    }
    OrbitPartition {
        orbit_of,
        reps,
        sizes,
    }
}

/// Orbit of a single point, in BFS discovery order.
pub fn orbit_of(gens: &[Perm], start: u32) -> Vec<u32> {
    let degree = gens.first().map_or(start as usize + 1, Perm::degree);
    let mut seen = vec![false; degree];
    seen[start as usize] = true;
    let mut out = vec![start];
    let mut head = 0;
    while head < out.len() {
        let p = out[head];
        head += 1;
        for g in gens {
            let q = g.image(p);
            if !seen[q as usize] {
                seen[q as usize] = true;
                out.push(q);
            }
        }
    }
    out
}

/// Restricts generators to an invariant point set, relabeling `points[i]`
/// as `i`.
pub fn restrict(gens: &[Perm], points: &[u32]) -> Result<Vec<Perm>> {
    let degree = gens.first().map_or(0, Perm::degree);
    let mut label = vec![u32::MAX; degree];
    for (i, &p) in points.iter().enumerate() {
        label[p as usize] = i as u32;
    }
    gens.iter()
        .map(|g| {
            let images = points
                .iter()
                .map(|&p| match label[g.image(p) as usize] {
                    u32::MAX => Err(Error::Precondition(format!(
                        "point set is not invariant: {p} leaves it"
                    ))),
                    l => Ok(l),
                })
                .collect::<Result<Vec<u32>>>()?;
            Perm::from_images(images)
        })
        .collect()
}
