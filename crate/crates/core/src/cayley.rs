//! Local structure of the Cayley graph on `G = ⟨xy, xz⟩` with connection set
//! `S = {xy, (xy)⁻¹, xz, (xz)⁻¹}`.
//!
//! A vertex `u` is joined to `u·s` for `s ∈ S`, where `u·s` means "apply `u`,
//! then `s`". Arcs `u → u·s` with `s ∈ {xy, xz}` form the orientation D1;
//! those with `s` an inverse form D2, the reverse digraph.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::action::{words, ActionWord, Actions, Atom};
use crate::error::{Error, Result};
use crate::group::HElem;
use crate::perm::{Perm, PermSet};

/// Default cap on `vertices × points` held by a ball.
pub const DEFAULT_BALL_BUDGET: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    D1,
    D2,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::D1 => "d1",
            Orientation::D2 => "d2",
        }
    }
}

/// The four connection words with their `b`-images, which tell them apart.
#[derive(Clone, Debug)]
pub struct ConnectionSet {
    entries: Vec<(&'static str, ActionWord, Orientation)>,
    b_images: Vec<HElem>,
}

impl ConnectionSet {
    pub fn new(actions: &Actions) -> ConnectionSet {
        let entries = vec![
            ("xy", words::xy(), Orientation::D1),
            ("(xy)^-1", words::xy_inv(), Orientation::D2),
            ("xz", words::xz(), Orientation::D1),
            ("(xz)^-1", words::xz_inv(), Orientation::D2),
        ];
        let b = actions.params().b();
        let b_images = entries
            .iter()
            .map(|(_, w, _)| actions.eval(w, b).expect("b belongs to the group"))
            .collect();
        ConnectionSet { entries, b_images }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn name(&self, s: usize) -> &'static str {
        self.entries[s].0
    }

    pub fn word(&self, s: usize) -> &ActionWord {
        &self.entries[s].1
    }

    pub fn orientation(&self, s: usize) -> Orientation {
        self.entries[s].2
    }

    /// Index of the inverse connection element.
    pub fn inverse_of(&self, s: usize) -> usize {
        s ^ 1
    }

    pub fn b_images(&self) -> &[HElem] {
        &self.b_images
    }

    /// Distinct `b`-images imply distinct permutations.
    pub fn b_images_distinct(&self) -> bool {
        let mut seen = self.b_images.clone();
        seen.sort();
        seen.dedup();
        seen.len() == self.b_images.len()
    }

    pub fn fix_identity(&self, actions: &Actions) -> bool {
        let one = actions.params().identity();
        self.entries.iter().all(|(_, w, _)| {
            actions
                .eval(w, one)
                .map(|g| g.is_identity())
                .unwrap_or(false)
        })
    }

    pub fn materialize(&self, actions: &Actions) -> Result<Vec<Perm>> {
        self.entries
            .iter()
            .map(|(_, w, _)| actions.materialize(w))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    /// Index into the connection set.
    pub generator: usize,
    pub class: Orientation,
}

/// Breadth-first ball around the identity. Vertices are numbered in BFS
/// order; within one depth they are sorted by image array.
#[derive(Clone, Debug)]
pub struct LocalBall {
    radius: usize,
    vertices: Vec<Perm>,
    depth: Vec<usize>,
    parent: Vec<Option<usize>>,
    arcs: Vec<Arc>,
    d1_out: Vec<usize>,
}

impl LocalBall {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Perm] {
        &self.vertices
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Arcs `u → u·s` for every vertex `u` below the outer layer.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_internal(&self, v: usize) -> bool {
        self.depth[v] < self.radius
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = &Arc> {
        self.arcs.iter().filter(move |a| a.from == v)
    }

    /// Distinct D1 out-neighbours of `v`, counted for every vertex, including
    /// those in the outer layer whose arcs leave the ball.
    pub fn d1_out_degree(&self, v: usize) -> usize {
        self.d1_out[v]
    }

    /// D1 arcs entering `v`. Each is the reverse of a D2 arc leaving `v`, so
    /// this is exact for internal vertices even when the tail of the arc is
    /// in the outer layer.
    pub fn d1_in_degree(&self, v: usize) -> usize {
        self.out_arcs(v)
            .filter(|a| a.class == Orientation::D2)
            .count()
    }

    /// Distinct neighbours of `v` (for internal vertices).
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.out_arcs(v).map(|a| a.to).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn position(&self, p: &Perm) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Graphviz rendering. Vertices are labelled `depth:hash`; arcs carry
    /// `class="d1"` or `class="d2"`.
    pub fn to_dot(&self, connection: &ConnectionSet) -> String {
        let mut out = String::from("digraph ball {\n");
        for (v, p) in self.vertices.iter().enumerate() {
            let hash = p.content_hash() >> 96;
            let _ = writeln!(out, "  v{v} [label=\"{}:{hash:08x}\"];", self.depth[v]);
        }
        for arc in &self.arcs {
            let colour = match arc.class {
                Orientation::D1 => "blue",
                Orientation::D2 => "red",
            };
            let _ = writeln!(
                out,
                "  v{} -> v{} [class=\"{}\", color=\"{colour}\", label=\"{}\"];",
                arc.from,
                arc.to,
                arc.class.as_str(),
                connection.name(arc.generator)
            );
        }
        out.push_str("}\n");
        out
    }
}

pub fn ball(actions: &Actions, radius: usize, budget_points: usize) -> Result<LocalBall> {
    let n = actions.n();
    let bound = 3usize
        .checked_pow(radius as u32)
        .and_then(|p| p.checked_mul(2))
        .and_then(|v| v.checked_mul(n));
    if bound.is_none_or(|b| b > budget_points) {
        return Err(Error::Budget(format!(
            "a ball of radius {radius} on {n} points exceeds the budget of {budget_points}"
        )));
    }
    let connection = ConnectionSet::new(actions);
    let gens = connection.materialize(actions)?;
    let root = Perm::identity(n);
    let mut index: HashMap<u128, Vec<usize>> = HashMap::new();
    index.insert(root.content_hash(), vec![0]);
    let mut ball = LocalBall {
        radius,
        vertices: vec![root],
        depth: vec![0],
        parent: vec![None],
        arcs: Vec::new(),
        d1_out: Vec::new(),
    };
    let d1: Vec<&Perm> = (0..connection.len())
        .filter(|&s| connection.orientation(s) == Orientation::D1)
        .map(|s| &gens[s])
        .collect();
    let d1_degree = |u: &Perm| {
        let mut targets: Vec<Perm> = d1.iter().map(|g| u.then(g)).collect();
        targets.sort();
        targets.dedup();
        targets.len()
    };
    let mut frontier = vec![0usize];
    for d in 0..radius {
        let products: Vec<(usize, usize, Perm, u128)> = frontier
            .par_iter()
            .flat_map_iter(|&u| {
                let base = &ball.vertices[u];
                gens.iter().enumerate().map(move |(s, g)| {
                    let p = base.then(g);
                    let h = p.content_hash();
                    (u, s, p, h)
                })
            })
            .collect();
        let lookup = |index: &HashMap<u128, Vec<usize>>, vertices: &[Perm], p: &Perm, h: u128| {
            index
                .get(&h)
                .and_then(|c| c.iter().copied().find(|&i| &vertices[i] == p))
        };
        let mut fresh = PermSet::new();
        let mut fresh_parent = Vec::new();
        for (u, _, p, h) in &products {
            if lookup(&index, &ball.vertices, p, *h).is_none() {
                let (_, new) = fresh.insert(p.clone());
                if new {
                    fresh_parent.push(*u);
                }
            }
        }
        let mut order: Vec<usize> = (0..fresh.len()).collect();
        order.sort_by(|&i, &j| fresh.items()[i].cmp(&fresh.items()[j]));
        let mut next = Vec::with_capacity(order.len());
        for i in order {
            let p = fresh.items()[i].clone();
            let id = ball.vertices.len();
            index.entry(p.content_hash()).or_default().push(id);
            ball.vertices.push(p);
            ball.depth.push(d + 1);
            ball.parent.push(Some(fresh_parent[i]));
            next.push(id);
        }
        for (u, s, p, h) in &products {
            let to = lookup(&index, &ball.vertices, p, *h).expect("every product was inserted");
            ball.arcs.push(Arc {
                from: *u,
                to,
                generator: *s,
                class: connection.orientation(*s),
            });
        }
        frontier = next;
    }
    ball.d1_out = ball.vertices.par_iter().map(d1_degree).collect();
    Ok(ball)
}

/// The two alternating cycles through the identity, found by walking.
#[derive(Clone, Debug)]
pub struct AlternatingCycles {
    /// Through the edge `{1, xy}`: steps alternate `xy`, `(xz)⁻¹`.
    pub c1: Vec<Perm>,
    /// Through the edge `{1, (xy)⁻¹}`: steps alternate `(xy)⁻¹`, `xz`.
    pub c2: Vec<Perm>,
    /// Step classes along each walk.
    pub c1_steps: Vec<Orientation>,
    pub c2_steps: Vec<Orientation>,
}

impl AlternatingCycles {
    pub fn common_vertices(&self) -> Vec<&Perm> {
        let c2: PermSet = self.c2.iter().cloned().collect();
        self.c1.iter().filter(|p| c2.contains(p)).collect()
    }

    pub fn radius(&self) -> usize {
        self.c1.len() / 2
    }

    pub fn attachment(&self) -> usize {
        self.common_vertices().len()
    }
}

const MAX_WALK: usize = 1000;

/// Walks from the identity, alternating the two steps, until it returns.
fn walk(start: &Perm, steps: [(&Perm, Orientation); 2]) -> (Vec<Perm>, Vec<Orientation>) {
    let mut vertices = vec![start.clone()];
    let mut classes = Vec::new();
    let mut current = start.clone();
    for k in 0..MAX_WALK {
        let (s, class) = steps[k % 2];
        current = current.then(s);
        classes.push(class);
        if &current == start {
            break;
        }
        vertices.push(current.clone());
    }
    (vertices, classes)
}

pub fn alternating_cycles(actions: &Actions) -> Result<AlternatingCycles> {
    let connection = ConnectionSet::new(actions);
    let g = connection.materialize(actions)?;
    let one = Perm::identity(actions.n());
    // The second step's class is the orientation of the arc it traverses
    // backwards, i.e. of its inverse.
    let (c1, c1_steps) = walk(&one, [(&g[0], Orientation::D1), (&g[3], Orientation::D2)]);
    let (c2, c2_steps) = walk(&one, [(&g[1], Orientation::D2), (&g[2], Orientation::D1)]);
    Ok(AlternatingCycles {
        c1,
        c2,
        c1_steps,
        c2_steps,
    })
}

/// `{x(yz)^i x⁻¹, x(yz)^i y}` and `{(yz)^j, (yz)^j y x⁻¹}` for `0 ≤ i, j < 6`.
pub fn alternating_cycle_words() -> (Vec<ActionWord>, Vec<ActionWord>) {
    let x = words::x();
    let x_inv = ActionWord::new(vec![Atom::XInv]);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for i in 0..6 {
        let yz_i = words::yz().pow(i);
        first.push(x.then(&yz_i).then(&x_inv));
        first.push(x.then(&yz_i).then(&words::y()));
        second.push(yz_i.clone());
        second.push(yz_i.then(&words::y()).then(&x_inv));
    }
    (first, second)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadiusAttachment {
    pub radius: usize,
    pub attachment: usize,
}

pub fn radius_and_attachment(actions: &Actions) -> Result<RadiusAttachment> {
    let cycles = alternating_cycles(actions)?;
    Ok(RadiusAttachment {
        radius: cycles.radius(),
        attachment: cycles.attachment(),
    })
}

/// `R(h)` as an action word.
pub fn right_mul(h: HElem) -> ActionWord {
    ActionWord::new(vec![Atom::RightMul(h)])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetReport {
    /// `"exhaustive"` or `"index"`.
    pub method: &'static str,
    /// `|R(H) xy R(H)|`.
    pub forward_size: usize,
    /// `|R(H) (xy)⁻¹ R(H)|`.
    pub inverse_size: usize,
    /// Whether the double cosets equal `R(H)xy ∪ R(H)xz` and
    /// `R(H)(xy)⁻¹ ∪ R(H)(xz)⁻¹` respectively.
    pub forward_matches: bool,
    pub inverse_matches: bool,
    pub cosets_disjoint: bool,
    /// `|R(H)xy ∪ R(H)(xy)⁻¹ ∪ R(H)xz ∪ R(H)(xz)⁻¹|`.
    pub union_size: usize,
    /// Products checked for membership in the claimed coset union (index
    /// method only).
    pub spot_checks: usize,
}

/// Largest `m` for which double cosets are enumerated element by element.
pub const EXHAUSTIVE_DOUBLE_COSET_MAX_M: u32 = 3;

/// Image array of `g ↦ w(g·h1)·h2`, i.e. `R(h1) w R(h2)`.
fn sandwich(actions: &Actions, h1: u64, w: &ActionWord, h2: u64) -> Perm {
    let n = actions.n() as u64;
    let mut full = ActionWord::new(vec![Atom::RightMul(actions.params().elem(h1))]);
    full = full.then(w).then(&right_mul(actions.params().elem(h2)));
    let images = (0..n).map(|g| actions.eval_raw(&full, g) as u32).collect();
    Perm::from_images(images).expect("words are bijections")
}

fn right_coset(actions: &Actions, w: &ActionWord) -> PermSet {
    let n = actions.n() as u64;
    (0..n)
        .into_par_iter()
        .map(|h| sandwich(actions, h, w, 0))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn double_coset(actions: &Actions, w: &ActionWord) -> PermSet {
    let n = actions.n() as u64;
    let mut set = PermSet::new();
    for h1 in 0..n {
        let row: Vec<Perm> = (0..n)
            .into_par_iter()
            .map(|h2| sandwich(actions, h1, w, h2))
            .collect();
        for p in row {
            set.insert(p);
        }
    }
    set
}

fn same_set(a: &PermSet, b: &PermSet) -> bool {
    a.len() == b.len() && a.items().iter().all(|p| b.contains(p))
}

/// Decomposes `R(H) s R(H)` into right cosets of `R(H)`. Exhaustive for
/// `m ≤ 3`; above that the sizes follow from `|R(H) : R(K)| = 2` (with `K`
/// recomputed by [`nonnormality_witness`]) and random products are checked
/// for membership in the claimed union.
pub fn double_coset_decomposition(actions: &Actions) -> Result<DoubleCosetReport> {
    let n = actions.n();
    let connection = ConnectionSet::new(actions);
    if actions.m() <= EXHAUSTIVE_DOUBLE_COSET_MAX_M {
        let cosets: Vec<PermSet> = (0..4)
            .map(|s| right_coset(actions, connection.word(s)))
            .collect();
        let mut union = PermSet::new();
        for c in &cosets {
            for p in c.items() {
                union.insert(p.clone());
            }
        }
        let forward = double_coset(actions, connection.word(0));
        let inverse = double_coset(actions, connection.word(1));
        let pair = |a: usize, b: usize| -> PermSet {
            cosets[a]
                .items()
                .iter()
                .chain(cosets[b].items())
                .cloned()
                .collect()
        };
        return Ok(DoubleCosetReport {
            method: "exhaustive",
            forward_size: forward.len(),
            inverse_size: inverse.len(),
            forward_matches: same_set(&forward, &pair(0, 2)),
            inverse_matches: same_set(&inverse, &pair(1, 3)),
            cosets_disjoint: cosets.iter().all(|c| c.len() == n) && union.len() == 4 * n,
            union_size: union.len(),
            spot_checks: 0,
        });
    }

    let k = nonnormality_witness(actions);
    let k_size = k.count_ones(..);
    let index = n / k_size.max(1);
    // A permutation lies in R(H)·s iff (that permutation)·s⁻¹ is a right
    // multiplication, i.e. agrees with R(t) for t the image of 1.
    let in_coset = |h1: u64, w: &ActionWord, h2: u64, s: usize| -> bool {
        let full = right_mul(actions.params().elem(h1))
            .then(w)
            .then(&right_mul(actions.params().elem(h2)))
            .then(&connection.word(s).inverse());
        is_right_multiplication(actions, &full)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(actions.m()));
    let samples = 16;
    let mut forward_ok = true;
    let mut inverse_ok = true;
    for _ in 0..samples {
        let (h1, h2) = (rng.random_range(0..n as u64), rng.random_range(0..n as u64));
        forward_ok &=
            in_coset(h1, connection.word(0), h2, 0) || in_coset(h1, connection.word(0), h2, 2);
        inverse_ok &=
            in_coset(h1, connection.word(1), h2, 1) || in_coset(h1, connection.word(1), h2, 3);
    }
    // Distinct cosets: s t⁻¹ is never a right multiplication for s ≠ t.
    let mut disjoint = true;
    for s in 0..4 {
        for t in (s + 1)..4 {
            let w = connection.word(s).then(&connection.word(t).inverse());
            disjoint &= !is_right_multiplication(actions, &w);
        }
    }
    Ok(DoubleCosetReport {
        method: "index",
        forward_size: n * index,
        inverse_size: n * index,
        forward_matches: forward_ok && index == 2,
        inverse_matches: inverse_ok && index == 2,
        cosets_disjoint: disjoint,
        union_size: if disjoint { 4 * n } else { 0 },
        spot_checks: 2 * samples,
    })
}

/// Whether the word acts as `R(t)` for `t` the image of the identity.
pub fn is_right_multiplication(actions: &Actions, w: &ActionWord) -> bool {
    let t = actions.eval_raw(w, 0);
    let probe = right_mul(actions.params().elem(t));
    (0..actions.n() as u64).all(|g| actions.eval_raw(w, g) == actions.eval_raw(&probe, g))
}

/// `{t ∈ H : R(t) ∈ (xy)⁻¹ R(H) xy}`, i.e. the intersection
/// `(xy)⁻¹ R(H) xy ∩ R(H)` as a set of multipliers, as an index bitset.
pub fn nonnormality_witness(actions: &Actions) -> FixedBitSet {
    let n = actions.n();
    let hits: Vec<usize> = (0..n as u64)
        .into_par_iter()
        .filter_map(|h| {
            let w = words::xy_inv()
                .then(&right_mul(actions.params().elem(h)))
                .then(&words::xy());
            is_right_multiplication(actions, &w).then(|| actions.eval_raw(&w, 0) as usize)
        })
        .collect();
    let mut out = FixedBitSet::with_capacity(n);
    out.extend(hits);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn actions(m: u32) -> Actions {
        Actions::for_m(m).unwrap()
    }

    #[test]
    fn connection_set_b_images() {
        let act = actions(2);
        let p = act.params();
        let cs = ConnectionSet::new(&act);
        assert_eq!(
            cs.b_images(),
            &[p.d(), p.c().pow(2), p.c().pow(2) * p.d(), p.c() * p.d()]
        );
        assert!(cs.b_images_distinct());
        assert!(cs.fix_identity(&act));
        let g = cs.materialize(&act).unwrap();
        for s in 0..4 {
            assert!(g[s].then(&g[cs.inverse_of(s)]).is_identity());
        }
    }

    #[test]
    fn small_balls() {
        let act = actions(1);
        let b0 = ball(&act, 0, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(b0.len(), 1);
        assert!(b0.arcs().is_empty());
        let b1 = ball(&act, 1, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(b1.len(), 5);
        assert_eq!(b1.neighbours(0).len(), 4);
    }

    #[test]
    fn ball_matches_set_oracle() {
        let act = actions(1);
        let b = ball(&act, 3, DEFAULT_BALL_BUDGET).unwrap();
        let gens = ConnectionSet::new(&act).materialize(&act).unwrap();
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut layer = vec![Perm::identity(act.n())];
        seen.insert(layer[0].images().to_vec());
        for _ in 0..3 {
            let mut next = Vec::new();
            for u in &layer {
                for g in &gens {
                    let v = u.then(g);
                    if seen.insert(v.images().to_vec()) {
                        next.push(v);
                    }
                }
            }
            layer = next;
        }
        assert_eq!(b.len(), seen.len());
        for v in b.vertices() {
            assert!(seen.contains(v.images()));
        }
    }

    #[test]
    fn ball_layers_and_orientations() {
        let act = actions(1);
        let b = ball(&act, 3, DEFAULT_BALL_BUDGET).unwrap();
        for arc in b.arcs() {
            let (du, dv) = (b.depth(arc.from), b.depth(arc.to));
            assert!(dv + 1 >= du && dv <= du + 1);
        }
        for v in 1..b.len() {
            let p = b.parent(v).unwrap();
            assert_eq!(b.depth(p) + 1, b.depth(v));
        }
        for v in (0..b.len()).filter(|&v| b.is_internal(v)) {
            assert_eq!(b.d1_out_degree(v), 2);
            assert_eq!(b.d1_in_degree(v), 2);
            assert_eq!(b.neighbours(v).len(), 4);
        }
        let d1: BTreeSet<(usize, usize)> = b
            .arcs()
            .iter()
            .filter(|a| a.class == Orientation::D1 && b.is_internal(a.to))
            .map(|a| (a.to, a.from))
            .collect();
        let d2: BTreeSet<(usize, usize)> = b
            .arcs()
            .iter()
            .filter(|a| a.class == Orientation::D2 && b.is_internal(a.to))
            .map(|a| (a.from, a.to))
            .collect();
        assert_eq!(d1, d2);
        let cs = ConnectionSet::new(&act);
        let root_d1: Vec<&Perm> = b
            .out_arcs(0)
            .filter(|a| a.class == Orientation::D1)
            .map(|a| &b.vertices()[a.to])
            .collect();
        let g = cs.materialize(&act).unwrap();
        assert_eq!(root_d1, vec![&g[0], &g[2]]);
    }

    #[test]
    fn dot_output_is_deterministic() {
        let act = actions(1);
        let cs = ConnectionSet::new(&act);
        let a = ball(&act, 2, DEFAULT_BALL_BUDGET).unwrap().to_dot(&cs);
        let b = ball(&act, 2, DEFAULT_BALL_BUDGET).unwrap().to_dot(&cs);
        assert_eq!(a, b);
        assert!(a.starts_with("digraph ball {"));
        assert!(a.contains("class=\"d1\"") && a.contains("class=\"d2\""));
    }

    #[test]
    fn ball_budget() {
        let act = actions(1);
        assert!(matches!(ball(&act, 8, 1 << 16), Err(Error::Budget(_))));
    }

    #[test]
    fn alternating_cycles_match_closed_form() {
        for m in 1..=3 {
            let act = actions(m);
            let cycles = alternating_cycles(&act).unwrap();
            assert_eq!(cycles.c1.len(), 12);
            assert_eq!(cycles.c2.len(), 12);
            assert_eq!(cycles.common_vertices(), vec![&Perm::identity(act.n())]);
            for steps in [&cycles.c1_steps, &cycles.c2_steps] {
                assert!(steps.windows(2).all(|w| w[0] != w[1]));
            }
            let (first, second) = alternating_cycle_words();
            let first: PermSet = first.iter().map(|w| act.materialize(w).unwrap()).collect();
            let second: PermSet = second.iter().map(|w| act.materialize(w).unwrap()).collect();
            assert!(same_set(&first, &cycles.c1.iter().cloned().collect()));
            assert!(same_set(&second, &cycles.c2.iter().cloned().collect()));
            assert_eq!(
                radius_and_attachment(&act).unwrap(),
                RadiusAttachment {
                    radius: 6,
                    attachment: 1
                }
            );
        }
    }

    #[test]
    fn conjugated_powers() {
        let act = actions(2);
        let step = words::xy().then(&words::xz_inv());
        let x_inv = ActionWord::new(vec![Atom::XInv]);
        for i in 0..=6 {
            let lhs = act.materialize(&step.pow(i)).unwrap();
            let rhs = act
                .materialize(&words::x().then(&words::yz().pow(i)).then(&x_inv))
                .unwrap();
            assert_eq!(lhs, rhs, "i={i}");
        }
    }

    #[test]
    fn double_cosets_m1() {
        let report = double_coset_decomposition(&actions(1)).unwrap();
        assert_eq!(report.method, "exhaustive");
        assert_eq!(report.forward_size, 256);
        assert_eq!(report.inverse_size, 256);
        assert!(report.forward_matches && report.inverse_matches && report.cosets_disjoint);
        assert_eq!(report.union_size, 512);
    }

    #[test]
    fn double_cosets_by_index() {
        let report = double_coset_decomposition(&actions(4)).unwrap();
        assert_eq!(report.method, "index");
        assert_eq!(report.forward_size, 1 << 11);
        assert!(report.forward_matches && report.inverse_matches && report.cosets_disjoint);
        assert_eq!(report.union_size, 1 << 12);
    }

    #[test]
    fn nonnormality_set_is_k() {
        for m in 1..=2 {
            let act = actions(m);
            let set = nonnormality_witness(&act);
            assert_eq!(
                &set,
                act.params()
                    .subgroup(crate::group::names::K)
                    .unwrap()
                    .elements()
            );
            assert!(!set.contains(act.params().a().encode() as usize));
        }
    }
}
