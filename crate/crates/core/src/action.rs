//! The permutations `x`, `x⁻¹`, `y`, `z` and `R(h)` of H, evaluated pointwise.
//!
//! `x` is the automorphism of H with
//!
//! ```text
//! a ↦ c,  b ↦ d,  c ↦ a³,  d ↦ ab,  e_{2i-1} ↦ e_{2i-1},  e_{2i} ↦ a² e_{2i-1} e_{2i}
//! ```
//!
//! (and `e_m ↦ a² e_m` when `m` is odd). `φ` is the automorphism of
//! `K = ⟨a², b, c, d, E⟩` swapping `a²` and `b`, fixing `c`, `d`, and sending
//! `e_{2i-1} ↦ e_{2i-3} e_{2i-2} e_{2i}`, `e_{2i} ↦ e_{2i-3} e_{2i-2} e_{2i-1}`
//! (`e_m ↦ e_m` for odd `m`; `e_t = 1` for `t ≤ 0`). Then `y` acts as `φ` on
//! `K` and as `fk ↦ f·c·d·k^φ·e_m^m` on the other coset, and
//! `z = R(f) y R(f c d e_m^m)`.
//!
//! Words are applied left to right: evaluating `[s, t]` at `g` gives `t(s(g))`.
//!
//! Two evaluators are provided. The closed-form one works directly on the
//! packed bits; the generic one expands each point over the generator images
//! above using group multiplication. They share nothing but [`packed::mul`]
//! and are cross-checked in the tests.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{packed, GroupParams, HElem};
use crate::perm::{lcm_of_lengths, Perm, Sign};

/// Default cap on the number of points of a materialized permutation.
pub const DEFAULT_MATERIALIZE_BUDGET: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    X,
    XInv,
    Y,
    Z,
    RightMul(HElem),
}

impl Atom {
    /// Inverse atom, using `y² = z² = 1`.
    pub fn inverse(self) -> Atom {
        match self {
            Atom::X => Atom::XInv,
            Atom::XInv => Atom::X,
            Atom::Y => Atom::Y,
            Atom::Z => Atom::Z,
            Atom::RightMul(h) => Atom::RightMul(h.inv()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::X => f.write_str("x"),
            Atom::XInv => f.write_str("X"),
            Atom::Y => f.write_str("y"),
            Atom::Z => f.write_str("z"),
            Atom::RightMul(h) => write!(f, "R({h})"),
        }
    }
}

/// A symbolic product of atoms. Never normalized.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ActionWord {
    atoms: Vec<Atom>,
}

impl ActionWord {
    pub fn new(atoms: Vec<Atom>) -> ActionWord {
        ActionWord { atoms }
    }

    pub fn identity() -> ActionWord {
        ActionWord::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &ActionWord) -> ActionWord {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        ActionWord { atoms }
    }

    pub fn pow(&self, k: usize) -> ActionWord {
        ActionWord {
            atoms: self.atoms.repeat(k),
        }
    }

    pub fn inverse(&self) -> ActionWord {
        ActionWord {
            atoms: self.atoms.iter().rev().map(|a| a.inverse()).collect(),
        }
    }

    /// Parses the report syntax, e.g. `"x y X z R(a^2*b)"`; `x⁻¹` is written
    /// `X`. An empty string or `1` is the identity word.
    pub fn parse(params: &GroupParams, text: &str) -> Result<ActionWord> {
        let mut atoms = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some((pos, ch)) = chars.next() {
            match ch {
                c if c.is_whitespace() => {}
                'x' => atoms.push(Atom::X),
                'X' => atoms.push(Atom::XInv),
                'y' => atoms.push(Atom::Y),
                'z' => atoms.push(Atom::Z),
                '1' if text.trim() == "1" => {}
                'R' => {
                    if chars.next().map(|(_, c)| c) != Some('(') {
                        return Err(Error::parse(text, format!("expected '(' after R at {pos}")));
                    }
                    let mut inner = String::new();
                    loop {
                        match chars.next() {
                            Some((_, ')')) => break,
                            Some((_, c)) => inner.push(c),
                            None => return Err(Error::parse(text, "unterminated R(")),
                        }
                    }
                    atoms.push(Atom::RightMul(params.parse(&inner)?));
                }
                other => {
                    return Err(Error::parse(text, format!("unexpected {other:?} at {pos}")));
                }
            }
        }
        Ok(ActionWord { atoms })
    }
}

impl From<Vec<Atom>> for ActionWord {
    fn from(atoms: Vec<Atom>) -> Self {
        ActionWord { atoms }
    }
}

impl fmt::Display for ActionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("1");
        }
        for (idx, atom) in self.atoms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

/// Words that recur throughout the checks.
pub mod words {
    use super::{ActionWord, Atom};

    pub fn x() -> ActionWord {
        vec![Atom::X].into()
    }

    pub fn y() -> ActionWord {
        vec![Atom::Y].into()
    }

    pub fn z() -> ActionWord {
        vec![Atom::Z].into()
    }

    pub fn xy() -> ActionWord {
        vec![Atom::X, Atom::Y].into()
    }

    pub fn xz() -> ActionWord {
        vec![Atom::X, Atom::Z].into()
    }

    pub fn yz() -> ActionWord {
        vec![Atom::Y, Atom::Z].into()
    }

    pub fn zy() -> ActionWord {
        vec![Atom::Z, Atom::Y].into()
    }

    /// `(xy)⁻¹ = y x⁻¹`.
    pub fn xy_inv() -> ActionWord {
        vec![Atom::Y, Atom::XInv].into()
    }

    /// `(xz)⁻¹ = z x⁻¹`.
    pub fn xz_inv() -> ActionWord {
        vec![Atom::Z, Atom::XInv].into()
    }
}

/// Masks and constants the closed forms need, derived once per `m`.
#[derive(Clone, Debug)]
struct Consts {
    /// Bits of ε belonging to `e_1 … e_{2⌊m/2⌋}`.
    paired: u64,
    /// Bits of ε at `e_2, e_4, …`.
    even_e: u64,
    /// Bits of ε whose `x`-image carries an `a²` factor.
    x_a2: u64,
    f: u64,
    fcd: u64,
    emm: u64,
    fcd_emm: u64,
}

impl Consts {
    fn new(params: &GroupParams) -> Consts {
        let m = params.m();
        let width = 2 * (m / 2);
        let paired = (1u64 << width) - 1;
        let even_e = paired & 0xAAAA_AAAA_AAAA_AAAA;
        let x_a2 = even_e | if m % 2 == 1 { 1 << (m - 1) } else { 0 };
        let f = params.f().encode();
        let cd = packed::pack(0, 0, 1, 1, 0);
        let fcd = packed::mul(f, cd);
        let emm = params.emm().encode();
        Consts {
            paired,
            even_e,
            x_a2,
            f,
            fcd,
            emm,
            fcd_emm: packed::mul(fcd, emm),
        }
    }
}

mod closed {
    use super::Consts;
    use crate::group::packed::{self, i, j, k, l, pack};

    const EVEN_POSITIONS: u64 = 0x5555_5555_5555_5555;

    #[inline]
    fn e_part(c: &Consts, eps: u64) -> (u64, u64) {
        let a2 = u64::from((eps & c.x_a2).count_ones() & 1);
        (a2, eps ^ ((eps & c.even_e) >> 1))
    }

    #[inline]
    pub fn x(c: &Consts, g: u64) -> u64 {
        let (s, eps) = e_part(c, packed::eps(g));
        pack((l(g) + 4 - k(g) + 2 * s) & 3, l(g), i(g), j(g), eps)
    }

    #[inline]
    pub fn x_inv(c: &Consts, g: u64) -> u64 {
        let (s, eps) = e_part(c, packed::eps(g));
        pack(k(g), l(g), (j(g) + 4 - i(g) + 2 * s) & 3, j(g), eps)
    }

    /// `φ` on an element of K (even `a`-exponent).
    #[inline]
    pub fn phi(c: &Consts, g: u64) -> u64 {
        let eps = packed::eps(g);
        let p = eps & c.paired;
        let lo = p & EVEN_POSITIONS;
        let hi = (p >> 1) & EVEN_POSITIONS;
        let swapped = (lo << 1) | hi;
        let carry = (lo ^ hi) >> 2;
        let e2 = (swapped ^ carry ^ (carry << 1)) | (eps & !c.paired);
        pack(2 * j(g), i(g) >> 1, k(g), l(g), e2)
    }

    #[inline]
    pub fn y(c: &Consts, g: u64) -> u64 {
        if g & 1 == 0 {
            phi(c, g)
        } else {
            let kk = packed::mul(c.f, g);
            packed::mul(c.fcd, phi(c, kk)) ^ c.emm
        }
    }

    #[inline]
    pub fn z(c: &Consts, g: u64) -> u64 {
        packed::mul(y(c, packed::mul(g, c.f)), c.fcd_emm)
    }
}

/// Generator images written out element by element, evaluated by expanding
/// a point over its normal form.
#[derive(Clone, Debug)]
struct GeneratorImages {
    m: u32,
    f: HElem,
    fcd_emm: HElem,
    cd: HElem,
    emm: HElem,
    /// Images of a, b, c, d, then e_1..e_m.
    x: Vec<HElem>,
    x_inv: Vec<HElem>,
    /// Images of a², b, c, d, then e_1..e_m.
    phi: Vec<HElem>,
}

impl GeneratorImages {
    fn new(p: &GroupParams) -> Result<GeneratorImages> {
        let m = p.m() as i64;
        let (a, b, c, d) = (p.a(), p.b(), p.c(), p.d());
        let e = |t: i64| p.e(t);

        let mut x = vec![c, d, a.pow(3), a * b];
        let mut x_inv = vec![c.pow(3), c * d, a, b];
        let mut phi = vec![b, a.pow(2), c, d];
        for t in 1..=m {
            if t % 2 == 0 {
                let i = t / 2;
                x.push(a.pow(2) * e(2 * i - 1)? * e(2 * i)?);
                x_inv.push(c.pow(2) * e(2 * i - 1)? * e(2 * i)?);
                phi.push(e(2 * i - 3)? * e(2 * i - 2)? * e(2 * i - 1)?);
            } else if t == m {
                // Odd m: e_m ↦ a² e_m under x, (e_m^m) ↦ c^{2m} e_m^m under x⁻¹.
                x.push(a.pow(2) * e(m)?);
                x_inv.push(c.pow(2 * m) * e(m)?);
                phi.push(e(m)?);
            } else {
                let i = (t + 1) / 2;
                x.push(e(2 * i - 1)?);
                x_inv.push(e(2 * i - 1)?);
                phi.push(e(2 * i - 3)? * e(2 * i - 2)? * e(2 * i)?);
            }
        }
        Ok(GeneratorImages {
            m: p.m(),
            f: p.f(),
            fcd_emm: p.f() * c * d * p.emm(),
            cd: c * d,
            emm: p.emm(),
            x,
            x_inv,
            phi,
        })
    }

    fn expand(&self, images: &[HElem], exps: [u32; 4], eps: u64) -> HElem {
        let mut acc = HElem::from_bits(0, self.m);
        for (img, e) in images.iter().zip(exps) {
            acc = acc * img.pow(i64::from(e));
        }
        for t in 0..self.m as usize {
            if eps >> t & 1 == 1 {
                acc = acc * images[4 + t];
            }
        }
        acc
    }

    fn x(&self, g: HElem) -> HElem {
        self.expand(&self.x, [g.i(), g.j(), g.k(), g.l()], g.eps())
    }

    fn x_inv(&self, g: HElem) -> HElem {
        self.expand(&self.x_inv, [g.i(), g.j(), g.k(), g.l()], g.eps())
    }

    fn phi(&self, g: HElem) -> HElem {
        debug_assert!(g.i().is_multiple_of(2));
        self.expand(&self.phi, [g.i() / 2, g.j(), g.k(), g.l()], g.eps())
    }

    fn y(&self, g: HElem) -> HElem {
        if g.i().is_multiple_of(2) {
            self.phi(g)
        } else {
            let k = self.f.inv() * g;
            self.f * self.cd * self.phi(k) * self.emm
        }
    }

    fn z(&self, g: HElem) -> HElem {
        self.y(g * self.f) * self.fcd_emm
    }
}

#[derive(Clone, Debug)]
struct Tables {
    x: Vec<u32>,
    x_inv: Vec<u32>,
    y: Vec<u32>,
}

#[derive(Clone, Debug)]
enum Backend {
    ClosedForm,
    Generic(Box<GeneratorImages>),
    Tabled(Box<Tables>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationTarget {
    X,
    Y,
}

/// Evaluator for the atoms on one group H.
#[derive(Clone, Debug)]
pub struct Actions {
    params: GroupParams,
    consts: Consts,
    backend: Backend,
    budget: usize,
}

impl Actions {
    /// Closed-form evaluation (the default).
    pub fn new(params: GroupParams) -> Actions {
        let consts = Consts::new(&params);
        Actions {
            params,
            consts,
            backend: Backend::ClosedForm,
            budget: DEFAULT_MATERIALIZE_BUDGET,
        }
    }

    pub fn for_m(m: u32) -> Result<Actions> {
        Ok(Actions::new(GroupParams::new(m)?))
    }

    /// Evaluation by expansion over generator images.
    pub fn generic(params: GroupParams) -> Result<Actions> {
        let images = GeneratorImages::new(&params)?;
        let mut actions = Actions::new(params);
        actions.backend = Backend::Generic(Box::new(images));
        Ok(actions)
    }

    /// Table-backed actions where the images of `p` and `q` under `x` (or
    /// `y`) have been exchanged. `x⁻¹` follows the mutated `x`; `z` keeps its
    /// definition in terms of the mutated `y`.
    pub fn mutated(params: GroupParams, target: MutationTarget, p: u32, q: u32) -> Result<Actions> {
        let base = Actions::new(params);
        let n = base.n();
        if n > base.budget {
            return Err(Error::Budget(format!("{n} points exceed the table budget")));
        }
        if p as usize >= n || q as usize >= n {
            return Err(Error::IndexOutOfRange {
                index: u64::from(p.max(q)),
                order: n as u64,
            });
        }
        let table = |f: fn(&Consts, u64) -> u64| -> Vec<u32> {
            (0..n as u64).map(|g| f(&base.consts, g) as u32).collect()
        };
        let mut x = table(closed::x);
        let mut y = table(closed::y);
        match target {
            MutationTarget::X => x.swap(p as usize, q as usize),
            MutationTarget::Y => y.swap(p as usize, q as usize),
        }
        let x_inv = Perm::from_images_unchecked(x.clone())
            .inverse()
            .into_images();
        let mut actions = base;
        actions.backend = Backend::Tabled(Box::new(Tables { x, x_inv, y }));
        Ok(actions)
    }

    pub fn with_budget(mut self, budget: usize) -> Actions {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn m(&self) -> u32 {
        self.params.m()
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn backend_name(&self) -> &'static str {
        match self.backend {
            Backend::ClosedForm => "closed-form",
            Backend::Generic(_) => "generic",
            Backend::Tabled(_) => "tabled",
        }
    }

    pub fn is_materializable(&self) -> bool {
        self.n() <= self.budget
    }

    #[inline]
    fn x_raw(&self, g: u64) -> u64 {
        match &self.backend {
            Backend::ClosedForm => closed::x(&self.consts, g),
            Backend::Generic(img) => img.x(self.params.elem(g)).encode(),
            Backend::Tabled(t) => u64::from(t.x[g as usize]),
        }
    }

    #[inline]
    fn x_inv_raw(&self, g: u64) -> u64 {
        match &self.backend {
            Backend::ClosedForm => closed::x_inv(&self.consts, g),
            Backend::Generic(img) => img.x_inv(self.params.elem(g)).encode(),
            Backend::Tabled(t) => u64::from(t.x_inv[g as usize]),
        }
    }

    #[inline]
    fn y_raw(&self, g: u64) -> u64 {
        match &self.backend {
            Backend::ClosedForm => closed::y(&self.consts, g),
            Backend::Generic(img) => img.y(self.params.elem(g)).encode(),
            Backend::Tabled(t) => u64::from(t.y[g as usize]),
        }
    }

    #[inline]
    fn z_raw(&self, g: u64) -> u64 {
        match &self.backend {
            Backend::ClosedForm => closed::z(&self.consts, g),
            Backend::Generic(img) => img.z(self.params.elem(g)).encode(),
            Backend::Tabled(_) => packed::mul(
                self.y_raw(packed::mul(g, self.consts.f)),
                self.consts.fcd_emm,
            ),
        }
    }

    #[inline]
    pub fn apply_atom_raw(&self, atom: &Atom, g: u64) -> u64 {
        match atom {
            Atom::X => self.x_raw(g),
            Atom::XInv => self.x_inv_raw(g),
            Atom::Y => self.y_raw(g),
            Atom::Z => self.z_raw(g),
            Atom::RightMul(h) => packed::mul(g, h.encode()),
        }
    }

    /// Evaluates a word at a packed point.
    #[inline]
    pub fn eval_raw(&self, w: &ActionWord, g: u64) -> u64 {
        w.atoms.iter().fold(g, |p, a| self.apply_atom_raw(a, p))
    }

    pub fn eval(&self, w: &ActionWord, g: HElem) -> Result<HElem> {
        self.params.check(g)?;
        for atom in &w.atoms {
            if let Atom::RightMul(h) = atom {
                self.params.check(*h)?;
            }
        }
        Ok(self.params.elem(self.eval_raw(w, g.encode())))
    }

    fn elem_op(&self, g: HElem, f: impl Fn(u64) -> u64) -> HElem {
        assert_eq!(g.m(), self.m(), "element from a different group");
        self.params.elem(f(g.encode()))
    }

    pub fn apply_x(&self, g: HElem) -> HElem {
        self.elem_op(g, |b| self.x_raw(b))
    }

    pub fn apply_x_inv(&self, g: HElem) -> HElem {
        self.elem_op(g, |b| self.x_inv_raw(b))
    }

    pub fn apply_y(&self, g: HElem) -> HElem {
        self.elem_op(g, |b| self.y_raw(b))
    }

    pub fn apply_z(&self, g: HElem) -> HElem {
        self.elem_op(g, |b| self.z_raw(b))
    }

    /// `φ` on `K`. Only defined for the closed-form and generic evaluators.
    pub fn apply_phi(&self, g: HElem) -> Result<HElem> {
        if !self.params.in_k(g) {
            return Err(Error::Precondition(format!("{g} is not in K")));
        }
        match &self.backend {
            Backend::Generic(img) => Ok(img.phi(g)),
            _ => Ok(self.elem_op(g, |b| closed::phi(&self.consts, b))),
        }
    }

    pub fn materialize(&self, w: &ActionWord) -> Result<Perm> {
        let n = self.n();
        if n > self.budget {
            return Err(Error::Budget(format!(
                "materializing {n} points exceeds the budget of {}; use streaming evaluation",
                self.budget
            )));
        }
        let images: Vec<u32> = (0..n as u64)
            .into_par_iter()
            .map(|g| self.eval_raw(w, g) as u32)
            .collect();
        Ok(Perm::from_images_unchecked(images))
    }

    /// Order of the permutation a word denotes. Materializes when within
    /// budget, otherwise walks cycles against a visited bitmap.
    pub fn order(&self, w: &ActionWord) -> BigUint {
        match self.materialize(w) {
            Ok(p) => p.order(),
            Err(_) => lcm_of_lengths(self.streaming_cycle_lengths(w)),
        }
    }

    pub fn parity(&self, w: &ActionWord) -> Sign {
        let cycles = match self.materialize(w) {
            Ok(p) => p.cycle_lengths().len(),
            Err(_) => self.streaming_cycle_lengths(w).len(),
        };
        if (self.n() - cycles).is_multiple_of(2) {
            Sign::Even
        } else {
            Sign::Odd
        }
    }

    fn streaming_cycle_lengths(&self, w: &ActionWord) -> Vec<usize> {
        let n = self.n();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut len = 0;
            let mut p = start as u64;
            while !seen.put(p as usize) {
                len += 1;
                p = self.eval_raw(w, p);
            }
            out.push(len);
        }
        out
    }

    /// `Fix(w)` as a bitset over indices, computed in parallel without
    /// materializing `w`.
    pub fn fixed_points(&self, w: &ActionWord) -> FixedBitSet {
        let n = self.n();
        let bits = usize::BITS as usize;
        let blocks: Vec<usize> = (0..n.div_ceil(bits))
            .into_par_iter()
            .map(|block| {
                let start = block * bits;
                let end = (start + bits).min(n);
                let mut word = 0usize;
                for p in start..end {
                    if self.eval_raw(w, p as u64) == p as u64 {
                        word |= 1 << (p - start);
                    }
                }
                word
            })
            .collect();
        FixedBitSet::with_capacity_and_blocks(n, blocks)
    }

    pub fn count_fixed_points(&self, w: &ActionWord) -> usize {
        (0..self.n() as u64)
            .into_par_iter()
            .filter(|&p| self.eval_raw(w, p) == p)
            .count()
    }

    /// `{ w(p) : p ∈ s }`.
    pub fn set_image(&self, s: &FixedBitSet, w: &ActionWord) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n());
        for p in s.ones() {
            out.insert(self.eval_raw(w, p as u64) as usize);
        }
        out
    }
}
