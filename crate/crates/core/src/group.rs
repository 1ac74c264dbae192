//! Arithmetic in H = ⟨a,b⟩ × ⟨c,d⟩ × E ≅ D8² × C2^m.
//!
//! Every element has a unique normal form `a^i b^j c^k d^l e_1^{ε_1}…e_m^{ε_m}`
//! with `i, k ∈ 0..4` and `j, l, ε_t ∈ 0..2`. The normal form is packed into
//! a single integer which doubles as the element's index in `0..2^(m+6)`:
//!
//! ```text
//! bit   0-1   2   3-4   5   6 ..
//!       i     j   k     l   ε_1, ε_2, …, ε_m
//! ```
//!
//! The layout is part of the report format and must not change.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Largest supported `m`. Materialized permutations store points as `u32`.
pub const MAX_M: u32 = 26;

/// Raw operations on packed normal forms. These are the hot-path primitives;
/// callers are responsible for keeping both operands in the same group.
pub mod packed {
    pub const I_MASK: u64 = 0b11;
    pub const J_BIT: u64 = 1 << 2;
    pub const K_SHIFT: u32 = 3;
    pub const K_MASK: u64 = 0b11 << K_SHIFT;
    pub const L_BIT: u64 = 1 << 5;
    pub const EPS_SHIFT: u32 = 6;

    #[inline]
    pub fn i(g: u64) -> u64 {
        g & I_MASK
    }

    #[inline]
    pub fn j(g: u64) -> u64 {
        (g >> 2) & 1
    }

    #[inline]
    pub fn k(g: u64) -> u64 {
        (g >> K_SHIFT) & 0b11
    }

    #[inline]
    pub fn l(g: u64) -> u64 {
        (g >> 5) & 1
    }

    #[inline]
    pub fn eps(g: u64) -> u64 {
        g >> EPS_SHIFT
    }

    #[inline]
    pub fn pack(i: u64, j: u64, k: u64, l: u64, eps: u64) -> u64 {
        (i & 3) | ((j & 1) << 2) | ((k & 3) << K_SHIFT) | ((l & 1) << 5) | (eps << EPS_SHIFT)
    }

    /// `(a^i1 b^j1)(a^i2 b^j2) = a^(i1 + (-1)^j1 i2) b^(j1 + j2)`, likewise for
    /// the `⟨c,d⟩` factor; the `E` factor is elementary abelian.
    #[inline]
    pub fn mul(g: u64, h: u64) -> u64 {
        let hi = i(h);
        let hk = k(h);
        let ni = (if g & J_BIT == 0 {
            i(g) + hi
        } else {
            i(g) + 4 - hi
        }) & 3;
        let nk = (if g & L_BIT == 0 {
            k(g) + hk
        } else {
            k(g) + 4 - hk
        }) & 3;
        let flags = (g ^ h) & (J_BIT | L_BIT);
        let e = (g ^ h) >> EPS_SHIFT;
        ni | flags | (nk << K_SHIFT) | (e << EPS_SHIFT)
    }

    #[inline]
    pub fn inv(g: u64) -> u64 {
        let mut r = g;
        if g & J_BIT == 0 {
            r = (r & !I_MASK) | ((4 - i(g)) & 3);
        }
        if g & L_BIT == 0 {
            r = (r & !K_MASK) | (((4 - k(g)) & 3) << K_SHIFT);
        }
        r
    }

    /// `g^e` for any integer exponent; every element has order dividing 4.
    pub fn pow(g: u64, e: i64) -> u64 {
        let e = e.rem_euclid(4);
        let mut r = 0;
        for _ in 0..e {
            r = mul(r, g);
        }
        r
    }
}

/// An element of H in packed normal form, tagged with its `m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HElem {
    bits: u64,
    m: u8,
}

impl HElem {
    pub(crate) fn from_bits(bits: u64, m: u32) -> HElem {
        debug_assert!(bits >> (m + 6) == 0);
        HElem { bits, m: m as u8 }
    }

    pub fn m(self) -> u32 {
        u32::from(self.m)
    }

    /// Exponent of `a`, in `0..4`.
    pub fn i(self) -> u32 {
        packed::i(self.bits) as u32
    }

    /// Exponent of `b`, in `0..2`.
    pub fn j(self) -> u32 {
        packed::j(self.bits) as u32
    }

    pub fn k(self) -> u32 {
        packed::k(self.bits) as u32
    }

    pub fn l(self) -> u32 {
        packed::l(self.bits) as u32
    }

    /// The `E`-component as an `m`-bit vector: bit `t-1` is the exponent of `e_t`.
    pub fn eps(self) -> u64 {
        packed::eps(self.bits)
    }

    pub fn encode(self) -> u64 {
        self.bits
    }

    pub fn is_identity(self) -> bool {
        self.bits == 0
    }

    pub fn checked_mul(self, rhs: HElem) -> Result<HElem> {
        if self.m != rhs.m {
            return Err(Error::MismatchedM {
                left: self.m(),
                right: rhs.m(),
            });
        }
        Ok(HElem {
            bits: packed::mul(self.bits, rhs.bits),
            m: self.m,
        })
    }

    pub fn inv(self) -> HElem {
        HElem {
            bits: packed::inv(self.bits),
            m: self.m,
        }
    }

    pub fn pow(self, e: i64) -> HElem {
        HElem {
            bits: packed::pow(self.bits, e),
            m: self.m,
        }
    }
}

/// Panics when the operands come from different `m`; use [`HElem::mul`] to
/// get an error instead.
impl std::ops::Mul for HElem {
    type Output = HElem;

    fn mul(self, rhs: HElem) -> HElem {
        match self.checked_mul(rhs) {
            Ok(p) => p,
            Err(e) => panic!("{e}"),
        }
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut power = |name: &str, e: u32| match e {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}^{e}")),
        };
        power("a", self.i());
        power("b", self.j());
        power("c", self.k());
        power("d", self.l());
        let eps = self.eps();
        for t in 0..self.m() {
            if eps >> t & 1 == 1 {
                parts.push(format!("e{}", t + 1));
            }
        }
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HElem({self}; m={})", self.m)
    }
}

/// A subgroup of H given by generators; its element set is computed on first use.
#[derive(Clone, Debug)]
pub struct Subgroup {
    generators: Vec<HElem>,
    n: usize,
    elements: OnceLock<FixedBitSet>,
}

impl Subgroup {
    pub fn generators(&self) -> &[HElem] {
        &self.generators
    }

    pub fn elements(&self) -> &FixedBitSet {
        self.elements
            .get_or_init(|| closure_bits(self.n, self.generators.iter().map(|g| g.bits)))
    }

    pub fn len(&self) -> usize {
        self.elements().count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, g: HElem) -> bool {
        self.elements().contains(g.bits as usize)
    }
}

/// A left coset `rep · S`.
#[derive(Clone, Debug)]
pub struct Coset {
    pub rep: HElem,
    pub subgroup: Subgroup,
}

impl Coset {
    pub fn elements(&self) -> FixedBitSet {
        let sub = self.subgroup.elements();
        let mut out = FixedBitSet::with_capacity(sub.len());
        for s in sub.ones() {
            out.insert(packed::mul(self.rep.bits, s as u64) as usize);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = HElem> + '_ {
        let m = self.rep.m();
        self.subgroup
            .elements()
            .ones()
            .map(move |s| HElem::from_bits(packed::mul(self.rep.bits, s as u64), m))
    }
}

/// Names of the subgroups that the lemma checks refer to.
pub mod names {
    pub const K: &str = "K";
    pub const E: &str = "E";
    pub const V: &str = "V";
    pub const C2_E: &str = "<c^2,E>";
    pub const C_D_E: &str = "<c,d,E>";
    pub const AB_C2_CD_E: &str = "<ab,c^2,cd,E>";
    pub const AB_C_D_E: &str = "<ab,c,d,E>";
    pub const A_B_C2_CD_E: &str = "<a,b,c^2,cd,E>";
    pub const ABCD_E: &str = "abcdE";
    pub const CD_E: &str = "cdE";
}

/// `m` together with every constant derived from it.
#[derive(Clone, Debug)]
pub struct GroupParams {
    m: u32,
    n: usize,
    f: HElem,
    emm: HElem,
    subgroups: BTreeMap<&'static str, Subgroup>,
    cosets: BTreeMap<&'static str, Coset>,
}

impl GroupParams {
    pub fn new(m: u32) -> Result<GroupParams> {
        if m == 0 || m > MAX_M {
            return Err(Error::Param(format!("m must lie in 1..={MAX_M}, got {m}")));
        }
        let n = 1usize << (m + 6);
        let el = |bits| HElem::from_bits(bits, m);
        let e = |t: u32| el(1 << (packed::EPS_SHIFT + t - 1));
        let (a, b, c, d) = (el(1), el(4), el(8), el(32));
        let all_e: Vec<HElem> = (1..=m).map(e).collect();

        let mut f = a * b;
        for i in 1..=m.div_ceil(2) {
            f = f * e(2 * i - 1);
        }
        let emm = if m % 2 == 1 { e(m) } else { el(0) };

        let sub = |gens: Vec<HElem>| Subgroup {
            generators: gens,
            n,
            elements: OnceLock::new(),
        };
        let with_e = |mut gens: Vec<HElem>| {
            gens.extend(all_e.iter().copied());
            sub(gens)
        };

        let mut subgroups = BTreeMap::new();
        subgroups.insert(names::K, with_e(vec![a.pow(2), b, c, d]));
        subgroups.insert(names::E, with_e(vec![]));
        subgroups.insert(names::V, sub((1..=2 * (m / 2)).map(e).collect()));
        subgroups.insert(names::C2_E, with_e(vec![c.pow(2)]));
        subgroups.insert(names::C_D_E, with_e(vec![c, d]));
        subgroups.insert(names::AB_C2_CD_E, with_e(vec![a * b, c.pow(2), c * d]));
        subgroups.insert(names::AB_C_D_E, with_e(vec![a * b, c, d]));
        subgroups.insert(names::A_B_C2_CD_E, with_e(vec![a, b, c.pow(2), c * d]));

        let mut cosets = BTreeMap::new();
        cosets.insert(
            names::ABCD_E,
            Coset {
                rep: a * b * c * d,
                subgroup: subgroups[names::E].clone(),
            },
        );
        cosets.insert(
            names::CD_E,
            Coset {
                rep: c * d,
                subgroup: subgroups[names::E].clone(),
            },
        );

        Ok(GroupParams {
            m,
            n,
            f,
            emm,
            subgroups,
            cosets,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of points, `|H| = 2^(m+6)`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `f = a b e_1 e_3 … e_{2⌈m/2⌉-1}`.
    pub fn f(&self) -> HElem {
        self.f
    }

    /// `e_m^m`: `e_m` for odd `m`, the identity for even `m`.
    pub fn emm(&self) -> HElem {
        self.emm
    }

    pub fn identity(&self) -> HElem {
        self.elem(0)
    }

    pub fn a(&self) -> HElem {
        self.elem(1)
    }

    pub fn b(&self) -> HElem {
        self.elem(4)
    }

    pub fn c(&self) -> HElem {
        self.elem(8)
    }

    pub fn d(&self) -> HElem {
        self.elem(32)
    }

    /// `e_t`, with the convention `e_t = 1` for `t ≤ 0`.
    pub fn e(&self, t: i64) -> Result<HElem> {
        if t <= 0 {
            return Ok(self.identity());
        }
        if t > i64::from(self.m) {
            return Err(Error::Param(format!(
                "e{t} does not exist for m = {}",
                self.m
            )));
        }
        Ok(self.elem(1 << (packed::EPS_SHIFT as i64 + t - 1)))
    }

    /// Builds `a^i b^j c^k d^l ∏ e_t^{eps_t}`; exponents are reduced.
    pub fn element(&self, i: i64, j: i64, k: i64, l: i64, eps: u64) -> Result<HElem> {
        if eps >> self.m != 0 {
            return Err(Error::Param(format!(
                "eps vector {eps:#b} has bits beyond m = {}",
                self.m
            )));
        }
        Ok(self.elem(packed::pack(
            i.rem_euclid(4) as u64,
            j.rem_euclid(2) as u64,
            k.rem_euclid(4) as u64,
            l.rem_euclid(2) as u64,
            eps,
        )))
    }

    pub(crate) fn elem(&self, bits: u64) -> HElem {
        HElem::from_bits(bits, self.m)
    }

    pub fn decode(&self, index: u64) -> Result<HElem> {
        if index >= self.n as u64 {
            return Err(Error::IndexOutOfRange {
                index,
                order: self.n as u64,
            });
        }
        Ok(self.elem(index))
    }

    pub fn encode(&self, g: HElem) -> Result<u64> {
        self.check(g)?;
        Ok(g.encode())
    }

    pub fn check(&self, g: HElem) -> Result<()> {
        if g.m() != self.m {
            return Err(Error::MismatchedM {
                left: self.m,
                right: g.m(),
            });
        }
        Ok(())
    }

    pub fn elements(&self) -> impl Iterator<Item = HElem> + '_ {
        (0..self.n as u64).map(|b| self.elem(b))
    }

    /// Parses `1` or a `*`-separated product of `a`, `b`, `c`, `d`, `e<t>`
    /// factors, each with an optional `^<int>`, multiplied left to right.
    pub fn parse(&self, text: &str) -> Result<HElem> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::parse(text, "empty element"));
        }
        if trimmed == "1" {
            return Ok(self.identity());
        }
        let mut acc = self.identity();
        for factor in trimmed.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((name, exp)) => {
                    let exp: i64 = exp.trim().parse().map_err(|_| {
                        Error::parse(text, format!("malformed exponent in {factor:?}"))
                    })?;
                    (name.trim(), exp)
                }
                None => (factor, 1),
            };
            let base = match name {
                "a" => self.a(),
                "b" => self.b(),
                "c" => self.c(),
                "d" => self.d(),
                "1" => self.identity(),
                _ => {
                    let t = name
                        .strip_prefix('e')
                        .and_then(|t| t.parse::<i64>().ok())
                        .ok_or_else(|| Error::parse(text, format!("unknown generator {name:?}")))?;
                    if t < 1 || t > i64::from(self.m) {
                        return Err(Error::parse(
                            text,
                            format!("e{t} is outside e1..e{}", self.m),
                        ));
                    }
                    self.e(t)?
                }
            };
            acc = acc * base.pow(exp);
        }
        Ok(acc)
    }

    /// The subgroup generated by `gens`, always containing the identity.
    pub fn closure(&self, gens: &[HElem]) -> Result<Subgroup> {
        for &g in gens {
            self.check(g)?;
        }
        Ok(Subgroup {
            generators: gens.to_vec(),
            n: self.n,
            elements: OnceLock::new(),
        })
    }

    pub fn subgroup(&self, name: &str) -> Option<&Subgroup> {
        self.subgroups.get(name)
    }

    pub fn named_subgroups(&self) -> &BTreeMap<&'static str, Subgroup> {
        &self.subgroups
    }

    pub fn coset(&self, name: &str) -> Option<&Coset> {
        self.cosets.get(name)
    }

    /// Membership in `K = ⟨a², b, c, d, E⟩`, i.e. an even `a`-exponent.
    pub fn in_k(&self, g: HElem) -> bool {
        g.i().is_multiple_of(2)
    }

    /// Projection of `g` onto `V = ⟨e_1, …, e_{2⌊m/2⌋}⟩`.
    pub fn project_v(&self, g: HElem) -> HElem {
        let width = 2 * (self.m / 2);
        let mask = (1u64 << width) - 1;
        self.elem((g.eps() & mask) << packed::EPS_SHIFT)
    }
}

/// Breadth-first closure of `{1}` under right multiplication by `gens`.
fn closure_bits(n: usize, gens: impl Iterator<Item = u64>) -> FixedBitSet {
    let gens: Vec<u64> = gens.filter(|&g| g != 0).collect();
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(0);
    let mut queue = vec![0u64];
    let mut head = 0;
    while head < queue.len() {
        let g = queue[head];
        head += 1;
        for &s in &gens {
            let h = packed::mul(g, s);
            if !seen.put(h as usize) {
                queue.push(h);
            }
        }
    }
    seen
}
