//! One executable check per computational lemma. Each check returns a
//! [`LemmaReport`] with exact counts; a failing report always names the
//! first counterexample found, scanning points in index order.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::action::{words, ActionWord, Actions, Atom};
use crate::cayley::{self, alternating_cycle_words, ConnectionSet};
use crate::error::{Error, Result};
use crate::group::{names, HElem};
use crate::perm::{PermSet, Sign};
use crate::permgroup::{
    certify_alternating, factorial, orbits_by, CertifyConfig, CertifyMethod, OrbitPartition,
    Verdict,
};

pub const LEMMA_IDS: [&str; 18] = [
    "orders",
    "alt-membership",
    "x-inverse",
    "ay-formula",
    "z-involution",
    "yz-tables",
    "fix-xyxz",
    "fix-intersections",
    "word-set-intersection",
    "mu-projection",
    "orbit-cover",
    "no-stable-subset",
    "subgroup-rigidity",
    "double-coset",
    "connection-distinct",
    "generation",
    "nonnormal",
    "prop3-cases",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma_id: &'static str,
    pub m: u32,
    pub status: Status,
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Options shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// How `generation` certifies `⟨xy, xz⟩`. With [`CertifyMethod::Bsgs`]
    /// the check is skipped when the degree exceeds the chain limit.
    pub generation: CertifyConfig,
    /// Random right multiplications whose parity `alt-membership` checks.
    pub random_translations: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            generation: CertifyConfig::default(),
            random_translations: 100,
            seed: 1,
        }
    }
}

/// Integers above 2^53 become decimal strings.
pub fn json_uint(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) if x <= 1 << 53 => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

struct Check {
    id: &'static str,
    m: u32,
    start: Instant,
    data: BTreeMap<String, Value>,
    witness: Option<String>,
    skipped: bool,
    method: Option<String>,
}

impl Check {
    fn new(id: &'static str, actions: &Actions) -> Check {
        Check {
            id,
            m: actions.m(),
            start: Instant::now(),
            data: BTreeMap::new(),
            witness: None,
            skipped: false,
            method: None,
        }
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.data.insert(key.to_string(), v.into());
    }

    fn fail(&mut self, witness: impl Into<String>) {
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        }
    }

    fn expect<T: PartialEq + std::fmt::Debug + Into<Value> + Clone>(
        &mut self,
        key: &str,
        found: T,
        expected: T,
    ) {
        self.put(key, found.clone());
        if found != expected {
            self.fail(format!("{key} = {found:?}, expected {expected:?}"));
        }
    }

    fn skip(&mut self, reason: impl Into<String>) {
        self.skipped = true;
        self.put("skip_reason", reason.into());
    }

    fn finish(self) -> LemmaReport {
        let status = if self.witness.is_some() {
            Status::Fail
        } else if self.skipped {
            Status::Skipped
        } else {
            Status::Pass
        };
        LemmaReport {
            lemma_id: self.id,
            m: self.m,
            status,
            data: self.data,
            witness: self.witness,
            method: self.method,
            elapsed: self.start.elapsed(),
        }
    }
}

fn x_inv() -> ActionWord {
    ActionWord::new(vec![Atom::XInv])
}

fn xyxz() -> ActionWord {
    words::xy().then(&words::xz())
}

fn xzxy() -> ActionWord {
    words::xz().then(&words::xy())
}

/// Checks that `w` has order `expected`; the witness is the first point
/// not fixed by `w^expected`, or the order itself if it is a proper divisor.
fn expect_order(check: &mut Check, actions: &Actions, name: &str, w: &ActionWord, expected: u32) {
    let order = actions.order(w);
    check.put(&format!("order_{name}"), json_uint(&order));
    if order == BigUint::from(expected) {
        return;
    }
    let power = w.pow(expected as usize);
    match (0..actions.n() as u64).find(|&g| actions.eval_raw(&power, g) != g) {
        Some(g) => check.fail(format!(
            "{} is moved by ({name})^{expected}",
            actions.params().elem(g)
        )),
        None => check.fail(format!("|{name}| = {order}, expected {expected}")),
    }
}

fn expect_even(check: &mut Check, actions: &Actions, name: &str, w: &ActionWord) {
    let sign = actions.parity(w);
    check.put(&format!("sign_{name}"), i64::from(sign.as_i8()));
    if sign == Sign::Odd {
        check.fail(format!("{name} is an odd permutation"));
    }
}

/// First element `g` of `domain` (index order) with `lhs(g) != rhs(g)`.
fn first_mismatch(
    domain: impl Iterator<Item = HElem>,
    lhs: impl Fn(HElem) -> HElem,
    rhs: impl Fn(HElem) -> HElem,
) -> Option<(HElem, HElem, HElem)> {
    domain.map(|g| (g, lhs(g), rhs(g))).find(|(_, l, r)| l != r)
}

pub fn check_orders(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("orders", actions);
    for (name, w, order) in [
        ("x", words::x(), 4),
        ("y", words::y(), 2),
        ("z", words::z(), 2),
        ("yz", words::yz(), 6),
    ] {
        expect_order(&mut check, actions, name, &w, order);
    }
    for (name, w) in [("x", words::x()), ("y", words::y()), ("z", words::z())] {
        expect_even(&mut check, actions, name, &w);
    }
    let x_square_moves =
        (0..actions.n() as u64).any(|g| actions.eval_raw(&words::x().pow(2), g) != g);
    check.put("x_squared_nontrivial", x_square_moves);
    if !x_square_moves {
        check.fail("x^2 is the identity");
    }
    x_inverse_points(&mut check, actions);
    check.finish()
}

fn x_inverse_points(check: &mut Check, actions: &Actions) {
    let there_and_back = words::x().then(&x_inv());
    let back_and_there = x_inv().then(&words::x());
    let bad = (0..actions.n() as u64).find(|&g| {
        actions.eval_raw(&there_and_back, g) != g || actions.eval_raw(&back_and_there, g) != g
    });
    check.put("x_inverse_all_points", bad.is_none());
    if let Some(g) = bad {
        check.fail(format!("x and X disagree at {}", actions.params().elem(g)));
    }
}

pub fn check_alt_membership(actions: &Actions, config: &SuiteConfig) -> LemmaReport {
    let mut check = Check::new("alt-membership", actions);
    let p = actions.params();
    for (name, w) in [("x", words::x()), ("y", words::y()), ("z", words::z())] {
        expect_even(&mut check, actions, name, &w);
        let image = actions.eval_raw(&w, 0);
        if image != 0 {
            check.fail(format!("{name} maps 1 to {}", p.elem(image)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut odd = 0;
    for _ in 0..config.random_translations {
        let h = p.elem(rng.random_range(0..actions.n() as u64));
        let w = ActionWord::new(vec![Atom::RightMul(h)]);
        if actions.parity(&w) == Sign::Odd {
            odd += 1;
            check.fail(format!("R({h}) is odd"));
        }
    }
    check.put("random_translations", config.random_translations as u64);
    check.put("odd_translations", odd as u64);
    check.finish()
}

pub fn check_x_inverse(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("x-inverse", actions);
    let p = actions.params();
    let m = i64::from(p.m());
    let e = |t: i64| p.e(t).expect("index within 1..=m");
    let mut table: Vec<(String, HElem, HElem)> = vec![
        ("a".into(), p.a(), p.c().pow(3)),
        ("b".into(), p.b(), p.c() * p.d()),
        ("c".into(), p.c(), p.a()),
        ("d".into(), p.d(), p.b()),
    ];
    for i in 1..=m / 2 {
        table.push((format!("e{}", 2 * i - 1), e(2 * i - 1), e(2 * i - 1)));
        table.push((
            format!("e{}", 2 * i),
            e(2 * i),
            p.c().pow(2) * e(2 * i - 1) * e(2 * i),
        ));
    }
    table.push(("e_m^m".into(), p.emm(), p.c().pow(2 * m) * p.emm()));
    for (name, g, expected) in &table {
        let found = actions.apply_x_inv(*g);
        if found != *expected {
            check.fail(format!("{name} maps to {found}, expected {expected}"));
        }
    }
    check.put("generator_images_checked", table.len() as u64);
    x_inverse_points(&mut check, actions);
    check.finish()
}

pub fn check_ay_formula(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("ay-formula", actions);
    let p = actions.params();
    let m = i64::from(p.m());
    let half = m / 2;
    let e = |t: i64| p.e(t).expect("index at most m");
    let tail = e(2 * half - 1) * e(2 * half) * p.emm();
    let prefix = p.a().pow(3) * p.b() * p.c() * p.d();
    let k = p.subgroup(names::K).expect("K is named");
    let bad = first_mismatch(
        k.elements().ones().map(|i| p.elem(i as u64)),
        |k| actions.apply_y(p.a() * k),
        |k| prefix * actions.apply_y(k) * tail,
    );
    check.put("cases", k.len() as u64);
    if let Some((k, l, r)) = bad {
        check.fail(format!("k = {k}: (ak)^y = {l}, formula gives {r}"));
    }
    check.finish()
}

/// `(P·g)^w = Q·ĝ·T` for every `g ∈ ⟨c,d,E⟩`, where `ĝ` is `g^y` or `g`.
struct CosetIdentity {
    p: HElem,
    q: HElem,
    t: HElem,
    uses_y: bool,
}

fn check_identities(
    check: &mut Check,
    actions: &Actions,
    w: &ActionWord,
    label: &str,
    table: &[CosetIdentity],
) {
    let p = actions.params();
    let domain = p.subgroup(names::C_D_E).expect("named subgroup");
    let mut checked = 0u64;
    for ident in table {
        let bad = first_mismatch(
            domain.elements().ones().map(|i| p.elem(i as u64)),
            |g| actions.eval(w, ident.p * g).expect("same group"),
            |g| {
                let middle = if ident.uses_y { actions.apply_y(g) } else { g };
                ident.q * middle * ident.t
            },
        );
        checked += domain.len() as u64;
        if let Some((g, l, r)) = bad {
            check.fail(format!(
                "g = {g}: ({}*g)^{label} = {l}, expected {r}",
                ident.p
            ));
        }
    }
    check.put(&format!("{label}_identities"), table.len() as u64);
    check.put(&format!("{label}_points"), checked);
}

pub fn check_z_tables(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("z-involution", actions);
    let p = actions.params();
    let (a2, b, cd, f) = (p.a().pow(2), p.b(), p.c() * p.d(), p.f());
    let cde = cd * p.emm();
    let one = p.identity();
    let row = |pp: HElem, q: HElem, t: HElem| CosetIdentity {
        p: pp,
        q,
        t,
        uses_y: true,
    };
    let table = [
        row(one, cd, cd),
        row(b, b * cd, cd),
        row(a2, a2 * b * cd, cd),
        row(a2 * b, a2 * cd, cd),
        row(f, f, cde),
        row(f * b, f * b, cde),
        row(f * a2, f * a2 * b, cde),
        row(f * a2 * b, f * a2, cde),
    ];
    check_identities(&mut check, actions, &words::z(), "z", &table);
    expect_order(&mut check, actions, "z", &words::z(), 2);
    expect_even(&mut check, actions, "z", &words::z());
    let fixes_one = actions.eval_raw(&words::z(), 0) == 0;
    check.put("z_fixes_identity", fixes_one);
    if !fixes_one {
        check.fail("z moves 1");
    }
    check.finish()
}

fn fix_subgroup_equal(
    check: &mut Check,
    actions: &Actions,
    power: usize,
    name: &str,
    size_exp: u32,
) {
    let p = actions.params();
    let fix = actions.fixed_points(&words::yz().pow(power));
    let expected = p.subgroup(name).expect("named subgroup").elements();
    let key = format!("fix_yz{power}");
    check.put(&format!("{key}_size"), fix.count_ones(..) as u64);
    if expected.count_ones(..) != 1usize << size_exp {
        check.fail(format!("|{name}| is not 2^{size_exp}"));
    }
    if let Some(g) = fix.symmetric_difference(expected).next() {
        check.fail(format!(
            "Fix((yz)^{power}) and {name} differ at {}",
            p.elem(g as u64)
        ));
    }
}

pub fn check_yz_tables(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("yz-tables", actions);
    let p = actions.params();
    let m = p.m();
    let (a, a2, b, cd, f) = (p.a(), p.a().pow(2), p.b(), p.c() * p.d(), p.f());
    let one = p.identity();
    let row = |pp: HElem, q: HElem| CosetIdentity {
        p: pp,
        q,
        t: cd,
        uses_y: false,
    };
    let table = [
        row(one, cd),
        row(b, a2 * b * cd),
        row(a2, b * cd),
        row(a2 * b, a2 * cd),
        row(f, f * cd),
        row(f * b, f * a2 * b * cd),
        row(f * a2, f * b * cd),
        row(f * a2 * b, f * a2 * cd),
        row(a, a.pow(3) * cd),
        row(a * b, a * b * cd),
        row(a.pow(3), a.pow(3) * b * cd),
        row(a.pow(3) * b, a * cd),
    ];
    check_identities(&mut check, actions, &words::yz(), "yz", &table);
    expect_order(&mut check, actions, "yz", &words::yz(), 6);
    fix_subgroup_equal(&mut check, actions, 1, names::AB_C2_CD_E, m + 3);
    fix_subgroup_equal(&mut check, actions, 2, names::AB_C_D_E, m + 4);
    fix_subgroup_equal(&mut check, actions, 3, names::A_B_C2_CD_E, m + 5);
    let ratio_half = 2 * actions.count_fixed_points(&words::yz().pow(3)) == actions.n();
    check.put("fix_yz3_ratio_is_half", ratio_half);
    if !ratio_half {
        check.fail("|Fix((yz)^3)|/|H| is not 1/2");
    }
    check.finish()
}

pub fn check_fix_xyxz(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("fix-xyxz", actions);
    let once = actions.count_fixed_points(&xyxz());
    let twice = actions.count_fixed_points(&xyxz().pow(2));
    check.put("fix_xyxz", once as u64);
    check.put("fix_xyxz2", twice as u64);
    if actions.m().is_multiple_of(2) {
        check.expect("fix_xyxz", once as u64, 3);
    } else {
        check.expect("fix_xyxz2", twice as u64, 3);
    }
    check.finish()
}

/// Cardinalities appearing in the fixed-point intersection lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntersectionTable {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// `"d"`, `"e"`, `"f"` or `"g"` according to `m mod 4`.
    pub pair_item: &'static str,
    pub pair: (usize, usize),
}

fn intersection_size(a: &FixedBitSet, b: &FixedBitSet) -> usize {
    a.intersection(b).count()
}

pub fn intersection_table(actions: &Actions) -> IntersectionTable {
    let fix_yz = actions.fixed_points(&words::yz());
    let fix_zy = actions.fixed_points(&words::zy());
    let image = |s: &FixedBitSet, w: ActionWord| actions.set_image(s, &w);
    let a = intersection_size(
        &fix_yz,
        &image(
            &fix_yz,
            ActionWord::new(vec![Atom::X, Atom::Y, Atom::Z, Atom::XInv]),
        ),
    );
    let yz_xinv = image(&fix_yz, x_inv());
    let b = intersection_size(&yz_xinv, &image(&fix_yz, x_inv().then(&words::yz())));
    let c = intersection_size(&yz_xinv, &image(&fix_yz, x_inv().then(&words::zy())));
    let m = actions.m();
    let (xy_inv, xz_inv) = (words::xy_inv(), words::xz_inv());
    let pair = if m.is_multiple_of(2) {
        let first = intersection_size(
            &image(&fix_yz, words::xz()),
            &image(&actions.fixed_points(&xyxz()), xy_inv.then(&xz_inv)),
        );
        let second = intersection_size(
            &image(&fix_zy, words::xy()),
            &image(&actions.fixed_points(&xzxy()), xz_inv.then(&xy_inv)),
        );
        (first, second)
    } else {
        let first = intersection_size(
            &fix_yz,
            &image(
                &actions.fixed_points(&xyxz().pow(2)),
                words::xy().pow(2).then(&words::xz().pow(2)),
            ),
        );
        let second = intersection_size(
            &fix_zy,
            &image(
                &actions.fixed_points(&xzxy().pow(2)),
                words::xz().pow(2).then(&words::xy().pow(2)),
            ),
        );
        (first, second)
    };
    let pair_item = ["d", "e", "f", "g"][(m % 4) as usize];
    IntersectionTable {
        a,
        b,
        c,
        pair_item,
        pair,
    }
}

/// The pair the lemma asserts for `m mod 4`.
pub fn expected_pair(m: u32) -> (usize, usize) {
    match m % 4 {
        0 | 1 => (1, 2),
        _ => (2, 1),
    }
}

pub fn check_fix_intersections(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("fix-intersections", actions);
    let m = actions.m();
    let t = intersection_table(actions);
    check.expect("item_a", t.a as u64, 1 << (m + 3));
    check.expect("item_b", t.b as u64, 1 << (m + 1));
    check.expect("item_c", t.c as u64, 1 << (m + 1));
    check.put("pair_item", t.pair_item);
    let (e1, e2) = expected_pair(m);
    check.expect("pair_first", t.pair.0 as u64, e1 as u64);
    check.expect("pair_second", t.pair.1 as u64, e2 as u64);
    check.finish()
}

pub fn check_word_set_intersection(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("word-set-intersection", actions);
    if !actions.is_materializable() {
        check.skip(format!(
            "{} points exceed the materialization budget",
            actions.n()
        ));
        return check.finish();
    }
    let (first, second) = alternating_cycle_words();
    let materialize = |ws: &[ActionWord]| -> PermSet {
        ws.iter()
            .map(|w| actions.materialize(w).expect("within budget"))
            .collect()
    };
    let a = materialize(&first);
    let b = materialize(&second);
    check.expect("size_first", a.len() as u64, 12);
    check.expect("size_second", b.len() as u64, 12);
    let common: Vec<usize> = (0..a.len())
        .filter(|&i| b.contains(&a.items()[i]))
        .collect();
    check.put("common", common.len() as u64);
    for i in common {
        if !a.items()[i].is_identity() {
            let word = first
                .iter()
                .find(|w| actions.materialize(w).expect("within budget") == a.items()[i])
                .expect("item came from a word");
            check.fail(format!("{word} lies in both families"));
        }
    }
    if !a.items().iter().any(|p| p.is_identity()) || !b.items().iter().any(|p| p.is_identity()) {
        check.fail("identity missing from a family");
    }
    check.finish()
}

/// Orbits of the group generated by words, computed by evaluation.
pub fn word_orbits(actions: &Actions, gens: &[ActionWord]) -> OrbitPartition {
    orbits_by(actions.n(), gens.len(), |i, p| {
        actions.eval_raw(&gens[i], u64::from(p)) as u32
    })
}

fn xy_xz_orbits(actions: &Actions) -> OrbitPartition {
    word_orbits(actions, &[words::xy(), words::xz()])
}

pub fn check_mu_projection(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("mu-projection", actions);
    let p = actions.params();
    let orbits = xy_xz_orbits(actions);
    let abcd_e = p.coset(names::ABCD_E).expect("named coset").elements();
    let v_size = p.subgroup(names::V).expect("named subgroup").len();
    let mut min_image = usize::MAX;
    let cd_e = p.coset(names::CD_E).expect("named coset");
    let mut checked = 0u64;
    for g in cd_e.iter() {
        let start = p.a() * p.b() * g;
        let id = orbits.orbit_id(start.encode() as u32);
        let mut image = FixedBitSet::with_capacity(actions.n());
        for h in abcd_e.ones() {
            if orbits.orbit_id(h as u32) == id {
                image.insert(p.project_v(p.elem(h as u64)).encode() as usize);
            }
        }
        let size = image.count_ones(..);
        min_image = min_image.min(size);
        checked += 1;
        if size != v_size {
            check.fail(format!(
                "g = {g}: projection hits {size} of {v_size} elements of V"
            ));
        }
    }
    check.put("cases", checked);
    check.put("v_size", v_size as u64);
    check.put("min_projection_size", min_image as u64);
    check.finish()
}

pub fn check_orbit_cover(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("orbit-cover", actions);
    let p = actions.params();
    let orbits = xy_xz_orbits(actions);
    let abcd_e = p.coset(names::ABCD_E).expect("named coset").elements();
    let mut hit = vec![false; orbits.num_orbits()];
    for h in abcd_e.ones() {
        hit[orbits.orbit_id(h as u32)] = true;
    }
    let c2_e = p.subgroup(names::C2_E).expect("named subgroup").elements();
    let covered = (0..actions.n() as u32)
        .filter(|&g| hit[orbits.orbit_id(g)])
        .count();
    check.put("covered", covered as u64);
    check.put("required", (actions.n() - c2_e.count_ones(..)) as u64);
    if let Some(g) =
        (0..actions.n() as u32).find(|&g| !c2_e.contains(g as usize) && !hit[orbits.orbit_id(g)])
    {
        check.fail(format!(
            "{} is not reached from abcdE",
            p.elem(u64::from(g))
        ));
    }
    check.finish()
}

/// `⟨w⟩` leaves no nonempty subset of `⟨c²,E⟩∖{1}` invariant, i.e. no
/// `⟨w⟩`-orbit lies inside it.
pub fn no_stable_subset_with(actions: &Actions, w: &ActionWord) -> LemmaReport {
    let mut check = Check::new("no-stable-subset", actions);
    let p = actions.params();
    let orbits = word_orbits(actions, std::slice::from_ref(w));
    let set = p.subgroup(names::C2_E).expect("named subgroup").elements();
    let mut leaves = vec![false; orbits.num_orbits()];
    for g in 0..actions.n() as u32 {
        if !set.contains(g as usize) || g == 0 {
            leaves[orbits.orbit_id(g)] = true;
        }
    }
    let members: Vec<u32> = set.ones().filter(|&g| g != 0).map(|g| g as u32).collect();
    let mut orbits_met = FixedBitSet::with_capacity(orbits.num_orbits());
    for &g in &members {
        orbits_met.insert(orbits.orbit_id(g));
    }
    check.put("orbits_meeting_set", orbits_met.count_ones(..) as u64);
    if let Some(&g) = members.iter().find(|&&g| !leaves[orbits.orbit_id(g)]) {
        check.fail(format!(
            "the <{w}>-orbit of {} stays inside <c^2,E>",
            p.elem(u64::from(g))
        ));
    }
    check.finish()
}

pub fn check_no_stable_subset(actions: &Actions) -> LemmaReport {
    no_stable_subset_with(actions, &words::xy())
}

/// Largest number of nontrivial orbits whose unions are enumerated.
const MAX_RIGIDITY_ORBITS: usize = 20;

/// Every union of `⟨gens⟩`-orbits that contains 1 and is a subgroup of H is
/// `{1}` or `H`.
pub fn subgroup_rigidity_with(actions: &Actions, gens: &[ActionWord]) -> Result<LemmaReport> {
    if gens.is_empty() {
        return Err(Error::Precondition(
            "subgroup rigidity needs the generators xy and xz; with none every subgroup is invariant".into(),
        ));
    }
    let mut check = Check::new("subgroup-rigidity", actions);
    let p = actions.params();
    let orbits = word_orbits(actions, gens);
    let members = orbits.orbits();
    let identity_orbit = orbits.orbit_id(0);
    let others: Vec<usize> = (0..members.len())
        .filter(|&i| i != identity_orbit)
        .collect();
    check.put("orbits", members.len() as u64);
    if others.len() > MAX_RIGIDITY_ORBITS {
        check.fail(format!(
            "{} orbits; too many unions to enumerate",
            members.len()
        ));
        return Ok(check.finish());
    }
    let mut subgroup_sizes = Vec::new();
    for mask in 0u64..(1 << others.len()) {
        let mut union = FixedBitSet::with_capacity(actions.n());
        union.extend(members[identity_orbit].iter().map(|&g| g as usize));
        for (bit, &o) in others.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                union.extend(members[o].iter().map(|&g| g as usize));
            }
        }
        if is_subgroup(actions, &union) {
            let size = union.count_ones(..);
            subgroup_sizes.push(size as u64);
            if size != 1 && size != actions.n() {
                let g = union.ones().find(|&g| g != 0).unwrap_or(0);
                check.fail(format!(
                    "a proper invariant subgroup of order {size} contains {}",
                    p.elem(g as u64)
                ));
            }
        }
    }
    check.put("invariant_subgroup_orders", subgroup_sizes);
    Ok(check.finish())
}

/// Grows `⟨u_1, u_2, …⟩` from elements of `set`, stopping as soon as it
/// leaves `set`.
fn is_subgroup(actions: &Actions, set: &FixedBitSet) -> bool {
    let p = actions.params();
    if !set.contains(0) {
        return false;
    }
    let mut gens = Vec::new();
    let mut current = p.closure(&[]).expect("empty generating set");
    for u in set.ones() {
        if current.elements().contains(u) {
            continue;
        }
        gens.push(p.elem(u as u64));
        current = p.closure(&gens).expect("elements of H");
        if !current.elements().is_subset(set) {
            return false;
        }
    }
    true
}

pub fn check_subgroup_rigidity(actions: &Actions) -> LemmaReport {
    subgroup_rigidity_with(actions, &[words::xy(), words::xz()]).expect("generators supplied")
}

pub fn check_double_coset(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("double-coset", actions);
    let n = actions.n() as u64;
    match cayley::double_coset_decomposition(actions) {
        Ok(r) => {
            check.method = Some(r.method.to_string());
            check.expect("double_coset_size", r.forward_size as u64, 2 * n);
            check.expect("inverse_double_coset_size", r.inverse_size as u64, 2 * n);
            check.expect("equals_xy_xz_cosets", r.forward_matches, true);
            check.expect("inverse_equals_inverse_cosets", r.inverse_matches, true);
            check.expect("cosets_disjoint", r.cosets_disjoint, true);
            check.expect("union_size", r.union_size as u64, 4 * n);
            if r.spot_checks > 0 {
                check.put("spot_checks", r.spot_checks as u64);
            }
        }
        Err(e) => check.skip(e.to_string()),
    }
    check.finish()
}

pub fn check_connection_distinct(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("connection-distinct", actions);
    let p = actions.params();
    let cs = ConnectionSet::new(actions);
    let expected = [p.d(), p.c().pow(2), p.c().pow(2) * p.d(), p.c() * p.d()];
    for (s, (&found, want)) in cs.b_images().iter().zip(expected).enumerate() {
        check.put(&format!("b_under_{}", cs.name(s)), found.to_string());
        if found != want {
            check.fail(format!("b^({}) = {found}, expected {want}", cs.name(s)));
        }
    }
    check.expect("b_images_distinct", cs.b_images_distinct(), true);
    check.expect("fix_identity", cs.fix_identity(actions), true);
    for s in 0..cs.len() {
        let round_trip = cs.word(s).then(cs.word(cs.inverse_of(s)));
        if let Some(g) = (0..actions.n() as u64).find(|&g| actions.eval_raw(&round_trip, g) != g) {
            check.fail(format!(
                "{} and {} are not inverse at {}",
                cs.name(s),
                cs.name(cs.inverse_of(s)),
                p.elem(g)
            ));
        }
    }
    check.finish()
}

pub fn check_generation(actions: &Actions, config: &SuiteConfig) -> LemmaReport {
    let mut check = Check::new("generation", actions);
    let n = actions.n();
    let mut certify = config.generation;
    let within_chain = n <= certify.chain.max_degree;
    if certify.method == CertifyMethod::Bsgs && !within_chain {
        check.skip(format!(
            "{n} points exceed the stabilizer-chain limit of {}; enable the giant test",
            certify.chain.max_degree
        ));
        return check.finish();
    }
    if certify.method == CertifyMethod::Auto {
        certify.method = if within_chain {
            CertifyMethod::Bsgs
        } else {
            CertifyMethod::Jordan
        };
    }
    let gens = match [words::xy(), words::xz()]
        .iter()
        .map(|w| actions.materialize(w))
        .collect::<Result<Vec<_>>>()
    {
        Ok(g) => g,
        Err(e) => {
            check.skip(e.to_string());
            return check.finish();
        }
    };
    match certify_alternating(n, &gens, 0, &certify) {
        Ok(cert) => {
            check.method = Some(cert.method.to_string());
            check.put("detail", cert.detail.clone());
            let expected = factorial(n - 1) / 2u32;
            check.put("expected_order", json_uint(&expected));
            if let Some(order) = &cert.order {
                check.put("order", json_uint(order));
            }
            check.put("alternating", cert.is_alternating());
            match cert.verdict {
                Verdict::Alternating => {}
                Verdict::NotAlternating => check.fail(format!(
                    "<xy,xz> is not the alternating group on H - {{1}}: {}",
                    cert.detail
                )),
                Verdict::Inconclusive => check.skip(cert.detail),
            }
        }
        Err(e @ (Error::OddGenerator { .. } | Error::GeneratorMovesPoint { .. })) => {
            check.fail(e.to_string())
        }
        Err(e) => check.skip(e.to_string()),
    }
    check.finish()
}

pub fn check_nonnormal(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("nonnormal", actions);
    let p = actions.params();
    let set = cayley::nonnormality_witness(actions);
    let k = p.subgroup(names::K).expect("named subgroup").elements();
    check.put("size", set.count_ones(..) as u64);
    check.put(
        "index_in_h",
        (actions.n() / set.count_ones(..).max(1)) as u64,
    );
    if let Some(g) = set.symmetric_difference(k).next() {
        check.fail(format!(
            "the intersection and K differ at {}",
            p.elem(g as u64)
        ));
    }
    check.finish()
}

pub fn check_case_separation(actions: &Actions) -> LemmaReport {
    let mut check = Check::new("prop3-cases", actions);
    let yz = (
        actions.count_fixed_points(&words::yz()),
        actions.count_fixed_points(&words::yz().pow(2)),
    );
    let xyxz_counts = (
        actions.count_fixed_points(&xyxz()),
        actions.count_fixed_points(&xyxz().pow(2)),
    );
    check.put("fix_yz", yz.0 as u64);
    check.put("fix_yz2", yz.1 as u64);
    check.put("fix_xyxz", xyxz_counts.0 as u64);
    check.put("fix_xyxz2", xyxz_counts.1 as u64);
    if yz == xyxz_counts {
        check.fail("(|Fix(yz)|, |Fix((yz)^2)|) equals (|Fix(xyxz)|, |Fix((xyxz)^2)|)");
    }
    // The conjugates of yz met in the case analysis have the same count.
    for (name, w) in [
        ("xy(xz)^-1", words::xy().then(&words::xz_inv())),
        ("(xy)^-1xz", words::xy_inv().then(&words::xz())),
        ("xz(xy)^-1", words::xz().then(&words::xy_inv())),
        ("(xz)^-1xy", words::xz_inv().then(&words::xy())),
    ] {
        let count = actions.count_fixed_points(&w);
        check.put(&format!("fix_{name}"), count as u64);
        if count != yz.0 {
            check.fail(format!(
                "|Fix({name})| = {count} differs from |Fix(yz)| = {}",
                yz.0
            ));
        }
    }
    let t = intersection_table(actions);
    check.put("item_a", t.a as u64);
    check.put("item_b", t.b as u64);
    check.put("item_c", t.c as u64);
    if t.a == t.b || t.a == t.c {
        check.fail(format!(
            "item (a) = {} does not separate items (b) = {}, (c) = {}",
            t.a, t.b, t.c
        ));
    }
    check.put("pair_item", t.pair_item);
    check.put("pair", vec![t.pair.0 as u64, t.pair.1 as u64]);
    if t.pair.0 == t.pair.1 {
        check.fail(format!(
            "item ({}) values coincide: {:?}",
            t.pair_item, t.pair
        ));
    }
    check.finish()
}

pub fn run_lemma(id: &str, actions: &Actions, config: &SuiteConfig) -> Result<LemmaReport> {
    Ok(match id {
        "orders" => check_orders(actions),
        "alt-membership" => check_alt_membership(actions, config),
        "x-inverse" => check_x_inverse(actions),
        "ay-formula" => check_ay_formula(actions),
        "z-involution" => check_z_tables(actions),
        "yz-tables" => check_yz_tables(actions),
        "fix-xyxz" => check_fix_xyxz(actions),
        "fix-intersections" => check_fix_intersections(actions),
        "word-set-intersection" => check_word_set_intersection(actions),
        "mu-projection" => check_mu_projection(actions),
        "orbit-cover" => check_orbit_cover(actions),
        "no-stable-subset" => check_no_stable_subset(actions),
        "subgroup-rigidity" => check_subgroup_rigidity(actions),
        "double-coset" => check_double_coset(actions),
        "connection-distinct" => check_connection_distinct(actions),
        "generation" => check_generation(actions, config),
        "nonnormal" => check_nonnormal(actions),
        "prop3-cases" => check_case_separation(actions),
        other => return Err(Error::UnknownLemma(other.to_string())),
    })
}

/// Validates a selection against [`LEMMA_IDS`]; `"all"` selects every id.
/// The result follows the canonical order.
pub fn resolve_selection<S: AsRef<str>>(selection: &[S]) -> Result<Vec<&'static str>> {
    let mut wanted = Vec::new();
    for s in selection {
        let s = s.as_ref();
        if s == "all" {
            return Ok(LEMMA_IDS.to_vec());
        }
        let id = LEMMA_IDS
            .iter()
            .find(|&&id| id == s)
            .ok_or_else(|| Error::UnknownLemma(s.to_string()))?;
        wanted.push(*id);
    }
    Ok(LEMMA_IDS
        .iter()
        .copied()
        .filter(|id| wanted.contains(id))
        .collect())
}

pub fn run_all<S: AsRef<str>>(
    actions: &Actions,
    selection: &[S],
    config: &SuiteConfig,
) -> Result<Vec<LemmaReport>> {
    resolve_selection(selection)?
        .into_iter()
        .map(|id| run_lemma(id, actions, config))
        .collect()
}
