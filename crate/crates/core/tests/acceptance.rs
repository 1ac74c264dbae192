//! Acceptance gate. Runs every criterion in order, prints one line per
//! criterion and exits nonzero if any fails. Expected values come from
//! test-side computations that do not go through the library's fast paths.

use std::collections::{BTreeSet, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hatcert::action::{words, MutationTarget};
use hatcert::cayley::{self, ConnectionSet, DEFAULT_BALL_BUDGET};
use hatcert::group::names;
use hatcert::lemmas::{self, Status, SuiteConfig};
use hatcert::permgroup::{schreier_sims, SchreierSimsConfig};
use hatcert::{ActionWord, Actions, Atom, GroupParams, HElem, Perm};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDERS_TIME_LIMIT: Duration = Duration::from_secs(5);
const STREAMING_TIME_LIMIT: Duration = Duration::from_secs(5);
const BSGS_M1_TIME_LIMIT: Duration = Duration::from_secs(5 * 60);
const BSGS_M2_TIME_LIMIT: Duration = Duration::from_secs(30 * 60);
const RANDOM_ORACLE_POINTS: usize = 100_000;
const MUTATIONS: usize = 20;

type Criterion = (&'static str, fn() -> String);

fn actions(m: u32) -> Actions {
    Actions::for_m(m).unwrap()
}

fn images(act: &Actions, w: &ActionWord) -> Vec<u64> {
    (0..act.n() as u64).map(|g| act.eval_raw(w, g)).collect()
}

fn cycle_lengths(img: &[u64]) -> Vec<u64> {
    let mut seen = vec![false; img.len()];
    let mut out = Vec::new();
    for s in 0..img.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut p = s;
        while !seen[p] {
            seen[p] = true;
            p = img[p] as usize;
            len += 1;
        }
        out.push(len);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn naive_order(img: &[u64]) -> u64 {
    cycle_lengths(img)
        .into_iter()
        .fold(1, |acc, l| acc / gcd(acc, l) * l)
}

fn naive_is_even(img: &[u64]) -> bool {
    cycle_lengths(img).iter().filter(|&&l| l % 2 == 0).count() % 2 == 0
}

fn half_factorial(n: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for k in 1..=n {
        acc *= k;
    }
    acc / 2u32
}

/// Subgroup generated by `gens`, by breadth-first multiplication.
fn naive_closure(p: &GroupParams, gens: &[HElem]) -> BTreeSet<u64> {
    let mut seen = BTreeSet::from([p.identity().encode()]);
    let mut queue = vec![p.identity()];
    while let Some(g) = queue.pop() {
        for &s in gens {
            let h = g * s;
            if seen.insert(h.encode()) {
                queue.push(h);
            }
        }
    }
    seen
}

fn e_gens(p: &GroupParams) -> Vec<HElem> {
    (1..=i64::from(p.m())).map(|t| p.e(t).unwrap()).collect()
}

fn fix_set(act: &Actions, w: &ActionWord) -> BTreeSet<u64> {
    (0..act.n() as u64)
        .filter(|&g| act.eval_raw(w, g) == g)
        .collect()
}

fn image_set(act: &Actions, s: &BTreeSet<u64>, w: &ActionWord) -> BTreeSet<u64> {
    s.iter().map(|&g| act.eval_raw(w, g)).collect()
}

fn meet(a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> usize {
    a.intersection(b).count()
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

fn run_lemma(act: &Actions, id: &str) -> lemmas::LemmaReport {
    lemmas::run_lemma(id, act, &SuiteConfig::default()).unwrap()
}

fn assert_lemma_passes(act: &Actions, id: &str) -> lemmas::LemmaReport {
    let r = run_lemma(act, id);
    assert_eq!(
        r.status,
        Status::Pass,
        "{id} at m={}: {:?}",
        act.m(),
        r.witness
    );
    r
}

fn orders_and_parities() -> String {
    let mut elapsed = Duration::ZERO;
    for m in 1..=6 {
        let act = actions(m);
        for (w, order) in [
            (words::x(), 4u64),
            (words::y(), 2),
            (words::z(), 2),
            (words::yz(), 6),
        ] {
            let start = Instant::now();
            let found = act.order(&w);
            let even = act.parity(&w) == hatcert::Sign::Even;
            elapsed += start.elapsed();
            let img = images(&act, &w);
            assert_eq!(naive_order(&img), order, "m={m} {w}");
            assert_eq!(found, BigUint::from(order), "m={m} {w}");
            assert_eq!(even, naive_is_even(&img), "m={m} {w}");
            if w.len() == 1 {
                assert!(even, "m={m} {w} is odd");
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(m));
        for _ in 0..100 {
            let h = act
                .params()
                .decode(rng.random_range(0..act.n() as u64))
                .unwrap();
            let w = cayley::right_mul(h);
            let start = Instant::now();
            let even = act.parity(&w) == hatcert::Sign::Even;
            elapsed += start.elapsed();
            assert!(even, "m={m} R({h}) is odd");
            assert!(naive_is_even(&images(&act, &w)));
        }
    }
    assert!(elapsed < ORDERS_TIME_LIMIT, "took {elapsed:?}");
    format!("m=1..6, library time {:.2?}", elapsed)
}

fn fix_set_identities() -> String {
    for m in 1..=4 {
        let act = actions(m);
        let p = act.params();
        let (a, b, c, d) = (p.a(), p.b(), p.c(), p.d());
        let with_e = |mut g: Vec<HElem>| {
            g.extend(e_gens(p));
            g
        };
        let cases = [
            (1, with_e(vec![a * b, c.pow(2), c * d]), m + 3),
            (2, with_e(vec![a * b, c, d]), m + 4),
            (3, with_e(vec![a, b, c.pow(2), c * d]), m + 5),
        ];
        for (power, gens, size_exp) in cases {
            let expected = naive_closure(p, &gens);
            assert_eq!(expected.len(), 1 << size_exp);
            let found: BTreeSet<u64> = act
                .fixed_points(&words::yz().pow(power))
                .ones()
                .map(|g| g as u64)
                .collect();
            assert_eq!(found, expected, "m={m} (yz)^{power}");
        }
    }
    "m=1..4, three fixed-point sets equal their closures".into()
}

fn xyxz_fixed_points() -> String {
    for m in 1..=6 {
        let act = actions(m);
        let w = if m % 2 == 0 { xyxz() } else { xyxz().pow(2) };
        assert_eq!(fix_set(&act, &w).len(), 3, "m={m}");
        assert_eq!(act.count_fixed_points(&w), 3, "m={m}");
    }
    "m=1..6, exactly 3 fixed points".into()
}

fn intersection_table() -> String {
    for m in 1..=4u32 {
        let act = actions(m);
        let yz = fix_set(&act, &words::yz());
        let zy = fix_set(&act, &words::zy());
        let a = meet(
            &yz,
            &image_set(
                &act,
                &yz,
                &ActionWord::new(vec![Atom::X, Atom::Y, Atom::Z, Atom::XInv]),
            ),
        );
        let yz_x = image_set(&act, &yz, &x_inv());
        let b = meet(&yz_x, &image_set(&act, &yz, &x_inv().then(&words::yz())));
        let c = meet(&yz_x, &image_set(&act, &yz, &x_inv().then(&words::zy())));
        assert_eq!(
            (a, b, c),
            (1 << (m + 3), 1 << (m + 1), 1 << (m + 1)),
            "m={m}"
        );
        let pair = if m % 2 == 0 {
            (
                meet(
                    &image_set(&act, &yz, &words::xz()),
                    &image_set(
                        &act,
                        &fix_set(&act, &xyxz()),
                        &words::xy_inv().then(&words::xz_inv()),
                    ),
                ),
                meet(
                    &image_set(&act, &zy, &words::xy()),
                    &image_set(
                        &act,
                        &fix_set(&act, &xzxy()),
                        &words::xz_inv().then(&words::xy_inv()),
                    ),
                ),
            )
        } else {
            (
                meet(
                    &yz,
                    &image_set(
                        &act,
                        &fix_set(&act, &xyxz().pow(2)),
                        &words::xy().pow(2).then(&words::xz().pow(2)),
                    ),
                ),
                meet(
                    &zy,
                    &image_set(
                        &act,
                        &fix_set(&act, &xzxy().pow(2)),
                        &words::xz().pow(2).then(&words::xy().pow(2)),
                    ),
                ),
            )
        };
        let expected = if m % 4 == 0 || m % 4 == 1 {
            (1, 2)
        } else {
            (2, 1)
        };
        assert_eq!(pair, expected, "m={m}");
        let table = lemmas::intersection_table(&act);
        assert_eq!(
            (table.a, table.b, table.c, table.pair),
            (a, b, c, pair),
            "m={m}"
        );
    }
    "m=1..4, all seven intersection values match".into()
}

fn coset_identity_tables() -> String {
    let mut points = 0;
    for m in 1..=4 {
        let act = actions(m);
        let domain = 1u64 << (m + 3);
        let z = assert_lemma_passes(&act, "z-involution");
        assert_eq!(z.data["z_points"], 8 * domain);
        let yz = assert_lemma_passes(&act, "yz-tables");
        assert_eq!(yz.data["yz_points"], 12 * domain);
        assert_lemma_passes(&act, "ay-formula");
        points += 20 * domain;

        // Spot the first z identity against a test-side evaluation.
        let p = act.params();
        let cd = p.c() * p.d();
        let dom = naive_closure(p, &[vec![p.c(), p.d()], e_gens(p)].concat());
        for &g in &dom {
            let g = p.decode(g).unwrap();
            assert_eq!(act.apply_z(g), cd * act.apply_y(g) * cd, "m={m} g={g}");
        }
    }
    format!("m=1..4, {points} points, no counterexample")
}

fn word_set_intersection() -> String {
    for m in 1..=4 {
        let act = actions(m);
        let (first, second) = cayley::alternating_cycle_words();
        let a: HashSet<Vec<u64>> = first.iter().map(|w| images(&act, w)).collect();
        let b: HashSet<Vec<u64>> = second.iter().map(|w| images(&act, w)).collect();
        assert_eq!((a.len(), b.len()), (12, 12), "m={m}");
        let common: Vec<&Vec<u64>> = a.intersection(&b).collect();
        let identity: Vec<u64> = (0..act.n() as u64).collect();
        assert_eq!(common, vec![&identity], "m={m}");
        assert_lemma_passes(&act, "word-set-intersection");
    }
    "m=1..4, families meet only in the identity".into()
}

fn connectivity() -> String {
    for m in 1..=3 {
        let act = actions(m);
        for id in [
            "mu-projection",
            "orbit-cover",
            "no-stable-subset",
            "subgroup-rigidity",
        ] {
            assert_lemma_passes(&act, id);
        }
        // <xy, xz> has exactly the orbits {1} and H - {1}.
        let mut seen = BTreeSet::from([1u64]);
        let mut queue = vec![1u64];
        while let Some(g) = queue.pop() {
            for w in [words::xy(), words::xz()] {
                let h = act.eval_raw(&w, g);
                if seen.insert(h) {
                    queue.push(h);
                }
            }
        }
        assert_eq!(seen.len(), act.n() - 1, "m={m}");
        assert!(!seen.contains(&0));
    }
    "m=1..3, four connectivity lemmas hold".into()
}

fn generation() -> String {
    let mut notes = Vec::new();
    for (m, limit) in [(1u32, BSGS_M1_TIME_LIMIT), (2, BSGS_M2_TIME_LIMIT)] {
        let act = actions(m);
        let gens: Vec<Perm> = [words::xy(), words::xz()]
            .iter()
            .map(|w| act.materialize(w).unwrap())
            .collect();
        let start = Instant::now();
        let chain = schreier_sims(act.n(), &gens, &SchreierSimsConfig::default()).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(chain.order(), half_factorial(act.n() as u64 - 1), "m={m}");
        assert!(elapsed < limit, "m={m} took {elapsed:?}");
        notes.push(format!(
            "m={m} {:.2?} ({})",
            elapsed,
            chain.verification().as_str()
        ));
    }
    format!("bsgs-exact, {}", notes.join(", "))
}

fn double_cosets() -> String {
    for m in 1..=2 {
        let act = actions(m);
        let r = cayley::double_coset_decomposition(&act).unwrap();
        assert_eq!(r.method, "exhaustive");
        let n = act.n();
        assert_eq!((r.forward_size, r.inverse_size), (2 * n, 2 * n), "m={m}");
        assert!(r.forward_matches && r.inverse_matches && r.cosets_disjoint);
        assert_eq!(r.union_size, 4 * n);
    }
    // Test-side enumeration of R(H) xy R(H) for m = 1.
    let act = actions(1);
    let p = act.params();
    let mut set = HashSet::new();
    for h in p.elements() {
        for k in p.elements() {
            let w = cayley::right_mul(h)
                .then(&words::xy())
                .then(&cayley::right_mul(k));
            set.insert(images(&act, &w));
        }
    }
    assert_eq!(set.len(), 2 * act.n());
    "m=1,2 exhaustive, sizes 2^(m+7) and 2^(m+8)".into()
}

fn local_graph() -> String {
    for m in 1..=4 {
        let act = actions(m);
        let cycles = cayley::alternating_cycles(&act).unwrap();
        assert_eq!((cycles.c1.len(), cycles.c2.len()), (12, 12), "m={m}");
        let common = cycles.common_vertices();
        assert_eq!(common.len(), 1);
        assert!(common[0].is_identity());
        let ra = cayley::radius_and_attachment(&act).unwrap();
        assert_eq!((ra.radius, ra.attachment), (6, 1), "m={m}");

        let ball = cayley::ball(&act, 3, DEFAULT_BALL_BUDGET).unwrap();
        let connection = ConnectionSet::new(&act);
        let d1: Vec<Perm> = (0..connection.len())
            .filter(|&s| connection.orientation(s) == cayley::Orientation::D1)
            .map(|s| act.materialize(connection.word(s)).unwrap())
            .collect();
        for v in 0..ball.len() {
            assert_eq!(ball.d1_out_degree(v), 2, "m={m} vertex {v}");
            let targets: BTreeSet<Vec<u32>> = d1
                .iter()
                .map(|g| ball.vertices()[v].then(g).into_images())
                .collect();
            assert_eq!(targets.len(), 2);
        }
    }
    "m=1..4, |C1|=|C2|=12, C1∩C2={1}, radius 6, attachment 1".into()
}

fn nonnormality() -> String {
    for m in 1..=3 {
        let act = actions(m);
        let p = act.params();
        let mut t_set = BTreeSet::new();
        for h in p.elements() {
            let w = words::xy_inv()
                .then(&cayley::right_mul(h))
                .then(&words::xy());
            let t = p.decode(act.eval_raw(&w, 0)).unwrap();
            if p.elements().all(|g| act.eval(&w, g).unwrap() == g * t) {
                t_set.insert(t.encode());
            }
        }
        let k: BTreeSet<u64> = p
            .subgroup(names::K)
            .unwrap()
            .elements()
            .ones()
            .map(|g| g as u64)
            .collect();
        assert_eq!(t_set, k, "m={m}");
        let found: BTreeSet<u64> = cayley::nonnormality_witness(&act)
            .ones()
            .map(|g| g as u64)
            .collect();
        assert_eq!(found, k, "m={m}");
    }
    "m=1..3, intersection equals R(K)".into()
}

fn streaming_performance() -> String {
    let act = actions(14).with_budget(0);
    assert!(act.materialize(&words::yz()).is_err());
    let start = Instant::now();
    let count = act.count_fixed_points(&words::yz());
    let elapsed = start.elapsed();
    assert_eq!(count, 1 << 17);
    assert!(elapsed < STREAMING_TIME_LIMIT, "took {elapsed:?}");
    format!("m=14, 2^20 points in {elapsed:.2?}")
}

fn oracle_equivalence() -> String {
    let atoms = [Atom::X, Atom::XInv, Atom::Y, Atom::Z];
    for m in 1..=14 {
        let params = GroupParams::new(m).unwrap();
        let fast = Actions::new(params.clone());
        let generic = Actions::generic(params).unwrap();
        let check = |g: u64| {
            for atom in &atoms {
                assert_eq!(
                    fast.apply_atom_raw(atom, g),
                    generic.apply_atom_raw(atom, g),
                    "m={m} atom {atom} at {g}"
                );
            }
        };
        if m <= 4 {
            (0..fast.n() as u64).for_each(check);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0xacce97 + u64::from(m));
            for _ in 0..RANDOM_ORACLE_POINTS {
                check(rng.random_range(0..fast.n() as u64));
            }
        }
    }
    format!("m=1..4 all points, m=5..14 {RANDOM_ORACLE_POINTS} random points")
}

fn mutation_sensitivity() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d757461);
    let mut caught = 0;
    for _ in 0..MUTATIONS {
        let m = rng.random_range(1..=2);
        let params = GroupParams::new(m).unwrap();
        let n = params.n() as u32;
        let target = if rng.random_bool(0.5) {
            MutationTarget::X
        } else {
            MutationTarget::Y
        };
        let p = rng.random_range(0..n);
        let q = (p + rng.random_range(1..n)) % n;
        let act = Actions::mutated(params, target, p, q).unwrap();
        // The suite stops at the first failing lemma.
        let first_failure = lemmas::LEMMA_IDS
            .iter()
            .map(|id| run_lemma(&act, id))
            .find(|r| r.status == Status::Fail);
        let report =
            first_failure.unwrap_or_else(|| panic!("m={m} {target:?} swap {p} {q} went unnoticed"));
        assert!(
            report.witness.is_some(),
            "{} failed without a witness",
            report.lemma_id
        );
        caught += 1;
    }
    format!("{caught}/{MUTATIONS} mutations caught with witnesses")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("orders and parities", orders_and_parities),
        ("fixed-point sets of (yz)^i", fix_set_identities),
        ("fixed points of xyxz", xyxz_fixed_points),
        ("fixed-point intersection table", intersection_table),
        ("coset identity tables", coset_identity_tables),
        ("word-set intersection", word_set_intersection),
        ("connectivity lemmas", connectivity),
        ("generation of the alternating group", generation),
        ("double cosets", double_cosets),
        ("local graph structure", local_graph),
        ("nonnormality", nonnormality),
        ("streaming performance", streaming_performance),
        ("oracle equivalence", oracle_equivalence),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(criterion));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {:>2} PASS {name} [{secs:.2}s] {note}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL {name} [{secs:.2}s] {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
