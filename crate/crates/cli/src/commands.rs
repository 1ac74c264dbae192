use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::Instant;

use hatcert::cayley::{self, ConnectionSet, LocalBall};
use hatcert::lemmas::{self, Status, SuiteConfig};
use hatcert::permgroup::{certify_alternating, factorial, CertifyConfig, CertifyMethod, Verdict};
use hatcert::{action::words, Actions, GroupParams, Perm};
use serde_json::{json, Value};

use crate::args::{Common, ExploreArgs, Format, OrderArgs, VerifyArgs};
use crate::report::{Aggregate, RunReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hatcert::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("cannot start the worker pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn exit_code(aggregate: &Aggregate) -> i32 {
    match aggregate.status {
        Status::Fail => EXIT_FAIL,
        _ => EXIT_PASS,
    }
}

pub fn init_threads(threads: usize) -> CliResult<()> {
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

fn actions(m: u32, common: &Common) -> CliResult<Actions> {
    Ok(Actions::for_m(m)?.with_budget(common.budget_points))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn config_echo(common: &Common, extra: Value) -> Value {
    let mut v = json!({
        "m": common.m,
        "format": common.format.as_str(),
        "budget_points": common.budget_points,
        "threads": common.threads,
    });
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

fn certify_config(giant_test: bool) -> CertifyConfig {
    CertifyConfig {
        method: if giant_test {
            CertifyMethod::Jordan
        } else {
            CertifyMethod::Bsgs
        },
        ..CertifyConfig::default()
    }
}

pub fn verify(args: &VerifyArgs) -> CliResult<i32> {
    let start = Instant::now();
    let selection = lemmas::resolve_selection(&args.lemmas)?;
    let config = SuiteConfig {
        generation: certify_config(args.giant_test),
        ..SuiteConfig::default()
    };
    let mut rows = Vec::new();
    for &m in &args.common.m {
        let actions = match args.mutate {
            Some(mu) => Actions::mutated(GroupParams::new(m)?, mu.target, mu.p, mu.q)?
                .with_budget(args.common.budget_points),
            None => actions(m, &args.common)?,
        };
        for &id in &selection {
            rows.push(lemmas::run_lemma(id, &actions, &config)?);
        }
    }
    let echo = config_echo(
        &args.common,
        json!({
            "lemmas": selection,
            "giant_test": args.giant_test,
            "mutate": args.mutate.map(|mu| format!("{:?}:{}:{}", mu.target, mu.p, mu.q).to_lowercase()),
        }),
    );
    let report = RunReport::new(echo, rows, start.elapsed().as_millis() as u64);
    let text = match args.common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(args.common.out.as_deref(), &text)?;
    Ok(exit_code(&report.aggregate))
}

fn short_hash(p: &Perm) -> String {
    format!("{:08x}", p.content_hash() >> 96)
}

/// Properties every ball must have; returns the failures.
fn ball_failures(ball: &LocalBall) -> Vec<String> {
    let mut failures = Vec::new();
    for v in 0..ball.len() {
        if ball.d1_out_degree(v) != 2 {
            failures.push(format!(
                "vertex {v} has D1 out-degree {}",
                ball.d1_out_degree(v)
            ));
        }
        if ball.is_internal(v) {
            let degree = ball.neighbours(v).len();
            if degree != 4 {
                failures.push(format!("internal vertex {v} has {degree} neighbours"));
            }
            if ball.d1_in_degree(v) != 2 {
                failures.push(format!(
                    "internal vertex {v} has D1 in-degree {}",
                    ball.d1_in_degree(v)
                ));
            }
        }
    }
    failures
}

struct Exploration {
    json: Value,
    text: String,
    dot: String,
    failures: Vec<String>,
}

fn explore_one(m: u32, args: &ExploreArgs) -> CliResult<Exploration> {
    let actions = actions(m, &args.common)?;
    let depth = usize::try_from(args.depth)
        .map_err(|_| CliError::Usage("depth must be non-negative".into()))?;
    let ball = cayley::ball(&actions, depth, args.common.budget_points)?;
    let connection = ConnectionSet::new(&actions);
    let cycles = cayley::alternating_cycles(&actions)?;
    let mut failures = ball_failures(&ball);

    let mut layers = vec![0usize; depth + 1];
    for v in 0..ball.len() {
        layers[ball.depth(v)] += 1;
    }
    let internal = (0..ball.len()).filter(|&v| ball.is_internal(v)).count();
    let regular = (0..ball.len())
        .filter(|&v| ball.is_internal(v))
        .all(|v| ball.neighbours(v).len() == 4);
    let common: Vec<String> = cycles
        .common_vertices()
        .into_iter()
        .map(short_hash)
        .collect();
    let identity_only = common == [short_hash(&Perm::identity(actions.n()))];
    if cycles.c1.len() != 12 || cycles.c2.len() != 12 {
        failures.push(format!(
            "cycle lengths {} and {}",
            cycles.c1.len(),
            cycles.c2.len()
        ));
    }
    if !identity_only {
        failures.push(format!("cycles share {} vertices", common.len()));
    }

    let mut text = String::new();
    let _ = writeln!(text, "m={m} points={}", actions.n());
    let _ = writeln!(
        text,
        "ball radius {depth}: {} vertices, layers {layers:?}",
        ball.len()
    );
    let _ = writeln!(text, "internal vertices: {internal}, 4-regular: {regular}");
    let _ = writeln!(
        text,
        "D1 out-degree 2 everywhere: {}",
        (0..ball.len()).all(|v| ball.d1_out_degree(v) == 2)
    );
    let _ = writeln!(
        text,
        "|C1|={} |C2|={} C1∩C2={}",
        cycles.c1.len(),
        cycles.c2.len(),
        if identity_only {
            "{1}".to_string()
        } else {
            format!("{common:?}")
        }
    );
    let _ = writeln!(
        text,
        "radius {}, attachment {}",
        cycles.radius(),
        cycles.attachment()
    );
    if args.cycles {
        for (name, walk, steps) in [
            ("C1", &cycles.c1, &cycles.c1_steps),
            ("C2", &cycles.c2, &cycles.c2_steps),
        ] {
            let vertices: Vec<String> = walk.iter().map(short_hash).collect();
            let classes: Vec<&str> = steps.iter().map(|c| c.as_str()).collect();
            let _ = writeln!(text, "{name}: {}", vertices.join(" "));
            let _ = writeln!(text, "{name} steps: {}", classes.join(" "));
        }
    }
    for f in &failures {
        let _ = writeln!(text, "FAIL {f}");
    }

    let mut json = json!({
        "m": m,
        "depth": depth,
        "vertices": ball.len(),
        "layers": layers,
        "internal": internal,
        "arcs": ball.arcs().len(),
        "cycle_lengths": [cycles.c1.len(), cycles.c2.len()],
        "common_vertices": common,
        "radius": cycles.radius(),
        "attachment": cycles.attachment(),
        "status": if failures.is_empty() { "pass" } else { "fail" },
        "failures": failures,
    });
    if args.cycles {
        json["c1"] = cycles.c1.iter().map(short_hash).collect();
        json["c2"] = cycles.c2.iter().map(short_hash).collect();
    }
    Ok(Exploration {
        json,
        text,
        dot: ball.to_dot(&connection),
        failures,
    })
}

pub fn explore(args: &ExploreArgs) -> CliResult<i32> {
    if args.dot.is_some() && args.common.m.len() != 1 {
        return Err(CliError::Usage("--dot takes a single value of m".into()));
    }
    let start = Instant::now();
    let mut results = Vec::new();
    for &m in &args.common.m {
        results.push(explore_one(m, args)?);
    }
    if let (Some(path), Some(first)) = (&args.dot, results.first()) {
        fs::write(path, &first.dot).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
    }
    let failed = results.iter().any(|r| !r.failures.is_empty());
    let text = match args.common.format {
        Format::Json => {
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "schema": crate::report::SCHEMA_VERSION,
                "wall_time_ms": start.elapsed().as_millis() as u64,
                "config": config_echo(&args.common, json!({ "depth": args.depth, "cycles": args.cycles })),
                "balls": results.iter().map(|r| r.json.clone()).collect::<Vec<_>>(),
                "aggregate": if failed { "fail" } else { "pass" },
            });
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        Format::Text => results
            .iter()
            .map(|r| r.text.as_str())
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(args.common.out.as_deref(), &text)?;
    Ok(if failed { EXIT_FAIL } else { EXIT_PASS })
}

pub fn order(args: &OrderArgs) -> CliResult<i32> {
    let start = Instant::now();
    let config = certify_config(args.giant_test);
    let mut results = Vec::new();
    let mut all_alternating = true;
    for &m in &args.common.m {
        let actions = actions(m, &args.common)?;
        let n = actions.n();
        let gens = [words::xy(), words::xz()]
            .iter()
            .map(|w| actions.materialize(w))
            .collect::<hatcert::Result<Vec<_>>>()?;
        let cert = certify_alternating(n, &gens, 0, &config)?;
        let alternating = cert.verdict == Verdict::Alternating;
        all_alternating &= alternating;
        // A Jordan certificate identifies the group, hence its order.
        let order = cert
            .order
            .clone()
            .or_else(|| alternating.then(|| factorial(n - 1) / 2u32));
        let verdict = match cert.verdict {
            Verdict::Alternating => format!("alternating, certified ({})", cert.method),
            Verdict::NotAlternating => format!("not alternating ({})", cert.method),
            Verdict::Inconclusive => format!("inconclusive ({})", cert.method),
        };
        results.push(json!({
            "m": m,
            "degree": n - 1,
            "order": order.map(|o| o.to_string()),
            "method": cert.method,
            "verdict": verdict,
            "detail": cert.detail,
        }));
    }
    let text = match args.common.format {
        Format::Json => {
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "schema": crate::report::SCHEMA_VERSION,
                "wall_time_ms": start.elapsed().as_millis() as u64,
                "config": config_echo(&args.common, json!({ "giant_test": args.giant_test })),
                "results": results,
            });
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for r in &results {
                let _ = writeln!(
                    out,
                    "m={} |<xy,xz>| = {}",
                    r["m"],
                    r["order"].as_str().unwrap_or("unknown")
                );
                let _ = writeln!(out, "method: {}", r["method"].as_str().unwrap_or_default());
                let _ = writeln!(out, "{}", r["verdict"].as_str().unwrap_or_default());
            }
            out
        }
    };
    emit(args.common.out.as_deref(), &text)?;
    Ok(if all_alternating {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}
