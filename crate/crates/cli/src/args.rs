use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hatcert::action::MutationTarget;
use hatcert::group::MAX_M;

#[derive(Debug, Parser)]
#[command(
    name = "hatcert",
    version,
    about = "Certify the computational lemmas behind the graphs built from H = D8^2 x C2^m"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the lemma checks for each m and write a report.
    Verify(VerifyArgs),
    /// Explore a ball of the Cayley digraph around the identity.
    Explore(ExploreArgs),
    /// Certify the order of <xy, xz>.
    Order(OrderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "text",
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Comma-separated values of m.
    #[arg(long = "m", value_delimiter = ',', required = true, value_parser = clap::value_parser!(u32).range(1..=i64::from(MAX_M)))]
    pub m: Vec<u32>,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads; 0 picks one per core.
    #[arg(long, env = "HATCERT_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Largest point count any materialized permutation or ball may use.
    #[arg(long, default_value_t = hatcert::action::DEFAULT_MATERIALIZE_BUDGET)]
    pub budget_points: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,

    /// Comma-separated lemma ids, or "all".
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub lemmas: Vec<String>,

    /// Certify generation with the randomized Jordan test instead of a
    /// stabilizer chain.
    #[arg(long)]
    pub giant_test: bool,

    /// Swap two images of x or y before checking, e.g. `y:5:77`. Used to
    /// confirm that the suite notices a broken generator.
    #[arg(long, hide = true, value_parser = parse_mutation)]
    pub mutate: Option<Mutation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub target: MutationTarget,
    pub p: u32,
    pub q: u32,
}

pub fn parse_mutation(s: &str) -> Result<Mutation, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [target, p, q] = parts[..] else {
        return Err("expected TARGET:P:Q".into());
    };
    let target = match target {
        "x" => MutationTarget::X,
        "y" => MutationTarget::Y,
        other => return Err(format!("unknown target {other:?}; use x or y")),
    };
    let index = |t: &str| t.parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Mutation {
        target,
        p: index(p)?,
        q: index(q)?,
    })
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    #[command(flatten)]
    pub common: Common,

    /// Ball radius.
    #[arg(long, default_value_t = 3, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(0..))]
    pub depth: i64,

    /// Write the ball as Graphviz DOT (single m only).
    #[arg(long)]
    pub dot: Option<PathBuf>,

    /// List the vertices of both alternating cycles.
    #[arg(long)]
    pub cycles: bool,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub common: Common,

    #[arg(long)]
    pub giant_test: bool,
}
