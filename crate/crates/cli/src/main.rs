use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use pathfusion::pairs::cayley_ball_dot;
use pathfusion::{
    closure, extract_pair, run_property_suite, tensor_many, verify_theorem, ClosureOptions, Error,
    GroupWord, Pair, PairFile, PairSpec, PathWord, Signature, StallingsGraph, ValidationResult,
    VerifyOptions, DEFAULT_MAX_SET_SIZE,
};
use serde::Serialize;

/// Fusion rules of free products of free unitary quantum groups and the
/// classification of their full tensor subcategories by pairs (Γ, S).
#[derive(Parser)]
#[command(name = "pathfusion", version)]
struct Cli {
    /// Worker threads for closure and verification (defaults to all cores).
    #[arg(long, global = true, env = "PATHFUSION_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tensor product of two or more words, as a multiset of irreducibles.
    Fuse {
        #[arg(long)]
        rank: u32,
        #[arg(num_args = 2.., required = true)]
        words: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Tensor closure of a generator set, truncated at a length cutoff.
    Closure {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_SET_SIZE)]
        max_set_size: usize,
        #[command(flatten)]
        out: Output,
    },
    /// The pair (Γ, S) of the subcategory generated by a set of words.
    Classify {
        #[command(flatten)]
        gens: Generators,
    },
    /// Irreducibles of length at most `radius` in the subcategory of a pair.
    Realize {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Checks the three conditions on a pair.
    CheckPair {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long)]
        json: bool,
    },
    /// Compares closure and realization on a truncated instance.
    Verify {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        cutoff: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_SET_SIZE)]
        max_set_size: usize,
        #[arg(long)]
        json: bool,
    },
    /// Folded Stallings graph of the subgroup generated by reduced words.
    Stallings {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Graphviz rendering of a Cayley ball, optionally highlighting a pair.
    Cayley {
        #[arg(long, required_unless_present = "pair")]
        rank: Option<u32>,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        pair: Option<PathBuf>,
        #[arg(long, requires = "pair")]
        add_identity: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Seeded run of the fusion-rule property suite.
    Properties {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Generators {
    #[arg(long)]
    rank: u32,
    /// A generator word; repeat for several.
    #[arg(long = "gen")]
    gens: Vec<String>,
}

#[derive(Args)]
struct PairInput {
    /// JSON pair file `{"rank": n, "gamma": [...], "transversal": [...]}`.
    #[arg(long = "pair")]
    path: PathBuf,
    /// Adds `1` to the transversal if it is missing.
    #[arg(long)]
    add_identity: bool,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    json: bool,
    /// Prints words as `[a1][A1]` instead of `a1.A1`.
    #[arg(long, conflicts_with = "json")]
    brackets: bool,
}

enum Failure {
    Input(anyhow::Error),
    InvalidPair(ValidationResult),
    Resources(usize),
    Failed(String),
    Io(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPair(v) => Failure::InvalidPair(v),
            Error::SetCapExceeded { cap } => Failure::Resources(cap),
            other => Failure::Input(other.into()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::InvalidPair(v)) => {
            println!("{v}");
            eprintln!("error: invalid pair");
            ExitCode::from(3)
        }
        Err(Failure::Resources(cap)) => {
            eprintln!("error: more than {cap} irreducibles discovered; raise --max-set-size or lower --cutoff");
            ExitCode::from(4)
        }
        Err(Failure::Failed(report)) => {
            print!("{report}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Fuse { rank, words, out } => {
            let sig = signature(rank)?;
            let factors = words
                .iter()
                .map(|w| PathWord::parse(sig, w))
                .collect::<Result<Vec<_>, _>>()?;
            let terms = tensor_many(&factors)?;
            if out.json {
                return json(&terms);
            }
            let mut s = String::new();
            for (w, mult) in terms.iter() {
                s.push_str(&show(w, &out));
                if mult > 1 {
                    let _ = write!(s, " x{mult}");
                }
                s.push('\n');
            }
            Ok(s)
        }
        Command::Closure {
            gens,
            cutoff,
            max_set_size,
            out,
        } => {
            let (sig, words) = path_generators(&gens)?;
            let opts = ClosureOptions::new(cutoff).with_max_set_size(max_set_size);
            let closed = closure(sig, &words, opts)?;
            if out.json {
                return json(&closed.to_json());
            }
            Ok(lines(closed.set.iter(), &out))
        }
        Command::Classify { gens } => {
            let (sig, words) = path_generators(&gens)?;
            let pair = extract_pair(sig, &words)?;
            json(&pair.spec().to_file())
        }
        Command::Realize { pair, radius, out } => {
            let pair = Pair::new(read_pair(&pair)?)?;
            let set = pair.realize(radius);
            if out.json {
                return json(&set.to_json());
            }
            Ok(lines(set.iter(), &out))
        }
        Command::CheckPair { pair, json: as_json } => {
            let spec = read_pair(&pair)?;
            let result = spec.validate();
            if !result.is_valid() {
                return Err(Failure::InvalidPair(result));
            }
            if as_json {
                json(&result)
            } else {
                Ok(format!("{result}\n"))
            }
        }
        Command::Verify {
            gens,
            cutoff,
            radius,
            max_set_size,
            json: as_json,
        } => {
            let (sig, words) = path_generators(&gens)?;
            let opts = VerifyOptions {
                cutoff,
                radius,
                max_set_size,
            };
            let report = verify_theorem(sig, &words, opts)?;
            let text = if as_json {
                json(&report)?
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "pair: gamma {:?}, transversal {:?}", report.pair.gamma, report.pair.transversal);
                let _ = writeln!(
                    s,
                    "closure: {} irreducibles (saturated: {}); realized: {}",
                    report.closure_size, report.closure_saturated, report.realized_size
                );
                let _ = writeln!(s, "agreement radius: {} of {}", report.agreement_radius, report.radius);
                for w in &report.witnesses {
                    let _ = writeln!(s, "witness: {} only in {:?}", w.word, w.side);
                }
                for (name, tally) in [
                    ("relation 1", &report.relation_1),
                    ("relation 2", &report.relation_2),
                    ("final chain", &report.final_chain),
                ] {
                    let _ = writeln!(s, "{name}: {}/{} failed", tally.failed, tally.checked);
                }
                let _ = writeln!(s, "extract_pair stable: {}", report.extract_pair_stable);
                let _ = writeln!(s, "{}", if report.passed { "PASS" } else { "FAIL" });
                s
            };
            if report.passed {
                Ok(text)
            } else {
                Err(Failure::Failed(text))
            }
        }
        Command::Stallings {
            gens,
            dot,
            json: as_json,
        } => {
            let sig = signature(gens.rank)?;
            let words = gens
                .gens
                .iter()
                .map(|g| GroupWord::parse(sig, g))
                .collect::<Result<Vec<_>, _>>()?;
            let graph = StallingsGraph::build(sig, &words)?;
            if let Some(path) = &dot {
                write_file(path, &graph.to_dot())?;
            }
            if as_json {
                return json(&StallingsSummary::new(&graph));
            }
            let mut s = String::new();
            let _ = writeln!(
                s,
                "vertices: {}\nedges: {}\nrank: {}",
                graph.vertex_count(),
                graph.edge_count(),
                graph.subgroup_rank()
            );
            for (from, letter, to) in graph.positive_edges() {
                let _ = writeln!(s, "v{from} -{letter}-> v{to}");
            }
            Ok(s)
        }
        Command::Cayley {
            rank,
            radius,
            pair,
            add_identity,
            dot,
        } => {
            let spec = match &pair {
                Some(path) => Some(read_pair(&PairInput {
                    path: path.clone(),
                    add_identity,
                })?),
                None => None,
            };
            let sig = match (&spec, rank) {
                (Some(spec), Some(r)) if spec.signature().rank() != r => {
                    return Err(Failure::Input(anyhow::anyhow!(
                        "--rank {r} does not match the pair file rank {}",
                        spec.signature().rank()
                    )))
                }
                (Some(spec), _) => spec.signature(),
                (None, Some(r)) => signature(r)?,
                (None, None) => unreachable!("clap requires --rank without --pair"),
            };
            let rendered = cayley_ball_dot(sig, radius, spec.as_ref());
            match &dot {
                Some(path) => {
                    write_file(path, &rendered)?;
                    Ok(String::new())
                }
                None => Ok(rendered),
            }
        }
        Command::Properties {
            rank,
            radius,
            seed,
            json: as_json,
        } => {
            let report = run_property_suite(signature(rank)?, radius, seed);
            let text = if as_json {
                json(&report)?
            } else {
                let mut s = String::new();
                for o in &report.outcomes {
                    match &o.counterexample {
                        None => {
                            let _ = writeln!(s, "{}: {} checked, ok", o.name, o.checked);
                        }
                        Some(c) => {
                            let _ = writeln!(s, "{}: counterexample {c}", o.name);
                        }
                    }
                }
                s
            };
            if report.passed() {
                Ok(text)
            } else {
                Err(Failure::Failed(text))
            }
        }
    }
}

#[derive(Serialize)]
struct StallingsSummary {
    vertices: usize,
    subgroup_rank: usize,
    edges: Vec<(usize, String, usize)>,
}

impl StallingsSummary {
    fn new(graph: &StallingsGraph) -> Self {
        StallingsSummary {
            vertices: graph.vertex_count(),
            subgroup_rank: graph.subgroup_rank(),
            edges: graph
                .positive_edges()
                .map(|(from, l, to)| (from, l.to_string(), to))
                .collect(),
        }
    }
}

fn signature(rank: u32) -> Result<Signature, Failure> {
    Ok(Signature::new(rank)?)
}

fn path_generators(gens: &Generators) -> Result<(Signature, Vec<PathWord>), Failure> {
    let sig = signature(gens.rank)?;
    let words = gens
        .gens
        .iter()
        .map(|g| PathWord::parse(sig, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((sig, words))
}

fn read_pair(input: &PairInput) -> Result<PairSpec, Failure> {
    let text = fs::read_to_string(&input.path)
        .with_context(|| format!("reading {}", input.path.display()))
        .map_err(Failure::Input)?;
    let file: PairFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", input.path.display()))
        .map_err(Failure::Input)?;
    let spec = PairSpec::from_file(&file)?;
    Ok(if input.add_identity { spec.with_identity() } else { spec })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Io)
}

fn json<T: Serialize>(value: &T) -> Outcome {
    let mut s = serde_json::to_string(value).map_err(|e| Failure::Io(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn show(w: &PathWord, out: &Output) -> String {
    if out.brackets {
        w.bracketed()
    } else {
        w.to_string()
    }
}

fn lines<'a>(words: impl Iterator<Item = &'a PathWord>, out: &Output) -> String {
    let mut s = String::new();
    for w in words {
        s.push_str(&show(w, out));
        s.push('\n');
    }
    s
}
