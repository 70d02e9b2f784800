//! Command-line front end for the free-probability toolkit: partition
//! enumeration and lattice queries, symbolic word moments with cross-route
//! agreement checks, the block embedding identity at finite size, and
//! seeded Monte Carlo trace-moment studies.
//!
//! Exit codes: 0 success, 2 usage or configuration problems, 3 verification
//! failures (method disagreement or a failed numeric contract).

use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use freembed_core::calculus::Word;
use freembed_core::oracle::{self, WordReport};
use freembed_core::sim::{
    convergence_study, mc_trace_moment, reports_to_csv, verify_embedding_identity, EmbeddingCheck,
    EntryLaw, SimConfig, SimReport,
};
use freembed_core::{
    enumerate_nc, enumerate_nc2, kreweras, mobius, Caps, Error, Frac, GroundSet, SetPartition,
};

#[derive(Parser, Debug)]
#[command(
    name = "freembed",
    version,
    about = "Non-crossing partition calculus and sample-covariance simulation"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Lemma2,
    Free,
    Theorem2,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate NC(k); optionally query the Kreweras complement, the Möbius
    /// function, or restrict to pair partitions.
    Nc {
        /// Ground set size: partitions of {1..k}.
        k: usize,
        /// Print the Kreweras complement of this partition literal instead.
        #[arg(long, value_name = "PARTITION")]
        kreweras: Option<String>,
        /// Print the Möbius value of the interval [S, P]; "0" and "1" denote
        /// the all-singletons and one-block partitions.
        #[arg(long, num_args = 2, value_names = ["S", "P"])]
        mobius: Option<Vec<String>>,
        /// Enumerate non-crossing pair partitions of {1..k} (k even).
        #[arg(long)]
        pairs: bool,
    },
    /// Mixed moment of a word of free Marchenko-Pastur variables.
    Moment {
        /// Comma-separated 1-based family labels, e.g. 1,2,1,2.
        word: String,
        /// Evaluate at a rational aspect ratio, e.g. 1/2.
        #[arg(long, value_name = "NUM/DEN", conflicts_with = "symbolic")]
        y: Option<String>,
        /// Keep the result as a polynomial in y (default when --y is absent).
        #[arg(long)]
        symbolic: bool,
        /// Which computation route(s) to run; "all" also cross-checks them.
        #[arg(long, value_enum, default_value_t = Method::Lemma2)]
        method: Method,
    },
    /// Check the exact sample-covariance embedding identity on one draw.
    VerifyEmbedding {
        p: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "gaussian")]
        law: String,
    },
    /// Monte Carlo estimate of p^{-1} E Tr of a sample-covariance word
    /// against the symbolic oracle.
    Simulate {
        /// Comma-separated 1-based family labels, e.g. 1,2,1,2.
        word: String,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "gaussian")]
        law: String,
        /// Dimension ladder "p1:n1,p2:n2,..." sharing one aspect ratio;
        /// overrides --p/--n and emits one report per rung.
        #[arg(long, value_name = "LADDER")]
        ladder: Option<String>,
    },
}

/// Every report embeds the manifest needed to reproduce it.
#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    config: serde_json::Value,
    version: String,
    timestamp_unix: u64,
    seed: Option<u64>,
}

impl RunManifest {
    fn new(subcommand: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            seed,
        }
    }
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    manifest: RunManifest,
    result: T,
}

fn emit_json<T: Serialize>(manifest: RunManifest, result: T) {
    let doc = Envelope { manifest, result };
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("report serialization")
    );
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::StructureViolation(_) | Error::Inconsistent(_) | Error::Replicate { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = Caps::from_env();
    match run(cli, &caps) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_for(&err))
        }
    }
}

fn run(cli: Cli, caps: &Caps) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Nc {
            k,
            kreweras: krew,
            mobius: mob,
            pairs,
        } => cmd_nc(cli.format, caps, k, krew, mob, pairs),
        Command::Moment {
            word,
            y,
            symbolic,
            method,
        } => cmd_moment(cli.format, caps, &word, y, symbolic, method),
        Command::VerifyEmbedding { p, n, seed, law } => {
            cmd_verify_embedding(cli.format, p, n, seed, &law)
        }
        Command::Simulate {
            word,
            p,
            n,
            reps,
            seed,
            law,
            ladder,
        } => cmd_simulate(cli.format, caps, &word, p, n, reps, seed, &law, ladder),
    }
}

/// Parse a partition argument; "0" and "1" are the lattice extremes of {1..k}.
fn parse_partition(arg: &str, k: usize) -> Result<SetPartition, Error> {
    match arg.trim() {
        "0" => Ok(SetPartition::singletons(GroundSet::contiguous(k))),
        "1" => Ok(SetPartition::full(GroundSet::contiguous(k))),
        other => other.parse(),
    }
}

fn cmd_nc(
    format: Format,
    caps: &Caps,
    k: usize,
    krew: Option<String>,
    mob: Option<Vec<String>>,
    pairs: bool,
) -> Result<ExitCode, Error> {
    let config = serde_json::json!({
        "k": k,
        "kreweras": krew,
        "mobius": mob,
        "pairs": pairs,
    });
    let manifest = RunManifest::new("nc", config, None);
    let ground = GroundSet::contiguous(k);

    if let Some(lit) = &krew {
        let input = parse_partition(lit, k)?;
        let complement = kreweras(&input, caps)?;
        match format {
            Format::Json => emit_json(
                manifest,
                serde_json::json!({ "input": input, "kreweras": complement }),
            ),
            _ => println!("{complement}"),
        }
        return Ok(ExitCode::SUCCESS);
    }

    if let Some(args) = &mob {
        let s = parse_partition(&args[0], k)?;
        let p = parse_partition(&args[1], k)?;
        let value = mobius(&s, &p, caps)?;
        match format {
            Format::Json => emit_json(
                manifest,
                serde_json::json!({ "s": s, "p": p, "mobius": value }),
            ),
            _ => println!("{value}"),
        }
        return Ok(ExitCode::SUCCESS);
    }

    if pairs {
        let list = enumerate_nc2(&ground, caps)?;
        match format {
            Format::Json => emit_json(
                manifest,
                serde_json::json!({ "count": list.len(), "pair_partitions": list }),
            ),
            Format::Csv => {
                println!("pair_partition");
                for p in &list {
                    println!("\"{p}\"");
                }
            }
            Format::Text => {
                for p in &list {
                    println!("{p}");
                }
            }
        }
        return Ok(ExitCode::SUCCESS);
    }

    let list = enumerate_nc(&ground, caps)?;
    match format {
        Format::Json => emit_json(
            manifest,
            serde_json::json!({ "count": list.len(), "partitions": list }),
        ),
        Format::Csv => {
            println!("partition");
            for p in &list {
                println!("\"{p}\"");
            }
        }
        Format::Text => {
            for p in &list {
                println!("{p}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MomentResult {
    word: Vec<usize>,
    method: Method,
    symbolic: std::collections::BTreeMap<String, String>,
    evaluated_at: Option<String>,
    values: std::collections::BTreeMap<String, String>,
    agree: Option<bool>,
    report: Option<WordReport>,
}

fn cmd_moment(
    format: Format,
    caps: &Caps,
    word_arg: &str,
    y: Option<String>,
    symbolic: bool,
    method: Method,
) -> Result<ExitCode, Error> {
    let word: Word = word_arg.parse()?;
    let config = serde_json::json!({
        "word": word_arg,
        "y": y,
        "symbolic": symbolic,
        "method": method,
    });
    let manifest = RunManifest::new("moment", config, None);

    let y_point: Option<Frac> = y.as_deref().map(str::parse).transpose()?;

    let mut polys: Vec<(&'static str, freembed_core::YPoly)> = Vec::new();
    let mut report = None;
    match method {
        Method::Lemma2 => polys.push(("lemma2", oracle::lemma2_moment(&word, caps)?)),
        Method::Free => {
            let specs =
                vec![freembed_core::calculus::CumulantSpec::MarchenkoPastur; word.max_label()];
            polys.push((
                "free",
                freembed_core::calculus::free_mixed_moment(&specs, &word, caps)?,
            ));
        }
        Method::Theorem2 => polys.push(("theorem2", oracle::theorem2_rhs(&word, caps)?)),
        Method::All => {
            let r = oracle::word_report(&word, caps)?;
            polys.push(("lemma2", r.lemma2.clone()));
            polys.push(("free", r.free_mixed.clone()));
            polys.push(("theorem2", r.theorem2_rhs.clone()));
            report = Some(r);
        }
    }
    let agree = report.as_ref().map(|r| r.agree);

    let value_of = |p: &freembed_core::YPoly| -> String {
        match y_point {
            Some(pt) => p.eval_frac(pt).to_string(),
            None => p.to_string(),
        }
    };

    match format {
        Format::Json => {
            let result = MomentResult {
                word: word.letters().to_vec(),
                method,
                symbolic: polys
                    .iter()
                    .map(|(name, p)| (name.to_string(), p.to_string()))
                    .collect(),
                evaluated_at: y_point.map(|p| p.to_string()),
                values: polys
                    .iter()
                    .map(|(name, p)| (name.to_string(), value_of(p)))
                    .collect(),
                agree,
                report,
            };
            emit_json(manifest, result);
        }
        Format::Csv => {
            println!("word,method,value");
            for (name, p) in &polys {
                println!("\"{word}\",{name},\"{}\"", value_of(p));
            }
        }
        Format::Text => {
            if polys.len() == 1 {
                println!("{}", value_of(&polys[0].1));
            } else {
                for (name, p) in &polys {
                    println!("{name}: {}", value_of(p));
                }
            }
            if let Some(a) = agree {
                println!("{}", if a { "AGREE" } else { "DISAGREE" });
            }
        }
    }

    if agree == Some(false) {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_embedding(
    format: Format,
    p: usize,
    n: usize,
    seed: u64,
    law: &str,
) -> Result<ExitCode, Error> {
    let law: EntryLaw = law.parse()?;
    let config = serde_json::json!({ "p": p, "n": n, "seed": seed, "law": law });
    let manifest = RunManifest::new("verify-embedding", config, Some(seed));
    let check: EmbeddingCheck = verify_embedding_identity(p, n, law, seed)?;
    match format {
        Format::Json => emit_json(manifest, &check),
        Format::Csv => {
            println!("p,n,law,seed,max_abs_deviation,max_entry,tolerance,passed");
            println!(
                "{},{},{},{},{},{},{},{}",
                check.p,
                check.n,
                check.law,
                check.seed,
                check.max_abs_deviation,
                check.max_entry,
                check.tolerance,
                check.passed
            );
        }
        Format::Text => {
            println!(
                "{}, deviation {:.3e} (tolerance {:.3e})",
                if check.passed { "PASS" } else { "FAIL" },
                check.max_abs_deviation,
                check.tolerance
            );
        }
    }
    Ok(if check.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn parse_ladder(arg: &str) -> Result<Vec<(usize, usize)>, Error> {
    arg.split(',')
        .map(|rung| {
            let (p, n) = rung
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("ladder rung {rung:?} is not p:n")))?;
            let p = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad ladder dimension {p:?}")))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad ladder dimension {n:?}")))?;
            Ok((p, n))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    format: Format,
    caps: &Caps,
    word_arg: &str,
    p: Option<usize>,
    n: Option<usize>,
    reps: usize,
    seed: u64,
    law: &str,
    ladder: Option<String>,
) -> Result<ExitCode, Error> {
    let word: Word = word_arg.parse()?;
    let law: EntryLaw = law.parse()?;
    let config = serde_json::json!({
        "word": word_arg,
        "p": p,
        "n": n,
        "reps": reps,
        "seed": seed,
        "law": law,
        "ladder": ladder,
    });
    let manifest = RunManifest::new("simulate", config, Some(seed));

    let reports: Vec<SimReport> = if let Some(ladder) = &ladder {
        let rungs = parse_ladder(ladder)?;
        convergence_study(&word, &rungs, reps, seed, law, caps)?
    } else {
        let (p, n) = match (p, n) {
            (Some(p), Some(n)) => (p, n),
            _ => {
                return Err(Error::Config(
                    "--p and --n are required unless --ladder is given".into(),
                ))
            }
        };
        let cfg = SimConfig {
            p,
            n,
            m: word.max_label(),
            word: word.clone(),
            replicates: reps,
            seed,
            law,
        };
        vec![mc_trace_moment(&cfg, caps)?]
    };

    match format {
        Format::Json => emit_json(manifest, &reports),
        Format::Csv => print!("{}", reports_to_csv(&reports)),
        Format::Text => {
            for r in &reports {
                println!(
                    "p={} n={} y={} word={} reps={} seed={} estimate={:.6} se={:.3e} oracle={:.6} abs_err={:.3e} rel_err={:.3e}",
                    r.p,
                    r.n,
                    r.y,
                    word,
                    r.replicates,
                    r.seed,
                    r.estimate,
                    r.std_error,
                    r.oracle,
                    r.abs_error,
                    r.rel_error
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
