//! `wmap`: build, inspect and query Wheeler map indexes.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod input;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use wheelermap::codec;
use wheelermap::map::{BuildOptions, Session, Weight, WheelerMap};

#[derive(Parser)]
#[command(
    name = "wmap",
    version,
    about = "Distinct-tag queries over a tagged text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index and print its sizes.
    Build(BuildArgs),
    /// Answer tag queries for a file of patterns.
    Query(QueryArgs),
    /// List the tags of every maximal exact match of each pattern.
    Mems(MemsArgs),
    /// Print the sizes of an index.
    Stats { index: PathBuf },
}

#[derive(Args)]
struct BuildArgs {
    /// Plain text, one sequence per line (needs a position TSV as --tags).
    #[arg(long, conflicts_with = "records", required_unless_present = "records")]
    text: Option<PathBuf>,
    /// Record file with `>` headers (needs one tag line per record as --tags).
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long)]
    tags: PathBuf,
    /// Minimum occurrence count for `--mode ffreq`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    f: u64,
    /// Seeds the fingerprint base; equal seeds give identical files.
    #[arg(long, default_value_t = BuildOptions::default().seed)]
    seed: u64,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    List,
    Count,
    Topk,
    Ffreq,
}

#[derive(Args)]
struct QueryArgs {
    index: PathBuf,
    /// One pattern per line.
    #[arg(long)]
    patterns: PathBuf,
    #[arg(long, value_enum, default_value = "list")]
    mode: Mode,
    /// Tags to report in `topk` mode.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// 1-based inclusive substring; repeatable. Default: the whole pattern.
    #[arg(long, num_args = 2, value_names = ["I", "J"], action = clap::ArgAction::Append)]
    range: Vec<usize>,
    /// Query every maximal exact match of each pattern.
    #[arg(long, conflicts_with = "range")]
    mems: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MemsArgs {
    index: PathBuf,
    #[arg(long)]
    patterns: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when some pattern lines were rejected.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build(args) => build(args).map(|()| true),
        Command::Stats { index } => {
            let map = load(&index)?;
            print_stats(&map, &mut io::stdout().lock())?;
            Ok(true)
        }
        Command::Query(args) => query(args),
        Command::Mems(args) => query(QueryArgs {
            index: args.index,
            patterns: args.patterns,
            mode: Mode::List,
            k: 1,
            range: Vec::new(),
            mems: true,
            output: args.output,
        }),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &PathBuf) -> Result<WheelerMap> {
    codec::load(path).with_context(|| format!("loading {}", path.display()))
}

fn print_stats(map: &WheelerMap, out: &mut impl Write) -> Result<()> {
    let s = map.stats();
    writeln!(out, "n\tr\tt\tg\tf")?;
    writeln!(out, "{}\t{}\t{}\t{}\t{}", s.n, s.r, s.t, s.g, s.f)?;
    Ok(())
}

fn build(args: BuildArgs) -> Result<()> {
    let tags = read(&args.tags)?;
    let tt = match (&args.text, &args.records) {
        (Some(text), _) => input::plain(&read(text)?, &tags)?,
        (None, Some(records)) => input::records(&read(records)?, &tags)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let options = BuildOptions {
        f: args.f as usize,
        seed: args.seed,
    };
    let map = WheelerMap::build(&tt, &options)?;
    codec::save(&map, &args.output)
        .with_context(|| format!("writing {}", args.output.display()))?;
    print_stats(&map, &mut io::stdout().lock())
}

fn query(args: QueryArgs) -> Result<bool> {
    let map = load(&args.index)?;
    let text =
        fs::read(&args.patterns).with_context(|| format!("reading {}", args.patterns.display()))?;
    let patterns: Vec<(usize, &[u8])> = text
        .split(|&b| b == b'\n')
        .enumerate()
        .map(|(k, l)| (k + 1, l.strip_suffix(b"\r").unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let ranges: Vec<(usize, usize)> = args.range.chunks(2).map(|c| (c[0], c[1])).collect();

    let answered: Vec<(Vec<String>, Vec<String>)> = patterns
        .par_iter()
        .map(|&(line, p)| match map.session(p) {
            Err(e) => (Vec::new(), vec![format!("line {line}: {e}")]),
            Ok(session) => answer(&map, &session, line, &args, &ranges),
        })
        .collect();

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let column = match args.mode {
        Mode::List => "tags",
        Mode::Count => "count",
        Mode::Topk => "top",
        Mode::Ffreq => "frequent",
    };
    writeln!(out, "line\ti\tj\t{column}")?;
    let mut clean = true;
    for (rows, problems) in answered {
        for row in rows {
            writeln!(out, "{row}")?;
        }
        for p in problems {
            eprintln!("{p}");
            clean = false;
        }
    }
    out.flush()?;
    Ok(clean)
}

/// Output rows and diagnostics for one pattern.
fn answer(
    map: &WheelerMap,
    s: &Session,
    line: usize,
    args: &QueryArgs,
    ranges: &[(usize, usize)],
) -> (Vec<String>, Vec<String>) {
    let m = s.pattern().len();
    let spans: Vec<(usize, usize)> = if args.mems {
        s.mems()
            .iter()
            .map(|mem| (mem.start + 1, mem.start + mem.len))
            .collect()
    } else if ranges.is_empty() {
        vec![(1, m)]
    } else {
        ranges.to_vec()
    };
    let payloads = |tags: Option<Vec<u32>>| -> String {
        tags.unwrap_or_default()
            .iter()
            .map(|&t| map.dict().payload(t))
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for (i, j) in spans {
        if i == 0 || i > j || j > m {
            problems.push(format!(
                "line {line}: range {i} {j} outside a pattern of length {m}"
            ));
            continue;
        }
        let (a, b) = (i - 1, j - 1);
        let value = match args.mode {
            Mode::List => s.list(a, b).map(payloads),
            Mode::Ffreq => s.frequent_tags(a, b).map(payloads),
            Mode::Count => s.count_distinct(a, b).map(|c| c.unwrap_or(0).to_string()),
            Mode::Topk => s.top_k(a, b, args.k as usize).map(|top| {
                let mut top = top.unwrap_or_default();
                top.sort_by_key(|c| (std::cmp::Reverse(c.weight.value()), c.tag));
                top.iter()
                    .map(|c| match c.weight {
                        Weight::Exact(w) => format!("{}:{w}", map.dict().payload(c.tag)),
                        Weight::AtLeast(w) => format!("{}:>={w}", map.dict().payload(c.tag)),
                    })
                    .collect::<Vec<_>>()
                    .join(",")
            }),
        };
        match value {
            Ok(v) => rows.push(format!("{line}\t{i}\t{j}\t{v}")),
            Err(e) => problems.push(format!("line {line}: {e}")),
        }
    }
    (rows, problems)
}
