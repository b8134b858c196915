use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dupdist::bounds::bound_report;
use dupdist::codec::{decode_path, encode_path, QuadrupleList};
use dupdist::codes::exact_m;
use dupdist::debruijn::{debruijn, linearize, verify_debruijn};
use dupdist::engine::{distance, distance_bounds, DistanceDp, DEFAULT_STATE_BUDGET, DEFAULT_TABLE_BUDGET};
use dupdist::golden::check_binary_table;
use dupdist::repeat::{find_approx_repeat, find_exact_repeat, greedy_dedup_path, longest_exact_repeat, widest_approx_repeat, RepeatHit};
use dupdist::word::{format_strings, parse_strings};
use dupdist::{Beta, CertStep, Error, PathCertificate, QString};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "dupdist", version, about = "Duplication-with-transposition distances for q-ary strings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Alphabet size.
    #[arg(short = 'q', global = true, default_value_t = 2)]
    q: usize,
    /// Relative Hamming radius as "num/den", "0" or "1".
    #[arg(long, global = true)]
    beta: Option<Beta>,
    /// Maximum number of stored states for searches and tables.
    #[arg(long, global = true)]
    budget_states: Option<u64>,
    /// Memory budget for the exhaustive table, in MiB.
    #[arg(long, global = true)]
    budget_mb: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact distance of a string to a root, with a shortest certificate.
    Distance(Inputs),
    /// Maximum distance over all strings of each length up to n.
    Table {
        #[arg(short = 'n')]
        n: usize,
        /// Compare against the published binary table; exit 3 on mismatch.
        #[arg(long)]
        check_table1: bool,
    },
    /// Greedy deduplication certificate (an upper bound).
    Greedy(Inputs),
    /// Generate or verify a de Bruijn sequence.
    Debruijn {
        #[arg(short = 'k')]
        k: usize,
        /// Check this sequence instead of generating one.
        #[arg(long)]
        verify: Option<String>,
        /// Append the first k-1 symbols so every window is a plain substring.
        #[arg(long)]
        linear: bool,
    },
    /// Bounds on the maximum distance at length n.
    Bounds {
        #[arg(short = 'n')]
        n: Option<u64>,
        /// Per-string bounds for this string instead of length bounds.
        #[arg(long)]
        string: Option<String>,
    },
    /// Quadruple encoding of certificates.
    Codec {
        #[command(subcommand)]
        op: CodecOp,
    },
    /// Find a repeated block.
    Repeat {
        string: String,
        /// Minimum (exact) or exact block length (approximate); omit for the longest.
        #[arg(short = 'k')]
        k: Option<usize>,
    },
    /// Largest code of length k with relative distance beta, by exhaustive search.
    Code {
        #[arg(short = 'k')]
        k: usize,
    },
    /// Random strings in the text format, from --seed.
    Random {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Args)]
struct Inputs {
    /// Strings over 0-9a-z.
    strings: Vec<String>,
    /// Read strings from a file in the text format ("-" for stdin).
    #[arg(long)]
    input: Option<String>,
}

#[derive(Subcommand)]
enum CodecOp {
    /// Certificate JSON to quadruples.
    Encode {
        /// Certificate file ("-" for stdin).
        file: String,
    },
    /// Quadruples back to the target string and a certificate.
    Decode {
        #[arg(long)]
        root: String,
        /// "p,l,t,j;p,l,t,j;..."
        #[arg(long)]
        steps: String,
    },
}

/// A failed command and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) | Error::SearchBudget { .. } | Error::Overflow(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    if !(2..=dupdist::word::MAX_Q).contains(&g.q) {
        return Err(usage(format!("-q must be in 2..={}", dupdist::word::MAX_Q)));
    }
    match &cli.command {
        Command::Distance(inputs) => cmd_distance(g, inputs),
        Command::Table { n, check_table1 } => cmd_table(g, *n, *check_table1),
        Command::Greedy(inputs) => cmd_greedy(g, inputs),
        Command::Debruijn { k, verify, linear } => cmd_debruijn(g, *k, verify.as_deref(), *linear),
        Command::Bounds { n, string } => cmd_bounds(g, *n, string.as_deref()),
        Command::Codec { op } => cmd_codec(g, op),
        Command::Repeat { string, k } => cmd_repeat(g, string, *k),
        Command::Code { k } => cmd_code(g, *k),
        Command::Random { n, count } => cmd_random(g, *n, *count),
    }
}

fn beta(g: &Global) -> Beta {
    g.beta.unwrap_or(Beta::ZERO)
}

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
    }
}

fn strings(g: &Global, inputs: &Inputs) -> Result<Vec<QString>, Failure> {
    let mut out = Vec::new();
    if let Some(path) = &inputs.input {
        out.extend(parse_strings(&read_source(path)?, Some(g.q))?);
    }
    for s in &inputs.strings {
        out.push(QString::parse(s, g.q)?);
    }
    if out.is_empty() {
        return Err(usage("no input strings"));
    }
    if let Some(s) = out.iter().find(|s| s.q() != g.q) {
        return Err(usage(format!("{s} is over q={}, expected q={}", s.q(), g.q)));
    }
    Ok(out)
}

fn cert_value(cert: &PathCertificate) -> Value {
    serde_json::from_str(&cert.to_json()).expect("certificate JSON")
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON value"));
}

fn cmd_distance(g: &Global, inputs: &Inputs) -> CmdResult {
    let b = beta(g);
    let label = if g.beta.is_some() { "f_beta" } else { "f" };
    let budget = g.budget_states.map_or(DEFAULT_STATE_BUDGET, |s| s as usize);
    let mut results = Vec::new();
    for v in strings(g, inputs)? {
        match distance(&v, b, budget) {
            Ok(d) => {
                if g.format == Format::Text {
                    println!("{label}={}", d.f);
                    println!("{}", d.certificate.to_json());
                }
                results.push(json!({
                    "string": v.to_string(),
                    "beta": b.to_string(),
                    "f": d.f,
                    "explored": d.explored,
                    "certificate": cert_value(&d.certificate),
                }));
            }
            Err(Error::SearchBudget { explored, upper }) => {
                let report = distance_bounds(&v, b);
                let lower = report.best_lower().unwrap_or(0.0);
                let message = format!(
                    "{v}: search budget exhausted after {explored} states; {lower} <= {label} <= {upper}"
                );
                if g.format == Format::Json {
                    print_json(&json!({
                        "string": v.to_string(),
                        "error": "budget",
                        "explored": explored,
                        "lower": lower,
                        "upper": upper,
                    }));
                }
                return Err(Failure { code: EXIT_BUDGET, message });
            }
            Err(e) => return Err(e.into()),
        }
    }
    if g.format == Format::Json {
        print_json(&Value::Array(results));
    }
    Ok(())
}

/// Stored-state cap: the explicit state budget, tightened by the memory
/// budget (one byte per binary state, about 32 bytes per hashed state).
fn table_budget(g: &Global) -> u64 {
    let mut budget = g.budget_states.unwrap_or(DEFAULT_TABLE_BUDGET);
    if let Some(mb) = g.budget_mb {
        let per_state = if g.q == 2 { 1 } else { 32 };
        budget = budget.min(mb.saturating_mul(1 << 20) / per_state);
    }
    budget
}

fn cmd_table(g: &Global, n: usize, check: bool) -> CmdResult {
    if n == 0 {
        return Err(usage("-n must be at least 1"));
    }
    let b = beta(g);
    let dp = DistanceDp::compute(g.q, n, b, table_budget(g))?;
    let table = dp.table();
    match g.format {
        Format::Text => print!("{}", table.to_tsv()),
        Format::Json => println!("{}", table.to_json()),
    }
    if check {
        if g.q != 2 || !b.is_zero() {
            return Err(usage("--check-table1 applies to q=2 with beta 0"));
        }
        let mismatches = check_binary_table(&table);
        if !mismatches.is_empty() {
            for m in &mismatches {
                eprintln!("n={}: expected {}, computed {}, witness {}", m.n, m.expected, m.computed, m.witness);
            }
            return Err(Failure { code: EXIT_VERIFY, message: "table differs from the reference values".into() });
        }
        eprintln!("reference table check passed for n <= {n}");
    }
    Ok(())
}

fn cmd_greedy(g: &Global, inputs: &Inputs) -> CmdResult {
    let b = beta(g);
    let mut results = Vec::new();
    for v in strings(g, inputs)? {
        let cert = greedy_dedup_path(&v, b);
        if let Err(e) = cert.verify() {
            return Err(Failure { code: EXIT_VERIFY, message: format!("{v}: {e}") });
        }
        if g.format == Format::Text {
            println!("steps={}", cert.len());
            println!("{}", cert.to_json());
        }
        results.push(cert_value(&cert));
    }
    if g.format == Format::Json {
        print_json(&Value::Array(results));
    }
    Ok(())
}

fn cmd_debruijn(g: &Global, k: usize, verify: Option<&str>, linear: bool) -> CmdResult {
    let (seq, generated) = match verify {
        Some(s) => (QString::parse(s, g.q)?, false),
        None => (debruijn(g.q, k)?, true),
    };
    let ok = verify_debruijn(&seq, k);
    let shown = if linear { linearize(&seq, k) } else { seq.clone() };
    let summary = format!(
        "{}: q={} k={} length={} {}",
        if generated { "generated" } else { "checked" },
        g.q,
        k,
        seq.len(),
        if ok { "de Bruijn: yes" } else { "de Bruijn: no" }
    );
    match g.format {
        Format::Text => {
            print!("{}", format_strings(std::slice::from_ref(&shown)));
            println!("# {summary}");
        }
        Format::Json => print_json(&json!({
            "q": g.q,
            "k": k,
            "sequence": shown.to_string(),
            "linear": linear,
            "de_bruijn": ok,
        })),
    }
    if ok {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY, message: format!("{seq} is not a de Bruijn sequence of order {k}") })
    }
}

fn cmd_bounds(g: &Global, n: Option<u64>, string: Option<&str>) -> CmdResult {
    let b = beta(g);
    let report = match (n, string) {
        (_, Some(s)) => distance_bounds(&QString::parse(s, g.q)?, b),
        (Some(n), None) => bound_report(g.q, n, b)?,
        (None, None) => return Err(usage("bounds needs -n or --string")),
    };
    match g.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print_json(&serde_json::to_value(&report).expect("report JSON")),
    }
    if report.is_consistent() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY, message: "a certified lower bound exceeds an upper bound".into() })
    }
}

fn cmd_codec(g: &Global, op: &CodecOp) -> CmdResult {
    match op {
        CodecOp::Encode { file } => {
            let cert = PathCertificate::from_json(&read_source(file)?)?;
            if let Err(e) = cert.verify() {
                return Err(Failure { code: EXIT_VERIFY, message: format!("certificate rejected: {e}") });
            }
            let b = g.beta.unwrap_or(cert.beta);
            let quads = QuadrupleList(encode_path(&cert, b)?);
            match g.format {
                Format::Text => {
                    println!("q={} root={} beta={}", cert.q, cert.root, b);
                    println!("{quads}");
                }
                Format::Json => print_json(&json!({
                    "q": cert.q,
                    "root": cert.root.to_string(),
                    "beta": b.to_string(),
                    "steps": quads.to_string(),
                })),
            }
        }
        CodecOp::Decode { root, steps } => {
            let b = beta(g);
            let root = QString::parse(root, g.q)?;
            let quads: QuadrupleList = steps.parse()?;
            let target = decode_path(g.q, &root, &quads.0, b)?;
            let cert = PathCertificate {
                q: g.q,
                root,
                target: target.clone(),
                beta: b,
                steps: quads.0.iter().map(|s| CertStep { p: s.p, l: s.l, t: s.t, j: Some(s.j) }).collect(),
            };
            if let Err(e) = cert.verify() {
                return Err(Failure { code: EXIT_VERIFY, message: format!("decoded certificate rejected: {e}") });
            }
            match g.format {
                Format::Text => {
                    println!("{target}");
                    println!("{}", cert.to_json());
                }
                Format::Json => print_json(&cert_value(&cert)),
            }
        }
    }
    Ok(())
}

fn hit_value(x: &QString, hit: &RepeatHit) -> Value {
    let s = x.symbols();
    let block = |at: usize| QString::new(s[at..at + hit.b_len].to_vec(), x.q()).expect("in alphabet").to_string();
    json!({
        "left": hit.left(),
        "right": hit.right(),
        "length": hit.b_len,
        "hamming": hit.hamming,
        "admission": format!("{:?}", hit.admission).to_lowercase(),
        "b": block(hit.left()),
        "b_hat": block(hit.right()),
    })
}

fn cmd_repeat(g: &Global, string: &str, k: Option<usize>) -> CmdResult {
    let x = QString::parse(string, g.q)?;
    let b = beta(g);
    if k == Some(0) {
        return Err(usage("-k must be at least 1"));
    }
    let hit = match (b.is_zero(), k) {
        (true, Some(k)) => find_exact_repeat(&x, k),
        (true, None) => longest_exact_repeat(&x),
        (false, Some(k)) => find_approx_repeat(&x, k, b),
        (false, None) => widest_approx_repeat(&x, b),
    };
    match (g.format, hit) {
        (Format::Json, hit) => print_json(&hit.map_or(Value::Null, |h| hit_value(&x, &h))),
        (Format::Text, None) => println!("none"),
        (Format::Text, Some(h)) => {
            let v = hit_value(&x, &h);
            println!(
                "b={} at {} b_hat={} at {} length={} hamming={} admitted={}",
                v["b"].as_str().unwrap_or_default(),
                h.left(),
                v["b_hat"].as_str().unwrap_or_default(),
                h.right(),
                h.b_len,
                h.hamming,
                v["admission"].as_str().unwrap_or_default()
            );
        }
    }
    Ok(())
}

fn cmd_code(g: &Global, k: usize) -> CmdResult {
    let r = exact_m(g.q, k, beta(g))?;
    let words: Vec<String> = r.witness.iter().map(|w| w.to_string()).collect();
    match g.format {
        Format::Text => {
            println!("M={} min_distance={} nodes={}", r.size, r.min_distance, r.nodes);
            for w in &words {
                println!("{w}");
            }
        }
        Format::Json => print_json(&json!({
            "q": r.q,
            "k": r.k,
            "beta": r.beta.to_string(),
            "min_distance": r.min_distance,
            "M": r.size,
            "witness": words,
        })),
    }
    Ok(())
}

fn cmd_random(g: &Global, n: usize, count: usize) -> CmdResult {
    if n == 0 {
        return Err(usage("-n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let strings: Vec<QString> = (0..count)
        .map(|_| QString::new((0..n).map(|_| rng.gen_range(0..g.q) as u8).collect(), g.q).expect("in alphabet"))
        .collect();
    match g.format {
        Format::Text => print!("{}", format_strings(&strings)),
        Format::Json => print_json(&json!({
            "q": g.q,
            "seed": g.seed,
            "strings": strings.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}
