//! `tasep`: brackets, stationary tables, verification suites, simulation and
//! queue diagrams for the circular multispecies TASEP.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tasep::binomial::multinomial;
use tasep::chain::{
    simulate, stationary_exact, total_variation, ChainSpec, Convention, StationaryTable,
    DEFAULT_STATE_CAP, RNG_ALGORITHM,
};
use tasep::formulas::parse_rational_list;
use tasep::mlq::{bracket, count_all, mlqs_representing, partition_function, DEFAULT_BUDGET};
use tasep::verify::{Suite, Verifier};
use tasep::words::{canonical_rotation, sorted_word, type_of};
use tasep::{Error, TypeVector, Word};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "tasep", version, about = "Multispecies TASEP and multi-line queues")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Maximum number of multi-line queues to enumerate.
    #[arg(long, global = true, env = "TASEP_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Maximum number of chain states for exact solves.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    cap: u128,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Ascii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Mlq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Style {
    Ascii,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Jumper,
    Blocker,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    FerrariMartin,
    Lemma1,
    Cyclic,
    Reversal,
    BaAa,
    EbSum,
    Scaling,
    Binomial,
    TheoremFinish,
    InhomReduce,
    OrderInvariance,
}

#[derive(Subcommand)]
enum Command {
    /// Count the queues representing each word of a type, or one word.
    Brackets {
        #[arg(long = "type", conflicts_with = "word", required_unless_present = "word")]
        type_vector: Option<TypeVector>,
        #[arg(long)]
        word: Option<Word>,
    },
    /// Stationary distribution of a type as exact rationals.
    Stationary {
        #[arg(long = "type")]
        type_vector: TypeVector,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
    },
    /// Run exhaustive verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
    },
    /// Simulate the chain and compare with the exact distribution.
    Simulate {
        #[arg(long = "type")]
        type_vector: TypeVector,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Start word; defaults to the sorted word.
        #[arg(long)]
        start: Option<Word>,
        /// Species rates x_1,...,x_{r-1} as rationals, e.g. "1,2" or "1/2,3".
        #[arg(long)]
        rates: Option<String>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Jumper)]
        convention: ConventionArg,
    },
    /// Draw the queues representing a word.
    Render {
        #[arg(long)]
        word: Word,
        /// Render only the k-th queue (1-based, in enumeration order).
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, value_enum, default_value_t = Style::Ascii)]
        style: Style,
    },
}

enum Failure {
    Verification,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Brackets { type_vector, word } => match (type_vector, word) {
            (_, Some(w)) => brackets_word(g, w),
            (Some(m), None) => brackets_type(g, m),
            (None, None) => Err(Failure::Usage("one of --type or --word is required".into())),
        },
        Command::Stationary {
            type_vector,
            method,
        } => stationary(g, type_vector, *method),
        Command::Verify { suite, nmax } => verify(g, *suite, *nmax),
        Command::Simulate {
            type_vector,
            steps,
            seed,
            start,
            rates,
            convention,
        } => simulate_cmd(g, type_vector, *steps, *seed, start.as_ref(), rates.as_deref(), *convention),
        Command::Render { word, index, style } => render(g, word, *index, *style),
    }
}

fn to_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn brackets_word(g: &Global, w: &Word) -> Outcome {
    let value = bracket(w, g.budget)?;
    Ok(match g.format {
        Format::Json => to_json(json!({
            "schema": SCHEMA_VERSION,
            "command": "brackets",
            "word": w.to_string(),
            "bracket": value,
        })),
        Format::Csv => format!("word,bracket\n{w},{value}\n"),
        Format::Ascii => format!("[{w}] = {value}\n"),
    })
}

fn brackets_type(g: &Global, m: &TypeVector) -> Outcome {
    let table = count_all(m, g.budget)?;
    let z = partition_function(m);
    let mut classes: BTreeMap<Word, (u64, u64)> = BTreeMap::new();
    for (w, &b) in &table {
        let e = classes.entry(canonical_rotation(w)).or_insert((b, 0));
        e.1 += 1;
    }
    Ok(match g.format {
        Format::Json => {
            let brackets: serde_json::Map<String, Value> =
                table.iter().map(|(w, b)| (w.to_string(), json!(b))).collect();
            let classes: Vec<Value> = classes
                .iter()
                .map(|(w, (b, size))| json!({"representative": w.to_string(), "size": size, "bracket": b}))
                .collect();
            to_json(json!({
                "schema": SCHEMA_VERSION,
                "command": "brackets",
                "type": m.to_string(),
                "Z": z.to_string(),
                "classes": classes,
                "brackets": brackets,
            }))
        }
        Format::Csv => {
            let mut s = String::from("word,bracket\n");
            for (w, b) in &table {
                writeln!(s, "{w},{b}").unwrap();
            }
            s
        }
        Format::Ascii => {
            let mut s = format!("type {m}, Z = {z}\n");
            for (w, (b, size)) in &classes {
                writeln!(s, "[{w}] = {b}  ({size} rotations)").unwrap();
            }
            s
        }
    })
}

fn render_table(g: &Global, method: &str, t: &StationaryTable) -> String {
    match g.format {
        Format::Json => {
            let mut v = t.to_json();
            v["schema"] = json!(SCHEMA_VERSION);
            v["command"] = json!("stationary");
            v["method"] = json!(method);
            to_json(v)
        }
        Format::Csv => t.to_csv(),
        Format::Ascii => {
            let mut s = format!("type {}, method {method}\n", t.type_vector());
            for (w, p) in t.entries() {
                writeln!(s, "pi({w}) = {p}").unwrap();
            }
            s
        }
    }
}

fn stationary(g: &Global, m: &TypeVector, method: Method) -> Outcome {
    let table = match method {
        Method::Exact => stationary_exact(&ChainSpec::homogeneous(m.clone())?, g.cap)?,
        Method::Mlq => StationaryTable::from_brackets(m, &count_all(m, g.budget)?),
    };
    let name = match method {
        Method::Exact => "exact",
        Method::Mlq => "mlq",
    };
    Ok(render_table(g, name, &table))
}

fn verify(g: &Global, suite: SuiteArg, nmax: usize) -> Outcome {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        other => {
            let name = other.to_possible_value().expect("not skipped");
            vec![name.get_name().parse()?]
        }
    };
    let mut verifier = Verifier::new(g.budget, g.cap);
    let mut reports = Vec::new();
    for s in suites {
        let report = verifier.run(s, nmax)?;
        if let Some(f) = &report.failure {
            eprintln!("{s}: counterexample: {f}");
        }
        reports.push(report);
    }
    let all_pass = reports.iter().all(|r| r.passed());
    let out = match g.format {
        Format::Json => to_json(json!({
            "schema": SCHEMA_VERSION,
            "command": "verify",
            "nmax": nmax,
            "passed": all_pass,
            "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("suite,nmax,cases,passed,counterexample\n");
            for r in &reports {
                let ce = r.failure.clone().unwrap_or_default().replace('"', "\"\"");
                writeln!(s, "{},{},{},{},\"{}\"", r.suite, nmax, r.cases, r.passed(), ce).unwrap();
            }
            s
        }
        Format::Ascii => {
            let mut s = String::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(s, "{status} {} (n <= {nmax}, {} cases): {}", r.suite, r.cases, r.suite.statement()).unwrap();
                if let Some(f) = &r.failure {
                    writeln!(s, "  counterexample: {f}").unwrap();
                }
            }
            s
        }
    };
    if all_pass {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn simulate_cmd(
    g: &Global,
    m: &TypeVector,
    steps: u64,
    seed: u64,
    start: Option<&Word>,
    rates: Option<&str>,
    convention: ConventionArg,
) -> Outcome {
    let convention = match convention {
        ConventionArg::Jumper => Convention::JumperClass,
        ConventionArg::Blocker => Convention::BlockerClass,
    };
    let spec = match rates {
        Some(text) => ChainSpec::with_rates(m.clone(), parse_rational_list(text)?, convention)?,
        None => ChainSpec::homogeneous(m.clone())?,
    };
    let start = match start {
        Some(w) => w.clone(),
        None => sorted_word(m)?,
    };
    if type_of(&start).ok().as_ref() != Some(m) {
        return Err(Failure::Usage(format!("start word {start} is not of type {m}")));
    }
    let sim = simulate(&spec, &start, steps, seed)?;
    let states = multinomial(m.counts());
    let exact = match states {
        Some(s) if s <= g.cap => Some(stationary_exact(&spec, g.cap)?),
        _ => None,
    };
    let tv = exact.as_ref().map(|t| total_variation(&sim, t));
    let rate_strings: Option<Vec<String>> = spec.rates().map(|r| r.iter().map(|x| x.to_string()).collect());
    Ok(match g.format {
        Format::Json => {
            let counts: serde_json::Map<String, Value> =
                sim.counts.iter().map(|(w, c)| (w.to_string(), json!(c))).collect();
            let exact_json = exact.as_ref().map(|t| {
                t.entries()
                    .iter()
                    .map(|(w, p)| (w.to_string(), json!(p.to_string())))
                    .collect::<serde_json::Map<String, Value>>()
            });
            to_json(json!({
                "schema": SCHEMA_VERSION,
                "command": "simulate",
                "type": m.to_string(),
                "start": start.to_string(),
                "steps": steps,
                "seed": seed,
                "rng": RNG_ALGORITHM,
                "rates": rate_strings,
                "convention": rates.map(|_| spec.convention().name()),
                "visits": steps + 1,
                "counts": counts,
                "exact": exact_json,
                "total_variation": tv,
            }))
        }
        Format::Csv => {
            let mut s = String::from("word,count,exact_num,exact_den\n");
            for (w, c) in &sim.counts {
                match exact.as_ref().and_then(|t| t.get(w)) {
                    Some(p) => writeln!(s, "{w},{c},{},{}", p.numer(), p.denom()).unwrap(),
                    None => writeln!(s, "{w},{c},,").unwrap(),
                }
            }
            s
        }
        Format::Ascii => {
            let mut s = format!("type {m}, {steps} steps from {start}, seed {seed}\n");
            for (w, c) in &sim.counts {
                match exact.as_ref().and_then(|t| t.get(w)) {
                    Some(p) => writeln!(s, "{w}: {c} visits, exact {p}").unwrap(),
                    None => writeln!(s, "{w}: {c} visits").unwrap(),
                }
            }
            if let Some(tv) = tv {
                writeln!(s, "total variation: {tv:.6}").unwrap();
            }
            s
        }
    })
}

fn render(g: &Global, w: &Word, index: Option<usize>, style: Style) -> Outcome {
    let all = mlqs_representing(w, g.budget)?;
    let chosen: Vec<_> = match index {
        None => all.iter().collect(),
        Some(k) if k >= 1 && k <= all.len() => vec![&all[k - 1]],
        Some(k) => {
            return Err(Failure::Usage(format!(
                "index {k} out of range: {w} has {} queues",
                all.len()
            )))
        }
    };
    Ok(match style {
        Style::Json => to_json(json!({
            "schema": SCHEMA_VERSION,
            "command": "render",
            "word": w.to_string(),
            "bracket": all.len(),
            "queues": chosen.iter().map(|q| q.to_json()).collect::<Vec<_>>(),
        })),
        Style::Ascii => {
            let mut s = String::new();
            for (i, q) in chosen.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                s.push_str(&q.to_ascii());
            }
            s
        }
    })
}
