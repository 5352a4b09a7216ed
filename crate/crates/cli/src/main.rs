use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use psolve_core::conditions::{analyze, ConditionCaps};
use psolve_core::encodings::{encode_coloring, from_cnf, from_sdr, Palette};
use psolve_core::format::{self, ParseError};
use psolve_core::oracle::{brute_force_decide_with_cap, count_s_partitions_with_cap, DEFAULT_CAP};
use psolve_core::search::decide_with_stats;
use psolve_core::{
    check_refutation, Bihypergraph, Certificate, DecideConfig, Limits, Method, Side, Strategy,
};
use serde_json::json;

mod report;

const EXIT_HAS_S: u8 = 0;
const EXIT_FAILS_S: u8 = 1;
const EXIT_INDETERMINATE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_CANT_CREATE: u8 = 73;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Read { .. } => EXIT_NO_INPUT,
            CliError::Write { .. } => EXIT_CANT_CREATE,
            CliError::Parse { .. } | CliError::Invalid(_) => EXIT_DATA,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "psolve",
    version,
    about = "Decide Property S for bihypergraphs <V, E, F>"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the instance has an S-partition.
    Decide(DecideArgs),
    /// Validate a resolution proof against an instance.
    Check { instance: PathBuf, proof: PathBuf },
    /// Translate a CNF, graph, or SDR problem into a .bhg instance.
    Encode {
        kind: EncodeKind,
        input: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the sufficient and impossibility conditions.
    Analyze {
        instance: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1_000_000)]
        max_binomial: u64,
        #[arg(long, default_value_t = 24)]
        max_upset_vertices: usize,
    },
    /// Brute-force every subset of V.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also count all S-partitions.
        #[arg(long)]
        count: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(clap::Args)]
struct DecideArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Search)]
    method: MethodArg,
    /// Resolution strategy: ef, fe, or alt:N.
    #[arg(long, default_value = "ef", value_parser = parse_strategy)]
    strategy: Strategy,
    /// Write a refutation here when the instance fails.
    #[arg(long)]
    proof: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long, env = "PSOLVE_MAX_SETS", default_value_t = Limits::default().max_sets)]
    max_sets: usize,
    #[arg(long, default_value_t = Limits::default().max_rounds)]
    max_rounds: usize,
    #[arg(long)]
    max_decisions: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Search,
    Resolution,
    #[value(name = "2sat")]
    TwoSat,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Search => Method::Search,
            MethodArg::Resolution => Method::Resolution,
            MethodArg::TwoSat => Method::TwoSat,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeKind {
    Cnf,
    Coloring,
    Listcoloring,
    Sdr,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "ef" => Ok(Strategy::EOverF),
        "fe" => Ok(Strategy::FOverE),
        _ => {
            let n = s.strip_prefix("alt:").ok_or("expected ef, fe, or alt:N")?;
            match n.parse::<u32>() {
                Ok(depth) if depth >= 1 => Ok(Strategy::Alternating {
                    depth,
                    first: Side::E,
                }),
                _ => Err(format!(
                    "alternation depth must be a positive integer, got `{n}`"
                )),
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn load(path: &Path) -> Result<Bihypergraph, CliError> {
    let b = parsed(path, format::parse_bhg(&read(path)?))?;
    for w in b.validate() {
        eprintln!("warning: {w}");
    }
    Ok(b)
}

fn emit_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("JSON values always serialize")
    );
}

fn verdict_exit(cert: &Certificate) -> u8 {
    match cert {
        Certificate::HasS(_) => EXIT_HAS_S,
        Certificate::FailsS(_) => EXIT_FAILS_S,
    }
}

fn cmd_decide(args: DecideArgs) -> Result<u8, CliError> {
    let b = load(&args.instance)?;
    let method = Method::from(args.method);
    let config = DecideConfig {
        method,
        strategy: args.strategy,
        limits: Limits {
            max_sets: args.max_sets,
            max_rounds: args.max_rounds,
            ..Limits::default()
        },
        max_decisions: args.max_decisions,
        refute_failures: args.proof.is_some(),
        ..DecideConfig::default()
    };
    let decision = match decide_with_stats(&b, &config) {
        Ok(d) => d,
        Err(e) => {
            if args.json {
                emit_json(report::indeterminate(method, &e));
            } else {
                println!("verdict: Unknown");
                println!("method: {method}");
            }
            eprintln!("indeterminate: {e}");
            return Ok(EXIT_INDETERMINATE);
        }
    };
    let cert = &decision.certificate;
    if let (Some(path), Some(r)) = (&args.proof, cert.refutation()) {
        write(path, &format::print_proof(&b, r))?;
    }
    if args.json {
        emit_json(report::decision(&b, method, &decision));
    } else {
        println!("verdict: {}", cert.verdict());
        println!("method: {method}");
        match cert {
            Certificate::HasS(p) => {
                println!("X = {}", b.display_set(&p.x_side));
                println!(
                    "V \\ X = {}",
                    b.display_set(&p.x_side.complement(b.vertex_count()))
                );
            }
            Certificate::FailsS(_) => match cert.refutation() {
                Some(r) => print!("{}", format::print_proof(&b, r)),
                None => println!("no S-partition (search exhausted)"),
            },
        }
    }
    Ok(verdict_exit(cert))
}

fn cmd_check(instance: &Path, proof: &Path) -> Result<u8, CliError> {
    let b = load(instance)?;
    let r = parsed(proof, format::parse_proof(&read(proof)?, &b))?;
    match check_refutation(&b, &r) {
        Ok(()) => {
            println!("valid: {} steps, mode {}", r.steps.len(), r.mode);
            Ok(0)
        }
        Err(failure) => {
            println!("invalid: {failure}");
            Ok(1)
        }
    }
}

fn cmd_encode(kind: EncodeKind, input: &Path, output: Option<&Path>) -> Result<u8, CliError> {
    let text = read(input)?;
    let invalid = |e: psolve_core::Error| CliError::Invalid(format!("{}: {e}", input.display()));
    let b = match kind {
        EncodeKind::Cnf => from_cnf(&parsed(input, format::parse_dimacs(&text))?).graph,
        EncodeKind::Coloring | EncodeKind::Listcoloring => {
            let instance = parsed(input, format::parse_graph(&text))?;
            match (&instance.palette, kind) {
                (Palette::Uniform(_), EncodeKind::Coloring) => {}
                (Palette::Lists(lists), EncodeKind::Listcoloring) => {
                    for (v, l) in instance.graph.vertices().iter().zip(lists) {
                        if l.is_empty() {
                            eprintln!("warning: vertex `{v}` has an empty list; the instance is uncolorable");
                        }
                    }
                }
                (Palette::Uniform(_), _) => {
                    return Err(CliError::Usage(
                        "input uses `colors N`; encode it as `coloring`".into(),
                    ))
                }
                (Palette::Lists(_), _) => {
                    return Err(CliError::Usage(
                        "input uses `list` lines; encode it as `listcoloring`".into(),
                    ))
                }
            }
            encode_coloring(&instance).map_err(invalid)?.graph
        }
        EncodeKind::Sdr => {
            from_sdr(&parsed(input, format::parse_sdr(&text))?)
                .map_err(invalid)?
                .graph
        }
    };
    let out = format::print_bhg(&b);
    match output {
        Some(path) => write(path, &out)?,
        None => print!("{out}"),
    }
    Ok(0)
}

fn cmd_analyze(instance: &Path, json: bool, caps: ConditionCaps) -> Result<u8, CliError> {
    let b = load(instance)?;
    let reports = analyze(&b, caps);
    if json {
        emit_json(report::conditions(&reports));
    } else {
        for r in &reports {
            print!("{}: {}", r.criterion.name(), r.verdict);
            if let Some(q) = &r.computed {
                print!(" ({})", report::describe_quantity(q));
            }
            if let Some(note) = &r.note {
                print!(" [{note}]");
            }
            println!();
        }
    }
    Ok(0)
}

fn cmd_oracle(instance: &Path, json: bool, count: bool, cap: usize) -> Result<u8, CliError> {
    let b = load(instance)?;
    let outcome = brute_force_decide_with_cap(&b, cap).and_then(|cert| {
        Ok((
            cert,
            if count {
                Some(count_s_partitions_with_cap(&b, cap)?)
            } else {
                None
            },
        ))
    });
    let (cert, total) = match outcome {
        Ok(x) => x,
        Err(e) => {
            if json {
                emit_json(report::indeterminate(Method::Oracle, &e));
            }
            eprintln!("indeterminate: {e}");
            return Ok(EXIT_INDETERMINATE);
        }
    };
    if json {
        let mut doc = report::certificate(&b, Method::Oracle, &cert);
        if let Some(n) = total {
            doc["s_partitions"] = json!(n);
        }
        emit_json(doc);
    } else {
        println!("verdict: {}", cert.verdict());
        if let Some(p) = cert.witness() {
            println!("least X = {}", b.display_set(&p.x_side));
        }
        if let Some(n) = total {
            println!("S-partitions: {n}");
        }
    }
    Ok(verdict_exit(&cert))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Decide(args) => cmd_decide(args),
        Command::Check { instance, proof } => cmd_check(&instance, &proof),
        Command::Encode {
            kind,
            input,
            output,
        } => cmd_encode(kind, &input, output.as_deref()),
        Command::Analyze {
            instance,
            json,
            max_binomial,
            max_upset_vertices,
        } => cmd_analyze(
            &instance,
            json,
            ConditionCaps {
                max_binomial,
                max_upset_vertices,
            },
        ),
        Command::Oracle {
            instance,
            json,
            count,
            cap,
        } => cmd_oracle(&instance, json, count, cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
