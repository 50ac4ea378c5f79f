//! The `positroid` command line.
//!
//! [`run`] parses an argument vector and returns the exit code and the text
//! to print; `main` only does the printing. Exit codes: 0 success, 1 bad
//! input or usage, 2 a verification suite failed, 3 an internal assertion
//! (no positive coline where one is guaranteed).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{BufWriter, Read};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use positroid::coline::{cocircuit_pair_witness, positive_coline};
use positroid::enumerate::{
    gen_le_diagrams, verify, Catalog, Suite, VerificationReport, VerifyOptions,
};
use positroid::routing::max_disjoint_routing;
use positroid::simplicity::{graph_loops_coloops, graph_parallel_pairs};
use positroid::structure::{
    components, decompose, has_spanning_circuit, is_connected, isolated_blocks,
};
use positroid::{
    build_le_graph, emit_dot, parse_le_diagram, positroid, rank, BasisMatroid, ColineReport, Error,
    GroundSubset, LeDiagram,
};

/// Worker thread count for `verify`.
pub const THREADS_ENV: &str = "POSITROID_THREADS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub payload: String,
    /// Whether the payload is a result (stdout) rather than a diagnostic
    /// (stderr). Verification reports are results even when they fail.
    pub is_report: bool,
}

impl CommandOutcome {
    fn ok(payload: String) -> Self {
        CommandOutcome {
            exit_code: 0,
            payload,
            is_report: true,
        }
    }

    fn failure(exit_code: i32, payload: String) -> Self {
        CommandOutcome {
            exit_code,
            payload,
            is_report: false,
        }
    }

    fn error(e: &Error) -> Self {
        if e.is_internal() {
            return CommandOutcome::failure(3, format!("internal error: {e}\n"));
        }
        CommandOutcome::failure(1, format!("error: {e}\n"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "positroid", version, about = "Positroids from Le-diagrams")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Diagram file (`.led` or JSON), `-` for stdin
    file: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and check a diagram
    Validate(Input),
    /// Le-graph in DOT format
    Graph(Input),
    /// Bases of the positroid
    Bases(Input),
    /// Rank of a subset
    Rank {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        set: String,
    },
    /// Closure of a subset
    Closure {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        set: String,
    },
    /// Flats of a given rank
    Flats {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rank: usize,
    },
    /// Every coline with its copoint census
    Colines(Input),
    /// Copoints on one coline
    Copoints {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        coline: String,
    },
    /// Constructs a positive coline (simple, rank >= 3)
    PositiveColine(Input),
    /// Cocircuit pair from two simple copoints of a positive coline
    Witness {
        #[command(flatten)]
        input: Input,
        /// Use this coline instead of the constructed one
        #[arg(long)]
        coline: Option<String>,
    },
    /// Connectivity by isolated blocks and by circuits
    Connectivity(Input),
    /// Isolated blocks and their ranks
    Decompose(Input),
    /// Loops, coloops and parallel pairs
    SimpleCheck(Input),
    /// Bases of the dual
    Dual(Input),
    /// Bases of a minor, relabeled in order
    Minor {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "")]
        delete: String,
        #[arg(long, default_value = "")]
        contract: String,
    },
    /// All diagrams of size n
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only diagrams of this rank
        #[arg(long)]
        r: Option<usize>,
        /// Print only the number of diagrams
        #[arg(long)]
        count: bool,
        /// Emit the positroid catalog (line-delimited JSON with hex bases)
        #[arg(long, conflicts_with = "r")]
        catalog: bool,
    },
    /// Exhaustive verification suites
    Verify {
        /// Largest n for every selected suite (defaults differ per suite)
        #[arg(long)]
        n: Option<usize>,
        /// theorem, corollary, lemma, duality, rank-oracle, axioms or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let exit_code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return CommandOutcome {
                exit_code,
                payload: e.render().to_string(),
                is_report: exit_code == 0,
            };
        }
    };
    match dispatch(cli.command, cli.json) {
        Ok(outcome) => outcome,
        Err(CliError::Domain(e)) => CommandOutcome::error(&e),
        Err(CliError::Io(msg)) => CommandOutcome::failure(1, format!("error: {msg}\n")),
    }
}

enum CliError {
    Domain(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn load(input: &Input) -> Result<LeDiagram, CliError> {
    let text = if input.file == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&input.file)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.file)))?
    };
    Ok(parse_le_diagram(&text)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output types serialize");
    s.push('\n');
    s
}

fn lex_sorted(mut sets: Vec<GroundSubset>) -> Vec<GroundSubset> {
    sets.sort_by(|a, b| a.lex_cmp(*b));
    sets
}

fn set_lines(sets: &[GroundSubset]) -> String {
    sets.iter().map(|s| format!("{s}\n")).collect()
}

fn dispatch(command: Command, json: bool) -> Result<CommandOutcome, CliError> {
    let out = |text: String, value: serde_json::Value| {
        Ok(CommandOutcome::ok(if json {
            to_json(&value)
        } else {
            text
        }))
    };

    match command {
        Command::Validate(input) => {
            let d = load(&input)?;
            out(
                format!(
                    "valid: n={} r={} path={} dots={}\n",
                    d.n(),
                    d.rank(),
                    d.path_string(),
                    d.dots().len()
                ),
                json!({ "valid": true, "diagram": d }),
            )
        }
        Command::Graph(input) => {
            let g = build_le_graph(&load(&input)?);
            let vertices: Vec<_> = (0..g.vertex_count())
                .map(|id| {
                    let kind = if g.is_sink_id(id) {
                        "sink"
                    } else if g.is_source_id(id) {
                        "source"
                    } else {
                        "internal"
                    };
                    json!({ "name": g.name(id), "class": kind })
                })
                .collect();
            let arcs: Vec<_> = g
                .digraph()
                .arcs()
                .map(|(a, b)| [g.name(a), g.name(b)])
                .collect();
            out(emit_dot(&g), json!({ "vertices": vertices, "arcs": arcs }))
        }
        Command::Bases(input) => {
            let m = positroid(&load(&input)?);
            Ok(CommandOutcome::ok(bases_output(&m, json, None)))
        }
        Command::Rank { input, set } => {
            let d = load(&input)?;
            let set = GroundSubset::parse_list(d.n(), &set)?;
            let g = build_le_graph(&d);
            let r = rank(&g, set);
            let plan = max_disjoint_routing(&g, set - d.sinks(), d.sinks() - set)?;
            out(
                format!("{r}\n"),
                json!({ "set": set, "rank": r, "routing": plan }),
            )
        }
        Command::Closure { input, set } => {
            let d = load(&input)?;
            let set = GroundSubset::parse_list(d.n(), &set)?;
            let flat = positroid(&d).closure(set);
            out(
                format!("{} (rank {})\n", flat.elements, flat.rank),
                json!({ "set": set, "closure": flat.elements, "rank": flat.rank }),
            )
        }
        Command::Flats { input, rank } => {
            let m = positroid(&load(&input)?);
            let flats = lex_sorted(
                m.flats_of_rank(rank)?
                    .into_iter()
                    .map(|f| f.elements)
                    .collect(),
            );
            out(set_lines(&flats), json!({ "rank": rank, "flats": flats }))
        }
        Command::Colines(input) => {
            let m = positroid(&load(&input)?);
            let mut reports = m
                .colines()
                .into_iter()
                .map(|l| m.copoints_on(l.elements))
                .collect::<Result<Vec<_>, _>>()?;
            reports.sort_by(|a, b| a.coline.elements.lex_cmp(b.coline.elements));
            let text = reports
                .iter()
                .map(|r| {
                    format!(
                        "{}  {} simple / {} multiple{}\n",
                        r.coline.elements,
                        r.simple_count(),
                        r.multiple_count(),
                        if r.positive { "  positive" } else { "" }
                    )
                })
                .collect();
            out(text, json!(reports))
        }
        Command::Copoints { input, coline } => {
            let d = load(&input)?;
            let line = GroundSubset::parse_list(d.n(), &coline)?;
            let report = positroid(&d).copoints_on(line)?;
            out(census_text(&report), json!(report))
        }
        Command::PositiveColine(input) => {
            let d = load(&input)?;
            let pc = positive_coline(&positroid(&d), &d)?;
            let mut text = String::new();
            for (name, rejected) in ["A", "B"].iter().zip(&pc.rejected) {
                let _ = writeln!(
                    text,
                    "candidate {name} {} rejected: {} simple / {} multiple",
                    rejected.coline.elements,
                    rejected.simple_count(),
                    rejected.multiple_count()
                );
            }
            if let Some(c) = pc.component {
                let _ = writeln!(text, "built in component {c}");
            }
            let candidate = serde_json::to_value(pc.candidate).expect("serializes");
            let _ = writeln!(text, "candidate {}", candidate.as_str().unwrap_or_default());
            text.push_str(&census_text(&pc.report));
            out(text, json!(pc))
        }
        Command::Witness { input, coline } => {
            let d = load(&input)?;
            let m = positroid(&d);
            let report = match coline {
                Some(c) => m.copoints_on(GroundSubset::parse_list(d.n(), &c)?)?,
                None => positive_coline(&m, &d)?.report,
            };
            let w = cocircuit_pair_witness(&m, &report)?;
            out(
                format!(
                    "coline {}\ncocircuits {} {}\nsymmetric difference {}\n",
                    w.coline,
                    w.c1,
                    w.c2,
                    w.symmetric_difference()
                ),
                json!(w),
            )
        }
        Command::Connectivity(input) => {
            let d = load(&input)?;
            let m = positroid(&d);
            let blocks = isolated_blocks(&d).blocks;
            let by_circuits = is_connected(&m);
            let spanning = has_spanning_circuit(&m);
            out(
                format!(
                    "{}\nisolated blocks: {}\nconnected by circuits: {}\nspanning circuit: {}\n",
                    if blocks.len() <= 1 {
                        "connected"
                    } else {
                        "disconnected"
                    },
                    blocks.len(),
                    yes_no(by_circuits),
                    yes_no(spanning)
                ),
                json!({
                    "connected": blocks.len() <= 1,
                    "isolated_blocks": blocks.len(),
                    "connected_by_circuits": by_circuits,
                    "components": components(&m),
                    "spanning_circuit": spanning,
                }),
            )
        }
        Command::Decompose(input) => {
            let d = load(&input)?;
            let m = positroid(&d);
            let report = isolated_blocks(&d);
            let parts = decompose(&m, &d)?;
            let text = parts
                .iter()
                .map(|c| format!("{}  rank {}\n", c.labels, c.matroid.rank()))
                .collect();
            out(text, json!(report))
        }
        Command::SimpleCheck(input) => {
            let d = load(&input)?;
            let m = positroid(&d);
            let (loops, coloops) = m.loops_coloops();
            let parallel = m.parallel_pairs();
            let agree =
                graph_loops_coloops(&d) == (loops, coloops) && graph_parallel_pairs(&d) == parallel;
            let pairs = parallel
                .iter()
                .map(|(a, b)| format!("{{{a},{b}}}"))
                .collect::<Vec<_>>()
                .join(" ");
            out(
                format!(
                    "{}\nloops: {loops}\ncoloops: {coloops}\nparallel pairs: {}\ngraph and matroid detectors agree: {}\n",
                    if m.is_simple() { "simple" } else { "not simple" },
                    if pairs.is_empty() { "none" } else { &pairs },
                    yes_no(agree)
                ),
                json!({
                    "simple": m.is_simple(),
                    "loops": loops,
                    "coloops": coloops,
                    "parallel": parallel,
                    "detectors_agree": agree,
                }),
            )
        }
        Command::Dual(input) => {
            let m = positroid(&load(&input)?).dual();
            Ok(CommandOutcome::ok(bases_output(&m, json, None)))
        }
        Command::Minor {
            input,
            delete,
            contract,
        } => {
            let d = load(&input)?;
            let delete = GroundSubset::parse_list(d.n(), &delete)?;
            let contract = GroundSubset::parse_list(d.n(), &contract)?;
            let minor = positroid(&d).minor(delete, contract)?;
            Ok(CommandOutcome::ok(bases_output(
                &minor.matroid,
                json,
                Some(&minor.labels),
            )))
        }
        Command::Enumerate {
            n,
            r,
            count,
            catalog,
        } => enumerate(n, r, count, catalog, json),
        Command::Verify { n, suite } => {
            let mut options = VerifyOptions::new(Suite::parse_selector(&suite)?);
            options.n_max = n;
            options.threads = threads_from_env()?;
            let report = verify(&options)?;
            let exit_code = if !report.theorem_failures.is_empty() {
                3
            } else if report.is_success() {
                0
            } else {
                2
            };
            Ok(CommandOutcome {
                exit_code,
                payload: format_report(&report, if json { Mode::Json } else { Mode::Text }),
                is_report: true,
            })
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(CliError::Io(format!(
                "{THREADS_ENV}={v:?} is not a positive thread count"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn bases_output(m: &BasisMatroid, json: bool, labels: Option<&[usize]>) -> String {
    let bases = lex_sorted(m.bases().to_vec());
    if json {
        let mut v = json!({ "n": m.n(), "r": m.rank(), "bases": bases });
        if let Some(labels) = labels {
            v["labels"] = json!(labels);
        }
        return to_json(&v);
    }
    let mut text = String::new();
    if let Some(labels) = labels {
        let names: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(
            text,
            "# elements 1..{} are {}",
            labels.len(),
            names.join(",")
        );
    }
    text.push_str(&set_lines(&bases));
    text
}

fn census_text(r: &ColineReport) -> String {
    let mut text = format!("coline {} (rank {})\n", r.coline.elements, r.coline.rank);
    for c in &r.copoints {
        let kind = serde_json::to_value(c.kind).expect("serializes");
        let _ = writeln!(text, "{} {}", kind.as_str().unwrap_or_default(), c.set);
    }
    let _ = writeln!(
        text,
        "positive: {} ({} simple, {} multiple)",
        yes_no(r.positive),
        r.simple_count(),
        r.multiple_count()
    );
    text
}

fn enumerate(
    n: usize,
    r: Option<usize>,
    count: bool,
    catalog: bool,
    json: bool,
) -> Result<CommandOutcome, CliError> {
    if catalog {
        let cat = positroid::enumerate::catalog(n)?;
        if count {
            return Ok(CommandOutcome::ok(format!("{}\n", cat.len())));
        }
        return Ok(CommandOutcome::ok(catalog_text(&cat)));
    }
    let diagrams = gen_le_diagrams(n, r)?;
    if count {
        return Ok(CommandOutcome::ok(format!("{}\n", diagrams.count())));
    }
    let mut text = String::new();
    for d in diagrams {
        if json {
            text.push_str(&serde_json::to_string(&d).expect("diagrams serialize"));
        } else {
            let dots: Vec<String> = d.dots().iter().map(|(s, h)| format!("{s},{h}")).collect();
            text.push_str(&d.path_string());
            if !dots.is_empty() {
                text.push(' ');
                text.push_str(&dots.join(" "));
            }
        }
        text.push('\n');
    }
    Ok(CommandOutcome::ok(text))
}

fn catalog_text(cat: &Catalog) -> String {
    let mut buf = BufWriter::new(Vec::new());
    cat.write_ndjson(&mut buf).expect("writing to memory");
    String::from_utf8(buf.into_inner().expect("flush to memory")).expect("JSON is UTF-8")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Text,
    Json,
}

/// Failures listed per suite in text mode.
const SHOWN_FAILURES: usize = 5;

/// Renders a verification report. Text mode prints one verdict line per
/// suite, ending in `OK` or `FAILED`, followed by sample failures.
pub fn format_report(r: &VerificationReport, mode: Mode) -> String {
    if mode == Mode::Json {
        let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
        s.push('\n');
        return s;
    }
    let mut text = String::new();
    let _ = writeln!(
        text,
        "verified n = {}..{}: {} diagrams, {} simple of rank >= 3",
        r.n_range[0], r.n_range[1], r.diagrams_checked, r.simple_rank3plus_count
    );
    for s in &r.suites {
        let extra = match s.suite {
            Suite::Theorem => format!(
                ", {} found only by searching all colines",
                r.theorem_search_fallbacks
            ),
            Suite::Corollary => {
                let b = r.corollary_branch_stats;
                format!(", branch A {}, branch B {}, both {}", b.a, b.b, b.both)
            }
            _ => String::new(),
        };
        let _ = writeln!(
            text,
            "{:<12} n <= {}: {} diagrams, {} failures{extra}  {}",
            s.suite.name(),
            s.n_max,
            s.diagrams_checked,
            s.failures,
            if s.passed() { "OK" } else { "FAILED" }
        );
    }
    let lists = [
        ("theorem", &r.theorem_failures),
        ("witness", &r.witness_failures),
        ("lift", &r.lift_failures),
        ("corollary", &r.corollary_failures),
        ("lemma", &r.lemma_mismatches),
        ("duality", &r.duality_misses),
        ("minor", &r.minor_misses),
        ("catalog", &r.catalog_collisions),
        ("rank-oracle", &r.rank_oracle_mismatches),
        ("axioms", &r.axiom_violations),
    ];
    for (name, list) in lists {
        for f in list.iter().take(SHOWN_FAILURES) {
            let dots: Vec<String> = f
                .diagram
                .dots()
                .iter()
                .map(|(s, h)| format!("{s},{h}"))
                .collect();
            let _ = writeln!(
                text,
                "  {name}: {} [{}]: {}",
                f.diagram.path_string(),
                dots.join(" "),
                f.detail.lines().next().unwrap_or_default()
            );
        }
        if list.len() > SHOWN_FAILURES {
            let _ = writeln!(text, "  {name}: ... {} more", list.len() - SHOWN_FAILURES);
        }
    }
    text
}
