//! The `dessin` command line.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage error, 3 I/O error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::cache;
use crate::error::Error;
use crate::evolution::EngineState;
use crate::kp::{kp_report, KpEquation};
use crate::oracle::{self, MAX_CLASS_DEGREE};
use crate::partition::Partition;
use crate::specialize::{closed_genus0, closed_genus1, genus_table, max_genus, CountTable};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dessin",
    version,
    about = "Exact enumeration of dessins d'enfants"
)]
pub struct Cli {
    /// Cache file for F_1..F_D; reused and extended across runs.
    #[arg(long, global = true, env = "DESSIN_CACHE")]
    pub cache: Option<PathBuf>,

    /// Worker threads (0 = one per core). Affects speed only.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Report cache use and computed degrees on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genus-by-degree table of weighted or marked counts.
    Table {
        /// Largest degree listed.
        #[arg(long)]
        dmax: u32,
        /// Largest genus listed (default: the largest possible for dmax).
        #[arg(long)]
        gmax: Option<u32>,
        /// Marked (rooted) counts d * G instead of weighted counts G.
        #[arg(long)]
        marked: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One coefficient N_{k,l}(m) and its marked count d * N.
    Coeff {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        /// Ramification profile as `part^multiplicity` list, e.g. `1^2,3^1`.
        #[arg(long)]
        profile: String,
    },
    /// Check the KP equations on F up to s-degree dmax.
    Kp {
        /// Largest s-degree checked.
        #[arg(long)]
        dmax: u32,
        /// Restrict to these equations (1-4); repeatable.
        #[arg(long = "eq")]
        eqs: Vec<u32>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Compare F_d with a brute-force count over pairs of permutations.
    Oracle {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Compare genus 0 and 1 counts with their closed formulas.
    Closed {
        /// Largest degree compared.
        #[arg(long)]
        dmax: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// A failed command: exit code plus message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CHECK_FAILED,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse(_) => EXIT_IO,
            Error::InvalidArgument(_)
            | Error::OracleBudget { .. }
            | Error::OutOfTruncation { .. } => EXIT_USAGE,
            _ => EXIT_CHECK_FAILED,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<'a, I, T>(
    args: I,
    out: &'a mut (dyn Write + Send),
    err: &'a mut (dyn Write + Send),
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let sink: &mut (dyn Write + Send) = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_IO;
        }
    };
    match pool.install(|| execute(&cli, out, err)) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(
    cli: &Cli,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32, Failure> {
    let mut session = Session {
        cache: cli.cache.as_deref(),
        verbose: cli.verbose,
        err,
    };
    match &cli.command {
        Command::Table {
            dmax,
            gmax,
            marked,
            format,
            out: path,
        } => {
            require_positive("--dmax", *dmax)?;
            let state = session.state(*dmax)?;
            let table = genus_table(&state)?;
            let gmax = gmax.unwrap_or_else(|| max_genus(*dmax));
            let text = match format {
                TableFormat::Csv => render_csv(&table, *dmax, gmax, *marked),
                TableFormat::Json => render_json(&table, *dmax, gmax, *marked),
            };
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_PASS)
        }
        Command::Coeff { d, k, l, profile } => {
            require_positive("--d", *d)?;
            let m =
                Partition::parse_exponents(profile).map_err(|e| Failure::usage(e.to_string()))?;
            if m.weight() != *d {
                return Err(Failure::usage(format!(
                    "profile {profile} has weight {}, expected {d}",
                    m.weight()
                )));
            }
            let state = session.state(*d)?;
            let n = state.coefficient(*k, *l, &m)?;
            let marked = &n * crate::Rational::from_integer(BigInt::from(*d));
            if !marked.is_integer() {
                return Err(Failure::check(format!(
                    "marked count {marked} is not an integer"
                )));
            }
            writeln!(out, "N={n}, marked={}", marked.to_integer())?;
            Ok(EXIT_PASS)
        }
        Command::Kp { dmax, eqs, format } => {
            let all = KpEquation::standard();
            let selected: Vec<KpEquation> = if eqs.is_empty() {
                all
            } else {
                let mut chosen = Vec::new();
                for id in eqs {
                    let eq = all
                        .iter()
                        .find(|e| e.id == *id)
                        .ok_or_else(|| Failure::usage(format!("no KP equation {id}")))?;
                    chosen.push(eq.clone());
                }
                chosen
            };
            let state = session.state((*dmax).max(1))?;
            let report = kp_report(&state, *dmax, &selected)?;
            for row in &report.rows {
                match format {
                    ReportFormat::Json => writeln!(out, "{}", to_json(row))?,
                    ReportFormat::Text => writeln!(
                        out,
                        "eq {} n {}: {} ({} residual terms)",
                        row.eq,
                        row.n,
                        verdict(row.pass),
                        row.residual_terms
                    )?,
                }
            }
            if *format == ReportFormat::Text {
                writeln!(
                    out,
                    "kp dmax={dmax}: {} (largest piece {} terms)",
                    verdict(report.passed()),
                    report.max_piece_terms
                )?;
            }
            Ok(if report.passed() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Oracle { d, format } => {
            require_positive("--d", *d)?;
            if *d > MAX_CLASS_DEGREE {
                return Err(Error::OracleBudget {
                    d: *d,
                    max: MAX_CLASS_DEGREE,
                }
                .into());
            }
            let state = session.state(*d)?;
            let diff = oracle::compare_with_engine(&state, *d)?;
            let table = genus_table(&state)?;
            let engine_pairs = table.marked_row_sum(*d) * factorial(*d - 1);
            let totals_match = BigInt::from(diff.total_pairs.clone()) == engine_pairs;
            let pass = diff.is_empty() && totals_match;
            match format {
                ReportFormat::Json => {
                    let report = OracleJson {
                        d: *d,
                        keys: state.piece(*d).map_or(0, |p| p.len()),
                        total_pairs: diff.total_pairs.to_string(),
                        engine_pairs: engine_pairs.to_string(),
                        mismatches: diff
                            .mismatches
                            .iter()
                            .map(|m| MismatchJson {
                                k: m.key.k,
                                l: m.key.l,
                                profile: m.key.m.to_string(),
                                engine: m.engine.to_string(),
                                oracle: m.oracle.to_string(),
                            })
                            .collect(),
                        pass,
                    };
                    writeln!(out, "{}", to_json(&report))?;
                }
                ReportFormat::Text => {
                    for m in &diff.mismatches {
                        writeln!(
                            out,
                            "mismatch k={} l={} profile={}: engine {} oracle {}",
                            m.key.k, m.key.l, m.key.m, m.engine, m.oracle
                        )?;
                    }
                    writeln!(
                        out,
                        "oracle d={d}: {} ({} mismatches, {} transitive pairs, engine implies {})",
                        verdict(pass),
                        diff.mismatches.len(),
                        diff.total_pairs,
                        engine_pairs
                    )?;
                }
            }
            Ok(if pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Closed { dmax, format } => {
            require_positive("--dmax", *dmax)?;
            let state = session.state(*dmax)?;
            let table = genus_table(&state)?;
            let mut pass = true;
            for d in 1..=*dmax {
                for (g, closed) in [(0, closed_genus0(d)), (1, closed_genus1(d))] {
                    let engine = table.marked(d, g);
                    let ok = engine == closed;
                    pass &= ok;
                    match format {
                        ReportFormat::Json => {
                            let row = ClosedJson {
                                d,
                                g,
                                engine: engine.to_string(),
                                closed: closed.to_string(),
                                pass: ok,
                            };
                            writeln!(out, "{}", to_json(&row))?;
                        }
                        ReportFormat::Text => writeln!(
                            out,
                            "d {d} g {g}: engine {engine} closed {closed}: {}",
                            verdict(ok)
                        )?,
                    }
                }
            }
            if *format == ReportFormat::Text {
                writeln!(out, "closed dmax={dmax}: {}", verdict(pass))?;
            }
            Ok(if pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
    }
}

struct Session<'a> {
    cache: Option<&'a Path>,
    verbose: bool,
    err: &'a mut (dyn Write + Send),
}

impl Session<'_> {
    /// `F_1..F_dmax`, reusing and extending the cache when one is configured.
    fn state(&mut self, dmax: u32) -> Result<EngineState, Failure> {
        let Some(path) = self.cache else {
            return Ok(EngineState::compute(dmax));
        };
        let mut state = match cache::load(path)? {
            Some(state) => {
                if self.verbose {
                    writeln!(
                        self.err,
                        "cache: loaded F_1..F_{} from {}",
                        state.dmax(),
                        path.display()
                    )?;
                }
                state
            }
            None => EngineState::seeded(),
        };
        if state.dmax() < dmax {
            let from = state.dmax() + 1;
            state.extend_to(dmax);
            cache::store(path, &state)?;
            if self.verbose {
                writeln!(
                    self.err,
                    "cache: computed F_{from}..F_{dmax}, stored in {}",
                    path.display()
                )?;
            }
        }
        Ok(state.truncated(dmax))
    }
}

fn require_positive(flag: &str, value: u32) -> Result<(), Failure> {
    if value == 0 {
        return Err(Failure::usage(format!("{flag} must be at least 1")));
    }
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serializes")
}

#[derive(Serialize)]
struct MismatchJson {
    k: u32,
    l: u32,
    profile: String,
    engine: String,
    oracle: String,
}

#[derive(Serialize)]
struct OracleJson {
    d: u32,
    keys: usize,
    total_pairs: String,
    engine_pairs: String,
    mismatches: Vec<MismatchJson>,
    pass: bool,
}

#[derive(Serialize)]
struct ClosedJson {
    d: u32,
    g: u32,
    engine: String,
    closed: String,
    pass: bool,
}

#[derive(Serialize)]
struct TableJson {
    dmax: u32,
    marked: bool,
    entries: Vec<TableEntryJson>,
}

#[derive(Serialize)]
struct TableEntryJson {
    d: u32,
    g: u32,
    value: String,
}

/// Rows sorted by `(d, g)`; entries past the largest genus of a degree are 0.
pub fn render_csv(table: &CountTable, dmax: u32, gmax: u32, marked: bool) -> String {
    let mut s = String::new();
    if marked {
        s.push_str("d,g,G_marked\n");
    } else {
        s.push_str("d,g,G_num,G_den\n");
    }
    for d in 1..=dmax {
        for g in 0..=gmax {
            if marked {
                let _ = writeln!(s, "{d},{g},{}", table.marked(d, g));
            } else {
                let w = table.weighted(d, g);
                let _ = writeln!(s, "{d},{g},{},{}", w.numer(), w.denom());
            }
        }
    }
    s
}

pub fn render_json(table: &CountTable, dmax: u32, gmax: u32, marked: bool) -> String {
    let entries = (1..=dmax)
        .flat_map(|d| (0..=gmax).map(move |g| (d, g)))
        .map(|(d, g)| {
            let value = if marked {
                table.marked(d, g).to_string()
            } else {
                let w = table.weighted(d, g);
                format!("{}/{}", w.numer(), w.denom())
            };
            TableEntryJson { d, g, value }
        })
        .collect();
    let mut text = to_json(&TableJson {
        dmax,
        marked,
        entries,
    });
    text.push('\n');
    text
}
