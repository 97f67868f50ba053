//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on bad input, 1 on internal failure, 3 when a
//! verification suite reports a failing row. Errors print a single line
//! `error: <tag>: <message>` to stderr. `CHOREFAIR_THREADS` caps the number of
//! worker threads used by the sweeps.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use chorefair::allocation::AllocationJson;
use chorefair::allocators::{self, prepare_normalized};
use chorefair::catalog::{make_family, FamilyId, FamilyParams};
use chorefair::chore_set::ChoreSet;
use chorefair::criteria::{fairness_report, Criterion};
use chorefair::error::Error;
use chorefair::instance::Instance;
use chorefair::mms;
use chorefair::rational::Rational;
use chorefair::search::best_fair_allocation;
use chorefair::verify::{self, LemmaConfig, PriceConfig, PropositionReport};

#[derive(Parser, Debug)]
#[command(name = "chorefair", version, about = "Exact fairness measurements for indivisible chores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal approximation factor of an allocation for each criterion
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
        /// Comma-separated criteria (default EF,EF1,EFX,MMS,PMMS)
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<Criterion>,
        /// Print witnesses and maximin shares along with the factors
        #[arg(long)]
        full: bool,
    },
    /// Maximin share of one agent, with a witness partition
    Mms {
        #[arg(long)]
        instance: PathBuf,
        /// Agent index (0-based)
        #[arg(long)]
        agent: usize,
        /// Number of bundles (default n)
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated chore indices (default all chores)
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Engine::Class)]
        engine: Engine,
    },
    /// Run an allocation algorithm
    Allocate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        /// Picking order for round_robin (default 0,1,...,n-1)
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Include the decision trace
        #[arg(long)]
        trace: bool,
        /// Normalize the instance first when an algorithm requires it
        #[arg(long)]
        auto_normalize: bool,
    },
    /// Cheapest allocation satisfying a criterion, and the price of fairness
    Search {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        criterion: Criterion,
        #[arg(long, default_value = "1")]
        alpha: Rational,
    },
    /// Emit a catalog family as JSON
    Family {
        /// Family identifier, e.g. EF1_MMS_TIGHT (omit with --list)
        id: Option<FamilyId>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        alpha: Option<Rational>,
        #[arg(long)]
        epsilon: Option<Rational>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        m: Option<usize>,
        /// Also measure the reference allocation
        #[arg(long)]
        measure: bool,
        /// List family identifiers
        #[arg(long)]
        list: bool,
    },
    /// Run verification suites and write a CSV report
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value = "1/1000")]
        epsilon: Rational,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random instances per sweep
        #[arg(long, default_value_t = 2000)]
        sweep: usize,
        /// Random instances for the lemma suite
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    /// Partition enumeration (restricted-growth strings)
    Enumerate,
    /// Search over interchangeable chore classes
    Class,
    /// Class search restricted to additive agents
    Additive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Algorithm {
    RoundRobin,
    Alg1,
    Pmms32,
    Optimal,
    BestRrOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Connections,
    Prices,
    Lemmas,
    All,
}

enum Failure {
    Error(Error),
    Verification(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        // Errors raised by our own validation surface through serde as
        // custom messages; keep the location either way.
        Error::Parse(format!("{}: {e}", path.display()))
    })
}

fn load_instance(path: &Path) -> Result<Instance, Error> {
    read_json(path)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| Error::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval {
            instance,
            allocation,
            criteria,
            full,
        } => {
            let inst = load_instance(&instance)?;
            let alloc = read_json::<AllocationJson>(&allocation)?.into_allocation(inst.m())?;
            let crits = if criteria.is_empty() {
                vec![Criterion::Ef, Criterion::Ef1, Criterion::Efx, Criterion::Mms, Criterion::Pmms]
            } else {
                criteria
            };
            let report = fairness_report(&inst, &alloc, &crits)?;
            if full {
                print_json(&report)?;
            } else {
                print_json(&report.alphas_json())?;
            }
        }
        Command::Mms {
            instance,
            agent,
            k,
            set,
            engine,
        } => {
            let inst = load_instance(&instance)?;
            let s = match set {
                Some(items) => ChoreSet::try_from_indices(items, inst.m())?,
                None => inst.chores(),
            };
            let k = k.unwrap_or(inst.n());
            let res = match engine {
                Engine::Enumerate => mms::mms_share(&inst, agent, k, s)?,
                Engine::Class => mms::maximin_share(&inst, agent, k, s)?,
                Engine::Additive => mms::mms_share_additive_fast(&inst, agent, k, s)?,
            };
            print_json(&res)?;
        }
        Command::Allocate {
            instance,
            algorithm,
            order,
            trace,
            auto_normalize,
        } => {
            let inst = load_instance(&instance)?;
            let out = match algorithm {
                Algorithm::RoundRobin => {
                    let order = order.unwrap_or_else(|| (0..inst.n()).collect());
                    allocators::round_robin(&inst, &order)?
                }
                Algorithm::Optimal => allocators::optimal_allocation(&inst)?,
                Algorithm::BestRrOrder => allocators::best_round_robin_order(&inst)?,
                Algorithm::Alg1 => {
                    let prepared = prepare_normalized(&inst, auto_normalize, "two-agent EF1 algorithm")?;
                    allocators::alg1_two_agent_ef1(&prepared)?
                }
                Algorithm::Pmms32 => {
                    let prepared = prepare_normalized(&inst, auto_normalize, "two-agent 3/2-PMMS construction")?;
                    allocators::pmms32_two_agent(&prepared)?
                }
            };
            if !trace {
                #[derive(Serialize)]
                struct Plain<'a> {
                    allocation: &'a chorefair::allocation::Allocation,
                    social_cost: Rational,
                }
                print_json(&Plain {
                    allocation: &out.allocation,
                    social_cost: out.social_cost,
                })?;
            } else {
                print_json(&out)?;
            }
        }
        Command::Search {
            instance,
            criterion,
            alpha,
        } => {
            let inst = load_instance(&instance)?;
            print_json(&best_fair_allocation(&inst, criterion, alpha)?)?;
        }
        Command::Family {
            id,
            n,
            alpha,
            epsilon,
            p,
            m,
            measure,
            list,
        } => {
            if list {
                let mut out = io::stdout().lock();
                for f in FamilyId::ALL {
                    writeln!(out, "{f}").map_err(|e| Error::Internal(e.to_string()))?;
                }
                return Ok(());
            }
            let id = id.ok_or_else(|| Error::Argument("a family id is required (or --list)".into()))?;
            let params = FamilyParams { n, alpha, epsilon, p, m };
            let bundle = make_family(id, &params)?;
            if measure {
                #[derive(Serialize)]
                struct Measured<'a> {
                    #[serde(flatten)]
                    bundle: &'a chorefair::catalog::FamilyBundle,
                    measured: chorefair::catalog::Measurement,
                }
                let measured = bundle.measure()?;
                print_json(&Measured {
                    bundle: &bundle,
                    measured,
                })?;
            } else {
                print_json(&bundle)?;
            }
        }
        Command::Verify {
            suite,
            n_max,
            epsilon,
            seed,
            sweep,
            instances,
            out,
        } => {
            let mut rows: Vec<PropositionReport> = Vec::new();
            if matches!(suite, Suite::Connections | Suite::All) {
                rows.extend(verify::verify_connections(FamilyId::ALL, n_max, epsilon)?);
            }
            if matches!(suite, Suite::Prices | Suite::All) {
                let cfg = PriceConfig {
                    epsilon,
                    seed,
                    sweep,
                    n_max: n_max.min(PriceConfig::default().n_max),
                    ..PriceConfig::default()
                };
                rows.extend(verify::verify_prices(&cfg)?);
            }
            if matches!(suite, Suite::Lemmas | Suite::All) {
                let cfg = LemmaConfig {
                    seed,
                    instances,
                    ..LemmaConfig::default()
                };
                rows.extend(verify::verify_lemmas(&cfg)?);
            }
            verify::sort_canonical(&mut rows);
            let file = fs::File::create(&out).map_err(|e| Error::Argument(format!("{}: {e}", out.display())))?;
            verify::write_csv(&rows, io::BufWriter::new(file))?;
            let failed = rows.iter().filter(|r| !r.passed()).count();
            eprintln!("{} rows, {} failed, report written to {}", rows.len(), failed, out.display());
            if failed > 0 {
                for r in rows.iter().filter(|r| !r.passed()) {
                    eprintln!("  {r}");
                }
                return Err(Failure::Verification(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: usage: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(n)) => {
            eprintln!("error: verification_failed: {n} rows failed");
            ExitCode::from(3)
        }
        Err(Failure::Error(e)) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {msg}", e.tag());
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
