use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nilcount::counting::Counter;
use nilcount::oracle::{self, EnumerateOptions, DEFAULT_BUDGET};
use nilcount::stabilization::verify_stabilization_with;
use nilcount::table::{self, TableRow};
use nilcount::verify::{self, VerifyReport};
use nilcount::{parse_symbolic, Error, Partition};

const CACHE_FILE: &str = "polynomials.json";

#[derive(Parser)]
#[command(name = "nilcount", version, about = "Count nilpotent upper-triangular matrices over F_q by Jordan type")]
struct Cli {
    /// Optional key=value config file (keys: budget, cache_dir, max_n, workers).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory holding the persisted polynomial cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Mode {
    Formulas,
    Oracle,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Factor P_λ for one partition, e.g. `321` or `2^2 1^6`.
    Compute {
        lambda: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also print deg P, deg R, dim V_λ and the expanded P_λ.
        #[arg(long, short)]
        verbose: bool,
    },
    /// Print the factorization table for all partitions with 2 <= n <= N_MAX.
    Table {
        n_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        workers: Option<usize>,
        /// Refuse n_max above this value.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Run the invariant suites; exits 1 on any failure.
    Verify {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long = "q", value_delimiter = ',', default_values_t = vec![2u64, 3, 5])]
        q: Vec<u64>,
        #[arg(long, value_enum, default_value = "all")]
        mode: Mode,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare R_{λ1^k} for k = 0..=k_max with the limit series.
    Stabilize {
        lambda: String,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tally Jordan types of all (or randomly sampled) n×n matrices over F_q.
    Enumerate {
        n: usize,
        q: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Sample this many random matrices instead of enumerating.
        #[arg(long, requires = "seed")]
        sample: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Default)]
struct Config {
    budget: Option<u64>,
    cache_dir: Option<PathBuf>,
    max_n: Option<usize>,
    workers: Option<usize>,
}

fn read_config(path: &Path) -> Result<Config, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let num = |key: &str| -> Result<Option<u64>, String> {
        map.get(key)
            .map(|v| v.parse().map_err(|_| format!("config {key}: not a number: {v}")))
            .transpose()
    };
    Ok(Config {
        budget: num("budget")?,
        cache_dir: map.get("cache_dir").map(PathBuf::from),
        max_n: num("max_n")?.map(|v| v as usize),
        workers: num("workers")?.map(|v| v as usize),
    })
}

enum Failure {
    Verification(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent { .. } => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn parse_lambda(text: &str) -> Result<Partition, Failure> {
    parse_symbolic(text).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.position));
        Failure::Usage(format!("{e}\n  {text}\n  {caret}"))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Returns whether everything checked out.
fn run(cli: Cli) -> Result<bool, Failure> {
    let config = match &cli.config {
        Some(path) => read_config(path).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    let cache_dir = cli.cache_dir.or(config.cache_dir);
    let counter = Counter::new();
    if let Some(dir) = &cache_dir {
        let path = dir.join(CACHE_FILE);
        if path.exists() {
            counter.load_cache(&path)?;
        }
    }
    let save = |counter: &Counter| -> Result<(), Failure> {
        if let Some(dir) = &cache_dir {
            std::fs::create_dir_all(dir).map_err(Error::from)?;
            counter.save_cache(&dir.join(CACHE_FILE))?;
        }
        Ok(())
    };

    match cli.command {
        Command::Compute { lambda, format, verbose } => {
            let lambda = parse_lambda(&lambda)?;
            let fc = counter.factored_count(&lambda)?;
            let row = TableRow::from_count(&fc);
            match format {
                Format::Text => {
                    println!("{}", row.to_text());
                    if verbose {
                        println!("deg P = {}", fc.deg_p());
                        println!("deg R = {}", fc.deg_r());
                        println!("dim V = {}", lambda.dim_irrep()?);
                        println!("P = {}", fc.p);
                    }
                }
                Format::Json => println!("{}", json(&fc)),
                Format::Csv => print!("{}", table::render_csv(&[row])),
            }
            save(&counter)?;
            Ok(true)
        }
        Command::Table { n_max, format, workers, max_n } => {
            let limit = max_n.or(config.max_n).unwrap_or(table::DEFAULT_MAX_N);
            if n_max > limit {
                return Err(Failure::Usage(format!("n_max {n_max} exceeds the limit {limit} (raise with --max-n)")));
            }
            let rows = table::table_rows(&counter, n_max, workers.or(config.workers))?;
            match format {
                Format::Text => print!("{}", table::render_text(&rows)),
                Format::Json => println!("{}", json(&rows)),
                Format::Csv => print!("{}", table::render_csv(&rows)),
            }
            save(&counter)?;
            Ok(true)
        }
        Command::Verify { n_max, q, mode, budget, workers, format } => {
            let budget = budget.or(config.budget).unwrap_or(DEFAULT_BUDGET);
            let mut report = VerifyReport::default();
            if mode != Mode::Oracle {
                report.checks.extend(verify::formulas(&counter, n_max).checks);
            }
            if mode != Mode::Formulas {
                let cases = verify::oracle_cases(n_max, &q, budget);
                let opts = EnumerateOptions {
                    budget,
                    workers: workers.or(config.workers),
                };
                report.checks.push(verify::check_oracle(&counter, &cases, opts)?);
            }
            match format {
                Format::Json => println!("{}", json(&report)),
                Format::Text | Format::Csv => {
                    for check in &report.checks {
                        let status = if check.pass() { "PASS" } else { "FAIL" };
                        println!("{status} {} ({} cases)", check.name, check.cases);
                        for failure in &check.failures {
                            println!("  {failure}");
                        }
                    }
                }
            }
            if report.pass() {
                save(&counter)?;
            }
            Ok(report.pass())
        }
        Command::Stabilize { lambda, k_max, order, format } => {
            let lambda = parse_lambda(&lambda)?;
            let report = verify_stabilization_with(&counter, &lambda, k_max, order);
            match format {
                Format::Json => println!("{}", json(&report)),
                Format::Csv => {
                    println!("k,alpha1,diff_valuation,divisible,agreement_with_limit,required_agreement");
                    for s in &report.steps {
                        let v = s.diff_valuation.map_or(String::new(), |v| v.to_string());
                        println!("{},{},{},{},{},{}", s.k, s.alpha1, v, s.divisible, s.agreement_with_limit, s.required_agreement);
                    }
                }
                Format::Text => {
                    let limit: Vec<String> = report.limit.iter().map(ToString::to_string).collect();
                    let base = lambda.strip_ones();
                    println!("limit {} [{}]", if base.is_empty() { "1^k".to_string() } else { format!("{base} 1^k") }, limit.join(","));
                    for s in &report.steps {
                        println!(
                            "k={} alpha1={} agree={}/{} divisible={}",
                            s.k, s.alpha1, s.agreement_with_limit, s.required_agreement, s.divisible
                        );
                    }
                    println!("{}", if report.pass { "pass" } else { "FAIL" });
                }
            }
            Ok(report.pass)
        }
        Command::Enumerate { n, q, budget, workers, sample, seed, format } => {
            let workers = workers.or(config.workers);
            let tally = match sample {
                Some(trials) => oracle::sample_counts(n, q, trials, seed.unwrap_or_default(), workers)?,
                None => {
                    let budget = budget.or(config.budget).unwrap_or(DEFAULT_BUDGET);
                    oracle::enumerate_counts(n, q, EnumerateOptions { budget, workers })?
                }
            };
            match format {
                Format::Json => println!("{}", json(&tally)),
                Format::Csv => {
                    println!("lambda,count");
                    for lambda in Partition::all(n) {
                        println!("{},{}", lambda, tally.count(&lambda));
                    }
                }
                Format::Text => {
                    for lambda in Partition::all(n) {
                        println!("{} {}", lambda, tally.count(&lambda));
                    }
                    println!("total {}", tally.total);
                }
            }
            Ok(true)
        }
    }
}
