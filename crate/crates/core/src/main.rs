use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ocb::sweep::{
    chi_table, figure_config, format_number, max_gap, run_sweep, write_chi_csv, write_csv, DbConvention, SweepConfig,
};
use ocb::verify::{run_suite, Suite};
use ocb::{CaseTag, Error};

const DEFAULT_DB_MIN: f64 = -10.0;
const DEFAULT_DB_MAX: f64 = 60.0;
const DEFAULT_STEPS: usize = 281;
const DEFAULT_SIGMA: f64 = 1.0;
const CHI_STEPS: usize = 400;

#[derive(Parser)]
#[command(name = "ocb", version, about = "Capacity bounds for the optical intensity channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate every bound, the envelope and the high-SNR asymptote over a dB range.
    Sweep(SweepArgs),
    /// Regenerate the data behind one of the figures (1-5).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant check suite.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

#[derive(clap::Args)]
struct SweepArgs {
    /// I, II or III (1, 2, 3 also accepted).
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    db_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    db_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Output file; standard output when absent or "-".
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file supplying defaults for any of the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    db_convention: Option<ConventionArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Power,
    Amplitude,
}

impl From<ConventionArg> for DbConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Power => DbConvention::Power,
            ConventionArg::Amplitude => DbConvention::Amplitude,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Sandwich,
    Asymptotics,
    Oracle,
    All,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn parse_case(s: &str) -> Result<CaseTag, Error> {
    match s.trim().to_ascii_uppercase().as_str() {
        "I" | "1" => Ok(CaseTag::I),
        "II" | "2" => Ok(CaseTag::II),
        "III" | "3" => Ok(CaseTag::III),
        other => Err(usage(format!("unknown case {other:?}; expected I, II or III"))),
    }
}

fn parse_convention(s: &str) -> Result<DbConvention, Error> {
    match s.trim().to_ascii_lowercase().as_str() {
        "power" => Ok(DbConvention::Power),
        "amplitude" => Ok(DbConvention::Amplitude),
        other => Err(usage(format!(
            "unknown db convention {other:?}; expected power or amplitude"
        ))),
    }
}

/// Reads `key=value` lines; `#` starts a comment, keys may use `-` or `_`.
fn read_config(path: &Path) -> Result<HashMap<String, String>, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        let key = k.trim().replace('-', "_");
        const KNOWN: [&str; 7] = ["case", "alpha", "db_min", "db_max", "steps", "sigma", "db_convention"];
        if !KNOWN.contains(&key.as_str()) {
            return Err(usage(format!("{}:{}: unknown key {key:?}", path.display(), n + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn config_value<T: std::str::FromStr>(map: &HashMap<String, String>, key: &str) -> Result<Option<T>, Error> {
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| usage(format!("config key {key}: cannot parse {v:?}")))
        })
        .transpose()
}

/// Merges flags over the config file over the built-in defaults.
fn resolve(args: &SweepArgs) -> Result<SweepConfig, Error> {
    let file = match &args.config {
        Some(p) => read_config(p)?,
        None => HashMap::new(),
    };
    let case = match (&args.case, file.get("case")) {
        (Some(c), _) | (None, Some(c)) => parse_case(c)?,
        (None, None) => return Err(usage("--case is required (flag or config file)")),
    };
    let db_convention = match (args.db_convention, file.get("db_convention")) {
        (Some(c), _) => c.into(),
        (None, Some(c)) => parse_convention(c)?,
        (None, None) => DbConvention::default(),
    };
    let alpha = args.alpha.or(config_value(&file, "alpha")?);
    if alpha.is_some() && case != CaseTag::I {
        eprintln!("warning: alpha is ignored for case {case}");
    }
    let cfg = SweepConfig {
        case,
        alpha: if case == CaseTag::I { alpha } else { None },
        db_min: args.db_min.or(config_value(&file, "db_min")?).unwrap_or(DEFAULT_DB_MIN),
        db_max: args.db_max.or(config_value(&file, "db_max")?).unwrap_or(DEFAULT_DB_MAX),
        steps: args.steps.or(config_value(&file, "steps")?).unwrap_or(DEFAULT_STEPS),
        sigma: args.sigma.or(config_value(&file, "sigma")?).unwrap_or(DEFAULT_SIGMA),
        db_convention,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        None => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) if p.as_os_str() == "-" => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode, Error> {
    let cfg = resolve(args)?;
    let rows = run_sweep(&cfg)?;
    let mut out = open_out(args.out.as_deref())?;
    write_csv(&mut out, cfg.case, &rows)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_figure(id: u8, out: Option<&Path>) -> Result<ExitCode, Error> {
    if id == 4 {
        let table = chi_table(CHI_STEPS)?;
        let mut w = open_out(out)?;
        write_chi_csv(&mut w, &table)?;
        w.flush()?;
        drop(w);
        let (lo, hi) = (table.first().unwrap(), table.last().unwrap());
        let line = format!(
            "chi_min={} at_alpha={} chi_max={} at_alpha={}",
            format_number(lo.1),
            format_number(lo.0),
            format_number(hi.1),
            format_number(hi.0)
        );
        summary(&line, out);
        return Ok(ExitCode::SUCCESS);
    }
    let cfg = figure_config(id).ok_or_else(|| usage(format!("unknown figure {id}")))?;
    let rows = run_sweep(&cfg)?;
    let mut w = open_out(out)?;
    write_csv(&mut w, cfg.case, &rows)?;
    w.flush()?;
    drop(w);
    let (g, db) = max_gap(&rows).expect("figure sweeps are non-empty");
    summary(&format!("max_gap_nats={g:.4} at_db={db}"), out);
    Ok(ExitCode::SUCCESS)
}

/// Summary lines go to standard output unless the CSV itself is going there.
fn summary(line: &str, out: Option<&Path>) {
    match out {
        Some(p) if p.as_os_str() != "-" => println!("{line}"),
        _ => eprintln!("{line}"),
    }
}

fn cmd_verify(suite: SuiteArg) -> Result<ExitCode, Error> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Lemmas => vec![Suite::Lemmas],
        SuiteArg::Sandwich => vec![Suite::Sandwich],
        SuiteArg::Asymptotics => vec![Suite::Asymptotics],
        SuiteArg::Oracle => vec![Suite::Oracle],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let (mut passed, mut failed) = (0, 0);
    for s in suites {
        for c in run_suite(s) {
            println!("{c}");
            if c.passed {
                passed += 1;
            } else {
                failed += 1;
            }
        }
    }
    println!("summary passed={passed} failed={failed}");
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("OCB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("OCB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("cannot configure {n} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Figure { id, out } => cmd_figure(*id, out.as_deref()),
        Command::Verify { suite } => cmd_verify(*suite),
    });
    match result {
        Ok(code) => code,
        Err(e @ Error::Usage(_)) => {
            eprintln!("ocb: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("ocb: {e}");
            ExitCode::FAILURE
        }
    }
}
