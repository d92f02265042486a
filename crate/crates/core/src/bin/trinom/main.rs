use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use trinom::ait::{search_ait, AitConfig};
use trinom::apt::{factor_mersenne_with_cutoff, load_factor_table, search_apt, table_row_mismatches, FactorTable};
use trinom::density::{census, format_fixed, min_increment, CensusRow, DEFAULT_DELTA_CAP};
use trinom::implicit::{lfsr_stream, RingContext};
use trinom::record::{read_jsonl, Mode, RunManifest, SearchRecord};
use trinom::{DensePoly, Error};

const EXIT_MISMATCH: u8 = 1;
const EXIT_MISSING_DATA: u8 = 2;
const EXIT_CERTIFICATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Search for and verify trinomials over GF(2) with a large irreducible or primitive factor.
#[derive(Parser, Debug)]
#[command(name = "trinom", version)]
struct Cli {
    /// Factor table for 2^r - 1, merged over the bundled one.
    #[arg(long, global = true, env = "TRINOM_FACTORS")]
    factors: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write a JSON run manifest to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find all s for an exponent r and increment δ; prints JSONL records.
    Search(SearchArgs),
    /// Re-verify rows of a JSONL file.
    Verify(VerifyArgs),
    /// Count almost irreducible (and primitive) trinomials of each degree; prints CSV.
    Census(CensusArgs),
    /// Arithmetic in GF(2^r) carried out modulo the trinomial.
    FieldDemo(FieldDemoArgs),
    /// Manage factorizations of 2^r - 1.
    #[command(subcommand)]
    Factors(FactorsCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Ait,
    Apt,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ait => Mode::Ait,
            ModeArg::Apt => Mode::Apt,
        }
    }
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    r: u64,
    #[arg(long, required_unless_present = "min_delta_search", conflicts_with = "min_delta_search")]
    delta: Option<u64>,
    /// Search δ = 0, 2, 3, ... and report all s at the first δ that has any.
    #[arg(long)]
    min_delta_search: bool,
    /// Largest δ tried by --min-delta-search.
    #[arg(long, default_value_t = DEFAULT_DELTA_CAP)]
    cap: u64,
    #[arg(long, value_enum, default_value = "apt")]
    mode: ModeArg,
    /// Sieving bound (default depends on r and δ).
    #[arg(long)]
    sieve_bound: Option<u64>,
    /// Track the period multiple F while sieving (prime r only).
    #[arg(long)]
    mersenne_variant: bool,
    /// Test every s instead of only those passing the cheap exclusions.
    #[arg(long)]
    no_prefilter: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// JSONL file with one record per line.
    #[arg(long)]
    rows: PathBuf,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    n_max: u64,
    #[arg(long, value_enum, default_value = "ait")]
    mode: ModeArg,
    /// Print the running averages as exact fractions p/q.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FieldDemoArgs {
    #[arg(long)]
    r: u64,
    #[arg(long)]
    s: u64,
    #[arg(long)]
    delta: u64,
    #[command(subcommand)]
    action: FieldAction,
}

#[derive(Subcommand, Debug)]
enum FieldAction {
    /// Period of the trinomial and the field order of x.
    Order,
    /// Stream bits of the recurrence u_k = u_(k-s) + u_(k-n).
    Lfsr {
        #[arg(long, default_value_t = 64)]
        count: usize,
        /// Seed as a hex polynomial whose coefficient i is u_i (default: u_0 = 1).
        #[arg(long)]
        seed: Option<String>,
        /// Derive the seed from the hex element instead, removing its small-factor component.
        #[arg(long)]
        project: Option<String>,
    },
    /// Canonical form of a hex element.
    Canon { element: String },
}

#[derive(Subcommand, Debug)]
enum FactorsCommand {
    /// Factor 2^r - 1 for r = 2..=max with the built-in factorizer.
    Generate {
        #[arg(long, default_value_t = 128)]
        max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a table file.
    Check { path: PathBuf },
    /// Print the factorization of 2^r - 1 used by the tool.
    Show { r: u64 },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MissingFactorization(_)
            | Error::FactoringCutoff { .. }
            | Error::FactorTableParse { .. }
            | Error::FactorProductMismatch { .. } => EXIT_MISSING_DATA,
            Error::CertificationFailed { .. } => EXIT_CERTIFICATION,
            Error::Precondition(_)
            | Error::InvalidTrinomial { .. }
            | Error::PolyParse { .. }
            | Error::BadSeed { .. } => EXIT_USAGE,
            _ => EXIT_MISMATCH,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure { code: EXIT_MISSING_DATA, message: format!("{}: {e}", path.display()) }
}

type CmdResult = Result<Vec<SearchRecord>, Failure>;

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| io_failure(path, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_failure(e: io::Error) -> Failure {
    Failure { code: EXIT_MISMATCH, message: format!("write error: {e}") }
}

fn load_table(path: &Option<PathBuf>) -> Result<FactorTable, Failure> {
    let mut table = FactorTable::bundled().clone();
    if let Some(path) = path {
        let file = File::open(path).map_err(|e| io_failure(path, e))?;
        table.merge(&load_factor_table(BufReader::new(file))?);
    }
    Ok(table)
}

fn cmd_search(args: &SearchArgs, table: &FactorTable, params: &mut BTreeMap<String, String>) -> CmdResult {
    let mode = Mode::from(args.mode);
    params.insert("r".into(), args.r.to_string());
    params.insert("mode".into(), mode.to_string());
    let cfg = AitConfig {
        sieve_bound: args.sieve_bound,
        use_mersenne_variant: args.mersenne_variant,
        use_prefilter: !args.no_prefilter,
        ..AitConfig::default()
    };
    let delta = match args.delta {
        Some(d) => Some(d),
        None => {
            params.insert("min_delta_search".into(), "true".into());
            params.insert("cap".into(), args.cap.to_string());
            min_increment(args.r, mode, table, args.cap)?.map(|inc| inc.delta)
        }
    };
    let Some(delta) = delta else {
        eprintln!("no increment up to {} works for r = {}", args.cap, args.r);
        return Ok(Vec::new());
    };
    params.insert("delta".into(), delta.to_string());
    let records = match mode {
        Mode::Ait => search_ait(args.r, delta, &cfg)?,
        Mode::Apt => search_apt(args.r, delta, table, &cfg)?,
    };
    let mut out = open_output(&args.out)?;
    for rec in &records {
        writeln!(out, "{}", rec.to_json_line()).map_err(write_failure)?;
    }
    out.flush().map_err(write_failure)?;
    Ok(records)
}

fn cmd_verify(args: &VerifyArgs, table: &FactorTable, params: &mut BTreeMap<String, String>) -> CmdResult {
    params.insert("rows".into(), args.rows.display().to_string());
    let file = File::open(&args.rows).map_err(|e| io_failure(&args.rows, e))?;
    let rows = read_jsonl(BufReader::new(file))?;
    let mut bad = 0;
    for (i, row) in rows.iter().enumerate() {
        let label = format!("row {}: r={} delta={} s={}", i + 1, row.r, row.delta, row.s);
        let mismatches = table_row_mismatches(row, table)
            .map_err(|e| Failure { message: format!("{label}: {e}"), ..Failure::from(e) })?;
        if mismatches.is_empty() {
            println!("ok {label}");
        } else {
            bad += 1;
            println!("MISMATCH {label}: {}", mismatches.join("; "));
        }
    }
    if bad > 0 {
        return Err(Failure { code: EXIT_MISMATCH, message: format!("{bad} of {} rows failed", rows.len()) });
    }
    Ok(rows)
}

fn cmd_census(args: &CensusArgs, table: &FactorTable, params: &mut BTreeMap<String, String>) -> CmdResult {
    let mode = Mode::from(args.mode);
    params.insert("n_max".into(), args.n_max.to_string());
    params.insert("mode".into(), mode.to_string());
    let rows = census(args.n_max, mode, table)?;
    let mut out = open_output(&args.out)?;
    writeln!(out, "{}", CensusRow::csv_header(mode)).map_err(write_failure)?;
    for row in &rows {
        writeln!(out, "{}", row.to_csv(mode, args.exact)).map_err(write_failure)?;
    }
    out.flush().map_err(write_failure)?;
    if let Some(last) = rows.last() {
        eprintln!("E_ait({}) = {}", last.n, format_fixed(&last.running_e_ait, 4));
        if mode == Mode::Apt {
            let e = last.running_e_apt.as_ref().map_or("unknown".into(), |q| format_fixed(q, 4));
            eprintln!("E_apt({}) = {e}", last.n);
        }
    }
    Ok(Vec::new())
}

fn bits_of_seed(p: &DensePoly, n: usize) -> Vec<bool> {
    (0..n).map(|i| p.coeff(i)).collect()
}

fn cmd_field_demo(args: &FieldDemoArgs, table: &FactorTable, params: &mut BTreeMap<String, String>) -> CmdResult {
    params.insert("r".into(), args.r.to_string());
    params.insert("s".into(), args.s.to_string());
    params.insert("delta".into(), args.delta.to_string());
    let ctx = RingContext::new(args.r, args.s, args.delta)?;
    match &args.action {
        FieldAction::Order => {
            let rho = ctx.ring_order_of_x(table)?;
            let field = ctx.field_order_of_x(table)?;
            let f = &rho / &field;
            println!("trinomial = {}", ctx.trinomial().to_dense());
            println!("small = {}", ctx.small());
            println!("field_order = {field}");
            println!("rho = {rho}");
            println!("f = {f}");
            let full = trinom::numtheory::mersenne(args.r);
            println!("primitive = {}", field == full);
        }
        FieldAction::Lfsr { count, seed, project } => {
            let n = ctx.trinomial().n() as usize;
            let seed_bits = match (seed, project) {
                (Some(_), Some(_)) => {
                    return Err(Failure { code: EXIT_USAGE, message: "use either --seed or --project".into() })
                }
                (Some(hex), None) => bits_of_seed(&DensePoly::from_hex(hex)?, n),
                (None, Some(hex)) => ctx.projected_seed(&DensePoly::from_hex(hex)?),
                (None, None) => bits_of_seed(&DensePoly::one(), n),
            };
            let bits: String =
                lfsr_stream(&ctx, &seed_bits, *count)?.into_iter().map(|b| if b { '1' } else { '0' }).collect();
            println!("{bits}");
        }
        FieldAction::Canon { element } => {
            let a = ctx.element(&DensePoly::from_hex(element)?);
            println!("{}", ctx.canonicalize(&a)?.value().to_hex());
        }
    }
    Ok(Vec::new())
}

fn cmd_factors(cmd: &FactorsCommand, table: &FactorTable, params: &mut BTreeMap<String, String>) -> CmdResult {
    match cmd {
        FactorsCommand::Generate { max, out } => {
            params.insert("max".into(), max.to_string());
            let mut generated = FactorTable::new();
            for r in 2..=*max {
                generated.insert(r, factor_mersenne_with_cutoff(r, *max)?)?;
            }
            let mut w = open_output(out)?;
            w.write_all(generated.to_text().as_bytes()).map_err(write_failure)?;
            w.flush().map_err(write_failure)?;
        }
        FactorsCommand::Check { path } => {
            let file = File::open(path).map_err(|e| io_failure(path, e))?;
            let checked = load_factor_table(BufReader::new(file))?;
            println!("{}: {} entries ok", path.display(), checked.len());
        }
        FactorsCommand::Show { r } => {
            let primes: Vec<String> = table
                .factorization(*r)?
                .into_iter()
                .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
                .collect();
            let total: BigUint = trinom::numtheory::mersenne(*r);
            println!("2^{r}-1 = {total}");
            println!("{}", primes.join(" * "));
        }
    }
    Ok(Vec::new())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Search(_) => "search",
        Command::Verify(_) => "verify",
        Command::Census(_) => "census",
        Command::FieldDemo(_) => "field-demo",
        Command::Factors(_) => "factors",
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure { code: EXIT_USAGE, message: format!("thread pool: {e}") })?;
    }
    let started = Instant::now();
    let table = load_table(&cli.factors)?;
    let mut params = BTreeMap::new();
    let records = match &cli.command {
        Command::Search(a) => cmd_search(a, &table, &mut params)?,
        Command::Verify(a) => cmd_verify(a, &table, &mut params)?,
        Command::Census(a) => cmd_census(a, &table, &mut params)?,
        Command::FieldDemo(a) => cmd_field_demo(a, &table, &mut params)?,
        Command::Factors(c) => cmd_factors(c, &table, &mut params)?,
    };
    if let Some(path) = &cli.manifest {
        if let Some(f) = &cli.factors {
            params.insert("factors".into(), f.display().to_string());
        }
        let manifest = RunManifest {
            command: command_name(&cli.command).into(),
            parameters: params,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            elapsed_ms: started.elapsed().as_millis() as u64,
            records,
        };
        let file = File::create(path).map_err(|e| io_failure(path, e))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &manifest)
            .map_err(|e| Failure { code: EXIT_MISMATCH, message: format!("manifest: {e}") })?;
    }
    Ok(())
}

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
            eprintln!("trinom: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
