//! Command-line driver: argument parsing, run configuration and report rendering.
//!
//! Exit codes: 0 success, 2 configuration error, 3 budget or bound refusal,
//! 4 engine disagreement or failed identity, 1 anything else.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parclass::counting::{compositions, count, verify_suite, Context, CountReport, Engine, IdentityReport, Quantity};
use parclass::exec::Exec;
use parclass::green::{green_table_with_bound, DEFAULT_BOUND};
use parclass::matrix::{Budget, GroupKind, GroupSpec, ParabolicSpec};
use parclass::porc::{additive_fiber_probe, fit_json, markdown_table, search, sweep, FiberProbe, PorcSearch};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const BUDGET_ENV: &str = "PARCLASS_BUDGET";

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Budget(String),
    Mismatch(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Budget(m) | CliError::Mismatch(m) | CliError::Other(m) => m,
        }
    }
}

impl From<parclass::Error> for CliError {
    fn from(e: parclass::Error) -> Self {
        use parclass::Error as E;
        let msg = e.to_string();
        match e {
            E::Budget { .. } | E::Bound { .. } => CliError::Budget(msg),
            E::Config(_) | E::Parse(_) | E::NotPrime(_) | E::DegenerateForm { .. } | E::Unsupported(_) => {
                CliError::Config(msg)
            }
            E::Invariant(_) => CliError::Mismatch(msg),
            _ => CliError::Other(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Parser, Debug)]
#[command(name = "parclass", version, about = "Parabolic conjugacy class counts over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count classes with the brute-force and/or formula engines.
    Count(CountArgs),
    /// Run the identity suite for each q.
    Verify(CommonArgs),
    /// Sweep q and fit polynomials per residue class.
    Porc(PorcArgs),
    /// Export a Green polynomial table as CSV.
    Green(GreenArgs),
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// GL<n> or SL<n>, e.g. GL2.
    #[arg(long, default_value = "GL2")]
    pub group: String,
    /// Field orders, comma separated.
    #[arg(long = "q", value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    /// Maximum number of enumerated elements (overrides PARCLASS_BUDGET).
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Disable the data-parallel reductions.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Composition such as 1,1; all compositions when omitted.
    #[arg(long)]
    pub parabolic: Option<String>,
    /// group, lie or nil; repeatable or comma separated. Defaults to all three.
    #[arg(long, value_delimiter = ',')]
    pub quantity: Vec<String>,
    #[arg(long, default_value = "both")]
    pub engine: String,
}

#[derive(Args, Debug)]
pub struct PorcArgs {
    #[command(flatten)]
    pub common: CountArgsForPorc,
    /// Candidate moduli.
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 6])]
    pub moduli: Vec<u64>,
    /// Degree bound; defaults to n².
    #[arg(long)]
    pub degree: Option<usize>,
    /// Fit additive fiber sizes instead of a count.
    #[arg(long)]
    pub fibers: bool,
}

#[derive(Args, Debug)]
pub struct CountArgsForPorc {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "1,1")]
    pub parabolic: String,
    #[arg(long, default_value = "group")]
    pub quantity: String,
}

#[derive(Args, Debug)]
pub struct GreenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Validated configuration shared by all subcommands.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub kind: GroupKind,
    pub n: usize,
    pub qs: Vec<u32>,
    pub compositions: Vec<Vec<usize>>,
    pub quantities: Vec<Quantity>,
    pub engine: Engine,
    pub budget: u64,
    pub format: Format,
    pub parallel: bool,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

pub fn parse_group(s: &str) -> Result<(GroupKind, usize), CliError> {
    let t = s.trim().to_ascii_uppercase().replace('_', "");
    let (kind, rest) = if let Some(r) = t.strip_prefix("GL") {
        (GroupKind::GL, r)
    } else if let Some(r) = t.strip_prefix("SL") {
        (GroupKind::SL, r)
    } else {
        return Err(CliError::Config(format!("unknown group {s:?}; expected GL<n> or SL<n>")));
    };
    let n = rest.parse::<usize>().map_err(|_| CliError::Config(format!("bad rank in {s:?}")))?;
    Ok((kind, n))
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    let b = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| CliError::Config(format!("{BUDGET_ENV}={v:?} is not a number")))?,
            Err(_) => Budget::default().max_elements,
        },
    };
    if b == 0 {
        return Err(CliError::Config("budget must be positive".into()));
    }
    Ok(b)
}

impl RunConfig {
    fn from_common(command: &str, c: &CommonArgs) -> Result<Self, CliError> {
        let (kind, n) = parse_group(&c.group)?;
        let cfg = Self {
            command: command.into(),
            kind,
            n,
            qs: c.q.clone(),
            compositions: compositions(n),
            quantities: Quantity::ALL.to_vec(),
            engine: Engine::Both,
            budget: resolve_budget(c.budget)?,
            format: c.format,
            parallel: !c.sequential && Exec::default() == Exec::Parallel,
            output: c.output.clone(),
        };
        Ok(cfg)
    }

    /// Rejects bad values before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.qs.is_empty() {
            return Err(CliError::Config("empty q list".into()));
        }
        for &q in &self.qs {
            parclass::field::Field::of_order(q).map_err(|e| CliError::Config(format!("q = {q}: {e}")))?;
        }
        for c in &self.compositions {
            if c.iter().sum::<usize>() != self.n || c.contains(&0) {
                return Err(CliError::Config(format!("composition {c:?} is not a composition of {}", self.n)));
            }
        }
        if self.quantities.is_empty() {
            return Err(CliError::Config("no quantity selected".into()));
        }
        if self.budget == 0 {
            return Err(CliError::Config("budget must be positive".into()));
        }
        Ok(())
    }

    pub fn exec(&self) -> Exec {
        if self.parallel {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    pub fn spec(&self, q: u32) -> Result<GroupSpec, CliError> {
        Ok(match self.kind {
            GroupKind::GL => GroupSpec::gl(self.n, q)?,
            GroupKind::SL => GroupSpec::sl(self.n, q)?,
        })
    }

    pub fn context(&self, q: u32) -> Result<Context, CliError> {
        Ok(Context::new(self.spec(q)?, Budget::new(self.budget))?.with_exec(self.exec()))
    }

    /// SHA-256 of the canonical JSON of the configuration.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn envelope<T: Serialize>(cfg: &RunConfig, body_key: &str, body: T) -> serde_json::Value {
    let mut v = serde_json::json!({
        "tool": "parclass",
        "versions": { "parclass-core": parclass::VERSION, "parclass-cli": env!("CARGO_PKG_VERSION") },
        "config_hash": cfg.hash(),
        "config": cfg,
    });
    v[body_key] = serde_json::to_value(body).expect("report serializes");
    v
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Config(format!("bad output path {path:?}")))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn render_counts(cfg: &RunConfig, reports: &[CountReport]) -> String {
    match cfg.format {
        Format::Json => to_json(&envelope(cfg, "reports", reports)),
        Format::Csv => {
            let mut s = format!("{}\n", CountReport::CSV_HEADER);
            for r in reports {
                let _ = writeln!(s, "{}", r.csv_row());
            }
            s
        }
        Format::Md => {
            let mut s = String::from("| group | parabolic | quantity | q | brute | formula | agree |\n|---|---|---|---|---|---|---|\n");
            for r in reports {
                let o = |v: Option<i128>| v.map_or("-".to_string(), |x| x.to_string());
                let _ = writeln!(
                    s,
                    "| {} | ({}) | {} | {} | {} | {} | {} |",
                    r.group,
                    r.parabolic,
                    r.quantity,
                    r.q,
                    o(r.brute),
                    o(r.formula),
                    r.agree.map_or("-".to_string(), |a| a.to_string())
                );
            }
            s
        }
    }
}

fn render_identities(cfg: &RunConfig, reports: &[IdentityReport]) -> String {
    match cfg.format {
        Format::Json => to_json(&envelope(cfg, "identities", reports)),
        Format::Csv => {
            let mut s = String::from("identity,checked,failed\n");
            for r in reports {
                let _ = writeln!(s, "\"{}\",{},{}", r.name, r.checked, r.failed);
            }
            s
        }
        Format::Md => {
            let mut s = String::from("| identity | checked | failed | result |\n|---|---|---|---|\n");
            for r in reports {
                let verdict = if r.passed() { "pass" } else { "FAIL" };
                let _ = writeln!(s, "| {} | {} | {} | {verdict} |", r.name, r.checked, r.failed);
            }
            s
        }
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn emit(output: &Option<PathBuf>, text: String) -> Result<String, CliError> {
    match output {
        Some(p) => {
            write_atomic(p, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn cmd_count(args: &CountArgs) -> Result<(String, Option<CliError>), CliError> {
    let mut cfg = RunConfig::from_common("count", &args.common)?;
    if let Some(p) = &args.parabolic {
        cfg.compositions = vec![ParabolicSpec::from_str(p)?.composition().to_vec()];
    }
    if !args.quantity.is_empty() {
        cfg.quantities = args.quantity.iter().map(|s| Quantity::from_str(s)).collect::<Result<_, _>>()?;
    }
    cfg.engine = Engine::from_str(&args.engine)?;
    cfg.validate()?;
    let mut reports = Vec::new();
    for &q in &cfg.qs {
        let ctx = cfg.context(q)?;
        for comp in &cfg.compositions {
            let p = ParabolicSpec::new(comp.clone())?;
            for &quantity in &cfg.quantities {
                reports.push(count(&ctx, &p, quantity, cfg.engine)?);
            }
        }
    }
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.agree == Some(false))
        .map(|r| format!("{} ({}) {}: brute {:?} formula {:?}", r.group, r.parabolic, r.quantity, r.brute, r.formula))
        .collect();
    let out = emit(&cfg.output, render_counts(&cfg, &reports))?;
    let err = (!bad.is_empty()).then(|| CliError::Mismatch(format!("engine disagreement: {}", bad.join("; "))));
    Ok((out, err))
}

pub fn cmd_verify(args: &CommonArgs) -> Result<(String, Option<CliError>), CliError> {
    let cfg = RunConfig::from_common("verify", args)?;
    cfg.validate()?;
    let mut reports = Vec::new();
    for &q in &cfg.qs {
        let ctx = cfg.context(q)?;
        reports.extend(verify_suite(&ctx)?);
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.clone()).collect();
    let out = emit(&cfg.output, render_identities(&cfg, &reports))?;
    let err = (!failed.is_empty()).then(|| CliError::Mismatch(format!("identities failed: {}", failed.join("; "))));
    Ok((out, err))
}

#[derive(Serialize)]
struct PorcOutput<'a> {
    search: &'a PorcSearch,
    fits: Vec<serde_json::Value>,
}

pub fn cmd_porc(args: &PorcArgs) -> Result<String, CliError> {
    let mut cfg = RunConfig::from_common("porc", &args.common.common)?;
    cfg.compositions = vec![ParabolicSpec::from_str(&args.common.parabolic)?.composition().to_vec()];
    cfg.quantities = vec![Quantity::from_str(&args.common.quantity)?];
    cfg.validate()?;
    if cfg.kind != GroupKind::GL {
        return Err(CliError::Config("PORC sweeps are implemented for GL only".into()));
    }
    if args.moduli.is_empty() || args.moduli.contains(&0) {
        return Err(CliError::Config("moduli must be positive".into()));
    }
    let d = args.degree.unwrap_or(cfg.n * cfg.n);
    let budget = Budget::new(cfg.budget);
    let text = if args.fibers {
        let probe: FiberProbe = additive_fiber_probe(cfg.n, &cfg.qs, &budget, cfg.exec())?;
        match cfg.format {
            Format::Json => to_json(&envelope(&cfg, "fiber_probe", &probe)),
            _ => {
                let mut s = String::from("Empirical fit of additive fiber sizes; evidence, not proof.\n\n");
                for e in &probe.entries {
                    let _ = writeln!(s, "### {} (elements)\n\n{}", e.label, markdown_table(&e.elements));
                    let _ = writeln!(s, "### {} (orbits)\n\n{}", e.label, markdown_table(&e.classes));
                }
                s
            }
        }
    } else {
        let series = sweep(cfg.n, &cfg.compositions[0], cfg.quantities[0], &cfg.qs, &budget, cfg.exec())?;
        let res = search(&series, &args.moduli, d)?;
        match cfg.format {
            Format::Json => {
                let fits = res.fits.iter().map(fit_json).collect();
                to_json(&envelope(&cfg, "porc", PorcOutput { search: &res, fits }))
            }
            _ => markdown_table(&res),
        }
    };
    emit(&cfg.output, text)
}

pub fn cmd_green(args: &GreenArgs) -> Result<String, CliError> {
    let t = green_table_with_bound(args.n, args.bound)?;
    let text = match args.format {
        Format::Csv => t.to_csv(),
        Format::Json => {
            let rows: Vec<Vec<String>> = t.entries.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
            to_json(&serde_json::json!({
                "n": t.n,
                "partitions": t.partitions.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "entries": rows,
            }))
        }
        Format::Md => {
            let mut s = format!(
                "| λ \\ ρ | {} |\n|---|{}\n",
                t.partitions.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" | "),
                "---|".repeat(t.partitions.len())
            );
            for (lambda, row) in t.partitions.iter().zip(&t.entries) {
                let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(s, "| {lambda} | {} |", cells.join(" | "));
            }
            s
        }
    };
    emit(&args.output, text)
}

/// Parses `args` (including the program name) and runs the selected command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match &cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Porc(a) => cmd_porc(a).map(|s| (s, None)),
        Command::Green(a) => cmd_green(a).map(|s| (s, None)),
    };
    match result {
        Ok((stdout, None)) => Outcome { code: 0, stdout, stderr: String::new() },
        Ok((stdout, Some(e))) => Outcome { code: e.exit_code(), stdout, stderr: format!("error: {}\n", e.message()) },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {}\n", e.message()) },
    }
}
