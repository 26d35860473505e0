//! The `schur` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad arguments or
//! input, 3 a resource cap (budget or enumeration bound) was hit.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::counting::{
    is_prime, omega_odd, omega_odd_eval, omega_two, CountError, OddOmegaTable, PrimeSpec, TwoOmegaTable,
};
use crate::enumerate::{
    crosscheck, enumerate_bruteforce, enumerate_modulus, split_modulus, tally_by_subfield, EnumError, EnumOptions,
    EnumerationResult, DEFAULT_BOUND, DEFAULT_BUDGET,
};
use crate::fixtures::{check_figures, check_tables};
use crate::genfun::{verify_gf_odd, verify_gf_two, GfReport, DEFAULT_ORDER};
use crate::report::CheckLine;
use crate::schur::{is_schur_ring, GroupPartition};
use crate::sequences::{catalan, catalan_triangle, schroder, super_catalan_triangle};
use crate::units::lattice_export;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Overrides the default brute-force budget.
pub const BUDGET_ENV: &str = "SCHUR_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "schur",
    version,
    about = "Count, enumerate and verify Schur rings over Z_{p^n}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of Schur rings over Z_{p^n}.
    Count(CountArgs),
    /// The Omega polynomial in x = d(p-1), optionally with its layers.
    Poly(PolyArgs),
    /// Counts for n = 1..=max-n, one row each.
    Table(TableArgs),
    /// List every Schur ring over Z_M.
    Enumerate(EnumerateArgs),
    /// Run a verification and report one line per check.
    Verify(VerifyArgs),
    /// Check the Schur ring axioms for a partition JSON file.
    CheckPartition(CheckPartitionArgs),
    /// Subgroup lattice of (Z/p^nZ)* as JSON.
    Lattice(LatticeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("prime").required(true).args(["p", "two"])))]
struct PrimeChoice {
    /// The prime p.
    #[arg(long)]
    p: Option<u64>,
    /// Shorthand for --p 2.
    #[arg(long)]
    two: bool,
}

impl PrimeChoice {
    fn prime(&self) -> u64 {
        if self.two {
            2
        } else {
            self.p.expect("clap enforces the group")
        }
    }
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    prime: PrimeChoice,
    /// The exponent n.
    #[arg(long)]
    n: usize,
    /// Also print Omega(n) as a polynomial (odd p).
    #[arg(long)]
    poly: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[arg(long)]
    n: usize,
    /// Also print Omega(n,k) for k = 0..=n.
    #[arg(long)]
    layers: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    prime: PrimeChoice,
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct ResourceArgs {
    /// Brute-force cap on visited search states [env: SCHUR_BUDGET].
    #[arg(long)]
    budget: Option<u64>,
    /// Largest modulus the constructive enumerator accepts.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: u64,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

impl ResourceArgs {
    fn options(&self) -> EnumOptions {
        EnumOptions {
            bound: self.bound,
            jobs: self.jobs,
        }
    }

    fn budget(&self) -> Result<u64, CliError> {
        if let Some(b) = self.budget {
            return Ok(b);
        }
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
            Err(_) => Ok(DEFAULT_BUDGET),
        }
    }
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// A prime power p^n (1 is allowed).
    #[arg(long)]
    modulus: u64,
    /// Use the exhaustive search instead of the constructive generator.
    #[arg(long)]
    brute: bool,
    /// Write every ring with its omega image as JSON.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Also print how many rings map onto each subfield.
    #[arg(long)]
    tally: bool,
    #[command(flatten)]
    resources: ResourceArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GfChoice {
    Odd,
    Two,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("what").required(true).args(["modulus", "gf", "triangles", "tables", "figures"])))]
struct VerifyArgs {
    /// Enumerate Z_M and compare with the counting formulas.
    #[arg(long)]
    modulus: Option<u64>,
    /// With --modulus, also compare against the brute-force search.
    #[arg(long, requires = "modulus")]
    brute: bool,
    /// Check a generating-function identity.
    #[arg(long, value_enum)]
    gf: Option<GfChoice>,
    /// Series order for --gf.
    #[arg(long, default_value_t = DEFAULT_ORDER, requires = "gf")]
    order: usize,
    /// Check both coefficient triangles up to this many rows.
    #[arg(long)]
    triangles: Option<usize>,
    /// Compare the reference count tables with the formulas.
    #[arg(long)]
    tables: bool,
    /// Compare the reference polynomial figures and triangles.
    #[arg(long)]
    figures: bool,
    #[command(flatten)]
    resources: ResourceArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct CheckPartitionArgs {
    /// A partition object, or an array of them (as written by --dump).
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[command(flatten)]
    prime: PrimeChoice,
    #[arg(long)]
    n: u32,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Resource(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::BudgetExhausted { .. } | EnumError::BoundExceeded { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<i32, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Count(a) => cmd_count(&a, out),
        Command::Poly(a) => cmd_poly(&a, out),
        Command::Table(a) => cmd_table(&a, out),
        Command::Enumerate(a) => cmd_enumerate(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::CheckPartition(a) => cmd_check_partition(&a, out),
        Command::Lattice(a) => cmd_lattice(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Resource(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_RESOURCE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// A JSON number when it fits in `u64`, a decimal string otherwise.
fn big_json(v: &BigInt) -> Value {
    v.to_u64()
        .map(Value::from)
        .unwrap_or_else(|| Value::String(v.to_string()))
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("json value serializes")
    )?;
    Ok(())
}

fn check_prime(p: u64) -> Result<(), CliError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{p} is not a prime")))
    }
}

fn count_for(p: u64, n: usize) -> Result<BigInt, CliError> {
    if p == 2 {
        Ok(omega_two(n))
    } else {
        Ok(omega_odd_eval(&PrimeSpec::new(p, n)?)?)
    }
}

fn cmd_count(a: &CountArgs, out: &mut dyn Write) -> Outcome {
    let p = a.prime.prime();
    check_prime(p)?;
    if a.poly && p == 2 {
        return Err(CliError::Usage(
            "--poly applies to odd primes; p = 2 counts are integers".into(),
        ));
    }
    let count = count_for(p, a.n)?;
    let poly = a.poly.then(|| omega_odd(a.n));
    match a.format {
        Format::Text => {
            writeln!(out, "{count}")?;
            if let Some(poly) = &poly {
                writeln!(out, "{poly}")?;
            }
        }
        Format::Json => {
            let mut v = json!({"p": p, "n": a.n, "count": big_json(&count)});
            if let Some(poly) = &poly {
                v["x"] = json!(PrimeSpec::new(p, a.n)?.x());
                v["poly"] = json!(poly.to_string());
            }
            print_json(out, &v)?;
        }
        Format::Csv => {
            if p == 2 {
                writeln!(out, "n,count\n{},{count}", a.n)?;
            } else {
                writeln!(out, "p,n,count\n{p},{},{count}", a.n)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_poly(a: &PolyArgs, out: &mut dyn Write) -> Outcome {
    let n = a.n;
    let total = omega_odd(n);
    let layers: Vec<(usize, String)> = if a.layers {
        let table = OddOmegaTable::build(n);
        (0..=n)
            .map(|k| Ok((k, table.layer(n, k)?.to_string())))
            .collect::<Result<_, CountError>>()?
    } else {
        Vec::new()
    };
    match a.format {
        Format::Text => {
            writeln!(out, "{total}")?;
            for (k, p) in &layers {
                writeln!(out, "Omega({n},{k}) = {p}")?;
            }
        }
        Format::Json => {
            let mut v = json!({"n": n, "omega": total.to_string()});
            if a.layers {
                v["layers"] = layers.iter().map(|(k, p)| json!({"k": k, "omega": p})).collect();
            }
            print_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "n,k,polynomial")?;
            writeln!(out, "{n},,{total}")?;
            for (k, p) in &layers {
                writeln!(out, "{n},{k},{p}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Outcome {
    let p = a.prime.prime();
    check_prime(p)?;
    let rows: Vec<(usize, BigInt)> = if p == 2 {
        let t = TwoOmegaTable::build(a.max_n);
        (1..=a.max_n).map(|n| (n, t.total(n).clone())).collect()
    } else {
        let x = BigInt::from(PrimeSpec::new(p, a.max_n)?.x());
        let t = OddOmegaTable::build(a.max_n);
        (1..=a.max_n).map(|n| (n, t.total(n).eval(&x))).collect()
    };
    match a.format {
        Format::Csv => {
            writeln!(out, "{}", if p == 2 { "n,count" } else { "p,n,count" })?;
            for (n, c) in &rows {
                if p == 2 {
                    writeln!(out, "{n},{c}")?;
                } else {
                    writeln!(out, "{p},{n},{c}")?;
                }
            }
        }
        Format::Text => {
            for (n, c) in &rows {
                writeln!(out, "{n}\t{c}")?;
            }
        }
        Format::Json => {
            let v: Value = rows
                .iter()
                .map(|(n, c)| json!({"p": p, "n": n, "count": big_json(c)}))
                .collect();
            print_json(out, &v)?;
        }
    }
    Ok(EXIT_OK)
}

fn tally_lines(r: &EnumerationResult) -> Result<Vec<String>, CliError> {
    let t = tally_by_subfield(r)?;
    Ok(t.fields
        .iter()
        .map(|f| {
            // odd p: the units group is cyclic, so the order names the subgroup
            let name = f
                .field
                .clone()
                .unwrap_or_else(|| format!("fixed by the subgroup of order {}", f.subgroup.len()));
            format!("layer {} {}: {}", f.layer, name, f.count)
        })
        .collect())
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Outcome {
    let m = a.modulus;
    if m == 0 {
        return Err(CliError::Usage("modulus must be positive".into()));
    }
    split_modulus(m)?;
    let r = if a.brute {
        enumerate_bruteforce(m, a.resources.budget()?)?
    } else {
        enumerate_modulus(m, &a.resources.options())?
    };
    if let Some(path) = &a.dump {
        let text = serde_json::to_string_pretty(&r.dump()).expect("json value serializes");
        std::fs::write(path, text + "\n")?;
    }
    match a.format {
        Format::Json => {
            let mut v = json!({"modulus": m, "method": r.method, "count": r.count()});
            if a.tally {
                v["tally"] = serde_json::to_value(tally_by_subfield(&r)?).expect("tally serializes");
            }
            print_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "modulus,count\n{m},{}", r.count())?;
        }
        Format::Text => {
            writeln!(out, "{}", r.count())?;
            if a.tally {
                for line in tally_lines(&r)? {
                    writeln!(out, "{line}")?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn report(lines: &[CheckLine], format: Format, out: &mut dyn Write) -> Outcome {
    let ok = lines.iter().all(|l| l.ok);
    match format {
        Format::Json => print_json(out, &json!({"ok": ok, "checks": lines}))?,
        Format::Csv => {
            writeln!(out, "check,ok,detail")?;
            for l in lines {
                writeln!(out, "{},{},\"{}\"", l.check, l.ok, l.detail.replace('"', "\"\""))?;
            }
        }
        Format::Text => {
            for l in lines {
                writeln!(out, "{l}")?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn gf_line(r: &GfReport) -> CheckLine {
    let detail = match r.first_mismatch_index {
        None => format!("F*D = N through z^{}", r.order),
        Some(i) => format!("first mismatch at z^{i}"),
    };
    CheckLine::new(
        format!(
            "gf {}",
            serde_json::to_value(r.case)
                .expect("case serializes")
                .as_str()
                .unwrap_or("")
        ),
        r.ok,
        detail,
    )
}

fn triangle_lines(rows: usize) -> Vec<CheckLine> {
    let c = catalan_triangle(rows);
    let s = super_catalan_triangle(rows);
    let mut bad_c = Vec::new();
    let mut bad_s = Vec::new();
    for k in 1..=rows {
        for j in 1..k {
            let summed: BigInt = (j..=k).map(|l| c.get(j - 1, l)).sum();
            if c.get(j, k) != &summed {
                bad_c.push((j, k));
            }
            let tail: BigInt = (j..k).map(|l| s.get(j - 1, l)).sum();
            if s.get(j, k) != &(s.get(j - 1, k) + tail * 2) {
                bad_s.push((j, k));
            }
        }
        if c.diagonal(k) != &catalan(k as u64) {
            bad_c.push((k - 1, k));
        }
        if (s.diagonal(k) * 2) != schroder(k as u64) {
            bad_s.push((k - 1, k));
        }
    }
    let line = |name: &str, bad: Vec<(usize, usize)>, what: &str| {
        let detail = if bad.is_empty() {
            format!("{rows} rows satisfy the summed recurrence; diagonal gives {what}")
        } else {
            format!("cells (j,k) {bad:?} disagree")
        };
        CheckLine::new(name, bad.is_empty(), detail)
    };
    vec![
        line("catalan triangle", bad_c, "the Catalan numbers"),
        line("super-catalan triangle", bad_s, "half the Schroder numbers"),
    ]
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let lines = if let Some(m) = a.modulus {
        if m == 0 {
            return Err(CliError::Usage("modulus must be positive".into()));
        }
        let (p, n) = split_modulus(m)?;
        let budget = if a.brute { Some(a.resources.budget()?) } else { None };
        crosscheck(p, n, &a.resources.options(), budget)?.lines
    } else if let Some(gf) = a.gf {
        let r = match gf {
            GfChoice::Odd => verify_gf_odd(a.order),
            GfChoice::Two => verify_gf_two(a.order),
        };
        if a.format == Format::Json {
            print_json(out, &serde_json::to_value(&r).expect("report serializes"))?;
            return Ok(if r.ok { EXIT_OK } else { EXIT_FAILED });
        }
        vec![gf_line(&r)]
    } else if let Some(rows) = a.triangles {
        if rows == 0 {
            return Err(CliError::Usage("--triangles needs at least one row".into()));
        }
        triangle_lines(rows)
    } else if a.tables {
        check_tables()
    } else {
        check_figures()
    };
    report(&lines, a.format, out)
}

fn cmd_check_partition(a: &CheckPartitionArgs, out: &mut dyn Write) -> Outcome {
    let text = std::fs::read_to_string(&a.file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.file.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: invalid JSON: {e}", a.file.display())))?;
    let items = match value {
        Value::Array(items) => items,
        single => vec![single],
    };
    let mut verdicts = Vec::new();
    for item in items {
        let p: GroupPartition = serde_json::from_value(item)
            .map_err(|e| CliError::Usage(format!("{}: not a partition: {e}", a.file.display())))?;
        let verdict = is_schur_ring(&p);
        verdicts.push((p, verdict));
    }
    let ok = verdicts.iter().all(|(_, v)| v.is_ok());
    match a.format {
        Format::Json => {
            let v: Vec<Value> = verdicts
                .iter()
                .map(|(p, v)| match v {
                    Ok(()) => json!({"modulus": p.modulus(), "ok": true}),
                    Err(w) => json!({"modulus": p.modulus(), "ok": false, "violation": w}),
                })
                .collect();
            print_json(out, &json!({"ok": ok, "results": v}))?;
        }
        _ => {
            for (p, v) in &verdicts {
                match v {
                    Ok(()) => writeln!(out, "ok {p}")?,
                    Err(w) => writeln!(out, "violated {w}\n  in {p}")?,
                }
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_lattice(a: &LatticeArgs, out: &mut dyn Write) -> Outcome {
    let p = a.prime.prime();
    check_prime(p)?;
    if p.checked_pow(a.n).is_none_or(|m| m > DEFAULT_BOUND) {
        return Err(CliError::Resource(format!(
            "{p}^{} exceeds the bound {DEFAULT_BOUND}",
            a.n
        )));
    }
    let l = lattice_export(p, a.n).map_err(|e| CliError::Usage(e.to_string()))?;
    print_json(out, &serde_json::to_value(&l).expect("lattice serializes"))?;
    Ok(EXIT_OK)
}
