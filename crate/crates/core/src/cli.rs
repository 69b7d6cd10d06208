//! The `qgrass` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::families::{
    self, analyze_t_structure, build_seeded, common_core_dim, covering_number, io, is_maximal, is_t_intersecting,
    reconstruct, Construction, Family,
};
use crate::gfq::make_field;
use crate::harness::{
    self, binomial_identities, freeze_fixtures, g_difference_checks, inequality_sweeps, resolve_budget, run_campaign,
    size_dichotomy, Campaign, CheckRecord, GDifferenceGrid, IdentityGrid, Point, Rel, Report, Status, SweepGrid,
};
use crate::qnum;

pub const DESK_VERIFY: &str = include_str!("../configs/desk-verify.json");
pub const DESK_SIZES: &str = include_str!("../configs/fixtures/desk-sizes.json");
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Exit status for a failed check.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for malformed input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qgrass", version, about = "Exact checks on t-intersecting families of subspaces over GF(q)")]
pub struct Cli {
    /// Field size.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Largest enumeration allowed; overrides QGRASS_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for the flags the constructions are built from.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Directory for report and family files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    H1,
    H2,
    H3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyCheck {
    Intersecting,
    Trivial,
    Maximal,
    Tau,
    Structure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    GDifference,
    Identities,
    Inequalities,
    Dichotomy,
}

#[derive(Debug, Args)]
pub struct Spec {
    #[arg(long)]
    pub t: i64,
    #[arg(long)]
    pub k: i64,
    #[arg(long)]
    pub n: i64,
    /// `dim C`, for h2.
    #[arg(long)]
    pub c: Option<i64>,
}

#[derive(Debug, Args)]
pub struct Source {
    /// A family file (JSON or binary).
    pub file: Option<PathBuf>,
    /// Build this construction instead of reading a file.
    #[arg(long, value_enum, requires_all = ["t", "k", "n"], conflicts_with = "file")]
    pub family: Option<Kind>,
    #[arg(long)]
    pub t: Option<i64>,
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub c: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gaussian binomial [a, b]_q.
    Qbinom { a: i64, b: i64 },
    /// Closed-form size of a construction.
    Size {
        #[arg(value_enum)]
        family: Kind,
        #[command(flatten)]
        spec: Spec,
        /// Also build the family and compare.
        #[arg(long)]
        enumerate: bool,
    },
    /// Build a construction and write it as a family file.
    Construct {
        #[arg(value_enum)]
        family: Kind,
        #[command(flatten)]
        spec: Spec,
        /// Write the compact binary format.
        #[arg(long)]
        binary: bool,
        /// Output file; defaults to stdout, or a file under --out.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run predicates on a family.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [
            FamilyCheck::Intersecting, FamilyCheck::Trivial, FamilyCheck::Maximal, FamilyCheck::Tau, FamilyCheck::Structure
        ])]
        checks: Vec<FamilyCheck>,
    },
    /// Covering number and minimal covers of a family.
    Tau {
        #[command(flatten)]
        source: Source,
    },
    /// Formula-level sweeps over a parameter grid.
    Sweep {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Sweep::GDifference, Sweep::Identities, Sweep::Inequalities, Sweep::Dichotomy])]
        which: Vec<Sweep>,
        /// Field sizes; --q selects a single one.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5])]
        qs: Vec<u64>,
        #[arg(long, default_value_t = 6)]
        t_max: i64,
        #[arg(long, default_value_t = 10)]
        k_max: i64,
        #[arg(long, default_value_t = 40)]
        n_max: i64,
    },
    /// Run a campaign config; `desk-verify` names the bundled one.
    Campaign {
        config: String,
        /// Enumerate the sizes at the config's points and write them as fixtures instead.
        #[arg(long)]
        freeze: Option<PathBuf>,
        /// Print the bundled report schema and exit.
        #[arg(long)]
        print_schema: bool,
    },
}

/// Parses `args` and runs; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let q = cli.q.unwrap_or(2);
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Qbinom { a, b } => {
            let v = qnum::gauss_binom(*a, *b, q);
            match cli.format {
                Format::Human => println!("{} = {v}", bracket(*a, *b, q)),
                Format::Json => println!("{}", json!({"a": a, "b": b, "q": q, "value": v.to_string()})),
                Format::Csv => println!("a,b,q,value\n{a},{b},{q},{v}"),
            }
            Ok(0)
        }
        Command::Size { family, spec, enumerate } => cmd_size(cli, q, seed, *family, spec, *enumerate),
        Command::Construct { family, spec, binary, output } => {
            let fam = build(cli, q, seed, *family, spec)?;
            let bytes = if *binary { io::to_binary(&fam) } else { (io::to_json(&fam) + "\n").into_bytes() };
            let target = output.clone().or_else(|| {
                cli.out.as_ref().map(|d| {
                    let ext = if *binary { "qgf" } else { "json" };
                    d.join(format!("{}-q{q}-n{}-k{}-t{}.{ext}", family_label(*family, spec.c), spec.n, spec.k, spec.t))
                })
            });
            match target {
                Some(path) => {
                    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                        std::fs::create_dir_all(dir)?;
                    }
                    std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
                    eprintln!("{} members written to {}", fam.len(), path.display());
                }
                None => std::io::stdout().write_all(&bytes)?,
            }
            Ok(0)
        }
        Command::Check { source, checks } => {
            let fam = load(cli, q, seed, source)?;
            let report = Report::new("check", family_checks(&fam, checks, resolve_budget(cli.budget, None))?);
            emit(cli, &report, true)
        }
        Command::Tau { source } => cmd_tau(cli, q, seed, source),
        Command::Sweep { which, qs, t_max, k_max, n_max } => {
            let qs = cli.q.map_or_else(|| qs.clone(), |q| vec![q]);
            let mut records = Vec::new();
            let grid = SweepGrid { qs: qs.clone(), t_max: *t_max, k_max: *k_max, n_max: *n_max };
            for w in which {
                records.extend(match w {
                    Sweep::GDifference => {
                        g_difference_checks(&GDifferenceGrid { qs: qs.clone(), t_max: *t_max, n_max: *n_max })
                    }
                    Sweep::Identities => binomial_identities(&IdentityGrid { qs: qs.clone(), m_max: *n_max }),
                    Sweep::Inequalities => inequality_sweeps(&grid),
                    Sweep::Dichotomy => size_dichotomy(&grid),
                });
            }
            emit(cli, &Report::new("sweep", records), true)
        }
        Command::Campaign { config, freeze, print_schema } => {
            if *print_schema {
                print!("{REPORT_SCHEMA}");
                return Ok(0);
            }
            let campaign = load_campaign(config)?;
            let budget = resolve_budget(cli.budget, campaign.budget);
            let seed = cli.seed.unwrap_or(campaign.seed);
            if let Some(path) = freeze {
                let fixtures = freeze_fixtures(&campaign.points, seed, budget);
                std::fs::write(path, serde_json::to_string_pretty(&fixtures)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                eprintln!("{} fixtures written to {}", fixtures.len(), path.display());
                return Ok(0);
            }
            let campaign = Campaign { seed, ..campaign };
            let report = run_campaign(&campaign, budget);
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("reports"));
            let (j, c) = report.write_to(&dir)?;
            eprintln!("reports: {} {}", j.display(), c.display());
            emit(cli, &report, false)
        }
    }
}

/// `[a, b]_q`.
pub fn bracket(a: i64, b: i64, q: u64) -> String {
    format!("[{a}, {b}]_{q}")
}

fn family_label(kind: Kind, c: Option<i64>) -> String {
    match (kind, c) {
        (Kind::H1, _) => "h1".into(),
        (Kind::H2, Some(c)) => format!("h2(c={c})"),
        (Kind::H2, None) => "h2".into(),
        (Kind::H3, _) => "h3".into(),
    }
}

fn construction(kind: Kind, c: Option<i64>) -> Result<Construction> {
    Ok(match kind {
        Kind::H1 => Construction::H1,
        Kind::H3 => Construction::H3,
        Kind::H2 => match c {
            Some(c) if c >= 0 => Construction::H2 { c: c as usize },
            Some(c) => bail!("dim C = {c} is negative"),
            None => bail!("h2 needs --c"),
        },
    })
}

fn closed_size(kind: Kind, s: &Spec, q: u64) -> Result<BigInt> {
    if !qnum::is_prime_power(q) {
        bail!("q = {q} is not a prime power");
    }
    Ok(match kind {
        Kind::H1 => qnum::h1_size(s.t, s.k, s.n, q),
        Kind::H2 => qnum::h2_size(s.t, s.k, s.c.context("h2 needs --c")?, s.n, q)?,
        Kind::H3 => qnum::h3_size(s.t, s.k, s.n, q),
    })
}

fn nonneg(name: &str, v: i64) -> Result<usize> {
    usize::try_from(v).with_context(|| format!("--{name} must be non-negative"))
}

fn build(cli: &Cli, q: u64, seed: u64, kind: Kind, s: &Spec) -> Result<Family> {
    let which = construction(kind, s.c)?;
    let field = make_field(q)?;
    let budget = resolve_budget(cli.budget, None);
    let (n, k, t) = (nonneg("n", s.n)?, nonneg("k", s.k)?, nonneg("t", s.t)?);
    Ok(build_seeded(which, &field, n, k, t, seed, budget)?)
}

fn cmd_size(cli: &Cli, q: u64, seed: u64, kind: Kind, s: &Spec, enumerate: bool) -> Result<i32> {
    let label = family_label(kind, s.c);
    let closed = closed_size(kind, s, q)?;
    let enumerated = if enumerate { Some(BigInt::from(build(cli, q, seed, kind, s)?.len())) } else { None };
    let matched = enumerated.as_ref().map(|e| *e == closed);
    match cli.format {
        Format::Human => {
            println!("{label}(t={}, k={}, n={})_{q} = {closed}", s.t, s.k, s.n);
            if let (Some(e), Some(m)) = (&enumerated, matched) {
                println!("enumerated = {e}");
                println!("{}", if m { "MATCH" } else { "MISMATCH" });
            }
        }
        Format::Json => {
            let mut v =
                json!({"family": label, "q": q, "n": s.n, "k": s.k, "t": s.t, "c": s.c, "size": closed.to_string()});
            if let (Some(e), Some(m)) = (&enumerated, matched) {
                v["enumerated"] = json!(e.to_string());
                v["match"] = json!(m);
            }
            println!("{v}");
        }
        Format::Csv => {
            println!("family,q,n,k,t,c,size,enumerated,match");
            let c = s.c.map_or(String::new(), |c| c.to_string());
            let e = enumerated.as_ref().map_or(String::new(), |e| e.to_string());
            let m = matched.map_or(String::new(), |m| m.to_string());
            println!("{label},{q},{},{},{},{c},{closed},{e},{m}", s.n, s.k, s.t);
        }
    }
    Ok(if matched == Some(false) { EXIT_FAIL } else { 0 })
}

fn load(cli: &Cli, q: u64, seed: u64, src: &Source) -> Result<Family> {
    if let Some(path) = &src.file {
        return io::read_family(path).with_context(|| format!("reading {}", path.display()));
    }
    let Some(kind) = src.family else {
        bail!("give a family file or --family with --t, --k, --n");
    };
    let spec = Spec { t: src.t.unwrap_or(0), k: src.k.unwrap_or(0), n: src.n.unwrap_or(0), c: src.c };
    build(cli, q, seed, kind, &spec)
}

fn family_point(fam: &Family) -> Point {
    let p = fam.params();
    let pt = Point::nkt(p.q, p.n as i64, p.k as i64, p.t as i64);
    match fam.provenance() {
        families::Provenance::H2 { c, .. } => pt.with_c(c.dim() as i64),
        _ => pt,
    }
}

/// Records for the selected predicates.
pub fn family_checks(fam: &Family, checks: &[FamilyCheck], budget: u64) -> Result<Vec<CheckRecord>> {
    let pt = family_point(fam);
    let p = fam.params();
    let mut out = Vec::new();
    let inter = is_t_intersecting(fam);
    for c in checks {
        let t0 = Instant::now();
        let rec = match c {
            FamilyCheck::Intersecting => {
                let r = CheckRecord::flag("intersecting", pt, true, inter.intersecting);
                match inter.witness {
                    Some((i, j, d)) => r.detail(format!("members {i} and {j} meet in dimension {d}")),
                    None => r,
                }
            }
            FamilyCheck::Trivial => {
                let core = common_core_dim(fam)?;
                CheckRecord::relation("nontrivial", pt, &BigInt::from(core), Rel::Lt, &BigInt::from(p.t))
                    .detail(format!("common core dimension {core}"))
            }
            FamilyCheck::Maximal if !inter.intersecting => {
                CheckRecord::failed("maximal", pt, "true".into(), "family is not t-intersecting".into())
            }
            FamilyCheck::Maximal => {
                let m = is_maximal(fam, budget)?;
                let r = CheckRecord::flag("maximal", pt, true, m.maximal);
                match &m.witness {
                    Some(w) => r.detail(format!("can add {w}")),
                    None => r.detail(format!("{} subspaces scanned", m.scanned)),
                }
            }
            FamilyCheck::Tau => {
                let cover = covering_number(fam, p.k, budget)?;
                match cover.level {
                    Some(l) => CheckRecord::matches("tau", pt, format!("<= {}", p.k), format!("<= {}", p.k))
                        .detail(format!("tau = {l}, {} minimal covers", cover.witnesses.len())),
                    None => CheckRecord::failed("tau", pt, format!("<= {}", p.k), "no cover up to dimension k".into()),
                }
            }
            FamilyCheck::Structure => structure_record(fam, pt, budget)?,
        };
        out.push(rec.ms(t0.elapsed().as_millis() as u64));
    }
    Ok(out)
}

fn structure_record(fam: &Family, pt: Point, budget: u64) -> Result<CheckRecord> {
    let t = fam.params().t;
    let Some((_, shape)) = analyze_t_structure(fam, budget)? else {
        return Ok(CheckRecord::failed("structure", pt, "reconstructed".into(), format!("tau is not {}", t + 1)));
    };
    let (rec, rebuilt) = reconstruct(fam, &shape, budget)?;
    let same = rebuilt.as_ref().is_some_and(|r| r.same_members(fam));
    let name = match &rec {
        families::Reconstruction::H1 { .. } => "h1".to_string(),
        families::Reconstruction::H2 { c, .. } => format!("h2(c={})", c.dim()),
        families::Reconstruction::H3 { .. } => "h3".to_string(),
        families::Reconstruction::NotDetermined { reason } => format!("undetermined: {reason}"),
    };
    let actual = if same { "reconstructed".to_string() } else { format!("not reconstructed ({name})") };
    Ok(CheckRecord::matches("structure", pt, "reconstructed".into(), actual)
        .detail(format!("{} as {name}", shape.label())))
}

fn cmd_tau(cli: &Cli, q: u64, seed: u64, src: &Source) -> Result<i32> {
    let fam = load(cli, q, seed, src)?;
    let budget = resolve_budget(cli.budget, None);
    let p = fam.params();
    let cover = covering_number(&fam, p.k, budget)?;
    match cli.format {
        Format::Human => {
            match cover.level {
                Some(l) => println!("tau_{} = {l}", p.t),
                None => println!("tau_{} > {}", p.t, cover.max_level),
            }
            println!("minimal covers: {}", cover.witnesses.len());
            for w in &cover.witnesses {
                println!("  {}", w.subspace);
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&cover)?),
        Format::Csv => {
            println!("t,tau,witnesses");
            println!("{},{},{}", p.t, cover.level.map_or(String::new(), |l| l.to_string()), cover.witnesses.len());
        }
    }
    Ok(if cover.level.is_some() { 0 } else { EXIT_FAIL })
}

/// Reads a config path, or the bundled `desk-verify`.
pub fn load_campaign(config: &str) -> Result<Campaign> {
    let path = Path::new(config);
    if path.exists() {
        return Ok(Campaign::load(path)?);
    }
    if config == "desk-verify" {
        return bundled_desk_verify();
    }
    bail!("no such campaign config: {config}")
}

pub fn bundled_desk_verify() -> Result<Campaign> {
    let mut c: Campaign = serde_json::from_str(DESK_VERIFY)?;
    c.fixtures_file = None;
    c.fixtures.extend(serde_json::from_str::<Vec<harness::Fixture>>(DESK_SIZES)?);
    Ok(c)
}

fn emit(cli: &Cli, report: &Report, write_out: bool) -> Result<i32> {
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
        Format::Human => print_human(report),
    }
    if let (Some(dir), true) = (&cli.out, write_out) {
        report.write_to(dir)?;
    }
    Ok(if report.failed() { EXIT_FAIL } else { 0 })
}

fn print_human(report: &Report) {
    let mut ids: Vec<&str> = Vec::new();
    for r in &report.records {
        if !ids.contains(&r.check.as_str()) {
            ids.push(&r.check);
        }
    }
    let small = report.records.len() <= 12;
    if small {
        for r in &report.records {
            println!("{}", human_line(r));
        }
    } else {
        println!("{:<32} {:>8} {:>6} {:>6}", "check", "pass", "fail", "skip");
        for id in ids {
            let of = |s: Status| report.records.iter().filter(|r| r.check == id && r.status == s).count();
            println!("{id:<32} {:>8} {:>6} {:>6}", of(Status::Pass), of(Status::Fail), of(Status::Skip));
        }
        for r in report.failures() {
            println!("{}", human_line(r));
        }
    }
    let s = &report.summary;
    print!("{}: {} passed, {} failed, {} skipped of {}", report.status, s.passed, s.failed, s.skipped, s.total);
    if s.all_skipped {
        print!(" (100% skipped)");
    } else if s.skipped > 0 {
        print!(" ({}% skipped)", s.skipped_percent);
    }
    println!();
}

fn human_line(r: &CheckRecord) -> String {
    let p = &r.point;
    let mut at = format!("q={}", p.q);
    for (name, v) in [("n", p.n), ("k", p.k), ("t", p.t), ("c", p.c)] {
        if let Some(v) = v {
            at.push_str(&format!(" {name}={v}"));
        }
    }
    let status = match r.status {
        Status::Pass => "PASS".to_string(),
        Status::Fail => "FAIL".to_string(),
        Status::Skip => format!("SKIP ({})", r.reason.map(|x| x.to_string()).unwrap_or_default()),
    };
    let mut line = format!("{status:<6} {} [{at}]", r.check);
    if r.status != Status::Skip {
        line.push_str(&format!(" expected {} actual {}", r.expected, r.actual));
        if let Some(m) = &r.margin {
            line.push_str(&format!(" margin {m}"));
        }
    }
    if let Some(d) = &r.detail {
        line.push_str(&format!(": {d}"));
    }
    line
}
