//! Verification campaigns: closed forms against enumeration, formula sweeps, reports.
//!
//! A [`Campaign`] is a declarative JSON document naming the checks to run and
//! the grids they run over. [`run_campaign`] turns it into independent jobs,
//! runs them on the rayon pool and assembles a [`Report`] in job order.

mod enumerated;
mod formula;
mod record;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use enumerated::{
    fixture_checks, freeze_fixtures, grassmannian_counts, point_constructions, size_checks, structure_checks,
    type_counts, Fixture,
};
pub use formula::{
    binomial_identities, g_difference_checks, inequality_sweeps, size_dichotomy, type_count_completeness,
};
pub use record::{CheckRecord, Point, Rel, SkipReason, Status};

use crate::gfq::{BUDGET_ENV, DEFAULT_BUDGET};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("campaign config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GDifferenceGrid {
    pub qs: Vec<u64>,
    pub t_max: i64,
    pub n_max: i64,
}

impl Default for GDifferenceGrid {
    fn default() -> Self {
        GDifferenceGrid { qs: vec![2, 3, 4, 5], t_max: 6, n_max: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityGrid {
    pub qs: Vec<u64>,
    pub m_max: i64,
}

impl Default for IdentityGrid {
    fn default() -> Self {
        IdentityGrid { qs: vec![2, 3, 4, 5, 7, 8, 9], m_max: 30 }
    }
}

/// The formula grid shared by inequality sweeps and the dichotomy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub qs: Vec<u64>,
    pub t_max: i64,
    pub k_max: i64,
    pub n_max: i64,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid { qs: vec![2, 3, 4, 5], t_max: 6, k_max: 10, n_max: 40 }
    }
}

/// Every `[n, k]_q` with `n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountGrid {
    pub q: u64,
    pub n_max: usize,
    /// Enumerations up to this length are also checked for duplicates.
    #[serde(default = "default_distinct_max")]
    pub distinct_max: u64,
}

fn default_distinct_max() -> u64 {
    1 << 20
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeCountGrid {
    pub qs: Vec<u64>,
    /// Largest `e + l`.
    pub ambient_max: usize,
    /// Every this many subspaces the pivot shortcut is compared with a real intersection.
    #[serde(default = "default_sample_every")]
    pub sample_every: u64,
}

fn default_sample_every() -> u64 {
    97
}

impl Default for TypeCountGrid {
    fn default() -> Self {
        TypeCountGrid { qs: vec![2, 3], ambient_max: 8, sample_every: default_sample_every() }
    }
}

fn yes() -> bool {
    true
}

/// One enumeration point; `cs` empty means every admissible `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumPoint {
    pub q: u64,
    pub n: i64,
    pub k: i64,
    pub t: i64,
    #[serde(default)]
    pub cs: Vec<i64>,
    /// Run the maximality scan.
    #[serde(default)]
    pub maximal: bool,
    #[serde(default = "yes")]
    pub structure: bool,
    /// Random subspaces `S` for the restriction bounds.
    #[serde(default)]
    pub samples: usize,
}

impl Default for EnumPoint {
    fn default() -> Self {
        EnumPoint { q: 2, n: 0, k: 0, t: 0, cs: Vec::new(), maximal: false, structure: true, samples: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Sizes,
    Fixtures,
    GrassmannianCounts,
    TypeCounts,
    GDifference,
    Identities,
    Sweeps,
    Structure,
    Dichotomy,
}

/// A declarative verification campaign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub points: Vec<EnumPoint>,
    #[serde(default)]
    pub fixtures: Vec<Fixture>,
    /// Extra fixtures, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixtures_file: Option<PathBuf>,
    #[serde(default)]
    pub grid: SweepGrid,
    #[serde(default)]
    pub g_difference: GDifferenceGrid,
    #[serde(default)]
    pub identities: IdentityGrid,
    #[serde(default)]
    pub counts: Vec<CountGrid>,
    #[serde(default)]
    pub type_counts: TypeCountGrid,
}

impl Campaign {
    /// Parses a config and resolves `fixtures_file` against `base`.
    pub fn from_json(text: &str, base: &Path) -> Result<Campaign, HarnessError> {
        let mut c: Campaign = serde_json::from_str(text)?;
        if let Some(rel) = c.fixtures_file.take() {
            let path = base.join(rel);
            let more = std::fs::read_to_string(&path).map_err(io_err(&path))?;
            let more: Vec<Fixture> = serde_json::from_str(&more)?;
            c.fixtures.extend(more);
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Campaign, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Campaign::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

/// `--budget` beats `QGRASS_BUDGET`, which beats the config, which beats the default.
pub fn resolve_budget(flag: Option<u64>, config: Option<u64>) -> u64 {
    let env = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok());
    flag.or(env).or(config).unwrap_or(DEFAULT_BUDGET)
}

type Job<'a> = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync + 'a>;

fn jobs<'a>(c: &'a Campaign, budget: u64) -> Vec<Job<'a>> {
    let seed = c.seed;
    let mut out: Vec<Job<'a>> = Vec::new();
    for kind in &c.checks {
        match kind {
            CheckKind::Sizes => {
                for p in &c.points {
                    out.push(Box::new(move || size_checks(p, seed, budget)));
                }
            }
            CheckKind::Fixtures => out.push(Box::new(move || fixture_checks(&c.fixtures, seed, budget))),
            CheckKind::GrassmannianCounts => {
                for g in &c.counts {
                    out.push(Box::new(move || grassmannian_counts(g, budget)));
                }
            }
            CheckKind::TypeCounts => {
                let g = &c.type_counts;
                out.push(Box::new(move || type_count_completeness(&g.qs, g.ambient_max as i64)));
                out.push(Box::new(move || type_counts(g, seed, budget)));
            }
            CheckKind::GDifference => out.push(Box::new(move || g_difference_checks(&c.g_difference))),
            CheckKind::Identities => out.push(Box::new(move || binomial_identities(&c.identities))),
            CheckKind::Sweeps => out.push(Box::new(move || inequality_sweeps(&c.grid))),
            CheckKind::Structure => {
                for p in c.points.iter().filter(|p| p.structure) {
                    out.push(Box::new(move || structure_checks(p, seed, budget)));
                }
            }
            CheckKind::Dichotomy => out.push(Box::new(move || size_dichotomy(&c.grid))),
        }
    }
    out
}

/// Runs every job of the campaign; records come back in declaration order.
pub fn run_campaign(c: &Campaign, budget: u64) -> Report {
    let records: Vec<CheckRecord> = jobs(c, budget).par_iter().map(|j| j()).collect::<Vec<_>>().concat();
    Report::new(&c.id, records)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    /// Rounded down.
    pub skipped_percent: u64,
    pub all_skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub campaign: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// `PASS` or `FAIL`.
    pub status: String,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    campaign: &'a str,
    check: &'a str,
    q: u64,
    n: Option<i64>,
    k: Option<i64>,
    t: Option<i64>,
    c: Option<i64>,
    expected: &'a str,
    actual: &'a str,
    pass: &'a str,
    ms: u64,
}

impl Report {
    pub fn new(campaign: &str, records: Vec<CheckRecord>) -> Report {
        let count = |s: Status| records.iter().filter(|r| r.status == s).count() as u64;
        let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
        let total = records.len() as u64;
        let summary = Summary {
            total,
            passed,
            failed,
            skipped,
            skipped_percent: if total == 0 { 0 } else { skipped * 100 / total },
            all_skipped: total > 0 && skipped == total,
        };
        Report {
            campaign: campaign.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            status: if failed == 0 { "PASS" } else { "FAIL" }.to_string(),
            summary,
            records,
        }
    }

    pub fn failed(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.records {
            let pass = match r.status {
                Status::Pass => "true",
                Status::Fail => "false",
                Status::Skip => "skip",
            };
            out.serialize(CsvRow {
                campaign: &self.campaign,
                check: &r.check,
                q: r.point.q,
                n: r.point.n,
                k: r.point.k,
                t: r.point.t,
                c: r.point.c,
                expected: &r.expected,
                actual: &r.actual,
                pass,
                ms: r.ms,
            })?;
        }
        out.flush().map_err(|e| HarnessError::Csv(e.into()))?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    /// Writes `<campaign>.json` and `<campaign>.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf), HarnessError> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let json = dir.join(format!("{}.json", self.campaign));
        let csv = dir.join(format!("{}.csv", self.campaign));
        std::fs::write(&json, self.to_json()).map_err(io_err(&json))?;
        std::fs::write(&csv, self.to_csv()).map_err(io_err(&csv))?;
        Ok((json, csv))
    }

    /// Both reports with the timing fields zeroed, for comparing runs.
    pub fn normalized(&self) -> Report {
        let mut r = self.clone();
        r.timestamp = 0;
        for rec in &mut r.records {
            rec.ms = 0;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Campaign {
        let text = r#"{
            "id": "small",
            "seed": 5,
            "checks": ["sizes", "structure", "grassmannian_counts", "g_difference"],
            "points": [{"q": 2, "n": 6, "k": 3, "t": 1, "samples": 2}],
            "counts": [{"q": 2, "n_max": 5}],
            "g_difference": {"qs": [2], "t_max": 2, "n_max": 12}
        }"#;
        Campaign::from_json(text, Path::new(".")).unwrap()
    }

    #[test]
    fn runs_and_summarizes() {
        let r = run_campaign(&small(), 1 << 20);
        assert_eq!(r.status, "PASS", "{:?}", r.failures().next());
        let s = &r.summary;
        assert_eq!(s.total, s.passed + s.failed + s.skipped);
        assert!(r.records.iter().any(|x| x.check == "count.grassmannian"));
    }

    #[test]
    fn deterministic_modulo_timing() {
        let a = run_campaign(&small(), 1 << 20).normalized();
        let b = run_campaign(&small(), 1 << 20).normalized();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn csv_columns() {
        let r = Report::new("x", vec![CheckRecord::skip("size.h1", Point::nkt(6, 8, 3, 1), SkipReason::UnsupportedQ)]);
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("campaign,check,q,n,k,t,c,expected,actual,pass,ms"));
        assert_eq!(lines.next(), Some("x,size.h1,6,8,3,1,,,,skip,0"));
        assert!(r.summary.all_skipped);
        assert_eq!(r.status, "PASS");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = r#"{"id": "x", "checks": ["sizes"], "pionts": []}"#;
        assert!(Campaign::from_json(bad, Path::new(".")).is_err());
        let bad = r#"{"id": "x", "checks": ["nope"]}"#;
        assert!(Campaign::from_json(bad, Path::new(".")).is_err());
    }

    #[test]
    fn budget_precedence() {
        assert_eq!(resolve_budget(Some(7), Some(9)), 7);
        if std::env::var(BUDGET_ENV).is_err() {
            assert_eq!(resolve_budget(None, Some(9)), 9);
            assert_eq!(resolve_budget(None, None), DEFAULT_BUDGET);
        }
    }
}
