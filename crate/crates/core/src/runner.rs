//! Batch runner: configuration, suite dispatch, reports and exit codes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bank::{BankOptions, OpId, OperatorBank, RESCALE_TAG};
use crate::check::{IdentityCheck, Status};
use crate::divpow::{
    check_cross_normalization, check_dual_route, check_iterative_vs_direct, check_mulo, check_nilpotency,
    check_norm_ratio, check_power_factorial, Normalization,
};
use crate::error::{Error, Result};
use crate::qcomb::cyclo::{CycloElem, CycloRing};
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::lemmas::{qcomb_suite, CBranch};
use crate::repchain::barred::{barred_ops_unchecked, check_half_commutation};
use crate::repchain::cache::OperatorCache;
use crate::repchain::chain::{ChainContext, Generator, MAX_DIM, MAX_SITES};
use crate::repchain::gate::{chain_self_check, rep_self_check, GateMode};
use crate::repchain::site::{build_site_rep, SiteKind, SiteRep};
use crate::scalar::{Float, FloatCtx, RingMode, Scalar};
use crate::serre::higher::{
    check_bcb, check_bcbc, check_bcn, check_g_forms, check_higher_serre, check_id1, check_id2,
    check_wrap_product, Branch, Pair,
};
use crate::serre::loops::{check_lemma_chain, check_serre_nested, LoopFamily, MULO_CASES};
use crate::serre::site::{check_site_suite, check_site_vs_pm, Side, SiteIdentity};

pub const TOOL: &str = "qloop";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "QLOOP_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// `(n, m)` instances of `f_{n,m} = 0` in the `id1` suite.
pub const HIGHER_SERRE_CASES: [(u32, u32); 4] = [(1, 3), (1, 4), (2, 5), (2, 6)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Qcomb,
    RepGate,
    Barred,
    Divpow,
    Id1,
    Id2,
    Site,
    Lemmas,
    SerreNested,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Qcomb,
        Suite::RepGate,
        Suite::Barred,
        Suite::Divpow,
        Suite::Id1,
        Suite::Id2,
        Suite::Site,
        Suite::Lemmas,
        Suite::SerreNested,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qcomb => "qcomb",
            Suite::RepGate => "rep-gate",
            Suite::Barred => "barred",
            Suite::Divpow => "divpow",
            Suite::Id1 => "id1",
            Suite::Id2 => "id2",
            Suite::Site => "site",
            Suite::Lemmas => "lemmas",
            Suite::SerreNested => "serre-nested",
        }
    }

    /// `"all"` expands to every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|&x| vec![x])
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }

    /// Suites that only make sense at the root of unity.
    pub fn needs_root(self) -> bool {
        matches!(self, Suite::Id2 | Suite::Site | Suite::Lemmas | Suite::SerreNested)
    }

    /// Suites built on the operator bank (affected by rescaling).
    pub fn uses_bank(self) -> bool {
        !matches!(self, Suite::Qcomb | Suite::RepGate)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub backend: SiteKind,
    pub n: u32,
    pub l: usize,
    /// Charge sectors; empty means all of `0..N`.
    pub q: Vec<u32>,
    pub ring: RingMode,
    pub suites: Vec<Suite>,
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub rescale_audit: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: SiteKind::SpinHalf,
            n: 2,
            l: 4,
            q: Vec::new(),
            ring: RingMode::Cyclotomic,
            suites: Vec::new(),
            jobs: 1,
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            report: None,
            rescale_audit: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Config(format!("bad value `{v}` for `{key}`"))),
    }
}

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl RunConfig {
    /// Sets one `key=value` option. List keys (`Q`, `suite`) take
    /// comma-separated values and replace any earlier list.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "backend" => {
                self.backend = SiteKind::parse(value).map_err(|_| Error::Config(format!("unknown backend `{value}`")))?
            }
            "N" => self.n = parse_num(key, value)?,
            "L" => self.l = parse_num(key, value)?,
            "Q" => self.q = list(value).map(|x| parse_num("Q", x)).collect::<Result<_>>()?,
            "ring" => self.ring = RingMode::parse(value)?,
            "suite" | "suites" => {
                let mut out = Vec::new();
                for s in list(value) {
                    out.extend(Suite::parse(s)?);
                }
                self.suites = out;
            }
            "jobs" => self.jobs = parse_num(key, value)?,
            "cache_dir" | "cache-dir" => {
                self.cache_dir = (!value.is_empty()).then(|| PathBuf::from(value))
            }
            "report" => self.report = (!value.is_empty()).then(|| PathBuf::from(value)),
            "rescale_audit" | "rescale-audit" => self.rescale_audit = parse_bool(key, value)?,
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Reads a plain-text `key=value` file body. `#` starts a comment.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn q_sectors(&self) -> Vec<u32> {
        if self.q.is_empty() {
            (0..self.n).collect()
        } else {
            let mut q = self.q.clone();
            q.sort_unstable();
            q.dedup();
            q
        }
    }

    /// Suites in canonical order without duplicates; empty means all.
    pub fn suite_list(&self) -> Vec<Suite> {
        let mut s = if self.suites.is_empty() {
            Suite::ALL.to_vec()
        } else {
            self.suites.clone()
        };
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n < 2 {
            return bad(format!("N must be at least 2, got {}", self.n));
        }
        if self.l < 1 || self.l > MAX_SITES {
            return bad(format!("L must be in 1..={MAX_SITES}, got {}", self.l));
        }
        let d = match self.backend {
            SiteKind::SpinHalf => 2.0,
            _ => self.n as f64,
        };
        if d.powi(self.l as i32) > MAX_DIM as f64 {
            return bad(format!("dimension {d}^{} exceeds {MAX_DIM}", self.l));
        }
        if let Some(q) = self.q.iter().find(|&&q| q >= self.n) {
            return bad(format!("Q must be in 0..{}, got {q}", self.n));
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.ring == RingMode::Laurent {
            if let Some(s) = self.suite_list().into_iter().find(|s| s.needs_root()) {
                return bad(format!("suite `{s}` needs a root-of-unity ring, not laurent"));
            }
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            backend: self.backend.name().into(),
            n: self.n,
            l: self.l,
            q: self.q_sectors(),
            ring: self.ring.name().into(),
            suites: self.suite_list().iter().map(|s| s.name().to_string()).collect(),
            rescale_audit: self.rescale_audit,
        }
    }
}

/// The configuration fields that determine results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub backend: String,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "Q")]
    pub q: Vec<u32>,
    pub ring: String,
    pub suites: Vec<String>,
    pub rescale_audit: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub exact_zero: usize,
    pub vacuous_zero: usize,
    pub approx_zero: usize,
    pub nonzero: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(checks: &[IdentityCheck]) -> Summary {
        let mut s = Summary {
            total: checks.len(),
            ..Summary::default()
        };
        for c in checks {
            match c.status {
                Status::ExactZero => s.exact_zero += 1,
                Status::VacuousZero => s.vacuous_zero += 1,
                Status::ApproxZero { .. } => s.approx_zero += 1,
                Status::Nonzero { .. } => s.nonzero += 1,
                Status::Error { .. } => s.error += 1,
            }
        }
        s
    }
}

/// Timing and scheduling; everything here may differ between reruns.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Runtime {
    pub jobs: usize,
    pub cache_dir: Option<String>,
    pub total_millis: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditMismatch {
    pub id: String,
    pub params: crate::check::Params,
    pub status: String,
    pub rescaled_status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaleAudit {
    pub rescale: String,
    pub compared: usize,
    pub mismatches: Vec<AuditMismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub checks: Vec<IdentityCheck>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rescale_audit: Option<RescaleAudit>,
    pub runtime: Runtime,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// The report with every timing field zeroed.
    pub fn without_timing(&self) -> ReportDocument {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.millis = 0;
        }
        r.runtime = Runtime::default();
        r
    }

    pub fn failed(&self) -> bool {
        self.summary.nonzero > 0
            || self.summary.error > 0
            || self.rescale_audit.as_ref().is_some_and(|a| !a.mismatches.is_empty())
    }

    pub fn exit_code(&self) -> i32 {
        let resource = self.checks.iter().any(|c| {
            matches!(&c.status, Status::Error { error, .. } if error == "TruncationOverflow" || error == "CacheError")
        });
        if resource {
            EXIT_RESOURCE
        } else if self.failed() {
            EXIT_FAILED
        } else {
            EXIT_OK
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.summary.vacuous_zero > 0 {
            out.push(format!(
                "{} check(s) are vacuous: every term vanishes, so they carry no evidence",
                self.summary.vacuous_zero
            ));
        }
        if self.summary.approx_zero > 0 {
            out.push(format!(
                "{} check(s) are floating-point smoke tests only",
                self.summary.approx_zero
            ));
        }
        out
    }

    /// Plain-text summary: failing checks, counts, warnings.
    pub fn summary_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "{} {}: backend={} N={} L={} Q={:?} ring={} suites={}\n",
            self.tool,
            self.version,
            c.backend,
            c.n,
            c.l,
            c.q,
            c.ring,
            c.suites.join(",")
        );
        let mut per_suite: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for ch in &self.checks {
            let e = per_suite.entry(ch.id.as_str()).or_default();
            e.0 += 1;
            if !ch.passed() {
                e.1 += 1;
            }
        }
        for (id, (n, bad)) in &per_suite {
            out.push_str(&format!("  {id:<28} {n:>5} checks  {bad:>3} failed\n"));
        }
        for ch in self.checks.iter().filter(|c| !c.passed()) {
            out.push_str(&format!("FAIL {ch}\n"));
        }
        if let Some(a) = &self.rescale_audit {
            out.push_str(&format!(
                "rescale audit ({}): {} compared, {} mismatches\n",
                a.rescale,
                a.compared,
                a.mismatches.len()
            ));
            for m in &a.mismatches {
                out.push_str(&format!("MISMATCH {} {} -> {}\n", m.id, m.status, m.rescaled_status));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "total {}: exact_zero {}, vacuous_zero {}, approx_zero {}, nonzero {}, error {} ({} ms)\n",
            s.total, s.exact_zero, s.vacuous_zero, s.approx_zero, s.nonzero, s.error, self.runtime.total_millis
        ));
        for w in self.warnings() {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<IdentityCheck> + Send + Sync + 'a>;

fn site_rep(cfg: &RunConfig) -> Result<SiteRep> {
    let c = (cfg.backend == SiteKind::Cyclic).then(LaurentPoly::zero);
    build_site_rep(cfg.backend, cfg.n, c)
}

fn error_check(id: &str, e: &Error) -> IdentityCheck {
    IdentityCheck::new(id, "setup").with_status(Status::from_error(e))
}

fn gate_checks(cfg: &RunConfig) -> Vec<IdentityCheck> {
    let rep = match site_rep(cfg) {
        Ok(r) => r,
        Err(e) => return vec![error_check("rep-gate", &e)],
    };
    let mut modes = vec![GateMode::RootOfUnity];
    if cfg.backend.valid_at_generic_q() {
        modes.insert(0, GateMode::Generic);
    }
    let mut out = Vec::new();
    for mode in modes {
        out.extend(rep_self_check(&rep, mode));
        match ChainContext::new(rep.clone(), cfg.l).and_then(|ctx| chain_self_check(&ctx, mode)) {
            Ok(v) => out.extend(v),
            Err(e) => out.push(error_check("rep-gate", &e)),
        }
    }
    out
}

const GENS: [OpId; 4] = [
    OpId::Gen(Generator::E0),
    OpId::Gen(Generator::E1),
    OpId::Gen(Generator::F0),
    OpId::Gen(Generator::F1),
];

fn bank_jobs<'a, S: Scalar>(
    bank: &'a OperatorBank<S>,
    suites: &[Suite],
    qs: &'a [u32],
) -> Vec<Job<'a>> {
    let big_n = bank.chain().n();
    let root = bank.mode().at_root_of_unity();
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for &suite in suites {
        match suite {
            Suite::Qcomb | Suite::RepGate => {}
            Suite::Barred => jobs.push(Box::new(move || {
                let chain = bank.chain();
                let g = bank.generators();
                let ops = barred_ops_unchecked(chain, g);
                check_half_commutation::<S>(chain, &ops, &g.a_half_inv, bank.sctx())
                    .unwrap_or_else(|e| vec![error_check("half-commutation", &e)])
            })),
            Suite::Divpow => {
                let top = 2 * big_n + 1;
                for op in OpId::ALL {
                    jobs.push(Box::new(move || vec![check_nilpotency(bank, op)]));
                    jobs.push(Box::new(move || (0..=top).map(|n| check_norm_ratio(bank, op, n)).collect()));
                }
                for op in GENS {
                    jobs.push(Box::new(move || match bank.base(op) {
                        Ok(b) => (0..=top)
                            .flat_map(|n| {
                                [
                                    check_power_factorial(op.name(), &b, n),
                                    check_iterative_vs_direct(op.name(), &b, n, Normalization::QFact),
                                ]
                            })
                            .collect(),
                        Err(e) => vec![error_check("power-factorial", &e)],
                    }));
                }
                if root {
                    for n in 0..=top {
                        jobs.push(Box::new(move || check_cross_normalization(bank, n)));
                    }
                    for &q in qs {
                        jobs.push(Box::new(move || {
                            MULO_CASES.iter().map(|&(k, j)| check_mulo(bank, k, j, q)).collect()
                        }));
                    }
                    for op in GENS {
                        jobs.push(Box::new(move || match bank.base(op) {
                            Ok(b) => {
                                let ring = CycloRing::get(big_n);
                                (0..=top).map(|n| check_dual_route(op.name(), &b, n, Normalization::QFact, ring)).collect()
                            }
                            Err(e) => vec![error_check("dual-route", &e)],
                        }));
                    }
                }
            }
            Suite::Id1 => {
                for pair in Pair::LUSZTIG {
                    for (n, m) in HIGHER_SERRE_CASES {
                        jobs.push(Box::new(move || vec![check_higher_serre(bank, pair, n, m)]));
                    }
                    if root {
                        for n in 0..=2 {
                            for m in [2 * n + big_n, 2 * n + big_n + 1] {
                                jobs.push(Box::new(move || {
                                    vec![check_id1(bank, pair, n, m), check_g_forms(bank, pair, n, m, CBranch::Full)]
                                }));
                            }
                        }
                    }
                }
                if root {
                    for &q in qs {
                        for branch in Branch::BOTH {
                            jobs.push(Box::new(move || {
                                vec![check_bcn(bank, branch, q, false), check_bcn(bank, branch, q, true)]
                            }));
                        }
                    }
                }
            }
            Suite::Id2 => {
                for pair in Pair::LUSZTIG {
                    for n in 1..=2 {
                        for d in 1..big_n {
                            let m = 2 * n + d;
                            jobs.push(Box::new(move || {
                                vec![check_id2(bank, pair, n, m), check_g_forms(bank, pair, n, m, CBranch::Truncated)]
                            }));
                        }
                    }
                }
                for op in GENS {
                    jobs.push(Box::new(move || {
                        let mut out = Vec::new();
                        for d in 1..big_n {
                            for p in d..big_n {
                                for k in 0..=2 {
                                    out.push(check_wrap_product(bank, op, 1, 2 + d, k, p));
                                }
                            }
                        }
                        out
                    }));
                }
                for &q in qs {
                    for branch in Branch::BOTH {
                        for swap in [false, true] {
                            jobs.push(Box::new(move || {
                                vec![check_bcb(bank, branch, q, swap), check_bcbc(bank, branch, q, swap)]
                            }));
                        }
                    }
                }
            }
            Suite::Site => {
                for &q in qs {
                    for side in Side::BOTH {
                        jobs.push(Box::new(move || check_site_suite(bank, q, side)));
                        for ident in SiteIdentity::ALL {
                            jobs.push(Box::new(move || vec![check_site_vs_pm(bank, ident, q, side)]));
                        }
                    }
                }
            }
            Suite::Lemmas => {
                for &q in qs {
                    jobs.push(Box::new(move || check_lemma_chain(bank, q)));
                }
            }
            Suite::SerreNested => {
                for &q in qs {
                    for family in [LoopFamily::X, LoopFamily::Xbar] {
                        jobs.push(Box::new(move || check_serre_nested(bank, q, family)));
                    }
                }
            }
        }
    }
    jobs
}

/// Largest divided-power order any suite asks for.
fn max_order(cfg: &RunConfig) -> u32 {
    (4 * cfg.n).max(cfg.l as u32 + 1)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))
}

fn run_bank<S: Scalar>(
    cfg: &RunConfig,
    chain: ChainContext,
    sctx: S::Ctx,
    rescale: bool,
    cache: Option<OperatorCache>,
    threads: &rayon::ThreadPool,
) -> Vec<IdentityCheck> {
    let opts = BankOptions {
        rescale,
        cache,
        max_order: max_order(cfg),
    };
    let bank = OperatorBank::<S>::new(chain, cfg.ring, sctx, opts);
    let suites: Vec<Suite> = cfg.suite_list().into_iter().filter(|s| s.uses_bank()).collect();
    if suites.is_empty() {
        return Vec::new();
    }
    // divided powers first, one at a time, so workers share them
    let top = max_order(cfg).min(cfg.l as u32 + 1);
    for op in OpId::ALL {
        // barred operators may not exist on this backend; the checks report it
        let _ = bank.dp(op, top);
    }
    let qs = cfg.q_sectors();
    let jobs = bank_jobs(&bank, &suites, &qs);
    threads.install(|| jobs.par_iter().flat_map_iter(|j| j()).collect())
}

fn dispatch(
    cfg: &RunConfig,
    rescale: bool,
    cache: Option<OperatorCache>,
    threads: &rayon::ThreadPool,
) -> Result<Vec<IdentityCheck>> {
    let chain = ChainContext::new(site_rep(cfg)?, cfg.l)?;
    Ok(match cfg.ring {
        RingMode::Laurent => run_bank::<LaurentPoly>(cfg, chain, (), rescale, cache, threads),
        RingMode::Cyclotomic | RingMode::PhiAdic => {
            run_bank::<CycloElem>(cfg, chain, CycloRing::get(cfg.n), rescale, cache, threads)
        }
        RingMode::Float => run_bank::<Float>(cfg, chain, FloatCtx::new(cfg.n), rescale, cache, threads),
    })
}

fn sort_checks(checks: &mut [IdentityCheck]) {
    checks.sort_by_cached_key(|c| c.sort_key());
}

fn audit_key(c: &IdentityCheck) -> (String, String) {
    let mut p = c.params.clone();
    p.remove("rescaled");
    (c.id.clone(), serde_json::to_string(&p).unwrap_or_default())
}

fn compare_rescaled(plain: &[IdentityCheck], rescaled: &[IdentityCheck]) -> RescaleAudit {
    let index: BTreeMap<_, _> = rescaled.iter().map(|c| (audit_key(c), c)).collect();
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for c in plain {
        let Some(r) = index.get(&audit_key(c)) else { continue };
        compared += 1;
        if !c.status.same_kind(&r.status) {
            mismatches.push(AuditMismatch {
                id: c.id.clone(),
                params: c.params.clone(),
                status: c.status.label().into(),
                rescaled_status: r.status.label().into(),
            });
        }
    }
    RescaleAudit {
        rescale: RESCALE_TAG.into(),
        compared,
        mismatches,
    }
}

/// Runs every selected suite. Configuration and cache-setup problems are
/// returned as errors; identity failures are recorded in the report.
pub fn run(cfg: &RunConfig) -> Result<ReportDocument> {
    cfg.validate()?;
    let start = Instant::now();
    let cache = cfg.cache_dir.as_ref().map(OperatorCache::new).transpose()?;
    let threads = pool(cfg.jobs)?;
    let suites = cfg.suite_list();

    let mut checks = Vec::new();
    if suites.contains(&Suite::Qcomb) {
        checks.extend(qcomb_suite(cfg.n));
    }
    if suites.contains(&Suite::RepGate) {
        checks.extend(gate_checks(cfg));
    }
    checks.extend(dispatch(cfg, false, cache.clone(), &threads)?);
    sort_checks(&mut checks);

    let rescale_audit = if cfg.rescale_audit {
        let mut rescaled = dispatch(cfg, true, cache, &threads)?;
        sort_checks(&mut rescaled);
        Some(compare_rescaled(&checks, &rescaled))
    } else {
        None
    };

    Ok(ReportDocument {
        tool: TOOL.into(),
        version: VERSION.into(),
        config: cfg.echo(),
        summary: Summary::of(&checks),
        checks,
        rescale_audit,
        runtime: Runtime {
            jobs: cfg.jobs,
            cache_dir: cfg.cache_dir.as_ref().map(|p| p.display().to_string()),
            total_millis: start.elapsed().as_millis() as u64,
        },
    })
}

/// Exit code for a run that could not start.
pub fn error_exit_code(e: &Error) -> i32 {
    if e.is_resource() {
        EXIT_RESOURCE
    } else {
        EXIT_CONFIG
    }
}
