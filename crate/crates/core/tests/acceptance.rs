//! Acceptance criteria 1 through 9. Prints one line per criterion and exits
//! nonzero on any failure not forced by a degree bound.

use std::collections::BTreeMap;
use std::time::Instant;

use qloop::bank::{BankOptions, Factor, OperatorBank, B1, C0};
use qloop::check::IdentityCheck;
use qloop::divpow::check_cross_normalization;
use qloop::qcomb::cyclo::{CycloElem, CycloRing};
use qloop::qcomb::laurent::LaurentPoly;
use qloop::qcomb::lemmas::qcomb_suite;
use qloop::repchain::barred::{barred_ops_unchecked, check_half_commutation};
use qloop::repchain::chain::ChainContext;
use qloop::repchain::gate::{chain_self_check, rep_self_check, GateMode};
use qloop::repchain::site::{build_site_rep, SiteKind};
use qloop::runner::{run, RunConfig, Suite};
use qloop::scalar::RingMode;
use qloop::serre::higher::{check_bcb, check_bcbc, check_bcn, check_higher_serre, Branch, Pair};
use qloop::serre::loops::{check_lemma_chain, check_serre_nested, LoopFamily, LoopGenerators};
use qloop::serre::site::{check_site_identity, Side, SiteIdentity};
use qloop::Status;

struct Outcome {
    pass: bool,
    /// Failing for a reason shown to be forced by the parameters; printed as
    /// FAIL but does not fail the process.
    forced: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        forced: false,
        detail: detail.into(),
    }
}

fn chain(kind: SiteKind, n: u32, l: usize) -> ChainContext {
    let c = (kind == SiteKind::Cyclic).then(LaurentPoly::zero);
    ChainContext::new(build_site_rep(kind, n, c).unwrap(), l).unwrap()
}

fn root_bank(n: u32, l: usize, rescale: bool) -> OperatorBank<CycloElem> {
    let opts = BankOptions {
        rescale,
        cache: None,
        max_order: 4 * n,
    };
    OperatorBank::new(chain(SiteKind::SpinHalf, n, l), RingMode::Cyclotomic, CycloRing::get(n), opts)
}

fn generic_bank(n: u32, l: usize) -> OperatorBank<LaurentPoly> {
    OperatorBank::new(chain(SiteKind::SpinHalf, n, l), RingMode::Laurent, (), BankOptions::default())
}

/// Exact statuses only: no float smoke tests, no failures.
fn exact(c: &IdentityCheck) -> bool {
    matches!(c.status, Status::ExactZero | Status::VacuousZero)
}

fn strong(c: &IdentityCheck) -> bool {
    c.status.is_exact_zero() && c.nontrivial.is_some()
}

fn first_bad<'a>(checks: &'a [IdentityCheck], ok: impl Fn(&IdentityCheck) -> bool) -> Option<&'a IdentityCheck> {
    checks.iter().find(|c| !ok(c))
}

fn verdict(checks: &[IdentityCheck], ok: impl Fn(&IdentityCheck) -> bool, what: &str) -> Outcome {
    match first_bad(checks, ok) {
        None => outcome(true, format!("{} {what}", checks.len())),
        Some(c) => outcome(false, format!("{c} (nontrivial: {})", c.nontrivial.is_some())),
    }
}

fn criterion_1() -> Outcome {
    let mut checks = Vec::new();
    for n in 2..=6 {
        checks.extend(qcomb_suite(n));
    }
    let ids = [
        "gauss-periodicity",
        "alternating-sum",
        "vanishing-wrap",
        "q-omega-factorial",
        "omega-lucas",
        "factorial-valuation",
    ];
    if let Some(id) = ids.iter().find(|id| !checks.iter().any(|c| c.id == **id)) {
        return outcome(false, format!("no `{id}` checks ran"));
    }
    verdict(&checks, exact, "combinatorial checks exact")
}

fn criterion_2() -> Outcome {
    let mut checks = Vec::new();
    for kind in [SiteKind::SpinHalf, SiteKind::HighestWeight] {
        for n in [2, 3] {
            checks.extend(rep_self_check(&build_site_rep(kind, n, None).unwrap(), GateMode::Generic));
            for l in 1..=4 {
                checks.extend(chain_self_check(&chain(kind, n, l), GateMode::Generic).unwrap());
            }
        }
    }
    let cyclic = build_site_rep(SiteKind::Cyclic, 3, Some(LaurentPoly::zero())).unwrap();
    checks.extend(rep_self_check(&cyclic, GateMode::RootOfUnity));
    for l in 1..=2 {
        checks.extend(chain_self_check(&chain(SiteKind::Cyclic, 3, l), GateMode::RootOfUnity).unwrap());
    }
    // the Cartan/clock sign is a convention probe, not a Chevalley relation
    checks.retain(|c| c.id != "site-k-vs-z");
    verdict(&checks, exact, "gate relations exact")
}

fn criterion_3() -> Outcome {
    let mut checks = Vec::new();
    for (n, l) in [(2u32, 5usize), (3, 4)] {
        let bank = root_bank(n, l, false);
        for k in 0..=2 * n + 1 {
            let rels = check_cross_normalization(&bank, k);
            if k as usize <= l {
                if let Some(c) = first_bad(&rels, strong) {
                    return outcome(false, format!("{c}"));
                }
            }
            checks.extend(rels);
        }
        let ch = bank.chain();
        let g = bank.generators();
        let half = check_half_commutation::<CycloElem>(ch, &barred_ops_unchecked(ch, g), &g.a_half_inv, CycloRing::get(n))
            .unwrap();
        if let Some(c) = first_bad(&half, strong) {
            return outcome(false, format!("{c}"));
        }
        checks.extend(half);
    }
    verdict(&checks, exact, "cross-normalization and half-commutation checks exact")
}

fn criterion_4() -> Outcome {
    let generic = generic_bank(2, 6);
    let root = root_bank(2, 6, false);
    let mut checks = Vec::new();
    let mut nontrivial: BTreeMap<(u32, u32), bool> = BTreeMap::new();
    for pair in Pair::LUSZTIG {
        let mut record = |c: IdentityCheck, n: u32, m: u32| {
            *nontrivial.entry((n, m)).or_default() |= strong(&c);
            checks.push(c);
        };
        record(check_higher_serre(&generic, pair, 1, 3), 1, 3);
        for (n, m) in [(1, 4), (2, 5), (2, 6)] {
            record(check_higher_serre(&root, pair, n, m), n, m);
        }
    }
    for key in [(1, 3), (2, 5)] {
        if !nontrivial[&key] {
            return outcome(false, format!("no nontrivial instance of f_{{{},{}}}", key.0, key.1));
        }
    }
    verdict(&checks, exact, "higher Serre instances exact")
}

fn crit5_checks(rescale: bool) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for (n, q, l) in [(2, 1, 7), (3, 2, 8)] {
        let bank = root_bank(n, l, rescale);
        for branch in Branch::BOTH {
            out.push(check_bcn(&bank, branch, q, false));
            out.push(check_bcn(&bank, branch, q, true));
        }
    }
    for (n, q, l) in [(2, 1, 5), (3, 1, 5)] {
        let bank = root_bank(n, l, rescale);
        for branch in Branch::BOTH {
            out.push(check_bcb(&bank, branch, q, false));
            out.push(check_bcb(&bank, branch, q, true));
        }
    }
    let bank = root_bank(2, 10, rescale);
    for branch in Branch::BOTH {
        out.push(check_bcbc(&bank, branch, 1, false));
        out.push(check_bcbc(&bank, branch, 1, true));
    }
    out
}

fn crit6_checks(rescale: bool) -> Vec<IdentityCheck> {
    let short = [SiteIdentity::Bcn, SiteIdentity::Cbn, SiteIdentity::Bcb, SiteIdentity::Cbc];
    let mut out = Vec::new();
    for (n, l) in [(2, 7), (3, 5)] {
        let bank = root_bank(n, l, rescale);
        for side in Side::BOTH {
            for ident in short {
                out.push(check_site_identity(&bank, ident, 1, side));
            }
        }
    }
    let bank = root_bank(2, 8, rescale);
    for side in Side::BOTH {
        for ident in [SiteIdentity::Bcbc, SiteIdentity::Cbcb] {
            out.push(check_site_identity(&bank, ident, 1, side));
        }
    }
    out
}

fn crit7_checks(rescale: bool) -> Vec<IdentityCheck> {
    (4..=10)
        .flat_map(|l| check_lemma_chain(&root_bank(2, l, rescale), 1))
        .collect()
}

fn crit8_checks(rescale: bool) -> Vec<IdentityCheck> {
    let bank = root_bank(2, 10, rescale);
    let mut out = check_serre_nested(&bank, 1, LoopFamily::X);
    out.extend(check_serre_nested(&bank, 1, LoopFamily::Xbar));
    let small = root_bank(2, 8, rescale);
    out.extend(check_serre_nested(&small, 0, LoopFamily::X));
    out.extend(check_serre_nested(&small, 0, LoopFamily::Xbar));
    out
}

fn criterion_5() -> Outcome {
    verdict(&crit5_checks(false), strong, "identities exact and nontrivial")
}

fn criterion_6() -> Outcome {
    let checks = crit6_checks(false);
    if let Some(c) = first_bad(&checks, exact) {
        return outcome(false, format!("{c}"));
    }
    let weak: Vec<&IdentityCheck> = checks.iter().filter(|c| !strong(c)).collect();
    if weak.is_empty() {
        return outcome(true, format!("{} site identities exact and nontrivial", checks.len()));
    }
    // At N=3, Q=1, L=5 every term of the three-term forms needs six net
    // flips of a five-site chain, so those instances can only be vacuous.
    let degree_bound = |c: &IdentityCheck| {
        c.params.get("N").and_then(|v| v.as_u64()) == Some(3)
            && c.params.get("L").and_then(|v| v.as_u64()) == Some(5)
            && matches!(c.id.as_str(), "site-bcn" | "site-cbn")
            && c.status == Status::VacuousZero
            && c.term_nonzero.iter().all(|t| !t)
    };
    if let Some(c) = weak.iter().find(|c| !degree_bound(c)) {
        return outcome(false, format!("{c} (nontrivial: {})", c.nontrivial.is_some()));
    }
    let longer = root_bank(3, 6, false);
    let at6: Vec<IdentityCheck> = Side::BOTH
        .into_iter()
        .flat_map(|side| {
            [SiteIdentity::Bcn, SiteIdentity::Cbn].map(|i| check_site_identity(&longer, i, 1, side))
        })
        .collect();
    if let Some(c) = first_bad(&at6, strong) {
        return outcome(false, format!("{c}"));
    }
    Outcome {
        pass: false,
        forced: true,
        detail: format!(
            "{} of {} instances exact and nontrivial; site-bcn/site-cbn at N=3 Q=1 L=5 are vacuous on both sides \
             (each term needs 6 net spin flips on 5 sites), and exact and nontrivial at L=6",
            checks.len() - weak.len(),
            checks.len()
        ),
    }
}

fn criterion_7() -> Outcome {
    let checks = crit7_checks(false);
    if let Some(c) = first_bad(&checks, exact) {
        return outcome(false, format!("{c}"));
    }
    // every lemma must be nontrivial at some L <= 10
    let mut seen: BTreeMap<&str, Option<u64>> = BTreeMap::new();
    for c in &checks {
        let l = c.params.get("L").and_then(|v| v.as_u64());
        let e = seen.entry(c.id.as_str()).or_default();
        if strong(c) && e.is_none() {
            *e = l;
        }
    }
    if let Some((id, _)) = seen.iter().find(|(_, l)| l.is_none()) {
        return outcome(false, format!("`{id}` is vacuous at every L up to 10"));
    }
    let coeffs_ok = checks
        .iter()
        .filter(|c| c.params.contains_key("coefficient"))
        .all(|c| matches!(c.params["coefficient"].as_i64(), Some(1 | 2 | 6)));
    let doubled = checks.iter().any(|c| c.params.get("coefficient").and_then(|v| v.as_i64()) == Some(2) && strong(c));
    let sixfold = checks.iter().any(|c| c.params.get("coefficient").and_then(|v| v.as_i64()) == Some(6) && strong(c));
    if !(coeffs_ok && doubled && sixfold) {
        return outcome(false, "coefficients 2 and 6 not confirmed");
    }
    let first: Vec<String> = seen.iter().map(|(id, l)| format!("{id}@{}", l.unwrap())).collect();
    outcome(
        true,
        format!("{} checks exact; first nontrivial L: {}", checks.len(), first.join(" ")),
    )
}

fn criterion_8() -> Outcome {
    let checks = crit8_checks(false);
    let g = LoopGenerators::new(0, 2);
    if g.x_minus != vec![Factor::dp(B1, 2)] || g.x_plus != vec![Factor::dp(C0, 2)] {
        return outcome(false, "Q=0 generators do not reduce to single divided powers");
    }
    verdict(&checks, strong, "nested relations exact and nontrivial (Q=1 at L=10, Q=0 at L=8)")
}

fn audit_key(c: &IdentityCheck) -> String {
    let mut p = c.params.clone();
    p.remove("rescaled");
    format!("{} {}", c.id, serde_json::to_string(&p).unwrap())
}

fn criterion_9() -> Outcome {
    let mut compared = 0;
    let builders: [fn(bool) -> Vec<IdentityCheck>; 4] = [crit5_checks, crit6_checks, crit7_checks, crit8_checks];
    for build in builders {
        let plain = build(false);
        let rescaled = build(true);
        let index: BTreeMap<String, &IdentityCheck> = rescaled.iter().map(|c| (audit_key(c), c)).collect();
        if index.len() != plain.len() {
            return outcome(false, "rescaled rerun produced a different set of checks");
        }
        for c in &plain {
            let r = index[&audit_key(c)];
            compared += 1;
            if !c.status.same_kind(&r.status) {
                return outcome(false, format!("rescale changed {c} to {}", r.status));
            }
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig {
        n: 2,
        l: 7,
        q: vec![1],
        suites: Suite::ALL.to_vec(),
        cache_dir: Some(dir.path().to_path_buf()),
        jobs: 1,
        ..RunConfig::default()
    };
    let cold = run(&cfg).unwrap().without_timing();
    let warm = run(&cfg).unwrap().without_timing();
    if cold != warm {
        return outcome(false, "cold and warm cache reports differ");
    }
    cfg.cache_dir = None;
    let one = run(&cfg).unwrap().without_timing();
    cfg.jobs = 8;
    let eight = run(&cfg).unwrap().without_timing();
    if one != eight {
        return outcome(false, "jobs=1 and jobs=8 reports differ");
    }
    if one.checks != cold.checks {
        return outcome(false, "cached and uncached checks differ");
    }
    outcome(
        true,
        format!(
            "{compared} statuses unchanged under rescaling; cache and worker reports identical ({} checks)",
            one.checks.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("q-combinatorics suite", criterion_1),
        ("representation gate", criterion_2),
        ("cross-normalization and commutation", criterion_3),
        ("higher-order Serre relations", criterion_4),
        ("root-of-unity identities", criterion_5),
        ("site-operator identities", criterion_6),
        ("lemma chain", criterion_7),
        ("nested Serre relations", criterion_8),
        ("robustness audits", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut forced = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let tag = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|x| tag.contains(x.as_str()) || *x == (i + 1).to_string()) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{tag} {} {name}: {} ({secs:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if o.forced {
            forced += 1;
        } else if !o.pass {
            failed += 1;
        }
    }
    if forced > 0 {
        eprintln!("{forced} criterion(s) red because the requested instance is vacuous by a degree bound");
    }
    if failed > 0 {
        eprintln!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
