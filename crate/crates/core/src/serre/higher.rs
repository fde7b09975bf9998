//! `f_{n,m}` and the identities obtained from it at the root of unity.

use serde::{Deserialize, Serialize};

use crate::bank::{Factor, OperatorBank, OpId};
use crate::check::{IdentityCheck, Status};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::lemmas::{c_coefficient_poly, CBranch};
use crate::repchain::chain::Generator;
use crate::repchain::operator::GradedOperator;
use crate::scalar::Scalar;
use crate::serre::{chain_params, eval_words, run_words, WordTerm};

/// `(θᵢ, θⱼ)` in `f_{n,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub i: OpId,
    pub j: OpId,
}

impl Pair {
    pub const E0_E1: Pair = Pair::gens(Generator::E0, Generator::E1);
    pub const E1_E0: Pair = Pair::gens(Generator::E1, Generator::E0);
    pub const F1_F0: Pair = Pair::gens(Generator::F1, Generator::F0);
    pub const F0_F1: Pair = Pair::gens(Generator::F0, Generator::F1);
    pub const LUSZTIG: [Pair; 4] = [Pair::E0_E1, Pair::E1_E0, Pair::F1_F0, Pair::F0_F1];

    pub const fn gens(i: Generator, j: Generator) -> Pair {
        Pair {
            i: OpId::Gen(i),
            j: OpId::Gen(j),
        }
    }

    pub fn name(&self) -> String {
        format!("{},{}", self.i, self.j)
    }

    /// Both E's or both F's, distinct.
    pub fn is_lusztig(&self) -> bool {
        Pair::LUSZTIG.contains(self)
    }
}

/// `+`: `B₊ = E0, C₊ = E1`; `−`: `B₋ = F1, C₋ = F0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn b(self) -> OpId {
        match self {
            Branch::Plus => OpId::Gen(Generator::E0),
            Branch::Minus => OpId::Gen(Generator::F1),
        }
    }

    pub fn c(self) -> OpId {
        match self {
            Branch::Plus => OpId::Gen(Generator::E1),
            Branch::Minus => OpId::Gen(Generator::F0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `m − 2n ≥ N`.
    Id1,
    /// `1 ≤ m − 2n ≤ N − 1`.
    Id2,
}

/// Which root-of-unity identity applies to `(n, m)` with `m > 2n`.
pub fn regime(n: u32, m: u32, big_n: u32) -> Result<Regime> {
    let d = m as i64 - 2 * n as i64;
    if d <= 0 {
        return Err(Error::InvalidRegime(format!("need m > 2n, got n={n}, m={m}")));
    }
    Ok(if d >= big_n as i64 { Regime::Id1 } else { Regime::Id2 })
}

pub(crate) fn sgn(e: i64) -> Int {
    if e.rem_euclid(2) == 0 {
        Int::ONE
    } else {
        Int::from(-1i64)
    }
}

pub(crate) fn signed(e: i64) -> LaurentPoly {
    LaurentPoly::constant(sgn(e))
}

/// Word of divided powers with order-zero factors dropped.
pub(crate) fn word(parts: &[(OpId, u32)]) -> Vec<Factor> {
    parts
        .iter()
        .filter(|&&(_, n)| n > 0)
        .map(|&(op, n)| Factor::dp(op, n))
        .collect()
}

/// `f_{n,m} = Σ_{r+s=m} (−1)^r q^{r(2n−m+1)} θᵢ^(r) θⱼ^(n) θᵢ^(s)`.
pub fn lusztig_f_terms(pair: Pair, n: u32, m: u32) -> Vec<WordTerm> {
    let (n_i, m_i) = (n as i64, m as i64);
    (0..=m)
        .map(|r| {
            let e = r as i64 * (2 * n_i - m_i + 1);
            WordTerm::new(
                LaurentPoly::monomial(sgn(r as i64), e as i32),
                word(&[(pair.i, r), (pair.j, n), (pair.i, m - r)]),
            )
        })
        .collect()
}

pub fn lusztig_f<S: Scalar>(bank: &OperatorBank<S>, pair: Pair, n: u32, m: u32) -> Result<GradedOperator<S>> {
    Ok(eval_words(bank, &lusztig_f_terms(pair, n, m))?.residual)
}

fn base(id: &str, rel: &str, pair: Pair, n: u32, m: u32) -> IdentityCheck {
    IdentityCheck::new(id, rel)
        .param("pair", pair.name())
        .param("n", n)
        .param("m", m)
}

fn refuse<S: Scalar>(bank: &OperatorBank<S>, check: IdentityCheck, e: Error) -> IdentityCheck {
    chain_params(check, bank).with_status(Status::from_error(&e))
}

/// `f_{n,m} = 0` for `m > 2n`.
pub fn check_higher_serre<S: Scalar>(bank: &OperatorBank<S>, pair: Pair, n: u32, m: u32) -> IdentityCheck {
    let check = base("higher-serre", "f_{n,m} = 0 for m > 2n", pair, n, m);
    if m <= 2 * n {
        return refuse(bank, check, Error::InvalidRegime(format!("need m > 2n, got n={n}, m={m}")));
    }
    if !pair.is_lusztig() {
        return refuse(bank, check, Error::InvalidParams(format!("pair {} mixes E and F", pair.name())));
    }
    run_words(bank, check, Ok(lusztig_f_terms(pair, n, m)))
}

/// `Σ_ℓ (−1)^ℓ q^{ℓ(1−m)} f_{n,m−ℓ} θᵢ^(ℓ) = Σ_s c_s θᵢ^(m−s) θⱼ^(n) θᵢ^(s)`.
pub fn g_form_terms(pair: Pair, n: u32, m: u32, big_n: u32, branch: CBranch) -> Vec<WordTerm> {
    let upper = match branch {
        CBranch::Full => big_n as i64 - 1,
        CBranch::Truncated => m as i64 - 2 * n as i64 - 1,
    }
    .min(m as i64);
    let mut out = Vec::new();
    for l in 0..=upper {
        let l = l as u32;
        let c = LaurentPoly::monomial(sgn(l as i64), (l as i64 * (1 - m as i64)) as i32);
        for mut t in lusztig_f_terms(pair, n, m - l) {
            if l > 0 {
                t.word.push(Factor::dp(pair.i, l));
            }
            out.push(t.scaled(&c));
        }
    }
    for s in 0..=m {
        let c = c_coefficient_poly(s, n, m, big_n, branch);
        if !c.is_zero() {
            out.push(WordTerm::new(-c, word(&[(pair.i, m - s), (pair.j, n), (pair.i, s)])));
        }
    }
    out
}

pub fn check_g_forms<S: Scalar>(
    bank: &OperatorBank<S>,
    pair: Pair,
    n: u32,
    m: u32,
    branch: CBranch,
) -> IdentityCheck {
    let check = base("g-forms", "sum_l (-1)^l q^{l(1-m)} f_{n,m-l} X_i^(l) = sum_s c_s X_i^(m-s) X_j^(n) X_i^(s)", pair, n, m)
        .param("branch", match branch {
            CBranch::Full => "full",
            CBranch::Truncated => "truncated",
        });
    run_words(bank, check, Ok(g_form_terms(pair, n, m, bank.chain().n(), branch)))
}

/// `θᵢ^(m) θⱼ^(n) + Σ_{k≥1} (−1)^{k(N+m−1)} θᵢ^(m−kN) θⱼ^(n) θᵢ^(kN)`.
pub fn id1_terms(pair: Pair, n: u32, m: u32, big_n: u32) -> Vec<WordTerm> {
    (0..=m / big_n)
        .map(|k| {
            let e = k as i64 * (big_n as i64 + m as i64 - 1);
            WordTerm::new(
                signed(e),
                word(&[(pair.i, m - k * big_n), (pair.j, n), (pair.i, k * big_n)]),
            )
        })
        .collect()
}

pub fn check_id1<S: Scalar>(bank: &OperatorBank<S>, pair: Pair, n: u32, m: u32) -> IdentityCheck {
    let big_n = bank.chain().n();
    let check = base(
        "id1",
        "X_i^(m) X_j^(n) + sum_{k>=1} (-1)^{k(N+m-1)} X_i^(m-kN) X_j^(n) X_i^(kN) = 0",
        pair,
        n,
        m,
    );
    if (m as i64 - 2 * n as i64) < big_n as i64 {
        return refuse(bank, check, Error::InvalidRegime(format!("id1 needs m-2n >= N, got n={n}, m={m}, N={big_n}")));
    }
    run_words(bank, check, Ok(id1_terms(pair, n, m, big_n)))
}

/// `Σ_{k≥0} (−1)^k θᵢ^(m−kN) θⱼ^(n) θᵢ^(kN+N−m+2n)`.
pub fn id2_terms(pair: Pair, n: u32, m: u32, big_n: u32) -> Vec<WordTerm> {
    let tail = big_n + 2 * n - m;
    (0..=m / big_n)
        .map(|k| {
            WordTerm::new(
                signed(k as i64),
                word(&[(pair.i, m - k * big_n), (pair.j, n), (pair.i, k * big_n + tail)]),
            )
        })
        .collect()
}

pub fn check_id2<S: Scalar>(bank: &OperatorBank<S>, pair: Pair, n: u32, m: u32) -> IdentityCheck {
    let big_n = bank.chain().n();
    let check = base(
        "id2",
        "sum_k (-1)^k X_i^(m-kN) X_j^(n) X_i^(kN+N-m+2n) = 0",
        pair,
        n,
        m,
    );
    let d = m as i64 - 2 * n as i64;
    if d < 1 || d > big_n as i64 - 1 {
        return refuse(bank, check, Error::InvalidRegime(format!("id2 needs 1 <= m-2n <= N-1, got n={n}, m={m}, N={big_n}")));
    }
    run_words(bank, check, Ok(id2_terms(pair, n, m, big_n)))
}

/// Runs whichever of id1 and id2 applies; their regimes partition `m > 2n`.
pub fn check_regime<S: Scalar>(bank: &OperatorBank<S>, pair: Pair, n: u32, m: u32) -> IdentityCheck {
    let big_n = bank.chain().n();
    match regime(n, m, big_n) {
        Ok(Regime::Id1) => check_id1(bank, pair, n, m),
        Ok(Regime::Id2) => check_id2(bank, pair, n, m),
        Err(e) => refuse(bank, base("regime", "m > 2n", pair, n, m), e),
    }
}

/// `θᵢ^(kN+p) θᵢ^(N−m+2n) = 0` for `m−2n ≤ p ≤ N−1`.
pub fn check_wrap_product<S: Scalar>(bank: &OperatorBank<S>, op: OpId, n: u32, m: u32, k: u32, p: u32) -> IdentityCheck {
    let big_n = bank.chain().n();
    let check = IdentityCheck::new("wrap-product-vanishing", "X^(kN+p) X^(N-m+2n) = 0")
        .param("op", op.name())
        .param("n", n)
        .param("m", m)
        .param("k", k)
        .param("p", p);
    let d = m as i64 - 2 * n as i64;
    if d < 1 || d > big_n as i64 - 1 || (p as i64) < d || p >= big_n {
        return refuse(bank, check, Error::InvalidRegime(format!("need 1 <= m-2n <= p <= N-1, got m-2n={d}, p={p}")));
    }
    let w = vec![Factor::dp(op, k * big_n + p), Factor::dp(op, big_n + 2 * n - m)];
    run_words(bank, check, Ok(vec![WordTerm::plus(w)]))
}

fn pm(id: &str, rel: &str, branch: Branch, q_sector: u32) -> IdentityCheck {
    IdentityCheck::new(id, rel).param("branch", branch.name()).param("Q", q_sector)
}

/// Residuals of two term lists are bit-identical.
fn same_residual<S: Scalar>(bank: &OperatorBank<S>, a: &[WordTerm], b: &[WordTerm]) -> Result<bool> {
    Ok(eval_words(bank, a)?.residual == eval_words(bank, b)?.residual)
}

fn with_cross_check<S: Scalar>(
    bank: &OperatorBank<S>,
    check: IdentityCheck,
    explicit: Vec<WordTerm>,
    general: Option<Vec<WordTerm>>,
) -> IdentityCheck {
    let Some(general) = general else {
        return run_words(bank, check, Ok(explicit));
    };
    let agree = same_residual(bank, &explicit, &general);
    let mut out = run_words(bank, check.param("matches_general_form", matches!(agree, Ok(true))), Ok(explicit));
    match agree {
        Ok(true) => {}
        Ok(false) => {
            out.status = Status::Error {
                error: "InternalInconsistency".into(),
                message: "residual differs from the general identity".into(),
            }
        }
        Err(e) => out.status = Status::from_error(&e),
    }
    out
}

/// `B^(2N+Q)C^(Q) + (−1)^{N+Q−1} B^(N+Q)C^(Q)B^(N) + B^(Q)C^(Q)B^(2N) = 0`
/// and, with `swap`, the same with `B` and `C` interchanged.
pub fn check_bcn<S: Scalar>(bank: &OperatorBank<S>, branch: Branch, q_sector: u32, swap: bool) -> IdentityCheck {
    let big_n = bank.chain().n();
    let (b, c) = if swap { (branch.c(), branch.b()) } else { (branch.b(), branch.c()) };
    let (id, rel) = if swap {
        ("cbn", "C^(2N+Q) B^(Q) + (-1)^(N+Q-1) C^(N+Q) B^(Q) C^(N) + C^(Q) B^(Q) C^(2N) = 0")
    } else {
        ("bcn", "B^(2N+Q) C^(Q) + (-1)^(N+Q-1) B^(N+Q) C^(Q) B^(N) + B^(Q) C^(Q) B^(2N) = 0")
    };
    let q = q_sector;
    let explicit = vec![
        WordTerm::plus(word(&[(b, 2 * big_n + q), (c, q)])),
        WordTerm::new(signed((big_n + q + 1) as i64), word(&[(b, big_n + q), (c, q), (b, big_n)])),
        WordTerm::plus(word(&[(b, q), (c, q), (b, 2 * big_n)])),
    ];
    let general = id1_terms(Pair { i: b, j: c }, q, 2 * big_n + q, big_n);
    with_cross_check(bank, pm(id, rel, branch, q), explicit, Some(general))
}

/// `B^(N+Q)C^(Q)B^(Q) = B^(Q)C^(Q)B^(N+Q)` (or its mirror with `swap`).
pub fn check_bcb<S: Scalar>(bank: &OperatorBank<S>, branch: Branch, q_sector: u32, swap: bool) -> IdentityCheck {
    let big_n = bank.chain().n();
    let (b, c) = if swap { (branch.c(), branch.b()) } else { (branch.b(), branch.c()) };
    let (id, rel) = if swap {
        ("cbc", "C^(N+Q) B^(Q) C^(Q) = C^(Q) B^(Q) C^(N+Q)")
    } else {
        ("bcb", "B^(N+Q) C^(Q) B^(Q) = B^(Q) C^(Q) B^(N+Q)")
    };
    let q = q_sector;
    let explicit = vec![
        WordTerm::plus(word(&[(b, big_n + q), (c, q), (b, q)])),
        WordTerm::minus(word(&[(b, q), (c, q), (b, big_n + q)])),
    ];
    let general = (q >= 1).then(|| id2_terms(Pair { i: b, j: c }, q, big_n + q, big_n));
    with_cross_check(bank, pm(id, rel, branch, q), explicit, general)
}

/// The four-term identity at `n = N+Q`, `m = 3N+Q`.
pub fn check_bcbc<S: Scalar>(bank: &OperatorBank<S>, branch: Branch, q_sector: u32, swap: bool) -> IdentityCheck {
    let big_n = bank.chain().n();
    let (b, c) = if swap { (branch.c(), branch.b()) } else { (branch.b(), branch.c()) };
    let (id, rel) = if swap {
        (
            "cbcb",
            "C^(3N+Q) B^(N+Q) C^(Q) - C^(2N+Q) B^(N+Q) C^(N+Q) + C^(N+Q) B^(N+Q) C^(2N+Q) - C^(Q) B^(N+Q) C^(3N+Q) = 0",
        )
    } else {
        (
            "bcbc",
            "B^(3N+Q) C^(N+Q) B^(Q) - B^(2N+Q) C^(N+Q) B^(N+Q) + B^(N+Q) C^(N+Q) B^(2N+Q) - B^(Q) C^(N+Q) B^(3N+Q) = 0",
        )
    };
    let q = q_sector;
    let mid = big_n + q;
    let explicit = vec![
        WordTerm::plus(word(&[(b, 3 * big_n + q), (c, mid), (b, q)])),
        WordTerm::minus(word(&[(b, 2 * big_n + q), (c, mid), (b, mid)])),
        WordTerm::plus(word(&[(b, mid), (c, mid), (b, 2 * big_n + q)])),
        WordTerm::minus(word(&[(b, q), (c, mid), (b, 3 * big_n + q)])),
    ];
    let general = (q >= 1).then(|| id2_terms(Pair { i: b, j: c }, mid, 3 * big_n + q, big_n));
    with_cross_check(bank, pm(id, rel, branch, q), explicit, general)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::cyclo::{CycloElem, CycloRing};
    use crate::repchain::chain::ChainContext;
    use crate::repchain::site::{build_site_rep, SiteKind};
    use crate::scalar::RingMode;
    use proptest::prelude::*;

    fn chain(n: u32, l: usize) -> ChainContext {
        ChainContext::new(build_site_rep(SiteKind::SpinHalf, n, None).unwrap(), l).unwrap()
    }

    fn root(n: u32, l: usize) -> OperatorBank<CycloElem> {
        OperatorBank::new(chain(n, l), RingMode::Cyclotomic, CycloRing::get(n), Default::default())
    }

    fn generic(n: u32, l: usize) -> OperatorBank<LaurentPoly> {
        OperatorBank::new(chain(n, l), RingMode::Laurent, (), Default::default())
    }

    #[test]
    fn f_with_m_zero_is_theta_j() {
        let t = lusztig_f_terms(Pair::E0_E1, 2, 0);
        assert_eq!(t, vec![WordTerm::plus(vec![Factor::dp(OpId::Gen(Generator::E1), 2)])]);
    }

    #[test]
    fn quantum_serre_generic() {
        let b = generic(2, 4);
        for pair in Pair::LUSZTIG {
            let c = check_higher_serre(&b, pair, 1, 3);
            assert!(c.status.is_exact_zero(), "{c}");
        }
        let f = lusztig_f(&b, Pair::E0_E1, 1, 2).unwrap();
        assert!(!f.is_zero());
    }

    #[test]
    fn vacuous_on_short_chain() {
        let b = generic(2, 1);
        let c = check_higher_serre(&b, Pair::E0_E1, 1, 3);
        assert_eq!(c.status, Status::VacuousZero);
    }

    #[test]
    fn g_forms_both_branches() {
        let b = generic(2, 4);
        for branch in [CBranch::Full, CBranch::Truncated] {
            let c = check_g_forms(&b, Pair::E0_E1, 1, 3, branch);
            assert!(c.status.is_exact_zero(), "{c}");
        }
        let c = check_g_forms(&b, Pair::E1_E0, 1, 0, CBranch::Full);
        assert!(c.passed(), "{c}");
    }

    #[test]
    fn id1_smallest_and_vacuous() {
        let b = root(2, 3);
        let c = check_id1(&b, Pair::E0_E1, 0, 2);
        assert!(c.passed(), "{c}");
        assert_eq!(check_id1(&b, Pair::E0_E1, 1, 5).status, Status::VacuousZero);
        // four sites already leave room for the middle term
        let b4 = root(2, 4);
        assert!(check_id1(&b4, Pair::E0_E1, 1, 5).status.is_exact_zero());
        let c = check_id1(&b4, Pair::E0_E1, 1, 3);
        assert!(matches!(c.status, Status::Error { ref error, .. } if error == "InvalidRegime"));
    }

    #[test]
    fn id2_smallest_regime() {
        let b = root(2, 3);
        for pair in Pair::LUSZTIG {
            let c = check_id2(&b, pair, 1, 3);
            assert!(c.passed(), "{c}");
        }
        let c = check_id2(&b, Pair::E0_E1, 1, 2);
        assert!(matches!(c.status, Status::Error { ref error, .. } if error == "InvalidRegime"));
    }

    #[test]
    fn id1_fails_at_generic_q() {
        let b = generic(2, 5);
        assert!(check_id1(&b, Pair::E0_E1, 0, 2).status.is_exact_zero());
        let c = check_id1(&b, Pair::E0_E1, 0, 3);
        assert!(matches!(c.status, Status::Nonzero { .. }), "{c}");
    }

    #[test]
    fn bcn_n2_q1_l5() {
        let b = root(2, 5);
        for br in Branch::BOTH {
            for swap in [false, true] {
                let c = check_bcn(&b, br, 1, swap);
                assert!(c.status.is_exact_zero(), "{c}");
                assert_eq!(c.params["matches_general_form"], true);
            }
        }
    }

    #[test]
    fn bcb_n2_q1_l4() {
        let b = root(2, 4);
        for br in Branch::BOTH {
            for swap in [false, true] {
                let c = check_bcb(&b, br, 1, swap);
                assert!(c.status.is_exact_zero(), "{c}");
            }
        }
    }

    #[test]
    fn wrap_product_vanishes() {
        let b = root(3, 5);
        let c = check_wrap_product(&b, OpId::Gen(Generator::E0), 1, 3, 0, 1);
        assert!(c.passed(), "{c}");
        let c = check_wrap_product(&b, OpId::Gen(Generator::E0), 1, 3, 0, 2);
        assert!(c.passed(), "{c}");
    }

    proptest! {
        #[test]
        fn regimes_partition(n in 0u32..12, d in 1u32..30, big_n in 2u32..7) {
            let m = 2 * n + d;
            let r = regime(n, m, big_n).unwrap();
            prop_assert_eq!(r == Regime::Id1, d >= big_n);
            prop_assert_eq!(r == Regime::Id2, (1..big_n).contains(&d));
        }
    }
}
