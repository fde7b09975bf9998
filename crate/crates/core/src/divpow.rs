//! Divided powers `θ^(n) = θⁿ / [n]_q!` (±-operators) and `θⁿ / [n]!`
//! (site-labeled operators), computed symbolically and specialized.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bank::{Factor, OperatorBank, OpId, B1, BL, C0, CL1};
use crate::check::{timed, IdentityCheck, Status, Witness};
use crate::int::{binomial, Int};
use crate::repchain::chain::Generator;
use crate::error::Result;
use crate::qcomb::cyclo::{CycloElem, CycloRing};
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::phiadic::{PhiAdicElem, PhiAdicRing};
use crate::qcomb::qnum::{factorial, omega_int, q_int, Flavor};
use crate::repchain::chain::LOp;
use crate::repchain::operator::GradedOperator;
use crate::scalar::Scalar;
use crate::terms::{equality, evaluate, finish, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide by `[n]_q!`.
    QFact,
    /// Divide by `[n]! = Π (1 − ωⁱ)/(1 − ω)`.
    OmegaFact,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::QFact => "q_fact",
            Normalization::OmegaFact => "omega_fact",
        }
    }

    pub fn flavor(self) -> Flavor {
        match self {
            Normalization::QFact => Flavor::Q,
            Normalization::OmegaFact => Flavor::Omega,
        }
    }

    /// The `n`-th factor of the factorial.
    pub fn step(self, n: u32) -> LaurentPoly {
        match self {
            Normalization::QFact => q_int(n as i64),
            Normalization::OmegaFact => omega_int(n),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Key identifying one divided power in a cache.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DividedPowerKey {
    pub op: String,
    pub order: u32,
    pub normalization: Normalization,
    pub ring: String,
}

/// Extends `powers` (holding `θ^(0..k)`) up to order `n` by
/// `θ^(j+1) = θ·θ^(j) / [j+1]`.
pub fn extend_divided_powers<S: Scalar>(
    op: &GradedOperator<S>,
    powers: &mut Vec<GradedOperator<S>>,
    n: u32,
    norm: Normalization,
) -> Result<()> {
    if powers.is_empty() {
        powers.push(GradedOperator::identity(op.layout(), op.ctx()));
    }
    while powers.len() <= n as usize {
        let j = powers.len() as u32;
        let prev = powers.last().expect("nonempty");
        let next = if prev.is_zero() {
            GradedOperator::zero(op.layout(), op.ctx(), (prev.charge() + op.charge()) % op.layout().n())
        } else {
            let d = S::from_laurent(op.ctx(), &norm.step(j));
            op.mul(prev)?.div_scalar(&d)?
        };
        powers.push(next);
    }
    Ok(())
}

/// All of `θ^(0), …, θ^(n)` in one ring.
pub fn divided_powers<S: Scalar>(
    op: &GradedOperator<S>,
    n: u32,
    norm: Normalization,
) -> Result<Vec<GradedOperator<S>>> {
    let mut v = Vec::new();
    extend_divided_powers(op, &mut v, n, norm)?;
    Ok(v)
}

pub fn divided_power<S: Scalar>(op: &GradedOperator<S>, n: u32, norm: Normalization) -> Result<GradedOperator<S>> {
    Ok(divided_powers(op, n, norm)?.pop().expect("n+1 powers"))
}

/// Audit path: `θⁿ` first, then a single division by the full factorial.
pub fn divided_power_direct<S: Scalar>(
    op: &GradedOperator<S>,
    n: u32,
    norm: Normalization,
) -> Result<GradedOperator<S>> {
    let mut p = GradedOperator::identity(op.layout(), op.ctx());
    for _ in 0..n {
        p = op.mul(&p)?;
    }
    p.div_scalar(&S::from_laurent(op.ctx(), &factorial(n, norm.flavor())))
}

/// Symbolic route used before specializing to the root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    Laurent,
    PhiAdic { trunc: usize },
}

/// `θ^(n)` at the root of unity via the chosen symbolic route.
pub fn divided_power_at_root(
    op: &LOp,
    n: u32,
    norm: Normalization,
    route: Route,
    ring: &'static CycloRing,
) -> Result<GradedOperator<CycloElem>> {
    match route {
        Route::Laurent => divided_power(op, n, norm)?.try_map(ring, |v| Ok(ring.reduce(v))),
        Route::PhiAdic { trunc } => {
            let pr = PhiAdicRing::get(ring.n(), trunc);
            let lifted: GradedOperator<PhiAdicElem> = op.try_map(pr, |v| Ok(pr.embed(v)))?;
            divided_power(&lifted, n, norm)?.try_map(ring, PhiAdicElem::specialize)
        }
    }
}

/// `θ^(n) · [n]_q! = θⁿ` at generic `q`.
pub fn check_power_factorial(name: &str, op: &LOp, n: u32) -> IdentityCheck {
    timed(|| {
        let check = IdentityCheck::new("power-factorial", "X^(n) [n]_q! = X^n")
            .param("op", name)
            .param("n", n);
        let dp = match divided_power(op, n, Normalization::QFact) {
            Ok(d) => d,
            Err(e) => return check.with_status(Status::from_error(&e)),
        };
        let powers = vec![op; n as usize];
        let terms = vec![
            Term::new(factorial(n, Flavor::Q), vec![&dp]),
            Term::minus(powers),
        ];
        finish(check, evaluate(op.layout(), (), &terms))
    })
}

/// Iterative and direct computations of one divided power agree.
pub fn check_iterative_vs_direct<S: Scalar>(
    name: &str,
    op: &GradedOperator<S>,
    n: u32,
    norm: Normalization,
) -> IdentityCheck {
    timed(|| {
        let check = IdentityCheck::new("divpow-audit", "iterative X^(n) = X^n / [n]!")
            .param("op", name)
            .param("n", n)
            .param("norm", norm.name());
        let both = divided_power(op, n, norm).and_then(|a| Ok((a, divided_power_direct(op, n, norm)?)));
        match both {
            Ok((a, b)) => finish(check, evaluate(op.layout(), op.ctx(), &equality(vec![&a], LaurentPoly::one(), vec![&b]))),
            Err(e) => check.with_status(Status::from_error(&e)),
        }
    })
}

/// Both symbolic routes give the same divided power at the root of unity.
pub fn check_dual_route(name: &str, op: &LOp, n: u32, norm: Normalization, ring: &'static CycloRing) -> IdentityCheck {
    timed(|| {
        let check = IdentityCheck::new("dual-route", "X^(n) via Laurent = X^(n) via phi-adic")
            .param("op", name)
            .param("n", n)
            .param("norm", norm.name())
            .param("N", ring.n());
        let trunc = PhiAdicRing::default_trunc(ring.n(), n.max(4 * ring.n()));
        let both = divided_power_at_root(op, n, norm, Route::Laurent, ring)
            .and_then(|a| Ok((a, divided_power_at_root(op, n, norm, Route::PhiAdic { trunc }, ring)?)));
        match both {
            Ok((a, b)) => finish(check, evaluate(op.layout(), ring, &equality(vec![&a], LaurentPoly::one(), vec![&b]))),
            Err(e) => check.with_status(Status::from_error(&e)),
        }
    })
}

/// `X^(n)` with `[n]_q!` equals `q^{n(n−1)/2}` times `X^(n)` with `[n]!`.
pub fn check_norm_ratio<S: Scalar>(bank: &OperatorBank<S>, op: OpId, n: u32) -> IdentityCheck {
    timed(|| {
        let check = IdentityCheck::new("norm-ratio", "X^(n)_q = q^(n(n-1)/2) X^(n)_omega")
            .param("op", op.name())
            .param("n", n);
        let shift = LaurentPoly::q_pow((n * n.saturating_sub(1) / 2) as i32);
        let both = bank
            .power(op, Normalization::QFact, n)
            .and_then(|a| Ok((a, bank.power(op, Normalization::OmegaFact, n)?)));
        match both {
            Ok((a, b)) => finish(check, evaluate(bank.layout(), bank.sctx(), &equality(vec![&a], shift, vec![&b]))),
            Err(e) => check.with_status(Status::from_error(&e)),
        }
    })
}

/// `X^(L+1) = 0` while `X^(L) ≠ 0`.
pub fn check_nilpotency<S: Scalar>(bank: &OperatorBank<S>, op: OpId) -> IdentityCheck {
    timed(|| {
        let l = bank.chain().sites() as u32;
        let check = IdentityCheck::new("nilpotency", "X^(L+1) = 0")
            .param("op", op.name())
            .param("L", l);
        let both = bank.dp(op, l).and_then(|a| Ok((a, bank.dp(op, l + 1)?)));
        let (top, over) = match both {
            Ok(v) => v,
            Err(e) => return check.with_status(Status::from_error(&e)),
        };
        let mut check = finish(check, evaluate(bank.layout(), bank.sctx(), &[Term::plus(vec![&over])]));
        if check.status.is_pass() {
            if let Some(w) = top.witness_entry() {
                check.status = Status::ExactZero;
                check.nontrivial = Some(Witness {
                    term: None,
                    row: w.row,
                    col: w.col,
                    value: w.value,
                });
            }
        }
        check
    })
}

/// `B̄₁^(kN+Q) B̄₁^(jN) = C(k+j, k) B̄₁^((k+j)N+Q)`.
pub fn check_mulo<S: Scalar>(bank: &OperatorBank<S>, k: u32, j: u32, q_sector: u32) -> IdentityCheck {
    timed(|| {
        let n = bank.chain().n();
        let check = IdentityCheck::new("mulo", "B1^(kN+Q) B1^(jN) = binom(k+j, k) B1^((k+j)N+Q)")
            .param("N", n)
            .param("L", bank.chain().sites() as u64)
            .param("Q", q_sector)
            .param("k", k)
            .param("j", j);
        let coeff = LaurentPoly::constant(binomial((k + j) as u64, k as u64));
        let ops = (|| {
            Ok::<_, crate::error::Error>((
                bank.dp(B1, k * n + q_sector)?,
                bank.dp(B1, j * n)?,
                bank.dp(B1, (k + j) * n + q_sector)?,
            ))
        })();
        match ops {
            Ok((a, b, c)) => finish(check, evaluate(bank.layout(), bank.sctx(), &equality(vec![&a, &b], coeff, vec![&c]))),
            Err(e) => check.with_status(Status::from_error(&e)),
        }
    })
}

/// The four relations between `±`-operators and site-labeled ones at order `n`.
pub fn check_cross_normalization<S: Scalar>(bank: &OperatorBank<S>, n: u32) -> Vec<IdentityCheck> {
    let l = bank.chain().sites() as i32;
    let ni = n as i32;
    let sign = if n % 2 == 0 { 1i64 } else { -1 };
    let pre = n as i32 * (1 - l);
    let h = Factor::AHalf(-ni);
    let rels: [(&str, &str, OpId, Vec<Factor>, LaurentPoly); 4] = [
        (
            "C-",
            "C-^(n) = (-1)^n A^(-n/2) C_(L-1)^(n)",
            OpId::Gen(Generator::F0),
            vec![h, Factor::dp(CL1, n)],
            LaurentPoly::constant(Int::from(sign)),
        ),
        (
            "B-",
            "B-^(n) = B_L^(n) A^(-n/2)",
            OpId::Gen(Generator::F1),
            vec![Factor::dp(BL, n), h],
            LaurentPoly::one(),
        ),
        (
            "C+",
            "C+^(n) = (-1)^n q^(n(1-L)) A^(-n/2) C_0^(n)",
            OpId::Gen(Generator::E1),
            vec![h, Factor::dp(C0, n)],
            LaurentPoly::monomial(Int::from(sign), pre),
        ),
        (
            "B+",
            "B+^(n) = q^(n(1-L)) B_1^(n) A^(-n/2)",
            OpId::Gen(Generator::E0),
            vec![Factor::dp(B1, n), h],
            LaurentPoly::q_pow(pre),
        ),
    ];
    rels.into_iter()
        .map(|(tag, rel, gen, rhs, coeff)| {
            timed(|| {
                let check = IdentityCheck::new("cross-normalization", rel)
                    .param("N", bank.chain().n())
                    .param("L", bank.chain().sites() as u64)
                    .param("n", n)
                    .param("relation", tag);
                let both = bank.dp(gen, n).and_then(|a| Ok((a, bank.word(&rhs)?)));
                match both {
                    Ok((a, b)) => finish(check, evaluate(bank.layout(), bank.sctx(), &equality(vec![&a], coeff, vec![&b]))),
                    Err(e) => check.with_status(Status::from_error(&e)),
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repchain::chain::ChainContext;
    use crate::repchain::site::{build_site_rep, SiteKind};

    fn spin_chain(n: u32, l: usize) -> ChainContext {
        ChainContext::new(build_site_rep(SiteKind::SpinHalf, n, None).unwrap(), l).unwrap()
    }

    #[test]
    fn order_zero_and_one() {
        let ctx = spin_chain(2, 3);
        let g = ctx.build_chain_generators();
        let p = divided_powers(&g.e1, 1, Normalization::QFact).unwrap();
        assert_eq!(p[0], GradedOperator::identity(ctx.layout(), ()));
        assert_eq!(p[1], g.e1);
    }

    #[test]
    fn e1_squared_two_sites() {
        // E1² = (q⁻² + 1)·k′e′ ⊗ e′ … divided by [2]_q gives q⁻¹ k′e′ ⊗ e′
        let ctx = spin_chain(2, 2);
        let g = ctx.build_chain_generators();
        let d2 = divided_power(&g.e1, 2, Normalization::QFact).unwrap();
        let entries = d2.entries();
        assert_eq!(entries.len(), 1);
        let (r, c, v) = entries[0];
        assert_eq!((r, c), (0, 3));
        // q⁻¹ · (k′e′ ⊗ e′) on |↓↓⟩ is q⁻¹ · q = 1
        assert_eq!(v, &LaurentPoly::one());
        let e1sq = g.e1.mul(&g.e1).unwrap();
        assert_eq!(e1sq.entries()[0].2, &q_int(2));
    }

    #[test]
    fn nilpotent_beyond_chain_length() {
        let ctx = spin_chain(2, 3);
        let g = ctx.build_chain_generators();
        let p = divided_powers(&g.e0, 4, Normalization::QFact).unwrap();
        assert!(!p[3].is_zero());
        assert!(p[4].is_zero());
    }

    #[test]
    fn cyclo_direct_division_fails_at_n() {
        let ctx = spin_chain(2, 3);
        let g = ctx.build_chain_generators();
        let ring = CycloRing::get(2);
        let e1: GradedOperator<CycloElem> = g.e1.try_map(ring, |v| Ok(ring.reduce(v))).unwrap();
        let err = divided_power(&e1, 2, Normalization::QFact).unwrap_err();
        assert_eq!(err.kind(), "NotDivisible");
        // the symbolic route succeeds
        assert!(divided_power_at_root(&g.e1, 2, Normalization::QFact, Route::Laurent, ring).is_ok());
    }

    #[test]
    fn phi_adic_route_matches_laurent() {
        let ring = CycloRing::get(2);
        for l in 2..=4 {
            let ctx = spin_chain(2, l);
            let g = ctx.build_chain_generators();
            for n in 0..=(l as u32 + 1) {
                let a = divided_power_at_root(&g.e0, n, Normalization::OmegaFact, Route::Laurent, ring).unwrap();
                let b = divided_power_at_root(&g.e0, n, Normalization::OmegaFact, Route::PhiAdic { trunc: 4 }, ring)
                    .unwrap();
                assert_eq!(a, b, "L={l} n={n}");
            }
        }
    }

    #[test]
    fn normalizations_differ_by_monomial() {
        let ctx = spin_chain(3, 4);
        let g = ctx.build_chain_generators();
        for n in 0..=4u32 {
            let a = divided_power(&g.f1, n, Normalization::QFact).unwrap();
            let b = divided_power(&g.f1, n, Normalization::OmegaFact).unwrap();
            let shift = (n * n.saturating_sub(1) / 2) as i32;
            assert_eq!(a, b.scale(&LaurentPoly::monomial(Int::ONE, shift)));
        }
    }

    #[test]
    fn power_factorial_e1_n3_l4() {
        let ctx = spin_chain(2, 4);
        let g = ctx.build_chain_generators();
        let c = check_power_factorial("E1", &g.e1, 3);
        assert!(c.status.is_exact_zero(), "{c}");
        let c = check_power_factorial("E1", &g.e1, 5);
        assert_eq!(c.status, Status::VacuousZero);
        assert!(check_iterative_vs_direct("E1", &g.e1, 4, Normalization::OmegaFact).passed());
    }

    fn bank(n: u32, l: usize) -> OperatorBank<CycloElem> {
        OperatorBank::new(spin_chain(n, l), crate::scalar::RingMode::Cyclotomic, CycloRing::get(n), Default::default())
    }

    #[test]
    fn cross_normalization_small() {
        for (n, l) in [(2, 4), (2, 5), (3, 4)] {
            let b = bank(n, l);
            for order in 0..=(2 * n + 1) {
                for c in check_cross_normalization(&b, order) {
                    assert!(c.passed(), "{c}");
                    if order <= l as u32 && order > 0 {
                        assert!(c.status.is_exact_zero(), "{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn mulo_paper_value() {
        let b = bank(2, 7);
        let c = check_mulo(&b, 1, 1, 1);
        assert!(c.status.is_exact_zero(), "{c}");
        assert!(check_mulo(&b, 0, 0, 1).status.is_exact_zero());
        let b3 = bank(3, 5);
        assert!(check_mulo(&b3, 0, 1, 1).status.is_exact_zero());
    }

    #[test]
    fn nilpotency_and_ratio() {
        let b = bank(2, 4);
        for op in [B1, C0, BL, CL1] {
            assert!(check_nilpotency(&b, op).status.is_exact_zero());
        }
        for op in [OpId::Gen(Generator::E0), OpId::Gen(Generator::F0)] {
            for n in 0..=6 {
                assert!(check_norm_ratio(&b, op, n).passed());
            }
        }
    }

    #[test]
    fn dual_route_n2() {
        let ctx = spin_chain(2, 6);
        let g = ctx.build_chain_generators();
        for n in 0..=6 {
            let c = check_dual_route("E0", &g.e0, n, Normalization::QFact, CycloRing::get(2));
            assert!(c.status.is_exact_zero(), "{c}");
        }
    }
}
