//! Self-check gate: every algebraic relation the derivation consumes,
//! verified on the site matrices and on the chain.

use serde::{Deserialize, Serialize};

use crate::check::{scalar_status, timed, IdentityCheck, Status};
use crate::error::Result;
use crate::int::Int;
use crate::qcomb::cyclo::{CycloElem, CycloRing};
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::qnum::q_int;
use crate::repchain::chain::{ChainContext, Generator};
use crate::repchain::site::{dense_identity, dense_mul, dense_scale, dense_sub, DenseMatrix, SiteRep};
use crate::repchain::operator::GradedOperator;
use crate::scalar::Scalar;
use crate::terms::{equality, evaluate, finish, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMode {
    Generic,
    RootOfUnity,
}

impl GateMode {
    pub fn name(self) -> &'static str {
        match self {
            GateMode::Generic => "generic",
            GateMode::RootOfUnity => "root_of_unity",
        }
    }
}

fn q(e: i32) -> LaurentPoly {
    LaurentPoly::q_pow(e)
}

/// Entry-wise comparison of dense matrices in the mode's ring.
fn dense_status(mode: GateMode, n: u32, lhs: &DenseMatrix, rhs: &DenseMatrix) -> Status {
    let ring = CycloRing::get(n);
    let red = |p: &LaurentPoly| -> (bool, String) {
        match mode {
            GateMode::Generic => (p.is_zero(), p.to_string()),
            GateMode::RootOfUnity => {
                let c = ring.reduce(p);
                (c.is_zero(), c.to_string())
            }
        }
    };
    let any = lhs
        .iter()
        .chain(rhs)
        .flatten()
        .any(|x| !red(x).0);
    let diff = dense_sub(lhs, rhs);
    for (i, row) in diff.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let (z, s) = red(x);
            if !z {
                return Status::Nonzero {
                    witness: crate::check::Witness {
                        term: None,
                        row: i as u64,
                        col: j as u64,
                        value: s,
                    },
                };
            }
        }
    }
    scalar_status(true, any, String::new())
}

fn site_check(
    rep: &SiteRep,
    mode: GateMode,
    id: &str,
    relation: &str,
    lhs: DenseMatrix,
    rhs: DenseMatrix,
) -> IdentityCheck {
    timed(|| {
        IdentityCheck::new(id, relation)
            .param("backend", rep.kind().name())
            .param("N", rep.n())
            .param("mode", mode.name())
            .with_status(dense_status(mode, rep.n(), &lhs, &rhs))
    })
}

/// Sign `s` with `k′ = s·q⁻¹Z⁻¹` in the given mode, if any.
pub fn k_vs_z_sign(rep: &SiteRep, mode: GateMode) -> Option<i32> {
    let base = dense_scale(&rep.z_half_pow(-2), &q(-1));
    [1, -1].into_iter().find(|&s| {
        let rhs = dense_scale(&base, &LaurentPoly::constant(Int::from(s as i64)));
        dense_status(mode, rep.n(), &rep.k_pr(false), &rhs).is_pass()
    })
}

pub fn rep_self_check(rep: &SiteRep, mode: GateMode) -> Vec<IdentityCheck> {
    let e = rep.e_pr();
    let f = rep.f_pr();
    let k = rep.k_pr(false);
    let ki = rep.k_pr(true);
    let z = rep.z_half_pow(2);
    let zi = rep.z_half_pow(-2);
    let mut out = vec![
        site_check(
            rep,
            mode,
            "site-k-e",
            "k' e' k'^-1 = q^2 e'",
            dense_mul(&dense_mul(&k, e), &ki),
            dense_scale(e, &q(2)),
        ),
        site_check(
            rep,
            mode,
            "site-k-f",
            "k' f' k'^-1 = q^-2 f'",
            dense_mul(&dense_mul(&k, f), &ki),
            dense_scale(f, &q(-2)),
        ),
        site_check(
            rep,
            mode,
            "site-e-f",
            "[e', f'] = (k' - k'^-1)/(q - q^-1)",
            dense_sub(&dense_mul(e, f), &dense_mul(f, e)),
            {
                let mut m = vec![vec![LaurentPoly::zero(); rep.dim()]; rep.dim()];
                for (i, &x) in rep.k_exponents().iter().enumerate() {
                    m[i][i] = q_int(x as i64);
                }
                m
            },
        ),
        site_check(
            rep,
            mode,
            "site-z-e",
            "Z e' Z^-1 = w^-1 e'",
            dense_mul(&dense_mul(&z, e), &zi),
            dense_scale(e, &q(-2)),
        ),
        site_check(
            rep,
            mode,
            "site-z-f",
            "Z f' Z^-1 = w f'",
            dense_mul(&dense_mul(&z, f), &zi),
            dense_scale(f, &q(2)),
        ),
    ];
    if mode == GateMode::RootOfUnity {
        out.push(site_check(
            rep,
            mode,
            "site-z-order",
            "Z^N = 1",
            rep.z_half_pow(2 * rep.n() as i32),
            dense_identity(rep.dim()),
        ));
    }
    let sign = k_vs_z_sign(rep, mode);
    let status = match sign {
        Some(_) => Status::ExactZero,
        None => dense_status(mode, rep.n(), &k, &dense_scale(&zi, &q(-1))),
    };
    out.push(
        IdentityCheck::new("site-k-vs-z", "k' = s q^-1 Z^-1 with s = +1 or -1")
            .param("backend", rep.kind().name())
            .param("N", rep.n())
            .param("mode", mode.name())
            .param(
                "sign",
                match sign {
                    Some(1) => "+",
                    Some(_) => "-",
                    None => "none",
                },
            )
            .with_status(status),
    );
    out
}

fn chain_checks<S: Scalar>(ctx: &ChainContext, mode: GateMode, sctx: S::Ctx) -> Result<Vec<IdentityCheck>> {
    let g = ctx.build_chain_generators();
    let to = |op: &GradedOperator<LaurentPoly>| op.try_map(sctx, |v| Ok(S::from_laurent(sctx, v)));
    let (e0, e1, f0, f1) = (to(&g.e0)?, to(&g.e1)?, to(&g.f0)?, to(&g.f1)?);
    let (k, ki, a, ai) = (to(&g.k)?, to(&g.k_inv)?, to(&g.a)?, to(&g.a_inv)?);
    let kb = to(&ctx.k_bracket())?;
    let layout = ctx.layout();
    let base = |id: &str, rel: &str| {
        IdentityCheck::new(id, rel)
            .param("backend", ctx.rep().kind().name())
            .param("N", ctx.n())
            .param("L", ctx.sites() as u64)
            .param("mode", mode.name())
    };
    let run = |c: IdentityCheck, terms: Vec<Term<'_, S>>| timed(|| finish(c, evaluate(layout, sctx, &terms)));
    let mut out = vec![
        run(base("chain-k-e1", "K E1 K^-1 = q^2 E1"), equality(vec![&k, &e1, &ki], q(2), vec![&e1])),
        run(base("chain-k-e0", "K E0 K^-1 = q^-2 E0"), equality(vec![&k, &e0, &ki], q(-2), vec![&e0])),
        run(base("chain-k-f1", "K F1 K^-1 = q^-2 F1"), equality(vec![&k, &f1, &ki], q(-2), vec![&f1])),
        run(base("chain-k-f0", "K F0 K^-1 = q^2 F0"), equality(vec![&k, &f0, &ki], q(2), vec![&f0])),
        run(
            base("chain-e1-f1", "[E1, F1] = (K - K^-1)/(q - q^-1)"),
            vec![Term::plus(vec![&e1, &f1]), Term::minus(vec![&f1, &e1]), Term::minus(vec![&kb])],
        ),
        run(
            base("chain-e0-f0", "[E0, F0] = (K^-1 - K)/(q - q^-1)"),
            vec![Term::plus(vec![&e0, &f0]), Term::minus(vec![&f0, &e0]), Term::plus(vec![&kb])],
        ),
        run(
            base("chain-e1-f0", "[E1, F0] = 0"),
            vec![Term::plus(vec![&e1, &f0]), Term::minus(vec![&f0, &e1])],
        ),
        run(
            base("chain-e0-f1", "[E0, F1] = 0"),
            vec![Term::plus(vec![&e0, &f1]), Term::minus(vec![&f1, &e0])],
        ),
    ];
    for (gen, op) in [
        (Generator::E0, &e0),
        (Generator::E1, &e1),
        (Generator::F0, &f0),
        (Generator::F1, &f1),
    ] {
        let c = gen.charge();
        let mut check = run(
            base("chain-grading", "A_L X A_L^-1 = w^c X").param("op", gen.name()).param("c", c),
            equality(vec![&a, op, &ai], q(2 * c), vec![op]),
        );
        let expected = c.rem_euclid(ctx.n() as i32) as u32;
        let recorded = op.charge_of()?;
        if recorded != expected && !op.is_zero() && check.status.is_pass() {
            check.status = Status::Error {
                error: "NotGraded".into(),
                message: format!("block charge {recorded}, expected {expected}"),
            };
        }
        out.push(check);
    }
    Ok(out)
}

/// Chain-level Chevalley and grading relations.
pub fn chain_self_check(ctx: &ChainContext, mode: GateMode) -> Result<Vec<IdentityCheck>> {
    match mode {
        GateMode::Generic => chain_checks::<LaurentPoly>(ctx, mode, ()),
        GateMode::RootOfUnity => chain_checks::<CycloElem>(ctx, mode, CycloRing::get(ctx.n())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repchain::site::{build_site_rep, SiteKind};

    fn passes(checks: &[IdentityCheck], id: &str) -> bool {
        checks.iter().filter(|c| c.id == id).all(|c| c.passed())
    }

    #[test]
    fn spin_half_generic_all_pass_with_plus_sign() {
        let rep = build_site_rep(SiteKind::SpinHalf, 2, None).unwrap();
        let checks = rep_self_check(&rep, GateMode::Generic);
        assert!(checks.iter().all(|c| c.passed()), "{checks:#?}");
        assert_eq!(k_vs_z_sign(&rep, GateMode::Generic), Some(1));
    }

    #[test]
    fn highest_weight_sign_is_minus_at_root() {
        let rep = build_site_rep(SiteKind::HighestWeight, 3, None).unwrap();
        assert_eq!(k_vs_z_sign(&rep, GateMode::RootOfUnity), Some(-1));
        assert_eq!(k_vs_z_sign(&rep, GateMode::Generic), None);
        assert!(passes(&rep_self_check(&rep, GateMode::Generic), "site-e-f"));
    }

    #[test]
    fn cyclic_needs_root_of_unity() {
        let rep = build_site_rep(SiteKind::Cyclic, 3, Some(LaurentPoly::zero())).unwrap();
        let root = rep_self_check(&rep, GateMode::RootOfUnity);
        assert!(root.iter().all(|c| c.passed()), "{root:#?}");
        let generic = rep_self_check(&rep, GateMode::Generic);
        assert!(!passes(&generic, "site-e-f"));
    }

    #[test]
    fn chain_gate_spin_half_l3() {
        let ctx = ChainContext::new(build_site_rep(SiteKind::SpinHalf, 2, None).unwrap(), 3).unwrap();
        let checks = chain_self_check(&ctx, GateMode::Generic).unwrap();
        for c in &checks {
            assert!(c.passed(), "{c}");
        }
        let c = checks.iter().find(|c| c.id == "chain-e1-f1").unwrap();
        assert!(c.status.is_exact_zero());
    }
}
