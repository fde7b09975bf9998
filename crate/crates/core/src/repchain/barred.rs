//! The site-labeled operators `B̄₁, B̄_L, C̄₀, C̄_{L−1}` and the half-power
//! commutation relations they rely on.

use serde::{Deserialize, Serialize};

use crate::check::{timed, IdentityCheck};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::qcomb::cyclo::{CycloElem, CycloRing};
use crate::qcomb::laurent::LaurentPoly;
use crate::repchain::chain::{ChainContext, ChainGenerators, LOp};
use crate::scalar::Scalar;
use crate::terms::{equality, evaluate, finish};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Barred {
    B1,
    BL,
    C0,
    CL1,
}

impl Barred {
    pub const ALL: [Barred; 4] = [Barred::B1, Barred::BL, Barred::C0, Barred::CL1];

    pub fn name(self) -> &'static str {
        match self {
            Barred::B1 => "B1bar",
            Barred::BL => "BLbar",
            Barred::C0 => "C0bar",
            Barred::CL1 => "CL1bar",
        }
    }

    pub fn is_b_type(self) -> bool {
        matches!(self, Barred::B1 | Barred::BL)
    }
}

#[derive(Debug, Clone)]
pub struct BarredOps {
    pub b1: LOp,
    pub bl: LOp,
    pub c0: LOp,
    pub cl1: LOp,
}

impl BarredOps {
    pub fn get(&self, b: Barred) -> &LOp {
        match b {
            Barred::B1 => &self.b1,
            Barred::BL => &self.bl,
            Barred::C0 => &self.c0,
            Barred::CL1 => &self.cl1,
        }
    }
}

fn signed_q(sign: i64, e: i32) -> LaurentPoly {
    LaurentPoly::monomial(Int::from(sign), e)
}

/// The four operators without the commutation gate.
pub fn barred_ops_unchecked(ctx: &ChainContext, g: &ChainGenerators) -> BarredOps {
    let l = ctx.sites() as i32;
    let mul = |a: &LOp, b: &LOp| a.mul(b).expect("same chain");
    BarredOps {
        b1: mul(&g.a_half, &g.e0).scale(&signed_q(1, l - 2)),
        bl: mul(&g.a_half, &g.f1).scale(&signed_q(1, -1)),
        c0: mul(&g.e1, &g.a_half).scale(&signed_q(-1, l - 2)),
        cl1: mul(&g.f0, &g.a_half).scale(&signed_q(-1, -1)),
    }
}

/// `A^{−1/2} C̄ = q C̄ A^{−1/2}` for `C̄₀, C̄_{L−1}` and
/// `B̄ A^{−1/2} = q A^{−1/2} B̄` for `B̄₁, B̄_L`.
pub fn check_half_commutation<S: Scalar>(
    ctx: &ChainContext,
    ops: &BarredOps,
    a_half_inv: &LOp,
    sctx: S::Ctx,
) -> Result<Vec<IdentityCheck>> {
    let to = |op: &LOp| op.try_map(sctx, |v| Ok(S::from_laurent(sctx, v)));
    let ai = to(a_half_inv)?;
    let q = LaurentPoly::q_pow(1);
    let mut out = Vec::new();
    for b in Barred::ALL {
        let op = to(ops.get(b))?;
        let (rel, terms) = if b.is_b_type() {
            (
                "X A_L^-1/2 = q A_L^-1/2 X",
                equality(vec![&op, &ai], q.clone(), vec![&ai, &op]),
            )
        } else {
            (
                "A_L^-1/2 X = q X A_L^-1/2",
                equality(vec![&ai, &op], q.clone(), vec![&op, &ai]),
            )
        };
        let check = IdentityCheck::new("half-commutation", rel)
            .param("backend", ctx.rep().kind().name())
            .param("N", ctx.n())
            .param("L", ctx.sites() as u64)
            .param("op", b.name())
            .param("ring", S::ring_name());
        out.push(timed(|| finish(check, evaluate(ctx.layout(), sctx, &terms))));
    }
    Ok(out)
}

/// Builds the four operators and demands the commutation relations at the
/// root of unity; a failure means the clock wrap-around broke them.
pub fn build_barred_ops(ctx: &ChainContext, g: &ChainGenerators) -> Result<BarredOps> {
    let ops = barred_ops_unchecked(ctx, g);
    let checks =
        check_half_commutation::<CycloElem>(ctx, &ops, &g.a_half_inv, CycloRing::get(ctx.n()))?;
    if let Some(bad) = checks.iter().find(|c| !c.passed()) {
        return Err(Error::WrapInconsistency(format!(
            "{} backend, N={}, L={}: {}",
            ctx.rep().kind(),
            ctx.n(),
            ctx.sites(),
            bad
        )));
    }
    Ok(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repchain::site::{build_site_rep, SiteKind};

    fn chain(kind: SiteKind, n: u32, l: usize) -> ChainContext {
        let c = (kind == SiteKind::Cyclic).then(LaurentPoly::zero);
        ChainContext::new(build_site_rep(kind, n, c).unwrap(), l).unwrap()
    }

    #[test]
    fn single_site_b1bar() {
        let ctx = chain(SiteKind::SpinHalf, 2, 1);
        let g = ctx.build_chain_generators();
        let ops = build_barred_ops(&ctx, &g).unwrap();
        // q^{-1} A^{1/2} f′
        let expect = g.a_half.mul(&g.e0).unwrap().scale(&LaurentPoly::q_pow(-1));
        assert_eq!(ops.b1, expect);
    }

    #[test]
    fn spin_half_commutation_generic_and_root() {
        let ctx = chain(SiteKind::SpinHalf, 2, 4);
        let g = ctx.build_chain_generators();
        let ops = barred_ops_unchecked(&ctx, &g);
        for c in check_half_commutation::<LaurentPoly>(&ctx, &ops, &g.a_half_inv, ()).unwrap() {
            assert!(c.status.is_exact_zero(), "{c}");
        }
        assert!(build_barred_ops(&ctx, &g).is_ok());
    }

    #[test]
    fn highest_weight_is_wrap_free() {
        let ctx = chain(SiteKind::HighestWeight, 3, 3);
        let g = ctx.build_chain_generators();
        assert!(build_barred_ops(&ctx, &g).is_ok());
    }

    #[test]
    fn cyclic_reports_wrap() {
        let ctx = chain(SiteKind::Cyclic, 3, 2);
        let g = ctx.build_chain_generators();
        let e = build_barred_ops(&ctx, &g).unwrap_err();
        assert_eq!(e.kind(), "WrapInconsistency");
    }
}
