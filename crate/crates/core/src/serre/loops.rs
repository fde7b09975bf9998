//! Loop generators in sector `Q`, the lemmas reordering their products, and
//! the nested-commutator Serre relations.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bank::{Factor, OperatorBank, OpId, B1, BL, C0, CL1};
use crate::check::IdentityCheck;
use crate::divpow::check_mulo;
use crate::error::Result;
use crate::int::Int;
use crate::qcomb::laurent::LaurentPoly;
use crate::repchain::operator::GradedOperator;
use crate::scalar::Scalar;
use crate::serre::expand::{left_nested, FreeElem};
use crate::serre::higher::word;
use crate::serre::{run_words, WordTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopFamily {
    X,
    Xbar,
}

impl LoopFamily {
    pub fn name(self) -> &'static str {
        match self {
            LoopFamily::X => "x",
            LoopFamily::Xbar => "xbar",
        }
    }

    pub fn relations(self) -> [NestedRelation; 2] {
        match self {
            LoopFamily::X => [NestedRelation::XMinus, NestedRelation::XPlus],
            LoopFamily::Xbar => [NestedRelation::XbarPlus, NestedRelation::XbarMinus],
        }
    }
}

/// The four generators as words in divided powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopGenerators {
    pub q: u32,
    /// `C̄₀^(Q) B̄₁^(N+Q)`.
    pub x_minus: Vec<Factor>,
    /// `C̄₀^(N+Q) B̄₁^(Q)`.
    pub x_plus: Vec<Factor>,
    /// `B̄_L^(N+Q) C̄_{L−1}^(Q)`.
    pub xbar_minus: Vec<Factor>,
    /// `B̄_L^(Q) C̄_{L−1}^(N+Q)`.
    pub xbar_plus: Vec<Factor>,
}

impl LoopGenerators {
    pub fn new(q: u32, big_n: u32) -> LoopGenerators {
        let nq = big_n + q;
        LoopGenerators {
            q,
            x_minus: word(&[(C0, q), (B1, nq)]),
            x_plus: word(&[(C0, nq), (B1, q)]),
            xbar_minus: word(&[(BL, nq), (CL1, q)]),
            xbar_plus: word(&[(BL, q), (CL1, nq)]),
        }
    }

    pub fn operators<S: Scalar>(&self, bank: &OperatorBank<S>) -> Result<[Arc<GradedOperator<S>>; 4]> {
        Ok([
            bank.word(&self.x_minus)?,
            bank.word(&self.x_plus)?,
            bank.word(&self.xbar_minus)?,
            bank.word(&self.xbar_plus)?,
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NestedRelation {
    /// `[[[x⁺, x⁻], x⁻], x⁻]`.
    XMinus,
    /// `[[[x⁻, x⁺], x⁺], x⁺]`.
    XPlus,
    /// `[[[x̄⁻, x̄⁺], x̄⁺], x̄⁺]`.
    XbarPlus,
    /// `[[[x̄⁺, x̄⁻], x̄⁻], x̄⁻]`.
    XbarMinus,
}

impl NestedRelation {
    pub fn id(self) -> &'static str {
        match self {
            NestedRelation::XMinus => "serre-x-minus",
            NestedRelation::XPlus => "serre-x-plus",
            NestedRelation::XbarPlus => "serre-xbar-plus",
            NestedRelation::XbarMinus => "serre-xbar-minus",
        }
    }

    pub fn relation(self) -> &'static str {
        match self {
            NestedRelation::XMinus => "[[[x+, x-], x-], x-] = 0",
            NestedRelation::XPlus => "[[[x-, x+], x+], x+] = 0",
            NestedRelation::XbarPlus => "[[[xbar-, xbar+], xbar+], xbar+] = 0",
            NestedRelation::XbarMinus => "[[[xbar+, xbar-], xbar-], xbar-] = 0",
        }
    }

    /// `(head, repeated)` generator words.
    fn letters(self, g: &LoopGenerators) -> (&[Factor], &[Factor]) {
        match self {
            NestedRelation::XMinus => (&g.x_plus, &g.x_minus),
            NestedRelation::XPlus => (&g.x_minus, &g.x_plus),
            NestedRelation::XbarPlus => (&g.xbar_minus, &g.xbar_plus),
            NestedRelation::XbarMinus => (&g.xbar_plus, &g.xbar_minus),
        }
    }

    /// The expanded triple commutator as word terms, with the integer
    /// coefficients in expansion order.
    pub fn terms(self, g: &LoopGenerators) -> (Vec<WordTerm>, Vec<i64>) {
        let (head, rep) = self.letters(g);
        let (h, r) = (FreeElem::letter(0u8), FreeElem::letter(1u8));
        let expanded = left_nested(&[h, r.clone(), r.clone(), r]);
        let pieces = expanded.substitute(|&l| if l == 0 { head.to_vec() } else { rep.to_vec() });
        let coeffs = pieces.iter().map(|(_, c)| *c).collect();
        let terms = pieces
            .into_iter()
            .map(|(w, c)| WordTerm::new(LaurentPoly::constant(Int::from(c)), w))
            .collect();
        (terms, coeffs)
    }
}

pub fn check_serre_nested<S: Scalar>(bank: &OperatorBank<S>, q: u32, family: LoopFamily) -> Vec<IdentityCheck> {
    let g = LoopGenerators::new(q, bank.chain().n());
    family
        .relations()
        .iter()
        .map(|&rel| {
            let (terms, coeffs) = rel.terms(&g);
            let check = IdentityCheck::new(rel.id(), rel.relation())
                .param("Q", q)
                .param("family", family.name())
                .param("coefficients", coeffs);
            run_words(bank, check, Ok(terms))
        })
        .collect()
}

/// `lhs = coeff · rhs` where both sides are words.
struct Lemma {
    id: &'static str,
    relation: &'static str,
    lhs: Vec<Factor>,
    coeff: i64,
    rhs: Vec<Factor>,
}

fn lemmas(q: u32, big_n: u32) -> Vec<Lemma> {
    let (a, b, c, d) = (q, big_n + q, 2 * big_n + q, 3 * big_n + q);
    let g = LoopGenerators::new(q, big_n);
    let xm = || g.x_minus.clone();
    let xp = || g.x_plus.clone();
    let cat = |parts: Vec<Vec<Factor>>| parts.concat();
    // C̄₀ and B̄₁ pairs, listed left to right
    let cb = |orders: &[(u32, u32)]| -> Vec<Factor> {
        let flat: Vec<(OpId, u32)> = orders.iter().flat_map(|&(x, y)| [(C0, x), (B1, y)]).collect();
        word(&flat)
    };
    vec![
        Lemma {
            id: "xpxm-order-a",
            relation: "x+ x- = C(Q) B(Q) C(N+Q) B(N+Q)",
            lhs: cat(vec![xp(), xm()]),
            coeff: 1,
            rhs: cb(&[(a, a), (b, b)]),
        },
        Lemma {
            id: "xpxm-order-b",
            relation: "x+ x- = C(N+Q) B(N+Q) C(Q) B(Q)",
            lhs: cat(vec![xp(), xm()]),
            coeff: 1,
            rhs: cb(&[(b, b), (a, a)]),
        },
        Lemma {
            id: "cb-commute",
            relation: "[C(Q) B(Q), C(N+Q) B(N+Q)] = 0",
            lhs: cb(&[(a, a), (b, b)]),
            coeff: 1,
            rhs: cb(&[(b, b), (a, a)]),
        },
        Lemma {
            id: "xm-square-a",
            relation: "(x-)^2 = 2 C(Q) B(Q) C(Q) B(2N+Q)",
            lhs: cat(vec![xm(), xm()]),
            coeff: 2,
            rhs: cb(&[(a, a), (a, c)]),
        },
        Lemma {
            id: "xm-square-b",
            relation: "(x-)^2 = 2 C(Q) B(2N+Q) C(Q) B(Q)",
            lhs: cat(vec![xm(), xm()]),
            coeff: 2,
            rhs: cb(&[(a, c), (a, a)]),
        },
        Lemma {
            id: "cbcb-swap",
            relation: "C(Q) B(Q) C(Q) B(2N+Q) = C(Q) B(2N+Q) C(Q) B(Q)",
            lhs: cb(&[(a, a), (a, c)]),
            coeff: 1,
            rhs: cb(&[(a, c), (a, a)]),
        },
        Lemma {
            id: "xpxm3-split",
            relation: "x+ (x-)^3 = 2 C(Q) B(Q) C(N+Q) B(N+Q) C(Q) B(Q) C(Q) B(Q) B(2N)",
            lhs: cat(vec![xp(), xm(), xm(), xm()]),
            coeff: 2,
            rhs: cat(vec![cb(&[(a, a), (b, b), (a, a), (a, a)]), word(&[(B1, 2 * big_n)])]),
        },
        Lemma {
            id: "xpxm3",
            relation: "x+ (x-)^3 = 6 C(Q) B(Q) C(Q) B(Q) C(Q) B(Q) C(N+Q) B(3N+Q)",
            lhs: cat(vec![xp(), xm(), xm(), xm()]),
            coeff: 6,
            rhs: cb(&[(a, a), (a, a), (a, a), (b, d)]),
        },
        Lemma {
            id: "xmxpxm2-a",
            relation: "x- x+ (x-)^2 = 2 C(Q) B(Q) C(Q) B(N+Q) C(N+Q) B(Q) C(Q) B(2N+Q)",
            lhs: cat(vec![xm(), xp(), xm(), xm()]),
            coeff: 2,
            rhs: cb(&[(a, a), (a, b), (b, a), (a, c)]),
        },
        Lemma {
            id: "xmxpxm2-b",
            relation: "x- x+ (x-)^2 = 2 C(Q) B(Q) C(Q) B(Q) C(Q) B(N+Q) C(N+Q) B(2N+Q)",
            lhs: cat(vec![xm(), xp(), xm(), xm()]),
            coeff: 2,
            rhs: cb(&[(a, a), (a, a), (a, b), (b, c)]),
        },
        Lemma {
            id: "xm2xpxm",
            relation: "(x-)^2 x+ x- = 2 C(Q) B(Q) C(Q) B(Q) C(Q) B(2N+Q) C(N+Q) B(N+Q)",
            lhs: cat(vec![xm(), xm(), xp(), xm()]),
            coeff: 2,
            rhs: cb(&[(a, a), (a, a), (a, c), (b, b)]),
        },
        Lemma {
            id: "xm3xp",
            relation: "(x-)^3 x+ = 6 C(Q) B(Q) C(Q) B(Q) C(Q) B(3N+Q) C(N+Q) B(Q)",
            lhs: cat(vec![xm(), xm(), xm(), xp()]),
            coeff: 6,
            rhs: cb(&[(a, a), (a, a), (a, d), (b, a)]),
        },
        Lemma {
            id: "xmxp3",
            relation: "x- (x+)^3 = 6 C(Q) B(N+Q) C(3N+Q) B(Q) C(Q) B(Q) C(Q) B(Q)",
            lhs: cat(vec![xm(), xp(), xp(), xp()]),
            coeff: 6,
            rhs: cb(&[(a, b), (d, a), (a, a), (a, a)]),
        },
        Lemma {
            id: "xpxmxp2",
            relation: "x+ x- (x+)^2 = 2 C(N+Q) B(N+Q) C(2N+Q) B(Q) C(Q) B(Q) C(Q) B(Q)",
            lhs: cat(vec![xp(), xm(), xp(), xp()]),
            coeff: 2,
            rhs: cb(&[(b, b), (c, a), (a, a), (a, a)]),
        },
        Lemma {
            id: "xp2xmxp",
            relation: "(x+)^2 x- x+ = 2 C(2N+Q) B(N+Q) C(N+Q) B(Q) C(Q) B(Q) C(Q) B(Q)",
            lhs: cat(vec![xp(), xp(), xm(), xp()]),
            coeff: 2,
            rhs: cb(&[(c, b), (b, a), (a, a), (a, a)]),
        },
        Lemma {
            id: "xp3xm",
            relation: "(x+)^3 x- = 6 C(3N+Q) B(N+Q) C(Q) B(Q) C(Q) B(Q) C(Q) B(Q)",
            lhs: cat(vec![xp(), xp(), xp(), xm()]),
            coeff: 6,
            rhs: cb(&[(d, b), (a, a), (a, a), (a, a)]),
        },
    ]
}

/// `(id, relation)` for every lemma of the chain.
pub fn lemma_relations() -> Vec<(&'static str, &'static str)> {
    lemmas(1, 2).into_iter().map(|l| (l.id, l.relation)).collect()
}

/// Orders `(k, j)` of the `B̄₁` product rule the lemmas rely on.
pub const MULO_CASES: [(u32, u32); 5] = [(0, 1), (1, 1), (0, 2), (1, 2), (2, 1)];

pub fn check_lemma_chain<S: Scalar>(bank: &OperatorBank<S>, q: u32) -> Vec<IdentityCheck> {
    let mut out: Vec<IdentityCheck> = lemmas(q, bank.chain().n())
        .into_iter()
        .map(|l| {
            let check = IdentityCheck::new(l.id, l.relation)
                .param("Q", q)
                .param("coefficient", l.coeff);
            let terms = vec![
                WordTerm::plus(l.lhs),
                WordTerm::new(LaurentPoly::constant(Int::from(-l.coeff)), l.rhs),
            ];
            run_words(bank, check, Ok(terms))
        })
        .collect();
    out.extend(MULO_CASES.iter().map(|&(k, j)| check_mulo(bank, k, j, q)));
    out
}

/// The bracket multiplying `6 (C̄₀^(Q) B̄₁^(Q))² C̄₀^(Q)` after the
/// nested commutator is reduced, with signs as printed (`+ − − +`) or as
/// they follow from the lemmas (`+ − + −`).
pub fn reduced_bracket_terms(q: u32, big_n: u32, printed: bool) -> Vec<WordTerm> {
    let (a, b, c, d) = (q, big_n + q, 2 * big_n + q, 3 * big_n + q);
    let prefix = word(&[(C0, a), (B1, a), (C0, a), (B1, a), (C0, a)]);
    let signs: [i64; 4] = if printed { [1, -1, -1, 1] } else { [1, -1, 1, -1] };
    [(a, d), (b, c), (c, b), (d, a)]
        .iter()
        .zip(signs)
        .map(|(&(x, y), s)| {
            let w = [prefix.clone(), word(&[(B1, x), (C0, b), (B1, y)])].concat();
            WordTerm::new(LaurentPoly::constant(Int::from(6 * s)), w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::Status;
    use crate::qcomb::cyclo::{CycloElem, CycloRing};
    use crate::repchain::chain::ChainContext;
    use crate::repchain::site::{build_site_rep, SiteKind};
    use crate::scalar::RingMode;
    use crate::serre::eval_words;

    fn root(n: u32, l: usize) -> OperatorBank<CycloElem> {
        let chain = ChainContext::new(build_site_rep(SiteKind::SpinHalf, n, None).unwrap(), l).unwrap();
        OperatorBank::new(chain, RingMode::Cyclotomic, CycloRing::get(n), Default::default())
    }

    #[test]
    fn nested_coefficients_come_from_expansion() {
        let g = LoopGenerators::new(1, 2);
        let (terms, coeffs) = NestedRelation::XMinus.terms(&g);
        assert_eq!(coeffs.iter().map(|c| c.abs()).sum::<i64>(), 8);
        assert_eq!(terms.len(), 4);
        // the x⁺(x⁻)³ word carries +1
        let xp_first = [g.x_plus.clone(), g.x_minus.repeat(3)].concat();
        let t = terms.iter().find(|t| t.word == xp_first).unwrap();
        assert!(t.coeff.is_one());
    }

    #[test]
    fn lemma_chain_small() {
        let b = root(2, 6);
        for c in check_lemma_chain(&b, 1) {
            assert!(c.passed(), "{c}");
        }
        let b = root(2, 4);
        for c in check_lemma_chain(&b, 0) {
            assert!(c.passed(), "{c}");
        }
    }

    #[test]
    fn loop_generator_q1_nonzero() {
        let b = root(2, 5);
        let ops = LoopGenerators::new(1, 2).operators(&b).unwrap();
        assert!(!ops[0].is_zero());
        let tiny = root(2, 2);
        let ops = LoopGenerators::new(1, 2).operators(&tiny).unwrap();
        assert!(ops[0].is_zero());
    }

    #[test]
    fn nested_q0_small() {
        let b = root(2, 6);
        for fam in [LoopFamily::X, LoopFamily::Xbar] {
            for c in check_serre_nested(&b, 0, fam) {
                assert!(c.status.is_exact_zero(), "{c}");
            }
        }
    }

    #[test]
    fn printed_bracket_signs_do_not_vanish() {
        let b = root(2, 10);
        let printed = eval_words(&b, &reduced_bracket_terms(1, 2, true)).unwrap();
        assert!(matches!(printed.status(), Status::Nonzero { .. }));
        let fixed = eval_words(&b, &reduced_bracket_terms(1, 2, false)).unwrap();
        assert!(fixed.status().is_exact_zero());
    }
}
