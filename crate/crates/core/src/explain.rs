//! Descriptions of every check id.

use std::fmt;

use crate::error::{Error, Result};
use crate::serre::loops::{lemma_relations, LoopFamily};
use crate::serre::site::SiteIdentity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub id: String,
    pub suite: &'static str,
    pub formula: String,
    pub about: &'static str,
    pub regime: &'static str,
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (suite {})", self.id, self.suite)?;
        writeln!(f, "  formula: {}", self.formula)?;
        writeln!(f, "  about:   {}", self.about)?;
        write!(f, "  regime:  {}", self.regime)
    }
}

type Row = (&'static str, &'static str, &'static str, &'static str, &'static str);

const TABLE: &[Row] = &[
    (
        "q-omega-factorial",
        "qcomb",
        "[n]_q! = q^{-n(n-1)/2} [n]!",
        "relates the symmetric and omega factorials; both vanish once n >= N",
        "n >= 0, any N >= 2",
    ),
    (
        "factorial-valuation",
        "qcomb",
        "val_{Phi_2N}([n]_q!) = floor(n/N)",
        "multiplicity of the cyclotomic factor in the q-factorial; sizes the phi-adic truncation",
        "n <= 4N",
    ),
    (
        "gauss-periodicity",
        "qcomb",
        "[kN+p choose l]_q = q^{kNl} [p choose l]_q",
        "Gaussian binomials are periodic in the top index at q^{2N} = 1",
        "0 <= p <= N-1, l <= N-1",
    ),
    (
        "alternating-sum",
        "qcomb",
        "sum_l (-1)^l q^{l(1-p)} [p choose l]_q = delta_{p,0}",
        "signed q-binomial sum, exact at generic q",
        "0 <= p <= N-1",
    ),
    (
        "vanishing-wrap",
        "qcomb",
        "[kN+N+p-d choose N-d]_q = 0 with d = m-2n",
        "the binomial that kills the wrapped terms of the short-gap identity",
        "1 <= d <= p <= N-1",
    ),
    (
        "c-closed-form",
        "qcomb",
        "c_s(n, m) = closed form",
        "coefficients of the rewritten f-combination, compared to their closed form",
        "m - 2n >= N",
    ),
    (
        "omega-lucas",
        "qcomb",
        "[(k+j)N+Q choose kN+Q]_w = binomial(k+j, k)",
        "omega binomials at the root of unity reduce to ordinary binomials",
        "0 <= Q <= N-1",
    ),
    (
        "site-k-e",
        "rep-gate",
        "k' e' k'^-1 = q^2 e'",
        "single-site Chevalley relation",
        "generic q and root of unity",
    ),
    (
        "site-k-f",
        "rep-gate",
        "k' f' k'^-1 = q^-2 f'",
        "single-site Chevalley relation",
        "generic q and root of unity",
    ),
    (
        "site-e-f",
        "rep-gate",
        "[e', f'] = (k' - k'^-1)/(q - q^-1)",
        "single-site Chevalley relation",
        "generic q and root of unity",
    ),
    (
        "site-z-e",
        "rep-gate",
        "Z e' Z^-1 = w^-1 e'",
        "clock grading of the raising matrix",
        "generic q and root of unity",
    ),
    (
        "site-z-f",
        "rep-gate",
        "Z f' Z^-1 = w f'",
        "clock grading of the lowering matrix",
        "generic q and root of unity",
    ),
    (
        "site-z-order",
        "rep-gate",
        "Z^N = 1",
        "the clock matrix has order N",
        "root of unity",
    ),
    (
        "site-k-vs-z",
        "rep-gate",
        "k' = s q^-1 Z^-1 with s = +1 or -1",
        "records which sign ties the Cartan matrix to the clock matrix",
        "backend dependent",
    ),
    ("chain-k-e0", "rep-gate", "K E0 K^-1 = q^-2 E0", "chain Chevalley relation", "any L"),
    ("chain-k-e1", "rep-gate", "K E1 K^-1 = q^2 E1", "chain Chevalley relation", "any L"),
    ("chain-k-f0", "rep-gate", "K F0 K^-1 = q^2 F0", "chain Chevalley relation", "any L"),
    ("chain-k-f1", "rep-gate", "K F1 K^-1 = q^-2 F1", "chain Chevalley relation", "any L"),
    (
        "chain-e1-f1",
        "rep-gate",
        "[E1, F1] = (K - K^-1)/(q - q^-1)",
        "chain Chevalley relation",
        "any L",
    ),
    (
        "chain-e0-f0",
        "rep-gate",
        "[E0, F0] = (K^-1 - K)/(q - q^-1)",
        "chain Chevalley relation",
        "any L",
    ),
    ("chain-e1-f0", "rep-gate", "[E1, F0] = 0", "chain Chevalley relation", "any L"),
    ("chain-e0-f1", "rep-gate", "[E0, F1] = 0", "chain Chevalley relation", "any L"),
    (
        "chain-grading",
        "rep-gate",
        "A_L X A_L^-1 = w^c X",
        "every generator shifts the charge sector by its charge c",
        "any L",
    ),
    (
        "half-commutation",
        "barred",
        "X A_L^-1/2 = q A_L^-1/2 X (B type), A_L^-1/2 X = q X A_L^-1/2 (C type)",
        "site-labeled operators commute with the half power of A_L up to q",
        "root of unity; fails on backends whose clock wraps",
    ),
    (
        "power-factorial",
        "divpow",
        "X^(n) [n]_q! = X^n",
        "divided powers multiply back to plain powers",
        "generic q",
    ),
    (
        "divpow-audit",
        "divpow",
        "iterative X^(n) = X^n / [n]!",
        "the incremental divided-power recursion matches direct division",
        "generic q",
    ),
    (
        "dual-route",
        "divpow",
        "X^(n) via Laurent = X^(n) via phi-adic",
        "both symbolic routes to a root-of-unity divided power agree",
        "root of unity",
    ),
    (
        "norm-ratio",
        "divpow",
        "X^(n)_q = q^(n(n-1)/2) X^(n)_omega",
        "the two factorial normalizations differ by a power of q",
        "any ring",
    ),
    (
        "nilpotency",
        "divpow",
        "X^(L+1) = 0",
        "divided powers beyond the chain length vanish; X^(L) is recorded as nonzero",
        "any L",
    ),
    (
        "mulo",
        "divpow",
        "B1^(kN+Q) B1^(jN) = binom(k+j, k) B1^((k+j)N+Q)",
        "product rule for site-labeled divided powers at the root of unity",
        "0 <= Q <= N-1",
    ),
    (
        "cross-normalization",
        "divpow",
        "C-^(n) = (-1)^n A^(-n/2) C_(L-1)^(n), B-^(n) = B_L^(n) A^(-n/2), C+^(n) = (-1)^n q^(n(1-L)) A^(-n/2) C_0^(n), B+^(n) = q^(n(1-L)) B_1^(n) A^(-n/2)",
        "divided powers of the global generators in terms of the site-labeled ones",
        "root of unity, n >= 0",
    ),
    (
        "higher-serre",
        "id1",
        "f_{n,m} = sum_{r+s=m} (-1)^r q^{r(2n-m+1)} X_i^(r) X_j^(n) X_i^(s) = 0",
        "higher-order quantum Serre relation for a pair of raising or lowering generators",
        "m > 2n; pairs (E0,E1), (E1,E0), (F1,F0), (F0,F1)",
    ),
    (
        "g-forms",
        "id1",
        "sum_l (-1)^l q^{l(1-m)} f_{n,m-l} X_i^(l) = sum_s c_s X_i^(m-s) X_j^(n) X_i^(s)",
        "the alternating f-combination equals its rewritten sum; branch full or truncated",
        "full for m-2n >= N, truncated for 1 <= m-2n <= N-1",
    ),
    (
        "id1",
        "id1",
        "X_i^(m) X_j^(n) + sum_{k>=1} (-1)^{k(N+m-1)} X_i^(m-kN) X_j^(n) X_i^(kN) = 0",
        "long-gap root-of-unity identity",
        "m - 2n >= N",
    ),
    (
        "id2",
        "id2",
        "sum_k (-1)^k X_i^(m-kN) X_j^(n) X_i^(kN+N-m+2n) = 0",
        "short-gap root-of-unity identity",
        "1 <= m - 2n <= N-1",
    ),
    (
        "regime",
        "id1",
        "m > 2n",
        "dispatches to id1 or id2",
        "m > 2n",
    ),
    (
        "wrap-product-vanishing",
        "id2",
        "X^(kN+p) X^(N-m+2n) = 0",
        "products that the short-gap identity drops",
        "1 <= m-2n <= p <= N-1",
    ),
    (
        "bcn",
        "id1",
        "B^(2N+Q) C^(Q) + (-1)^(N+Q-1) B^(N+Q) C^(Q) B^(N) + B^(Q) C^(Q) B^(2N) = 0",
        "three-term identity for the +/- operators; cross-checked against id1",
        "0 <= Q <= N-1",
    ),
    (
        "cbn",
        "id1",
        "C^(2N+Q) B^(Q) + (-1)^(N+Q-1) C^(N+Q) B^(Q) C^(N) + C^(Q) B^(Q) C^(2N) = 0",
        "mirror of bcn",
        "0 <= Q <= N-1",
    ),
    (
        "bcb",
        "id2",
        "B^(N+Q) C^(Q) B^(Q) = B^(Q) C^(Q) B^(N+Q)",
        "two-term identity; cross-checked against id2 when Q >= 1",
        "0 <= Q <= N-1",
    ),
    (
        "cbc",
        "id2",
        "C^(N+Q) B^(Q) C^(Q) = C^(Q) B^(Q) C^(N+Q)",
        "mirror of bcb",
        "0 <= Q <= N-1",
    ),
    (
        "bcbc",
        "id2",
        "B^(3N+Q) C^(N+Q) B^(Q) - B^(2N+Q) C^(N+Q) B^(N+Q) + B^(N+Q) C^(N+Q) B^(2N+Q) - B^(Q) C^(N+Q) B^(3N+Q) = 0",
        "four-term identity; cross-checked against id2 when Q >= 1",
        "0 <= Q <= N-1",
    ),
    (
        "cbcb",
        "id2",
        "C^(3N+Q) B^(N+Q) C^(Q) - C^(2N+Q) B^(N+Q) C^(N+Q) + C^(N+Q) B^(N+Q) C^(2N+Q) - C^(Q) B^(N+Q) C^(3N+Q) = 0",
        "mirror of bcbc",
        "0 <= Q <= N-1",
    ),
    (
        "site-vs-pm",
        "site",
        "status(site form) = status(+/- form)",
        "the site-operator and +/- versions of one identity agree",
        "0 <= Q <= N-1",
    ),
];

fn site_row(i: SiteIdentity) -> Explanation {
    Explanation {
        id: i.id().into(),
        suite: "site",
        formula: i.relation().into(),
        about: "identity for the site-labeled operators B_1, C_0 or B_L, C_(L-1)",
        regime: "0 <= Q <= N-1, both sides",
    }
}

/// Every known id, in table order.
pub fn all() -> Vec<Explanation> {
    let mut out: Vec<Explanation> = TABLE
        .iter()
        .map(|&(id, suite, formula, about, regime)| Explanation {
            id: id.into(),
            suite,
            formula: formula.into(),
            about,
            regime,
        })
        .collect();
    out.extend(SiteIdentity::ALL.into_iter().map(site_row));
    for (id, rel) in lemma_relations() {
        out.push(Explanation {
            id: id.into(),
            suite: "lemmas",
            formula: rel.into(),
            about: "step of the lemma chain behind the nested relation; coefficients 2 and 6 are exact",
            regime: "root of unity, 0 <= Q <= N-1",
        });
    }
    for family in [LoopFamily::X, LoopFamily::Xbar] {
        for rel in family.relations() {
            out.push(Explanation {
                id: rel.id().into(),
                suite: "serre-nested",
                formula: rel.relation().into(),
                about: "nested Serre relation for the loop generators, expanded with coefficients 1, -3, 3, -1",
                regime: "root of unity, 0 <= Q <= N-1",
            });
        }
    }
    out
}

pub fn explain(id: &str) -> Result<Explanation> {
    all()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_and_unknown() {
        let e = explain("id1").unwrap();
        assert!(e.formula.contains("X_i^(m)"));
        assert!(explain("mulo").unwrap().formula.contains("binom"));
        assert!(matches!(explain("bogus"), Err(Error::UnknownId(_))));
    }

    #[test]
    fn ids_are_unique() {
        let all = all();
        let mut ids: Vec<_> = all.iter().map(|e| e.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), all.len());
    }
}
