//! Site-operator forms of the root-of-unity identities.

use serde::{Deserialize, Serialize};

use crate::bank::{OperatorBank, OpId, B1, BL, C0, CL1};
use crate::check::{timed, IdentityCheck, Status};
use crate::scalar::Scalar;
use crate::serre::higher::{check_bcb, check_bcbc, check_bcn, word, Branch};
use crate::serre::{chain_params, run_words, WordTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `B̄₁`, `C̄₀`.
    #[serde(rename = "one_zero")]
    OneZero,
    /// `B̄_L`, `C̄_{L−1}`.
    #[serde(rename = "L_Lm1")]
    LLm1,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::OneZero, Side::LLm1];

    pub fn name(self) -> &'static str {
        match self {
            Side::OneZero => "one_zero",
            Side::LLm1 => "L_Lm1",
        }
    }

    pub fn b(self) -> OpId {
        match self {
            Side::OneZero => B1,
            Side::LLm1 => BL,
        }
    }

    pub fn c(self) -> OpId {
        match self {
            Side::OneZero => C0,
            Side::LLm1 => CL1,
        }
    }

    /// The `±` branch these operators are dressed versions of.
    pub fn branch(self) -> Branch {
        match self {
            Side::OneZero => Branch::Plus,
            Side::LLm1 => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SiteIdentity {
    Bcn,
    Cbn,
    Bcb,
    Cbc,
    Bcbc,
    Cbcb,
}

impl SiteIdentity {
    pub const ALL: [SiteIdentity; 6] = [
        SiteIdentity::Bcn,
        SiteIdentity::Cbn,
        SiteIdentity::Bcb,
        SiteIdentity::Cbc,
        SiteIdentity::Bcbc,
        SiteIdentity::Cbcb,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SiteIdentity::Bcn => "site-bcn",
            SiteIdentity::Cbn => "site-cbn",
            SiteIdentity::Bcb => "site-bcb",
            SiteIdentity::Cbc => "site-cbc",
            SiteIdentity::Bcbc => "site-bcbc",
            SiteIdentity::Cbcb => "site-cbcb",
        }
    }

    fn swapped(self) -> bool {
        matches!(self, SiteIdentity::Cbn | SiteIdentity::Cbc | SiteIdentity::Cbcb)
    }

    pub fn relation(self) -> &'static str {
        match self {
            SiteIdentity::Bcn => "B^(2N+Q) C^(Q) - B^(N+Q) C^(Q) B^(N) + B^(Q) C^(Q) B^(2N) = 0",
            SiteIdentity::Cbn => "C^(2N+Q) B^(Q) - C^(N+Q) B^(Q) C^(N) + C^(Q) B^(Q) C^(2N) = 0",
            SiteIdentity::Bcb => "B^(N+Q) C^(Q) B^(Q) = B^(Q) C^(Q) B^(N+Q)",
            SiteIdentity::Cbc => "C^(N+Q) B^(Q) C^(Q) = C^(Q) B^(Q) C^(N+Q)",
            SiteIdentity::Bcbc => {
                "B^(3N+Q) C^(N+Q) B^(Q) - B^(2N+Q) C^(N+Q) B^(N+Q) + B^(N+Q) C^(N+Q) B^(2N+Q) - B^(Q) C^(N+Q) B^(3N+Q) = 0"
            }
            SiteIdentity::Cbcb => {
                "C^(3N+Q) B^(N+Q) C^(Q) - C^(2N+Q) B^(N+Q) C^(N+Q) + C^(N+Q) B^(N+Q) C^(2N+Q) - C^(Q) B^(N+Q) C^(3N+Q) = 0"
            }
        }
    }

    pub fn terms(self, side: Side, q: u32, big_n: u32) -> Vec<WordTerm> {
        let (b, c) = if self.swapped() {
            (side.c(), side.b())
        } else {
            (side.b(), side.c())
        };
        let n = big_n;
        match self {
            SiteIdentity::Bcn | SiteIdentity::Cbn => vec![
                WordTerm::plus(word(&[(b, 2 * n + q), (c, q)])),
                WordTerm::minus(word(&[(b, n + q), (c, q), (b, n)])),
                WordTerm::plus(word(&[(b, q), (c, q), (b, 2 * n)])),
            ],
            SiteIdentity::Bcb | SiteIdentity::Cbc => vec![
                WordTerm::plus(word(&[(b, n + q), (c, q), (b, q)])),
                WordTerm::minus(word(&[(b, q), (c, q), (b, n + q)])),
            ],
            SiteIdentity::Bcbc | SiteIdentity::Cbcb => {
                let mid = n + q;
                vec![
                    WordTerm::plus(word(&[(b, 3 * n + q), (c, mid), (b, q)])),
                    WordTerm::minus(word(&[(b, 2 * n + q), (c, mid), (b, mid)])),
                    WordTerm::plus(word(&[(b, mid), (c, mid), (b, 2 * n + q)])),
                    WordTerm::minus(word(&[(b, q), (c, mid), (b, 3 * n + q)])),
                ]
            }
        }
    }

    fn pm_check<S: Scalar>(self, bank: &OperatorBank<S>, branch: Branch, q: u32) -> IdentityCheck {
        let swap = self.swapped();
        match self {
            SiteIdentity::Bcn | SiteIdentity::Cbn => check_bcn(bank, branch, q, swap),
            SiteIdentity::Bcb | SiteIdentity::Cbc => check_bcb(bank, branch, q, swap),
            SiteIdentity::Bcbc | SiteIdentity::Cbcb => check_bcbc(bank, branch, q, swap),
        }
    }
}

pub fn check_site_identity<S: Scalar>(bank: &OperatorBank<S>, ident: SiteIdentity, q: u32, side: Side) -> IdentityCheck {
    let check = IdentityCheck::new(ident.id(), ident.relation())
        .param("Q", q)
        .param("side", side.name());
    run_words(bank, check, Ok(ident.terms(side, q, bank.chain().n())))
}

pub fn check_site_suite<S: Scalar>(bank: &OperatorBank<S>, q: u32, side: Side) -> Vec<IdentityCheck> {
    SiteIdentity::ALL
        .iter()
        .map(|&i| check_site_identity(bank, i, q, side))
        .collect()
}

/// The site form and the `±` form of one identity reach the same status.
pub fn check_site_vs_pm<S: Scalar>(bank: &OperatorBank<S>, ident: SiteIdentity, q: u32, side: Side) -> IdentityCheck {
    timed(|| {
        let site = check_site_identity(bank, ident, q, side);
        let pm = ident.pm_check(bank, side.branch(), q);
        let check = chain_params(
            IdentityCheck::new("site-vs-pm", "site form and +/- form agree in status"),
            bank,
        )
        .param("identity", ident.id())
        .param("Q", q)
        .param("side", side.name())
        .param("site_status", site.status.label())
        .param("pm_status", pm.status.label());
        let status = if site.status.same_kind(&pm.status) && site.passed() {
            site.status.clone()
        } else {
            Status::Error {
                error: "StatusMismatch".into(),
                message: format!("site {} vs +/- {}", site.status.label(), pm.status.label()),
            }
        };
        IdentityCheck {
            nontrivial: site.nontrivial.clone(),
            ..check.with_status(status)
        }
    })
}
