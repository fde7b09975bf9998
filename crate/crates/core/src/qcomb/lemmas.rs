//! Combinatorial lemmas of the root-of-unity derivation, each checked
//! exactly in `ℤ[q]/Φ_{2N}`.

use serde::{Deserialize, Serialize};

use crate::check::{scalar_status, timed, IdentityCheck, Status};
use crate::error::{Error, Result};
use crate::int::{binomial, Int};
use crate::qcomb::cyclo::{CycloElem, CycloRing};
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::phiadic::phi_valuation;
use crate::qcomb::qnum::{gauss_binomial, omega_factorial, q_factorial, Flavor};

/// Which range of `ℓ` the alternating `f`-combination sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CBranch {
    /// `ℓ = 0..N−1`, used when `m − 2n ≥ N`.
    Full,
    /// `ℓ = 0..m−2n−1`, used when `1 ≤ m − 2n ≤ N − 1`.
    Truncated,
}

fn sign(e: i64) -> Int {
    if e.rem_euclid(2) == 0 {
        Int::ONE
    } else {
        Int::from(-1)
    }
}

fn signed_q_pow(sign_exp: i64, q_exp: i64) -> LaurentPoly {
    LaurentPoly::monomial(sign(sign_exp), q_exp as i32)
}

fn compare(ring: &'static CycloRing, lhs: &LaurentPoly, rhs: &LaurentPoly) -> Status {
    let l = ring.reduce(lhs);
    let r = ring.reduce(rhs);
    let diff = l.sub(&r);
    scalar_status(diff.is_zero(), !l.is_zero() || !r.is_zero(), diff.to_string())
}

/// `[n]_q! = q^{−n(n−1)/2} [n]!` in `ℤ[q]/Φ_{2N}`.
pub fn check_q_omega_factorial_relation(n: u32, big_n: u32) -> IdentityCheck {
    timed(|| {
        let ring = CycloRing::get(big_n);
        let lhs = q_factorial(n);
        let shift = -((n as i64 * (n as i64 - 1)) / 2);
        let rhs = omega_factorial(n).shift(shift as i32);
        // also holds before specialization
        let generic = lhs == rhs;
        let mut status = compare(ring, &lhs, &rhs);
        if !generic && status.is_pass() {
            status = Status::Error {
                error: "InternalInconsistency".into(),
                message: "relation fails at generic q".into(),
            };
        }
        IdentityCheck::new("q-omega-factorial", "[n]_q! = q^{-n(n-1)/2} [n]!")
            .param("N", big_n)
            .param("n", n)
            .with_status(status)
    })
}

/// `[kN+p choose ℓ]_q = q^{kNℓ} [p choose ℓ]_q` at `q^{2N} = 1`, for `0 ≤ ℓ ≤ N−1`.
pub fn check_gauss_periodicity(k: u32, p: u32, l: u32, big_n: u32) -> Result<IdentityCheck> {
    if p >= big_n {
        return Err(Error::InvalidParams(format!("need p < N, got p={p}, N={big_n}")));
    }
    Ok(timed(|| {
        let ring = CycloRing::get(big_n);
        let lhs = gauss_binomial(k * big_n + p, l as i64, Flavor::Q);
        let rhs = gauss_binomial(p, l as i64, Flavor::Q).shift((k * big_n * l) as i32);
        IdentityCheck::new(
            "gauss-periodicity",
            "[kN+p choose l]_q = q^{kNl} [p choose l]_q",
        )
        .param("N", big_n)
        .param("k", k)
        .param("p", p)
        .param("l", l)
        .with_status(compare(ring, &lhs, &rhs))
    }))
}

/// `Σ_{ℓ=0}^{p} (−1)^ℓ q^{ℓ(1−p)} [p choose ℓ]_q = δ_{p,0}`.
pub fn alternating_sum(p: u32) -> LaurentPoly {
    (0..=p).fold(LaurentPoly::zero(), |acc, l| {
        let t = &signed_q_pow(l as i64, l as i64 * (1 - p as i64))
            * &gauss_binomial(p, l as i64, Flavor::Q);
        &acc + &t
    })
}

pub fn check_alternating_sum(p: u32, big_n: u32) -> IdentityCheck {
    timed(|| {
        let ring = CycloRing::get(big_n);
        let lhs = alternating_sum(p);
        let rhs = if p == 0 {
            LaurentPoly::one()
        } else {
            LaurentPoly::zero()
        };
        IdentityCheck::new(
            "alternating-sum",
            "sum_l (-1)^l q^{l(1-p)} [p choose l]_q = delta_{p,0}",
        )
        .param("N", big_n)
        .param("p", p)
        .with_status(compare(ring, &lhs, &rhs))
    })
}

/// `[kN+N+p−d choose N−d]_q = 0` at the root of unity, where `d = m − 2n`
/// and `d ≤ p ≤ N−1`. Also demands the binomial is nonzero at generic `q`.
pub fn check_vanishing_wrap(p: u32, n: u32, m: u32, big_n: u32, k: u32) -> Result<IdentityCheck> {
    let d = m as i64 - 2 * n as i64;
    if d < 1 || d > big_n as i64 - 1 || (p as i64) < d || p >= big_n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= m-2n <= p <= N-1, got m-2n={d}, p={p}, N={big_n}"
        )));
    }
    let d = d as u32;
    Ok(timed(|| {
        let ring = CycloRing::get(big_n);
        let top = k * big_n + big_n + p - d;
        let bin = gauss_binomial(top, (big_n - d) as i64, Flavor::Q);
        let reduced = ring.reduce(&bin);
        let status = if bin.is_zero() {
            Status::VacuousZero
        } else if reduced.is_zero() {
            Status::ExactZero
        } else {
            scalar_status(false, true, reduced.to_string())
        };
        IdentityCheck::new("vanishing-wrap", "[kN+N+p-m+2n choose N-m+2n]_q = 0")
            .param("N", big_n)
            .param("k", k)
            .param("p", p)
            .param("n", n)
            .param("m", m)
            .with_status(status)
    }))
}

/// The coefficient `c_s` of `θᵢ^{(m−s)} θⱼ^{(n)} θᵢ^{(s)}` in the alternating
/// combination `g`, summed directly (no closed form).
pub fn c_coefficient_poly(s: u32, n: u32, m: u32, big_n: u32, branch: CBranch) -> LaurentPoly {
    let upper = match branch {
        CBranch::Full => big_n as i64 - 1,
        CBranch::Truncated => m as i64 - 2 * n as i64 - 1,
    };
    let (s_i, n_i, m_i) = (s as i64, n as i64, m as i64);
    let mut acc = LaurentPoly::zero();
    for l in 0..=upper {
        let t = &signed_q_pow(l + m_i - s_i, l * (1 - s_i) + (m_i - s_i) * (2 * n_i - m_i + 1))
            * &gauss_binomial(s, l, Flavor::Q);
        acc = &acc + &t;
    }
    acc
}

pub fn c_coefficient(
    s: u32,
    n: u32,
    m: u32,
    big_n: u32,
    branch: CBranch,
) -> Result<CycloElem> {
    if s > m {
        return Err(Error::InvalidParams(format!("need s <= m, got s={s}, m={m}")));
    }
    Ok(CycloRing::get(big_n).reduce(&c_coefficient_poly(s, n, m, big_n, branch)))
}

/// Closed form of the full-branch coefficient at the root of unity:
/// `(−1)^{m−kN−p} q^{(m−kN−p)(2n−m+1)} δ_{p,0}` for `s = kN + p`.
pub fn c_closed_form(s: u32, n: u32, m: u32, big_n: u32) -> CycloElem {
    let ring = CycloRing::get(big_n);
    if s % big_n != 0 {
        return ring.zero();
    }
    let e = m as i64 - s as i64;
    ring.reduce(&signed_q_pow(e, e * (2 * n as i64 - m as i64 + 1)))
}

pub fn check_c_closed_form(s: u32, n: u32, m: u32, big_n: u32) -> Result<IdentityCheck> {
    let direct = c_coefficient(s, n, m, big_n, CBranch::Full)?;
    Ok(timed(|| {
        let closed = c_closed_form(s, n, m, big_n);
        let diff = direct.sub(&closed);
        IdentityCheck::new(
            "c-closed-form",
            "c_{kN+p} = (-1)^{m-kN-p} q^{(m-kN-p)(2n-m+1)} delta_{p,0}",
        )
        .param("N", big_n)
        .param("s", s)
        .param("n", n)
        .param("m", m)
        .with_status(scalar_status(
            diff.is_zero(),
            !direct.is_zero() || !closed.is_zero(),
            diff.to_string(),
        ))
    }))
}

/// `[(k+j)N+Q choose kN+Q]_ω = binomial(k+j, k)` at the root of unity.
pub fn check_omega_lucas(k: u32, j: u32, q_sector: u32, big_n: u32) -> Result<IdentityCheck> {
    if q_sector >= big_n {
        return Err(Error::InvalidParams(format!("need Q < N, got Q={q_sector}, N={big_n}")));
    }
    Ok(timed(|| {
        let ring = CycloRing::get(big_n);
        let a = (k + j) * big_n + q_sector;
        let b = k * big_n + q_sector;
        let lhs = gauss_binomial(a, b as i64, Flavor::Omega);
        let rhs = LaurentPoly::constant(binomial((k + j) as u64, k as u64));
        IdentityCheck::new("omega-lucas", "[(k+j)N+Q choose kN+Q]_w = binomial(k+j, k)")
            .param("N", big_n)
            .param("k", k)
            .param("j", j)
            .param("Q", q_sector)
            .with_status(compare(ring, &lhs, &rhs))
    }))
}

/// The `Φ_{2N}`-valuation of `[n]_q!` is `⌊n/N⌋`.
pub fn check_factorial_valuation(n: u32, big_n: u32) -> IdentityCheck {
    timed(|| {
        let v = phi_valuation(&q_factorial(n), big_n).unwrap_or(u32::MAX);
        let expected = n / big_n;
        IdentityCheck::new("factorial-valuation", "val_{Phi_2N}([n]_q!) = floor(n/N)")
            .param("N", big_n)
            .param("n", n)
            .param("valuation", v)
            .with_status(scalar_status(
                v == expected,
                true,
                format!("valuation {v}, expected {expected}"),
            ))
    })
}

/// The combinatorial suite for one `N`: every lemma over its admissible range
/// with `s ≤ 4N`.
pub fn qcomb_suite(big_n: u32) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let s_max = 4 * big_n;
    for n in 0..=s_max.max(20) {
        out.push(check_q_omega_factorial_relation(n, big_n));
    }
    for n in 0..=s_max {
        out.push(check_factorial_valuation(n, big_n));
    }
    for s in 0..=s_max {
        let (k, p) = (s / big_n, s % big_n);
        for l in 0..=s.min(big_n - 1) {
            out.push(check_gauss_periodicity(k, p, l, big_n).expect("p < N"));
        }
    }
    for p in 0..big_n {
        out.push(check_alternating_sum(p, big_n));
    }
    for d in 1..big_n {
        for p in d..big_n {
            for k in 0..=3 {
                // any (n, m) with m − 2n = d
                out.push(check_vanishing_wrap(p, 0, d, big_n, k).expect("admissible"));
            }
        }
    }
    for q_sector in 0..big_n {
        for k in 0..=3 {
            for j in 0..=3 {
                if (k + j) * big_n + q_sector <= s_max {
                    out.push(check_omega_lucas(k, j, q_sector, big_n).expect("Q < N"));
                }
            }
        }
    }
    for n in 0..=2 {
        for m in (2 * n + big_n)..=(2 * n + big_n + 3) {
            for s in 0..=m {
                out.push(check_c_closed_form(s, n, m, big_n).expect("s <= m"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Int::from(c))))
    }

    #[test]
    fn factorial_relation_examples() {
        assert!(check_q_omega_factorial_relation(1, 5).status.is_exact_zero());
        assert!(check_q_omega_factorial_relation(2, 3).status.is_exact_zero());
        // n = N: both sides vanish at the root of unity
        let c = check_q_omega_factorial_relation(3, 3);
        assert_eq!(c.status, Status::VacuousZero);
        for n in 0..=20 {
            for big_n in 2..=6 {
                assert!(check_q_omega_factorial_relation(n, big_n).passed());
            }
        }
    }

    #[test]
    fn valuation_of_factorials() {
        for big_n in 2..=5 {
            for n in 0..=4 * big_n {
                assert!(check_factorial_valuation(n, big_n).status.is_exact_zero());
            }
        }
    }

    #[test]
    fn periodicity_examples() {
        assert!(check_gauss_periodicity(0, 2, 1, 3).unwrap().status.is_exact_zero());
        // [3 choose 1]_q = q² + 1 + q⁻² ≡ −1 and q² ≡ −1 mod Φ₄
        let r = CycloRing::get(2);
        assert_eq!(
            r.reduce(&gauss_binomial(3, 1, Flavor::Q)),
            r.from_int(Int::from(-1))
        );
        assert!(check_gauss_periodicity(1, 1, 1, 2).unwrap().status.is_exact_zero());
        assert!(check_gauss_periodicity(1, 1, 1, 3).unwrap().status.is_exact_zero());
    }

    #[test]
    fn periodicity_needs_small_lower_index() {
        // ℓ = N is outside the lemma's range: [2 choose 2] = 1 but [0 choose 2] = 0
        let c = check_gauss_periodicity(1, 0, 2, 2).unwrap();
        assert!(matches!(c.status, Status::Nonzero { .. }));
    }

    #[test]
    fn alternating_sum_examples() {
        assert_eq!(alternating_sum(0), LaurentPoly::one());
        assert!(alternating_sum(1).is_zero());
        // 1 − q⁻¹(q + q⁻¹) + q⁻² = 0 already at generic q
        assert!(alternating_sum(2).is_zero());
        for p in 0..6 {
            assert!(check_alternating_sum(p, 6).passed());
        }
    }

    #[test]
    fn vanishing_wrap_examples() {
        let c = check_vanishing_wrap(1, 0, 1, 2, 0).unwrap();
        assert!(c.status.is_exact_zero());
        assert_eq!(gauss_binomial(2, 1, Flavor::Q), lp(&[(1, 1), (-1, 1)]));
        assert!(check_vanishing_wrap(2, 1, 3, 3, 1).unwrap().status.is_exact_zero());
        assert!(check_vanishing_wrap(0, 1, 2, 3, 0).is_err());
    }

    #[test]
    fn c_coefficient_examples() {
        let r = CycloRing::get(2);
        let c = c_coefficient(0, 1, 3, 2, CBranch::Full).unwrap();
        assert_eq!(c, r.from_int(Int::from(-1)));
        assert_eq!(c, c_closed_form(0, 1, 3, 2));
        assert!(c_coefficient(1, 1, 5, 2, CBranch::Full).unwrap().is_zero());
        // truncated branch at (s=1, n=1, m=3): only ℓ = 0 → (−1)^{2} q^{2·0}
        let t = c_coefficient(1, 1, 3, 2, CBranch::Truncated).unwrap();
        assert_eq!(t, r.one());
        assert!(c_coefficient(4, 1, 3, 2, CBranch::Full).is_err());
    }

    #[test]
    fn omega_lucas_examples() {
        assert!(check_omega_lucas(0, 0, 1, 3).unwrap().status.is_exact_zero());
        let r = CycloRing::get(2);
        assert_eq!(
            r.reduce(&gauss_binomial(5, 3, Flavor::Omega)),
            r.from_int(Int::from(2))
        );
        assert!(check_omega_lucas(1, 1, 1, 2).unwrap().status.is_exact_zero());
        assert_eq!(
            CycloRing::get(3).reduce(&gauss_binomial(11, 5, Flavor::Omega)),
            CycloRing::get(3).from_int(Int::from(3))
        );
        assert!(check_omega_lucas(1, 2, 2, 3).unwrap().status.is_exact_zero());
    }

    #[test]
    fn full_suite_small_n() {
        for big_n in 2..=4 {
            for c in qcomb_suite(big_n) {
                assert!(c.passed(), "{c}");
            }
        }
    }
}
