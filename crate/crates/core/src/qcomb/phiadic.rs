//! Truncated Φ-adic expansions `Σ_{i<=K} a_i Φ_{2N}(q)^i`.
//!
//! Divided powers divide by `[n]_q!`, which vanishes to order `⌊n/N⌋` at the
//! root of unity. Carrying the expansion to order `K` lets such divisions be
//! carried out exactly and specialized afterwards.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::int::Int;
use crate::qcomb::cyclo::{CycloElem, CycloRing};
use crate::qcomb::laurent::LaurentPoly;

/// Ring context: `ℤ[q]/Φ_{2N}^{K+1}`.
pub struct PhiAdicRing {
    cyclo: &'static CycloRing,
    trunc: usize,
    q_inv: OnceLock<PhiAdicElem>,
}

impl PhiAdicRing {
    pub fn get(n: u32, trunc: usize) -> &'static PhiAdicRing {
        static REGISTRY: OnceLock<Mutex<HashMap<(u32, usize), &'static PhiAdicRing>>> =
            OnceLock::new();
        let reg = REGISTRY.get_or_init(Default::default);
        let mut map = reg.lock().unwrap();
        *map.entry((n, trunc)).or_insert_with(|| {
            Box::leak(Box::new(PhiAdicRing {
                cyclo: CycloRing::get(n),
                trunc,
                q_inv: OnceLock::new(),
            }))
        })
    }

    /// Default truncation for a suite whose largest divided-power order is
    /// `n_max`: the valuation `⌊n_max/N⌋` plus a margin of two digits.
    pub fn default_trunc(n: u32, n_max: u32) -> usize {
        (n_max / n) as usize + 2
    }

    pub fn cyclo(&self) -> &'static CycloRing {
        self.cyclo
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    fn digits_len(&self) -> usize {
        self.trunc + 1
    }

    pub fn zero(&'static self) -> PhiAdicElem {
        PhiAdicElem {
            ring: self,
            terms: vec![self.cyclo.zero(); self.digits_len()],
            prec: self.digits_len(),
        }
    }

    pub fn one(&'static self) -> PhiAdicElem {
        self.from_int(Int::ONE)
    }

    pub fn from_int(&'static self, c: Int) -> PhiAdicElem {
        let mut z = self.zero();
        z.terms[0] = self.cyclo.from_int(c);
        z
    }

    /// Expansion of a polynomial in `ℤ[q]` (dense, lowest degree first).
    fn expand_poly(&'static self, poly: &[Int], prec: usize) -> PhiAdicElem {
        let d = self.cyclo.degree();
        let phi = self.cyclo.phi();
        let mut rest: Vec<Int> = poly.to_vec();
        let mut terms = Vec::with_capacity(self.digits_len());
        for _ in 0..self.digits_len() {
            let (quot, rem) = divmod_monic(&rest, phi);
            let mut digit: Vec<Int> = rem;
            digit.resize(d, Int::ZERO);
            terms.push(CycloElem::from_coords(self.cyclo, digit).expect("digit length"));
            rest = quot;
        }
        PhiAdicElem {
            ring: self,
            terms,
            prec,
        }
    }

    /// The embedding `ℤ[q, q⁻¹] → ℤ[q]/Φ^{K+1}`.
    pub fn embed(&'static self, p: &LaurentPoly) -> PhiAdicElem {
        let (shift, dense) = p.to_dense();
        let base = self.expand_poly(&dense, self.digits_len());
        if shift >= 0 {
            base.mul(&self.q().pow(shift as u32))
        } else {
            base.mul(&self.q_inv().pow((-shift) as u32))
        }
    }

    pub fn q(&'static self) -> PhiAdicElem {
        self.expand_poly(&[Int::ZERO, Int::ONE], self.digits_len())
    }

    pub fn q_inv(&'static self) -> PhiAdicElem {
        self.q_inv
            .get_or_init(|| {
                self.one()
                    .div_exact(&self.q())
                    .expect("q is a unit modulo every power of Φ")
            })
            .clone()
    }
}

impl fmt::Debug for PhiAdicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhiAdicRing(N={}, K={})", self.cyclo.n(), self.trunc)
    }
}

impl PartialEq for PhiAdicRing {
    fn eq(&self, other: &Self) -> bool {
        self.cyclo.n() == other.cyclo.n() && self.trunc == other.trunc
    }
}

/// Division of a dense integer polynomial by a monic one.
fn divmod_monic(num: &[Int], den: &[Int]) -> (Vec<Int>, Vec<Int>) {
    let dd = den.len() - 1;
    let mut rem: Vec<Int> = num.to_vec();
    while rem.last().is_some_and(Int::is_zero) {
        rem.pop();
    }
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Int::ZERO; rem.len() - dd];
    for top in (dd..rem.len()).rev() {
        let c = rem[top].clone();
        if c.is_zero() {
            continue;
        }
        let base = top - dd;
        quot[base] = c.clone();
        for (i, p) in den.iter().enumerate() {
            if !p.is_zero() {
                let t = &rem[base + i] - &(&c * p);
                rem[base + i] = t;
            }
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

fn poly_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_mul(x, y);
        }
    }
    out
}

fn poly_add(a: &[Int], b: &[Int], negate_b: bool) -> Vec<Int> {
    let mut out = vec![Int::ZERO; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        if negate_b {
            out[i] -= y;
        } else {
            out[i] += y;
        }
    }
    out
}

/// Element of `ℤ[q]/Φ_{2N}^{K+1}`, stored as its Φ-adic digits.
///
/// `prec` counts the leading digits that are known; exact divisions by
/// elements of positive valuation lose that many digits from the top.
#[derive(Clone)]
pub struct PhiAdicElem {
    ring: &'static PhiAdicRing,
    terms: Vec<CycloElem>,
    prec: usize,
}

impl PhiAdicElem {
    pub fn ring(&self) -> &'static PhiAdicRing {
        self.ring
    }

    pub fn terms(&self) -> &[CycloElem] {
        &self.terms
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Index of the first nonzero known digit; `None` if all known digits vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.terms[..self.prec].iter().position(|t| !t.is_zero())
    }

    /// All known digits vanish.
    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Digit 0: the specialization to the root of unity.
    pub fn specialize(&self) -> Result<CycloElem> {
        if self.prec == 0 {
            return Err(Error::TruncationOverflow(
                "no known Φ-adic digits left to specialize".into(),
            ));
        }
        Ok(self.terms[0].clone())
    }

    fn to_poly(&self, upto: usize) -> Vec<Int> {
        let phi = self.ring.cyclo.phi();
        let mut acc: Vec<Int> = Vec::new();
        for t in self.terms[..upto].iter().rev() {
            acc = poly_mul(&acc, phi);
            acc = poly_add(&acc, t.coords(), false);
        }
        acc
    }

    pub fn add(&self, other: &PhiAdicElem) -> PhiAdicElem {
        let prec = self.prec.min(other.prec);
        let sum = poly_add(&self.to_poly(prec), &other.to_poly(prec), false);
        self.ring.expand_poly(&sum, prec).clear_above()
    }

    pub fn sub(&self, other: &PhiAdicElem) -> PhiAdicElem {
        let prec = self.prec.min(other.prec);
        let diff = poly_add(&self.to_poly(prec), &other.to_poly(prec), true);
        self.ring.expand_poly(&diff, prec).clear_above()
    }

    pub fn neg(&self) -> PhiAdicElem {
        PhiAdicElem {
            ring: self.ring,
            terms: self.terms.iter().map(CycloElem::neg).collect(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &PhiAdicElem) -> PhiAdicElem {
        let prec = self.prec.min(other.prec);
        let prod = poly_mul(&self.to_poly(prec), &other.to_poly(prec));
        self.ring.expand_poly(&prod, prec).clear_above()
    }

    pub fn pow(&self, e: u32) -> PhiAdicElem {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn clear_above(mut self) -> Self {
        let zero = self.ring.cyclo.zero();
        for t in self.terms[self.prec..].iter_mut() {
            *t = zero.clone();
        }
        self
    }

    /// Exact division. The dividend must have valuation at least that of the
    /// divisor; each digit of the quotient must be a cyclotomic integer.
    pub fn div_exact(&self, d: &PhiAdicElem) -> Result<PhiAdicElem> {
        let prec = self.prec.min(d.prec);
        let vd = d.terms[..prec]
            .iter()
            .position(|t| !t.is_zero())
            .ok_or_else(|| {
                Error::TruncationOverflow(format!(
                    "divisor vanishes to all {prec} known Φ-adic digits"
                ))
            })?;
        if let Some(va) = self.terms[..prec].iter().position(|t| !t.is_zero()) {
            if va < vd {
                return Err(Error::NotDivisible(format!(
                    "dividend valuation {va} below divisor valuation {vd}"
                )));
            }
        }
        let new_prec = prec - vd;
        if new_prec == 0 {
            return Err(Error::TruncationOverflow(format!(
                "division by valuation-{vd} element exhausts truncation K={}",
                self.ring.trunc
            )));
        }
        let phi = self.ring.cyclo.phi();
        // shifted dividend and divisor as polynomials
        let shift = |e: &PhiAdicElem| -> Vec<Int> {
            let mut acc: Vec<Int> = Vec::new();
            for t in e.terms[vd..prec].iter().rev() {
                acc = poly_mul(&acc, phi);
                acc = poly_add(&acc, t.coords(), false);
            }
            acc
        };
        let mut residual = shift(self);
        let divisor = shift(d);
        let lead = d.terms[vd].clone();
        let mut digits = Vec::with_capacity(self.ring.digits_len());
        for i in 0..new_prec {
            let (_, mut r) = divmod_monic(&residual, phi);
            r.resize(self.ring.cyclo.degree(), Int::ZERO);
            let r = CycloElem::from_coords(self.ring.cyclo, r)?;
            let c = r.div_exact(&lead).ok_or_else(|| {
                Error::NotDivisible(format!(
                    "Φ-adic digit {i}: ({r}) is not divisible by ({lead}) in ℤ[q]/Φ{}",
                    2 * self.ring.cyclo.n()
                ))
            })?;
            // residual ← (residual − c·divisor)/Φ, exact by construction
            let next = poly_add(&residual, &poly_mul(c.coords(), &divisor), true);
            let (q2, r2) = divmod_monic(&next, phi);
            if r2.iter().any(|x| !x.is_zero()) {
                return Err(Error::InternalInconsistency(
                    "Φ-adic long division left a remainder".into(),
                ));
            }
            residual = q2;
            digits.push(c);
        }
        let zero = self.ring.cyclo.zero();
        digits.resize(self.ring.digits_len(), zero);
        Ok(PhiAdicElem {
            ring: self.ring,
            terms: digits,
            prec: new_prec,
        })
    }
}

impl PartialEq for PhiAdicElem {
    fn eq(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        self.ring == other.ring && self.terms[..prec] == other.terms[..prec]
    }
}

impl fmt::Display for PhiAdicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phi = 2 * self.ring.cyclo.n();
        let mut first = true;
        for (i, t) in self.terms[..self.prec].iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "({t})·Φ{phi}^{i}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(Φ{phi}^{})", self.prec)
    }
}

impl fmt::Debug for PhiAdicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Valuation of a Laurent polynomial at `Φ_{2N}` by repeated exact division;
/// `None` for the zero polynomial.
pub fn phi_valuation(p: &LaurentPoly, n: u32) -> Option<u32> {
    if p.is_zero() {
        return None;
    }
    let phi = CycloRing::get(n).phi_laurent();
    let mut cur = p.clone();
    let mut v = 0;
    while let Some(next) = cur.div_exact(&phi) {
        cur = next;
        v += 1;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::qnum::q_factorial;
    use proptest::prelude::*;

    #[test]
    fn embedding_then_digit_zero_is_reduction() {
        let ring = PhiAdicRing::get(3, 3);
        let p = LaurentPoly::from_terms([(-4, Int::from(3)), (2, Int::from(-7)), (5, Int::ONE)]);
        let e = ring.embed(&p);
        assert_eq!(e.specialize().unwrap(), ring.cyclo().reduce(&p));
    }

    #[test]
    fn q_inverse() {
        let ring = PhiAdicRing::get(2, 4);
        assert_eq!(ring.q().mul(&ring.q_inv()), ring.one());
    }

    #[test]
    fn factorial_valuations() {
        for n in 2..=5u32 {
            for k in 0..=4 * n {
                let f = q_factorial(k);
                assert_eq!(phi_valuation(&f, n), Some(k / n), "[{k}]_q! at N={n}");
                let ring = PhiAdicRing::get(n, PhiAdicRing::default_trunc(n, 4 * n));
                assert_eq!(ring.embed(&f).valuation(), Some((k / n) as usize));
            }
        }
    }

    #[test]
    fn division_loses_precision_and_overflows() {
        let ring = PhiAdicRing::get(2, 1);
        let phi = ring.embed(&ring.cyclo().phi_laurent());
        let phi2 = phi.mul(&phi);
        assert_eq!(phi2.valuation(), None); // beyond K=1 everything is unknown
        let e = phi.div_exact(&phi).unwrap();
        assert_eq!(e.precision(), 1);
        assert!(e.specialize().unwrap().is_one());
        let err = phi.div_exact(&phi2).unwrap_err();
        assert!(matches!(err, Error::TruncationOverflow(_)));
        let err = ring.one().div_exact(&phi).unwrap_err();
        assert!(matches!(err, Error::NotDivisible(_)));
    }

    #[test]
    fn divides_by_non_unit_digit() {
        // [4]_q at N=2 is Φ·(unit part ≡ -2): exact when the dividend carries the 2.
        let n = 2;
        let ring = PhiAdicRing::get(n, 3);
        let f4 = crate::qcomb::qnum::q_int(4);
        let prod = &f4 * &LaurentPoly::from_terms([(3, Int::ONE), (-1, Int::from(5))]);
        let quot = ring.embed(&prod).div_exact(&ring.embed(&f4)).unwrap();
        let expect = ring
            .cyclo()
            .reduce(&LaurentPoly::from_terms([(3, Int::ONE), (-1, Int::from(5))]));
        assert_eq!(quot.specialize().unwrap(), expect);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..6, -9i64..9), 1..5)
            .prop_map(|v| LaurentPoly::from_terms(v.into_iter().map(|(e, c)| (e, Int::from(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn cancel_and_specialize(n in 2u32..=4, v in 0u32..3, a in arb_poly()) {
            prop_assume!(!a.is_zero());
            let ring = PhiAdicRing::get(n, 4);
            let phi = ring.cyclo().phi_laurent();
            let va = phi_valuation(&a, n).unwrap();
            let lifted = &a * &phi.pow(v);
            let e = ring.embed(&lifted);
            prop_assert_eq!(e.valuation(), Some((va + v) as usize));
            // divide out Φ^v, then specialize: same as cancelling symbolically
            let divided = e.div_exact(&ring.embed(&phi.pow(v))).unwrap();
            prop_assert_eq!(divided.specialize().unwrap(), ring.cyclo().reduce(&a));
        }

        #[test]
        fn embedding_is_multiplicative(n in 2u32..=4, a in arb_poly(), b in arb_poly()) {
            let ring = PhiAdicRing::get(n, 3);
            prop_assert_eq!(ring.embed(&(&a * &b)), ring.embed(&a).mul(&ring.embed(&b)));
            prop_assert_eq!(ring.embed(&(&a + &b)), ring.embed(&a).add(&ring.embed(&b)));
        }
    }
}
