//! Laurent polynomials in `q` with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::int::Int;

/// Sparse Laurent polynomial `Σ c_e q^e`.
///
/// Terms are kept sorted by exponent with no zero coefficients, so the
/// representation is unique and structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, Int)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Int, exp: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(exp, c)] }
        }
    }

    /// `q^e`.
    pub fn q_pow(exp: i32) -> Self {
        Self::monomial(Int::ONE, exp)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (i32, Int)>>(it: I) -> Self {
        let mut map: BTreeMap<i32, Int> = BTreeMap::new();
        for (e, c) in it {
            *map.entry(e).or_default() += &c;
        }
        LaurentPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Dense coefficients starting at exponent `low`.
    pub fn from_dense(low: i32, coeffs: &[Int]) -> Self {
        LaurentPoly {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (low + i as i32, c.clone()))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(i32, Int)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coeff(&self, exp: i32) -> Int {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Int) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `q → q^k`.
    pub fn substitute_power(&self, k: i32) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e * k, c.clone())))
    }

    /// Exact quotient `self / d`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (q, r) = self.div_rem_checked(d)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Long division from the top exponent down. Returns `None` when a
    /// leading coefficient is not divisible (then no exact quotient exists
    /// over the integers).
    fn div_rem_checked(&self, d: &LaurentPoly) -> Option<(LaurentPoly, LaurentPoly)> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some((Self::zero(), Self::zero()));
        }
        if d.terms.len() == 1 {
            let (de, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                out.push((e - de, c.div_exact(dc)?));
            }
            return Some((LaurentPoly { terms: out }, Self::zero()));
        }
        let d_lo = d.min_exp().unwrap();
        let d_hi = d.max_exp().unwrap();
        let lead = d.terms.last().unwrap().1.clone();
        let width = (d_hi - d_lo) as usize;
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        if hi - lo < d_hi - d_lo {
            return Some((Self::zero(), self.clone()));
        }
        let len = (hi - lo + 1) as usize;
        let mut rem = vec![Int::ZERO; len];
        for (e, c) in &self.terms {
            rem[(e - lo) as usize] = c.clone();
        }
        let dense_d: Vec<(usize, Int)> = d
            .terms
            .iter()
            .map(|(e, c)| ((e - d_lo) as usize, c.clone()))
            .collect();
        let mut quot = Vec::new();
        let mut top = len - 1;
        while top >= width {
            let c = &rem[top];
            if !c.is_zero() {
                let f = c.div_exact(&lead)?;
                let base = top - width;
                for (off, dc) in &dense_d {
                    let t = &rem[base + off] - &(&f * dc);
                    rem[base + off] = t;
                }
                quot.push(((base as i32) + lo - d_lo, f));
            }
            if top == 0 {
                break;
            }
            top -= 1;
        }
        quot.reverse();
        Some((
            LaurentPoly { terms: quot },
            LaurentPoly::from_dense(lo, &rem),
        ))
    }

    /// Evaluates at a complex point.
    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| z.powi(*e) * c.to_f64())
            .sum()
    }

    /// Φ-style representation as an ordinary polynomial: returns `(shift, dense)`
    /// with `self = q^shift · Σ dense[i] q^i` and `dense[0] != 0`.
    pub fn to_dense(&self) -> (i32, Vec<Int>) {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![Int::ZERO; (hi - lo + 1) as usize];
                for (e, c) in &self.terms {
                    v[(e - lo) as usize] = c.clone();
                }
                (lo, v)
            }
            _ => (0, Vec::new()),
        }
    }

    /// Exact quotient or an `InternalInconsistency` error naming both operands.
    pub fn div_exact_or_err(&self, d: &LaurentPoly, what: &str) -> Result<LaurentPoly> {
        self.div_exact(d).ok_or_else(|| {
            Error::InternalInconsistency(format!("{what}: ({self}) / ({d}) leaves a remainder"))
        })
    }
}

fn merge(a: &[(i32, Int)], b: &[(i32, Int)], negate_b: bool) -> Vec<(i32, Int)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
            out.push((b[j].0, c));
            j += 1;
        } else {
            let c = if negate_b {
                &a[i].1 - &b[j].1
            } else {
                &a[i].1 + &b[j].1
            };
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return LaurentPoly {
                terms: rhs.terms.iter().map(|(f, d)| (e + f, c * d)).collect(),
            };
        }
        if rhs.terms.len() == 1 {
            return rhs * self;
        }
        let lo = self.min_exp().unwrap() + rhs.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + rhs.max_exp().unwrap();
        let mut dense = vec![Int::ZERO; (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                dense[(e + f - lo) as usize].add_mul(c, d);
            }
        }
        LaurentPoly::from_dense(lo, &dense)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<i64> for LaurentPoly {
    fn from(v: i64) -> Self {
        LaurentPoly::constant(Int::from(v))
    }
}

impl From<Int> for LaurentPoly {
    fn from(v: Int) -> Self {
        LaurentPoly::constant(v)
    }
}

/// Canonical rendering: ascending exponents, every term carries its sign.
/// `q + q^-1` renders as `+q^-1 +q`; zero renders as `0`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (1, true) => write!(f, "{sign}q")?,
                (1, false) => write!(f, "{sign}{mag}q")?,
                (_, true) => write!(f, "{sign}q^{e}")?,
                (_, false) => write!(f, "{sign}{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Int::from(c))))
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let p = lp(&[(1, 2), (1, -2), (0, 0), (-3, 5)]);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p, LaurentPoly::monomial(Int::from(5), -3));
        assert!(lp(&[(2, 1), (2, -1)]).is_zero());
    }

    #[test]
    fn rendering() {
        assert_eq!(lp(&[(1, 1), (-1, 1)]).to_string(), "+q^-1 +q");
        assert_eq!(lp(&[(0, -2), (3, 7), (-2, -1)]).to_string(), "-q^-2 -2 +7q^3");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division_and_remainder() {
        // (q + q^-1)(q^2 + 1 + q^-2) / (q + q^-1)
        let a = lp(&[(1, 1), (-1, 1)]);
        let b = lp(&[(2, 1), (0, 1), (-2, 1)]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!(lp(&[(0, 3)]).div_exact(&lp(&[(0, 2)])), None);
        assert_eq!(LaurentPoly::zero().div_exact(&a), Some(LaurentPoly::zero()));
        assert_eq!(a.div_exact(&LaurentPoly::zero()), None);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..6, -20i64..20), 0..6).prop_map(|v| lp(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn product_divides_back(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.div_exact(&b), Some(a));
        }
    }
}
