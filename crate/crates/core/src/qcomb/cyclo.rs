//! Exact arithmetic in `ℤ[q]/Φ_{2N}(q)`, the image of `q` being a primitive
//! `2N`-th root of unity.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::qcomb::laurent::LaurentPoly;

pub type Coords = SmallVec<[Int; 4]>;

/// Dense integer coefficients of the cyclotomic polynomial `Φ_n`, lowest
/// degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<Int> {
    assert!(n >= 1, "cyclotomic index must be positive");
    // q^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = LaurentPoly::from_terms([(n as i32, Int::ONE), (0, Int::from(-1))]);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = LaurentPoly::from_dense(0, &cyclotomic_poly(d));
            num = num
                .div_exact(&phi_d)
                .expect("cyclotomic polynomials divide q^n - 1");
        }
    }
    let (shift, dense) = num.to_dense();
    debug_assert_eq!(shift, 0);
    dense
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count() as u32
}

/// Context for `ℤ[q]/Φ_{2N}`. One instance per `N`, shared for the process
/// lifetime (see [`CycloRing::get`]).
pub struct CycloRing {
    n: u32,
    degree: usize,
    phi: Vec<Int>,
    /// `q^k mod Φ_{2N}` for `0 <= k < 2N`.
    pow_table: Vec<Vec<Int>>,
}

impl CycloRing {
    /// Returns the shared ring for the given `N >= 2`.
    pub fn get(n: u32) -> &'static CycloRing {
        assert!(n >= 2, "root-of-unity order N must be at least 2");
        static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static CycloRing>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(Default::default);
        let mut map = reg.lock().unwrap();
        *map.entry(n)
            .or_insert_with(|| Box::leak(Box::new(CycloRing::build(n))))
    }

    fn build(n: u32) -> CycloRing {
        let phi = cyclotomic_poly(2 * n);
        let degree = phi.len() - 1;
        let mut pow_table = Vec::with_capacity(2 * n as usize);
        let mut cur = vec![Int::ZERO; degree];
        cur[0] = Int::ONE;
        for _ in 0..2 * n {
            pow_table.push(cur.clone());
            // multiply by q and fold the overflow coefficient using the monic Φ
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Int::ZERO;
            if !top.is_zero() {
                for (i, p) in phi.iter().take(degree).enumerate() {
                    cur[i] -= &(&top * p);
                }
            }
        }
        CycloRing {
            n,
            degree,
            phi,
            pow_table,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `φ(2N)`, the number of coordinates of an element.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn phi(&self) -> &[Int] {
        &self.phi
    }

    pub fn phi_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_dense(0, &self.phi)
    }

    pub fn zero(&'static self) -> CycloElem {
        CycloElem {
            ring: self,
            coords: SmallVec::from_elem(Int::ZERO, self.degree),
        }
    }

    pub fn one(&'static self) -> CycloElem {
        self.from_int(Int::ONE)
    }

    pub fn from_int(&'static self, c: Int) -> CycloElem {
        let mut e = self.zero();
        e.coords[0] = c;
        e
    }

    /// Image of `q^k` for any integer `k`.
    pub fn q_pow(&'static self, k: i64) -> CycloElem {
        let m = 2 * self.n as i64;
        let idx = k.rem_euclid(m) as usize;
        CycloElem {
            ring: self,
            coords: self.pow_table[idx].iter().cloned().collect(),
        }
    }

    /// The reduction homomorphism `ℤ[q, q⁻¹] → ℤ[q]/Φ_{2N}`.
    pub fn reduce(&'static self, p: &LaurentPoly) -> CycloElem {
        let m = 2 * self.n as i64;
        let mut coords: Coords = SmallVec::from_elem(Int::ZERO, self.degree);
        for (e, c) in p.terms() {
            let row = &self.pow_table[(*e as i64).rem_euclid(m) as usize];
            for (dst, r) in coords.iter_mut().zip(row) {
                if !r.is_zero() {
                    dst.add_mul(c, r);
                }
            }
        }
        CycloElem { ring: self, coords }
    }

    /// Units of `ℤ/2N`, i.e. the exponents `k` of the Galois automorphisms `q ↦ q^k`.
    pub fn galois_exponents(&self) -> Vec<u32> {
        let m = 2 * self.n;
        (1..m).filter(|k| num_integer::gcd(*k, m) == 1).collect()
    }

    /// The complex number `e^{iπ/N}` that `q` specializes to.
    pub fn root(&self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI / self.n as f64)
    }
}

impl fmt::Debug for CycloRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloRing(N={})", self.n)
    }
}

impl PartialEq for CycloRing {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

/// Residue class in `ℤ[q]/Φ_{2N}` stored as the coefficients of the unique
/// representative of degree below `φ(2N)`.
#[derive(Clone)]
pub struct CycloElem {
    ring: &'static CycloRing,
    coords: Coords,
}

impl CycloElem {
    pub fn ring(&self) -> &'static CycloRing {
        self.ring
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn from_coords(ring: &'static CycloRing, coords: Vec<Int>) -> Result<CycloElem> {
        if coords.len() != ring.degree {
            return Err(Error::InvalidParams(format!(
                "expected {} coordinates for N={}, got {}",
                ring.degree,
                ring.n,
                coords.len()
            )));
        }
        Ok(CycloElem {
            ring,
            coords: coords.into_iter().collect(),
        })
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Int::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Int::is_zero)
    }

    /// The integer this element equals, if it lies in `ℤ`.
    pub fn as_integer(&self) -> Option<Int> {
        if self.coords[1..].iter().all(Int::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn check_ring(&self, other: &CycloElem) {
        assert!(
            std::ptr::eq(self.ring, other.ring),
            "mixing ℤ[q]/Φ_{} and ℤ[q]/Φ_{}",
            2 * self.ring.n,
            2 * other.ring.n
        );
    }

    pub fn add(&self, other: &CycloElem) -> CycloElem {
        self.check_ring(other);
        CycloElem {
            ring: self.ring,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CycloElem) -> CycloElem {
        self.check_ring(other);
        CycloElem {
            ring: self.ring,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem {
            ring: self.ring,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &CycloElem) {
        self.check_ring(other);
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &CycloElem) -> CycloElem {
        let mut out = self.ring.zero();
        out.add_mul(self, other);
        out
    }

    /// `self += a * b`.
    pub fn add_mul(&mut self, a: &CycloElem, b: &CycloElem) {
        self.check_ring(a);
        self.check_ring(b);
        let d = self.ring.degree;
        let mut wide: SmallVec<[Int; 8]> = SmallVec::from_elem(Int::ZERO, 2 * d - 1);
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    wide[i + j].add_mul(x, y);
                }
            }
        }
        for (i, w) in wide.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if i < d {
                self.coords[i] += w;
            } else {
                for (dst, r) in self.coords.iter_mut().zip(&self.ring.pow_table[i]) {
                    if !r.is_zero() {
                        dst.add_mul(w, r);
                    }
                }
            }
        }
    }

    pub fn scale(&self, s: &Int) -> CycloElem {
        CycloElem {
            ring: self.ring,
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> CycloElem {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The Galois conjugate `q ↦ q^k`.
    pub fn conjugate(&self, k: u32) -> CycloElem {
        let m = 2 * self.ring.n as u64;
        let mut coords: Coords = SmallVec::from_elem(Int::ZERO, self.ring.degree);
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &self.ring.pow_table[((i as u64 * k as u64) % m) as usize];
            for (dst, r) in coords.iter_mut().zip(row) {
                if !r.is_zero() {
                    dst.add_mul(c, r);
                }
            }
        }
        CycloElem {
            ring: self.ring,
            coords,
        }
    }

    /// Field norm to `ℚ` (an integer) together with the product of the
    /// non-identity conjugates, so that `self * cofactor = norm`.
    pub fn norm_and_cofactor(&self) -> (Int, CycloElem) {
        let mut cof = self.ring.one();
        for k in self.ring.galois_exponents() {
            if k != 1 {
                cof = cof.mul(&self.conjugate(k));
            }
        }
        let norm = self.mul(&cof);
        let n = norm
            .as_integer()
            .expect("the norm of a cyclotomic integer is rational");
        (n, cof)
    }

    /// Exact quotient in `ℤ[q]/Φ_{2N}`; `None` when `d` is zero or the quotient
    /// is not a cyclotomic integer.
    pub fn div_exact(&self, d: &CycloElem) -> Option<CycloElem> {
        self.check_ring(d);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.ring.zero());
        }
        let (norm, cof) = d.norm_and_cofactor();
        let num = self.mul(&cof);
        let mut coords = Coords::new();
        for c in &num.coords {
            coords.push(c.div_exact(&norm)?);
        }
        Some(CycloElem {
            ring: self.ring,
            coords,
        })
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_dense(0, &self.coords)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.to_laurent().eval_complex(self.ring.root())
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.n == other.ring.n && self.coords == other.coords
    }
}

impl Eq for CycloElem {}

impl std::hash::Hash for CycloElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ring.n.hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_Φ{}", self.to_laurent(), 2 * self.ring.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn known_cyclotomics() {
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(10), ints(&[1, -1, 1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        for n in 2..=12 {
            assert_eq!(CycloRing::get(n).degree() as u32, euler_phi(2 * n));
        }
    }

    #[test]
    fn q_is_a_primitive_root() {
        for n in 2..=7u32 {
            let r = CycloRing::get(n);
            assert_eq!(r.q_pow(n as i64), r.from_int(Int::from(-1)));
            assert!(r.q_pow(2 * n as i64).is_one());
            for k in 1..2 * n as i64 {
                assert!(!r.q_pow(k).is_one(), "q^{k} = 1 for N={n}");
            }
            assert_eq!(r.q_pow(-1).mul(&r.q_pow(1)), r.one());
        }
    }

    #[test]
    fn q_plus_inverse_vanishes_at_i() {
        let r = CycloRing::get(2);
        let p = LaurentPoly::from_terms([(1, Int::ONE), (-1, Int::ONE)]);
        assert!(r.reduce(&p).is_zero());
        assert!(!p.is_zero());
    }

    #[test]
    fn exact_division() {
        let r = CycloRing::get(2);
        // (1 + q) is not a unit in ℤ[i]: norm 2
        let a = r.reduce(&LaurentPoly::from_terms([(0, Int::ONE), (1, Int::ONE)]));
        assert_eq!(a.norm_and_cofactor().0, Int::from(2));
        assert_eq!(r.one().div_exact(&a), None);
        let two = r.from_int(Int::from(2));
        let quo = two.div_exact(&a).unwrap();
        assert_eq!(quo.mul(&a), two);
        assert_eq!(a.div_exact(&r.zero()), None);
    }

    #[test]
    fn complex_value() {
        let r = CycloRing::get(3);
        let z = r.q_pow(1).to_complex();
        assert!((z - r.root()).norm() < 1e-12);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-12i32..12, -50i64..50), 0..8)
            .prop_map(|v| LaurentPoly::from_terms(v.into_iter().map(|(e, c)| (e, Int::from(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reduction_is_a_ring_homomorphism(n in 2u32..=6, a in arb_poly(), b in arb_poly()) {
            let r = CycloRing::get(n);
            prop_assert_eq!(r.reduce(&(&a * &b)), r.reduce(&a).mul(&r.reduce(&b)));
            prop_assert_eq!(r.reduce(&(&a + &b)), r.reduce(&a).add(&r.reduce(&b)));
        }

        #[test]
        fn division_inverts_multiplication(n in 2u32..=6, a in arb_poly(), b in arb_poly()) {
            let r = CycloRing::get(n);
            let (x, y) = (r.reduce(&a), r.reduce(&b));
            prop_assume!(!y.is_zero());
            prop_assert_eq!(x.mul(&y).div_exact(&y), Some(x));
        }

        #[test]
        fn numeric_specialization_agrees(n in 2u32..=6, a in arb_poly()) {
            let r = CycloRing::get(n);
            let exact = r.reduce(&a).to_complex();
            let direct = a.eval_complex(r.root());
            prop_assert!((exact - direct).norm() < 1e-6 * (1.0 + direct.norm()));
        }
    }
}
