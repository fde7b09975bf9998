//! Ring-generic scalar interface used by the sparse operator layer.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;
use crate::qcomb::cyclo::{CycloElem, CycloRing};
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::phiadic::{PhiAdicElem, PhiAdicRing};

/// Threshold below which a float residual counts as approximately zero.
pub const FLOAT_TOL: f64 = 1e-9;

/// Which ring a run evaluates in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingMode {
    /// Generic `q`; no specialization.
    Laurent,
    /// `ℤ[q]/Φ_{2N}`, divided powers computed generically then reduced.
    Cyclotomic,
    /// `ℤ[q]/Φ_{2N}`, divided powers computed in the truncated Φ-adic ring.
    PhiAdic,
    /// Complex floats at `q = e^{iπ/N}`. Smoke tests only.
    Float,
}

impl RingMode {
    pub fn name(self) -> &'static str {
        match self {
            RingMode::Laurent => "laurent",
            RingMode::Cyclotomic => "cyclotomic",
            RingMode::PhiAdic => "phi-adic",
            RingMode::Float => "float",
        }
    }

    pub fn parse(s: &str) -> Result<RingMode> {
        match s {
            "laurent" => Ok(RingMode::Laurent),
            "cyclotomic" => Ok(RingMode::Cyclotomic),
            "phi-adic" => Ok(RingMode::PhiAdic),
            "float" => Ok(RingMode::Float),
            other => Err(Error::Config(format!("unknown ring `{other}`"))),
        }
    }

    pub fn at_root_of_unity(self) -> bool {
        !matches!(self, RingMode::Laurent)
    }
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub trait Scalar: Clone + PartialEq + fmt::Display + fmt::Debug + Send + Sync + 'static {
    type Ctx: Copy + fmt::Debug + Send + Sync + 'static;

    /// Whether zero tests are exact.
    const EXACT: bool = true;

    fn ring_name() -> &'static str;
    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn from_laurent(ctx: Self::Ctx, p: &LaurentPoly) -> Self;

    /// Only meaningful for rings at the root of unity.
    fn from_cyclo(_ctx: Self::Ctx, c: &CycloElem) -> Result<Self> {
        Err(Error::RingMismatch(format!(
            "cannot read cyclotomic value {c} into the {} ring",
            Self::ring_name()
        )))
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_laurent(ctx, &LaurentPoly::one())
    }

    /// Exact structural zero, used for sparse storage.
    fn is_zero(&self) -> bool;

    /// Zero for residual purposes: exact rings defer to `is_zero`.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;

    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    /// Exact division; `NotDivisible` when no exact quotient exists.
    fn div_exact(&self, d: &Self) -> Result<Self>;

    fn encode(&self, out: &mut Vec<u8>);
    fn decode(ctx: Self::Ctx, input: &mut &[u8]) -> Result<Self>;
}

fn take<'a>(input: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    if input.len() < n {
        return Err(Error::Cache("truncated scalar".into()));
    }
    let (head, tail) = input.split_at(n);
    *input = tail;
    Ok(head)
}

pub(crate) fn read_u32(input: &mut &[u8]) -> Result<u32> {
    Ok(u32::from_le_bytes(take(input, 4)?.try_into().unwrap()))
}

pub(crate) fn read_u64(input: &mut &[u8]) -> Result<u64> {
    Ok(u64::from_le_bytes(take(input, 8)?.try_into().unwrap()))
}

/// Tag 0: i64 little endian. Tag 1: length-prefixed two's complement bytes.
pub(crate) fn encode_int(x: &Int, out: &mut Vec<u8>) {
    match x.to_i64() {
        Some(v) => {
            out.push(0);
            out.extend_from_slice(&v.to_le_bytes());
        }
        None => {
            let b = x.to_signed_bytes_le();
            out.push(1);
            out.extend_from_slice(&(b.len() as u32).to_le_bytes());
            out.extend_from_slice(&b);
        }
    }
}

pub(crate) fn decode_int(input: &mut &[u8]) -> Result<Int> {
    match take(input, 1)?[0] {
        0 => Ok(Int::from(i64::from_le_bytes(take(input, 8)?.try_into().unwrap()))),
        1 => {
            let n = read_u32(input)? as usize;
            Ok(Int::from_signed_bytes_le(take(input, n)?))
        }
        t => Err(Error::Cache(format!("bad integer tag {t}"))),
    }
}

impl Scalar for LaurentPoly {
    type Ctx = ();

    fn ring_name() -> &'static str {
        "laurent"
    }
    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        LaurentPoly::zero()
    }
    fn from_laurent(_: (), p: &LaurentPoly) -> Self {
        p.clone()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Result<Self> {
        LaurentPoly::div_exact(self, d)
            .ok_or_else(|| Error::NotDivisible(format!("({self}) / ({d})")))
    }
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.terms().len() as u32).to_le_bytes());
        for (e, c) in self.terms() {
            out.extend_from_slice(&e.to_le_bytes());
            encode_int(c, out);
        }
    }
    fn decode(_: (), input: &mut &[u8]) -> Result<Self> {
        let n = read_u32(input)? as usize;
        let mut terms = Vec::with_capacity(n);
        for _ in 0..n {
            let e = i32::from_le_bytes(take(input, 4)?.try_into().unwrap());
            terms.push((e, decode_int(input)?));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

impl Scalar for CycloElem {
    type Ctx = &'static CycloRing;

    fn ring_name() -> &'static str {
        "cyclotomic"
    }
    fn ctx(&self) -> Self::Ctx {
        self.ring()
    }
    fn zero(ctx: Self::Ctx) -> Self {
        ctx.zero()
    }
    fn from_laurent(ctx: Self::Ctx, p: &LaurentPoly) -> Self {
        ctx.reduce(p)
    }
    fn from_cyclo(ctx: Self::Ctx, c: &CycloElem) -> Result<Self> {
        if ctx.n() != c.ring().n() {
            return Err(Error::RingMismatch(format!(
                "N={} value read into N={} ring",
                c.ring().n(),
                ctx.n()
            )));
        }
        Ok(c.clone())
    }
    fn is_zero(&self) -> bool {
        CycloElem::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        CycloElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CycloElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CycloElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        CycloElem::neg(self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        CycloElem::add_mul(self, a, b)
    }
    fn div_exact(&self, d: &Self) -> Result<Self> {
        CycloElem::div_exact(self, d)
            .ok_or_else(|| Error::NotDivisible(format!("({self}) / ({d}) at the root of unity")))
    }
    fn encode(&self, out: &mut Vec<u8>) {
        for c in self.coords() {
            encode_int(c, out);
        }
    }
    fn decode(ctx: Self::Ctx, input: &mut &[u8]) -> Result<Self> {
        let coords = (0..ctx.degree())
            .map(|_| decode_int(input))
            .collect::<Result<Vec<_>>>()?;
        CycloElem::from_coords(ctx, coords)
    }
}

impl Scalar for PhiAdicElem {
    type Ctx = &'static PhiAdicRing;

    fn ring_name() -> &'static str {
        "phi-adic"
    }
    fn ctx(&self) -> Self::Ctx {
        self.ring()
    }
    fn zero(ctx: Self::Ctx) -> Self {
        ctx.zero()
    }
    fn from_laurent(ctx: Self::Ctx, p: &LaurentPoly) -> Self {
        ctx.embed(p)
    }
    fn is_zero(&self) -> bool {
        PhiAdicElem::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        PhiAdicElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        PhiAdicElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        PhiAdicElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        PhiAdicElem::neg(self)
    }
    fn div_exact(&self, d: &Self) -> Result<Self> {
        PhiAdicElem::div_exact(self, d)
    }
    fn encode(&self, _out: &mut Vec<u8>) {
        unreachable!("Φ-adic operators are specialized before caching")
    }
    fn decode(_: Self::Ctx, _: &mut &[u8]) -> Result<Self> {
        Err(Error::Cache("Φ-adic operators are not cached".into()))
    }
}

/// Evaluation point for the float ring: `q = e^{iπ/N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatCtx {
    pub n: u32,
    pub q: Complex64,
}

impl FloatCtx {
    pub fn new(n: u32) -> FloatCtx {
        FloatCtx {
            n,
            q: Complex64::from_polar(1.0, std::f64::consts::PI / n as f64),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Float {
    pub ctx: FloatCtx,
    pub value: Complex64,
}

impl PartialEq for Float {
    fn eq(&self, o: &Self) -> bool {
        self.value == o.value
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}{:+.12}i", self.value.re, self.value.im)
    }
}

impl Float {
    fn with(&self, value: Complex64) -> Float {
        Float {
            ctx: self.ctx,
            value,
        }
    }
}

impl Scalar for Float {
    type Ctx = FloatCtx;
    const EXACT: bool = false;

    fn ring_name() -> &'static str {
        "float"
    }
    fn ctx(&self) -> FloatCtx {
        self.ctx
    }
    fn zero(ctx: FloatCtx) -> Self {
        Float {
            ctx,
            value: Complex64::new(0.0, 0.0),
        }
    }
    fn from_laurent(ctx: FloatCtx, p: &LaurentPoly) -> Self {
        Float {
            ctx,
            value: p.eval_complex(ctx.q),
        }
    }
    fn from_cyclo(ctx: FloatCtx, c: &CycloElem) -> Result<Self> {
        Ok(Float {
            ctx,
            value: c.to_complex(),
        })
    }
    fn is_zero(&self) -> bool {
        self.value.re == 0.0 && self.value.im == 0.0
    }
    fn is_negligible(&self) -> bool {
        self.value.norm() < FLOAT_TOL
    }
    fn magnitude(&self) -> f64 {
        self.value.norm()
    }
    fn add(&self, o: &Self) -> Self {
        self.with(self.value + o.value)
    }
    fn sub(&self, o: &Self) -> Self {
        self.with(self.value - o.value)
    }
    fn mul(&self, o: &Self) -> Self {
        self.with(self.value * o.value)
    }
    fn neg(&self) -> Self {
        self.with(-self.value)
    }
    fn div_exact(&self, d: &Self) -> Result<Self> {
        if d.is_negligible() {
            return Err(Error::NotDivisible(format!(
                "division by {d}, which vanishes at the root of unity"
            )));
        }
        Ok(self.with(self.value / d.value))
    }
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.value.re.to_bits().to_le_bytes());
        out.extend_from_slice(&self.value.im.to_bits().to_le_bytes());
    }
    fn decode(ctx: FloatCtx, input: &mut &[u8]) -> Result<Self> {
        let re = f64::from_bits(read_u64(input)?);
        let im = f64::from_bits(read_u64(input)?);
        Ok(Float {
            ctx,
            value: Complex64::new(re, im),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roundtrip<S: Scalar>(ctx: S::Ctx, x: &S) -> S {
        let mut buf = Vec::new();
        x.encode(&mut buf);
        let mut slice = buf.as_slice();
        let y = S::decode(ctx, &mut slice).unwrap();
        assert!(slice.is_empty());
        y
    }

    #[test]
    fn laurent_encoding_roundtrip() {
        let big = Int::from(i64::MAX) * Int::from(i64::MAX);
        let p = LaurentPoly::from_terms(vec![(-3, Int::from(-7)), (5, big)]);
        assert_eq!(roundtrip((), &p), p);
        assert_eq!(roundtrip((), &LaurentPoly::zero()), LaurentPoly::zero());
    }

    #[test]
    fn float_is_never_exact() {
        let ctx = FloatCtx::new(2);
        let x = Float::from_laurent(ctx, &LaurentPoly::from_terms(vec![(2, Int::ONE), (0, Int::ONE)]));
        // q² + 1 at q = i
        assert!(x.is_negligible());
        assert!(!Float::EXACT);
        assert!(Float::one(ctx).div_exact(&x).is_err());
    }

    #[test]
    fn cyclo_division_by_vanishing_factor() {
        let r = CycloRing::get(3);
        let three = CycloElem::from_laurent(r, &crate::qcomb::q_int(3));
        assert!(three.is_zero());
        let e = Scalar::div_exact(&r.one(), &three).unwrap_err();
        assert_eq!(e.kind(), "NotDivisible");
    }

    proptest! {
        #[test]
        fn cyclo_encoding_roundtrip(c in proptest::collection::vec(-1_000_000i64..1_000_000, 4)) {
            let r = CycloRing::get(5);
            let x = CycloElem::from_coords(r, c.into_iter().map(Int::from).collect()).unwrap();
            prop_assert_eq!(roundtrip(r, &x), x);
        }
    }
}
