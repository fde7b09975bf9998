//! Shared store of divided powers and word products for one chain and ring.
//!
//! Divided powers are computed symbolically (Laurent or Φ-adic), then read
//! into the target ring. Locks are never held while multiplying.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::divpow::{extend_divided_powers, Normalization, Route};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::phiadic::{PhiAdicElem, PhiAdicRing};
use crate::repchain::barred::{build_barred_ops, Barred, BarredOps};
use crate::repchain::cache::{CacheKey, OperatorCache};
use crate::repchain::chain::{ChainContext, ChainGenerators, Generator, LOp};
use crate::repchain::operator::{GradedOperator, Layout};
use crate::scalar::{RingMode, Scalar};

/// Any operator whose divided powers the identities use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpId {
    Gen(Generator),
    Bar(Barred),
}

impl OpId {
    pub fn name(self) -> &'static str {
        match self {
            OpId::Gen(g) => g.name(),
            OpId::Bar(b) => b.name(),
        }
    }

    pub const ALL: [OpId; 8] = [
        OpId::Gen(Generator::E0),
        OpId::Gen(Generator::E1),
        OpId::Gen(Generator::F0),
        OpId::Gen(Generator::F1),
        B1,
        BL,
        C0,
        CL1,
    ];

    /// Accepts the names printed by [`OpId::name`].
    pub fn parse(s: &str) -> Result<OpId> {
        OpId::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown operator `{s}`")))
    }

    /// `±`-operators use `[n]_q!`, site-labeled ones `[n]!`.
    pub fn default_norm(self) -> Normalization {
        match self {
            OpId::Gen(_) => Normalization::QFact,
            OpId::Bar(_) => Normalization::OmegaFact,
        }
    }

    /// B-type: `E0 = B₊`, `F1 = B₋`, `B̄₁`, `B̄_L`.
    pub fn is_b_type(self) -> bool {
        match self {
            OpId::Gen(g) => matches!(g, Generator::E0 | Generator::F1),
            OpId::Bar(b) => b.is_b_type(),
        }
    }
}

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const B1: OpId = OpId::Bar(Barred::B1);
pub const BL: OpId = OpId::Bar(Barred::BL);
pub const C0: OpId = OpId::Bar(Barred::C0);
pub const CL1: OpId = OpId::Bar(Barred::CL1);

/// One factor of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    Power { op: OpId, norm: Normalization, n: u32 },
    /// `A_L^{p/2}`.
    AHalf(i32),
}

impl Factor {
    /// Divided power in the operator's default normalization.
    pub fn dp(op: OpId, n: u32) -> Factor {
        Factor::Power {
            op,
            norm: op.default_norm(),
            n,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Power { op, n, .. } => write!(f, "{op}^({n})"),
            Factor::AHalf(p) => write!(f, "A^({p}/2)"),
        }
    }
}

/// `α = q³` on B-type and `β = −q` on C-type base operators.
pub fn rescale_factor(op: OpId) -> LaurentPoly {
    if op.is_b_type() {
        LaurentPoly::q_pow(3)
    } else {
        LaurentPoly::monomial(Int::from(-1i64), 1)
    }
}

pub const RESCALE_TAG: &str = "B*q^3,C*(-q)";

#[derive(Debug, Clone, Default)]
pub struct BankOptions {
    pub rescale: bool,
    pub cache: Option<OperatorCache>,
    /// Largest divided-power order expected; sizes the Φ-adic truncation.
    pub max_order: u32,
}

#[derive(Clone)]
enum Symbolic {
    Laurent(Vec<LOp>),
    Phi(Vec<GradedOperator<PhiAdicElem>>),
}

impl Symbolic {
    fn len(&self) -> usize {
        match self {
            Symbolic::Laurent(v) => v.len(),
            Symbolic::Phi(v) => v.len(),
        }
    }
}

type PowerKey = (OpId, Normalization, u32);

pub struct OperatorBank<S: Scalar> {
    chain: ChainContext,
    gens: ChainGenerators,
    barred: std::result::Result<BarredOps, Error>,
    mode: RingMode,
    sctx: S::Ctx,
    route: Route,
    opts: BankOptions,
    powers: Mutex<HashMap<PowerKey, Arc<GradedOperator<S>>>>,
    symbolic: Mutex<HashMap<(OpId, Normalization), Symbolic>>,
    halves: Mutex<HashMap<i32, Arc<GradedOperator<S>>>>,
    words: Mutex<HashMap<Vec<Factor>, Arc<GradedOperator<S>>>>,
}

impl<S: Scalar> OperatorBank<S> {
    pub fn new(chain: ChainContext, mode: RingMode, sctx: S::Ctx, opts: BankOptions) -> OperatorBank<S> {
        let gens = chain.build_chain_generators();
        let barred = build_barred_ops(&chain, &gens);
        let route = match mode {
            RingMode::PhiAdic => Route::PhiAdic {
                trunc: PhiAdicRing::default_trunc(chain.n(), opts.max_order.max(chain.sites() as u32)),
            },
            _ => Route::Laurent,
        };
        OperatorBank {
            chain,
            gens,
            barred,
            mode,
            sctx,
            route,
            opts,
            powers: Mutex::new(HashMap::new()),
            symbolic: Mutex::new(HashMap::new()),
            halves: Mutex::new(HashMap::new()),
            words: Mutex::new(HashMap::new()),
        }
    }

    pub fn chain(&self) -> &ChainContext {
        &self.chain
    }

    pub fn generators(&self) -> &ChainGenerators {
        &self.gens
    }

    pub fn layout(&self) -> &Arc<Layout> {
        self.chain.layout()
    }

    pub fn sctx(&self) -> S::Ctx {
        self.sctx
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn rescaled(&self) -> bool {
        self.opts.rescale
    }

    /// The generic-`q` operator, rescaled when the bank is.
    pub fn base(&self, op: OpId) -> Result<LOp> {
        let raw = match op {
            OpId::Gen(g) => self.gens.get(g).clone(),
            OpId::Bar(b) => self.barred.as_ref().map_err(Clone::clone)?.get(b).clone(),
        };
        Ok(if self.opts.rescale {
            raw.scale(&rescale_factor(op))
        } else {
            raw
        })
    }

    /// Reads a generic-`q` operator into the target ring.
    pub fn specialize(&self, op: &LOp) -> Result<GradedOperator<S>> {
        let sctx = self.sctx;
        op.try_map(sctx, |v| Ok(S::from_laurent(sctx, v)))
    }

    fn cache_key(&self, op: OpId, norm: Normalization, n: u32) -> CacheKey {
        CacheKey {
            backend: self.chain.rep().kind().name().to_string(),
            n: self.chain.n(),
            l: self.chain.sites(),
            ring: self.mode.name().to_string(),
            op: op.name().to_string(),
            normalization: norm.name().to_string(),
            order: n,
            rescale: if self.opts.rescale {
                RESCALE_TAG.to_string()
            } else {
                String::new()
            },
        }
    }

    fn symbolic_start(&self, op: OpId, norm: Normalization) -> Result<Symbolic> {
        if let Some(s) = self.symbolic.lock().unwrap().get(&(op, norm)) {
            return Ok(s.clone());
        }
        let base = self.base(op)?;
        Ok(match self.route {
            Route::Laurent => Symbolic::Laurent(vec![GradedOperator::identity(base.layout(), ()), base]),
            Route::PhiAdic { trunc } => {
                let pr = PhiAdicRing::get(self.chain.n(), trunc);
                let lifted = base.try_map(pr, |v| Ok(pr.embed(v)))?;
                Symbolic::Phi(vec![GradedOperator::identity(base.layout(), pr), lifted])
            }
        })
    }

    // Extends a private copy of the symbolic powers: holding a lock across
    // rayon work could deadlock when a worker steals a job needing it.
    fn compute_power(&self, op: OpId, norm: Normalization, n: u32) -> Result<GradedOperator<S>> {
        let mut st = self.symbolic_start(op, norm)?;
        let sctx = self.sctx;
        let out = match &mut st {
            Symbolic::Laurent(v) => {
                let base = v[1].clone();
                extend_divided_powers(&base, v, n, norm)?;
                v[n as usize].try_map(sctx, |x| Ok(S::from_laurent(sctx, x)))
            }
            Symbolic::Phi(v) => {
                let base = v[1].clone();
                extend_divided_powers(&base, v, n, norm)?;
                v[n as usize].try_map(sctx, |x| S::from_cyclo(sctx, &x.specialize()?))
            }
        }?;
        let mut map = self.symbolic.lock().unwrap();
        if map.get(&(op, norm)).map_or(true, |old| old.len() < st.len()) {
            map.insert((op, norm), st);
        }
        Ok(out)
    }

    /// `θ^(n)` in the target ring, memoized and optionally disk-cached.
    pub fn power(&self, op: OpId, norm: Normalization, n: u32) -> Result<Arc<GradedOperator<S>>> {
        if let Some(p) = self.powers.lock().unwrap().get(&(op, norm, n)) {
            return Ok(p.clone());
        }
        let key = self.cache_key(op, norm, n);
        let loaded = match &self.opts.cache {
            Some(c) => c.load::<S>(&key, self.layout(), self.sctx)?,
            None => None,
        };
        let value = match loaded {
            Some(v) => v,
            None => {
                let v = self.compute_power(op, norm, n)?;
                if let Some(c) = &self.opts.cache {
                    c.store(&key, &v)?;
                }
                v
            }
        };
        let mut map = self.powers.lock().unwrap();
        Ok(map.entry((op, norm, n)).or_insert_with(|| Arc::new(value)).clone())
    }

    pub fn dp(&self, op: OpId, n: u32) -> Result<Arc<GradedOperator<S>>> {
        self.power(op, op.default_norm(), n)
    }

    pub fn a_half_pow(&self, p: i32) -> Result<Arc<GradedOperator<S>>> {
        if let Some(a) = self.halves.lock().unwrap().get(&p) {
            return Ok(a.clone());
        }
        let v = Arc::new(self.specialize(&self.chain.a_half_pow(p))?);
        Ok(self.halves.lock().unwrap().entry(p).or_insert(v).clone())
    }

    pub fn factor(&self, f: Factor) -> Result<Arc<GradedOperator<S>>> {
        match f {
            Factor::Power { op, norm, n } => self.power(op, norm, n),
            Factor::AHalf(p) => self.a_half_pow(p),
        }
    }

    /// Left-to-right product of a word, reusing the longest cached prefix.
    pub fn word(&self, factors: &[Factor]) -> Result<Arc<GradedOperator<S>>> {
        if factors.is_empty() {
            return Ok(Arc::new(GradedOperator::identity(self.layout(), self.sctx)));
        }
        if factors.len() == 1 {
            return self.factor(factors[0]);
        }
        let (mut start, mut acc) = {
            let words = self.words.lock().unwrap();
            let mut found = None;
            for k in (2..=factors.len()).rev() {
                if let Some(w) = words.get(&factors[..k]) {
                    found = Some((k, w.clone()));
                    break;
                }
            }
            found.unwrap_or((0, Arc::new(GradedOperator::identity(self.layout(), self.sctx))))
        };
        if start == 0 {
            acc = self.factor(factors[0])?;
            start = 1;
        }
        for k in start..factors.len() {
            let f = self.factor(factors[k])?;
            let next = if acc.is_zero() {
                let charge = (acc.charge() + f.charge()) % self.chain.n();
                GradedOperator::zero(self.layout(), self.sctx, charge)
            } else {
                acc.mul(&f)?
            };
            let next = Arc::new(next);
            self.words
                .lock()
                .unwrap()
                .entry(factors[..=k].to_vec())
                .or_insert_with(|| next.clone());
            acc = next;
        }
        Ok(acc)
    }

    /// Computes the listed divided powers one at a time.
    pub fn warm(&self, list: &[(OpId, u32)]) -> Result<()> {
        for &(op, n) in list {
            self.dp(op, n)?;
        }
        Ok(())
    }

    /// Drops memoized word products to bound memory between suites.
    pub fn clear_words(&self) {
        self.words.lock().unwrap().clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::cyclo::{CycloElem, CycloRing};
    use crate::repchain::site::{build_site_rep, SiteKind};

    fn bank(n: u32, l: usize, mode: RingMode, opts: BankOptions) -> OperatorBank<CycloElem> {
        let chain = ChainContext::new(build_site_rep(SiteKind::SpinHalf, n, None).unwrap(), l).unwrap();
        OperatorBank::new(chain, mode, CycloRing::get(n), opts)
    }

    #[test]
    fn routes_agree() {
        let a = bank(2, 5, RingMode::Cyclotomic, BankOptions::default());
        let b = bank(2, 5, RingMode::PhiAdic, BankOptions::default());
        for op in [B1, C0, BL, CL1, OpId::Gen(Generator::E0)] {
            for n in 0..=6 {
                assert_eq!(a.dp(op, n).unwrap(), b.dp(op, n).unwrap(), "{op} {n}");
            }
        }
    }

    #[test]
    fn word_matches_direct_product() {
        let b = bank(2, 4, RingMode::Cyclotomic, BankOptions::default());
        let w = [Factor::dp(C0, 1), Factor::dp(B1, 2), Factor::dp(C0, 1)];
        let direct = b.dp(C0, 1).unwrap().mul(&b.dp(B1, 2).unwrap()).unwrap().mul(&b.dp(C0, 1).unwrap()).unwrap();
        assert_eq!(*b.word(&w).unwrap(), direct);
        let longer = [w[0], w[1], w[2], Factor::AHalf(-1)];
        let again = direct.mul(&b.a_half_pow(-1).unwrap()).unwrap();
        assert_eq!(*b.word(&longer).unwrap(), again);
    }

    #[test]
    fn disk_cache_is_transparent() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let opts = BankOptions {
            cache: Some(cache),
            ..Default::default()
        };
        let cold = bank(2, 4, RingMode::Cyclotomic, opts.clone());
        let first = cold.dp(B1, 3).unwrap();
        let warm = bank(2, 4, RingMode::Cyclotomic, opts);
        let second = warm.dp(B1, 3).unwrap();
        assert_eq!(first.blocks(), second.blocks());
        assert!(warm.symbolic.lock().unwrap().is_empty());
    }

    #[test]
    fn rescale_scales_powers() {
        let plain = bank(2, 4, RingMode::Cyclotomic, BankOptions::default());
        let scaled = bank(
            2,
            4,
            RingMode::Cyclotomic,
            BankOptions {
                rescale: true,
                ..Default::default()
            },
        );
        let ring = CycloRing::get(2);
        let a = plain.dp(B1, 2).unwrap();
        let b = scaled.dp(B1, 2).unwrap();
        assert_eq!(a.scale(&ring.q_pow(6)), *b);
    }
}
