//! The L-site chain and its global generators via the iterated coproduct.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::qnum::q_int;
use crate::repchain::operator::{GradedOperator, Layout};
use crate::repchain::site::{DenseMatrix, SiteRep};

/// Largest chain length accepted anywhere.
pub const MAX_SITES: usize = 16;

/// Largest total Hilbert-space dimension accepted.
pub const MAX_DIM: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct ChainContext {
    rep: SiteRep,
    l: usize,
    layout: Arc<Layout>,
}

pub type LOp = GradedOperator<LaurentPoly>;

/// Global Chevalley generators and the diagonal operators, over generic `q`.
#[derive(Debug, Clone)]
pub struct ChainGenerators {
    pub e0: LOp,
    pub e1: LOp,
    pub f0: LOp,
    pub f1: LOp,
    pub k: LOp,
    pub k_inv: LOp,
    pub a: LOp,
    pub a_inv: LOp,
    pub a_half: LOp,
    pub a_half_inv: LOp,
}

/// Which global generator, with its `A_L` charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    E0,
    E1,
    F0,
    F1,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::E0, Generator::E1, Generator::F0, Generator::F1];

    pub fn name(self) -> &'static str {
        match self {
            Generator::E0 => "E0",
            Generator::E1 => "E1",
            Generator::F0 => "F0",
            Generator::F1 => "F1",
        }
    }

    /// `c` in `A θ A⁻¹ = ω^c θ`.
    pub fn charge(self) -> i32 {
        match self {
            Generator::E1 | Generator::F0 => -1,
            Generator::E0 | Generator::F1 => 1,
        }
    }
}

impl ChainGenerators {
    pub fn get(&self, g: Generator) -> &LOp {
        match g {
            Generator::E0 => &self.e0,
            Generator::E1 => &self.e1,
            Generator::F0 => &self.f0,
            Generator::F1 => &self.f1,
        }
    }
}

impl ChainContext {
    pub fn new(rep: SiteRep, l: usize) -> Result<ChainContext> {
        if l == 0 || l > MAX_SITES {
            return Err(Error::InvalidParams(format!(
                "chain length must be in 1..={MAX_SITES}, got {l}"
            )));
        }
        let dim = (rep.dim() as f64).powi(l as i32);
        if dim > MAX_DIM as f64 {
            return Err(Error::InvalidParams(format!(
                "dimension {}^{l} exceeds the limit {MAX_DIM}",
                rep.dim()
            )));
        }
        let layout = Layout::new(rep.n(), rep.clock(), l);
        Ok(ChainContext { rep, l, layout })
    }

    pub fn rep(&self) -> &SiteRep {
        &self.rep
    }

    pub fn n(&self) -> u32 {
        self.rep.n()
    }

    pub fn sites(&self) -> usize {
        self.l
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// Site digits of a basis state, site 1 first.
    pub fn digits(&self, state: usize) -> Vec<usize> {
        let d = self.rep.dim();
        let mut out = vec![0; self.l];
        let mut rest = state;
        for slot in out.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        out
    }

    fn index(&self, digits: &[usize]) -> usize {
        let d = self.rep.dim();
        digits.iter().fold(0, |acc, &x| acc * d + x)
    }

    fn charge_class(&self, c: i32) -> u32 {
        c.rem_euclid(self.n() as i32) as u32
    }

    /// `Σ_j D_left(<j) · m_j · D_right(>j)` where the dressings are powers of
    /// `k′` (`+1`, `−1`) or absent (`0`).
    fn dressed_sum(&self, m: &DenseMatrix, left: i32, right: i32, charge: i32) -> LOp {
        let k = self.rep.k_exponents();
        let d = self.rep.dim();
        let mut triplets = Vec::new();
        for col in 0..self.dim() {
            let digits = self.digits(col);
            for j in 0..self.l {
                let a = digits[j];
                let left_exp: i32 = digits[..j].iter().map(|&s| k[s]).sum::<i32>() * left;
                let right_exp: i32 = digits[j + 1..].iter().map(|&s| k[s]).sum::<i32>() * right;
                for b in 0..d {
                    let v = &m[b][a];
                    if v.is_zero() {
                        continue;
                    }
                    let mut nd = digits.clone();
                    nd[j] = b;
                    triplets.push((self.index(&nd), col, v.shift(left_exp + right_exp)));
                }
            }
        }
        GradedOperator::from_triplets(&self.layout, (), self.charge_class(charge), triplets)
            .expect("site operators are graded")
    }

    /// `diag(q^{Σ_i x[s_i]})` over the chain.
    fn diag_sum(&self, x: &[i32], scale: i32) -> LOp {
        GradedOperator::diagonal(&self.layout, (), |state| {
            let e: i32 = self.digits(state).iter().map(|&s| x[s]).sum();
            LaurentPoly::q_pow(scale * e)
        })
    }

    /// `A_L^{p/2}`: `diag(q^{p Σ clock})`.
    pub fn a_half_pow(&self, p: i32) -> LOp {
        self.diag_sum(self.rep.clock(), p)
    }

    /// `K^{±1}`.
    pub fn k_pow(&self, p: i32) -> LOp {
        self.diag_sum(self.rep.k_exponents(), p)
    }

    /// `(K − K⁻¹)/(q − q⁻¹)`, exactly `diag([Σ k]_q)`.
    pub fn k_bracket(&self) -> LOp {
        let k = self.rep.k_exponents();
        GradedOperator::diagonal(&self.layout, (), |state| {
            let e: i32 = self.digits(state).iter().map(|&s| k[s]).sum();
            q_int(e as i64)
        })
    }

    pub fn build_chain_generators(&self) -> ChainGenerators {
        let e = self.rep.e_pr();
        let f = self.rep.f_pr();
        ChainGenerators {
            e1: self.dressed_sum(e, 1, 0, Generator::E1.charge()),
            f1: self.dressed_sum(f, 0, -1, Generator::F1.charge()),
            e0: self.dressed_sum(f, -1, 0, Generator::E0.charge()),
            f0: self.dressed_sum(e, 0, 1, Generator::F0.charge()),
            k: self.k_pow(1),
            k_inv: self.k_pow(-1),
            a: self.a_half_pow(2),
            a_inv: self.a_half_pow(-2),
            a_half: self.a_half_pow(1),
            a_half_inv: self.a_half_pow(-1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repchain::site::{build_site_rep, SiteKind};

    fn spin_chain(n: u32, l: usize) -> ChainContext {
        ChainContext::new(build_site_rep(SiteKind::SpinHalf, n, None).unwrap(), l).unwrap()
    }

    #[test]
    fn single_site_generators() {
        let ctx = spin_chain(2, 1);
        let g = ctx.build_chain_generators();
        let e = ctx.rep().e_pr();
        let dense = g.e1.to_dense();
        assert_eq!(&dense, e);
        assert_eq!(g.k.to_dense(), ctx.rep().k_pr(false));
    }

    #[test]
    fn digits_are_site_one_slowest() {
        let ctx = spin_chain(2, 3);
        assert_eq!(ctx.digits(1), vec![0, 0, 1]);
        assert_eq!(ctx.digits(4), vec![1, 0, 0]);
        assert_eq!(ctx.index(&[1, 0, 1]), 5);
    }

    #[test]
    fn generator_charges() {
        for n in 2..=4 {
            let ctx = spin_chain(n, 3);
            let g = ctx.build_chain_generators();
            for gen in Generator::ALL {
                let expect = gen.charge().rem_euclid(n as i32) as u32;
                assert_eq!(g.get(gen).charge_of().unwrap(), expect, "{gen:?} N={n}");
            }
            assert_eq!(g.a.charge_of().unwrap(), 0);
        }
    }

    #[test]
    fn length_limits() {
        let rep = build_site_rep(SiteKind::SpinHalf, 2, None).unwrap();
        assert!(ChainContext::new(rep.clone(), 0).is_err());
        assert!(ChainContext::new(rep, MAX_SITES + 1).is_err());
    }
}
