//! Charge-graded block-sparse operators on the chain.
//!
//! Basis states are ordered lexicographically in site indices, site 1
//! slowest. Each state carries a sector label `w mod N`, where `ω^w` is its
//! `A_L` eigenvalue. An operator of charge `c` maps sector `m` into sector
//! `m + c`, so it is stored as one CSR block per source sector.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qcomb::laurent::LaurentPoly;
use crate::scalar::Scalar;

/// Shared basis bookkeeping for one chain.
#[derive(Debug, PartialEq, Eq)]
pub struct Layout {
    n: u32,
    dim: usize,
    sector_of: Vec<u32>,
    local: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl Layout {
    /// `clock[s]` is the `ω`-exponent of `Z` on the site state `s`.
    pub fn new(n: u32, clock: &[i32], sites: usize) -> Arc<Layout> {
        let d = clock.len();
        let dim = d.pow(sites as u32);
        let mut sector_of = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut rest = idx;
            let mut w = 0i64;
            for _ in 0..sites {
                w += clock[rest % d] as i64;
                rest /= d;
            }
            sector_of.push(w.rem_euclid(n as i64) as u32);
        }
        let mut members = vec![Vec::new(); n as usize];
        let mut local = vec![0u32; dim];
        for (idx, &s) in sector_of.iter().enumerate() {
            local[idx] = members[s as usize].len() as u32;
            members[s as usize].push(idx as u32);
        }
        Arc::new(Layout {
            n,
            dim,
            sector_of,
            local,
            members,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sector_of(&self, state: usize) -> u32 {
        self.sector_of[state]
    }

    pub fn sector_size(&self, sector: u32) -> usize {
        self.members[sector as usize].len()
    }

    pub fn members(&self, sector: u32) -> &[u32] {
        &self.members[sector as usize]
    }

    fn target(&self, source: u32, charge: u32) -> u32 {
        (source + charge) % self.n
    }
}

/// Compressed sparse rows; no explicit zeros, columns ascending per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr<S> {
    pub rows: usize,
    pub cols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<u32>,
    pub vals: Vec<S>,
}

impl<S: Scalar> Csr<S> {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Csr {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (u32, &S)> {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col_idx[a..b].iter().copied().zip(&self.vals[a..b])
    }

    fn from_rows(rows: usize, cols: usize, data: Vec<Vec<(u32, S)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows + 1);
        row_ptr.push(0);
        let total = data.iter().map(Vec::len).sum();
        let mut col_idx = Vec::with_capacity(total);
        let mut vals = Vec::with_capacity(total);
        for row in data {
            for (c, v) in row {
                col_idx.push(c);
                vals.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Csr {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        }
    }

    fn map_rows<F>(&self, f: F) -> Self
    where
        F: Fn(&S) -> S + Sync,
    {
        let data: Vec<Vec<(u32, S)>> = (0..self.rows)
            .into_par_iter()
            .map(|r| {
                self.row(r)
                    .map(|(c, v)| (c, f(v)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Csr::from_rows(self.rows, self.cols, data)
    }

    /// Gustavson product, parallel over output rows.
    fn matmul(&self, other: &Csr<S>) -> Csr<S> {
        debug_assert_eq!(self.cols, other.rows);
        if self.nnz() == 0 || other.nnz() == 0 {
            return Csr::empty(self.rows, other.cols);
        }
        let cols = other.cols;
        let data: Vec<Vec<(u32, S)>> = (0..self.rows)
            .into_par_iter()
            .map_init(
                || (vec![None::<S>; cols], Vec::<u32>::new()),
                |(acc, touched), r| {
                    for (k, a) in self.row(r) {
                        for (c, b) in other.row(k as usize) {
                            match &mut acc[c as usize] {
                                Some(x) => x.add_mul(a, b),
                                slot @ None => {
                                    *slot = Some(a.mul(b));
                                    touched.push(c);
                                }
                            }
                        }
                    }
                    touched.sort_unstable();
                    let mut out = Vec::with_capacity(touched.len());
                    for &c in touched.iter() {
                        let v = acc[c as usize].take().expect("touched slot");
                        if !v.is_zero() {
                            out.push((c, v));
                        }
                    }
                    touched.clear();
                    out
                },
            )
            .collect();
        Csr::from_rows(self.rows, cols, data)
    }

    fn combine(&self, other: &Csr<S>, negate: bool) -> Csr<S> {
        let data: Vec<Vec<(u32, S)>> = (0..self.rows)
            .into_par_iter()
            .map(|r| {
                let mut a = self.row(r).peekable();
                let mut b = other.row(r).peekable();
                let mut out = Vec::new();
                loop {
                    match (a.peek(), b.peek()) {
                        (None, None) => break,
                        (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                            let v = if negate { va.sub(vb) } else { va.add(vb) };
                            if !v.is_zero() {
                                out.push((ca, v));
                            }
                            a.next();
                            b.next();
                        }
                        (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                            out.push((ca, va.clone()));
                            a.next();
                        }
                        (Some(&(ca, va)), None) => {
                            out.push((ca, va.clone()));
                            a.next();
                        }
                        (_, Some(&(cb, vb))) => {
                            out.push((cb, if negate { vb.neg() } else { vb.clone() }));
                            b.next();
                        }
                    }
                }
                out
            })
            .collect();
        Csr::from_rows(self.rows, self.cols, data)
    }
}

/// Location and value of one stored entry, in global basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub row: u64,
    pub col: u64,
    pub value: String,
}

#[derive(Debug, Clone)]
pub struct GradedOperator<S: Scalar> {
    layout: Arc<Layout>,
    ctx: S::Ctx,
    charge: u32,
    blocks: Vec<Csr<S>>,
}

impl<S: Scalar> PartialEq for GradedOperator<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.layout != other.layout {
            return false;
        }
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.charge == other.charge && self.blocks == other.blocks
    }
}

impl<S: Scalar> GradedOperator<S> {
    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn charge(&self) -> u32 {
        self.charge
    }

    pub fn blocks(&self) -> &[Csr<S>] {
        &self.blocks
    }

    pub fn zero(layout: &Arc<Layout>, ctx: S::Ctx, charge: u32) -> Self {
        let charge = charge % layout.n;
        let blocks = (0..layout.n)
            .map(|m| Csr::empty(layout.sector_size(layout.target(m, charge)), layout.sector_size(m)))
            .collect();
        GradedOperator {
            layout: layout.clone(),
            ctx,
            charge,
            blocks,
        }
    }

    pub fn diagonal<F: Fn(usize) -> S>(layout: &Arc<Layout>, ctx: S::Ctx, f: F) -> Self {
        let blocks = (0..layout.n)
            .map(|m| {
                let members = layout.members(m);
                let data = members
                    .iter()
                    .enumerate()
                    .map(|(i, &g)| {
                        let v = f(g as usize);
                        if v.is_zero() {
                            vec![]
                        } else {
                            vec![(i as u32, v)]
                        }
                    })
                    .collect();
                Csr::from_rows(members.len(), members.len(), data)
            })
            .collect();
        GradedOperator {
            layout: layout.clone(),
            ctx,
            charge: 0,
            blocks,
        }
    }

    pub fn identity(layout: &Arc<Layout>, ctx: S::Ctx) -> Self {
        Self::diagonal(layout, ctx, |_| S::one(ctx))
    }

    /// Builds from global `(row, col, value)` triplets, summing duplicates.
    /// `charge_hint` is used only when no nonzero entry fixes the charge.
    pub fn from_triplets(
        layout: &Arc<Layout>,
        ctx: S::Ctx,
        charge_hint: u32,
        triplets: Vec<(usize, usize, S)>,
    ) -> Result<Self> {
        let n = layout.n;
        let mut charge: Option<u32> = None;
        let mut per_block: Vec<Vec<(u32, u32, S)>> = vec![Vec::new(); n as usize];
        for (r, c, v) in triplets {
            if v.is_zero() {
                continue;
            }
            let (sr, sc) = (layout.sector_of(r), layout.sector_of(c));
            let shift = (sr + n - sc) % n;
            match charge {
                None => charge = Some(shift),
                Some(ch) if ch != shift => {
                    return Err(Error::NotGraded(format!(
                        "entry ({r}, {c}) shifts sector by {shift}, expected {ch}"
                    )))
                }
                _ => {}
            }
            per_block[sc as usize].push((layout.local[r], layout.local[c], v));
        }
        let charge = charge.unwrap_or(charge_hint % n);
        let blocks = per_block
            .into_iter()
            .enumerate()
            .map(|(m, mut entries)| {
                let m = m as u32;
                let rows = layout.sector_size(layout.target(m, charge));
                let cols = layout.sector_size(m);
                entries.sort_by_key(|&(r, c, _)| (r, c));
                let mut data: Vec<Vec<(u32, S)>> = vec![Vec::new(); rows];
                for (r, c, v) in entries {
                    let row = &mut data[r as usize];
                    match row.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                        _ => row.push((c, v)),
                    }
                }
                for row in data.iter_mut() {
                    row.retain(|(_, v)| !v.is_zero());
                }
                Csr::from_rows(rows, cols, data)
            })
            .collect();
        Ok(GradedOperator {
            layout: layout.clone(),
            ctx,
            charge,
            blocks,
        })
    }

    pub fn nnz(&self) -> usize {
        self.blocks.iter().map(Csr::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// Every stored entry is below the float threshold (exact rings: is zero).
    pub fn is_negligible(&self) -> bool {
        self.blocks.iter().all(|b| b.vals.iter().all(S::is_negligible))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.vals.iter())
            .map(S::magnitude)
            .fold(0.0, f64::max)
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.layout, &other.layout) && self.layout != other.layout {
            return Err(Error::InvalidParams("operators live on different chains".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        let n = self.layout.n;
        let charge = (self.charge + other.charge) % n;
        let blocks = (0..n)
            .map(|m| {
                let mid = self.layout.target(m, other.charge);
                self.blocks[mid as usize].matmul(&other.blocks[m as usize])
            })
            .collect();
        Ok(GradedOperator {
            layout: self.layout.clone(),
            ctx: self.ctx,
            charge,
            blocks,
        })
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        self.check_layout(other)?;
        if self.charge != other.charge {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(if negate { other.neg() } else { other.clone() });
            }
            return Err(Error::NotGraded(format!(
                "cannot add operators of charge {} and {}",
                self.charge, other.charge
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.combine(b, negate))
            .collect();
        Ok(GradedOperator {
            layout: self.layout.clone(),
            ctx: self.ctx,
            charge: self.charge,
            blocks,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn neg(&self) -> Self {
        self.map_values(S::neg)
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(&self.layout, self.ctx, self.charge);
        }
        self.map_values(|v| s.mul(v))
    }

    pub fn scale_laurent(&self, p: &LaurentPoly) -> Self {
        self.scale(&S::from_laurent(self.ctx, p))
    }

    fn map_values<F: Fn(&S) -> S + Sync>(&self, f: F) -> Self {
        GradedOperator {
            layout: self.layout.clone(),
            ctx: self.ctx,
            charge: self.charge,
            blocks: self.blocks.iter().map(|b| b.map_rows(&f)).collect(),
        }
    }

    /// Entry-wise ring change. Zeros produced by the map are dropped.
    pub fn try_map<T: Scalar, F>(&self, ctx: T::Ctx, f: F) -> Result<GradedOperator<T>>
    where
        F: Fn(&S) -> Result<T> + Sync,
    {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let data = (0..b.rows)
                    .into_par_iter()
                    .map(|r| {
                        let mut row = Vec::new();
                        for (c, v) in b.row(r) {
                            let w = f(v)?;
                            if !w.is_zero() {
                                row.push((c, w));
                            }
                        }
                        Ok(row)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Csr::from_rows(b.rows, b.cols, data))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedOperator {
            layout: self.layout.clone(),
            ctx,
            charge: self.charge,
            blocks,
        })
    }

    /// Entry-wise exact division by one scalar.
    pub fn div_scalar(&self, d: &S) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::NotDivisible(format!("division by zero in {}", S::ring_name())));
        }
        self.try_map(self.ctx, |v| v.div_exact(d))
    }

    /// Consistency of the block structure with a single shift class.
    pub fn charge_of(&self) -> Result<u32> {
        let n = self.layout.n;
        for (m, b) in self.blocks.iter().enumerate() {
            let target = self.layout.target(m as u32, self.charge);
            if b.cols != self.layout.sector_size(m as u32)
                || b.rows != self.layout.sector_size(target)
            {
                return Err(Error::NotGraded(format!(
                    "block {m} has shape {}x{} inconsistent with charge {} mod {n}",
                    b.rows, b.cols, self.charge
                )));
            }
        }
        Ok(self.charge)
    }

    /// Restriction to the domain block of sector `q` (other blocks cleared).
    pub fn sector_project(&self, q: u32) -> Self {
        let mut out = self.clone();
        for (m, b) in out.blocks.iter_mut().enumerate() {
            if m as u32 != q % self.layout.n {
                *b = Csr::empty(b.rows, b.cols);
            }
        }
        out
    }

    /// All stored entries in global indices, row-major.
    pub fn entries(&self) -> Vec<(usize, usize, &S)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (m, b) in self.blocks.iter().enumerate() {
            let src = self.layout.members(m as u32);
            let dst = self.layout.members(self.layout.target(m as u32, self.charge));
            for r in 0..b.rows {
                for (c, v) in b.row(r) {
                    out.push((dst[r] as usize, src[c as usize] as usize, v));
                }
            }
        }
        out.sort_by_key(|&(r, c, _)| (r, c));
        out
    }

    /// The first entry in row-major order, if any.
    pub fn first_entry(&self) -> Option<Entry> {
        self.entries().first().map(|&(r, c, v)| Entry {
            row: r as u64,
            col: c as u64,
            value: v.to_string(),
        })
    }

    /// The largest-magnitude entry (float) or first entry (exact).
    pub fn witness_entry(&self) -> Option<Entry> {
        if S::EXACT {
            return self.first_entry();
        }
        self.entries()
            .into_iter()
            .max_by(|a, b| a.2.magnitude().total_cmp(&b.2.magnitude()))
            .map(|(r, c, v)| Entry {
                row: r as u64,
                col: c as u64,
                value: v.to_string(),
            })
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let dim = self.layout.dim;
        let mut out = vec![vec![S::zero(self.ctx); dim]; dim];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub(crate) fn from_parts(
        layout: &Arc<Layout>,
        ctx: S::Ctx,
        charge: u32,
        blocks: Vec<Csr<S>>,
    ) -> Result<Self> {
        if blocks.len() != layout.n as usize {
            return Err(Error::Cache("wrong number of blocks".into()));
        }
        let op = GradedOperator {
            layout: layout.clone(),
            ctx,
            charge: charge % layout.n,
            blocks,
        };
        op.charge_of()?;
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::Int;
    use proptest::prelude::*;

    fn lp(c: i64) -> LaurentPoly {
        LaurentPoly::constant(Int::from(c))
    }

    fn layout() -> Arc<Layout> {
        // two spin-half sites, clock labels (−1, 0), N = 2
        Layout::new(2, &[-1, 0], 2)
    }

    fn dense_mul(a: &[Vec<LaurentPoly>], b: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(LaurentPoly::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn layout_sectors() {
        let l = layout();
        assert_eq!(l.dim(), 4);
        // |↑↑⟩ → −2 ≡ 0, |↑↓⟩ → 1, |↓↑⟩ → 1, |↓↓⟩ → 0
        assert_eq!(l.members(0), &[0, 3]);
        assert_eq!(l.members(1), &[1, 2]);
    }

    #[test]
    fn ungraded_triplets_rejected() {
        let l = layout();
        let t = vec![(0, 1, lp(1)), (0, 3, lp(1))];
        let e = GradedOperator::<LaurentPoly>::from_triplets(&l, (), 0, t).unwrap_err();
        assert_eq!(e.kind(), "NotGraded");
    }

    #[test]
    fn identity_and_projection() {
        let l = layout();
        let id = GradedOperator::<LaurentPoly>::identity(&l, ());
        assert_eq!(id.charge_of().unwrap(), 0);
        let p = id.sector_project(1);
        let d = p.to_dense();
        assert_eq!(d[1][1], lp(1));
        assert_eq!(d[2][2], lp(1));
        assert!(d[0][0].is_zero() && d[3][3].is_zero());
    }

    #[test]
    fn adding_mismatched_charges_fails() {
        let l = layout();
        let a = GradedOperator::from_triplets(&l, (), 0, vec![(1, 0, lp(1))]).unwrap();
        let b = GradedOperator::identity(&l, ());
        assert_eq!(a.add(&b).unwrap_err().kind(), "NotGraded");
        let z = GradedOperator::zero(&l, (), 0);
        assert_eq!(a.add(&z).unwrap(), a);
    }

    fn arb_graded(charge: u32) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
        let l = layout();
        let pairs: Vec<(usize, usize)> = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| (l.sector_of(r) + 2 - l.sector_of(c)) % 2 == charge)
            .collect();
        proptest::collection::vec((0..pairs.len(), -3i64..4), 0..8).prop_map(move |v| {
            v.into_iter()
                .map(|(i, x)| (pairs[i].0, pairs[i].1, x))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn product_matches_dense(a in arb_graded(1), b in arb_graded(0), c1 in 0u32..2) {
            let l = layout();
            let mk = |t: &Vec<(usize, usize, i64)>, ch| {
                GradedOperator::from_triplets(&l, (), ch,
                    t.iter().map(|&(r, c, x)| (r, c, lp(x))).collect()).unwrap()
            };
            let (oa, ob) = (mk(&a, 1), mk(&b, 0));
            let prod = oa.mul(&ob).unwrap();
            prop_assert_eq!(prod.to_dense(), dense_mul(&oa.to_dense(), &ob.to_dense()));
            let sum = ob.add(&ob.scale(&lp(c1 as i64))).unwrap();
            let expect = ob.scale(&lp(1 + c1 as i64));
            prop_assert_eq!(sum, expect);
            prop_assert!(oa.sub(&oa).unwrap().is_zero());
        }
    }
}
