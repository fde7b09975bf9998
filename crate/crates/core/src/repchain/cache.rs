//! On-disk operator cache.
//!
//! File layout (little endian):
//! `"QLOOPOP1"`, key length `u32`, key bytes, charge `u32`, dim `u64`,
//! block count `u32`, then per block: sector `u32`, rows `u64`, cols `u64`,
//! nnz `u64`, `row_ptr` as `u64 × (rows+1)`, `col_idx` as `u32 × nnz`, and
//! the `nnz` encoded scalars. Files are named by the SHA-256 of the key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::repchain::operator::{Csr, GradedOperator, Layout};
use crate::scalar::{read_u32, read_u64, Scalar};

pub const MAGIC: &[u8; 8] = b"QLOOPOP1";

/// Everything that determines a cached operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub backend: String,
    pub n: u32,
    pub l: usize,
    pub ring: String,
    pub op: String,
    pub normalization: String,
    pub order: u32,
    /// Empty when no rescaling is applied.
    pub rescale: String,
}

impl CacheKey {
    pub fn canonical(&self) -> String {
        format!(
            "backend={};N={};L={};ring={};op={};norm={};n={};rescale={}",
            self.backend, self.n, self.l, self.ring, self.op, self.normalization, self.order, self.rescale
        )
    }

    pub fn file_name(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        format!("{}.qop", hex::encode(digest))
    }
}

pub fn encode<S: Scalar>(key: &CacheKey, op: &GradedOperator<S>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    let k = key.canonical();
    out.extend_from_slice(&(k.len() as u32).to_le_bytes());
    out.extend_from_slice(k.as_bytes());
    out.extend_from_slice(&op.charge().to_le_bytes());
    out.extend_from_slice(&(op.layout().dim() as u64).to_le_bytes());
    out.extend_from_slice(&(op.blocks().len() as u32).to_le_bytes());
    for (m, b) in op.blocks().iter().enumerate() {
        out.extend_from_slice(&(m as u32).to_le_bytes());
        out.extend_from_slice(&(b.rows as u64).to_le_bytes());
        out.extend_from_slice(&(b.cols as u64).to_le_bytes());
        out.extend_from_slice(&(b.nnz() as u64).to_le_bytes());
        for &p in &b.row_ptr {
            out.extend_from_slice(&(p as u64).to_le_bytes());
        }
        for &c in &b.col_idx {
            out.extend_from_slice(&c.to_le_bytes());
        }
        for v in &b.vals {
            v.encode(&mut out);
        }
    }
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Cache(msg.into())
}

pub fn decode<S: Scalar>(
    key: &CacheKey,
    layout: &Arc<Layout>,
    ctx: S::Ctx,
    bytes: &[u8],
) -> Result<GradedOperator<S>> {
    let mut input = bytes;
    if input.len() < 8 || &input[..8] != MAGIC {
        return Err(bad("missing QLOOPOP1 header"));
    }
    input = &input[8..];
    let klen = read_u32(&mut input)? as usize;
    if input.len() < klen {
        return Err(bad("truncated key"));
    }
    let (kb, rest) = input.split_at(klen);
    input = rest;
    if kb != key.canonical().as_bytes() {
        return Err(bad("key mismatch (hash collision or stale file)"));
    }
    let charge = read_u32(&mut input)?;
    let dim = read_u64(&mut input)? as usize;
    if dim != layout.dim() {
        return Err(bad(format!("dimension {dim} does not match chain {}", layout.dim())));
    }
    let nblocks = read_u32(&mut input)? as usize;
    let mut blocks = Vec::with_capacity(nblocks);
    for expect in 0..nblocks {
        let m = read_u32(&mut input)? as usize;
        if m != expect {
            return Err(bad("blocks out of order"));
        }
        let rows = read_u64(&mut input)? as usize;
        let cols = read_u64(&mut input)? as usize;
        let nnz = read_u64(&mut input)? as usize;
        let row_ptr = (0..=rows)
            .map(|_| read_u64(&mut input).map(|x| x as usize))
            .collect::<Result<Vec<_>>>()?;
        if row_ptr.last() != Some(&nnz) {
            return Err(bad("row pointer does not end at nnz"));
        }
        let col_idx = (0..nnz)
            .map(|_| read_u32(&mut input))
            .collect::<Result<Vec<_>>>()?;
        let vals = (0..nnz)
            .map(|_| S::decode(ctx, &mut input))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(Csr {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        });
    }
    if !input.is_empty() {
        return Err(bad("trailing bytes"));
    }
    GradedOperator::from_parts(layout, ctx, charge, blocks)
}

#[derive(Debug, Clone)]
pub struct OperatorCache {
    dir: PathBuf,
}

impl OperatorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<OperatorCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .map_err(|e| bad(format!("cannot create {}: {e}", dir.display())))?;
        Ok(OperatorCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// `Ok(None)` on a miss.
    pub fn load<S: Scalar>(
        &self,
        key: &CacheKey,
        layout: &Arc<Layout>,
        ctx: S::Ctx,
    ) -> Result<Option<GradedOperator<S>>> {
        let path = self.path(key);
        match fs::read(&path) {
            Ok(bytes) => decode(key, layout, ctx, &bytes).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(bad(format!("cannot read {}: {e}", path.display()))),
        }
    }

    /// Writes through a temporary file so readers never see partial files.
    pub fn store<S: Scalar>(&self, key: &CacheKey, op: &GradedOperator<S>) -> Result<()> {
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&encode(key, op))?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        };
        write().map_err(|e| bad(format!("cannot write {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::cyclo::{CycloElem, CycloRing};
    use crate::qcomb::laurent::LaurentPoly;
    use crate::repchain::chain::ChainContext;
    use crate::repchain::site::{build_site_rep, SiteKind};

    fn key(op: &str) -> CacheKey {
        CacheKey {
            backend: "spin_half".into(),
            n: 2,
            l: 3,
            ring: "cyclotomic".into(),
            op: op.into(),
            normalization: "q".into(),
            order: 1,
            rescale: String::new(),
        }
    }

    #[test]
    fn roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let ctx = ChainContext::new(build_site_rep(SiteKind::SpinHalf, 2, None).unwrap(), 3).unwrap();
        let g = ctx.build_chain_generators();
        let ring = CycloRing::get(2);
        let op: GradedOperator<CycloElem> = g.e1.try_map(ring, |v| Ok(ring.reduce(v))).unwrap();
        let k = key("E1");
        assert!(cache.load::<CycloElem>(&k, ctx.layout(), ring).unwrap().is_none());
        cache.store(&k, &op).unwrap();
        let back = cache.load::<CycloElem>(&k, ctx.layout(), ring).unwrap().unwrap();
        assert_eq!(back, op);
        assert_eq!(back.blocks(), op.blocks());
        let lop: GradedOperator<LaurentPoly> = g.f0.clone();
        cache.store(&key("F0"), &lop).unwrap();
        assert_eq!(cache.load::<LaurentPoly>(&key("F0"), ctx.layout(), ()).unwrap().unwrap(), lop);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path()).unwrap();
        let ctx = ChainContext::new(build_site_rep(SiteKind::SpinHalf, 2, None).unwrap(), 2).unwrap();
        let k = key("X");
        fs::write(cache.path(&k), b"QLOOPOP0junk").unwrap();
        let e = cache.load::<LaurentPoly>(&k, ctx.layout(), ()).unwrap_err();
        assert_eq!(e.kind(), "CacheError");
    }

    #[test]
    fn file_name_is_key_hash() {
        let a = key("A").file_name();
        assert_eq!(a.len(), 64 + 4);
        assert_ne!(a, key("B").file_name());
    }
}
