//! Single-site matrices `e′, f′, k′, Z` for the three backends.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;
use crate::qcomb::laurent::LaurentPoly;
use crate::qcomb::qnum::q_int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteKind {
    SpinHalf,
    HighestWeight,
    Cyclic,
}

impl SiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SiteKind::SpinHalf => "spin_half",
            SiteKind::HighestWeight => "highest_weight",
            SiteKind::Cyclic => "cyclic",
        }
    }

    pub fn parse(s: &str) -> Result<SiteKind> {
        match s {
            "spin_half" | "spin-half" => Ok(SiteKind::SpinHalf),
            "highest_weight" | "highest-weight" => Ok(SiteKind::HighestWeight),
            "cyclic" => Ok(SiteKind::Cyclic),
            other => Err(Error::UnsupportedKind(other.to_string())),
        }
    }

    /// Whether the defining relations hold before specialization.
    pub fn valid_at_generic_q(self) -> bool {
        !matches!(self, SiteKind::Cyclic)
    }
}

impl fmt::Display for SiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type DenseMatrix = Vec<Vec<LaurentPoly>>;

#[derive(Debug, Clone, PartialEq)]
pub struct SiteRep {
    kind: SiteKind,
    n: u32,
    e: DenseMatrix,
    f: DenseMatrix,
    /// `k′ = diag(q^{k_exp})`.
    k_exp: Vec<i32>,
    /// `Z = diag(ω^{clock}) = diag(q^{2 clock})`; also the exponent of `A^{1/2}`.
    clock: Vec<i32>,
    c: Option<LaurentPoly>,
}

fn zeros(d: usize) -> DenseMatrix {
    vec![vec![LaurentPoly::zero(); d]; d]
}

pub fn build_site_rep(kind: SiteKind, n: u32, c: Option<LaurentPoly>) -> Result<SiteRep> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
    }
    if c.is_some() && kind != SiteKind::Cyclic {
        return Err(Error::InvalidParams(format!(
            "parameter c only applies to the cyclic backend, not {kind}"
        )));
    }
    let rep = match kind {
        SiteKind::SpinHalf => {
            // basis (↑, ↓)
            let mut e = zeros(2);
            let mut f = zeros(2);
            e[0][1] = LaurentPoly::one();
            f[1][0] = LaurentPoly::one();
            SiteRep {
                kind,
                n,
                e,
                f,
                k_exp: vec![1, -1],
                clock: vec![-1, 0],
                c: None,
            }
        }
        SiteKind::HighestWeight => {
            let d = n as usize;
            let mut e = zeros(d);
            let mut f = zeros(d);
            for s in 0..d {
                if s >= 1 {
                    e[s - 1][s] = q_int((d - s) as i64);
                }
                if s + 1 < d {
                    f[s + 1][s] = q_int(s as i64 + 1);
                }
            }
            SiteRep {
                kind,
                n,
                e,
                f,
                k_exp: (0..d as i32).map(|s| d as i32 - 1 - 2 * s).collect(),
                clock: (0..d as i32).collect(),
                c: None,
            }
        }
        SiteKind::Cyclic => {
            let c = c.ok_or_else(|| {
                Error::InvalidParams("the cyclic backend needs the parameter c".into())
            })?;
            let d = n as usize;
            let mut e = zeros(d);
            let mut f = zeros(d);
            for s in 0..d {
                let qs = q_int(s as i64);
                e[(s + d - 1) % d][s] = &c - &(&qs * &qs);
                f[(s + 1) % d][s] = LaurentPoly::one();
            }
            SiteRep {
                kind,
                n,
                e,
                f,
                k_exp: (0..d as i32).map(|s| -(2 * s + 1)).collect(),
                clock: (0..d as i32).collect(),
                c: Some(c),
            }
        }
    };
    Ok(rep)
}

impl SiteRep {
    pub fn kind(&self) -> SiteKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.clock.len()
    }

    pub fn c(&self) -> Option<&LaurentPoly> {
        self.c.as_ref()
    }

    pub fn e_pr(&self) -> &DenseMatrix {
        &self.e
    }

    pub fn f_pr(&self) -> &DenseMatrix {
        &self.f
    }

    pub fn k_exponents(&self) -> &[i32] {
        &self.k_exp
    }

    pub fn clock(&self) -> &[i32] {
        &self.clock
    }

    fn diag(&self, exps: impl Iterator<Item = i32>) -> DenseMatrix {
        let mut m = zeros(self.dim());
        for (i, x) in exps.enumerate() {
            m[i][i] = LaurentPoly::q_pow(x);
        }
        m
    }

    /// `k′^{±1}`.
    pub fn k_pr(&self, inverse: bool) -> DenseMatrix {
        let s = if inverse { -1 } else { 1 };
        self.diag(self.k_exp.iter().map(|x| s * x))
    }

    /// `Z^{p/2}`, i.e. `diag(q^{p·clock})`. `p = 2` is `Z`.
    pub fn z_half_pow(&self, p: i32) -> DenseMatrix {
        self.diag(self.clock.iter().map(|x| p * x))
    }

    /// The unprimed pair `e = −q⁻¹ e′ Z^{1/2}`, `f = q⁻¹ Z^{1/2} f′`.
    pub fn unprimed(&self) -> (DenseMatrix, DenseMatrix) {
        let zh = self.z_half_pow(1);
        let minus_qinv = LaurentPoly::monomial(Int::from(-1), -1);
        let qinv = LaurentPoly::q_pow(-1);
        let e = dense_scale(&dense_mul(&self.e, &zh), &minus_qinv);
        let f = dense_scale(&dense_mul(&zh, &self.f), &qinv);
        (e, f)
    }
}

pub fn dense_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

pub fn dense_sub(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn dense_scale(a: &DenseMatrix, s: &LaurentPoly) -> DenseMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| x * s).collect())
        .collect()
}

pub fn dense_identity(d: usize) -> DenseMatrix {
    let mut m = zeros(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = LaurentPoly::one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_half_matrices() {
        let r = build_site_rep(SiteKind::SpinHalf, 2, None).unwrap();
        assert_eq!(r.dim(), 2);
        // Z = (q k′)⁻¹
        let qk = dense_scale(&r.k_pr(false), &LaurentPoly::q_pow(1));
        assert_eq!(dense_mul(&qk, &r.z_half_pow(2)), dense_identity(2));
        // primed from unprimed: e′ = −q e Z^{-1/2}
        let (e, f) = r.unprimed();
        let back = dense_scale(&dense_mul(&e, &r.z_half_pow(-1)), &LaurentPoly::monomial(Int::from(-1), 1));
        assert_eq!(&back, r.e_pr());
        let back_f = dense_scale(&dense_mul(&r.z_half_pow(-1), &f), &LaurentPoly::q_pow(1));
        assert_eq!(&back_f, r.f_pr());
    }

    #[test]
    fn highest_weight_nilpotent() {
        let r = build_site_rep(SiteKind::HighestWeight, 3, None).unwrap();
        let e2 = dense_mul(r.e_pr(), r.e_pr());
        assert!(e2.iter().flatten().any(|x| !x.is_zero()));
        let e3 = dense_mul(&e2, r.e_pr());
        assert!(e3.iter().flatten().all(LaurentPoly::is_zero));
        let f3 = dense_mul(&dense_mul(r.f_pr(), r.f_pr()), r.f_pr());
        assert!(f3.iter().flatten().all(LaurentPoly::is_zero));
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(SiteKind::parse("bogus").unwrap_err().kind(), "UnsupportedKind");
        assert_eq!(
            build_site_rep(SiteKind::Cyclic, 3, None).unwrap_err().kind(),
            "InvalidParams"
        );
        assert!(build_site_rep(SiteKind::SpinHalf, 1, None).is_err());
    }
}
