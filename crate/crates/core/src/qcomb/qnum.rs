//! q-integers, q- and ω-factorials and Gaussian binomials as exact Laurent
//! polynomials. `ω` is always the symbol `q²`.

use std::collections::HashMap;
use std::sync::OnceLock;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::int::Int;
use crate::qcomb::laurent::LaurentPoly;

/// Which factorial normalizes a binomial or divided power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `[n]_q = (qⁿ − q⁻ⁿ)/(q − q⁻¹)`.
    Q,
    /// `[n] = (1 − ωⁿ)/(1 − ω)` with `ω = q²`.
    Omega,
}

/// `[n]_q = (qⁿ − q⁻ⁿ)/(q − q⁻¹)` for any integer `n`.
pub fn q_int(n: i64) -> LaurentPoly {
    let sign = if n < 0 { -1 } else { 1 };
    let m = n.unsigned_abs() as i32;
    LaurentPoly::from_terms((0..m).map(|i| (m - 1 - 2 * i, Int::from(sign))))
}

/// `[n] = 1 + ω + … + ω^{n−1}` for `n ≥ 0`, as a polynomial in `q`.
pub fn omega_int(n: u32) -> LaurentPoly {
    LaurentPoly::from_terms((0..n as i32).map(|i| (2 * i, Int::ONE)))
}

fn flavor_int(n: u32, flavor: Flavor) -> LaurentPoly {
    match flavor {
        Flavor::Q => q_int(n as i64),
        Flavor::Omega => omega_int(n),
    }
}

/// Memo table for factorials and binomials. Entries are pure functions of
/// their key, so a racing fill is idempotent.
#[derive(Default)]
pub struct QFactorialTable {
    factorials: RwLock<HashMap<(u32, Flavor), LaurentPoly>>,
    binomials: RwLock<HashMap<(u32, u32, Flavor), LaurentPoly>>,
}

impl QFactorialTable {
    pub fn global() -> &'static QFactorialTable {
        static TABLE: OnceLock<QFactorialTable> = OnceLock::new();
        TABLE.get_or_init(QFactorialTable::default)
    }

    pub fn factorial(&self, n: u32, flavor: Flavor) -> LaurentPoly {
        if let Some(v) = self.factorials.read().get(&(n, flavor)) {
            return v.clone();
        }
        let v = (1..=n).fold(LaurentPoly::one(), |acc, i| &acc * &flavor_int(i, flavor));
        self.factorials.write().insert((n, flavor), v.clone());
        v
    }

    /// Gaussian binomial by the q-Pascal recursion.
    pub fn binomial(&self, s: u32, l: u32, flavor: Flavor) -> LaurentPoly {
        if l > s {
            return LaurentPoly::zero();
        }
        if l == 0 || l == s {
            return LaurentPoly::one();
        }
        let l = l.min(s - l);
        if let Some(v) = self.binomials.read().get(&(s, l, flavor)) {
            return v.clone();
        }
        let a = self.binomial(s - 1, l - 1, flavor);
        let b = self.binomial(s - 1, l, flavor);
        let v = match flavor {
            // [s,l] = q^{-(s-l)}[s-1,l-1] + q^{l}[s-1,l]
            Flavor::Q => &a.shift(-((s - l) as i32)) + &b.shift(l as i32),
            // G(s,l) = G(s-1,l-1) + ω^l G(s-1,l)
            Flavor::Omega => &a + &b.shift(2 * l as i32),
        };
        self.binomials.write().insert((s, l, flavor), v.clone());
        v
    }
}

/// `[n]_q! = Π_{i≤n} [i]_q`.
pub fn q_factorial(n: u32) -> LaurentPoly {
    QFactorialTable::global().factorial(n, Flavor::Q)
}

/// `[n]! = Π_{i≤n} (1 − ωⁱ)/(1 − ω)` as a polynomial in `q`. The root of
/// unity order only enters through later reduction, so `N` is not needed here.
pub fn omega_factorial(n: u32) -> LaurentPoly {
    QFactorialTable::global().factorial(n, Flavor::Omega)
}

pub fn factorial(n: u32, flavor: Flavor) -> LaurentPoly {
    QFactorialTable::global().factorial(n, flavor)
}

/// Gaussian binomial `[s choose l]`; zero outside `0 ≤ l ≤ s`.
pub fn gauss_binomial(s: u32, l: i64, flavor: Flavor) -> LaurentPoly {
    if l < 0 || l > s as i64 {
        return LaurentPoly::zero();
    }
    QFactorialTable::global().binomial(s, l as u32, flavor)
}

/// Independent route: factorial ratio with exact polynomial division.
/// A nonzero remainder is reported as an internal inconsistency.
pub fn gauss_binomial_by_factorials(s: u32, l: i64, flavor: Flavor) -> Result<LaurentPoly> {
    if l < 0 || l > s as i64 {
        return Ok(LaurentPoly::zero());
    }
    let l = l as u32;
    let num = factorial(s, flavor);
    let den = &factorial(l, flavor) * &factorial(s - l, flavor);
    num.div_exact_or_err(&den, &format!("binomial [{s} choose {l}]"))
}
