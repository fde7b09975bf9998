//! Python module `qloop`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qloop::bank::{BankOptions, OpId, OperatorBank};
use qloop::divpow::{check_cross_normalization, check_mulo, check_nilpotency};
use qloop::qcomb::cyclo::{CycloElem, CycloRing};
use qloop::qcomb::laurent::LaurentPoly;
use qloop::qcomb::phiadic::phi_valuation;
use qloop::qcomb::qnum::{self, Flavor};
use qloop::repchain::chain::ChainContext;
use qloop::repchain::site::{build_site_rep, SiteKind};
use qloop::runner::{self, ReportDocument, RunConfig};
use qloop::scalar::RingMode;
use qloop::serre::higher::{check_higher_serre, check_id1, check_id2, Pair};
use qloop::serre::loops::{check_lemma_chain, check_serre_nested, LoopFamily};
use qloop::serre::site::{check_site_suite, Side};
use qloop::{Error, IdentityCheck, Int};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::UnknownId(_) => PyKeyError::new_err(e.to_string()),
        Error::Config(_) | Error::InvalidParams(_) | Error::InvalidRegime(_) | Error::UnsupportedKind(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn flavor(s: &str) -> PyResult<Flavor> {
    match s {
        "q" => Ok(Flavor::Q),
        "omega" | "w" => Ok(Flavor::Omega),
        _ => Err(PyValueError::new_err(format!("flavor must be 'q' or 'omega', got {s:?}"))),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Laurent polynomial in `q` with integer coefficients.
#[pyclass(name = "LaurentPoly", module = "qloop", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLaurent {
    inner: LaurentPoly,
}

#[pymethods]
impl PyLaurent {
    /// `terms` maps exponents to integer coefficients.
    #[new]
    #[pyo3(signature = (terms=None))]
    fn new(terms: Option<BTreeMap<i32, BigInt>>) -> Self {
        let inner = LaurentPoly::from_terms(terms.unwrap_or_default().into_iter().map(|(e, c)| (e, Int::from(c))));
        PyLaurent { inner }
    }

    #[staticmethod]
    #[pyo3(signature = (exp=1))]
    fn q(exp: i32) -> Self {
        PyLaurent {
            inner: LaurentPoly::q_pow(exp),
        }
    }

    fn terms(&self) -> BTreeMap<i32, BigInt> {
        self.inner.terms().iter().map(|(e, c)| (*e, c.to_bigint())).collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn pow(&self, n: u32) -> Self {
        PyLaurent {
            inner: self.inner.pow(n),
        }
    }

    /// Exact quotient, or `None` when `d` does not divide.
    fn div_exact(&self, d: &PyLaurent) -> Option<PyLaurent> {
        self.inner.div_exact(&d.inner).map(|inner| PyLaurent { inner })
    }

    /// Image in `ℤ[q]/Φ_{2N}`.
    #[pyo3(name = "reduce")]
    fn reduce_at(&self, n: u32) -> PyResult<PyCyclo> {
        if n < 2 {
            return Err(PyValueError::new_err("N must be at least 2"));
        }
        Ok(PyCyclo {
            inner: CycloRing::get(n).reduce(&self.inner),
        })
    }

    fn __add__(&self, o: &PyLaurent) -> Self {
        PyLaurent {
            inner: &self.inner + &o.inner,
        }
    }

    fn __sub__(&self, o: &PyLaurent) -> Self {
        PyLaurent {
            inner: &self.inner - &o.inner,
        }
    }

    fn __mul__(&self, o: &PyLaurent) -> Self {
        PyLaurent {
            inner: &self.inner * &o.inner,
        }
    }

    fn __neg__(&self) -> Self {
        PyLaurent {
            inner: -self.inner.clone(),
        }
    }

    fn __eq__(&self, o: &PyLaurent) -> bool {
        self.inner == o.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LaurentPoly({})", self.inner)
    }
}

/// Element of `ℤ[q]/Φ_{2N}`.
#[pyclass(name = "CycloElem", module = "qloop", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCyclo {
    inner: CycloElem,
}

#[pymethods]
impl PyCyclo {
    #[getter(N)]
    fn n(&self) -> u32 {
        self.inner.ring().n()
    }

    /// Coordinates in the power basis `1, q, q², …`.
    fn coords(&self) -> Vec<BigInt> {
        self.inner.coords().iter().map(Int::to_bigint).collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, o: &PyCyclo) -> PyResult<Self> {
        same_ring(&self.inner, &o.inner)?;
        Ok(PyCyclo {
            inner: self.inner.add(&o.inner),
        })
    }

    fn __sub__(&self, o: &PyCyclo) -> PyResult<Self> {
        same_ring(&self.inner, &o.inner)?;
        Ok(PyCyclo {
            inner: self.inner.sub(&o.inner),
        })
    }

    fn __mul__(&self, o: &PyCyclo) -> PyResult<Self> {
        same_ring(&self.inner, &o.inner)?;
        Ok(PyCyclo {
            inner: self.inner.mul(&o.inner),
        })
    }

    fn __eq__(&self, o: &PyCyclo) -> bool {
        self.inner == o.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CycloElem(N={}, {})", self.inner.ring().n(), self.inner)
    }
}

fn same_ring(a: &CycloElem, b: &CycloElem) -> PyResult<()> {
    if a.ring().n() == b.ring().n() {
        Ok(())
    } else {
        Err(PyValueError::new_err("elements live in different rings"))
    }
}

/// One verified identity instance.
#[pyclass(name = "Check", module = "qloop", frozen)]
struct PyCheck {
    inner: IdentityCheck,
}

#[pymethods]
impl PyCheck {
    #[getter]
    fn id(&self) -> &str {
        &self.inner.id
    }

    #[getter]
    fn relation(&self) -> &str {
        &self.inner.relation
    }

    /// `exact_zero`, `vacuous_zero`, `approx_zero`, `nonzero` or `error`.
    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status.label()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    #[getter]
    fn nontrivial(&self) -> bool {
        self.inner.nontrivial.is_some()
    }

    #[getter]
    fn millis(&self) -> u64 {
        self.inner.millis
    }

    #[getter]
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &serde_json::to_string(&self.inner.params).expect("params serialize"))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("check serializes")
    }

    fn __repr__(&self) -> String {
        format!("<Check {}>", self.inner)
    }
}

fn wrap(checks: Vec<IdentityCheck>) -> Vec<PyCheck> {
    checks.into_iter().map(|inner| PyCheck { inner }).collect()
}

#[pyclass(name = "Report", module = "qloop", frozen)]
struct PyReport {
    inner: ReportDocument,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn checks(&self) -> Vec<PyCheck> {
        wrap(self.inner.checks.clone())
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.exit_code()
    }

    #[getter]
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &serde_json::to_string(&self.inner.summary).expect("summary serializes"))
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings()
    }

    /// Mismatches found by the rescale audit, or `None` if it did not run.
    #[getter]
    fn rescale_mismatches(&self) -> Option<usize> {
        self.inner.rescale_audit.as_ref().map(|a| a.mismatches.len())
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn summary_text(&self) -> String {
        self.inner.summary_text()
    }
}

enum Bank {
    Laurent(OperatorBank<LaurentPoly>),
    Cyclo(OperatorBank<CycloElem>),
}

macro_rules! with_bank {
    ($self:expr, $b:ident => $body:expr) => {
        match &$self.bank {
            Bank::Laurent($b) => $body,
            Bank::Cyclo($b) => $body,
        }
    };
}

/// A chain of `L` sites with cached divided powers, in one ring.
#[pyclass(name = "Chain", module = "qloop")]
struct PyChain {
    bank: Bank,
}

fn pair(s: &str) -> PyResult<Pair> {
    Pair::LUSZTIG
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| PyValueError::new_err(format!("pair must be one of E0,E1 E1,E0 F1,F0 F0,F1; got {s:?}")))
}

fn side(s: &str) -> PyResult<Side> {
    Side::BOTH
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| PyValueError::new_err(format!("side must be one_zero or L_Lm1, got {s:?}")))
}

fn family(s: &str) -> PyResult<LoopFamily> {
    match s {
        "x" => Ok(LoopFamily::X),
        "xbar" => Ok(LoopFamily::Xbar),
        _ => Err(PyValueError::new_err(format!("family must be x or xbar, got {s:?}"))),
    }
}

#[pymethods]
impl PyChain {
    #[new]
    #[pyo3(signature = (N, L, backend="spin_half", ring="cyclotomic", rescale=false))]
    #[allow(non_snake_case)]
    fn new(N: u32, L: usize, backend: &str, ring: &str, rescale: bool) -> PyResult<Self> {
        let kind = SiteKind::parse(backend).map_err(py_err)?;
        let c = (kind == SiteKind::Cyclic).then(LaurentPoly::zero);
        let chain = ChainContext::new(build_site_rep(kind, N, c).map_err(py_err)?, L).map_err(py_err)?;
        let mode = RingMode::parse(ring).map_err(py_err)?;
        let opts = BankOptions {
            rescale,
            cache: None,
            max_order: (4 * N).max(L as u32 + 1),
        };
        let bank = match mode {
            RingMode::Laurent => Bank::Laurent(OperatorBank::new(chain, mode, (), opts)),
            RingMode::Cyclotomic | RingMode::PhiAdic => Bank::Cyclo(OperatorBank::new(chain, mode, CycloRing::get(N), opts)),
            RingMode::Float => return Err(PyValueError::new_err("the float ring is available through run() only")),
        };
        Ok(PyChain { bank })
    }

    #[getter]
    fn dim(&self) -> usize {
        with_bank!(self, b => b.chain().dim())
    }

    /// Number of stored nonzeros of a divided power.
    fn divided_power_nnz(&self, op: &str, n: u32) -> PyResult<usize> {
        let op = OpId::parse(op).map_err(py_err)?;
        with_bank!(self, b => Ok(b.dp(op, n).map_err(py_err)?.nnz()))
    }

    fn higher_serre(&self, pair_name: &str, n: u32, m: u32) -> PyResult<PyCheck> {
        let p = pair(pair_name)?;
        Ok(PyCheck {
            inner: with_bank!(self, b => check_higher_serre(b, p, n, m)),
        })
    }

    fn id1(&self, pair_name: &str, n: u32, m: u32) -> PyResult<PyCheck> {
        let p = pair(pair_name)?;
        Ok(PyCheck {
            inner: with_bank!(self, b => check_id1(b, p, n, m)),
        })
    }

    fn id2(&self, pair_name: &str, n: u32, m: u32) -> PyResult<PyCheck> {
        let p = pair(pair_name)?;
        Ok(PyCheck {
            inner: with_bank!(self, b => check_id2(b, p, n, m)),
        })
    }

    fn nilpotency(&self, op: &str) -> PyResult<PyCheck> {
        let op = OpId::parse(op).map_err(py_err)?;
        Ok(PyCheck {
            inner: with_bank!(self, b => check_nilpotency(b, op)),
        })
    }

    fn cross_normalization(&self, n: u32) -> Vec<PyCheck> {
        wrap(with_bank!(self, b => check_cross_normalization(b, n)))
    }

    #[pyo3(name = "mulo")]
    #[allow(non_snake_case)]
    fn mulo_check(&self, k: u32, j: u32, Q: u32) -> PyCheck {
        PyCheck {
            inner: with_bank!(self, b => check_mulo(b, k, j, Q)),
        }
    }

    #[pyo3(signature = (Q, side_name="one_zero"))]
    #[allow(non_snake_case)]
    fn site_suite(&self, Q: u32, side_name: &str) -> PyResult<Vec<PyCheck>> {
        let s = side(side_name)?;
        Ok(wrap(with_bank!(self, b => check_site_suite(b, Q, s))))
    }

    #[allow(non_snake_case)]
    fn lemma_chain(&self, Q: u32) -> Vec<PyCheck> {
        wrap(with_bank!(self, b => check_lemma_chain(b, Q)))
    }

    #[pyo3(signature = (Q, family_name="x"))]
    #[allow(non_snake_case)]
    fn serre_nested(&self, py: Python<'_>, Q: u32, family_name: &str) -> PyResult<Vec<PyCheck>> {
        let f = family(family_name)?;
        let checks = py.detach(|| with_bank!(self, b => check_serre_nested(b, Q, f)));
        Ok(wrap(checks))
    }
}

#[pyfunction]
fn q_int(n: i64) -> PyLaurent {
    PyLaurent { inner: qnum::q_int(n) }
}

#[pyfunction]
#[pyo3(signature = (n, flavor_name="q"))]
fn factorial(n: u32, flavor_name: &str) -> PyResult<PyLaurent> {
    Ok(PyLaurent {
        inner: qnum::factorial(n, flavor(flavor_name)?),
    })
}

#[pyfunction]
#[pyo3(signature = (s, l, flavor_name="q"))]
fn gauss_binomial(s: u32, l: i64, flavor_name: &str) -> PyResult<PyLaurent> {
    Ok(PyLaurent {
        inner: qnum::gauss_binomial(s, l, flavor(flavor_name)?),
    })
}

/// Multiplicity of `Φ_{2N}` in `p`; `None` for zero.
#[pyfunction]
#[allow(non_snake_case)]
fn valuation(p: &PyLaurent, N: u32) -> Option<u32> {
    phi_valuation(&p.inner, N)
}

#[pyfunction]
#[allow(non_snake_case)]
fn qcomb_suite(N: u32) -> PyResult<Vec<PyCheck>> {
    if N < 2 {
        return Err(PyValueError::new_err("N must be at least 2"));
    }
    Ok(wrap(qloop::qcomb::lemmas::qcomb_suite(N)))
}

#[pyfunction]
fn explain(id: &str) -> PyResult<String> {
    qloop::explain::explain(id).map(|e| e.to_string()).map_err(py_err)
}

/// Runs suites like the command-line `run`. Keyword names follow the
/// config file keys.
#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn run(py: Python<'_>, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<PyReport> {
    let mut cfg = RunConfig {
        cache_dir: None,
        ..RunConfig::default()
    };
    if let Some(kw) = kwargs {
        for (k, v) in kw.iter() {
            let key: String = k.extract()?;
            let value = if let Ok(items) = v.extract::<Vec<String>>() {
                items.join(",")
            } else if let Ok(items) = v.extract::<Vec<i64>>() {
                items.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            } else {
                v.str()?.to_string()
            };
            let value = match value.as_str() {
                "True" => "true".to_string(),
                "False" => "false".to_string(),
                _ => value,
            };
            cfg.set(&key, &value).map_err(py_err)?;
        }
    }
    let report = py.detach(|| runner::run(&cfg)).map_err(py_err)?;
    Ok(PyReport { inner: report })
}

#[pymodule]
#[pyo3(name = "qloop")]
fn qloop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", runner::VERSION)?;
    m.add_class::<PyLaurent>()?;
    m.add_class::<PyCyclo>()?;
    m.add_class::<PyCheck>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyChain>()?;
    m.add_function(wrap_pyfunction!(q_int, m)?)?;
    m.add_function(wrap_pyfunction!(factorial, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(valuation, m)?)?;
    m.add_function(wrap_pyfunction!(qcomb_suite, m)?)?;
    m.add_function(wrap_pyfunction!(explain, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
