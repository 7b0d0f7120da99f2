//! Python bindings for ffquad: polynomials over F_q, real quadratic fields,
//! the omega counter and its Poisson form, Vaughan terms, and the CLI
//! commands as tables.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ffquad::algebra::{factorize, is_irreducible, mangoldt_poly, mobius_poly, Poly as CorePoly};
use ffquad::diophantine::{pnt_sum as core_pnt_sum, Prepared, Target, DEFAULT_SCALE_CAP};
use ffquad::harness::{run_command, Cell, Command, Options, RunConfig};
use ffquad::quadratic::{QuadElem, QuadField as CoreField};
use ffquad::vaughan::{vaughan_terms_poly, VaughanParams};
use ffquad::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::IdentityFailure(_) | Error::Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Polynomial over F_q with ascending coefficients.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pyffquad")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Poly {
    inner: CorePoly,
}

#[pymethods]
impl Poly {
    #[new]
    fn new(q: u64, coeffs: Vec<i64>) -> PyResult<Self> {
        ffquad::algebra::check_modulus(q).map_err(err)?;
        Ok(Poly { inner: CorePoly::from_i64(q, &coeffs) })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.modulus()
    }

    #[getter]
    fn coeffs(&self) -> Vec<u64> {
        self.inner.coeffs().to_vec()
    }

    /// Degree; -1 for the zero polynomial.
    #[getter]
    fn degree(&self) -> i64 {
        self.inner.deg()
    }

    fn __add__(&self, other: &Poly) -> PyResult<Poly> {
        self.same_field(other)?;
        Ok(Poly { inner: self.inner.add(&other.inner) })
    }

    fn __sub__(&self, other: &Poly) -> PyResult<Poly> {
        self.same_field(other)?;
        Ok(Poly { inner: self.inner.sub(&other.inner) })
    }

    fn __mul__(&self, other: &Poly) -> PyResult<Poly> {
        self.same_field(other)?;
        Ok(Poly { inner: self.inner.mul(&other.inner) })
    }

    fn divmod(&self, other: &Poly) -> PyResult<(Poly, Poly)> {
        self.same_field(other)?;
        let (a, b) = self.inner.divrem(&other.inner).map_err(err)?;
        Ok((Poly { inner: a }, Poly { inner: b }))
    }

    fn gcd(&self, other: &Poly) -> PyResult<Poly> {
        self.same_field(other)?;
        Ok(Poly { inner: self.inner.gcd(&other.inner) })
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        is_irreducible(&self.inner).map_err(err)
    }

    /// (unit, [(factor, exponent), ...]) with monic irreducible factors.
    fn factorize(&self) -> PyResult<(u64, Vec<(Poly, u32)>)> {
        let f = factorize(&self.inner).map_err(err)?;
        Ok((f.unit, f.factors.into_iter().map(|(p, e)| (Poly { inner: p }, e)).collect()))
    }

    fn mobius(&self) -> PyResult<i64> {
        mobius_poly(&self.inner).map_err(err)
    }

    fn mangoldt(&self) -> PyResult<u64> {
        mangoldt_poly(&self.inner).map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({}, [{}])", self.q(), self.inner.to_text())
    }
}

impl Poly {
    fn same_field(&self, other: &Poly) -> PyResult<()> {
        if self.q() != other.q() {
            return Err(err(Error::FieldMismatch(self.q(), other.q())));
        }
        Ok(())
    }
}

/// K = F_q(T)(sqrt d) with d given as ascending coefficients, e.g. "1,0,1".
#[pyclass(frozen, module = "pyffquad")]
struct QuadField {
    inner: CoreField,
    d_text: String,
}

fn elem(q: u64, text: &str) -> PyResult<QuadElem> {
    QuadElem::parse(q, text).map_err(err)
}

#[pymethods]
impl QuadField {
    #[new]
    fn new(q: u64, d: &str) -> PyResult<Self> {
        Ok(QuadField { inner: CoreField::from_text(q, d).map_err(err)?, d_text: d.to_string() })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    /// Fundamental unit as {"u": "a;b", "abs_exp": k, "norm": c}.
    fn unit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let u = self.inner.unit();
        let d = PyDict::new(py);
        d.set_item("u", u.u.to_text())?;
        d.set_item("abs_exp", u.abs_exp)?;
        d.set_item("norm", u.norm_unit)?;
        Ok(d)
    }

    /// Norm of a + b sqrt d, given as "a;b" (ascending coefficients).
    fn norm(&self, v: &str) -> PyResult<Poly> {
        Ok(Poly { inner: self.inner.norm(&elem(self.q(), v)?) })
    }

    /// Canonical generators of every principal ideal of norm q^n, as "a;b".
    fn generators(&self, n: i64) -> Vec<String> {
        self.inner.generators_of_norm_exp(n).iter().map(QuadElem::to_text).collect()
    }

    /// Sum of Lambda over ideals of norm q^n.
    fn pnt_sum(&self, n: i64) -> PyResult<u64> {
        core_pnt_sum(&self.inner, n, DEFAULT_SCALE_CAP).map_err(err)
    }

    /// omega for generator `v` against the seeded target, both directly and
    /// through the dual sum: {"direct", "poisson", "prefactor_exp", "terms"}.
    #[pyo3(signature = (v, radius_exp, seed, tail = -30))]
    fn omega<'py>(
        &self,
        py: Python<'py>,
        v: &str,
        radius_exp: i64,
        seed: u64,
        tail: i64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let v = elem(self.q(), v)?;
        let t = Target::seeded(self.q(), seed, tail);
        let prep = Prepared::new(&self.inner, &t).map_err(err)?;
        let direct = prep.omega_direct(&v, radius_exp, false).map_err(err)?;
        let dual = prep.omega_poisson(&v, radius_exp).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("direct", direct.count)?;
        d.set_item("poisson", dual.value)?;
        d.set_item("prefactor_exp", dual.prefactor_exp)?;
        d.set_item("terms", dual.terms)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("QuadField({}, \"{}\")", self.q(), self.d_text)
    }
}

/// (a1, a2, a3) of the Vaughan identity for a monic polynomial.
#[pyfunction]
fn vaughan_terms(f: &Poly, alpha: u64, beta: u64) -> PyResult<(i64, i64, i64)> {
    let t = vaughan_terms_poly(&f.inner, VaughanParams { alpha, beta }).map_err(err)?;
    Ok((t.a1, t.a2, t.a3))
}

fn cell<'py>(py: Python<'py>, c: &Cell) -> PyResult<Bound<'py, PyAny>> {
    Ok(match c {
        Cell::Int(i) => i.into_pyobject(py)?.into_any(),
        Cell::Float(x) => x.into_pyobject(py)?.into_any(),
        Cell::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Cell::Text(s) => s.into_pyobject(py)?.into_any(),
        Cell::Null => py.None().into_bound(py),
    })
}

/// Runs a CLI command (e.g. "scan", "pnt") and returns its rows as dicts.
/// Keyword arguments use the config-file keys.
#[pyfunction]
#[pyo3(signature = (command, **kwargs))]
fn run<'py>(py: Python<'py>, command: &str, kwargs: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyList>> {
    use clap::ValueEnum;
    let cmd = Command::from_str(command, false).map_err(PyValueError::new_err)?;
    let mut toml_text = String::new();
    if let Some(kw) = kwargs {
        for (k, v) in kw.iter() {
            let key: String = k.extract()?;
            let val = if let Ok(b) = v.extract::<bool>() {
                b.to_string()
            } else if let Ok(i) = v.extract::<i64>() {
                i.to_string()
            } else if let Ok(x) = v.extract::<f64>() {
                format!("{x:?}")
            } else {
                let s: String = v.extract()?;
                format!("{s:?}")
            };
            toml_text.push_str(&format!("{key} = {val}\n"));
        }
    }
    let opts: Options = toml::from_str(&toml_text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let cfg = RunConfig::resolve(cmd, opts).map_err(err)?;
    let out = py.detach(|| run_command(&cfg)).map_err(err)?;
    let rows = PyList::empty(py);
    for r in &out.table.rows {
        let d = PyDict::new(py);
        for (name, c) in out.table.columns.iter().zip(r) {
            d.set_item(name, cell(py, c)?)?;
        }
        rows.append(d)?;
    }
    Ok(rows)
}

#[pymodule]
fn pyffquad(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_class::<QuadField>()?;
    m.add_function(wrap_pyfunction!(vaughan_terms, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
