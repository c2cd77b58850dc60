//! Python bindings: presentations, exact scalars, check reports and the
//! constructions, with vectors passed as lists of scalars.

use std::collections::BTreeMap;

use homcolor::constructions::{self, DerivedType};
use homcolor::format;
use homcolor::{
    check_gi_identities, check_identity, run_suite, AlgebraPresentation, BimoduleKind, CheckOptions,
    Error, IdentityId, Matrix, RoleMap, Scalar as CoreScalar, StructureKind, SuiteReport,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(homcolor, HomcolorError, PyValueError);
create_exception!(homcolor, PreconditionError, HomcolorError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Precondition { reason, report } => {
            PreconditionError::new_err((reason, format::to_pretty(&report.to_json(false))))
        }
        other => HomcolorError::new_err(other.to_string()),
    }
}

/// An exact scalar: a polynomial in parameters and square roots.
#[pyclass(module = "homcolor", name = "Scalar", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Scalar {
    inner: CoreScalar,
}

#[pymethods]
impl Scalar {
    #[new]
    #[pyo3(signature = (value=0))]
    fn new(value: i64) -> Self {
        Scalar { inner: CoreScalar::from_int(value) }
    }

    #[staticmethod]
    fn ratio(num: i64, den: i64) -> PyResult<Self> {
        if den == 0 {
            return Err(HomcolorError::new_err("zero denominator"));
        }
        Ok(Scalar { inner: CoreScalar::ratio(num, den) })
    }

    #[staticmethod]
    fn param(name: &str) -> Self {
        Scalar { inner: CoreScalar::param(name) }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: ScalarArg) -> PyResult<Scalar> {
        let s = self.inner.checked_add(&other.0).map_err(|e| err(e.into()))?;
        Ok(Scalar { inner: s })
    }

    fn __radd__(&self, other: ScalarArg) -> PyResult<Scalar> {
        self.__add__(other)
    }

    fn __sub__(&self, other: ScalarArg) -> PyResult<Scalar> {
        let s = self.inner.checked_add(&-other.0).map_err(|e| err(e.into()))?;
        Ok(Scalar { inner: s })
    }

    fn __mul__(&self, other: ScalarArg) -> PyResult<Scalar> {
        let s = self.inner.checked_mul(&other.0).map_err(|e| err(e.into()))?;
        Ok(Scalar { inner: s })
    }

    fn __rmul__(&self, other: ScalarArg) -> PyResult<Scalar> {
        self.__mul__(other)
    }

    fn __neg__(&self) -> Scalar {
        Scalar { inner: -self.inner.clone() }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar('{}')", self.inner)
    }
}

/// Accepts a `Scalar` or an `int`; strings are parsed against an algebra.
struct ScalarArg(CoreScalar);

impl<'a, 'py> FromPyObject<'a, 'py> for ScalarArg {
    type Error = PyErr;
    fn extract(ob: Borrowed<'a, 'py, PyAny>) -> PyResult<Self> {
        if let Ok(s) = ob.cast::<Scalar>() {
            return Ok(ScalarArg(s.get().inner.clone()));
        }
        let n: i64 = ob.extract()?;
        Ok(ScalarArg(CoreScalar::from_int(n)))
    }
}

/// Verdict and per-check results of one suite run.
#[pyclass(module = "homcolor", name = "Report", frozen)]
struct Report {
    inner: SuiteReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn suite(&self) -> String {
        self.inner.suite.clone()
    }

    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict().as_str()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// `(label, witness names)` of the first non-passing check, if any.
    fn first_failure(&self) -> Option<(String, Vec<String>)> {
        self.inner.first_failure().map(|c| {
            let names = c.witness().map(|w| w.names.clone()).unwrap_or_default();
            (c.label(), names)
        })
    }

    fn to_json(&self) -> String {
        format::to_pretty(&self.inner.to_json(false))
    }

    fn __repr__(&self) -> String {
        format!("Report({}: {})", self.inner.suite, self.inner.verdict().as_str())
    }
}

/// A graded Hom-algebra presentation.
#[pyclass(module = "homcolor", name = "Algebra", frozen)]
struct Algebra {
    inner: AlgebraPresentation,
}

fn wrap(inner: AlgebraPresentation) -> Algebra {
    Algebra { inner }
}

fn options(workers: Option<usize>) -> CheckOptions {
    match workers {
        Some(w) => CheckOptions::default().with_workers(w),
        None => CheckOptions::default(),
    }
}

fn role_map(spec: Option<&str>) -> PyResult<RoleMap> {
    RoleMap::parse(spec.unwrap_or("")).map_err(err)
}

impl Algebra {
    fn scalar(&self, ob: &Bound<'_, PyAny>) -> PyResult<CoreScalar> {
        if let Ok(text) = ob.extract::<String>() {
            return self.inner.scalars().parse(&text).map_err(|e| err(e.into()));
        }
        Ok(ob.extract::<ScalarArg>()?.0)
    }

    fn vector(&self, items: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<CoreScalar>> {
        if items.len() != self.inner.dim() {
            return Err(HomcolorError::new_err(format!(
                "expected {} coordinates, got {}",
                self.inner.dim(),
                items.len()
            )));
        }
        items.iter().map(|x| self.scalar(x)).collect()
    }

    fn matrix(&self, rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Matrix> {
        let rows = rows
            .into_iter()
            .map(|r| r.iter().map(|x| self.scalar(x)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        Matrix::from_rows(rows).map_err(err)
    }
}

fn out(v: Vec<CoreScalar>) -> Vec<Scalar> {
    v.into_iter().map(|inner| Scalar { inner }).collect()
}

#[pymethods]
impl Algebra {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Algebra> {
        format::parse_presentation(text).map(wrap).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Algebra> {
        let text = std::fs::read_to_string(path).map_err(|e| HomcolorError::new_err(format!("{path}: {e}")))?;
        Algebra::from_json(&text)
    }

    fn to_json(&self) -> String {
        format::to_pretty(&format::presentation_to_value(&self.inner))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.space().names().to_vec()
    }

    #[getter]
    fn roles(&self) -> Vec<String> {
        self.inner.roles().map(str::to_string).collect()
    }

    #[getter]
    fn params(&self) -> Vec<String> {
        self.inner.scalars().params().map(str::to_string).collect()
    }

    /// Parses a scalar in this algebra's parameters and roots.
    fn parse_scalar(&self, text: &str) -> PyResult<Scalar> {
        let inner = self.inner.scalars().parse(text).map_err(|e| err(e.into()))?;
        Ok(Scalar { inner })
    }

    fn basis(&self, name: &str) -> PyResult<Vec<Scalar>> {
        let i = self
            .inner
            .space()
            .index_of(name)
            .ok_or_else(|| HomcolorError::new_err(format!("unknown basis element `{name}`")))?;
        Ok(out(self.inner.basis(i)))
    }

    fn mul(&self, role: &str, x: Vec<Bound<'_, PyAny>>, y: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<Scalar>> {
        let (x, y) = (self.vector(x)?, self.vector(y)?);
        self.inner.mul(role, &x, &y).map(out).map_err(err)
    }

    fn alpha(&self, x: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<Scalar>> {
        Ok(out(self.inner.apply_alpha(&self.vector(x)?)))
    }

    fn substitute(&self, values: BTreeMap<String, Bound<'_, PyAny>>) -> PyResult<Algebra> {
        let values = values
            .into_iter()
            .map(|(k, v)| Ok((k, self.scalar(&v)?)))
            .collect::<PyResult<BTreeMap<_, _>>>()?;
        self.inner.substitute(&values).map(wrap).map_err(err)
    }

    /// Runs a structure suite, `gi`, `multiplicative`, or one identity tag.
    #[pyo3(signature = (kind, role_map=None, workers=None))]
    fn check(&self, kind: &str, role_map: Option<&str>, workers: Option<usize>) -> PyResult<Report> {
        let roles = self::role_map(role_map)?;
        let opts = options(workers);
        let a = &self.inner;
        let report = match kind.to_ascii_lowercase().as_str() {
            "gi" => check_gi_identities(a, &roles, &opts),
            "multiplicative" => constructions::multiplicativity_report(a),
            _ => {
                if let Ok(k) = kind.parse::<StructureKind>() {
                    run_suite(a, k, &roles, &opts)
                } else {
                    let id: IdentityId = kind.parse().map_err(err)?;
                    let actual: Vec<&str> = id.default_roles().iter().map(|r| roles.resolve(r)).collect();
                    check_identity(a, id, &actual, &opts).map(|r| SuiteReport::single(id.tag(), r))
                }
            }
        }
        .map_err(err)?;
        Ok(Report { inner: report })
    }

    #[pyo3(signature = (kind, role_map=None))]
    fn check_regular_module(&self, kind: &str, role_map: Option<&str>) -> PyResult<Report> {
        let kind: BimoduleKind = kind.parse().map_err(err)?;
        let roles = self::role_map(role_map)?;
        let m = homcolor::regular_bundle(&self.inner, kind, &roles).map_err(err)?;
        let report = homcolor::check_bimodule(&self.inner, &m, kind, &roles, &CheckOptions::default()).map_err(err)?;
        Ok(Report { inner: report })
    }

    #[pyo3(signature = (source="dot", target="bracket"))]
    fn commutator(&self, source: &str, target: &str) -> PyResult<Algebra> {
        constructions::commutator_bracket(&self.inner, source, target).map(wrap).map_err(err)
    }

    #[pyo3(signature = (rows, force=false))]
    fn yau_twist(&self, rows: Vec<Vec<Bound<'_, PyAny>>>, force: bool) -> PyResult<Algebra> {
        let m = self.matrix(rows)?;
        constructions::yau_twist(&self.inner, &m, force).map(wrap).map_err(err)
    }

    #[pyo3(signature = (kind=1, n=1, force=false))]
    fn derived(&self, kind: u8, n: u32, force: bool) -> PyResult<Algebra> {
        let ty: DerivedType = kind.to_string().parse().map_err(err)?;
        constructions::derived_algebra(&self.inner, ty, n, force).map(wrap).map_err(err)
    }

    #[pyo3(signature = (other, force=false))]
    fn tensor(&self, other: &Algebra, force: bool) -> PyResult<Algebra> {
        constructions::tensor_product(&self.inner, &other.inner, &RoleMap::identity(), &CheckOptions::default(), force)
            .map(wrap)
            .map_err(err)
    }

    #[pyo3(signature = (ideal, force=false))]
    fn quotient(&self, ideal: Vec<String>, force: bool) -> PyResult<Algebra> {
        let idx = ideal
            .iter()
            .map(|n| {
                self.inner
                    .space()
                    .index_of(n)
                    .ok_or_else(|| HomcolorError::new_err(format!("unknown basis element `{n}`")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        constructions::quotient(&self.inner, &idx, force).map(wrap).map_err(err)
    }

    fn __eq__(&self, other: &Algebra) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Algebra(dim={}, roles={:?})", self.inner.dim(), self.roles())
    }
}

#[pymodule]
#[pyo3(name = "homcolor")]
fn homcolor_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scalar>()?;
    m.add_class::<Algebra>()?;
    m.add_class::<Report>()?;
    m.add("HomcolorError", m.py().get_type::<HomcolorError>())?;
    m.add("PreconditionError", m.py().get_type::<PreconditionError>())?;
    m.add("FORMAT_VERSION", format::FORMAT_VERSION)?;
    Ok(())
}
