use harmonia::defect::defect_relation_check;
use harmonia::domain::DiskDomain;
use harmonia::error::Error;
use harmonia::gauss::{Direction, Hyperplane as CoreHyperplane};
use harmonia::geodesy::{curvature_estimate_scan, distance_to_boundary, MetricKind};
use harmonia::nochka::{compute_nochka_weights, verify_nochka_properties, NochkaWeights};
use harmonia::poly::ComplexPoly;
use harmonia::surface::HarmonicImmersion;
use harmonia::{fixtures, suite};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(pyharmonia, HarmoniaError, PyException, "Raised when a harmonia computation fails.");
create_exception!(pyharmonia, DegenerateError, HarmoniaError, "The surface or curve is degenerate at some point.");

fn err(e: Error) -> PyErr {
    match e {
        Error::DegeneratePoint(_)
        | Error::NotQuasiconformal(_)
        | Error::IndeterminatePoint(_)
        | Error::DegenerateCurve => DegenerateError::new_err(e.to_string()),
        _ => HarmoniaError::new_err(e.to_string()),
    }
}

fn metric_kind(name: &str) -> PyResult<MetricKind> {
    match name {
        "induced" => Ok(MetricKind::Induced),
        "klotz" => Ok(MetricKind::Klotz),
        other => Err(PyValueError::new_err(format!("metric must be 'induced' or 'klotz', got {other:?}"))),
    }
}

/// A polynomial with complex coefficients, lowest degree first.
#[pyclass(name = "Polynomial", module = "pyharmonia", frozen)]
struct Polynomial(ComplexPoly);

#[pymethods]
impl Polynomial {
    #[new]
    fn new(coeffs: Vec<Complex64>) -> Self {
        Self(ComplexPoly::new(coeffs))
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.0.coeffs().to_vec()
    }

    /// `None` for the zero polynomial.
    #[getter]
    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        self.0.eval(z)
    }

    fn derivative(&self) -> Self {
        Self(self.0.derivative())
    }

    /// Distinct roots with their multiplicities.
    fn roots(&self) -> PyResult<Vec<(Complex64, usize)>> {
        self.0.roots().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.0)
    }
}

/// A hyperplane of complex projective space, stored by its unit normal.
#[pyclass(name = "Hyperplane", module = "pyharmonia", frozen)]
struct Hyperplane(CoreHyperplane);

#[pymethods]
impl Hyperplane {
    #[new]
    fn new(normal: Vec<Complex64>) -> PyResult<Self> {
        CoreHyperplane::from_normal(&normal).map(Self).map_err(err)
    }

    #[getter]
    fn normal(&self) -> Vec<Complex64> {
        self.0.normal().to_vec()
    }

    fn pair(&self, v: Vec<Complex64>) -> PyResult<Complex64> {
        if v.len() != self.0.ambient_dim() {
            return Err(PyValueError::new_err(format!("expected {} coordinates", self.0.ambient_dim())));
        }
        Ok(self.0.pair(&v))
    }

    fn __repr__(&self) -> String {
        format!("Hyperplane({:?})", self.0.normal())
    }
}

fn core_planes(planes: &[Py<Hyperplane>]) -> Vec<CoreHyperplane> {
    planes.iter().map(|p| p.get().0.clone()).collect()
}

/// A harmonic immersion of a disk, given by the holomorphic derivative data
/// `phi` (one polynomial per coordinate).
#[pyclass(name = "Surface", module = "pyharmonia", frozen)]
struct Surface(HarmonicImmersion);

#[pymethods]
impl Surface {
    #[new]
    #[pyo3(signature = (phi, center = Complex64::new(0.0, 0.0), radius = 1.0, resolution = 33))]
    fn new(phi: Vec<Vec<Complex64>>, center: Complex64, radius: f64, resolution: usize) -> PyResult<Self> {
        let domain = DiskDomain::new(center, radius, resolution).map_err(err)?;
        let phi = phi.into_iter().map(ComplexPoly::new).collect();
        HarmonicImmersion::new(phi, domain).map(Self).map_err(err)
    }

    /// Reads the JSON surface config used by the command-line tool.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    #[pyo3(signature = (resolution = 33))]
    fn enneper(resolution: usize) -> Self {
        Self(fixtures::enneper(DiskDomain::unit(resolution)))
    }

    #[staticmethod]
    #[pyo3(signature = (resolution = 33))]
    fn harmonic_graph(resolution: usize) -> Self {
        Self(fixtures::harmonic_graph(DiskDomain::unit(resolution)))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    fn with_resolution(&self, resolution: usize) -> PyResult<Self> {
        let d = self.0.domain().with_resolution(resolution).map_err(err)?;
        self.0.with_domain(d).map(Self).map_err(err)
    }

    /// Coefficients of the Hopf differential `sum phi_k^2`.
    fn hopf(&self) -> Vec<Complex64> {
        self.0.hopf_poly().coeffs().to_vec()
    }

    fn position(&self, z: Complex64) -> Vec<f64> {
        self.0.position(z)
    }

    /// `(E, F, G)` of the induced metric at `z`.
    fn metric(&self, z: Complex64) -> PyResult<(f64, f64, f64)> {
        let m = self.0.metric_sample(z).map_err(err)?;
        Ok((m.e, m.f, m.g))
    }

    fn unit_normal(&self, z: Complex64) -> PyResult<[f64; 3]> {
        self.0.unit_normal(z).map_err(err)
    }

    fn curvature_induced(&self, z: Complex64) -> PyResult<f64> {
        self.0.curvature_induced(z).map_err(err)
    }

    fn curvature_klotz(&self, z: Complex64) -> PyResult<f64> {
        self.0.curvature_klotz(z).map_err(err)
    }

    fn dilatation(&self, z: Complex64) -> PyResult<f64> {
        self.0.pointwise_qc(z).map_err(err)
    }

    /// The quasiconformal constant over the closed disk.
    fn qc_constant(&self) -> PyResult<f64> {
        self.0.qc_constant().map_err(err)
    }

    #[pyo3(signature = (z, metric = "induced"))]
    fn distance_to_boundary(&self, py: Python<'_>, z: Complex64, metric: &str) -> PyResult<f64> {
        let kind = metric_kind(metric)?;
        py.detach(|| distance_to_boundary(&self.0, kind, z)).map_err(err)
    }

    /// `(C, C_gamma)`: the largest `|K| d^2` on the grid for the induced and
    /// Klotz metrics. Needs seven directions, no three coplanar, all omitted
    /// by the normal.
    fn curvature_scan(&self, py: Python<'_>, directions: Vec<[f64; 3]>) -> PyResult<(f64, f64)> {
        let dirs = directions.into_iter().map(Direction::new).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let scan = py.detach(|| curvature_estimate_scan(&self.0, &dirs)).map_err(err)?;
        Ok((scan.sup_induced, scan.sup_klotz))
    }

    fn __repr__(&self) -> String {
        let d = self.0.domain();
        format!("Surface(dimension={}, radius={}, resolution={})", self.0.dimension(), d.radius(), d.grid_resolution())
    }
}

/// Nochka weights `(omega, theta)` for hyperplanes in `n`-subgeneral position.
#[pyfunction]
fn nochka_weights(planes: Vec<Py<Hyperplane>>, n: usize) -> PyResult<(Vec<f64>, f64)> {
    let planes = core_planes(&planes);
    let w = compute_nochka_weights(&planes, n).map_err(err)?;
    Ok((w.omega, w.theta))
}

/// Which of the four weight properties hold, in order.
#[pyfunction]
fn check_nochka_weights(planes: Vec<Py<Hyperplane>>, omega: Vec<f64>, theta: f64, n: usize) -> PyResult<Vec<bool>> {
    let planes = core_planes(&planes);
    let Some(first) = planes.first() else { return Err(PyValueError::new_err("no hyperplanes")) };
    if omega.len() != planes.len() {
        return Err(PyValueError::new_err("need one weight per hyperplane"));
    }
    let w = NochkaWeights { omega, theta, n, k: first.ambient_dim() - 1 };
    Ok(verify_nochka_properties(&w, &planes).bullets.iter().map(|b| b.pass).collect())
}

/// Classical defects of a polynomial curve: `(deltas, sum, bound)`.
#[pyfunction]
fn defects(curve: Vec<Vec<Complex64>>, planes: Vec<Py<Hyperplane>>) -> PyResult<(Vec<f64>, f64, f64)> {
    let curve: Vec<ComplexPoly> = curve.into_iter().map(ComplexPoly::new).collect();
    let report = defect_relation_check(&curve, &core_planes(&planes)).map_err(err)?;
    Ok((report.rows.iter().map(|r| r.delta).collect(), report.sum, report.bound))
}

type OutcomeTuple = (u8, String, String, bool, String);

/// Runs the numbered verification criteria and returns
/// `(id, suite, title, passed, detail)` tuples.
#[pyfunction]
#[pyo3(signature = (only = None, seed = suite::DEFAULT_SEED))]
fn verify(py: Python<'_>, only: Option<&str>, seed: u64) -> PyResult<Vec<OutcomeTuple>> {
    let only = only.map(str::to_owned);
    let outcomes = py.detach(|| suite::run(only.as_deref(), seed)).map_err(err)?;
    Ok(outcomes.into_iter().map(|o| (o.id, o.suite.to_string(), o.title.to_string(), o.pass, o.detail)).collect())
}

#[pymodule]
fn pyharmonia(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HarmoniaError", m.py().get_type::<HarmoniaError>())?;
    m.add("DegenerateError", m.py().get_type::<DegenerateError>())?;
    m.add_class::<Polynomial>()?;
    m.add_class::<Hyperplane>()?;
    m.add_class::<Surface>()?;
    m.add_function(wrap_pyfunction!(nochka_weights, m)?)?;
    m.add_function(wrap_pyfunction!(check_nochka_weights, m)?)?;
    m.add_function(wrap_pyfunction!(defects, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
