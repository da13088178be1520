//! Python bindings: meshes, covers, mapper nerves, Reeb graphs and
//! interleaving verification.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use reebmapper::cover::{refine, uniform_cover, uniform_cover_of_image};
use reebmapper::fixtures::{canned, random_test_boxes};
use reebmapper::interleave::{build_interleaving, certified_upper_bound, verify_interleaving};
use reebmapper::mapper::{categorical_mapper, jcn, lemma61_check, mapper_nerve};
use reebmapper::reeb::{betti, geometric_mapper, reeb_graph, rgraph_isomorphic, IsoMode};
use reebmapper::{components, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Containment(_) | Error::WellDefinedness(_) | Error::Verification(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A simplicial complex with a PL map to R^d.
#[pyclass(name = "Mesh", frozen)]
struct Mesh(reebmapper::RdSpace);

#[pymethods]
impl Mesh {
    #[new]
    fn new(dim_range: usize, values: Vec<Vec<f64>>, simplices: Vec<Vec<u32>>) -> PyResult<Self> {
        reebmapper::RdSpace::from_parts(dim_range, values, simplices).map(Mesh).map_err(to_py)
    }

    /// One of `tent`, `circle4`, `torus`, `square_grid_2d`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        canned(name).map(|f| Mesh(f.space)).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        reebmapper::RdSpace::from_json_str(text).map(Mesh).map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn dim_range(&self) -> usize {
        self.0.dim_range()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.complex().vertex_count()
    }

    #[getter]
    fn simplex_count(&self) -> usize {
        self.0.complex().len()
    }

    /// Connected components of the preimage of an open box, as sorted
    /// simplex-id lists.
    fn components(&self, bounds: Vec<(f64, f64)>) -> PyResult<Vec<Vec<u32>>> {
        let b = reebmapper::OpenBox::new(bounds).map_err(to_py)?;
        Ok(components(&self.0, &b.into()).components().iter().map(|c| c.simplices.clone()).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Mesh(dim_range={}, vertices={}, simplices={})",
            self.0.dim_range(),
            self.0.complex().vertex_count(),
            self.0.complex().len()
        )
    }
}

/// A finite cover of R^d by open boxes.
#[pyclass(name = "Cover", frozen)]
struct Cover(reebmapper::Cover);

#[pymethods]
impl Cover {
    #[staticmethod]
    fn uniform(range: Vec<(f64, f64)>, counts: Vec<usize>, gain: f64) -> PyResult<Self> {
        uniform_cover(&range, &counts, gain).map(Cover).map_err(to_py)
    }

    #[staticmethod]
    fn of_image(mesh: PyRef<'_, Mesh>, counts: Vec<usize>, gain: f64) -> PyResult<Self> {
        uniform_cover_of_image(&mesh.0, &counts, gain).map(Cover).map_err(to_py)
    }

    #[getter]
    fn resolution(&self) -> f64 {
        self.0.resolution()
    }

    #[getter]
    fn elements(&self) -> Vec<Vec<(f64, f64)>> {
        self.0.elements().iter().map(|b| b.axes().to_vec()).collect()
    }

    fn refine(&self) -> PyResult<Self> {
        refine(&self.0).map(Cover).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// The nerve of the pulled-back cover.
#[pyclass(name = "MapperNerve", frozen)]
struct MapperNerve(reebmapper::MapperNerve);

#[pymethods]
impl MapperNerve {
    /// `(cover element, component label)` per vertex.
    #[getter]
    fn vertices(&self) -> Vec<(usize, u32)> {
        self.0.vertices.clone()
    }

    #[getter]
    fn simplices(&self) -> Vec<Vec<usize>> {
        self.0.simplices.clone()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges()
    }

    /// `(b0, b1)` of the 1-skeleton.
    fn betti(&self) -> (usize, usize) {
        let b = reebmapper::reeb::nerve_betti(&self.0);
        (b.b0, b.b1)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }
}

/// A graph with a real value per node.
#[pyclass(name = "ReebGraph", frozen)]
struct ReebGraph(reebmapper::ReebGraph);

#[pymethods]
impl ReebGraph {
    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn betti(&self) -> (usize, usize) {
        let b = betti(&self.0);
        (b.b0, b.b1)
    }

    /// Isomorphism preserving node values (`exact`) or their order
    /// (`monotone`).
    #[pyo3(signature = (other, mode="monotone"))]
    fn isomorphic(&self, other: PyRef<'_, ReebGraph>, mode: &str) -> PyResult<bool> {
        let mode = match mode {
            "exact" => IsoMode::ExactValues,
            "monotone" => IsoMode::Monotone,
            m => return Err(PyValueError::new_err(format!("unknown mode {m:?}"))),
        };
        rgraph_isomorphic(&self.0, &other.0, mode).map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }
}

#[pyfunction]
fn mapper(mesh: PyRef<'_, Mesh>, cover: PyRef<'_, Cover>) -> PyResult<MapperNerve> {
    let cm = categorical_mapper(&mesh.0, &cover.0).map_err(to_py)?;
    Ok(MapperNerve(mapper_nerve(&cm)))
}

#[pyfunction(name = "jcn")]
fn joint_contour_net(mesh: PyRef<'_, Mesh>, counts: Vec<usize>, gain: f64) -> PyResult<MapperNerve> {
    jcn(&mesh.0, &counts, gain).map(MapperNerve).map_err(to_py)
}

#[pyfunction(name = "reeb_graph")]
fn py_reeb_graph(mesh: PyRef<'_, Mesh>) -> PyResult<ReebGraph> {
    reeb_graph(&mesh.0).map(ReebGraph).map_err(to_py)
}

#[pyfunction(name = "geometric_mapper")]
fn py_geometric_mapper(mesh: PyRef<'_, Mesh>, cover: PyRef<'_, Cover>) -> PyResult<ReebGraph> {
    let cm = categorical_mapper(&mesh.0, &cover.0).map_err(to_py)?;
    geometric_mapper(&cm).map(|g| ReebGraph(g.contract_regular())).map_err(to_py)
}

/// Verifies the interleaving at the cover resolution and returns
/// `(passed, report_json)`.
#[pyfunction]
fn verify(mesh: PyRef<'_, Mesh>, cover: PyRef<'_, Cover>) -> PyResult<(bool, String)> {
    let w = build_interleaving(&mesh.0, &cover.0, cover.0.resolution()).map_err(to_py)?;
    let report = verify_interleaving(&w);
    Ok((report.passed, report.to_json_string()))
}

#[pyfunction(name = "certified_upper_bound")]
fn py_certified_upper_bound(mesh: PyRef<'_, Mesh>, cover: PyRef<'_, Cover>) -> PyResult<f64> {
    certified_upper_bound(&mesh.0, &cover.0).map_err(to_py)
}

/// Number of failures of the colimit formula on sampled boxes.
#[pyfunction]
#[pyo3(signature = (mesh, cover, boxes=64, seed=0))]
fn colimit_failures(mesh: PyRef<'_, Mesh>, cover: PyRef<'_, Cover>, boxes: usize, seed: u64) -> PyResult<usize> {
    let probes = random_test_boxes(&mesh.0, &cover.0, boxes, seed);
    lemma61_check(&mesh.0, &cover.0, &probes).map(|r| r.failures.len()).map_err(to_py)
}

#[pymodule]
fn pyreebmapper(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Mesh>()?;
    m.add_class::<Cover>()?;
    m.add_class::<MapperNerve>()?;
    m.add_class::<ReebGraph>()?;
    m.add_function(wrap_pyfunction!(mapper, m)?)?;
    m.add_function(wrap_pyfunction!(joint_contour_net, m)?)?;
    m.add_function(wrap_pyfunction!(py_reeb_graph, m)?)?;
    m.add_function(wrap_pyfunction!(py_geometric_mapper, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(py_certified_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(colimit_failures, m)?)?;
    Ok(())
}
