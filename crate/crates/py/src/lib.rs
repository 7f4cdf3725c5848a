//! Python bindings. Values cross the boundary as JSON documents in the
//! same formats the command line tool reads and writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ainfty::ainfty::{deform_by_b, mc_residual, potential, verify_ainfty, verify_ainfty_sampled, FilteredAInfinity};
use ainfty::bimodule::{curvature_identity, deform_bimodule, diagonal, verify_bimodule, FilteredBimodule};
use ainfty::complex::format_chain;
use ainfty::homotopy::{build_interval_model, verify_model_axioms};
use ainfty::io::{self, ImportCutoffs};
use ainfty::linalg::reduce_fully;
use ainfty::morse::{morse_transfer, GradientMatching, SimplicialComplex};
use ainfty::novikov::{Energy, Field};
use ainfty::transfer::{transfer, verify_transfer, TransferData};
use ainfty::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Verification { .. } | Error::NotWeakSolution { .. } | Error::Witness { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn cutoffs(energy: Option<&str>, arity: Option<usize>) -> PyResult<ImportCutoffs> {
    Ok(ImportCutoffs {
        energy: energy
            .map(Energy::parse)
            .transpose()
            .map_err(py_err)?
            .unwrap_or(Energy::int(1)),
        arity: arity.unwrap_or(3),
    })
}

/// The outcome of one check: pass/fail plus the rendered details.
#[pyclass(name = "Report", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyReport {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    text: String,
    #[pyo3(get)]
    json: String,
}

impl From<&ainfty::report::Report> for PyReport {
    fn from(r: &ainfty::report::Report) -> Self {
        PyReport {
            passed: r.passed(),
            text: r.to_string(),
            json: r.to_json().to_string(),
        }
    }
}

#[pymethods]
impl PyReport {
    fn __bool__(&self) -> bool {
        self.passed
    }

    fn __str__(&self) -> String {
        self.text.clone()
    }

    fn __repr__(&self) -> String {
        format!("Report(passed={})", if self.passed { "True" } else { "False" })
    }
}

/// A truncated filtered A-infinity algebra.
#[pyclass(name = "Algebra", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyAlgebra {
    inner: FilteredAInfinity,
}

#[pymethods]
impl PyAlgebra {
    /// Parses an algebra or DGA document. The cutoffs apply to DGA imports.
    #[staticmethod]
    #[pyo3(signature = (text, energy_cutoff=None, arity_cutoff=None))]
    fn from_json(text: &str, energy_cutoff: Option<&str>, arity_cutoff: Option<usize>) -> PyResult<Self> {
        let inner = io::parse_algebra(text, "<python>", cutoffs(energy_cutoff, arity_cutoff)?).map_err(py_err)?;
        Ok(PyAlgebra { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, energy_cutoff=None, arity_cutoff=None))]
    fn load(path: std::path::PathBuf, energy_cutoff: Option<&str>, arity_cutoff: Option<usize>) -> PyResult<Self> {
        let inner = io::load_algebra(&path, cutoffs(energy_cutoff, arity_cutoff)?).map_err(py_err)?;
        Ok(PyAlgebra { inner })
    }

    fn to_json(&self) -> String {
        io::to_text(&io::algebra_doc(&self.inner))
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field.to_string()
    }

    #[getter]
    fn energy_cutoff(&self) -> String {
        self.inner.energy_cutoff.to_string()
    }

    #[getter]
    fn arity_cutoff(&self) -> usize {
        self.inner.arity_cutoff
    }

    #[getter]
    fn basis(&self) -> Vec<(String, i64)> {
        (0..self.inner.dim())
            .map(|i| (self.inner.basis.name(i).to_string(), self.inner.basis.degree(i)))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn curvature(&self) -> String {
        format_chain(&self.inner.curvature(), &self.inner.basis)
    }

    /// Checks every relation, or a seeded sample of words per arity.
    #[pyo3(signature = (sample=None, seed=0))]
    fn verify(&self, py: Python<'_>, sample: Option<usize>, seed: u64) -> PyReport {
        let a = &self.inner;
        let r = py.detach(|| match sample {
            Some(n) => verify_ainfty_sampled(a, seed, n),
            None => verify_ainfty(a),
        });
        PyReport::from(&r)
    }

    /// Homotopy transfer to a minimal model; data defaults to a full reduction.
    #[pyo3(signature = (data=None))]
    fn transfer(&self, py: Python<'_>, data: Option<&str>) -> PyResult<PyTransfer> {
        let a = self.inner.clone().into_verified().map_err(py_err)?;
        py.detach(|| {
            let t = match data {
                Some(text) => io::transfer_data_from_doc(&io::parse_json(text, "data")?, &a, "data")?,
                None => TransferData::from_reduction(&a, &reduce_fully(&a.differential()))?,
            };
            let out = transfer(&a, &t)?;
            let (rm, rh) = verify_transfer(&out, &a)?;
            Ok(PyTransfer {
                model: PyAlgebra {
                    inner: out.model.clone(),
                },
                hom: io::to_text(&io::hom_doc(&out.hom, &out.model.basis, &a.basis)),
                ledger: io::to_text(&io::ledger_doc(&out.ledger, &out.model.basis, &a.basis)),
                model_report: PyReport::from(&rm),
                hom_report: PyReport::from(&rh),
            })
        })
        .map_err(py_err)
    }

    /// The interval model together with its axiom check.
    fn interval_model(&self) -> PyResult<(PyAlgebra, PyReport)> {
        let a = self.inner.clone().into_verified().map_err(py_err)?;
        let m = build_interval_model(&a).map_err(py_err)?;
        let r = verify_model_axioms(&m, &a).map_err(py_err)?;
        Ok((PyAlgebra { inner: m.algebra }, PyReport::from(&r)))
    }

    /// Whether `b` solves the Maurer-Cartan equation, with the residual.
    fn mc_check(&self, b: &str) -> PyResult<(bool, String)> {
        let b = io::chain_from_doc(
            &io::parse_json(b, "b").map_err(py_err)?,
            &self.inner.basis,
            self.inner.field,
            "b",
        )
        .map_err(py_err)?;
        let r = mc_residual(&self.inner, &b).map_err(py_err)?;
        Ok((r.is_solution(), format_chain(&r.residual, &self.inner.basis)))
    }

    fn deform(&self, b: &str) -> PyResult<PyAlgebra> {
        let b = io::chain_from_doc(
            &io::parse_json(b, "b").map_err(py_err)?,
            &self.inner.basis,
            self.inner.field,
            "b",
        )
        .map_err(py_err)?;
        Ok(PyAlgebra {
            inner: deform_by_b(&self.inner, &b).map_err(py_err)?,
        })
    }

    fn potential(&self, b: &str, unit: &str) -> PyResult<String> {
        let b = io::chain_from_doc(
            &io::parse_json(b, "b").map_err(py_err)?,
            &self.inner.basis,
            self.inner.field,
            "b",
        )
        .map_err(py_err)?;
        Ok(potential(&self.inner, &b, unit).map_err(py_err)?.value.to_string())
    }

    /// The algebra as a bimodule over itself.
    #[pyo3(signature = (max_left=1, max_right=1))]
    fn diagonal(&self, max_left: usize, max_right: usize) -> PyResult<PyBimodule> {
        Ok(PyBimodule {
            inner: diagonal(&self.inner, max_left, max_right).map_err(py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Algebra(field={}, dim={}, energy_cutoff={}, arity_cutoff={})",
            self.inner.field,
            self.inner.dim(),
            self.inner.energy_cutoff,
            self.inner.arity_cutoff
        )
    }
}

/// A minimal model, the homomorphism into the source and the tree ledger.
#[pyclass(name = "Transfer", frozen)]
pub struct PyTransfer {
    #[pyo3(get)]
    model: PyAlgebra,
    #[pyo3(get)]
    hom: String,
    #[pyo3(get)]
    ledger: String,
    #[pyo3(get)]
    model_report: PyReport,
    #[pyo3(get)]
    hom_report: PyReport,
}

/// A filtered bimodule together with its left and right algebras.
#[pyclass(name = "Bimodule", frozen)]
pub struct PyBimodule {
    inner: FilteredBimodule,
}

#[pymethods]
impl PyBimodule {
    #[staticmethod]
    fn from_json(text: &str, left: &PyAlgebra, right: &PyAlgebra) -> PyResult<Self> {
        let doc = io::parse_json(text, "bimodule").map_err(py_err)?;
        Ok(PyBimodule {
            inner: io::bimodule_from_doc(&doc, &left.inner, &right.inner, "bimodule").map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        io::to_text(&io::bimodule_doc(&self.inner))
    }

    fn verify(&self) -> (PyReport, PyReport) {
        (
            PyReport::from(&verify_bimodule(&self.inner)),
            PyReport::from(&curvature_identity(&self.inner)),
        )
    }

    /// Twists by a pair of Maurer-Cartan elements, `b0` on the right and `b1` on the left.
    fn deform(&self, b0: &str, b1: &str) -> PyResult<PyBimodule> {
        let right = &self.inner.right;
        let left = &self.inner.left;
        let b0 = io::chain_from_doc(
            &io::parse_json(b0, "b0").map_err(py_err)?,
            &right.basis,
            right.field,
            "b0",
        )
        .map_err(py_err)?;
        let b1 = io::chain_from_doc(
            &io::parse_json(b1, "b1").map_err(py_err)?,
            &left.basis,
            left.field,
            "b1",
        )
        .map_err(py_err)?;
        Ok(PyBimodule {
            inner: deform_bimodule(&self.inner, &b0, &b1).map_err(py_err)?,
        })
    }
}

/// A finite simplicial complex.
#[pyclass(name = "Complex", frozen)]
pub struct PyComplex {
    inner: SimplicialComplex,
}

#[pymethods]
impl PyComplex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = io::parse_json(text, "complex").map_err(py_err)?;
        Ok(PyComplex {
            inner: io::complex_from_doc(&doc, "complex").map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_facets(facets: Vec<Vec<usize>>) -> PyResult<Self> {
        let n = facets.iter().flatten().max().map_or(0, |v| v + 1);
        Ok(PyComplex {
            inner: SimplicialComplex::numbered(n, &facets).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        io::to_text(&io::complex_doc(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Ranks of simplicial homology, by simplex dimension.
    #[pyo3(signature = (field="Q"))]
    fn homology(&self, field: &str) -> PyResult<Vec<usize>> {
        Ok(self.inner.homology_ranks(Field::parse(field).map_err(py_err)?))
    }

    /// Names of the critical simplices of the greedy matching.
    fn critical(&self) -> Vec<String> {
        let m = GradientMatching::greedy(&self.inner);
        m.critical(&self.inner)
            .into_iter()
            .map(|i| self.inner.name(i))
            .collect()
    }

    /// Transfers disc operations (or the plain chain algebra) to the Morse model.
    #[pyo3(signature = (disc_ops=None, field="Q"))]
    fn morse(&self, disc_ops: Option<&PyAlgebra>, field: &str) -> PyResult<PyTransfer> {
        let k = &self.inner;
        let disc = match disc_ops {
            Some(a) => a.inner.clone(),
            None => k
                .chain_algebra(Field::parse(field).map_err(py_err)?, Energy::int(1), 3)
                .map_err(py_err)?,
        };
        let m = GradientMatching::greedy(k);
        let (_, out) = morse_transfer(k, &m, &disc).map_err(py_err)?;
        let (rm, rh) = verify_transfer(&out, &disc).map_err(py_err)?;
        Ok(PyTransfer {
            model: PyAlgebra {
                inner: out.model.clone(),
            },
            hom: io::to_text(&io::hom_doc(&out.hom, &out.model.basis, &disc.basis)),
            ledger: io::to_text(&io::ledger_doc(&out.ledger, &out.model.basis, &disc.basis)),
            model_report: PyReport::from(&rm),
            hom_report: PyReport::from(&rh),
        })
    }
}

/// Registers the classes on `m`.
pub fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReport>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyTransfer>()?;
    m.add_class::<PyBimodule>()?;
    m.add_class::<PyComplex>()?;
    Ok(())
}

#[pymodule]
fn ainfty_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    init(m)
}
