//! Python bindings. Words are lists of 1-based generator indices, ring
//! variables are strings `"g:i:j"`, rationals are strings `"p/q"`, and check
//! reports are plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dpoisson::centralizer::{self, LieData};
use dpoisson::double_bracket::{self, JacobiScope};
use dpoisson::families;
use dpoisson::free_algebra::{FreeElem, InvolutionSpec, Word};
use dpoisson::job::{self, JobSpec, RunOptions};
use dpoisson::lincomb::{format_q, parse_q, Q};
use dpoisson::matrix_involutions::{FormStyle, MatrixInvolution, ThetaKind};
use dpoisson::poly;
use dpoisson::rep_poisson::{self, RingScope, Var};
use dpoisson::report::CheckReport;

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py>(py: Python<'py>, r: &CheckReport) -> PyResult<Bound<'py, PyDict>> {
    let text = serde_json::to_string(r).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))?.cast_into::<PyDict>().map_err(Into::into)
}

fn word(letters: &[usize]) -> PyResult<FreeElem> {
    Ok(FreeElem::basis(Word::from_one_based(letters).map_err(err)?))
}

fn letters(w: &Word) -> Vec<usize> {
    w.letters().map(|l| l + 1).collect()
}

fn rationals(xs: &[String]) -> PyResult<Vec<Q>> {
    xs.iter().map(|x| parse_q(x).map_err(err)).collect()
}

fn involution(name: &str) -> PyResult<InvolutionSpec> {
    match name {
        "phi_plus" => Ok(InvolutionSpec::PhiPlus),
        "phi_minus" => Ok(InvolutionSpec::PhiMinus),
        _ => Err(err(format!("unknown involution `{name}`"))),
    }
}

fn theta_kind(name: &str) -> PyResult<ThetaKind> {
    match name {
        "orthogonal" => Ok(ThetaKind::Orthogonal),
        "symplectic" => Ok(ThetaKind::Symplectic),
        _ => Err(err(format!("unknown kind `{name}`"))),
    }
}

fn form(style: &str, d: usize) -> PyResult<MatrixInvolution> {
    let style = match style {
        "identity" => FormStyle::Identity(d),
        "symplectic" => FormStyle::Symplectic(d),
        other => FormStyle::Theta {
            n: d,
            kind: theta_kind(other.strip_prefix("theta_").unwrap_or(other))?,
        },
    };
    MatrixInvolution::from_style(&style).map_err(err)
}

#[pyclass(name = "DoubleBracket", frozen)]
struct PyDoubleBracket(double_bracket::DoubleBracket);

#[pymethods]
impl PyDoubleBracket {
    #[staticmethod]
    fn kks(n_gens: usize) -> Self {
        PyDoubleBracket(families::kks(n_gens))
    }

    /// Linear bracket from `s^k_{ij}` flattened in `(k, i, j)` order.
    #[staticmethod]
    fn linear(n_gens: usize, s: Vec<String>) -> PyResult<Self> {
        let s = families::StructureConstants::new(n_gens, rationals(&s)?).map_err(err)?;
        Ok(PyDoubleBracket(families::linear_bracket(&s)))
    }

    #[staticmethod]
    fn ors(lambda: Vec<String>) -> PyResult<Self> {
        let r = families::ors_example(&rationals(&lambda)?).map_err(err)?;
        Ok(PyDoubleBracket(families::quadratic_bracket(&r).map_err(err)?))
    }

    #[staticmethod]
    fn symmetric_pair() -> Self {
        PyDoubleBracket(families::symmetric_pair_bracket())
    }

    #[getter]
    fn n_gens(&self) -> usize {
        self.0.n_gens()
    }

    /// `⟦u, v⟧` as a list of `(coefficient, left word, right word)`.
    fn eval(&self, u: Vec<usize>, v: Vec<usize>) -> PyResult<Vec<(String, Vec<usize>, Vec<usize>)>> {
        let t = self.0.eval(&word(&u)?, &word(&v)?);
        Ok(t.iter().map(|((a, b), c)| (format_q(c), letters(a), letters(b))).collect())
    }

    #[pyo3(signature = (exhaustive_len = 1, max_word_len = 4, samples = 200, seed = 0))]
    fn check_double_jacobi<'py>(
        &self,
        py: Python<'py>,
        exhaustive_len: usize,
        max_word_len: usize,
        samples: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let scope = JacobiScope {
            exhaustive_len,
            max_word_len,
            samples,
            seed,
        };
        to_dict(py, &double_bracket::check_double_jacobi(&self.0, &scope))
    }

    #[pyo3(signature = (phi, samples = 100, max_word_len = 3, seed = 0))]
    fn check_phi_adapted<'py>(
        &self,
        py: Python<'py>,
        phi: &str,
        samples: usize,
        max_word_len: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let r = double_bracket::check_phi_adapted(&self.0, &involution(phi)?, samples, max_word_len, seed);
        to_dict(py, &r)
    }
}

#[pyclass(name = "PoissonStructure", frozen)]
struct PyPoissonStructure(rep_poisson::PoissonStructure);

fn var(s: &str) -> PyResult<Var> {
    s.parse().map_err(err)
}

#[pymethods]
impl PyPoissonStructure {
    /// The bracket on `O(A, d)`.
    #[staticmethod]
    fn induce(bracket: &PyDoubleBracket, d: usize) -> PyResult<Self> {
        Ok(PyPoissonStructure(
            rep_poisson::PoissonStructure::induce_plain(&bracket.0, d).map_err(err)?,
        ))
    }

    /// The bracket on `O(A, d)^{φ,τ}`; `form` is `identity`, `symplectic`,
    /// `orthogonal` or `theta_symplectic`.
    #[staticmethod]
    fn induce_twisted(bracket: &PyDoubleBracket, phi: &str, form_style: &str, d: usize) -> PyResult<Self> {
        let tau = form(form_style, d)?;
        let s = rep_poisson::PoissonStructure::induce_twisted(&bracket.0, &involution(phi)?, &tau).map_err(err)?;
        Ok(PyPoissonStructure(s))
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn mode(&self) -> String {
        self.0.mode_name()
    }

    fn ring_vars(&self) -> Vec<String> {
        self.0.ring_vars().iter().map(Var::to_string).collect()
    }

    /// `{u, v}` of two variables, in normal form.
    fn bracket(&self, u: &str, v: &str) -> PyResult<String> {
        Ok(rep_poisson::show(&self.0.var_bracket(&var(u)?, &var(v)?)))
    }

    /// Normal form of the variable `u`.
    fn reduce(&self, u: &str) -> PyResult<String> {
        Ok(rep_poisson::show(&self.0.reduce(&poly::var(var(u)?))))
    }

    fn check_skew<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &rep_poisson::check_skew(&self.0))
    }

    fn check_jacobi_ring<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &rep_poisson::check_jacobi_ring(&self.0, RingScope::Exhaustive))
    }

    #[pyo3(signature = (max_word_len = 2))]
    fn check_multiplicativity<'py>(&self, py: Python<'py>, max_word_len: usize) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &rep_poisson::check_multiplicativity(&self.0, max_word_len))
    }

    fn check_equivariance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &rep_poisson::check_equivariance(&self.0))
    }
}

/// The centralizer identity for `o(N)` or `sp(N)` with `n_gens` copies.
#[pyfunction]
#[pyo3(signature = (n, kind, n_gens = 2, max_word_len = 2))]
fn check_prop_f10<'py>(
    py: Python<'py>,
    n: usize,
    kind: &str,
    n_gens: usize,
    max_word_len: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let ld = LieData::new(n, theta_kind(kind)?).map_err(err)?;
    to_dict(py, &centralizer::check_prop_f10(&ld, n_gens, max_word_len, false))
}

/// Runs a job file given as text; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (text, seed = None))]
fn run_job(text: &str, seed: Option<u64>) -> PyResult<String> {
    let mut spec = JobSpec::parse(text).map_err(err)?;
    if seed.is_some() {
        spec.seed = seed;
    }
    Ok(job::run_job(&spec, RunOptions::default()).map_err(err)?.to_json())
}

#[pymodule]
fn pydpoisson(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDoubleBracket>()?;
    m.add_class::<PyPoissonStructure>()?;
    m.add_function(wrap_pyfunction!(check_prop_f10, m)?)?;
    m.add_function(wrap_pyfunction!(run_job, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
