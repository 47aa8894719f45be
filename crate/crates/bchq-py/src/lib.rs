//! Python bindings: the exact coefficient pipeline, convergence constants,
//! quasi-norms, and the desk-scale group-law checks, exposed with plain
//! Python types (exact rationals and big integers travel as strings).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use bchq::analysis;
use bchq::bch;
use bchq::bounds;
use bchq::decimal::{render_decimal, render_exact, render_fixed4};
use bchq::numeric;
use bchq::verify;
use bchq::words;
use bchq::Word;

fn err(e: bchq::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

use bchq::series::rational_to_f64 as to_f64;

/// Lyndon words of length n, lexicographically sorted.
#[pyfunction]
fn lyndon_words(n: usize) -> PyResult<Vec<String>> {
    Ok(words::lyndon_words(n)
        .map_err(err)?
        .iter()
        .map(|w| w.to_string())
        .collect())
}

#[pyfunction]
fn witt_dimension(n: usize) -> PyResult<u64> {
    words::witt_dimension(n).map_err(err)
}

#[pyfunction]
fn standard_factorization(word: &str) -> PyResult<(String, String)> {
    let w = Word::parse(word).map_err(err)?;
    let (u, v) = words::standard_factorization(&w).map_err(err)?;
    Ok((u.to_string(), v.to_string()))
}

/// Bracketing of a Lyndon word, rendered like `[X,[X,Y]]`.
#[pyfunction]
fn lyndon_bracketing(word: &str) -> PyResult<String> {
    let w = Word::parse(word).map_err(err)?;
    Ok(words::lyndon_bracketing(&w).map_err(err)?.to_string())
}

/// Catalan number C_n as a decimal string (arbitrary precision).
#[pyfunction]
fn catalan(n: u64) -> String {
    bch::catalan(n).to_string()
}

#[pyfunction]
fn catalan_convolution_holds(n: u64) -> bool {
    bch::catalan_convolution_holds(n)
}

/// Exact coefficients of log(e^X e^Y) up to `max_degree` (<= 12 here to keep
/// the returned dict small), as word -> exact rational string.
#[pyfunction]
fn bch_coefficients(max_degree: usize) -> PyResult<std::collections::HashMap<String, String>> {
    if max_degree > 12 {
        return Err(PyValueError::new_err(
            "bch_coefficients is limited to degree 12; use the CLI table for more",
        ));
    }
    let series = bch::bch_series(max_degree).map_err(err)?;
    Ok(series
        .terms()
        .map(|(w, c)| (w.to_string(), render_exact(c)))
        .collect())
}

/// Coefficient table rows as dicts with exact strings and float renderings.
#[pyfunction]
#[pyo3(signature = (max_degree, lie_max = 12))]
fn coefficient_table<'py>(
    py: Python<'py>,
    max_degree: usize,
    lie_max: usize,
) -> PyResult<Bound<'py, PyList>> {
    let rows = bch::coefficient_table(max_degree, lie_max).map_err(err)?;
    let out = PyList::empty(py);
    for row in &rows {
        let d = PyDict::new(py);
        d.set_item("degree", row.degree)?;
        d.set_item("a_exact", row.a_exact())?;
        d.set_item("a_dec", row.a_dec())?;
        d.set_item("a", to_f64(&row.a))?;
        d.set_item("b_exact", row.b_exact())?;
        d.set_item("b_dec", row.b_dec())?;
        d.set_item("b", row.b.as_ref().map(to_f64))?;
        d.set_item("catalan_bound", row.catalan_dec())?;
        out.append(d)?;
    }
    Ok(out)
}

fn constants_dict<'py>(py: Python<'py>, c: &bounds::ConstantSet) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::radii(c);
    let d = PyDict::new(py);
    d.set_item("c_tri", c.c_tri)?;
    d.set_item("c_mult", c.c_mult)?;
    d.set_item("c_bracket", c.c_bracket)?;
    d.set_item("p", c.p)?;
    d.set_item("c1", c.c1)?;
    d.set_item("c2", c.c2)?;
    d.set_item("c_total", c.c_total)?;
    let radii = PyDict::new(py);
    radii.set_item("r_bch", r.r_bch)?;
    radii.set_item("r_conservative", r.r_conservative)?;
    radii.set_item("r_assoc", r.r_assoc)?;
    radii.set_item("rho", r.rho)?;
    radii.set_item("rho0", r.rho0)?;
    radii.set_item("rho_inv", r.rho_inv)?;
    radii.set_item("lipschitz_l0", r.lipschitz_l0)?;
    d.set_item("radii", radii)?;
    d.set_item("neumann_radius", bounds::neumann_radius(c))?;
    Ok(d)
}

/// Full constant tuple and radii from (c_tri, c_mult?, c_bracket?).
#[pyfunction]
#[pyo3(signature = (c_tri, c_mult = None, c_bracket = None))]
fn derive_constants<'py>(
    py: Python<'py>,
    c_tri: f64,
    c_mult: Option<f64>,
    c_bracket: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let c = bounds::derive_constants(c_tri, c_mult, c_bracket).map_err(err)?;
    constants_dict(py, &c)
}

/// Weak-Schatten specialization: c_tri = 2^(1/p - 1).
#[pyfunction]
fn schatten_constants<'py>(py: Python<'py>, p: f64, c_ideal: f64) -> PyResult<Bound<'py, PyDict>> {
    let c = bounds::schatten_constants(p, c_ideal).map_err(err)?;
    constants_dict(py, &c)
}

fn parse_spec(kind: &str, p: Option<f64>) -> PyResult<numeric::QuasiNormSpec> {
    match kind {
        "op2" | "operator" => Ok(numeric::QuasiNormSpec::Operator2Norm),
        "entrywise" => Ok(numeric::QuasiNormSpec::EntrywiseP {
            p: p.ok_or_else(|| PyValueError::new_err("entrywise norm needs p"))?,
        }),
        "weak-schatten" => Ok(numeric::QuasiNormSpec::WeakSchattenP {
            p: p.ok_or_else(|| PyValueError::new_err("weak-Schatten norm needs p"))?,
        }),
        other => Err(PyValueError::new_err(format!(
            "unknown norm kind {other:?} (op2, entrywise, weak-schatten)"
        ))),
    }
}

fn matrix_from(entries: Vec<f64>) -> PyResult<numeric::DenseMatrix> {
    let dim = (entries.len() as f64).sqrt().round() as usize;
    if dim * dim != entries.len() {
        return Err(PyValueError::new_err(format!(
            "entry list of length {} is not a square matrix",
            entries.len()
        )));
    }
    numeric::DenseMatrix::from_entries(dim, entries).map_err(err)
}

/// Quasi-norm of a square matrix given as a flat row-major list.
#[pyfunction]
#[pyo3(signature = (entries, kind, p = None))]
fn quasi_norm(entries: Vec<f64>, kind: &str, p: Option<f64>) -> PyResult<f64> {
    let m = matrix_from(entries)?;
    numeric::quasi_norm(&m, &parse_spec(kind, p)?).map_err(err)
}

/// Residual of exp(Z_N(x, y)) - exp(x) exp(y) in the chosen norm.
#[pyfunction]
#[pyo3(signature = (x_entries, y_entries, truncation = 8, kind = "op2", p = None))]
fn group_law_residual<'py>(
    py: Python<'py>,
    x_entries: Vec<f64>,
    y_entries: Vec<f64>,
    truncation: usize,
    kind: &str,
    p: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let x = matrix_from(x_entries)?;
    let y = matrix_from(y_entries)?;
    let spec = parse_spec(kind, p)?;
    let components = bch::bch_lie_components(truncation).map_err(err)?;
    let report = numeric::group_law_check(&x, &y, truncation, &spec, &components).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("residual", report.residual)?;
    d.set_item("truncation_degree", report.truncation_degree)?;
    d.set_item("radius_check", report.radius_check)?;
    d.set_item("norm_sum", report.norm_sum)?;
    d.set_item("radius", report.radius)?;
    Ok(d)
}

/// Geometric-decay fit with a residual-bootstrap confidence interval.
#[pyfunction]
#[pyo3(signature = (points, n_min, n_max, exponent = -1.5, bootstrap = 1000, seed = 42))]
#[allow(clippy::too_many_arguments)]
fn fit_geometric<'py>(
    py: Python<'py>,
    points: Vec<(u32, f64)>,
    n_min: u32,
    n_max: u32,
    exponent: f64,
    bootstrap: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let fit =
        analysis::fit_geometric(&points, exponent, n_min, n_max, bootstrap, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("rate", fit.rate)?;
    d.set_item("rate_ci", fit.rate_ci)?;
    d.set_item("prefactor", fit.prefactor)?;
    d.set_item("r_squared", fit.r_squared)?;
    d.set_item("n_range", fit.n_range)?;
    d.set_item("bootstrap_iterations", fit.bootstrap_iterations)?;
    d.set_item("seed", fit.seed)?;
    d.set_item("effective_radius", analysis::effective_radius(fit.rate).map_err(err)?)?;
    Ok(d)
}

/// Exact-arithmetic certificate list, as (name, passed, informational, detail).
#[pyfunction]
#[pyo3(signature = (max_degree = 8, lie_max = 8))]
fn exact_checks(max_degree: usize, lie_max: usize) -> PyResult<Vec<(String, bool, bool, String)>> {
    let (checks, _rows) = verify::exact_checks(max_degree, lie_max).map_err(err)?;
    Ok(checks
        .into_iter()
        .map(|c| (c.name, c.passed, c.informational, c.detail))
        .collect())
}

/// Four-decimal and table renderings of an exact rational p/q.
#[pyfunction]
fn render_rational(numer: i64, denom: i64) -> PyResult<(String, String)> {
    if denom == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    let r = bchq::series::rational(numer, denom);
    Ok((render_fixed4(&r), render_decimal(&r)))
}

#[pymodule]
fn bchq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lyndon_words, m)?)?;
    m.add_function(wrap_pyfunction!(witt_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(standard_factorization, m)?)?;
    m.add_function(wrap_pyfunction!(lyndon_bracketing, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(catalan_convolution_holds, m)?)?;
    m.add_function(wrap_pyfunction!(bch_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_table, m)?)?;
    m.add_function(wrap_pyfunction!(derive_constants, m)?)?;
    m.add_function(wrap_pyfunction!(schatten_constants, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_norm, m)?)?;
    m.add_function(wrap_pyfunction!(group_law_residual, m)?)?;
    m.add_function(wrap_pyfunction!(fit_geometric, m)?)?;
    m.add_function(wrap_pyfunction!(exact_checks, m)?)?;
    m.add_function(wrap_pyfunction!(render_rational, m)?)?;
    Ok(())
}
