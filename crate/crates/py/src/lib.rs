//! Python bindings: build finite sections, extract spectra, reconstruct
//! multipliers, and run distribution/membership tests from Python.

use num_complex::Complex;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sectra::expr::{multiplier_from_expr, weight_from_spec};
use sectra::matrices::{eigen_decompose, singular_values, ToeplitzMatrix};
use sectra::reconstruct::{
    reconstruct_block, reconstruct_direct, reconstruct_peeled, AlgorithmTag, ReconstructionResult,
};
use sectra::sections::{
    chebyshev1_section_oversampled, chebyshev2_section_oversampled, general_section_oversampled,
    untransform, FiniteSection, SectionConvention,
};
use sectra::spectral::{
    distribution_compare, range_membership, RangeVerdict, TestFunction, DEFAULT_MEMBER_THRESHOLD,
    DEFAULT_QUAD_POINTS,
};
use sectra::symbols::{
    builtin_symbol, fourier_coefficients, pullback_multiplier, MultiplierSpec, WeightSpec,
    DEFAULT_OVERSAMPLE,
};

fn to_py_err(e: sectra::Error) -> PyErr {
    match e {
        sectra::Error::Domain(_) | sectra::Error::Parse { .. } | sectra::Error::Unsupported(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn build_inner(
    phi: &str,
    n: &[usize],
    weight: &str,
    block: Option<(usize, usize)>,
    oversample: usize,
) -> Result<(FiniteSection, MultiplierSpec), sectra::Error> {
    let dims = n.len();
    let spec = multiplier_from_expr(phi, dims, block)?;
    let section = match weight {
        "cheb1" => chebyshev1_section_oversampled(&spec, n, oversample)?,
        "cheb2" => {
            if dims != 1 {
                return Err(sectra::Error::Unsupported(
                    "cheb2 sections are univariate".into(),
                ));
            }
            chebyshev2_section_oversampled(&spec, n[0], oversample)?
        }
        other => {
            let w = weight_from_spec(other)?;
            if dims != 1 {
                return Err(sectra::Error::Unsupported(
                    "custom-weight sections are univariate".into(),
                ));
            }
            general_section_oversampled(&spec, &w, n[0], oversample)?
        }
    };
    Ok((section, spec))
}

/// A dense finite section of the multiplication operator.
#[pyclass]
struct Section {
    inner: FiniteSection,
    phi: MultiplierSpec,
}

fn reconstruction_dict(py: Python<'_>, r: &ReconstructionResult) -> PyResult<Py<PyDict>> {
    let d = PyDict::new(py);
    d.set_item(
        "algorithm",
        match r.algorithm() {
            AlgorithmTag::Direct => "direct",
            AlgorithmTag::HankelPeeled => "hankel_peeled",
        },
    )?;
    d.set_item("grid", r.grid().to_vec())?;
    d.set_item("f_values", r.f_values().to_vec())?;
    d.set_item("phi_values", r.phi_values().to_vec())?;
    d.set_item("excluded", r.excluded().to_vec())?;
    d.set_item("max_residual", r.max_residual())?;
    d.set_item("mean_residual", r.mean_residual())?;
    d.set_item("coeff_decay", r.coeff_decay())?;
    Ok(d.unbind())
}

#[pymethods]
impl Section {
    fn order(&self) -> Vec<usize> {
        self.inner.order().to_vec()
    }

    fn block_dims(&self) -> (usize, usize) {
        self.inner.block_dims()
    }

    fn multiplier(&self) -> String {
        self.inner.multiplier_id().to_string()
    }

    fn weight(&self) -> String {
        self.inner.weight().label()
    }

    fn convention(&self) -> &'static str {
        match self.inner.convention() {
            SectionConvention::Unnormalized => "unnormalized",
            SectionConvention::Orthonormal => "orthonormal",
        }
    }

    /// Dense matrix entries as nested lists of complex numbers.
    fn dense(&self) -> Vec<Vec<Complex<f64>>> {
        let m = self.inner.matrix();
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    }

    /// Eigenvalues of the section (symmetric solver for Hermitian input).
    fn eigenvalues(&self) -> PyResult<Vec<Complex<f64>>> {
        let sample = eigen_decompose(self.inner.matrix(), false).map_err(to_py_err)?;
        Ok(sample.values().to_vec())
    }

    /// Singular values of the section, descending.
    fn singular_values(&self) -> PyResult<Vec<f64>> {
        let sample = singular_values(self.inner.matrix()).map_err(to_py_err)?;
        Ok(sample.real_values())
    }

    /// Reconstruct the multiplier: algorithm 1 takes the Frobenius-optimal
    /// circulant of the whole section, algorithm 2 peels the Hankel part
    /// first. Residuals compare against the multiplier the section was built
    /// from (scalar sections).
    #[pyo3(signature = (algorithm = 1))]
    fn reconstruct(&self, py: Python<'_>, algorithm: u8) -> PyResult<Py<PyDict>> {
        let result = match algorithm {
            1 => reconstruct_direct(&self.inner),
            2 => reconstruct_peeled(&self.inner),
            other => {
                return Err(PyValueError::new_err(format!(
                    "algorithm must be 1 or 2, got {other}"
                )))
            }
        }
        .map_err(to_py_err)?;
        let result = if self.phi.block_dims() == (1, 1) {
            result.with_reference(&self.phi)
        } else {
            result
        };
        reconstruction_dict(py, &result)
    }

    /// Entrywise reconstruction of a block section. Returns a p x q nested
    /// list of per-entry reconstruction dicts plus a dict with the per-grid
    /// singular values of the reconstructed multiplier blocks.
    fn reconstruct_entrywise(&self, py: Python<'_>) -> PyResult<(Vec<Vec<Py<PyDict>>>, Py<PyDict>)> {
        let (results, sample) = reconstruct_block(&self.inner).map_err(to_py_err)?;
        let mut rows = Vec::with_capacity(results.len());
        for row in &results {
            let mut out = Vec::with_capacity(row.len());
            for r in row {
                out.push(reconstruction_dict(py, r)?);
            }
            rows.push(out);
        }
        let d = PyDict::new(py);
        d.set_item("singular_values", sample.real_values())?;
        d.set_item("grid", sample.grid().map(|g| g.to_vec()))?;
        Ok((rows, d.unbind()))
    }
}

/// Build a finite section from a multiplier expression. `weight` is cheb1,
/// cheb2 or custom:<expr>; block multipliers pass `block=(p, q)` and list
/// the entries in `phi` separated by ';'.
#[pyfunction]
#[pyo3(signature = (phi, n, weight = "cheb1", block = None, oversample = None))]
fn build_section(
    phi: &str,
    n: Vec<usize>,
    weight: &str,
    block: Option<(usize, usize)>,
    oversample: Option<usize>,
) -> PyResult<Section> {
    let (inner, phi) = build_inner(
        phi,
        &n,
        weight,
        block,
        oversample.unwrap_or(DEFAULT_OVERSAMPLE),
    )
    .map_err(to_py_err)?;
    Ok(Section { inner, phi })
}

/// Compare the spectral mean of a matrix against the symbol integral.
/// Either `symbol` names a built-in (2-2cos, pi-cos, exp-is), tested on its
/// Toeplitz matrix, or `phi` gives a multiplier whose section is tested.
#[pyfunction]
#[pyo3(signature = (n, symbol = None, phi = None, weight = "cheb1", f = "t", quad_points = None))]
fn dist_test(
    py: Python<'_>,
    n: Vec<usize>,
    symbol: Option<&str>,
    phi: Option<&str>,
    weight: &str,
    f: &str,
    quad_points: Option<usize>,
) -> PyResult<Py<PyDict>> {
    let func = TestFunction::from_spec(f).map_err(to_py_err)?;
    let quad = quad_points.unwrap_or(DEFAULT_QUAD_POINTS);
    let report = match (symbol, phi) {
        (Some(name), None) => {
            if n.len() != 1 {
                return Err(PyValueError::new_err("built-in symbols are univariate"));
            }
            let (sym, real) = builtin_symbol(name, n[0]).map_err(to_py_err)?;
            let table =
                fourier_coefficients(&sym, &n, DEFAULT_OVERSAMPLE, false).map_err(to_py_err)?;
            let t = ToeplitzMatrix::new(table, n.clone()).map_err(to_py_err)?;
            let dense = t.dense().map_err(to_py_err)?;
            let sample = if real {
                eigen_decompose(&dense, true)
            } else {
                singular_values(&dense)
            }
            .map_err(to_py_err)?;
            distribution_compare(&sample, &sym, &func, quad).map_err(to_py_err)?
        }
        (None, Some(src)) => {
            let (section, spec) =
                build_inner(src, &n, weight, None, DEFAULT_OVERSAMPLE).map_err(to_py_err)?;
            let m = section.matrix();
            let hermitian = (m - m.adjoint()).norm() <= 1e-10 * m.norm().max(f64::MIN_POSITIVE);
            let sample = if hermitian {
                eigen_decompose(m, true)
            } else {
                singular_values(m)
            }
            .map_err(to_py_err)?;
            let (sym, _) = pullback_multiplier(&spec, &WeightSpec::chebyshev1(n.len()))
                .map_err(to_py_err)?;
            distribution_compare(&sample, &sym, &func, quad).map_err(to_py_err)?
        }
        _ => {
            return Err(PyValueError::new_err(
                "dist_test needs exactly one of symbol= or phi=",
            ))
        }
    };
    let d = PyDict::new(py);
    d.set_item("test_function", &report.test_function_id)?;
    d.set_item("empirical_mean", report.empirical_mean)?;
    d.set_item("integral_value", report.integral_value)?;
    d.set_item("abs_error", report.abs_error)?;
    d.set_item("order", report.order)?;
    d.set_item("non_hermitian_flagged", report.non_hermitian_flagged)?;
    Ok(d.unbind())
}

/// Membership test of a complex point against the circulant spectrum of a
/// section.
#[pyfunction]
#[pyo3(signature = (phi, n, point, eps, weight = "cheb1", threshold = None))]
fn range_test(
    py: Python<'_>,
    phi: &str,
    n: Vec<usize>,
    point: (f64, f64),
    eps: f64,
    weight: &str,
    threshold: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let (section, _) = build_inner(phi, &n, weight, None, DEFAULT_OVERSAMPLE).map_err(to_py_err)?;
    let x = match section.convention() {
        SectionConvention::Orthonormal => untransform(&section).map_err(to_py_err)?,
        SectionConvention::Unnormalized => section.matrix().clone(),
    };
    let circ = sectra::circulants::optimal_circulant_dense(&x, section.order(), (1, 1))
        .map_err(to_py_err)?;
    let sample = circ.eigenvalues().map_err(to_py_err)?;
    let report = range_membership(
        &sample,
        Complex::new(point.0, point.1),
        eps,
        threshold.unwrap_or(DEFAULT_MEMBER_THRESHOLD),
    )
    .map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("point", report.point)?;
    d.set_item("eps", report.radius)?;
    d.set_item("fraction_inside", report.fraction_inside)?;
    d.set_item(
        "verdict",
        match report.verdict {
            RangeVerdict::MemberWithinEps => "member_within_eps",
            RangeVerdict::Excluded => "excluded",
            RangeVerdict::Inconclusive => "inconclusive",
        },
    )?;
    Ok(d.unbind())
}

#[pymodule]
fn sectra_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Section>()?;
    m.add_function(wrap_pyfunction!(build_section, m)?)?;
    m.add_function(wrap_pyfunction!(dist_test, m)?)?;
    m.add_function(wrap_pyfunction!(range_test, m)?)?;
    Ok(())
}
