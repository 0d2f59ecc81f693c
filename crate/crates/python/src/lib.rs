//! Python bindings for `palinfrac`.
//!
//! Rationals cross the boundary as `"n/d"` strings (anything whose `str()`
//! parses is accepted, so `int` and `fractions.Fraction` work too) and
//! polynomials as coefficient lists, lowest degree first.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use palinfrac::jacobi::{self, JacobiError, DEFAULT_TOL};
use palinfrac::jfraction::{self, JFracError};
use palinfrac::numeric_cf::{self, CfError, Form};
use palinfrac::pfraction::{self, PFracError};
use palinfrac::polynomial::{self, format_rational, parse_rational, PolyError};
use palinfrac::pst::{self, PstError};
use palinfrac::{BigRational, JFraction, NumericCF, PFraction, Polynomial, Spectrum};

create_exception!(
    palinfrac_py,
    PalinfracError,
    PyValueError,
    "Base class for domain errors."
);
create_exception!(palinfrac_py, NotCoprimeError, PalinfracError);
create_exception!(palinfrac_py, NotInterlacingError, PalinfracError);
create_exception!(palinfrac_py, NotPersymmetricError, PalinfracError);
create_exception!(palinfrac_py, IncommensurableSpectrumError, PalinfracError);
create_exception!(palinfrac_py, NoOddScalingError, PalinfracError);
create_exception!(palinfrac_py, ToleranceTooLooseError, PalinfracError);

fn cf_err(e: CfError) -> PyErr {
    match e {
        CfError::NotCoprime { .. } => NotCoprimeError::new_err(e.to_string()),
        _ => PalinfracError::new_err(e.to_string()),
    }
}

fn poly_err(e: PolyError) -> PyErr {
    PalinfracError::new_err(e.to_string())
}

fn jfrac_err(e: JFracError) -> PyErr {
    match e {
        JFracError::NotInterlacing { .. } => NotInterlacingError::new_err(e.to_string()),
        _ => PalinfracError::new_err(e.to_string()),
    }
}

fn jacobi_err(e: JacobiError) -> PyErr {
    match e {
        JacobiError::ToleranceTooLoose { .. } => ToleranceTooLooseError::new_err(e.to_string()),
        _ => PalinfracError::new_err(e.to_string()),
    }
}

fn pst_err(e: PstError) -> PyErr {
    match e {
        PstError::NotPersymmetric => NotPersymmetricError::new_err(e.to_string()),
        PstError::IncommensurableSpectrum { .. } => {
            IncommensurableSpectrumError::new_err(e.to_string())
        }
        PstError::NoOddScaling => NoOddScalingError::new_err(e.to_string()),
        PstError::Jacobi(j) => jacobi_err(j),
        _ => PalinfracError::new_err(e.to_string()),
    }
}

fn pfrac_err(e: PFracError) -> PyErr {
    match e {
        PFracError::NotCoprime(_) => NotCoprimeError::new_err(e.to_string()),
        _ => PalinfracError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    parse_rational(&obj.str()?.to_cow()?).map_err(poly_err)
}

fn rationals(items: &[Bound<'_, PyAny>]) -> PyResult<Vec<BigRational>> {
    items.iter().map(rational).collect()
}

fn poly(items: &[Bound<'_, PyAny>]) -> PyResult<Polynomial> {
    Ok(Polynomial::new(rationals(items)?))
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn poly_strings(p: &Polynomial) -> Vec<String> {
    strings(p.coeffs())
}

/// Terms of the Euclidean expansion of `q/p`.
#[pyfunction]
#[pyo3(signature = (q, p, padded = false))]
fn expand_euclid(q: BigUint, p: BigUint, padded: bool) -> PyResult<Vec<BigUint>> {
    let form = if padded {
        Form::Padded
    } else {
        Form::Canonical
    };
    numeric_cf::expand_euclid(&q, &p, form)
        .map(|cf| cf.terms().to_vec())
        .map_err(cf_err)
}

/// Convergent pairs `(p_k, q_k)`, `k = 1..=N+1`.
#[pyfunction]
fn convergents(terms: Vec<BigUint>) -> PyResult<Vec<(BigUint, BigUint)>> {
    let cf = NumericCF::new(terms).map_err(cf_err)?;
    Ok(numeric_cf::convergents(&cf)
        .into_iter()
        .map(|c| (c.p, c.q))
        .collect())
}

/// `(palindromic, s)` where `p | q^2 + s` for the palindromic case.
#[pyfunction]
fn is_palindromic_serret(q: BigUint, p: BigUint) -> PyResult<(bool, Option<i8>)> {
    let d = numeric_cf::is_palindromic_serret(&q, &p).map_err(cf_err)?;
    Ok((d.palindromic, d.sign))
}

#[pyfunction]
fn chebyshev_t(n: usize) -> Vec<String> {
    poly_strings(&polynomial::chebyshev_t(n))
}

#[pyfunction]
fn chebyshev_u(n: usize) -> Vec<String> {
    poly_strings(&polynomial::chebyshev_u(n))
}

/// `(a, b2)` of the J-fraction of `Q/P`; both must be monic.
#[pyfunction]
fn expand_jfraction(
    q: Vec<Bound<'_, PyAny>>,
    p: Vec<Bound<'_, PyAny>>,
) -> PyResult<(Vec<String>, Vec<String>)> {
    let jf = jfraction::expand_jfraction(&poly(&q)?, &poly(&p)?).map_err(jfrac_err)?;
    Ok((strings(jf.a()), strings(jf.b2())))
}

fn jfraction_from(a: &[Bound<'_, PyAny>], b2: &[Bound<'_, PyAny>]) -> PyResult<JFraction> {
    JFraction::new(rationals(a)?, rationals(b2)?).map_err(jfrac_err)
}

/// `(Q, P)` rebuilt from `(a, b2)`.
#[pyfunction]
fn jfraction_to_rational(
    a: Vec<Bound<'_, PyAny>>,
    b2: Vec<Bound<'_, PyAny>>,
) -> PyResult<(Vec<String>, Vec<String>)> {
    let (q, p, _) = jfraction::jfraction_to_rational(&jfraction_from(&a, &b2)?);
    Ok((poly_strings(&q), poly_strings(&p)))
}

#[pyfunction]
fn is_palindromic_jfraction(q: Vec<Bound<'_, PyAny>>, p: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
    let d = jfraction::is_palindromic_jfraction(&poly(&q)?, &poly(&p)?).map_err(jfrac_err)?;
    Ok(d.palindromic)
}

#[pyfunction]
fn chebyshev_jfraction(n: usize) -> PyResult<(Vec<String>, Vec<String>)> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    let jf = jfraction::chebyshev_jfraction(n);
    Ok((strings(jf.a()), strings(jf.b2())))
}

/// Exact Sturm-sequence test that the roots of `q` strictly interlace those of `p`.
#[pyfunction]
fn interlacing_check(p: Vec<Bound<'_, PyAny>>, q: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
    Ok(jfraction::interlacing_check(&poly(&p)?, &poly(&q)?))
}

#[pyfunction]
fn expand_pfraction(
    q: Vec<Bound<'_, PyAny>>,
    p: Vec<Bound<'_, PyAny>>,
) -> PyResult<Vec<Vec<String>>> {
    let pf = pfraction::expand_pfraction(&poly(&q)?, &poly(&p)?).map_err(pfrac_err)?;
    Ok(pf.partial_quotients().iter().map(poly_strings).collect())
}

/// `(Q, P)` with `P` monic.
#[pyfunction]
fn pfraction_to_rational(
    quotients: Vec<Vec<Bound<'_, PyAny>>>,
) -> PyResult<(Vec<String>, Vec<String>)> {
    let terms = quotients
        .iter()
        .map(|q| poly(q))
        .collect::<PyResult<Vec<_>>>()?;
    let pf = PFraction::new(terms).map_err(pfrac_err)?;
    let (q, p) = pfraction::pfraction_to_rational(&pf);
    Ok((poly_strings(&q), poly_strings(&p)))
}

/// `(divisible, palindromic, scale)`: `P | Q^2 - 1`, term-wise symmetry, and
/// the leading-coefficient product of the expansion.
#[pyfunction]
fn is_palindromic_pfraction(
    q: Vec<Bound<'_, PyAny>>,
    p: Vec<Bound<'_, PyAny>>,
) -> PyResult<(bool, bool, String)> {
    let d = pfraction::is_palindromic_pfraction(&poly(&q)?, &poly(&p)?).map_err(pfrac_err)?;
    Ok((d.divisible, d.termwise, format_rational(&d.scale)))
}

/// Real symmetric tridiagonal matrix with positive off-diagonal.
#[pyclass(name = "JacobiMatrix", module = "palinfrac_py", frozen)]
struct PyJacobiMatrix {
    inner: palinfrac::JacobiMatrix,
}

#[pymethods]
impl PyJacobiMatrix {
    #[new]
    fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> PyResult<Self> {
        let inner = palinfrac::JacobiMatrix::new(diag, offdiag).map_err(jacobi_err)?;
        Ok(PyJacobiMatrix { inner })
    }

    #[staticmethod]
    fn from_jfraction(a: Vec<Bound<'_, PyAny>>, b2: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PyJacobiMatrix {
            inner: jacobi::from_jfraction(&jfraction_from(&a, &b2)?),
        })
    }

    #[getter]
    fn diag(&self) -> Vec<f64> {
        self.inner.diag().to_vec()
    }

    #[getter]
    fn offdiag(&self) -> Vec<f64> {
        self.inner.offdiag().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!(
            "JacobiMatrix(diag={:?}, offdiag={:?})",
            self.inner.diag(),
            self.inner.offdiag()
        )
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn eigenvalues(&self, tol: f64) -> PyResult<Vec<f64>> {
        jacobi::eigenvalues(&self.inner, tol)
            .map(|s| s.eigenvalues().to_vec())
            .map_err(jacobi_err)
    }

    fn eigenvector(&self, lam: f64) -> PyResult<Vec<f64>> {
        jacobi::eigenvector(&self.inner, lam).map_err(jacobi_err)
    }

    fn normalized_poly_sequence(&self, x: f64) -> Vec<f64> {
        jacobi::normalized_poly_sequence(&self.inner, x)
    }

    fn charpoly_check(&self, x: f64) -> f64 {
        jacobi::charpoly_check(&self.inner, x)
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn is_persymmetric(&self, tol: f64) -> bool {
        jacobi::is_persymmetric(&self.inner, tol)
    }

    /// `(T, phi)` of perfect state transfer from site 0 to site N.
    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn verify_pst(&self, tol: f64) -> PyResult<(f64, f64)> {
        let c = pst::verify_pst(&self.inner, tol).map_err(pst_err)?;
        Ok((c.t, c.phi))
    }

    /// Amplitudes of `e^{itH} e_0`, one list per time.
    fn evolve(&self, times: Vec<f64>) -> PyResult<Vec<Vec<num_complex::Complex64>>> {
        Ok(pst::evolve(&self.inner, &times)
            .map_err(pst_err)?
            .amplitudes)
    }

    fn fidelity(&self, t: f64) -> PyResult<f64> {
        pst::fidelity(&self.inner, t).map_err(pst_err)
    }
}

/// Mirror-symmetric Jacobi matrix with the given strictly increasing spectrum.
#[pyfunction]
#[pyo3(signature = (eigenvalues, tol = DEFAULT_TOL))]
fn design_persymmetric(eigenvalues: Vec<f64>, tol: f64) -> PyResult<PyJacobiMatrix> {
    let spectrum = Spectrum::new(eigenvalues, tol).map_err(jacobi_err)?;
    let inner = pst::design_persymmetric(&spectrum).map_err(pst_err)?;
    Ok(PyJacobiMatrix { inner })
}

#[pymodule]
fn palinfrac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PalinfracError", py.get_type::<PalinfracError>())?;
    m.add("NotCoprimeError", py.get_type::<NotCoprimeError>())?;
    m.add("NotInterlacingError", py.get_type::<NotInterlacingError>())?;
    m.add(
        "NotPersymmetricError",
        py.get_type::<NotPersymmetricError>(),
    )?;
    m.add(
        "IncommensurableSpectrumError",
        py.get_type::<IncommensurableSpectrumError>(),
    )?;
    m.add("NoOddScalingError", py.get_type::<NoOddScalingError>())?;
    m.add(
        "ToleranceTooLooseError",
        py.get_type::<ToleranceTooLooseError>(),
    )?;
    m.add_class::<PyJacobiMatrix>()?;
    m.add_function(wrap_pyfunction!(expand_euclid, m)?)?;
    m.add_function(wrap_pyfunction!(convergents, m)?)?;
    m.add_function(wrap_pyfunction!(is_palindromic_serret, m)?)?;
    m.add_function(wrap_pyfunction!(chebyshev_t, m)?)?;
    m.add_function(wrap_pyfunction!(chebyshev_u, m)?)?;
    m.add_function(wrap_pyfunction!(expand_jfraction, m)?)?;
    m.add_function(wrap_pyfunction!(jfraction_to_rational, m)?)?;
    m.add_function(wrap_pyfunction!(is_palindromic_jfraction, m)?)?;
    m.add_function(wrap_pyfunction!(chebyshev_jfraction, m)?)?;
    m.add_function(wrap_pyfunction!(interlacing_check, m)?)?;
    m.add_function(wrap_pyfunction!(expand_pfraction, m)?)?;
    m.add_function(wrap_pyfunction!(pfraction_to_rational, m)?)?;
    m.add_function(wrap_pyfunction!(is_palindromic_pfraction, m)?)?;
    m.add_function(wrap_pyfunction!(design_persymmetric, m)?)?;
    Ok(())
}
