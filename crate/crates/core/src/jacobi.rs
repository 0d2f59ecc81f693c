//! Real Jacobi matrices and their spectra.
//!
//! Eigenvalues come from bisection driven by sign agreements of the
//! normalized recurrence
//!
//! ```text
//! x P_k(x) = b_k P_{k+1}(x) + a_k P_k(x) + b_{k-1} P_{k-1}(x),   b_N = 1
//! ```
//!
//! and eigenvectors are `(P_0(λ), ..., P_N(λ))` normalized.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jfraction::JFraction;
use crate::polynomial::rational_to_f64;

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobiError {
    #[error("diag must be nonempty and offdiag one shorter, got {diag} and {offdiag}")]
    ShapeMismatch { diag: usize, offdiag: usize },
    #[error("off-diagonal entry {index} = {value} is not strictly positive")]
    NonPositiveOffDiagonal { index: usize, value: f64 },
    #[error("entries must be finite")]
    NonFinite,
    #[error("matrix of size {0} cannot be truncated")]
    SizeTooSmall(usize),
    #[error("tolerance {tol} cannot separate eigenvalues {lo} and {hi}")]
    ToleranceTooLoose { tol: f64, lo: f64, hi: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("{lambda} is not an eigenvalue (residual {residual:e})")]
    NotAnEigenvalue { lambda: f64, residual: f64 },
    #[error("eigenvalues must be strictly increasing with gaps above the tolerance")]
    DegenerateSpectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJacobi", into = "RawJacobi")]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawJacobi {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TryFrom<RawJacobi> for JacobiMatrix {
    type Error = JacobiError;
    fn try_from(raw: RawJacobi) -> Result<Self, JacobiError> {
        JacobiMatrix::new(raw.diag, raw.offdiag)
    }
}

impl From<JacobiMatrix> for RawJacobi {
    fn from(h: JacobiMatrix) -> Self {
        RawJacobi {
            diag: h.diag,
            offdiag: h.offdiag,
        }
    }
}

impl JacobiMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, JacobiError> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(JacobiError::ShapeMismatch {
                diag: diag.len(),
                offdiag: offdiag.len(),
            });
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(JacobiError::NonFinite);
        }
        if let Some((index, &value)) = offdiag.iter().enumerate().find(|(_, &b)| b <= 0.0) {
            return Err(JacobiError::NonPositiveOffDiagonal { index, value });
        }
        Ok(JacobiMatrix { diag, offdiag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Number of rows, `N + 1`.
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// `b_k` with the conventions `b_{-1} = b_N = 1`.
    fn b(&self, k: isize) -> f64 {
        if k < 0 || k as usize >= self.offdiag.len() {
            1.0
        } else {
            self.offdiag[k as usize]
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.size();
        let radius = |k: usize| {
            let left = if k > 0 { self.offdiag[k - 1] } else { 0.0 };
            let right = if k + 1 < n { self.offdiag[k] } else { 0.0 };
            left + right
        };
        let lo = (0..n)
            .map(|k| self.diag[k] - radius(k))
            .fold(f64::INFINITY, f64::min);
        let hi = (0..n)
            .map(|k| self.diag[k] + radius(k))
            .fold(f64::NEG_INFINITY, f64::max);
        let pad = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        (lo - pad, hi + pad)
    }

    /// `x I - H` as a dense row-major matrix.
    pub fn shifted_dense(&self, x: f64) -> Vec<Vec<f64>> {
        let n = self.size();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = x - self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = -self.offdiag[i];
                m[i + 1][i] = -self.offdiag[i];
            }
        }
        m
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }
}

/// Strictly increasing eigenvalues and the tolerance they were resolved to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    tolerance: f64,
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<f64>, tolerance: f64) -> Result<Self, JacobiError> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(JacobiError::InvalidTolerance(tolerance));
        }
        if eigenvalues.is_empty()
            || eigenvalues.iter().any(|v| !v.is_finite())
            || eigenvalues.windows(2).any(|w| w[1] - w[0] <= tolerance)
        {
            return Err(JacobiError::DegenerateSpectrum);
        }
        Ok(Spectrum {
            eigenvalues,
            tolerance,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest absolute eigenvalue.
    pub fn radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn from_jfraction(jf: &JFraction) -> JacobiMatrix {
    JacobiMatrix {
        diag: jf.a().iter().map(rational_to_f64).collect(),
        offdiag: jf.b2().iter().map(|b| rational_to_f64(b).sqrt()).collect(),
    }
}

/// `P_0(x), ..., P_{N+1}(x)` from the normalized recurrence.
pub fn normalized_poly_sequence(h: &JacobiMatrix, x: f64) -> Vec<f64> {
    let n = h.size();
    let mut out = Vec::with_capacity(n + 1);
    let (mut prev, mut cur) = (0.0, 1.0);
    out.push(cur);
    for k in 0..n {
        let next = ((x - h.diag[k]) * cur - h.b(k as isize - 1) * prev) / h.b(k as isize);
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Determinant by Gaussian elimination with partial pivoting.
fn dense_det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                let (top, bottom) = m.split_at_mut(r);
                for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= f * y;
                }
            }
        }
    }
    det
}

/// Relative discrepancy between `P_{N+1}(x)` from the recurrence and
/// `det(xI - H) / (b_0 ... b_{N-1})` from dense elimination.
pub fn charpoly_check(h: &JacobiMatrix, x: f64) -> f64 {
    let recurrence = *normalized_poly_sequence(h, x).last().unwrap();
    let bprod: f64 = h.offdiag.iter().product();
    let det = dense_det(h.shifted_dense(x)) / bprod;
    (recurrence - det).abs() / det.abs().max(1.0)
}

pub fn truncate_first(h: &JacobiMatrix) -> Result<JacobiMatrix, JacobiError> {
    if h.size() < 2 {
        return Err(JacobiError::SizeTooSmall(h.size()));
    }
    Ok(JacobiMatrix {
        diag: h.diag[1..].to_vec(),
        offdiag: h.offdiag[1..].to_vec(),
    })
}

/// Number of eigenvalues strictly below `x`: the count of sign agreements
/// between consecutive `P_k(x)`, tracked through ratios `P_{k+1}/P_k` so
/// that large matrices cannot overflow.
pub fn sturm_count(h: &JacobiMatrix, x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut ratio = f64::INFINITY; // P_0 / P_{-1}
    for k in 0..h.size() {
        let back = if k == 0 {
            0.0
        } else {
            h.b(k as isize - 1) / ratio
        };
        let mut next = ((x - h.diag[k]) - back) / h.b(k as isize);
        if next == 0.0 {
            // exact zero: treat as just below the root
            next = -tiny;
        }
        if next > 0.0 {
            count += 1;
        }
        ratio = next;
    }
    count
}

pub fn eigenvalues(h: &JacobiMatrix, tol: f64) -> Result<Spectrum, JacobiError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(JacobiError::InvalidTolerance(tol));
    }
    let (glo, ghi) = h.gershgorin();
    let width = tol * glo.abs().max(ghi.abs()).max(1.0);
    let values: Vec<f64> = (0..h.size())
        .map(|k| bisect_kth(h, k, glo, ghi, width))
        .collect();
    if let Some(w) = values.windows(2).find(|w| w[1] - w[0] <= tol) {
        return Err(JacobiError::ToleranceTooLoose {
            tol,
            lo: w[0],
            hi: w[1],
        });
    }
    Ok(Spectrum {
        eigenvalues: values,
        tolerance: tol,
    })
}

/// The `k`-th smallest eigenvalue: `count(lo) <= k < count(hi)`.
fn bisect_kth(h: &JacobiMatrix, k: usize, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(h, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖H v - λ v‖` for a unit vector `v`.
pub fn residual(h: &JacobiMatrix, lambda: f64, v: &[f64]) -> f64 {
    let hv = h.mat_vec(v);
    norm(
        &hv.iter()
            .zip(v)
            .map(|(a, b)| a - lambda * b)
            .collect::<Vec<_>>(),
    )
}

/// Unit eigenvector `(P_0(λ), ..., P_N(λ)) / ‖·‖`.
///
/// Run forward from `P_0 = 1` alone, the recurrence loses the vector
/// whenever its components decay towards the far end. The same recurrence is
/// therefore also run backward from the last site, and the two runs are
/// spliced at the index `r` whose one-row residual is smallest. With exact
/// `λ` both runs are multiples of the same vector; the sign is fixed by
/// `P_0 > 0`.
pub fn eigenvector(h: &JacobiMatrix, lambda: f64) -> Result<Vec<f64>, JacobiError> {
    let n = h.size();
    let fwd = recurrence_run(
        n,
        |k| h.diag[k],
        |k| h.b(k as isize - 1),
        |k| h.b(k as isize),
        lambda,
    );
    let mut bwd = recurrence_run(
        n,
        |k| h.diag[n - 1 - k],
        |k| h.b(n as isize - 1 - k as isize),
        |k| h.b(n as isize - 2 - k as isize),
        lambda,
    );
    bwd.reverse();

    let mut best: Option<(f64, Vec<f64>)> = None;
    for r in 0..n {
        if fwd[r] == 0.0 || bwd[r] == 0.0 {
            continue;
        }
        let mut v: Vec<f64> = (0..n)
            .map(|k| {
                if k <= r {
                    fwd[k] / fwd[r]
                } else {
                    bwd[k] / bwd[r]
                }
            })
            .collect();
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let res = residual(h, lambda, &v);
        if best.as_ref().is_none_or(|(b, _)| res < *b) {
            best = Some((res, v));
        }
    }
    let (r, mut v) = best.ok_or(JacobiError::NotAnEigenvalue {
        lambda,
        residual: f64::NAN,
    })?;
    if r.is_nan() || r > 1e-8 * h.max_abs().max(1.0) {
        return Err(JacobiError::NotAnEigenvalue {
            lambda,
            residual: r,
        });
    }
    if v[0] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(v)
}

/// `u_0 = 1, u_{k+1} = ((x - a_k) u_k - c_k u_{k-1}) / d_k` for `k < n - 1`,
/// rescaled as it goes so that long runs cannot overflow.
fn recurrence_run(
    n: usize,
    a: impl Fn(usize) -> f64,
    c: impl Fn(usize) -> f64,
    d: impl Fn(usize) -> f64,
    x: f64,
) -> Vec<f64> {
    let mut u = Vec::with_capacity(n);
    u.push(1.0);
    for k in 0..n.saturating_sub(1) {
        let prev = if k == 0 { 0.0 } else { u[k - 1] };
        let next = ((x - a(k)) * u[k] - c(k) * prev) / d(k);
        u.push(next);
        if next.abs() > 1e150 {
            u.iter_mut().for_each(|v| *v *= 1e-150);
        }
    }
    u
}

/// Mirror symmetry `a_k = a_{N-k}`, `b_k = b_{N-1-k}` up to `tol`.
pub fn is_persymmetric(h: &JacobiMatrix, tol: f64) -> bool {
    let close = |v: &[f64]| {
        v.iter()
            .zip(v.iter().rev())
            .all(|(x, y)| (x - y).abs() <= tol)
    };
    close(&h.diag) && close(&h.offdiag)
}
