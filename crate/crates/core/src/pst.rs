//! Perfect state transfer on Jacobi chains.
//!
//! A chain `H` transfers `e_0` to `e_N` perfectly at time `T` when
//! `e^{iφ} e^{iTH} e_0 = e_N` for some phase `φ`. This holds exactly when the
//! chain is mirror symmetric and `e^{i(Tλ_k + φ)} = (-1)^{N+k}` for every
//! eigenvalue, i.e. every gap `λ_{k+1} - λ_k` times `T` is an odd multiple
//! of `π`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jacobi::{self, JacobiError, JacobiMatrix, Spectrum};
use crate::numeric_cf::rational_approximation;

/// Denominator bound for rational reconstruction of gap ratios.
pub const MAX_RATIO_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PstError {
    #[error("the chain is not mirror symmetric")]
    NotPersymmetric,
    #[error("gap ratio {ratio} has no rational reconstruction with denominator <= {MAX_RATIO_DENOMINATOR}")]
    IncommensurableSpectrum { ratio: f64 },
    #[error("gaps are commensurate but no common scaling makes every gap an odd multiple")]
    NoOddScaling,
    #[error("designed chain failed its check: {0}")]
    DesignCheckFailed(String),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
}

/// Transfer time, global phase in `[0, 2π)`, and the spectrum they satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct PstCertificate {
    pub t: f64,
    pub phi: f64,
    pub spectrum: Spectrum,
}

#[derive(Serialize, Deserialize)]
struct RawCertificate {
    #[serde(rename = "T")]
    t: f64,
    phi: f64,
    eigenvalues: Vec<f64>,
}

impl Serialize for PstCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawCertificate {
            t: self.t,
            phi: self.phi,
            eigenvalues: self.spectrum.eigenvalues().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PstCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawCertificate::deserialize(d)?;
        let spectrum = Spectrum::new(raw.eigenvalues, jacobi::DEFAULT_TOL)
            .map_err(serde::de::Error::custom)?;
        Ok(PstCertificate {
            t: raw.t,
            phi: raw.phi,
            spectrum,
        })
    }
}

/// Components of `e^{itH} e_0` sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Vec<Complex64>>,
}

impl AmplitudeTrace {
    pub fn fidelity_at(&self, i: usize) -> f64 {
        self.amplitudes[i].last().map_or(0.0, Complex64::norm_sqr)
    }

    /// Header `t,re_0,im_0,...,re_N,im_N,fidelity`, one row per time.
    pub fn to_csv(&self) -> String {
        let n = self.amplitudes.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for j in 0..n {
            write!(out, ",re_{j},im_{j}").unwrap();
        }
        out.push_str(",fidelity\n");
        for (i, (t, amps)) in self.times.iter().zip(&self.amplitudes).enumerate() {
            write!(out, "{t:e}").unwrap();
            for a in amps {
                write!(out, ",{:e},{:e}", a.re, a.im).unwrap();
            }
            writeln!(out, ",{:e}", self.fidelity_at(i)).unwrap();
        }
        out
    }
}

/// Default phase tolerance `1e-8 (1 + |T| ρ)` for spectral radius `ρ`.
pub fn default_phase_tolerance(t: f64, spectrum: &Spectrum) -> f64 {
    1e-8 * (1.0 + t.abs() * spectrum.radius())
}

/// Wraps an angle into `(-π, π]`.
fn wrap(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Checks `T λ_k + φ ≡ (N + k) π (mod 2π)` within `tolphase` for every `k`.
pub fn check_pst1_spectrum(spectrum: &Spectrum, t: f64, phi: f64, tolphase: f64) -> bool {
    let n = spectrum.len() - 1;
    spectrum.eigenvalues().iter().enumerate().all(|(k, &lam)| {
        let target = if (n + k).is_multiple_of(2) { 0.0 } else { PI };
        wrap(t * lam + phi - target).abs() <= tolphase
    })
}

/// Verifies mirror symmetry and the phase condition and returns the
/// smallest transfer time together with its phase.
///
/// The gaps `Δ_k` are compared through ratios `Δ_k / Δ_0 = n_k / d_k`
/// recovered from continued-fraction convergents. With `D = lcm(d_k)` the
/// candidate times are `T = j D π / Δ_0`; all products `T Δ_k` are odd
/// multiples of `π` only if `D` and every `D n_k / d_k` are odd, and then the
/// smallest time is `j = 1`.
pub fn verify_pst(h: &JacobiMatrix, tol: f64) -> Result<PstCertificate, PstError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(JacobiError::InvalidTolerance(tol).into());
    }
    let scale = h.max_abs().max(1.0);
    if !jacobi::is_persymmetric(h, tol * scale) {
        return Err(PstError::NotPersymmetric);
    }
    let spectrum = jacobi::eigenvalues(h, f64::EPSILON)?;
    let lams = spectrum.eigenvalues();
    let n = lams.len() - 1;
    if n == 0 {
        // Every T works for a single site; report T = π.
        let phi = (-PI * lams[0]).rem_euclid(TAU);
        return Ok(PstCertificate {
            t: PI,
            phi,
            spectrum,
        });
    }

    let gaps: Vec<f64> = lams.windows(2).map(|w| w[1] - w[0]).collect();
    let base = gaps[0];
    let spread = lams[n] - lams[0];
    let mut fracs = Vec::with_capacity(n);
    for g in &gaps {
        let ratio = g / base;
        // absolute eigenvalue error tol·spread, floored at roundoff
        let ratio_tol = tol.max(64.0 * f64::EPSILON) * (1.0 + ratio) * spread / base;
        let (num, den) = rational_approximation(ratio, MAX_RATIO_DENOMINATOR, ratio_tol)
            .ok_or(PstError::IncommensurableSpectrum { ratio })?;
        let num = num
            .to_biguint()
            .ok_or(PstError::IncommensurableSpectrum { ratio })?;
        fracs.push((num, den));
    }
    let lcm = fracs.iter().fold(BigUint::one(), |acc, (_, d)| acc.lcm(d));
    let two = BigUint::from(2u8);
    let odd = |v: &BigUint| !(v % &two).is_zero();
    if !odd(&lcm) || !fracs.iter().all(|(num, den)| odd(&(&lcm * num / den))) {
        return Err(PstError::NoOddScaling);
    }
    let t = lcm.to_f64().unwrap() * PI / base;
    let parity = if n.is_multiple_of(2) { 0.0 } else { PI };
    let phi = (parity - t * lams[0]).rem_euclid(TAU);
    debug_assert!(check_pst1_spectrum(
        &spectrum,
        t,
        phi,
        1e-6 * (1.0 + t * spectrum.radius())
    ));
    Ok(PstCertificate { t, phi, spectrum })
}

/// Eigenpairs of `H` ordered by eigenvalue.
fn eigen_decomposition(h: &JacobiMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>), PstError> {
    let spectrum = jacobi::eigenvalues(h, f64::EPSILON)?;
    let vectors = spectrum
        .eigenvalues()
        .iter()
        .map(|&l| jacobi::eigenvector(h, l))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((spectrum.eigenvalues().to_vec(), vectors))
}

/// `e^{itH} e_0 = Σ_k e^{itλ_k} v_k (v_k · e_0)` at each time.
pub fn evolve(h: &JacobiMatrix, times: &[f64]) -> Result<AmplitudeTrace, PstError> {
    let (lams, vecs) = eigen_decomposition(h)?;
    let n = h.size();
    let amplitudes = times
        .iter()
        .map(|&t| {
            let mut amp = vec![Complex64::zero(); n];
            for (lam, v) in lams.iter().zip(&vecs) {
                let w = Complex64::from_polar(v[0], t * lam);
                for (a, vj) in amp.iter_mut().zip(v) {
                    *a += w * vj;
                }
            }
            amp
        })
        .collect();
    Ok(AmplitudeTrace {
        times: times.to_vec(),
        amplitudes,
    })
}

/// `|(e^{itH} e_0)_N|^2`
pub fn fidelity(h: &JacobiMatrix, t: f64) -> Result<f64, PstError> {
    Ok(evolve(h, &[t])?.fidelity_at(0))
}

/// Builds a mirror-symmetric Jacobi matrix with the given spectrum.
///
/// The spectral measure `Σ w_k δ_{λ_k}` with
/// `w_k ∝ 1 / Π_{j≠k} |λ_k - λ_j|` is orthogonalized by Lanczos on
/// `diag(λ)` starting from `√w`; the recurrence coefficients are the matrix.
/// The result is checked for persymmetry (`1e-10`) and spectrum (`1e-8`).
pub fn design_persymmetric(spectrum: &Spectrum) -> Result<JacobiMatrix, PstError> {
    let lams = spectrum.eigenvalues();
    let n = lams.len();
    if lams.windows(2).any(|w| w[1] <= w[0]) {
        return Err(JacobiError::DegenerateSpectrum.into());
    }
    // log-weights avoid overflow for long chains
    let logw: Vec<f64> = (0..n)
        .map(|k| {
            -(0..n)
                .filter(|&j| j != k)
                .map(|j| (lams[k] - lams[j]).abs().ln())
                .sum::<f64>()
        })
        .collect();
    let max = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logw.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();

    let mut basis: Vec<Vec<f64>> = vec![w.iter().map(|x| (x / total).sqrt()).collect()];
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let q = &basis[k];
        let mut r: Vec<f64> = q.iter().zip(lams).map(|(x, l)| x * l).collect();
        diag.push(dot(q, &r));
        if k + 1 == n {
            break;
        }
        // full reorthogonalization, twice
        for _ in 0..2 {
            for prev in &basis {
                let c = dot(prev, &r);
                r.iter_mut().zip(prev).for_each(|(x, p)| *x -= c * p);
            }
        }
        let b = dot(&r, &r).sqrt();
        if b.is_nan() || b <= 0.0 {
            return Err(PstError::DesignCheckFailed(format!(
                "Lanczos breakdown at step {k}"
            )));
        }
        offdiag.push(b);
        basis.push(r.iter().map(|x| x / b).collect());
    }
    let h = JacobiMatrix::new(diag, offdiag)?;

    let scale = h.max_abs().max(1.0);
    if !jacobi::is_persymmetric(&h, 1e-10 * scale) {
        return Err(PstError::DesignCheckFailed(
            "result is not persymmetric".into(),
        ));
    }
    let got = jacobi::eigenvalues(&h, jacobi::DEFAULT_TOL)?;
    if let Some((a, b)) = got
        .eigenvalues()
        .iter()
        .zip(lams)
        .find(|(a, b)| (*a - *b).abs() > 1e-8 * scale)
    {
        return Err(PstError::DesignCheckFailed(format!(
            "eigenvalue {a} does not match {b}"
        )));
    }
    Ok(h)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
