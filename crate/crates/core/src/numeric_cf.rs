//! Finite continued fractions of rationals in `(0, 1)`:
//!
//! ```text
//! q/p = 1/(a_0 + 1/(a_1 + ... + 1/a_N))
//! ```
//!
//! Convergent denominators `p_k` and numerators `q_k` follow the recurrences
//! `p_{k+1} = a_k p_k + p_{k-1}` and `q_{k+1} = a_k q_k + q_{k-1}` seeded with
//! `p_{-1} = 0, p_0 = 1, q_{-1} = 1, q_0 = 0`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("gcd({p}, {q}) = {gcd} is not 1")]
    NotCoprime {
        q: BigUint,
        p: BigUint,
        gcd: BigUint,
    },
    #[error("need 0 < q < p, got q = {q}, p = {p}")]
    OutOfRange { q: BigUint, p: BigUint },
    #[error("continued fraction terms must be nonempty and positive")]
    InvalidTerms,
}

/// Canonical form ends in a term `>= 2`; padded form rewrites the last term
/// `a_N` as `(a_N - 1) + 1/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Canonical,
    Padded,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumericCF {
    terms: Vec<BigUint>,
}

impl TryFrom<Vec<BigUint>> for NumericCF {
    type Error = CfError;
    fn try_from(terms: Vec<BigUint>) -> Result<Self, CfError> {
        NumericCF::new(terms)
    }
}

impl From<NumericCF> for Vec<BigUint> {
    fn from(cf: NumericCF) -> Self {
        cf.terms
    }
}

/// Numerator `q_k` and denominator `p_k` of the k-th convergent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentPair {
    pub p: BigUint,
    pub q: BigUint,
}

impl NumericCF {
    /// Every term must be at least 1. A value of exactly 1 (`terms == [1]`)
    /// is rejected since it lies outside `(0, 1)`.
    pub fn new(terms: Vec<BigUint>) -> Result<Self, CfError> {
        if terms.is_empty()
            || terms.iter().any(Zero::is_zero)
            || (terms.len() == 1 && terms[0].is_one())
        {
            return Err(CfError::InvalidTerms);
        }
        Ok(NumericCF { terms })
    }

    pub fn from_u64(terms: &[u64]) -> Result<Self, CfError> {
        Self::new(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_palindrome(&self) -> bool {
        self.terms.iter().eq(self.terms.iter().rev())
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.last().is_some_and(|t| *t >= BigUint::from(2u8))
    }
}

fn check_pair(q: &BigUint, p: &BigUint) -> Result<(), CfError> {
    if q.is_zero() || q >= p {
        return Err(CfError::OutOfRange {
            q: q.clone(),
            p: p.clone(),
        });
    }
    let g = q.gcd(p);
    if !g.is_one() {
        return Err(CfError::NotCoprime {
            q: q.clone(),
            p: p.clone(),
            gcd: g,
        });
    }
    Ok(())
}

/// Expands `q/p` by the Euclidean algorithm.
pub fn expand_euclid(q: &BigUint, p: &BigUint, form: Form) -> Result<NumericCF, CfError> {
    check_pair(q, p)?;
    let mut terms = Vec::new();
    let (mut num, mut den) = (q.clone(), p.clone());
    // q/p = 1/(den/num); den = a*num + r
    while !num.is_zero() {
        let (a, r) = den.div_rem(&num);
        terms.push(a);
        den = num;
        num = r;
    }
    if form == Form::Padded {
        let last = terms.last_mut().expect("at least one Euclid step");
        *last -= 1u8;
        terms.push(BigUint::one());
    }
    Ok(NumericCF { terms })
}

/// Convergent pairs `(p_k, q_k)` for `k = 1..=N+1`.
pub fn convergents(cf: &NumericCF) -> Vec<ConvergentPair> {
    convergent_iter(cf.terms.iter().cloned())
        .map(|(p, q)| ConvergentPair { p, q })
        .collect()
}

/// Runs the convergent recurrences over an arbitrary term stream.
fn convergent_iter<T, I>(terms: I) -> impl Iterator<Item = (T, T)>
where
    T: Clone + Zero + One + for<'a> std::ops::Mul<&'a T, Output = T> + std::ops::Add<Output = T>,
    I: IntoIterator<Item = T>,
{
    let mut p = (T::zero(), T::one()); // (p_{k-1}, p_k)
    let mut q = (T::one(), T::zero());
    terms.into_iter().map(move |a| {
        let p_next = a.clone() * &p.1 + p.0.clone();
        let q_next = a * &q.1 + q.0.clone();
        p = (p.1.clone(), p_next.clone());
        q = (q.1.clone(), q_next.clone());
        (p_next, q_next)
    })
}

/// Value of the fraction as `(q, p)` in lowest terms.
pub fn evaluate(cf: &NumericCF) -> (BigUint, BigUint) {
    let last = convergents(cf).pop().expect("nonempty by construction");
    (last.q, last.p)
}

pub fn reverse(cf: &NumericCF) -> NumericCF {
    NumericCF {
        terms: cf.terms.iter().rev().cloned().collect(),
    }
}

/// Outcome of the Serret test for `q/p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerretDecision {
    pub palindromic: bool,
    /// `s` with `p | q^2 + s`, read off the palindromic expansion as
    /// `(-1)^(N+1)`.
    pub sign: Option<i8>,
    /// The form whose term sequence is the palindrome.
    pub form: Option<Form>,
    pub expansion: Option<NumericCF>,
}

/// Decides whether `q/p` has a palindromic expansion, via divisibility of
/// `q^2 + 1` or `q^2 - 1` by `p`.
pub fn is_palindromic_serret(q: &BigUint, p: &BigUint) -> Result<SerretDecision, CfError> {
    check_pair(q, p)?;
    let q2 = q * q;
    let plus = ((&q2 + 1u8) % p).is_zero();
    let minus = ((&q2 - 1u8) % p).is_zero();
    if !plus && !minus {
        return Ok(SerretDecision {
            palindromic: false,
            sign: None,
            form: None,
            expansion: None,
        });
    }
    // Canonical first, then padded.
    for form in [Form::Canonical, Form::Padded] {
        let cf = expand_euclid(q, p, form)?;
        if cf.is_palindrome() {
            let n = cf.len() - 1;
            let sign: i8 = if n % 2 == 0 { -1 } else { 1 };
            debug_assert!(if sign > 0 { plus } else { minus });
            return Ok(SerretDecision {
                palindromic: true,
                sign: Some(sign),
                form: Some(form),
                expansion: Some(cf),
            });
        }
    }
    unreachable!("p divides q^2 +- 1 but neither expansion of {q}/{p} is a palindrome")
}

/// Best rational approximation of `x` through its continued-fraction
/// convergents: the first convergent within `tol` of `x` whose denominator
/// does not exceed `max_den`.
pub fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(BigInt, BigUint)> {
    let exact = BigRational::from_float(x)?;
    let max_den = BigInt::from(max_den);
    let mut terms = Vec::new();
    let mut rest = exact;
    loop {
        let a = rest.floor();
        terms.push(a.to_integer());
        let frac = &rest - &a;
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    for (num, den) in convergent_iter(terms) {
        // With general terms the seeds give (p, q) = (numerator, denominator).
        if den > max_den {
            return None;
        }
        let approx = BigRational::new(num.clone(), den.clone());
        let err = (approx.to_f64()? - x).abs();
        if err <= tol {
            let den = den.abs().to_biguint()?;
            return Some((num, den));
        }
    }
    None
}
