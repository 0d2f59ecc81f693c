//! Polynomial continued fractions
//!
//! ```text
//! Q/P = 1/(p_0 - 1/(p_1 - ... - 1/p_N))
//! ```
//!
//! produced by the Euclidean algorithm on `(Q, P)` with polynomial partial
//! quotients `p_k`.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polynomial::{PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PFracError {
    #[error("Q and P share the nonconstant factor {0}")]
    NotCoprime(Polynomial),
    #[error("need nonzero P, Q with deg Q < deg P")]
    DegreeError,
    #[error("{0} is not monic")]
    NotMonic(&'static str),
    #[error("a P-fraction needs at least one partial quotient, none zero")]
    Malformed,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPFraction", into = "RawPFraction")]
pub struct PFraction {
    partial_quotients: Vec<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct RawPFraction {
    partial_quotients: Vec<Polynomial>,
}

impl TryFrom<RawPFraction> for PFraction {
    type Error = PFracError;
    fn try_from(raw: RawPFraction) -> Result<Self, PFracError> {
        PFraction::new(raw.partial_quotients)
    }
}

impl From<PFraction> for RawPFraction {
    fn from(pf: PFraction) -> Self {
        RawPFraction {
            partial_quotients: pf.partial_quotients,
        }
    }
}

impl PFraction {
    pub fn new(partial_quotients: Vec<Polynomial>) -> Result<Self, PFracError> {
        if partial_quotients.is_empty() || partial_quotients.iter().any(Polynomial::is_zero) {
            return Err(PFracError::Malformed);
        }
        Ok(PFraction { partial_quotients })
    }

    pub fn partial_quotients(&self) -> &[Polynomial] {
        &self.partial_quotients
    }

    pub fn is_palindrome(&self) -> bool {
        let pq = &self.partial_quotients;
        pq.iter().eq(pq.iter().rev())
    }

    /// Product of the leading coefficients of the partial quotients, which
    /// is the leading coefficient of the reconstructed denominator.
    pub fn leading_product(&self) -> BigRational {
        self.partial_quotients
            .iter()
            .fold(BigRational::one(), |acc, p| acc * p.leading().unwrap())
    }
}

pub fn expand_pfraction(q: &Polynomial, p: &Polynomial) -> Result<PFraction, PFracError> {
    match (q.degree(), p.degree()) {
        (Some(dq), Some(dp)) if dq < dp => {}
        _ => return Err(PFracError::DegreeError),
    }
    let (mut num, mut den) = (p.clone(), q.clone());
    let mut out = Vec::new();
    loop {
        // num/den = p_k - (p_k den - num)/den
        let (quo, rem) = num.divmod(&den)?;
        out.push(quo);
        if rem.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, -&rem);
    }
    if !den.is_constant() {
        return Err(PFracError::NotCoprime(den.monic()));
    }
    Ok(PFraction {
        partial_quotients: out,
    })
}

/// Runs `P_{k+1} = p_k P_k - P_{k-1}` (and the same for `Q_k`) from
/// `P_{-1} = 0, P_0 = 1, Q_{-1} = -1, Q_0 = 0`, then scales the pair so
/// that `P` is monic.
pub fn pfraction_to_rational(pf: &PFraction) -> (Polynomial, Polynomial) {
    let (q, p) = pfraction_recurrence(pf);
    let inv = p.leading().unwrap().recip();
    (q.scale(&inv), p.scale(&inv))
}

/// `(Q_{N+1}, P_{N+1})` without normalization.
pub fn pfraction_recurrence(pf: &PFraction) -> (Polynomial, Polynomial) {
    let mut p = (Polynomial::zero(), Polynomial::one());
    let mut q = (-&Polynomial::one(), Polynomial::zero());
    for pk in &pf.partial_quotients {
        let pn = &(pk * &p.1) - &p.0;
        let qn = &(pk * &q.1) - &q.0;
        p.0 = std::mem::replace(&mut p.1, pn);
        q.0 = std::mem::replace(&mut q.1, qn);
    }
    (q.1, p.1)
}

/// Both sides of the polynomial-ring Serret test for monic `Q`, `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPalindrome {
    /// `P | Q^2 - 1`
    pub divisible: bool,
    /// `(Q^2 - 1) / P` when exact.
    pub cofactor: Option<Polynomial>,
    /// The partial quotients read the same in both directions.
    pub termwise: bool,
    /// Leading-coefficient product `c` of the expansion; the recurrence
    /// returns `(c Q, c P)`.
    pub scale: BigRational,
    pub expansion: PFraction,
}

impl PPalindrome {
    /// Divisibility and term-wise symmetry coincide. They can differ only
    /// when `scale^2 != 1`; the criterion that always holds is
    /// `P | Q^2 - 1/scale^2`.
    pub fn agrees(&self) -> bool {
        self.divisible == self.termwise
    }
}

pub fn is_palindromic_pfraction(q: &Polynomial, p: &Polynomial) -> Result<PPalindrome, PFracError> {
    if !p.is_monic() {
        return Err(PFracError::NotMonic("P"));
    }
    if !q.is_monic() {
        return Err(PFracError::NotMonic("Q"));
    }
    let pf = expand_pfraction(q, p)?;
    let (cof, rem) = (&(q * q) - &Polynomial::one()).divmod(p)?;
    let divisible = rem.is_zero();
    Ok(PPalindrome {
        divisible,
        cofactor: divisible.then_some(cof),
        termwise: pf.is_palindrome(),
        scale: pf.leading_product(),
        expansion: pf,
    })
}

/// `P | Q^2 - 1/c^2` with `c` the leading-coefficient product of the
/// expansion. Equivalent to term-wise palindromicity for every coprime pair
/// with `P` monic.
pub fn scaled_serret_divisible(
    q: &Polynomial,
    p: &Polynomial,
    scale: &BigRational,
) -> Result<bool, PFracError> {
    let c2inv = (scale * scale).recip();
    let rem = (&(q * q) - &Polynomial::constant(c2inv)).rem(p)?;
    Ok(rem.is_zero())
}
