//! Jacobi continued fractions
//!
//! ```text
//! Q/P = 1/(x - a_0 - b_0^2/(x - a_1 - ... - b_{N-1}^2/(x - a_N)))
//! ```
//!
//! together with the polynomial recurrences
//! `P_{k+1} = (x - a_k) P_k - b_{k-1}^2 P_{k-1}` (same for `Q_k`) seeded by
//! `P_{-1} = 0, P_0 = 1, Q_{-1} = -1, Q_0 = 0` and `b_{-1}^2 = 1`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polynomial::{chebyshev_t, chebyshev_u, rational_string_vec, PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JFracError {
    #[error("the remainder (x - a)Q - P is nonzero but has degree below deg P - 2")]
    RemainderDegreeDrop,
    #[error("P = (x - a)Q: the pair is not coprime")]
    ZeroRemainder,
    #[error("step {step} yields b^2 = {b2}; zeros of P and Q do not interlace")]
    NotInterlacing { step: usize, b2: String },
    #[error("expected deg P = deg Q + 1, got deg P = {p:?}, deg Q = {q:?}")]
    DegreeMismatch { p: Option<usize>, q: Option<usize> },
    #[error("{0} is not monic")]
    NotMonic(&'static str),
    #[error("b2 must have exactly one entry fewer than a, all strictly positive")]
    Malformed,
    #[error("palindrome test and divisibility test disagree")]
    CriterionMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Diagonal entries `a_0..a_N` and squared couplings `b_0^2..b_{N-1}^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawJFraction", into = "RawJFraction")]
pub struct JFraction {
    a: Vec<BigRational>,
    b2: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct RawJFraction {
    #[serde(with = "rational_string_vec")]
    a: Vec<BigRational>,
    #[serde(with = "rational_string_vec")]
    b2: Vec<BigRational>,
}

impl TryFrom<RawJFraction> for JFraction {
    type Error = JFracError;
    fn try_from(raw: RawJFraction) -> Result<Self, JFracError> {
        JFraction::new(raw.a, raw.b2)
    }
}

impl From<JFraction> for RawJFraction {
    fn from(jf: JFraction) -> Self {
        RawJFraction { a: jf.a, b2: jf.b2 }
    }
}

impl JFraction {
    pub fn new(a: Vec<BigRational>, b2: Vec<BigRational>) -> Result<Self, JFracError> {
        if a.is_empty() || b2.len() + 1 != a.len() || b2.iter().any(|b| !b.is_positive()) {
            return Err(JFracError::Malformed);
        }
        Ok(JFraction { a, b2 })
    }

    pub fn a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn b2(&self) -> &[BigRational] {
        &self.b2
    }

    /// Index of the last level; the fraction has `N + 1` diagonal entries.
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_palindrome(&self) -> bool {
        self.a.iter().eq(self.a.iter().rev()) && self.b2.iter().eq(self.b2.iter().rev())
    }

    pub fn reversed(&self) -> JFraction {
        JFraction {
            a: self.a.iter().rev().cloned().collect(),
            b2: self.b2.iter().rev().cloned().collect(),
        }
    }

    /// `b_0^2 b_1^2 ... b_{N-1}^2`
    pub fn beta(&self) -> BigRational {
        self.b2.iter().fold(BigRational::one(), |acc, b| acc * b)
    }
}

/// The sequences `P_{-1}..P_{N+1}` and `Q_{-1}..Q_{N+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrencePair {
    p: Vec<Polynomial>,
    q: Vec<Polynomial>,
}

impl RecurrencePair {
    /// `P_k` for `k >= -1`.
    pub fn p(&self, k: isize) -> &Polynomial {
        &self.p[(k + 1) as usize]
    }

    /// `Q_k` for `k >= -1`.
    pub fn q(&self, k: isize) -> &Polynomial {
        &self.q[(k + 1) as usize]
    }

    /// Largest valid index, `N + 1`.
    pub fn last_index(&self) -> isize {
        self.p.len() as isize - 2
    }
}

/// One Euclidean level: `P = (x - a) Q - b2 R` with `R` monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JStep {
    pub a: BigRational,
    pub b2: BigRational,
    pub r: Polynomial,
}

/// Splits `P = (x - a) Q - b2 R`. `a` is the subleading coefficient of `Q`
/// minus that of `P`; `b2` comes back with whatever sign the data gives.
pub fn jstep(p: &Polynomial, q: &Polynomial) -> Result<JStep, JFracError> {
    check_pair(p, q)?;
    let n = p.degree().unwrap();
    if n < 2 {
        return Err(JFracError::DegreeMismatch {
            p: p.degree(),
            q: q.degree(),
        });
    }
    let a = q.coeff(n - 2) - p.coeff(n - 1);
    let rem = &(&Polynomial::linear_root(a.clone()) * q) - p;
    match rem.degree() {
        None => Err(JFracError::ZeroRemainder),
        Some(d) if d < n - 2 => Err(JFracError::RemainderDegreeDrop),
        Some(_) => {
            let b2 = rem.leading().unwrap().clone();
            Ok(JStep {
                a,
                r: rem.monic(),
                b2,
            })
        }
    }
}

fn check_pair(p: &Polynomial, q: &Polynomial) -> Result<(), JFracError> {
    match (p.degree(), q.degree()) {
        (Some(dp), Some(dq)) if dp == dq + 1 => {}
        (dp, dq) => return Err(JFracError::DegreeMismatch { p: dp, q: dq }),
    }
    if !p.is_monic() {
        return Err(JFracError::NotMonic("P"));
    }
    if !q.is_monic() {
        return Err(JFracError::NotMonic("Q"));
    }
    Ok(())
}

/// Expands the proper rational function `Q/P` into a J-fraction.
pub fn expand_jfraction(q: &Polynomial, p: &Polynomial) -> Result<JFraction, JFracError> {
    check_pair(p, q)?;
    let (mut p, mut q) = (p.clone(), q.clone());
    let mut a = Vec::new();
    let mut b2 = Vec::new();
    while p.degree().unwrap() >= 2 {
        let step = jstep(&p, &q).map_err(|e| match e {
            JFracError::ZeroRemainder => JFracError::NotInterlacing {
                step: a.len(),
                b2: "0".into(),
            },
            JFracError::RemainderDegreeDrop => JFracError::NotInterlacing {
                step: a.len(),
                b2: "degree drop".into(),
            },
            other => other,
        })?;
        if !step.b2.is_positive() {
            return Err(JFracError::NotInterlacing {
                step: a.len(),
                b2: step.b2.to_string(),
            });
        }
        a.push(step.a);
        b2.push(step.b2);
        p = std::mem::replace(&mut q, step.r);
    }
    // p = x - a_N, q = 1
    a.push(-p.coeff(0));
    Ok(JFraction { a, b2 })
}

/// Runs both recurrences and returns `(Q_{N+1}, P_{N+1}, sequences)`.
pub fn jfraction_to_rational(jf: &JFraction) -> (Polynomial, Polynomial, RecurrencePair) {
    let mut p = vec![Polynomial::zero(), Polynomial::one()];
    let mut q = vec![-&Polynomial::one(), Polynomial::zero()];
    for (k, ak) in jf.a.iter().enumerate() {
        let lin = Polynomial::linear_root(ak.clone());
        let bprev = if k == 0 {
            BigRational::one()
        } else {
            jf.b2[k - 1].clone()
        };
        let next = |s: &[Polynomial]| &(&s[k + 1] * &lin) - &s[k].scale(&bprev);
        let pn = next(&p);
        let qn = next(&q);
        p.push(pn);
        q.push(qn);
    }
    let rec = RecurrencePair { p, q };
    let top = rec.last_index();
    (rec.q(top).clone(), rec.p(top).clone(), rec)
}

/// Outcome of the palindrome test on a J-fraction expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPalindrome {
    pub palindromic: bool,
    /// `b_0^2 ... b_{N-1}^2`
    pub beta: BigRational,
    /// `(Q^2 - beta) / P` when the division is exact.
    pub cofactor: Option<Polynomial>,
    pub expansion: JFraction,
}

/// Decides palindromicity of the J-fraction of `Q/P` by exact divisibility
/// of `Q^2 - beta` by `P`, cross-checked against the coefficient sequences.
pub fn is_palindromic_jfraction(q: &Polynomial, p: &Polynomial) -> Result<JPalindrome, JFracError> {
    let jf = expand_jfraction(q, p)?;
    let beta = jf.beta();
    let (cof, rem) = (&(q * q) - &Polynomial::constant(beta.clone())).divmod(p)?;
    let divisible = rem.is_zero();
    if divisible != jf.is_palindrome() {
        return Err(JFracError::CriterionMismatch);
    }
    Ok(JPalindrome {
        palindromic: divisible,
        beta,
        cofactor: divisible.then_some(cof),
        expansion: jf,
    })
}

/// Closed form of the expansion of `T_n / ((x^2 - 1) U_{n-1})`: all `a_k`
/// zero, `b^2 = [1/2, 1/4, ..., 1/4, 1/2]` for `n >= 2`. For `n = 1` the
/// function is `x / (x^2 - 1)` whose single level has `b^2 = 1`.
///
/// # Panics
/// If `n == 0`.
pub fn chebyshev_jfraction(n: usize) -> JFraction {
    assert!(n >= 1, "Chebyshev J-fraction needs n >= 1");
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let b2 = match n {
        1 => vec![BigRational::one()],
        _ => (0..n)
            .map(|k| {
                if k == 0 || k == n - 1 {
                    half.clone()
                } else {
                    quarter.clone()
                }
            })
            .collect(),
    };
    JFraction {
        a: vec![BigRational::zero(); n + 1],
        b2,
    }
}

/// Monic `(T_n, (x^2 - 1) U_{n-1})` as a `(Q, P)` pair.
pub fn chebyshev_pair(n: usize) -> (Polynomial, Polynomial) {
    assert!(n >= 1);
    let t = chebyshev_t(n);
    let w = &Polynomial::from_ints(&[-1, 0, 1]) * &chebyshev_u(n - 1);
    (t.monic(), w.monic())
}

/// Sturm chain `p, p', -rem(p, p'), ...`.
fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero");
        chain.push(-&r);
    }
    chain.pop();
    chain
}

#[derive(Clone, Copy)]
enum Point<'a> {
    NegInf,
    At(&'a BigRational),
    PosInf,
}

fn sign_changes(chain: &[Polynomial], at: Point<'_>) -> usize {
    let signs = chain.iter().map(|s| match at {
        Point::NegInf => s.sign_at_infinity(false),
        Point::PosInf => s.sign_at_infinity(true),
        Point::At(x) => {
            let v = s.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }
    });
    let mut prev = 0;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

/// Distinct real roots in `(lo, hi]`.
fn count_roots(chain: &[Polynomial], lo: Point<'_>, hi: Point<'_>) -> usize {
    sign_changes(chain, lo) - sign_changes(chain, hi)
}

/// `1 + max |c_k / c_n|` bounds every root.
fn cauchy_bound(p: &Polynomial) -> BigRational {
    let lc = p.leading().unwrap();
    let n = p.degree().unwrap();
    let m = (0..n)
        .map(|k| (p.coeff(k) / lc).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + BigRational::one()
}

/// Real-rootedness with simple roots.
fn simple_real_rooted(chain: &[Polynomial], p: &Polynomial) -> bool {
    let deg = p.degree().unwrap();
    p.gcd(&p.derivative()).is_constant() && count_roots(chain, Point::NegInf, Point::PosInf) == deg
}

/// Independent check, by Sturm root counting over exact rationals, that `P`
/// and `Q` are real-rooted with simple roots and that exactly one root of `P`
/// lies in each gap cut out by the roots of `Q` (including the two outer
/// half-lines).
pub fn interlacing_check(p: &Polynomial, q: &Polynomial) -> bool {
    if check_pair(p, q).is_err() {
        return false;
    }
    let sp = sturm_chain(p);
    if !simple_real_rooted(&sp, p) {
        return false;
    }
    let dq = q.degree().unwrap();
    if dq == 0 {
        return true;
    }
    let sq = sturm_chain(q);
    if !simple_real_rooted(&sq, q) || !p.gcd(q).is_constant() {
        return false;
    }

    // Isolate each root of Q in an interval (lo, hi] free of roots of P.
    let bound = cauchy_bound(q);
    let two = BigRational::from_integer(2.into());
    let mut pending = vec![(-bound.clone(), bound)];
    let mut isolated = Vec::with_capacity(dq);
    while let Some((lo, hi)) = pending.pop() {
        match count_roots(&sq, Point::At(&lo), Point::At(&hi)) {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                pending.push((lo, mid.clone()));
                pending.push((mid, hi));
            }
        }
    }
    isolated.sort();
    for (lo, hi) in isolated.iter_mut() {
        while count_roots(&sp, Point::At(lo), Point::At(hi)) > 0 {
            let mid = (&*lo + &*hi) / &two;
            if count_roots(&sq, Point::At(lo), Point::At(&mid)) == 1 {
                *hi = mid;
            } else {
                *lo = mid;
            }
        }
    }

    let first = count_roots(&sp, Point::NegInf, Point::At(&isolated[0].0));
    let last = count_roots(&sp, Point::At(&isolated[dq - 1].1), Point::PosInf);
    first == 1
        && last == 1
        && isolated
            .windows(2)
            .all(|w| count_roots(&sp, Point::At(&w[0].1), Point::At(&w[1].0)) == 1)
}
