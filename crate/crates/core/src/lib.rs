//! Palindromic continued fractions over the integers, J-fractions and
//! P-fractions over the rationals, Jacobi matrices, and perfect state
//! transfer on mirror-symmetric chains.

pub mod jacobi;
pub mod jfraction;
pub mod numeric_cf;
pub mod pfraction;
pub mod polynomial;
pub mod pst;

pub use jacobi::{JacobiError, JacobiMatrix, Spectrum};
pub use jfraction::{JFracError, JFraction, RecurrencePair};
pub use numeric_cf::{CfError, ConvergentPair, Form, NumericCF};
pub use pfraction::{PFracError, PFraction};
pub use polynomial::{PolyError, Polynomial};
pub use pst::{AmplitudeTrace, PstCertificate, PstError};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
