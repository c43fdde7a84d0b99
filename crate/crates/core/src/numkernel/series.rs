//! Truncated univariate power series over an exact coefficient ring.
//!
//! A series of precision `n` knows the coefficients of `x^0 .. x^(n-1)` and
//! nothing beyond. Binary operations produce the minimum precision of their
//! inputs; nothing is ever zero-extended.
//!
//! Coefficient domains are fixed by the type parameter, so multiplying a
//! rational series by a cyclotomic one is rejected at compile time:
//!
//! ```compile_fail
//! use eiscurve_core::numkernel::{CyclotomicNumber, Rational, TruncatedSeries, series_mul};
//! let f: TruncatedSeries<Rational> = TruncatedSeries::one(3);
//! let g: TruncatedSeries<CyclotomicNumber> = TruncatedSeries::one(3);
//! let _ = series_mul(&f, &g);
//! ```

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::cyclotomic::CyclotomicNumber;
use super::rational::Rational;

/// Exact field operations needed by [`TruncatedSeries`].
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Coefficient for CyclotomicNumber {
    fn zero() -> Self {
        CyclotomicNumber::zero()
    }
    fn one() -> Self {
        CyclotomicNumber::one()
    }
    fn is_zero(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber::scale(self, r)
    }
    fn inverse(&self) -> Option<Self> {
        CyclotomicNumber::inverse(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series precision must be at least 1, got {0}")]
    Precision(usize),
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Series whose precision is `coeffs.len()`.
    pub fn new(coeffs: Vec<C>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Precision(0));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn zero(prec: usize) -> Self {
        assert!(prec >= 1);
        TruncatedSeries {
            coeffs: vec![C::zero(); prec],
        }
    }

    pub fn one(prec: usize) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = C::one();
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    pub fn truncated(&self, prec: usize) -> Self {
        assert!(prec >= 1 && prec <= self.prec());
        TruncatedSeries {
            coeffs: self.coeffs[..prec].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        TruncatedSeries {
            coeffs: (0..n).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        TruncatedSeries {
            coeffs: (0..n).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        series_mul(self, other)
    }

    /// Multiplicative inverse to the same precision; needs an invertible
    /// constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let inv0 = self.coeffs[0].inverse().ok_or(SeriesError::NotInvertible)?;
        let n = self.prec();
        let mut out: Vec<C> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut s = C::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&out[k - j]));
                }
            }
            out.push(C::zero().sub(&s).mul(&inv0));
        }
        Ok(TruncatedSeries { coeffs: out })
    }
}

/// Cauchy product truncated to the smaller precision.
pub fn series_mul<C: Coefficient>(f: &TruncatedSeries<C>, g: &TruncatedSeries<C>) -> TruncatedSeries<C> {
    let n = f.prec().min(g.prec());
    let mut out = vec![C::zero(); n];
    for (i, a) in f.coeffs[..n].iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs[..n - i].iter().enumerate() {
            if !b.is_zero() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
    }
    TruncatedSeries { coeffs: out }
}

/// `exp(c x)` to precision `prec`: coefficients `c^n / n!`.
pub fn exp_series(c: &Rational, prec: usize) -> Result<TruncatedSeries<Rational>, SeriesError> {
    if prec < 1 {
        return Err(SeriesError::Precision(prec));
    }
    let mut coeffs = Vec::with_capacity(prec);
    let mut term = <Rational as One>::one();
    for n in 0..prec {
        if n > 0 {
            term = term * c / Rational::from_integer(BigInt::from(n));
        }
        coeffs.push(term.clone());
    }
    Ok(TruncatedSeries { coeffs })
}
