//! Elements of cyclotomic fields in the power basis.
//!
//! A [`CyclotomicNumber`] of order `m` is a polynomial in a primitive `m`-th
//! root of unity `z`, reduced modulo the `m`-th cyclotomic polynomial, so it
//! always carries exactly `φ(m)` rational coefficients. Values of different
//! orders are combined by embedding both into the field of order
//! `lcm(m, m')` via `z_m = z_l^(l/m)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::arith::{divisors, euler_phi, lcm};
use super::rational::{rat, rational_to_string, serde_string_vec, Rational};

type PolyCache = RwLock<HashMap<u64, Arc<Vec<i64>>>>;

fn poly_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer coefficients (lowest degree first) of the `m`-th cyclotomic
/// polynomial, obtained by dividing `x^m - 1` by every `Φ_d` with `d | m`,
/// `d < m`. Results are memoized; concurrent fills compute the same value.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = poly_cache().read().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    let poly = Arc::new(num);
    poly_cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("order {order} needs {expected} coefficients, got {got}")]
    CoefficientCount {
        order: u64,
        expected: usize,
        got: usize,
    },
}

#[derive(Clone)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    /// Canonical element from a raw polynomial in `z_order` of any degree.
    pub fn normalize(order: u64, raw: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        if order == 1 {
            let s = raw.into_iter().fold(Rational::zero(), |a, c| a + c);
            return CyclotomicNumber {
                order,
                coeffs: vec![s],
            };
        }
        let m = order as usize;
        let mut folded = vec![Rational::zero(); m];
        for (i, c) in raw.into_iter().enumerate() {
            if !c.is_zero() {
                folded[i % m] += c;
            }
        }
        let phi_poly = cyclotomic_polynomial(order);
        let deg = phi_poly.len() - 1;
        for i in (deg..m).rev() {
            if folded[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut folded[i]);
            for (j, &pj) in phi_poly[..deg].iter().enumerate() {
                if pj != 0 {
                    folded[i - deg + j] -= &c * rat(pj);
                }
            }
        }
        folded.truncate(deg);
        CyclotomicNumber {
            order,
            coeffs: folded,
        }
    }

    /// Builds a value from already-reduced power-basis coefficients.
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Result<Self, CyclotomicError> {
        if order == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let expected = euler_phi(order) as usize;
        if coeffs.len() != expected {
            return Err(CyclotomicError::CoefficientCount {
                order,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(CyclotomicNumber { order, coeffs })
    }

    pub fn from_rational(r: Rational) -> Self {
        CyclotomicNumber {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `z_order^k`.
    pub fn root_of_unity(order: u64, k: u64) -> Self {
        let mut raw = vec![Rational::zero(); order as usize];
        raw[(k % order) as usize] = Rational::one();
        Self::normalize(order, raw)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Re-expresses a rational element with order 1; other values are unchanged.
    pub fn simplified(self) -> Self {
        match self.as_rational() {
            Some(r) if self.order != 1 => Self::from_rational(r),
            _ => self,
        }
    }

    /// The same element written over `z_new`, where `order | new_order`.
    pub fn embed(&self, new_order: u64) -> Self {
        assert!(
            new_order % self.order == 0,
            "cannot embed order {} into order {}",
            self.order,
            new_order
        );
        if new_order == self.order {
            return self.clone();
        }
        let step = (new_order / self.order) as usize;
        let mut raw = vec![Rational::zero(); new_order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Self::normalize(new_order, raw)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = lcm(self.order, other.order);
        (self.embed(l), other.embed(l))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse, by solving `self * y = 1` as a linear system
    /// over Q in the power basis.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        let n = self.coeffs.len();
        // column i holds self * z^i
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n + 1]; n];
        for i in 0..n {
            let col = self * &Self::root_of_unity(self.order, i as u64);
            for (r, c) in col.coeffs.into_iter().enumerate() {
                rows[r][i] = c;
            }
        }
        rows[0][n] = Rational::one();
        for col in 0..n {
            let piv = (col..n).find(|&r| !rows[r][col].is_zero())?;
            rows.swap(col, piv);
            let inv = rows[col][col].recip();
            for x in rows[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for k in col..=n {
                        let d = &f * &rows[col][k];
                        rows[r][k] -= d;
                    }
                }
            }
        }
        Some(CyclotomicNumber {
            order: self.order,
            coeffs: rows.into_iter().map(|r| r[n].clone()).collect(),
        })
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.aligned(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc({})", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Rational values print as plain rationals; others as `c0 + c1*z{m} + c2*z{m}^2 ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", rational_to_string(&r));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = rational_to_string(c);
            match i {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*z{}", self.order)?,
                _ => write!(f, "{cs}*z{}^{i}", self.order)?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a CyclotomicNumber> for &'a CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
                let f: fn(&CyclotomicNumber, &CyclotomicNumber) -> CyclotomicNumber = $body;
                if self.order == rhs.order {
                    f(self, rhs)
                } else {
                    let (a, b) = self.aligned(rhs);
                    f(&a, &b)
                }
            }
        }
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| CyclotomicNumber {
    order: a.order,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
});

binop!(Sub, sub, |a, b| CyclotomicNumber {
    order: a.order,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
});

binop!(Mul, mul, |a, b| {
    if a.order == 1 {
        return CyclotomicNumber {
            order: 1,
            coeffs: vec![&a.coeffs[0] * &b.coeffs[0]],
        };
    }
    let n = a.coeffs.len();
    let mut raw = vec![Rational::zero(); 2 * n - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                raw[i + j] += x * y;
            }
        }
    }
    CyclotomicNumber::normalize(a.order, raw)
});

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CyclotomicRepr {
    order: u64,
    #[serde(with = "serde_string_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr {
            order: self.order,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CyclotomicRepr::deserialize(d)?;
        CyclotomicNumber::from_coeffs(r.order, r.coeffs).map_err(serde::de::Error::custom)
    }
}
