//! Dirichlet characters with exact cyclotomic values, conductors, and
//! generalized Bernoulli numbers.
//!
//! The unit group of `Z/NZ` is given a fixed generator set: for each odd
//! prime power the least positive primitive root, for `4` the class of `-1`,
//! for `2^a` with `a >= 3` the pair `(-1, 5)`, each lifted to `Z/NZ` by CRT
//! (congruent to 1 modulo the other prime-power factors). A character is the
//! vector of exponents `e_i` with `χ(g_i) = z_{ord(g_i)}^{e_i}`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numkernel::arith::{euler_phi, factorize, gcd, lcm, mod_inv, mod_pow, mult_order};
use crate::numkernel::{exp_series, rat, CyclotomicNumber, Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DirichletError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {modulus} has {expected} generators, got {got} exponents")]
    ExponentCount {
        modulus: u64,
        expected: usize,
        got: usize,
    },
    #[error("exponent {exponent} out of range for a generator of order {order}")]
    ExponentRange { exponent: u64, order: u64 },
    #[error("declared order {declared} does not match computed order {actual}")]
    OrderMismatch { declared: u64, actual: u64 },
    #[error("character modulo {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("character index {index} out of range: modulus {modulus} has {count} characters")]
    IndexOutOfRange {
        index: usize,
        modulus: u64,
        count: usize,
    },
}

impl DirichletError {
    pub fn code(&self) -> &'static str {
        match self {
            DirichletError::NotPrimitive { .. } => "NOT_PRIMITIVE",
            DirichletError::IndexOutOfRange { .. } => "INDEX",
            _ => "CHARACTER",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Generator {
    residue: u64,
    order: u64,
}

fn crt_lift(g: u64, q: u64, modulus: u64) -> u64 {
    let rest = modulus / q;
    if rest == 1 {
        return g % q;
    }
    // x = 1 + rest * t with x ≡ g (mod q)
    let inv = mod_inv((rest % q) as i128, q as i128).expect("coprime prime-power parts") as u64;
    let t = ((g + q - 1) % q) as u128 * inv as u128 % q as u128;
    ((1 + rest as u128 * t) % modulus as u128) as u64
}

fn unit_generators(modulus: u64) -> Vec<Generator> {
    let mut gens = Vec::new();
    for (p, e) in factorize(modulus) {
        let q = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => gens.push(Generator {
                    residue: crt_lift(3, 4, modulus),
                    order: 2,
                }),
                _ => {
                    gens.push(Generator {
                        residue: crt_lift(q - 1, q, modulus),
                        order: 2,
                    });
                    gens.push(Generator {
                        residue: crt_lift(5, q, modulus),
                        order: q / 4,
                    });
                }
            }
        } else {
            let phi = euler_phi(q);
            let g = (2..q)
                .find(|&g| gcd(g, q) == 1 && mult_order(g, q) == phi)
                .expect("odd prime powers are cyclic");
            gens.push(Generator {
                residue: crt_lift(g, q, modulus),
                order: phi,
            });
        }
    }
    gens
}

/// A Dirichlet character modulo `N`.
///
/// Values are roots of unity of order dividing [`order`](Self::order), stored
/// as a residue table so evaluation is a lookup.
#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    order: u64,
    gens: Arc<Vec<Generator>>,
    // table[n mod N] = t with χ(n) = z_order^t, None for non-units
    table: Arc<Vec<Option<u64>>>,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, exponents: Vec<u64>) -> Result<Self, DirichletError> {
        if modulus == 0 {
            return Err(DirichletError::ZeroModulus);
        }
        Self::with_generators(modulus, Arc::new(unit_generators(modulus)), exponents)
    }

    fn with_generators(
        modulus: u64,
        gens: Arc<Vec<Generator>>,
        exponents: Vec<u64>,
    ) -> Result<Self, DirichletError> {
        if exponents.len() != gens.len() {
            return Err(DirichletError::ExponentCount {
                modulus,
                expected: gens.len(),
                got: exponents.len(),
            });
        }
        for (g, &e) in gens.iter().zip(&exponents) {
            if e >= g.order {
                return Err(DirichletError::ExponentRange {
                    exponent: e,
                    order: g.order,
                });
            }
        }
        let exponent_of_group = gens.iter().fold(1, |a, g| lcm(a, g.order));
        let order = gens
            .iter()
            .zip(&exponents)
            .fold(1, |a, (g, &e)| lcm(a, g.order / gcd(e, g.order)));
        let step = exponent_of_group / order;

        let mut table = vec![None; modulus as usize];
        let mut digits = vec![0u64; gens.len()];
        loop {
            let mut residue = 1 % modulus;
            let mut s = 0u64;
            for ((g, &d), &e) in gens.iter().zip(&digits).zip(&exponents) {
                residue = (residue as u128 * mod_pow(g.residue, d, modulus) as u128 % modulus as u128) as u64;
                s = (s + e * d % g.order * (exponent_of_group / g.order)) % exponent_of_group;
            }
            debug_assert_eq!(s % step, 0);
            table[residue as usize] = Some(s / step);
            // odometer over generator exponents
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < gens[i].order {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        Ok(DirichletCharacter {
            modulus,
            exponents,
            order,
            gens,
            table: Arc::new(table),
        })
    }

    pub fn trivial(modulus: u64) -> Self {
        let gens = unit_generators(modulus);
        let n = gens.len();
        Self::with_generators(modulus, Arc::new(gens), vec![0; n]).expect("trivial character")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Orders of the canonical unit-group generators, in exponent order.
    pub fn generator_orders(&self) -> Vec<u64> {
        self.gens.iter().map(|g| g.order).collect()
    }

    /// Canonical generators as residues modulo the modulus.
    pub fn generator_residues(&self) -> Vec<u64> {
        self.gens.iter().map(|g| g.residue).collect()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// True when all values are real (order at most 2).
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// `t` with `χ(n) = z_order^t`, or `None` when `gcd(n, N) > 1`.
    pub fn exponent_at(&self, n: i64) -> Option<u64> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.table[r]
    }

    pub fn eval(&self, n: i64) -> CyclotomicNumber {
        match self.exponent_at(n) {
            None => CyclotomicNumber::zero(),
            Some(0) => CyclotomicNumber::one(),
            Some(t) => CyclotomicNumber::root_of_unity(self.order, t),
        }
    }

    /// `χ(-1)` as `+1` or `-1`.
    pub fn sign(&self) -> i64 {
        match self.exponent_at(-1) {
            Some(0) => 1,
            _ => -1,
        }
    }

    fn from_values<F>(modulus: u64, value_exponent: F) -> Self
    where
        F: Fn(u64) -> (u64, u64),
    {
        let gens = Arc::new(unit_generators(modulus));
        let exponents = gens
            .iter()
            .map(|g| {
                // χ(g) = z_m^t must have order dividing ord(g)
                let (t, m) = value_exponent(g.residue);
                let num = t as u128 * g.order as u128;
                debug_assert_eq!(num % m as u128, 0);
                ((num / m as u128) % g.order as u128) as u64
            })
            .collect();
        Self::with_generators(modulus, gens, exponents).expect("consistent generator values")
    }

    /// The character modulo `new_modulus` (a multiple of the modulus) induced by this one.
    pub fn lift(&self, new_modulus: u64) -> Self {
        assert!(
            new_modulus % self.modulus == 0,
            "{} is not a multiple of {}",
            new_modulus,
            self.modulus
        );
        if new_modulus == self.modulus {
            return self.clone();
        }
        Self::from_values(new_modulus, |g| {
            (self.exponent_at(g as i64).expect("unit"), self.order)
        })
    }

    /// Pointwise product, computed modulo the lcm of the two moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.modulus, other.modulus);
        let (a, b) = (self.lift(m), other.lift(m));
        let exps = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(a.gens.iter())
            .map(|((x, y), g)| (x + y) % g.order)
            .collect();
        Self::with_generators(m, Arc::clone(&a.gens), exps).expect("product")
    }

    pub fn inverse(&self) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(self.gens.iter())
            .map(|(&e, g)| (g.order - e) % g.order)
            .collect();
        Self::with_generators(self.modulus, Arc::clone(&self.gens), exps).expect("inverse")
    }

    pub fn pow(&self, k: u64) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(self.gens.iter())
            .map(|(&e, g)| (e as u128 * k as u128 % g.order as u128) as u64)
            .collect();
        Self::with_generators(self.modulus, Arc::clone(&self.gens), exps).expect("power")
    }

    /// Smallest `d | N` such that χ is trivial on units congruent to 1 mod `d`.
    pub fn conductor(&self) -> u64 {
        let n = self.modulus;
        crate::numkernel::arith::divisors(n)
            .into_iter()
            .find(|&d| {
                (0..n / d).all(|k| {
                    let u = 1 + k * d;
                    matches!(self.exponent_at(u as i64), None | Some(0))
                })
            })
            .unwrap_or(n)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The conductor and the primitive character inducing this one.
    pub fn primitive(&self) -> (u64, Self) {
        let d = self.conductor();
        if d == self.modulus {
            return (d, self.clone());
        }
        let prim = Self::from_values(d, |h| {
            let mut u = h;
            while gcd(u, self.modulus) != 1 {
                u += d;
            }
            (self.exponent_at(u as i64).expect("unit"), self.order)
        });
        (d, prim)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DirichletCharacter(mod {}, exponents {:?}, order {})",
            self.modulus, self.exponents, self.order
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CharacterRepr {
    modulus: u64,
    exponents: Vec<u64>,
    order: u64,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CharacterRepr {
            modulus: self.modulus,
            exponents: self.exponents.clone(),
            order: self.order,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CharacterRepr::deserialize(d)?;
        let chi = DirichletCharacter::new(r.modulus, r.exponents).map_err(serde::de::Error::custom)?;
        if chi.order != r.order {
            return Err(serde::de::Error::custom(DirichletError::OrderMismatch {
                declared: r.order,
                actual: chi.order,
            }));
        }
        Ok(chi)
    }
}

/// All `φ(N)` characters modulo `N`, lexicographic in their exponent vectors.
pub fn characters_mod(modulus: u64) -> Result<Vec<DirichletCharacter>, DirichletError> {
    if modulus == 0 {
        return Err(DirichletError::ZeroModulus);
    }
    let gens = Arc::new(unit_generators(modulus));
    let mut out = Vec::new();
    let mut digits = vec![0u64; gens.len()];
    loop {
        out.push(DirichletCharacter::with_generators(
            modulus,
            Arc::clone(&gens),
            digits.clone(),
        )?);
        // last exponent varies fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < gens[i].order {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Position `index` in [`characters_mod`].
pub fn character_by_index(modulus: u64, index: usize) -> Result<DirichletCharacter, DirichletError> {
    let all = characters_mod(modulus)?;
    let count = all.len();
    all.into_iter()
        .nth(index)
        .ok_or(DirichletError::IndexOutOfRange {
            index,
            modulus,
            count,
        })
}

/// Primitive characters of every conductor `1..=max_conductor`.
pub fn primitive_characters_up_to(max_conductor: u64) -> Vec<DirichletCharacter> {
    (1..=max_conductor)
        .flat_map(|n| characters_mod(n).expect("positive modulus"))
        .filter(DirichletCharacter::is_primitive)
        .collect()
}

pub fn char_eval(chi: &DirichletCharacter, n: i64) -> CyclotomicNumber {
    chi.eval(n)
}

pub fn char_primitive(chi: &DirichletCharacter) -> (u64, DirichletCharacter) {
    chi.primitive()
}

/// `B_{k,ψ}` together with its index and character.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernoulliValue {
    pub k: u32,
    pub character: DirichletCharacter,
    pub value: CyclotomicNumber,
}

/// Classical Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // sum_{j<=m} C(m+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += bj * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `B_k(x) = sum_j C(k, j) B_j x^(k-j)`.
pub fn bernoulli_polynomial(k: usize, x: &Rational) -> Rational {
    let b = bernoulli_numbers(k);
    let mut binom = BigInt::one();
    let mut acc = Rational::zero();
    for (j, bj) in b.iter().enumerate() {
        acc += bj * Rational::from_integer(binom.clone()) * num_traits::pow(x.clone(), k - j);
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    acc
}

fn require_primitive(psi: &DirichletCharacter) -> Result<(), DirichletError> {
    let conductor = psi.conductor();
    if conductor != psi.modulus() {
        return Err(DirichletError::NotPrimitive {
            modulus: psi.modulus(),
            conductor,
        });
    }
    Ok(())
}

/// Generalized Bernoulli number via Bernoulli polynomials:
/// `B_{k,ψ} = R^(k-1) sum_{a=1}^{R} ψ(a) B_k(a/R)`.
pub fn gen_bernoulli(k: u32, psi: &DirichletCharacter) -> Result<BernoulliValue, DirichletError> {
    require_primitive(psi)?;
    let r = psi.modulus();
    let mut by_root = vec![Rational::zero(); psi.order() as usize];
    for a in 1..=r {
        if let Some(t) = psi.exponent_at(a as i64) {
            by_root[t as usize] += bernoulli_polynomial(k as usize, &Rational::new(a.into(), r.into()));
        }
    }
    let scale = num_traits::pow(rat(r as i64), k as usize) / rat(r as i64);
    let value = CyclotomicNumber::normalize(psi.order(), by_root)
        .scale(&scale)
        .simplified();
    Ok(BernoulliValue {
        k,
        character: psi.clone(),
        value,
    })
}

/// Generalized Bernoulli number read off the generating function
/// `sum_a ψ(a) x e^(ax) / (e^(Rx) - 1)` expanded as a truncated series.
pub fn gen_bernoulli_oracle(k: u32, psi: &DirichletCharacter) -> Result<BernoulliValue, DirichletError> {
    require_primitive(psi)?;
    let r = psi.modulus();
    let prec = k as usize + 1;

    let mut numerator = TruncatedSeries::<CyclotomicNumber>::zero(prec);
    for a in 1..=r {
        let va = psi.eval(a as i64);
        if va.is_zero() {
            continue;
        }
        let e = exp_series(&rat(a as i64), prec).expect("prec >= 1");
        let term = TruncatedSeries::new(e.coeffs().iter().map(|c| va.scale(c)).collect())
            .expect("prec >= 1");
        numerator = numerator.add(&term);
    }
    // (e^(Rx) - 1) / x
    let e_r = exp_series(&rat(r as i64), prec + 1).expect("prec >= 1");
    let denominator = TruncatedSeries::new(
        e_r.coeffs()[1..]
            .iter()
            .map(|c| CyclotomicNumber::from_rational(c.clone()))
            .collect(),
    )
    .expect("prec >= 1");
    let quotient = numerator.mul(&denominator.inverse().expect("constant term R"));

    let factorial: BigInt = (1..=k as u64).map(BigInt::from).product();
    let value = quotient.coeffs()[k as usize]
        .scale(&Rational::from_integer(factorial))
        .simplified();
    Ok(BernoulliValue {
        k,
        character: psi.clone(),
        value,
    })
}
