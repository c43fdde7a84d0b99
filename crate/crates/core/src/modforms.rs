//! Truncated q-expansions of Eisenstein series, their p-stabilizations, and
//! Hecke operators acting coefficientwise.
//!
//! Nothing here checks modularity. A [`QExpansion`] is a truncated series
//! plus bookkeeping (weight, the character pair, a level hint); the Hecke
//! operators act on the coefficients with parameters supplied explicitly in a
//! [`HeckeDescriptor`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dirichlet::{gen_bernoulli, DirichletCharacter, DirichletError};
use crate::numkernel::arith::{gcd, is_prime, lcm, primes_below};
use crate::numkernel::rational::serde_string;
use crate::numkernel::{rat, CyclotomicNumber, Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModformError {
    #[error("parity violation: chi(-1) psi(-1) = {product} but (-1)^{k} = {expected}")]
    Parity { k: u32, product: i64, expected: i64 },
    #[error("(k, chi, psi) = (2, 1, 1) is not covered here; use the E2 series")]
    UseE2,
    #[error("{which} is not primitive: modulus {modulus}, conductor {conductor}")]
    NotPrimitive {
        which: &'static str,
        modulus: u64,
        conductor: u64,
    },
    #[error("insufficient precision: need {needed}, have {available}")]
    Precision { needed: usize, available: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("T({l}) needs l prime to the level {level}")]
    NotCoprime { l: u64, level: u64 },
    #[error("degenerate input: no nonzero coefficient to pivot on")]
    Degenerate,
    #[error("duplicate descriptor {0}")]
    DuplicateDescriptor(String),
    #[error("constant term must vanish when chi has conductor {0} > 1")]
    ConstantTerm(u64),
    #[error("{op}: {source}")]
    At {
        op: String,
        #[source]
        source: Box<ModformError>,
    },
    #[error(transparent)]
    Dirichlet(#[from] DirichletError),
}

impl ModformError {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            ModformError::Parity { .. } => "PARITY",
            ModformError::UseE2 => "USE_E2",
            ModformError::NotPrimitive { .. } => "NOT_PRIMITIVE",
            ModformError::Precision { .. } => "PRECISION",
            ModformError::Argument(_) => "ARGUMENT",
            ModformError::NotCoprime { .. } => "NOT_COPRIME",
            ModformError::Degenerate => "DEGENERATE",
            ModformError::DuplicateDescriptor(_) => "DUPLICATE",
            ModformError::ConstantTerm(_) => "CONSTANT_TERM",
            ModformError::At { source, .. } => source.code(),
            ModformError::Dirichlet(_) => "CHARACTER",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    coeffs: TruncatedSeries<CyclotomicNumber>,
    weight: u32,
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    level_hint: u64,
}

impl QExpansion {
    pub fn new(
        coeffs: Vec<CyclotomicNumber>,
        weight: u32,
        chi: DirichletCharacter,
        psi: DirichletCharacter,
        level_hint: u64,
    ) -> Result<Self, ModformError> {
        if coeffs.len() < 2 {
            return Err(ModformError::Precision {
                needed: 2,
                available: coeffs.len(),
            });
        }
        if level_hint == 0 {
            return Err(ModformError::Argument("level_hint must be positive".into()));
        }
        let conductor = chi.conductor();
        if conductor > 1 && !coeffs[0].is_zero() {
            return Err(ModformError::ConstantTerm(conductor));
        }
        Ok(QExpansion {
            coeffs: TruncatedSeries::new(coeffs).expect("nonempty"),
            weight,
            chi,
            psi,
            level_hint,
        })
    }

    fn with_coeffs(&self, coeffs: Vec<CyclotomicNumber>, level_hint: u64) -> Self {
        QExpansion {
            coeffs: TruncatedSeries::new(coeffs).expect("nonempty"),
            weight: self.weight,
            chi: self.chi.clone(),
            psi: self.psi.clone(),
            level_hint,
        }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.prec()
    }

    pub fn coeff(&self, n: usize) -> Option<&CyclotomicNumber> {
        self.coeffs.coeff(n)
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        self.coeffs.coeffs()
    }

    pub fn series(&self) -> &TruncatedSeries<CyclotomicNumber> {
        &self.coeffs
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn chi(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn psi(&self) -> &DirichletCharacter {
        &self.psi
    }

    /// The product `χψ`, used as nebentypus for `T(l)`.
    pub fn nebentypus(&self) -> DirichletCharacter {
        self.chi.mul(&self.psi)
    }

    pub fn level_hint(&self) -> u64 {
        self.level_hint
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Same series with coefficients beyond `prec` dropped.
    pub fn truncated(&self, prec: usize) -> Result<Self, ModformError> {
        if prec < 2 || prec > self.prec() {
            return Err(ModformError::Precision {
                needed: prec,
                available: self.prec(),
            });
        }
        Ok(self.with_coeffs(self.coeffs()[..prec].to_vec(), self.level_hint))
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        self.with_coeffs(self.coeffs().iter().map(|a| a * c).collect(), self.level_hint)
    }
}

fn require_primitive(which: &'static str, c: &DirichletCharacter) -> Result<(), ModformError> {
    let conductor = c.conductor();
    if conductor != c.modulus() {
        return Err(ModformError::NotPrimitive {
            which,
            modulus: c.modulus(),
            conductor,
        });
    }
    Ok(())
}

/// `E_{k,χ,ψ}(q) = c_0 + sum_{m>=1} (sum_{n|m} ψ(n) χ(m/n) n^(k-1)) q^m`,
/// with `c_0 = -B_{k,ψ}/2k` when χ has conductor 1 and `0` otherwise.
pub fn eisenstein_series(
    k: u32,
    chi: &DirichletCharacter,
    psi: &DirichletCharacter,
    prec: usize,
) -> Result<QExpansion, ModformError> {
    if k == 0 {
        return Err(ModformError::Argument("weight must be at least 1".into()));
    }
    require_primitive("chi", chi)?;
    require_primitive("psi", psi)?;
    if k == 2 && chi.is_trivial() && psi.is_trivial() {
        return Err(ModformError::UseE2);
    }
    let product = chi.sign() * psi.sign();
    let expected = if k % 2 == 0 { 1 } else { -1 };
    if product != expected {
        return Err(ModformError::Parity {
            k,
            product,
            expected,
        });
    }
    if prec < 2 {
        return Err(ModformError::Precision {
            needed: 2,
            available: prec,
        });
    }

    let order = lcm(chi.order(), psi.order());
    let (chi_step, psi_step) = (order / chi.order(), order / psi.order());
    // acc[m][t] collects the rational multiple of z_order^t in a_m
    let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); order as usize]; prec];
    for n in 1..prec {
        let Some(tp) = psi.exponent_at(n as i64) else {
            continue;
        };
        let weight_factor = num_traits::pow(BigInt::from(n), k as usize - 1);
        for d in 1..=(prec - 1) / n {
            let Some(tc) = chi.exponent_at(d as i64) else {
                continue;
            };
            let idx = ((tp * psi_step + tc * chi_step) % order) as usize;
            acc[n * d][idx] += &weight_factor;
        }
    }

    let mut coeffs = Vec::with_capacity(prec);
    coeffs.push(if chi.modulus() > 1 {
        CyclotomicNumber::zero()
    } else {
        let b = gen_bernoulli(k, psi)?.value;
        b.scale(&(rat(-1) / rat(2 * k as i64)))
    });
    for row in acc.into_iter().skip(1) {
        let raw = row.into_iter().map(Rational::from_integer).collect();
        coeffs.push(CyclotomicNumber::normalize(order, raw).simplified());
    }
    QExpansion::new(
        coeffs,
        k,
        chi.clone(),
        psi.clone(),
        chi.modulus() * psi.modulus(),
    )
}

/// `E_2(q) = -1/24 + sum_{m>=1} σ_1(m) q^m`.
pub fn e2_series(prec: usize) -> Result<QExpansion, ModformError> {
    if prec < 2 {
        return Err(ModformError::Argument(format!(
            "E2 needs precision at least 2, got {prec}"
        )));
    }
    let trivial = DirichletCharacter::trivial(1);
    let b2 = gen_bernoulli(2, &trivial)?.value;
    let mut sigma = vec![0u64; prec];
    for n in 1..prec {
        for m in (n..prec).step_by(n) {
            sigma[m] += n as u64;
        }
    }
    let mut coeffs = Vec::with_capacity(prec);
    coeffs.push(b2.scale(&(rat(-1) / rat(4))));
    coeffs.extend(sigma[1..].iter().map(|&s| CyclotomicNumber::from_int(s as i64)));
    QExpansion::new(coeffs, 2, trivial.clone(), trivial, 1)
}

/// `f(q) - c f(q^t)`: `b_m = a_m - c a_{m/t}` (second term only when `t | m`).
pub fn stabilize(f: &QExpansion, t: u64, c: &CyclotomicNumber) -> Result<QExpansion, ModformError> {
    if t < 2 {
        return Err(ModformError::Argument(format!(
            "stabilization step must be at least 2, got {t}"
        )));
    }
    let t = t as usize;
    if t >= f.prec() {
        return Err(ModformError::Precision {
            needed: t + 1,
            available: f.prec(),
        });
    }
    let a = f.coeffs();
    let coeffs = (0..f.prec())
        .map(|m| {
            if m % t == 0 && !c.is_zero() {
                &a[m] - &(c * &a[m / t])
            } else {
                a[m].clone()
            }
        })
        .collect();
    Ok(f.with_coeffs(coeffs, f.level_hint * t as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Refinement {
    Ordinary,
    Critical,
}

impl FromStr for Refinement {
    type Err = ModformError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ord" | "ordinary" => Ok(Refinement::Ordinary),
            "crit" | "critical" => Ok(Refinement::Critical),
            other => Err(ModformError::Argument(format!(
                "unknown refinement `{other}` (expected ord or crit)"
            ))),
        }
    }
}

/// Ordinary (`c = ψ(p) p^(k-1)`) or critical (`c = χ(p)`) refinement at `p`.
///
/// With trivial characters and weight 2 this is `E_2 - p E_2(q^p)` and
/// `E_2 - E_2(q^p)` respectively.
pub fn refine(f: &QExpansion, mode: Refinement, p: u64) -> Result<QExpansion, ModformError> {
    if !is_prime(p) {
        return Err(ModformError::Argument(format!("{p} is not prime")));
    }
    let c = match mode {
        Refinement::Ordinary => f
            .psi
            .eval(p as i64)
            .scale(&num_traits::pow(rat(p as i64), f.weight as usize - 1)),
        Refinement::Critical => f.chi.eval(p as i64),
    };
    stabilize(f, p, &c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeckeKind {
    T,
    U,
    V,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeckeDescriptor {
    pub kind: HeckeKind,
    pub parameter: u64,
    /// Only read by `T`.
    pub weight: u32,
    /// Only read by `T`.
    pub nebentypus: DirichletCharacter,
}

impl HeckeDescriptor {
    pub fn t(l: u64, weight: u32, nebentypus: DirichletCharacter) -> Self {
        HeckeDescriptor {
            kind: HeckeKind::T,
            parameter: l,
            weight,
            nebentypus,
        }
    }

    pub fn u(m: u64) -> Self {
        HeckeDescriptor {
            kind: HeckeKind::U,
            parameter: m,
            weight: 0,
            nebentypus: DirichletCharacter::trivial(1),
        }
    }

    pub fn v(t: u64) -> Self {
        HeckeDescriptor {
            kind: HeckeKind::V,
            parameter: t,
            weight: 0,
            nebentypus: DirichletCharacter::trivial(1),
        }
    }

    /// Descriptor whose weight and nebentypus are taken from `f`.
    pub fn for_form(kind: HeckeKind, parameter: u64, f: &QExpansion) -> Self {
        match kind {
            HeckeKind::T => Self::t(parameter, f.weight, f.nebentypus()),
            HeckeKind::U => Self::u(parameter),
            HeckeKind::V => Self::v(parameter),
        }
    }

    /// Parses `T:7`, `U:5` or `V:3`, binding `T` to `f`'s weight and nebentypus.
    pub fn parse_for(s: &str, f: &QExpansion) -> Result<Self, ModformError> {
        let (kind, param) = parse_operator(s)?;
        Ok(Self::for_form(kind, param, f))
    }
}

impl fmt::Display for HeckeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            HeckeKind::T => "T",
            HeckeKind::U => "U",
            HeckeKind::V => "V",
        };
        write!(f, "{k}:{}", self.parameter)
    }
}

/// Splits an operator string like `U:5` into kind and parameter.
pub fn parse_operator(s: &str) -> Result<(HeckeKind, u64), ModformError> {
    let bad = || ModformError::Argument(format!("bad operator `{s}` (expected T:l, U:m or V:t)"));
    let (k, n) = s.trim().split_once(':').ok_or_else(bad)?;
    let kind = match k.trim() {
        "T" | "t" => HeckeKind::T,
        "U" | "u" => HeckeKind::U,
        "V" | "v" => HeckeKind::V,
        _ => return Err(bad()),
    };
    let param = n.trim().parse().map_err(|_| bad())?;
    Ok((kind, param))
}

fn shrunk_prec(prec: usize, step: u64) -> Result<usize, ModformError> {
    let out = prec / step as usize;
    if out < 2 {
        return Err(ModformError::Precision {
            needed: 2 * step as usize,
            available: prec,
        });
    }
    Ok(out)
}

/// Applies a Hecke-type operator to the coefficients of `f`.
///
/// - `U(m)`: `b_n = a_{mn}`, precision `floor(prec/m)`.
/// - `V(t)`: `b_n = a_{n/t}` when `t | n`, else 0; precision unchanged.
/// - `T(l)`: `b_n = a_{ln} + ε(l) l^(k-1) a_{n/l}`, precision `floor(prec/l)`.
pub fn hecke_apply(op: &HeckeDescriptor, f: &QExpansion) -> Result<QExpansion, ModformError> {
    let m = op.parameter;
    if m < 2 {
        return Err(ModformError::Argument(format!(
            "{op}: parameter must be at least 2"
        )));
    }
    let a = f.coeffs();
    match op.kind {
        HeckeKind::U => {
            let out = shrunk_prec(f.prec(), m)?;
            let coeffs = (0..out).map(|n| a[n * m as usize].clone()).collect();
            Ok(f.with_coeffs(coeffs, f.level_hint))
        }
        HeckeKind::V => {
            let t = m as usize;
            let coeffs = (0..f.prec())
                .map(|n| {
                    if n % t == 0 {
                        a[n / t].clone()
                    } else {
                        CyclotomicNumber::zero()
                    }
                })
                .collect();
            Ok(f.with_coeffs(coeffs, f.level_hint * m))
        }
        HeckeKind::T => {
            if !is_prime(m) {
                return Err(ModformError::Argument(format!("{op}: T needs a prime")));
            }
            if gcd(m, f.level_hint) != 1 {
                return Err(ModformError::NotCoprime {
                    l: m,
                    level: f.level_hint,
                });
            }
            let out = shrunk_prec(f.prec(), m)?;
            let l = m as usize;
            let factor = op
                .nebentypus
                .eval(m as i64)
                .scale(&num_traits::pow(rat(m as i64), op.weight.saturating_sub(1) as usize));
            let coeffs = (0..out)
                .map(|n| {
                    let head = &a[l * n];
                    if n % l == 0 && !factor.is_zero() {
                        head + &(&factor * &a[n / l])
                    } else {
                        head.clone()
                    }
                })
                .collect();
            Ok(f.with_coeffs(coeffs, f.level_hint))
        }
    }
}

/// The eigenvalue of `op` on `f`, if `op f = λ f` on the overlapping range.
///
/// `λ` is read at the first index where `f` is nonzero and then demanded at
/// every index.
pub fn eigencheck(op: &HeckeDescriptor, f: &QExpansion) -> Result<Option<CyclotomicNumber>, ModformError> {
    if f.is_zero() {
        return Err(ModformError::Degenerate);
    }
    let g = hecke_apply(op, f)?;
    let overlap = g.prec().min(f.prec());
    let (fa, ga) = (f.coeffs(), g.coeffs());
    let pivot = (0..overlap)
        .find(|&n| !fa[n].is_zero())
        .ok_or(ModformError::Degenerate)?;
    let lambda = &ga[pivot] * &fa[pivot].inverse().expect("nonzero pivot");
    let holds = (0..overlap).all(|n| ga[n] == &lambda * &fa[n]);
    Ok(holds.then(|| lambda.simplified()))
}

/// Expected Hecke eigenvalues to check against a q-expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    entries: Vec<(HeckeDescriptor, CyclotomicNumber)>,
    prime_bound: Option<u64>,
}

impl EigenSystem {
    pub fn new(
        entries: Vec<(HeckeDescriptor, CyclotomicNumber)>,
        prime_bound: Option<u64>,
    ) -> Result<Self, ModformError> {
        for (i, (d, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(e, _)| e == d) {
                return Err(ModformError::DuplicateDescriptor(d.to_string()));
            }
            if let (HeckeKind::T, Some(b)) = (d.kind, prime_bound) {
                if d.parameter > b {
                    return Err(ModformError::Argument(format!(
                        "{d} exceeds the prime bound {b}"
                    )));
                }
            }
        }
        Ok(EigenSystem {
            entries,
            prime_bound,
        })
    }

    /// The system of `E_2^{crit_p, ord_l}`: `T(q) = 1 + q` for primes
    /// `q <= bound` other than `p, l`, then `U(l) = 1` and `U(p) = p`.
    pub fn e2_critical_ordinary(p: u64, ell: u64, bound: u64) -> Self {
        let trivial = DirichletCharacter::trivial(1);
        let mut entries: Vec<_> = primes_below(bound + 1)
            .into_iter()
            .filter(|&q| q != p && q != ell)
            .map(|q| {
                (
                    HeckeDescriptor::t(q, 2, trivial.clone()),
                    CyclotomicNumber::from_int(1 + q as i64),
                )
            })
            .collect();
        entries.push((HeckeDescriptor::u(ell), CyclotomicNumber::one()));
        entries.push((HeckeDescriptor::u(p), CyclotomicNumber::from_int(p as i64)));
        Self::new(entries, Some(bound)).expect("distinct operators")
    }

    pub fn entries(&self) -> &[(HeckeDescriptor, CyclotomicNumber)] {
        &self.entries
    }

    pub fn prime_bound(&self) -> Option<u64> {
        self.prime_bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenOutcome {
    pub operator: String,
    pub expected: CyclotomicNumber,
    pub found: Option<CyclotomicNumber>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    pub outcomes: Vec<EigenOutcome>,
    pub pass: bool,
}

pub fn eigensystem_verify(f: &QExpansion, sys: &EigenSystem) -> Result<EigenReport, ModformError> {
    let mut outcomes = Vec::with_capacity(sys.entries.len());
    for (op, expected) in &sys.entries {
        let found = eigencheck(op, f).map_err(|e| ModformError::At {
            op: op.to_string(),
            source: Box::new(e),
        })?;
        let pass = found.as_ref() == Some(expected);
        outcomes.push(EigenOutcome {
            operator: op.to_string(),
            expected: expected.clone(),
            found,
            pass,
        });
    }
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(EigenReport { outcomes, pass })
}

// ---- serialization ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QExpansionRepr {
    weight: u32,
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    level_hint: u64,
    prec: usize,
    coeffs: Vec<CyclotomicNumber>,
}

impl Serialize for QExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QExpansionRepr {
            weight: self.weight,
            chi: self.chi.clone(),
            psi: self.psi.clone(),
            level_hint: self.level_hint,
            prec: self.prec(),
            coeffs: self.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = QExpansionRepr::deserialize(d)?;
        if r.coeffs.len() != r.prec {
            return Err(D::Error::custom(format!(
                "prec is {} but {} coefficients were given",
                r.prec,
                r.coeffs.len()
            )));
        }
        QExpansion::new(r.coeffs, r.weight, r.chi, r.psi, r.level_hint).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenvalueSpec {
    Rational(#[serde(with = "serde_string")] Rational),
    Cyclotomic(CyclotomicNumber),
}

impl EigenvalueSpec {
    pub fn value(&self) -> CyclotomicNumber {
        match self {
            EigenvalueSpec::Rational(r) => CyclotomicNumber::from_rational(r.clone()),
            EigenvalueSpec::Cyclotomic(c) => c.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenEntrySpec {
    pub op: String,
    pub eigenvalue: EigenvalueSpec,
}

/// File form of an [`EigenSystem`]: operators are strings such as `T:7`;
/// `T` entries take weight and nebentypus from the form they are checked on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenSystemSpec {
    pub entries: Vec<EigenEntrySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_bound: Option<u64>,
}

impl EigenSystemSpec {
    pub fn bind(&self, f: &QExpansion) -> Result<EigenSystem, ModformError> {
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((HeckeDescriptor::parse_for(&e.op, f)?, e.eigenvalue.value())))
            .collect::<Result<Vec<_>, ModformError>>()?;
        EigenSystem::new(entries, self.prime_bound)
    }

    pub fn from_system(sys: &EigenSystem) -> Self {
        EigenSystemSpec {
            entries: sys
                .entries
                .iter()
                .map(|(d, v)| EigenEntrySpec {
                    op: d.to_string(),
                    eigenvalue: match v.as_rational() {
                        Some(r) => EigenvalueSpec::Rational(r),
                        None => EigenvalueSpec::Cyclotomic(v.clone()),
                    },
                })
                .collect(),
            prime_bound: sys.prime_bound,
        }
    }
}
