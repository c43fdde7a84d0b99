//! Selmer dimensions for one-dimensional p-adic characters `χ·ω_p^j` over Q.
//!
//! Everything is decided by exact predicates on the character (is `χ(v) = 1`,
//! is `j = 0`, parity at infinity). The dimension is assembled as
//!
//! ```text
//! dim H^1_L(V) = dim H^1_{L⊥}(V*(1)) + h0(Q, V) - h0(Q, V*(1)) + Σ_v (dim L_v - h0(G_v, V))
//! ```
//!
//! and every summand is kept in a ledger with a one-line justification.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dirichlet::{DirichletCharacter, DirichletError};
use crate::numkernel::arith::{factorize, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelmerError {
    #[error("the working prime must be an odd prime, got {0}")]
    BadPrime(u64),
    #[error("{0} is not a prime place")]
    NotAPlace(u64),
    #[error("conductor {conductor} of the Dirichlet part is not prime to p = {p}")]
    ConductorNotPrimeToP { conductor: u64, p: u64 },
    #[error("sigma must contain {0}")]
    SigmaMissing(Place),
    #[error("place {0} appears twice in sigma")]
    DuplicatePlace(Place),
    #[error("no local condition given at {0}")]
    MissingCondition(Place),
    #[error("condition given at {0}, which is not in sigma")]
    StrayCondition(Place),
    #[error("condition {cond} is not allowed at {place}")]
    ConditionNotAllowed { place: Place, cond: LocalCondition },
    #[error("bad place `{0}` (expected a prime or \"inf\")")]
    ParsePlace(String),
    #[error(transparent)]
    Dirichlet(#[from] DirichletError),
}

impl SelmerError {
    pub fn code(&self) -> &'static str {
        match self {
            SelmerError::BadPrime(_) | SelmerError::NotAPlace(_) => "PRIME",
            SelmerError::ConductorNotPrimeToP { .. } => "CONDUCTOR",
            SelmerError::SigmaMissing(_) | SelmerError::DuplicatePlace(_) => "SIGMA",
            SelmerError::MissingCondition(_) | SelmerError::StrayCondition(_) => "CONDITIONS",
            SelmerError::ConditionNotAllowed { .. } => "CONDITION",
            SelmerError::ParsePlace(_) => "PLACE",
            SelmerError::Dirichlet(_) => "CHARACTER",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(v) => write!(f, "{v}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = SelmerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Place::Infinity);
        }
        let v: u64 = s.parse().map_err(|_| SelmerError::ParsePlace(s.to_string()))?;
        if !is_prime(v) {
            return Err(SelmerError::NotAPlace(v));
        }
        Ok(Place::Prime(v))
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Place::Prime(v) => s.serialize_u64(*v),
            Place::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct PlaceVisitor;
        impl serde::de::Visitor<'_> for PlaceVisitor {
            type Value = Place;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a prime number or \"inf\"")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Place, E> {
                if is_prime(v) {
                    Ok(Place::Prime(v))
                } else {
                    Err(E::custom(SelmerError::NotAPlace(v)))
                }
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Place, E> {
                u64::try_from(v)
                    .map_err(|_| E::custom(format!("{v} is not a place")))
                    .and_then(|v| self.visit_u64(v))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Place, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(PlaceVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalCondition {
    Zero,
    Unramified,
    Crystalline,
    Full,
}

impl fmt::Display for LocalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalCondition::Zero => "zero",
            LocalCondition::Unramified => "unramified",
            LocalCondition::Crystalline => "crystalline",
            LocalCondition::Full => "full",
        })
    }
}

/// The character `χ·ω_p^j`, with `χ` stored primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisCharacter {
    chi: DirichletCharacter,
    j: i64,
    p: u64,
}

impl GaloisCharacter {
    pub fn new(chi: &DirichletCharacter, j: i64, p: u64) -> Result<Self, SelmerError> {
        if p == 2 || !is_prime(p) {
            return Err(SelmerError::BadPrime(p));
        }
        let (conductor, chi) = chi.primitive();
        if conductor % p == 0 {
            return Err(SelmerError::ConductorNotPrimeToP { conductor, p });
        }
        Ok(GaloisCharacter { chi, j, p })
    }

    /// `ω_p^j`.
    pub fn cyclotomic_power(j: i64, p: u64) -> Result<Self, SelmerError> {
        Self::new(&DirichletCharacter::trivial(1), j, p)
    }

    pub fn dirichlet_part(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn exponent(&self) -> i64 {
        self.j
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn conductor(&self) -> u64 {
        self.chi.modulus()
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0 && self.chi.is_trivial()
    }

    /// `η(-1)` as `±1`.
    pub fn parity(&self) -> i64 {
        self.chi.sign() * if self.j % 2 == 0 { 1 } else { -1 }
    }

    pub fn is_ramified_at(&self, v: u64) -> bool {
        self.conductor() % v == 0 || (v == self.p && self.j != 0)
    }
}

impl fmt::Display for GaloisCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.chi.is_trivial() {
            String::new()
        } else {
            format!("chi{:?}*", self.chi.exponents())
        };
        match self.j {
            0 if self.chi.is_trivial() => f.write_str("1"),
            0 => write!(f, "{}", base.trim_end_matches('*')),
            1 => write!(f, "{base}w{}", self.p),
            j => write!(f, "{base}w{}^{j}", self.p),
        }
    }
}

/// `η^{-1}·ω_p`, the character of `V*(1)`.
pub fn char_dual_twist(eta: &GaloisCharacter) -> GaloisCharacter {
    GaloisCharacter {
        chi: eta.chi.inverse(),
        j: 1 - eta.j,
        p: eta.p,
    }
}

/// `dim H^0(G_v, η)`.
pub fn local_h0(place: Place, eta: &GaloisCharacter) -> u64 {
    match place {
        Place::Prime(v) => {
            let fixed = eta.j == 0 && !eta.is_ramified_at(v) && eta.chi.exponent_at(v as i64) == Some(0);
            fixed as u64
        }
        Place::Infinity => (eta.parity() == 1) as u64,
    }
}

/// `dim H^0(G_Q, η)`.
pub fn global_h0(eta: &GaloisCharacter) -> u64 {
    eta.is_trivial() as u64
}

/// `dim L_v` for the given local condition.
pub fn local_cond_dim(place: Place, cond: LocalCondition, eta: &GaloisCharacter) -> Result<u64, SelmerError> {
    let at_p = place == Place::Prime(eta.p);
    let h0 = local_h0(place, eta);
    Ok(match cond {
        LocalCondition::Zero => 0,
        LocalCondition::Unramified => h0,
        LocalCondition::Full => match place {
            Place::Infinity => 0,
            Place::Prime(_) => {
                let h2 = local_h0(place, &char_dual_twist(eta));
                h0 + h2 + at_p as u64
            }
        },
        LocalCondition::Crystalline => {
            if !at_p {
                return Err(SelmerError::ConditionNotAllowed { place, cond });
            }
            h0 + (eta.j >= 1) as u64
        }
    })
}

/// Orthogonal complement under local duality.
pub fn dual_condition(cond: LocalCondition) -> LocalCondition {
    match cond {
        LocalCondition::Full => LocalCondition::Zero,
        LocalCondition::Zero => LocalCondition::Full,
        c => c,
    }
}

/// Conditions the dimension formula is valid for: at `∞` only `zero`/`full`,
/// at `p` no `unramified`, and `crystalline` only at `p`.
fn condition_allowed(place: Place, p: u64, cond: LocalCondition) -> bool {
    use LocalCondition::*;
    match place {
        Place::Infinity => matches!(cond, Zero | Full),
        Place::Prime(v) if v == p => matches!(cond, Zero | Crystalline | Full),
        Place::Prime(_) => matches!(cond, Zero | Unramified | Full),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VanishingReason {
    /// Finite-order character, classes unramified everywhere.
    ClassNumber,
    /// Even `χ·ω_p^j` with `j >= 2`.
    Soule,
}

impl VanishingReason {
    pub fn describe(&self) -> &'static str {
        match self {
            VanishingReason::ClassNumber => "finiteness of class numbers",
            VanishingReason::Soule => "Soulé's vanishing theorem",
        }
    }
}

/// Decides whether `H^1_L(Q, η)` is known to vanish for the given
/// conditions (places not listed are unramified).
pub fn global_vanishing_rule(
    eta: &GaloisCharacter,
    conditions: &[(Place, LocalCondition)],
) -> Option<VanishingReason> {
    let at_p = conditions
        .iter()
        .find(|(v, _)| *v == Place::Prime(eta.p))
        .map(|(_, c)| *c)
        .unwrap_or(LocalCondition::Unramified);
    let p_small = matches!(
        at_p,
        LocalCondition::Zero | LocalCondition::Unramified | LocalCondition::Crystalline
    );
    // for finite-order η, full and unramified agree at primes other than p
    if eta.j == 0 && p_small {
        return Some(VanishingReason::ClassNumber);
    }
    if eta.j >= 2 && eta.parity() == 1 && p_small {
        return Some(VanishingReason::Soule);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelmerProblem {
    character: GaloisCharacter,
    sigma: Vec<Place>,
    conditions: Vec<LocalCondition>,
}

impl SelmerProblem {
    /// `conditions` must cover sigma exactly; sigma keeps the given order.
    pub fn new(
        character: GaloisCharacter,
        sigma: Vec<Place>,
        conditions: &[(Place, LocalCondition)],
    ) -> Result<Self, SelmerError> {
        let mut seen = HashSet::new();
        for &v in &sigma {
            if !seen.insert(v) {
                return Err(SelmerError::DuplicatePlace(v));
            }
            if let Place::Prime(q) = v {
                if !is_prime(q) {
                    return Err(SelmerError::NotAPlace(q));
                }
            }
        }
        let required = [Place::Prime(character.p), Place::Infinity]
            .into_iter()
            .chain(factorize(character.conductor()).into_iter().map(|(q, _)| Place::Prime(q)));
        for v in required {
            if !seen.contains(&v) {
                return Err(SelmerError::SigmaMissing(v));
            }
        }
        let mut by_place = BTreeMap::new();
        for &(v, c) in conditions {
            if !seen.contains(&v) {
                return Err(SelmerError::StrayCondition(v));
            }
            if by_place.insert(v, c).is_some() {
                return Err(SelmerError::DuplicatePlace(v));
            }
        }
        let mut conds = Vec::with_capacity(sigma.len());
        for &v in &sigma {
            let c = *by_place.get(&v).ok_or(SelmerError::MissingCondition(v))?;
            if !condition_allowed(v, character.p, c) {
                return Err(SelmerError::ConditionNotAllowed { place: v, cond: c });
            }
            conds.push(c);
        }
        Ok(SelmerProblem {
            character,
            sigma,
            conditions: conds,
        })
    }

    pub fn character(&self) -> &GaloisCharacter {
        &self.character
    }

    pub fn sigma(&self) -> &[Place] {
        &self.sigma
    }

    pub fn conditions(&self) -> Vec<(Place, LocalCondition)> {
        self.sigma.iter().copied().zip(self.conditions.iter().copied()).collect()
    }

    pub fn condition_at(&self, v: Place) -> Option<LocalCondition> {
        self.sigma.iter().position(|&w| w == v).map(|i| self.conditions[i])
    }

    /// Same problem with one condition replaced.
    pub fn with_condition(&self, v: Place, cond: LocalCondition) -> Result<Self, SelmerError> {
        let conds: Vec<_> = self
            .conditions()
            .into_iter()
            .map(|(w, c)| (w, if w == v { cond } else { c }))
            .collect();
        Self::new(self.character.clone(), self.sigma.clone(), &conds)
    }

    /// The problem for `V*(1)` with orthogonal conditions.
    pub fn dual(&self) -> SelmerProblem {
        SelmerProblem {
            character: char_dual_twist(&self.character),
            sigma: self.sigma.clone(),
            conditions: self.conditions.iter().map(|&c| dual_condition(c)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum DualTerm {
    Known { reason: String },
    Assumed { value: u64 },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub label: String,
    /// `None` only for an unknown dual term.
    pub value: Option<i64>,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelmerResult {
    ledger: Vec<LedgerEntry>,
    dual_term: DualTerm,
}

impl SelmerResult {
    pub fn ledger(&self) -> &[LedgerEntry] {
        &self.ledger
    }

    pub fn dual_term(&self) -> &DualTerm {
        &self.dual_term
    }

    /// Sum of every term except the dual Selmer term.
    pub fn known_part(&self) -> i64 {
        self.ledger[1..].iter().filter_map(|e| e.value).sum()
    }

    /// The dimension, unless the dual term is unknown.
    pub fn dimension(&self) -> Option<i64> {
        self.ledger.iter().map(|e| e.value).sum()
    }

    pub fn ledger_values(&self) -> Vec<Option<i64>> {
        self.ledger.iter().map(|e| e.value).collect()
    }
}

impl fmt::Display for SelmerResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dimension() {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "{} + (unknown dual term)", self.known_part()),
        }
    }
}

impl Serialize for SelmerResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            dimension: Option<i64>,
            symbolic: String,
            dual_term: &'a DualTerm,
            ledger: &'a [LedgerEntry],
        }
        Repr {
            dimension: self.dimension(),
            symbolic: self.to_string(),
            dual_term: &self.dual_term,
            ledger: &self.ledger,
        }
        .serialize(s)
    }
}

fn entry(label: String, value: i64, justification: String) -> LedgerEntry {
    LedgerEntry {
        label,
        value: Some(value),
        justification,
    }
}

/// Assembles the dimension term by term. An unknown dual Selmer term is
/// replaced by `assume_dual` when supplied and left symbolic otherwise.
pub fn selmer_dimension(problem: &SelmerProblem, assume_dual: Option<u64>) -> SelmerResult {
    let eta = &problem.character;
    let dual = problem.dual();
    let eta_star = &dual.character;
    let mut ledger = Vec::with_capacity(3 + problem.sigma.len());

    let dual_term = match global_vanishing_rule(eta_star, &dual.conditions()) {
        Some(reason) => {
            let mut why = format!("H^1 of {eta_star} with dual conditions vanishes: {}", reason.describe());
            if reason == VanishingReason::ClassNumber && eta.j == 1 && !eta.chi.is_trivial() {
                why.push_str(
                    "; the dual character has finite order, so no weight argument is used here",
                );
            }
            ledger.push(entry("dual Selmer".into(), 0, why));
            DualTerm::Known {
                reason: reason.describe().into(),
            }
        }
        None => match assume_dual {
            Some(d) => {
                ledger.push(entry(
                    "dual Selmer".into(),
                    d as i64,
                    format!("assumed by caller for {eta_star}; no vanishing rule applies"),
                ));
                DualTerm::Assumed { value: d }
            }
            None => {
                ledger.push(LedgerEntry {
                    label: "dual Selmer".into(),
                    value: None,
                    justification: format!("unknown for {eta_star}; no vanishing rule applies"),
                });
                DualTerm::Unknown
            }
        },
    };

    let h0 = global_h0(eta) as i64;
    ledger.push(entry(
        "H0(Q,V)".into(),
        h0,
        format!("{eta} is {}trivial", if h0 == 1 { "" } else { "non" }),
    ));
    let h0_star = global_h0(eta_star) as i64;
    ledger.push(entry(
        "-H0(Q,V*(1))".into(),
        -h0_star,
        format!("{eta_star} is {}trivial", if h0_star == 1 { "" } else { "non" }),
    ));

    for (v, cond) in problem.conditions() {
        let l = local_cond_dim(v, cond, eta).expect("validated problem") as i64;
        let h = local_h0(v, eta) as i64;
        let how = match (cond, v) {
            (LocalCondition::Zero, _) => "zero subspace".to_string(),
            (LocalCondition::Unramified, _) => "unramified classes have dim H0".to_string(),
            (LocalCondition::Full, Place::Infinity) => "H1 of the reals vanishes for odd p".to_string(),
            (LocalCondition::Full, Place::Prime(q)) if q == eta.p => {
                "h0 + h2 + 1 by the local Euler characteristic".to_string()
            }
            (LocalCondition::Full, _) => "h0 + h2 with h2 from local duality".to_string(),
            (LocalCondition::Crystalline, _) => {
                format!("h0 + {} negative Hodge-Tate weight(s)", (eta.j >= 1) as u8)
            }
        };
        ledger.push(entry(
            format!("local {v}"),
            l - h,
            format!("dim L_{v} = {l} ({cond}: {how}), dim H0(G_{v},V) = {h}"),
        ));
    }

    let result = SelmerResult { ledger, dual_term };
    if let (DualTerm::Known { .. }, Some(d)) = (&result.dual_term, result.dimension()) {
        assert!(d >= 0, "negative Selmer dimension {d} for {problem:?}");
    }
    result
}

// ---- serialization ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemRepr {
    p: u64,
    chi: DirichletCharacter,
    j: i64,
    sigma: Vec<Place>,
    conditions: BTreeMap<String, LocalCondition>,
}

impl Serialize for SelmerProblem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProblemRepr {
            p: self.character.p,
            chi: self.character.chi.clone(),
            j: self.character.j,
            sigma: self.sigma.clone(),
            conditions: self.conditions().into_iter().map(|(v, c)| (v.to_string(), c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SelmerProblem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = ProblemRepr::deserialize(d)?;
        let character = GaloisCharacter::new(&r.chi, r.j, r.p).map_err(D::Error::custom)?;
        let conditions = r
            .conditions
            .iter()
            .map(|(k, &c)| k.parse::<Place>().map(|v| (v, c)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        SelmerProblem::new(character, r.sigma, &conditions).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::characters_mod;
    use LocalCondition::*;

    fn omega(j: i64, p: u64) -> GaloisCharacter {
        GaloisCharacter::cyclotomic_power(j, p).unwrap()
    }

    const INF: Place = Place::Infinity;

    fn run(eta: GaloisCharacter, conds: &[(Place, LocalCondition)]) -> SelmerResult {
        let sigma = conds.iter().map(|&(v, _)| v).collect();
        selmer_dimension(&SelmerProblem::new(eta, sigma, conds).unwrap(), None)
    }

    #[test]
    fn dual_twist_examples() {
        assert!(char_dual_twist(&omega(1, 5)).is_trivial());
        assert_eq!(char_dual_twist(&omega(-1, 5)), omega(2, 5));
        let chi = &characters_mod(7).unwrap()[1];
        let eta = GaloisCharacter::new(chi, 1, 5).unwrap();
        assert_eq!(char_dual_twist(&char_dual_twist(&eta)), eta);
    }

    #[test]
    fn h0_examples() {
        assert_eq!(local_h0(Place::Prime(7), &omega(1, 5)), 0);
        assert_eq!(local_h0(Place::Prime(7), &omega(0, 5)), 1);
        assert_eq!(global_h0(&omega(0, 5)), 1);
        assert_eq!(global_h0(&omega(1, 5)), 0);
        assert_eq!(local_h0(INF, &omega(1, 5)), 0);
        assert_eq!(local_h0(INF, &omega(2, 5)), 1);
    }

    #[test]
    fn local_dimension_examples() {
        let l = Place::Prime(7);
        let p = Place::Prime(5);
        assert_eq!(local_cond_dim(l, Full, &omega(1, 5)), Ok(1));
        assert_eq!(local_cond_dim(p, Crystalline, &omega(1, 5)), Ok(1));
        assert_eq!(local_cond_dim(p, Crystalline, &omega(-1, 5)), Ok(0));
        assert_eq!(local_cond_dim(p, Full, &omega(-1, 5)), Ok(1));
        assert!(local_cond_dim(l, Crystalline, &omega(1, 5)).is_err());
    }

    #[test]
    fn vanishing_rule_examples() {
        let l = Place::Prime(7);
        let p = Place::Prime(5);
        assert_eq!(
            global_vanishing_rule(&omega(0, 5), &[(l, Zero), (p, Zero)]),
            Some(VanishingReason::ClassNumber)
        );
        assert_eq!(
            global_vanishing_rule(&omega(2, 5), &[(l, Zero), (p, Zero)]),
            Some(VanishingReason::Soule)
        );
        let chi = &characters_mod(7).unwrap()[1];
        let eta = GaloisCharacter::new(chi, -3, 5).unwrap();
        assert_eq!(global_vanishing_rule(&eta, &[(l, Full), (p, Full)]), None);
        // units of Z[1/7] give a nonzero class for ω_p with full condition at 7
        assert_eq!(global_vanishing_rule(&omega(1, 5), &[(l, Full), (p, Crystalline)]), None);
    }

    #[test]
    fn main_case_ledger() {
        let r = run(omega(1, 5), &[(Place::Prime(7), Full), (Place::Prime(5), Crystalline), (INF, Zero)]);
        assert_eq!(r.ledger_values(), [0, 0, -1, 1, 1, 0].map(Some));
        assert_eq!(r.dimension(), Some(1));
    }

    #[test]
    fn unknown_dual_term_stays_symbolic() {
        let p = GaloisCharacter::cyclotomic_power(0, 5).unwrap();
        let conds = [(Place::Prime(7), Zero), (Place::Prime(5), Crystalline), (INF, Zero)];
        let problem = SelmerProblem::new(p, conds.iter().map(|c| c.0).collect(), &conds).unwrap();
        let r = selmer_dimension(&problem, None);
        assert_eq!(r.dual_term(), &DualTerm::Unknown);
        assert_eq!(r.dimension(), None);
        assert!(r.to_string().contains("unknown dual term"));
        let r = selmer_dimension(&problem, Some(1));
        assert_eq!(r.dual_term(), &DualTerm::Assumed { value: 1 });
        assert_eq!(r.dimension(), Some(r.known_part() + 1));
    }

    #[test]
    fn problem_validation() {
        let eta = omega(1, 5);
        let sigma = vec![Place::Prime(7), INF];
        assert_eq!(
            SelmerProblem::new(eta.clone(), sigma, &[]),
            Err(SelmerError::SigmaMissing(Place::Prime(5)))
        );
        let sigma = vec![Place::Prime(5), INF];
        assert_eq!(
            SelmerProblem::new(eta.clone(), sigma.clone(), &[(Place::Prime(5), Full)]),
            Err(SelmerError::MissingCondition(INF))
        );
        assert!(matches!(
            SelmerProblem::new(eta.clone(), sigma.clone(), &[(Place::Prime(5), Unramified), (INF, Zero)]),
            Err(SelmerError::ConditionNotAllowed { .. })
        ));
        let chi7 = &characters_mod(7).unwrap()[1];
        let eta7 = GaloisCharacter::new(chi7, 0, 5).unwrap();
        assert_eq!(
            SelmerProblem::new(eta7, sigma, &[(Place::Prime(5), Full), (INF, Zero)]),
            Err(SelmerError::SigmaMissing(Place::Prime(7)))
        );
        assert_eq!(GaloisCharacter::cyclotomic_power(1, 2), Err(SelmerError::BadPrime(2)));
        let chi5 = &characters_mod(5).unwrap()[1];
        assert!(matches!(
            GaloisCharacter::new(chi5, 1, 5),
            Err(SelmerError::ConductorNotPrimeToP { .. })
        ));
    }

    #[test]
    fn problem_json() {
        let js = r#"{"p":5,"chi":{"modulus":1,"exponents":[],"order":1},"j":1,
            "sigma":[7,5,"inf"],"conditions":{"7":"full","5":"crystalline","inf":"zero"}}"#;
        let problem: SelmerProblem = serde_json::from_str(js).unwrap();
        assert_eq!(problem.sigma(), &[Place::Prime(7), Place::Prime(5), INF]);
        let again: SelmerProblem = serde_json::from_str(&serde_json::to_string(&problem).unwrap()).unwrap();
        assert_eq!(again, problem);
        assert_eq!(selmer_dimension(&problem, None).dimension(), Some(1));
    }
}
