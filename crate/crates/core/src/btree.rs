//! The Bruhat-Tits tree of GL(2, Q_p), at the scale of a few hundred vertices.
//!
//! A vertex is a homothety class of Z_p-lattices in Q_p^2. Each class has a
//! unique representative spanned by the columns of
//!
//! ```text
//! [[p^a, b], [0, p^c]],   0 <= b < p^a,   min(a, c, v_p(b)) = 0
//! ```
//!
//! i.e. a lattice inside the standard one but not inside `p` times it. Its
//! distance from the standard vertex is `a + c`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::numkernel::arith::is_prime;
use crate::numkernel::rational::serde_string;
use crate::numkernel::{valuation, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix is not invertible")]
    Singular,
    #[error("the standard lattice is not stable; conjugate the generators first")]
    NoAnchor,
    #[error("vertex {0} is not stable under the representation")]
    Unstable(String),
    #[error("invalid argument: {0}")]
    Argument(String),
}

impl TreeError {
    pub fn code(&self) -> &'static str {
        match self {
            TreeError::NotPrime(_) => "PRIME",
            TreeError::Singular => "SINGULAR",
            TreeError::NoAnchor => "NO_ANCHOR",
            TreeError::Unstable(_) => "UNSTABLE",
            TreeError::Argument(_) => "ARGUMENT",
        }
    }
}

/// 2x2 matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[Rational; 2]; 2]);

impl Mat2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        let r = |x: i64| Rational::from_integer(x.into());
        Mat2::new(r(m[0][0]), r(m[0][1]), r(m[1][0]), r(m[1][1]))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0], [0, 1]])
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    pub fn det(&self) -> Rational {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }

    pub fn trace(&self) -> Rational {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.0[i][0] * &o.0[0][j] + &self.0[i][1] * &o.0[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let [[a, b], [c, e]] = &self.0;
        Some(Mat2([[e / &d, -b / &d], [-c / &d, a / &d]]))
    }

    /// Every entry lies in Z_(p).
    pub fn is_integral_at(&self, p: u64) -> bool {
        self.entries().all(|x| valuation(x, p).is_none_or(|v| v >= 0))
    }

    fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter().flatten()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

#[derive(Serialize, Deserialize)]
struct Row(#[serde(with = "serde_string")] Rational, #[serde(with = "serde_string")] Rational);

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let [[a, b], [c, d]] = self.0.clone();
        [Row(a, b), Row(c, d)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [Row(a, b), Row(c, e)] = <[Row; 2]>::deserialize(d)?;
        Ok(Mat2::new(a, b, c, e))
    }
}

fn ppow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `x` in Z_(p) reduced to `[0, p^e)`.
fn residue(x: &Rational, p: u64, e: u32) -> BigInt {
    if e == 0 {
        return BigInt::zero();
    }
    let m = ppow(p, e);
    let num = x.numer().mod_floor(&m);
    let den = x.denom().mod_floor(&m);
    let phi = &m / BigInt::from(p) * BigInt::from(p - 1);
    let inv = den.modpow(&(phi - 1u32), &m);
    (num * inv).mod_floor(&m)
}

/// A homothety class of lattices, stored in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VertexRepr", into = "VertexRepr")]
pub struct LatticeVertex {
    p: u64,
    a: u32,
    b: BigInt,
    c: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRepr {
    p: u64,
    a: u32,
    b: String,
    c: u32,
}

impl From<LatticeVertex> for VertexRepr {
    fn from(v: LatticeVertex) -> Self {
        VertexRepr {
            p: v.p,
            a: v.a,
            b: v.b.to_string(),
            c: v.c,
        }
    }
}

impl TryFrom<VertexRepr> for LatticeVertex {
    type Error = TreeError;
    fn try_from(r: VertexRepr) -> Result<Self, TreeError> {
        let b = r
            .b
            .parse()
            .map_err(|_| TreeError::Argument(format!("bad integer `{}`", r.b)))?;
        LatticeVertex::new(r.p, r.a, b, r.c)
    }
}

impl LatticeVertex {
    /// Checks that `(a, b, c)` is already in normal form.
    pub fn new(p: u64, a: u32, b: BigInt, c: u32) -> Result<Self, TreeError> {
        if !is_prime(p) {
            return Err(TreeError::NotPrime(p));
        }
        if b.is_negative() || b >= ppow(p, a) {
            return Err(TreeError::Argument(format!("need 0 <= b < {p}^{a}, got {b}")));
        }
        if a > 0 && c > 0 && (&b % p).is_zero() {
            return Err(TreeError::Argument(format!(
                "({a}, {b}, {c}) lies inside {p} times another lattice"
            )));
        }
        Ok(LatticeVertex { p, a, b, c })
    }

    pub fn standard(p: u64) -> Self {
        LatticeVertex {
            p,
            a: 0,
            b: BigInt::zero(),
            c: 0,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// Distance from the standard vertex.
    pub fn radius(&self) -> u32 {
        self.a + self.c
    }

    pub fn basis(&self) -> Mat2 {
        Mat2::new(
            Rational::from_integer(ppow(self.p, self.a)),
            Rational::from_integer(self.b.clone()),
            Rational::zero(),
            Rational::from_integer(ppow(self.p, self.c)),
        )
    }

    fn sort_key(&self) -> (u32, u32, BigInt, u32) {
        (self.radius(), self.a, self.b.clone(), self.c)
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis())
    }
}

/// Normal form of the class of the lattice spanned by the columns of `basis`.
pub fn vertex_normalize(basis: &Mat2, p: u64) -> Result<LatticeVertex, TreeError> {
    if !is_prime(p) {
        return Err(TreeError::NotPrime(p));
    }
    if basis.det().is_zero() {
        return Err(TreeError::Singular);
    }
    let v = |x: &Rational| valuation(x, p);
    let col = |j: usize| [basis.0[0][j].clone(), basis.0[1][j].clone()];
    let (c0, c1) = (col(0), col(1));
    // pivot on the bottom entry of least valuation, clear the other one
    let pick_first = match (v(&c0[1]), v(&c1[1])) {
        (Some(x), Some(y)) => x <= y,
        (Some(_), None) => true,
        _ => false,
    };
    let (pivot, other) = if pick_first { (c0, c1) } else { (c1, c0) };
    let t = &other[1] / &pivot[1];
    let first = [&other[0] - &t * &pivot[0], Rational::zero()];

    let alpha = v(&first[0]).expect("invertible");
    let gamma = v(&pivot[1]).expect("invertible");
    // divide each column by the unit part of its diagonal entry
    let unit = |x: &Rational, e: i64| x / pow_rat(p, e);
    let y = &pivot[0] / unit(&pivot[1], gamma);
    let shift = [alpha, gamma, v(&y).unwrap_or(i64::MAX)]
        .into_iter()
        .min()
        .unwrap();
    let a = (alpha - shift) as u32;
    let c = (gamma - shift) as u32;
    let b = residue(&(y * pow_rat(p, -shift)), p, a);
    Ok(LatticeVertex { p, a, b, c })
}

fn pow_rat(p: u64, e: i64) -> Rational {
    let m = Rational::from_integer(ppow(p, e.unsigned_abs() as u32));
    if e >= 0 {
        m
    } else {
        m.recip()
    }
}

/// The `p + 1` vertices at distance one.
pub fn neighbors(v: &LatticeVertex) -> Vec<LatticeVertex> {
    let b = v.basis();
    let p = v.p as i64;
    (0..p)
        .map(|t| Mat2::from_ints([[p, t], [0, 1]]))
        .chain(std::iter::once(Mat2::from_ints([[1, 0], [0, p]])))
        .map(|step| vertex_normalize(&b.mul(&step), v.p).expect("invertible"))
        .collect()
}

/// Finitely many invertible matrices acting on Q_p^2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RepRepr", into = "RepRepr")]
pub struct MatrixRep {
    p: u64,
    generators: Vec<Mat2>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepRepr {
    p: u64,
    generators: Vec<Mat2>,
    #[serde(default)]
    labels: Vec<String>,
}

impl From<MatrixRep> for RepRepr {
    fn from(r: MatrixRep) -> Self {
        RepRepr {
            p: r.p,
            generators: r.generators,
            labels: r.labels,
        }
    }
}

impl TryFrom<RepRepr> for MatrixRep {
    type Error = TreeError;
    fn try_from(r: RepRepr) -> Result<Self, TreeError> {
        let labels = (!r.labels.is_empty()).then_some(r.labels);
        MatrixRep::new(r.p, r.generators, labels)
    }
}

impl MatrixRep {
    /// Labels default to `g1, g2, ...`.
    pub fn new(p: u64, generators: Vec<Mat2>, labels: Option<Vec<String>>) -> Result<Self, TreeError> {
        if !is_prime(p) {
            return Err(TreeError::NotPrime(p));
        }
        if generators.is_empty() {
            return Err(TreeError::Argument("no generators".into()));
        }
        if generators.iter().any(|g| g.det().is_zero()) {
            return Err(TreeError::Singular);
        }
        let labels = labels.unwrap_or_else(|| (1..=generators.len()).map(|i| format!("g{i}")).collect());
        if labels.len() != generators.len() {
            return Err(TreeError::Argument(format!(
                "{} labels for {} generators",
                labels.len(),
                generators.len()
            )));
        }
        Ok(MatrixRep {
            p,
            generators,
            labels,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

fn conjugates(v: &LatticeVertex, rep: &MatrixRep) -> Vec<Mat2> {
    let b = v.basis();
    let inv = b.inverse().expect("normal form is invertible");
    rep.generators.iter().map(|m| inv.mul(m).mul(&b)).collect()
}

/// Whether the lattice of `v` is carried into itself by every generator.
pub fn is_stable(v: &LatticeVertex, rep: &MatrixRep) -> bool {
    v.p == rep.p && conjugates(v, rep).iter().all(|m| m.is_integral_at(rep.p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReductionClass {
    Irreducible,
    ReducibleIndecomposable,
    Split,
}

/// A generator reduced mod p, entries in `[0, p)`.
pub type ResidueMatrix = [[u64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub matrices: Vec<ResidueMatrix>,
    pub class: ReductionClass,
    /// Values on the generators of the characters on a stable line and on
    /// the quotient, when some line is stable.
    pub characters: Option<(Vec<u64>, Vec<u64>)>,
}

impl Reduction {
    /// Reducible with two different characters.
    pub fn has_distinct_characters(&self) -> bool {
        matches!(&self.characters, Some((x, y)) if x != y)
    }
}

/// The `p + 1` lines of `F_p^2`, by spanning vector.
fn projective_line(p: u64) -> impl Iterator<Item = [u64; 2]> {
    (0..p).map(|t| [1, t]).chain(std::iter::once([0, 1]))
}

fn apply(m: &ResidueMatrix, x: [u64; 2], p: u64) -> [u64; 2] {
    [(m[0][0] * x[0] + m[0][1] * x[1]) % p, (m[1][0] * x[0] + m[1][1] * x[1]) % p]
}

/// Reduction mod p of the generators in the basis of `v`, and its type.
pub fn reduction_at(v: &LatticeVertex, rep: &MatrixRep) -> Result<Reduction, TreeError> {
    if !is_stable(v, rep) {
        return Err(TreeError::Unstable(v.to_string()));
    }
    let p = rep.p;
    let to_u64 = |x: &Rational| u64::try_from(residue(x, p, 1)).expect("residue below p");
    let matrices: Vec<ResidueMatrix> = conjugates(v, rep)
        .iter()
        .map(|m| {
            [
                [to_u64(m.get(0, 0)), to_u64(m.get(0, 1))],
                [to_u64(m.get(1, 0)), to_u64(m.get(1, 1))],
            ]
        })
        .collect();

    let stable_lines: Vec<[u64; 2]> = projective_line(p)
        .filter(|&x| {
            matrices.iter().all(|m| {
                let y = apply(m, x, p);
                (x[0] * y[1] + (p - x[1]) * y[0]) % p == 0
            })
        })
        .collect();
    let class = match stable_lines.len() {
        0 => ReductionClass::Irreducible,
        1 => ReductionClass::ReducibleIndecomposable,
        _ => ReductionClass::Split,
    };
    let characters = stable_lines.first().map(|&x| {
        matrices
            .iter()
            .map(|m| {
                let u = apply(m, x, p);
                if x[0] == 1 {
                    let e = apply(m, [0, 1], p);
                    (u[0], (e[1] + p * p - x[1] * e[0]) % p)
                } else {
                    (u[1], apply(m, [1, 0], p)[0])
                }
            })
            .unzip()
    });
    Ok(Reduction {
        matrices,
        class,
        characters,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Empty,
    Segment {
        endpoints: (LatticeVertex, LatticeVertex),
        length: usize,
    },
    NotASegment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableSet {
    pub vertices: Vec<LatticeVertex>,
    pub geometry: Geometry,
    /// Stable vertices continue past the radius cap.
    pub unbounded: bool,
}

/// Breadth-first search for stable vertices within `radius_cap` of the
/// standard vertex, which must itself be stable.
pub fn stable_set(rep: &MatrixRep, radius_cap: u32) -> Result<StableSet, TreeError> {
    if radius_cap < 1 {
        return Err(TreeError::Argument("radius cap must be at least 1".into()));
    }
    let anchor = LatticeVertex::standard(rep.p);
    if !is_stable(&anchor, rep) {
        return Err(TreeError::NoAnchor);
    }
    let mut seen = HashSet::from([anchor.clone()]);
    let mut found = vec![anchor.clone()];
    let mut queue = VecDeque::from([anchor]);
    let mut unbounded = false;
    while let Some(v) = queue.pop_front() {
        for w in neighbors(&v) {
            if seen.contains(&w) || !is_stable(&w, rep) {
                continue;
            }
            if w.radius() > radius_cap {
                unbounded = true;
                continue;
            }
            seen.insert(w.clone());
            found.push(w.clone());
            queue.push_back(w);
        }
    }
    found.sort_by_key(LatticeVertex::sort_key);
    let geometry = geometry_of(&found);
    Ok(StableSet {
        vertices: found,
        geometry,
        unbounded,
    })
}

fn geometry_of(vertices: &[LatticeVertex]) -> Geometry {
    let Some(first) = vertices.first() else {
        return Geometry::Empty;
    };
    let set: HashSet<&LatticeVertex> = vertices.iter().collect();
    let degree: HashMap<&LatticeVertex, usize> = vertices
        .iter()
        .map(|v| (v, neighbors(v).iter().filter(|w| set.contains(w)).count()))
        .collect();
    if degree.values().any(|&d| d > 2) {
        return Geometry::NotASegment;
    }
    let ends: Vec<&LatticeVertex> = vertices.iter().filter(|v| degree[v] <= 1).collect();
    let endpoints = match ends.as_slice() {
        [only] => ((*only).clone(), (*only).clone()),
        [x, y] => ((*x).clone(), (*y).clone()),
        _ => (first.clone(), first.clone()),
    };
    Geometry::Segment {
        endpoints,
        length: vertices.len() - 1,
    }
}

/// Checks `tr ρ(w) ≡ ψ1(w) + ψ2(w) (mod p^n)` for every word `w` of length at
/// most `word_cap` in the generators and their inverses.
///
/// `psi1`, `psi2` give integer values prime to `p` on the generators. A
/// `true` answer certifies the congruence only on the sampled words.
pub fn reducibility_index_check(
    rep: &MatrixRep,
    psi1: &[i64],
    psi2: &[i64],
    n: u32,
    word_cap: usize,
) -> Result<bool, TreeError> {
    let p = rep.p;
    let g = rep.generators.len();
    if n < 1 || word_cap < 1 {
        return Err(TreeError::Argument("need n >= 1 and word_cap >= 1".into()));
    }
    if psi1.len() != g || psi2.len() != g {
        return Err(TreeError::Argument(format!(
            "characters need one value per generator ({g})"
        )));
    }
    let modulus = ppow(p, n);
    let unit = |x: i64| -> Result<(BigInt, BigInt), TreeError> {
        let x = BigInt::from(x).mod_floor(&modulus);
        if (&x % p).is_zero() {
            return Err(TreeError::Argument(format!(
                "character value {x} is not prime to {p}"
            )));
        }
        let inv = residue(&Rational::new(BigInt::one(), x.clone()), p, n);
        Ok((x, inv))
    };
    // letters: generator i at 2i, its inverse at 2i+1
    let mut letters = Vec::with_capacity(2 * g);
    for i in 0..g {
        let (a1, a1i) = unit(psi1[i])?;
        let (a2, a2i) = unit(psi2[i])?;
        let m = &rep.generators[i];
        letters.push((m.clone(), a1, a2));
        letters.push((m.inverse().expect("invertible"), a1i, a2i));
    }

    let search = WordSearch {
        letters,
        p,
        n,
        modulus,
    };
    Ok(search.walk(&Mat2::identity(), &BigInt::one(), &BigInt::one(), None, word_cap))
}

struct WordSearch {
    letters: Vec<(Mat2, BigInt, BigInt)>,
    p: u64,
    n: u32,
    modulus: BigInt,
}

impl WordSearch {
    /// Extends `word` (with character values `c1`, `c2`) by up to `depth`
    /// letters, skipping immediate cancellations.
    fn walk(&self, word: &Mat2, c1: &BigInt, c2: &BigInt, last: Option<usize>, depth: usize) -> bool {
        if depth == 0 {
            return true;
        }
        self.letters.iter().enumerate().all(|(i, (m, a1, a2))| {
            if last.is_some_and(|l| l ^ 1 == i) {
                return true;
            }
            let w = word.mul(m);
            let e1 = (c1 * a1).mod_floor(&self.modulus);
            let e2 = (c2 * a2).mod_floor(&self.modulus);
            let diff = w.trace() - Rational::from_integer(&e1 + &e2);
            let ok = valuation(&diff, self.p).is_none_or(|v| v >= self.n as i64);
            ok && self.walk(&w, &e1, &e2, Some(i), depth - 1)
        })
    }
}
