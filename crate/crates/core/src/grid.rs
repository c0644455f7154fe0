//! Points, types and layers of the cube {0,...,d}^n, the forbidden-pair
//! relation and the residue-class candidate sets.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::trinomial;
use crate::error::{Error, Result};

/// Hard cap on explicit point enumeration.
pub const MAX_EXPLICIT_POINTS: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    entries: Vec<u8>,
}

impl Point {
    pub fn new(entries: Vec<u8>, d: u32) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| u32::from(e) > d) {
            return Err(Error::OutOfRange(format!("entry {bad} exceeds d={d}")));
        }
        Ok(Point { entries })
    }

    pub(crate) fn from_vec(entries: Vec<u8>) -> Self {
        Point { entries }
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// |x|, the coordinate sum.
    pub fn level(&self) -> u32 {
        self.entries.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn count_of(&self, value: u8) -> u32 {
        self.entries.iter().filter(|&&e| e == value).count() as u32
    }

    /// Type of a point of {0,1,2}^n.
    pub fn type_triple(&self) -> TypeTriple {
        TypeTriple::new(self.count_of(0), self.count_of(1), self.count_of(2))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Orbit of points of {0,1,2}^n under coordinate permutation: `a` zeros,
/// `b` ones and `c` twos.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeTriple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl TypeTriple {
    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        TypeTriple { a, b, c }
    }

    /// Builds (a, n-a-c, c), rejecting anything outside the simplex.
    pub fn from_ac(n: u32, a: i64, c: i64) -> Result<Self> {
        let b = n as i64 - a - c;
        if a < 0 || c < 0 || b < 0 {
            return Err(Error::InvalidType { a, b, c, n });
        }
        Ok(TypeTriple::new(a as u32, b as u32, c as u32))
    }

    pub fn n(&self) -> u32 {
        self.a + self.b + self.c
    }

    pub fn layer(&self) -> u32 {
        self.b + 2 * self.c
    }

    pub fn is_lower(&self) -> bool {
        self.a >= self.c
    }

    pub fn is_upper(&self) -> bool {
        self.a <= self.c
    }

    pub fn mirror(&self) -> Self {
        TypeTriple::new(self.c, self.b, self.a)
    }

    /// a - c
    pub fn skew(&self) -> i64 {
        i64::from(self.a) - i64::from(self.c)
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }
}

impl fmt::Display for TypeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl Serialize for TypeTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TypeTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c] = <[u32; 3]>::deserialize(d)?;
        Ok(TypeTriple::new(a, b, c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TypeClass {
    pub lower: bool,
    pub upper: bool,
    pub outer: bool,
}

impl TypeClass {
    pub fn inner(&self) -> bool {
        !self.outer
    }
}

/// Lower/upper and inner/outer flags of a type for width `k`.
pub fn classify_type(t: TypeTriple, k: u32) -> TypeClass {
    let dist = (i64::from(t.layer()) - i64::from(t.n())).unsigned_abs();
    TypeClass {
        lower: t.is_lower(),
        upper: t.is_upper(),
        outer: dist >= u64::from(k),
    }
}

/// n!/(a!b!c!)
pub fn type_size(t: TypeTriple) -> BigInt {
    trinomial(i64::from(t.n()), i64::from(t.a), i64::from(t.c))
}

/// All types with a+b+c = n, ordered by ascending c then a.
pub fn all_types(n: u32) -> Vec<TypeTriple> {
    let mut out = Vec::new();
    for c in 0..=n {
        for a in 0..=n - c {
            out.push(TypeTriple::new(a, n - a - c, c));
        }
    }
    out
}

/// True iff x and y are comparable, distinct, and differ strictly in at
/// most `k` coordinates. Symmetric in x and y.
pub fn forbidden_pair(x: &Point, y: &Point, k: u32) -> Result<bool> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(format!(
            "points of length {} and {}",
            x.n(),
            y.n()
        )));
    }
    let (mut le, mut ge, mut strict) = (true, true, 0u32);
    for (&u, &v) in x.entries.iter().zip(&y.entries) {
        if u != v {
            strict += 1;
        }
        le &= u <= v;
        ge &= u >= v;
    }
    Ok((le || ge) && strict >= 1 && strict <= k)
}

/// Coefficients of (1 + x + ... + x^d)^n.
pub fn layer_sizes(n: u32, d: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); row.len() + d as usize];
        for (i, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for j in 0..=d as usize {
                next[i + j] += v;
            }
        }
        row = next;
    }
    row
}

/// Number of points of {0..d}^n on layer m.
pub fn layer_size(n: u32, d: u32, m: u32) -> Result<BigInt> {
    if m > d * n {
        return Err(Error::OutOfRange(format!(
            "layer {m} outside [0, {}]",
            d * n
        )));
    }
    Ok(layer_sizes(n, d).swap_remove(m as usize))
}

/// Which residue class of levels a candidate set uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// d=2: |x| = n mod 2k+1. d=1: |x| = floor(n/2) mod k+1.
    Theorem,
    /// d=1, n odd only: |x| = ceil(n/2) mod k+1.
    TheoremTwin,
    /// Any d: |x| = floor(nd/2) mod dk+1.
    Conjecture,
    /// Any d: |x| = ceil(nd/2) mod dk+1.
    ConjectureTwin,
}

impl Variant {
    pub fn is_conjecture(&self) -> bool {
        matches!(self, Variant::Conjecture | Variant::ConjectureTwin)
    }
}

/// (modulus, residue) of the candidate set.
pub fn candidate_residue(n: u32, d: u32, k: u32, variant: Variant) -> Result<(u32, u32)> {
    if d == 0 {
        return Err(Error::UnsupportedVariant("d must be at least 1".into()));
    }
    let modulus = d * k + 1;
    let floor = n * d / 2;
    let ceil = (n * d).div_ceil(2);
    let residue = match variant {
        Variant::Theorem if d <= 2 => floor,
        Variant::TheoremTwin if d == 1 && n % 2 == 1 => ceil,
        Variant::TheoremTwin => {
            return Err(Error::UnsupportedVariant(format!(
                "theorem twin exists only for d=1 and odd n (got d={d}, n={n})"
            )))
        }
        Variant::Theorem => {
            return Err(Error::UnsupportedVariant(format!(
                "theorem variant needs d in {{1,2}} (got d={d}); use the conjecture variant"
            )))
        }
        Variant::Conjecture => floor,
        Variant::ConjectureTwin => ceil,
    };
    Ok((modulus, residue % modulus))
}

/// Variants whose sets are predicted to be exactly the maximum sets.
pub fn predicted_variants(n: u32, d: u32) -> Vec<Variant> {
    match d {
        1 if n % 2 == 1 => vec![Variant::Theorem, Variant::TheoremTwin],
        1 | 2 => vec![Variant::Theorem],
        _ if (n * d) % 2 == 1 => vec![Variant::Conjecture, Variant::ConjectureTwin],
        _ => vec![Variant::Conjecture],
    }
}

/// |candidate set| computed from layer sizes, without enumerating points.
pub fn candidate_size(n: u32, d: u32, k: u32, variant: Variant) -> Result<BigInt> {
    let (modulus, residue) = candidate_residue(n, d, k, variant)?;
    Ok(layer_sizes(n, d)
        .into_iter()
        .enumerate()
        .filter(|(m, _)| *m as u32 % modulus == residue)
        .map(|(_, v)| v)
        .sum())
}

/// (d+1)^n, or an error when it would exceed the explicit enumeration cap.
pub fn cube_size(n: u32, d: u32) -> Result<usize> {
    let size = u128::from(d + 1).checked_pow(n).unwrap_or(u128::MAX);
    if size > MAX_EXPLICIT_POINTS {
        return Err(Error::BudgetExceeded {
            what: format!("explicit enumeration of {{0..{d}}}^{n}"),
            needed: size,
            budget: MAX_EXPLICIT_POINTS,
        });
    }
    Ok(size as usize)
}

/// Every point of {0..d}^n in lexicographic order.
pub fn all_points(n: u32, d: u32) -> Result<Vec<Point>> {
    let size = cube_size(n, d)?;
    let mut out = Vec::with_capacity(size);
    let mut cur = vec![0u8; n as usize];
    loop {
        out.push(Point::from_vec(cur.clone()));
        let mut i = n as usize;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if u32::from(cur[i]) < d {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub n: u32,
    pub d: u32,
    pub k: Option<u32>,
    points: Vec<Point>,
}

impl PointSet {
    /// Sorts and deduplicates; checks that all points live in {0..d}^n.
    pub fn new(n: u32, d: u32, k: Option<u32>, mut points: Vec<Point>) -> Result<Self> {
        for p in &points {
            if p.n() != n as usize {
                return Err(Error::DimensionMismatch(format!(
                    "point {p} has length {}, expected {n}",
                    p.n()
                )));
            }
            if p.entries().iter().any(|&e| u32::from(e) > d) {
                return Err(Error::OutOfRange(format!(
                    "point {p} has an entry above d={d}"
                )));
            }
        }
        points.sort();
        points.dedup();
        Ok(PointSet { n, d, k, points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("point sets serialize")
    }
}

/// The residue-class set {x : |x| = r mod q} for the given variant.
pub fn build_candidate_set(n: u32, d: u32, k: u32, variant: Variant) -> Result<PointSet> {
    let (modulus, residue) = candidate_residue(n, d, k, variant)?;
    let points = all_points(n, d)?
        .into_iter()
        .filter(|p| p.level() % modulus == residue)
        .collect();
    PointSet::new(n, d, Some(k), points)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Ok,
    Violation(Point, Point),
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }
}

/// Ok iff no two points of `s` form a forbidden pair for `k`.
pub fn validate_set(s: &PointSet, k: u32) -> Validation {
    let pts = s.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if forbidden_pair(&pts[i], &pts[j], k).unwrap_or(false) {
                return Validation::Violation(pts[i].clone(), pts[j].clone());
            }
        }
    }
    Validation::Ok
}
