//! Basic chains, chain groups and their footprints over types or layers.

use std::fmt;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{binom, falling};
use crate::error::{Error, Result};
use crate::grid::{all_types, type_size, Point, TypeTriple};

/// Canonical key of a chain group: a layer for d=1, a type for d=2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    Layer(u32),
    Type(TypeTriple),
}

impl Owner {
    pub fn mirror(&self, n: u32) -> Owner {
        match *self {
            Owner::Layer(m) => Owner::Layer(n - m),
            Owner::Type(t) => Owner::Type(t.mirror()),
        }
    }

    /// Twice the distance of the owner's layer from the middle layer.
    pub fn middle_distance2(&self, n: u32) -> u32 {
        match *self {
            Owner::Layer(m) => (2 * i64::from(m) - i64::from(n)).unsigned_abs() as u32,
            Owner::Type(t) => 2 * t.skew().unsigned_abs() as u32,
        }
    }

    pub fn as_type(&self) -> Option<TypeTriple> {
        match *self {
            Owner::Type(t) => Some(t),
            Owner::Layer(_) => None,
        }
    }

    pub fn as_layer(&self) -> Option<u32> {
        match *self {
            Owner::Layer(m) => Some(m),
            Owner::Type(_) => None,
        }
    }

    /// Number of points of this type or layer.
    pub fn size(&self, n: u32) -> BigInt {
        match *self {
            Owner::Layer(m) => binom(u64::from(n), u64::from(m)),
            Owner::Type(t) => type_size(t),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match *self {
            Owner::Layer(m) => serde_json::json!(m),
            Owner::Type(t) => serde_json::json!(t.as_array()),
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Layer(m) => write!(f, "L{m}"),
            Owner::Type(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for Owner {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Owner::Layer(m) => m.serialize(s),
            Owner::Type(t) => t.serialize(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// The owner is the bottom end of every chain.
    Up,
    /// The owner is the top end of every chain.
    Down,
}

/// Which shape of chain a group stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    #[default]
    Basic,
    /// Raise all w coordinates 0 -> 1 first, then each 1 -> 2. Only for d=2;
    /// kept as a negative control.
    AntiBasic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainGroup {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub owner: Owner,
    pub width: u32,
    pub direction: Direction,
}

impl ChainGroup {
    /// True when the two ends of the chains mirror each other.
    pub fn is_symmetric(&self) -> bool {
        let fp = self.footprint();
        let last = *fp.last().expect("footprints are never empty");
        last == self.owner.mirror(self.n)
    }

    /// Types (d=2) or layers (d=1) visited by every chain, starting at the owner.
    pub fn footprint(&self) -> Vec<Owner> {
        self.footprint_of(Family::Basic)
    }

    pub fn footprint_of(&self, family: Family) -> Vec<Owner> {
        let w = self.width;
        match self.owner {
            Owner::Layer(m) => (0..=w)
                .map(|s| match self.direction {
                    Direction::Up => Owner::Layer(m + s),
                    Direction::Down => Owner::Layer(m - s),
                })
                .collect(),
            Owner::Type(t) => {
                let n = self.n;
                let (a, c) = (t.a, t.c);
                let ty = |a: u32, c: u32| Owner::Type(TypeTriple::new(a, n - a - c, c));
                let mut out = vec![self.owner];
                match (family, self.direction) {
                    (Family::Basic, Direction::Up) => {
                        for s in 1..=w {
                            out.push(ty(a - s, c + s - 1));
                            out.push(ty(a - s, c + s));
                        }
                    }
                    (Family::Basic, Direction::Down) => {
                        for s in 1..=w {
                            out.push(ty(a + s - 1, c - s));
                            out.push(ty(a + s, c - s));
                        }
                    }
                    (Family::AntiBasic, Direction::Up) => {
                        out.extend((1..=w).map(|s| ty(a - s, c)));
                        out.extend((1..=w).map(|s| ty(a - w, c + s)));
                    }
                    (Family::AntiBasic, Direction::Down) => {
                        out.extend((1..=w).map(|s| ty(a, c - s)));
                        out.extend((1..=w).map(|s| ty(a + s, c - w)));
                    }
                }
                out
            }
        }
    }

    /// Number of distinct point-level basic chains in the group.
    pub fn count(&self) -> BigInt {
        let w = u64::from(self.width);
        let free = match (self.owner, self.direction) {
            (Owner::Layer(m), Direction::Up) => self.n - m,
            (Owner::Layer(m), Direction::Down) => m,
            (Owner::Type(t), Direction::Up) => t.a,
            (Owner::Type(t), Direction::Down) => t.c,
        };
        self.owner.size(self.n) * falling(u64::from(free), w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("chain groups serialize")
    }
}

impl Serialize for ChainGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ChainGroup", 5)?;
        st.serialize_field("owner", &self.owner)?;
        st.serialize_field("width", &self.width)?;
        st.serialize_field("direction", &self.direction)?;
        st.serialize_field("count", &self.count().to_string())?;
        st.serialize_field("footprint", &self.footprint())?;
        st.end()
    }
}

fn check_params(n: u32, d: u32, k: u32) -> Result<()> {
    if d != 1 && d != 2 {
        return Err(Error::UnsupportedVariant(format!(
            "chain families exist for d in {{1,2}}, got d={d}"
        )));
    }
    if k < 1 {
        return Err(Error::OutOfRange(format!("need k >= 1, got k={k} (n={n})")));
    }
    Ok(())
}

/// Every group of the family for (n, d, k), farthest from the middle first.
/// Symmetric groups appear once, under their lower end; middle-layer
/// singletons are width-0 groups.
pub fn enumerate_chain_groups(n: u32, d: u32, k: u32) -> Result<Vec<ChainGroup>> {
    check_params(n, d, k)?;
    let group = |owner, width, direction| ChainGroup {
        n,
        d,
        k,
        owner,
        width,
        direction,
    };
    let mut out = Vec::new();
    if d == 1 {
        for m in 0..=n {
            if 2 * m + k <= n {
                out.push(group(Owner::Layer(m), k, Direction::Up));
            } else if 2 * m <= n {
                out.push(group(Owner::Layer(m), n - 2 * m, Direction::Up));
            } else if 2 * m > n + k {
                out.push(group(Owner::Layer(m), k, Direction::Down));
            }
        }
    } else {
        for t in all_types(n) {
            let skew = t.skew();
            let owner = Owner::Type(t);
            if skew >= i64::from(k) {
                out.push(group(owner, k, Direction::Up));
            } else if skew >= 0 {
                out.push(group(owner, skew as u32, Direction::Up));
            } else if -skew > i64::from(k) {
                out.push(group(owner, k, Direction::Down));
            }
        }
    }
    out.sort_by_key(|g| {
        let (c, a) = match g.owner {
            Owner::Layer(m) => (m, 0),
            Owner::Type(t) => (t.c, t.a),
        };
        (std::cmp::Reverse(g.owner.middle_distance2(n)), c, a)
    });
    Ok(out)
}

/// A chain given by its bottom point and the order in which coordinates
/// are raised from 0 to d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicChain {
    start: Point,
    coords: Vec<usize>,
    d: u32,
}

impl BasicChain {
    pub fn new(start: Point, coords: Vec<usize>, d: u32) -> Result<Self> {
        let mut seen = vec![false; start.n()];
        for &j in &coords {
            if j >= start.n() {
                return Err(Error::OutOfRange(format!(
                    "coordinate {j} >= n={}",
                    start.n()
                )));
            }
            if seen[j] {
                return Err(Error::NotAChain(format!("coordinate {j} raised twice")));
            }
            if start.entries()[j] != 0 {
                return Err(Error::NotAChain(format!(
                    "coordinate {j} does not start at 0"
                )));
            }
            seen[j] = true;
        }
        Ok(BasicChain { start, coords, d })
    }

    pub fn start(&self) -> &Point {
        &self.start
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn width(&self) -> usize {
        self.coords.len()
    }

    pub fn len(&self) -> usize {
        self.d as usize * self.coords.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<Point> {
        let mut cur = self.start.entries().to_vec();
        let mut out = Vec::with_capacity(self.len());
        out.push(Point::from_vec(cur.clone()));
        for &j in &self.coords {
            for _ in 0..self.d {
                cur[j] += 1;
                out.push(Point::from_vec(cur.clone()));
            }
        }
        out
    }
}

/// Checks the basic-chain conditions for an explicit point sequence over
/// {0..d}^n. Errors if some step is not a unit increment.
pub fn is_basic(chain: &[Point], d: u32) -> Result<bool> {
    let mut steps = Vec::with_capacity(chain.len().saturating_sub(1));
    for w in chain.windows(2) {
        let (x, y) = (w[0].entries(), w[1].entries());
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(
                "points of different length".into(),
            ));
        }
        let diff: Vec<usize> = (0..x.len()).filter(|&i| x[i] != y[i]).collect();
        if diff.len() != 1 || y[diff[0]] != x[diff[0]] + 1 {
            return Err(Error::NotAChain(format!(
                "{} -> {} is not a unit increment",
                w[0], w[1]
            )));
        }
        steps.push(diff[0]);
    }
    if steps.is_empty() {
        return Ok(true);
    }
    let top = d as u8;
    if chain[0].entries()[steps[0]] != 0 {
        return Ok(false);
    }
    let last = chain.len() - 1;
    if chain[last].entries()[steps[last - 1]] != top {
        return Ok(false);
    }
    for i in 1..last {
        let (prev, cur) = (steps[i - 1], steps[i]);
        if prev != cur && !(chain[i].entries()[prev] == top && chain[i].entries()[cur] == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every arrangement of `counts[v]` copies of each value v, lexicographic.
fn arrangements(counts: &mut [u32], len: usize, cur: &mut Vec<u8>, out: &mut Vec<Point>) {
    if cur.len() == len {
        out.push(Point::from_vec(cur.clone()));
        return;
    }
    for v in 0..counts.len() {
        if counts[v] > 0 {
            counts[v] -= 1;
            cur.push(v as u8);
            arrangements(counts, len, cur, out);
            cur.pop();
            counts[v] += 1;
        }
    }
}

/// Points of a type (d=2) or layer (d=1).
pub fn points_of(owner: Owner, n: u32) -> Vec<Point> {
    let mut counts = match owner {
        Owner::Layer(m) => vec![n - m, m],
        Owner::Type(t) => vec![t.a, t.b, t.c],
    };
    let mut out = Vec::new();
    arrangements(&mut counts, n as usize, &mut Vec::new(), &mut out);
    out
}

/// Every ordered `w`-tuple of distinct elements of `pool`.
pub fn ordered_tuples(pool: &[usize], w: usize) -> Vec<Vec<usize>> {
    fn rec(
        pool: &[usize],
        w: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == w {
            out.push(cur.clone());
            return;
        }
        for i in 0..pool.len() {
            if !used[i] {
                used[i] = true;
                cur.push(pool[i]);
                rec(pool, w, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(
        pool,
        w,
        &mut vec![false; pool.len()],
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Point-level chains of one group.
pub fn group_chains(g: &ChainGroup) -> impl Iterator<Item = BasicChain> + '_ {
    let d = g.d;
    points_of(g.owner, g.n).into_iter().flat_map(move |x| {
        let pick = match g.direction {
            Direction::Up => 0u8,
            Direction::Down => d as u8,
        };
        let pool: Vec<usize> = (0..x.n()).filter(|&i| x.entries()[i] == pick).collect();
        ordered_tuples(&pool, g.width as usize)
            .into_iter()
            .map(move |tuple| match g.direction {
                Direction::Up => BasicChain {
                    start: x.clone(),
                    coords: tuple,
                    d,
                },
                Direction::Down => {
                    let mut bottom = x.entries().to_vec();
                    for &j in &tuple {
                        bottom[j] = 0;
                    }
                    let coords = tuple.into_iter().rev().collect();
                    BasicChain {
                        start: Point::from_vec(bottom),
                        coords,
                        d,
                    }
                }
            })
    })
}

/// Lazily yields (group index, chain) for every chain of the family.
/// Fails up front when the total chain count exceeds `max_chains`.
pub fn enumerate_point_chains(
    n: u32,
    d: u32,
    k: u32,
    max_chains: u64,
) -> Result<impl Iterator<Item = (usize, BasicChain)>> {
    let groups = enumerate_chain_groups(n, d, k)?;
    let total: BigInt = groups.iter().map(ChainGroup::count).sum();
    if total > BigInt::from(max_chains) {
        return Err(Error::BudgetExceeded {
            what: format!("point-level chains for n={n}, d={d}, k={k}"),
            needed: u128::try_from(&total).unwrap_or(u128::MAX),
            budget: u128::from(max_chains),
        });
    }
    Ok(groups.into_iter().enumerate().flat_map(|(i, g)| {
        let chains: Vec<BasicChain> = group_chains(&g).collect();
        chains.into_iter().map(move |c| (i, c))
    }))
}
