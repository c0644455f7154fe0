//! Exact weights for chain groups: the generic covering recursion, the
//! closed recursions for d=1 and d=2, the Sperner table, and checks of the
//! induced-weight identity and of positivity.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binom, binom_i, fmt_rational, trinomial};
use crate::chain::{enumerate_chain_groups, group_chains, ChainGroup, Family, Owner};
use crate::closed_forms::u_d1;
use crate::error::{Error, Result};
use crate::grid::{all_types, cube_size, Point, TypeTriple};

fn ratio(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub family: Family,
    groups: Vec<ChainGroup>,
    entries: BTreeMap<Owner, BigRational>,
}

impl WeightTable {
    fn from_groups(n: u32, d: u32, k: u32, family: Family, groups: Vec<ChainGroup>) -> Self {
        WeightTable {
            n,
            d,
            k,
            family,
            groups,
            entries: BTreeMap::new(),
        }
    }

    pub fn groups(&self) -> &[ChainGroup] {
        &self.groups
    }

    pub fn group(&self, owner: Owner) -> Option<&ChainGroup> {
        self.groups.iter().find(|g| g.owner == owner)
    }

    pub fn entries(&self) -> &BTreeMap<Owner, BigRational> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total weight W of the group owned by `owner`, if there is one.
    pub fn get(&self, owner: Owner) -> Option<&BigRational> {
        self.entries.get(&owner)
    }

    /// Overwrites one entry; used to build perturbed tables in tests.
    pub fn set(&mut self, owner: Owner, w: BigRational) -> Result<()> {
        match self.entries.get_mut(&owner) {
            Some(slot) => {
                *slot = w;
                Ok(())
            }
            None => Err(Error::OutOfRange(format!("{owner} owns no group"))),
        }
    }

    /// W(a, c) for d=2 with the conventions of the recursions: 0 outside the
    /// simplex, and the mirror entry when (a, c) owns nothing.
    pub fn w(&self, a: i64, c: i64) -> BigRational {
        let n = i64::from(self.n);
        if a < 0 || c < 0 || a + c > n {
            return BigRational::zero();
        }
        let t = TypeTriple::new(a as u32, (n - a - c) as u32, c as u32);
        self.entries
            .get(&Owner::Type(t))
            .or_else(|| self.entries.get(&Owner::Type(t.mirror())))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// W(m) for d=1; 0 outside [0, n], mirror entry when m owns nothing.
    pub fn w_layer(&self, m: i64) -> BigRational {
        let n = i64::from(self.n);
        if m < 0 || m > n {
            return BigRational::zero();
        }
        self.entries
            .get(&Owner::Layer(m as u32))
            .or_else(|| self.entries.get(&Owner::Layer((n - m) as u32)))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Weight of each individual chain of a group: W / group count.
    pub fn per_chain(&self, g: &ChainGroup) -> BigRational {
        let w = self
            .entries
            .get(&g.owner)
            .cloned()
            .unwrap_or_else(BigRational::zero);
        w / ratio(g.count())
    }

    /// Sum of all chain weights, i.e. the fractional-cover bound.
    pub fn total_weight(&self) -> BigRational {
        self.entries
            .values()
            .fold(BigRational::zero(), |acc, w| acc + w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .groups
            .iter()
            .map(|g| {
                let w = &self.entries[&g.owner];
                serde_json::json!({
                    "owner": g.owner.to_json(),
                    "W": fmt_rational(w),
                    "width": g.width,
                    "count": g.count().to_string(),
                    "per_chain": fmt_rational(&self.per_chain(g)),
                })
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "family": self.family,
            "entries": entries,
        })
    }

    /// RFC-4180 CSV with one row per group.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        wtr.write_record(["n", "d", "k", "owner", "W", "width", "count", "per_chain"])
            .map_err(io)?;
        for g in &self.groups {
            wtr.write_record([
                self.n.to_string(),
                self.d.to_string(),
                self.k.to_string(),
                g.owner.to_json().to_string(),
                fmt_rational(&self.entries[&g.owner]),
                g.width.to_string(),
                g.count().to_string(),
                fmt_rational(&self.per_chain(g)),
            ])
            .map_err(io)?;
        }
        let bytes = wtr.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// How owners at the same distance from the middle are ordered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieOrder {
    /// Ascending c then a (ascending m for d=1).
    #[default]
    Canonical,
    /// Seeded random permutation within each distance class.
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenericOptions {
    pub family: Family,
    pub tie_order: TieOrder,
}

fn tie_key(o: &Owner) -> (u32, u32) {
    match *o {
        Owner::Layer(m) => (m, 0),
        Owner::Type(t) => (t.c, t.a),
    }
}

/// Generic recursion: owners by decreasing distance from the middle, each
/// getting its size minus what earlier groups already put on it.
pub fn assign_weights_generic(n: u32, d: u32, k: u32) -> Result<WeightTable> {
    assign_weights_generic_with(n, d, k, GenericOptions::default())
}

pub fn assign_weights_generic_with(
    n: u32,
    d: u32,
    k: u32,
    opts: GenericOptions,
) -> Result<WeightTable> {
    if opts.family == Family::AntiBasic && d != 2 {
        return Err(Error::UnsupportedVariant(
            "the anti-basic family needs d=2".into(),
        ));
    }
    let groups = enumerate_chain_groups(n, d, k)?;
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&i| {
        let o = &groups[i].owner;
        (std::cmp::Reverse(o.middle_distance2(n)), tie_key(o))
    });
    if let TieOrder::Shuffled(seed) = opts.tie_order {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut start = 0;
        while start < order.len() {
            let dist = groups[order[start]].owner.middle_distance2(n);
            let mut end = start;
            while end < order.len() && groups[order[end]].owner.middle_distance2(n) == dist {
                end += 1;
            }
            order[start..end].shuffle(&mut rng);
            start = end;
        }
    }
    let mut covered: HashMap<Owner, BigInt> = HashMap::new();
    let mut table = WeightTable::from_groups(n, d, k, opts.family, groups);
    for i in order {
        let g = &table.groups[i];
        let w = g.owner.size(n) - covered.get(&g.owner).cloned().unwrap_or_default();
        for t in g.footprint_of(opts.family) {
            *covered.entry(t).or_default() += &w;
        }
        table.entries.insert(g.owner, ratio(w));
    }
    Ok(table)
}

/// Closed recursions for d=1: outer lower layers use
/// W(m) = C(n,m) - C(n,m-1) + W(m-k-1), inner lower layers U(m) - U(m+k).
pub fn assign_weights_fast_d1(n: u32, k: u32) -> Result<WeightTable> {
    let groups = enumerate_chain_groups(n, 1, k)?;
    let mut table = WeightTable::from_groups(n, 1, k, Family::Basic, groups);
    let (ni, ki) = (i64::from(n), i64::from(k));
    for m in 0..=ni {
        if 2 * m > ni {
            break;
        }
        let w = if 2 * m + ki <= ni {
            ratio(binom_i(ni, m) - binom_i(ni, m - 1)) + table.w_layer(m - ki - 1)
        } else {
            ratio(u_d1(n, k, m) - u_d1(n, k, m + ki))
        };
        table.entries.insert(Owner::Layer(m as u32), w);
    }
    let upper: Vec<u32> = table
        .groups
        .iter()
        .filter_map(|g| g.owner.as_layer())
        .filter(|&m| 2 * m > n)
        .collect();
    for m in upper {
        let w = table.entries[&Owner::Layer(n - m)].clone();
        table.entries.insert(Owner::Layer(m), w);
    }
    Ok(table)
}

/// Closed recursions for d=2 (the key recursion plus the inner corrections).
pub fn assign_weights_fast_d2(n: u32, k: u32) -> Result<WeightTable> {
    let groups = enumerate_chain_groups(n, 2, k)?;
    let mut table = WeightTable::from_groups(n, 2, k, Family::Basic, groups);
    let (ni, ki) = (i64::from(n), i64::from(k));
    let t = |a: i64, c: i64| ratio(trinomial(ni, a, c));
    let mut types: Vec<TypeTriple> = all_types(n);
    types.sort_by_key(|t| (std::cmp::Reverse(t.skew().unsigned_abs()), t.c, t.a));
    for ty in types {
        let (a, c) = (i64::from(ty.a), i64::from(ty.c));
        let w = if a >= c {
            let mut w = t(a, c) - t(a + 1, c - 1) - table.w(a + 1, c)
                + table.w(a + 1 + ki, c - 1 - ki)
                + table.w(a + 1 + ki, c - ki);
            if a - c < ki {
                w -= table.w(a - ki, c + ki);
                if a - c < ki - 1 {
                    w -= table.w(a - ki + 1, c + ki);
                }
            }
            w
        } else if c - a > ki {
            t(a, c) - t(a - 1, c + 1) - table.w(a, c + 1)
                + table.w(a - 1 - ki, c + 1 + ki)
                + table.w(a - ki, c + 1 + ki)
        } else {
            continue;
        };
        table.entries.insert(Owner::Type(ty), w);
    }
    Ok(table)
}

/// Weighted symmetric chain decomposition of {0,1}^n (d=1, k=n) with
/// W(i) = C(n,i) - C(n,i-1) on each lower layer i.
pub fn sperner_table(n: u32) -> Result<WeightTable> {
    if n < 1 {
        return Err(Error::OutOfRange("need n >= 1".into()));
    }
    let groups = enumerate_chain_groups(n, 1, n)?;
    let mut table = WeightTable::from_groups(n, 1, n, Family::Basic, groups);
    for g in &table.groups {
        let i = u64::from(g.owner.as_layer().expect("d=1 owners are layers"));
        let prev = if i == 0 {
            BigInt::zero()
        } else {
            binom(u64::from(n), i - 1)
        };
        table
            .entries
            .insert(g.owner, ratio(binom(u64::from(n), i) - prev));
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InducedMode {
    Type,
    Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub key: String,
    #[serde(serialize_with = "ser_rational")]
    pub induced: BigRational,
}

fn ser_rational<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedReport {
    pub mode: InducedMode,
    pub n: u32,
    pub d: u32,
    pub k: u32,
    /// Number of types, layers or points compared.
    pub checked: usize,
    pub deviations: Vec<Deviation>,
    #[serde(serialize_with = "ser_rational")]
    pub max_abs_deviation: BigRational,
}

impl InducedReport {
    pub fn passed(&self) -> bool {
        self.deviations.is_empty()
    }

    fn build(mode: InducedMode, table: &WeightTable, values: Vec<(String, BigRational)>) -> Self {
        let checked = values.len();
        let mut max = BigRational::zero();
        let mut deviations = Vec::new();
        for (key, induced) in values {
            let gap = (&induced - BigRational::one()).abs();
            if !gap.is_zero() {
                if gap > max {
                    max = gap;
                }
                deviations.push(Deviation { key, induced });
            }
        }
        InducedReport {
            mode,
            n: table.n,
            d: table.d,
            k: table.k,
            checked,
            deviations,
            max_abs_deviation: max,
        }
    }
}

/// Limits for point-level verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointBudget {
    /// Largest admissible (d+1)^n.
    pub max_points: u128,
    pub max_chains: u64,
}

impl PointBudget {
    /// n <= 7 for d=2 and n <= 12 for d=1.
    pub fn default_for(d: u32) -> Self {
        let max_points = if d == 1 { 1 << 12 } else { 3u128.pow(7) };
        PointBudget {
            max_points,
            max_chains: 50_000_000,
        }
    }
}

/// Type mode compares per-type (per-layer) totals with sizes; point mode
/// enumerates every chain and sums per-chain weights at each point.
pub fn verify_induced(table: &WeightTable, mode: InducedMode) -> Result<InducedReport> {
    verify_induced_with(table, mode, PointBudget::default_for(table.d))
}

pub fn verify_induced_with(
    table: &WeightTable,
    mode: InducedMode,
    budget: PointBudget,
) -> Result<InducedReport> {
    match mode {
        InducedMode::Type => Ok(verify_types(table)),
        InducedMode::Point => verify_points(table, budget),
    }
}

fn verify_types(table: &WeightTable) -> InducedReport {
    let n = table.n;
    let mut totals: HashMap<Owner, BigRational> = HashMap::new();
    for g in &table.groups {
        let w = &table.entries[&g.owner];
        for t in g.footprint_of(table.family) {
            *totals.entry(t).or_insert_with(BigRational::zero) += w;
        }
    }
    let keys: Vec<Owner> = if table.d == 1 {
        (0..=n).map(Owner::Layer).collect()
    } else {
        all_types(n).into_iter().map(Owner::Type).collect()
    };
    let values = keys
        .into_par_iter()
        .map(|o| {
            let total = totals.get(&o).cloned().unwrap_or_else(BigRational::zero);
            (o.to_string(), total / ratio(o.size(n)))
        })
        .collect();
    InducedReport::build(InducedMode::Type, table, values)
}

fn point_index(p: &Point, base: usize) -> usize {
    p.entries()
        .iter()
        .fold(0, |acc, &e| acc * base + e as usize)
}

fn verify_points(table: &WeightTable, budget: PointBudget) -> Result<InducedReport> {
    if table.family != Family::Basic {
        return Err(Error::UnsupportedVariant(
            "point-level verification is defined for the basic family only".into(),
        ));
    }
    let (n, d) = (table.n, table.d);
    let size = u128::from(d + 1).pow(n);
    if size > budget.max_points {
        return Err(Error::BudgetExceeded {
            what: format!("point-level verification of {{0..{d}}}^{n}"),
            needed: size,
            budget: budget.max_points,
        });
    }
    let total: BigInt = table.groups.iter().map(ChainGroup::count).sum();
    if total > BigInt::from(budget.max_chains) {
        return Err(Error::BudgetExceeded {
            what: format!("point-level chains for n={n}, d={d}, k={}", table.k),
            needed: u128::try_from(&total).unwrap_or(u128::MAX),
            budget: u128::from(budget.max_chains),
        });
    }
    let cells = cube_size(n, d)?;
    let base = d as usize + 1;
    // how many chains of each group pass through each point
    let per_group: Vec<HashMap<usize, u64>> = table
        .groups
        .par_iter()
        .map(|g| {
            let mut hits: HashMap<usize, u64> = HashMap::new();
            for chain in group_chains(g) {
                for p in chain.points() {
                    *hits.entry(point_index(&p, base)).or_default() += 1;
                }
            }
            hits
        })
        .collect();
    let mut induced = vec![BigRational::zero(); cells];
    for (g, hits) in table.groups.iter().zip(&per_group) {
        let w = table.per_chain(g);
        for (&idx, &mult) in hits {
            induced[idx] += &w * ratio(BigInt::from(mult));
        }
    }
    let values = induced
        .into_iter()
        .enumerate()
        .map(|(idx, v)| {
            let mut digits = vec![0u8; n as usize];
            let mut rest = idx;
            for slot in digits.iter_mut().rev() {
                *slot = (rest % base) as u8;
                rest /= base;
            }
            (Point::from_vec(digits).to_string(), v)
        })
        .collect();
    Ok(InducedReport::build(InducedMode::Point, table, values))
}

/// Entries with W <= 0, in owner order.
pub fn positivity_report(table: &WeightTable) -> Vec<(Owner, BigRational)> {
    table
        .entries
        .iter()
        .filter(|(_, w)| !w.is_positive())
        .map(|(o, w)| (*o, w.clone()))
        .collect()
}

/// Owners that the positivity results allow to be non-positive: the
/// all-ones singleton for d=2, nothing for d=1.
pub fn expected_zero_owners(n: u32, d: u32) -> Vec<Owner> {
    if d == 2 {
        vec![Owner::Type(TypeTriple::new(0, n, 0))]
    } else {
        Vec::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        ratio(BigInt::from(x))
    }

    fn ty(a: u32, b: u32, c: u32) -> Owner {
        Owner::Type(TypeTriple::new(a, b, c))
    }

    #[test]
    fn generic_n1_d2() {
        let t = assign_weights_generic(1, 2, 1).unwrap();
        assert_eq!(t.get(ty(1, 0, 0)), Some(&q(1)));
        assert_eq!(t.get(ty(0, 1, 0)), Some(&q(0)));
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn generic_n4_d1() {
        let t = assign_weights_generic(4, 1, 2).unwrap();
        assert_eq!(t.get(Owner::Layer(0)), Some(&q(1)));
        assert_eq!(t.get(Owner::Layer(1)), Some(&q(3)));
        assert_eq!(t.get(Owner::Layer(2)), Some(&q(1)));
        assert_eq!(t.get(Owner::Layer(4)), Some(&q(1)));
        assert_eq!(t.w_layer(3), q(3));
    }

    #[test]
    fn corners_have_weight_one() {
        for n in 1..8 {
            for k in 1..=n {
                let t = assign_weights_generic(n, 2, k).unwrap();
                assert_eq!(t.get(ty(n, 0, 0)), Some(&q(1)));
                if k < n {
                    assert_eq!(t.get(ty(0, 0, n)), Some(&q(1)));
                }
                assert_eq!(t.w(0, i64::from(n)), q(1));
            }
        }
    }

    #[test]
    fn fast_paths_match_small() {
        for n in 1..9 {
            for k in 1..=n {
                assert_eq!(
                    assign_weights_fast_d2(n, k).unwrap(),
                    assign_weights_generic(n, 2, k).unwrap()
                );
                assert_eq!(
                    assign_weights_fast_d1(n, k).unwrap(),
                    assign_weights_generic(n, 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn fast_d1_instances() {
        let t = assign_weights_fast_d1(4, 2).unwrap();
        assert_eq!(t.get(Owner::Layer(1)), Some(&q(3)));
        assert_eq!(t.get(Owner::Layer(2)), Some(&q(1)));
    }

    #[test]
    fn all_ones_type_has_zero_weight() {
        for n in 1..9 {
            for k in 1..=n {
                let t = assign_weights_fast_d2(n, k).unwrap();
                assert_eq!(t.get(ty(0, n, 0)), Some(&q(0)), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn induced_type_mode() {
        let t = assign_weights_generic(4, 1, 2).unwrap();
        assert!(verify_induced(&t, InducedMode::Type).unwrap().passed());
    }

    #[test]
    fn induced_point_mode() {
        let t = assign_weights_generic(2, 2, 1).unwrap();
        let r = verify_induced(&t, InducedMode::Point).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 9);
    }

    #[test]
    fn corrupt_table_is_detected() {
        for mode in [InducedMode::Type, InducedMode::Point] {
            let mut t = assign_weights_generic(3, 2, 2).unwrap();
            let w = t.get(ty(2, 1, 0)).unwrap() + q(1);
            t.set(ty(2, 1, 0), w).unwrap();
            let r = verify_induced(&t, mode).unwrap();
            assert!(!r.passed());
            assert!(r.max_abs_deviation.is_positive());
        }
    }

    #[test]
    fn point_budget_enforced() {
        let t = assign_weights_generic(8, 2, 2).unwrap();
        assert!(matches!(
            verify_induced(&t, InducedMode::Point),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn positivity_examples() {
        let t = assign_weights_generic(6, 2, 2).unwrap();
        assert_eq!(positivity_report(&t), vec![(ty(0, 6, 0), q(0))]);
        let t = assign_weights_generic(4, 1, 2).unwrap();
        assert!(positivity_report(&t).is_empty());
        let mut t = assign_weights_generic(4, 1, 2).unwrap();
        t.set(Owner::Layer(1), q(-2)).unwrap();
        assert_eq!(positivity_report(&t), vec![(Owner::Layer(1), q(-2))]);
    }

    #[test]
    fn sperner_small() {
        let t = sperner_table(2).unwrap();
        let g0 = t.group(Owner::Layer(0)).unwrap().clone();
        let g1 = t.group(Owner::Layer(1)).unwrap().clone();
        assert_eq!(t.per_chain(&g0), BigRational::new(1.into(), 2.into()));
        assert_eq!(t.per_chain(&g1), BigRational::new(1.into(), 2.into()));
        assert!(verify_induced(&t, InducedMode::Point).unwrap().passed());
        let t = sperner_table(1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.per_chain(&t.groups()[0].clone()), q(1));
        for n in 1..12 {
            let t = sperner_table(n).unwrap();
            assert_eq!(
                t.total_weight(),
                ratio(binom(u64::from(n), u64::from(n / 2)))
            );
            assert_eq!(t, assign_weights_generic(n, 1, n).unwrap());
        }
    }

    #[test]
    fn shuffled_ties_give_same_table() {
        for seed in 0..5 {
            let opts = GenericOptions {
                tie_order: TieOrder::Shuffled(seed),
                ..Default::default()
            };
            assert_eq!(
                assign_weights_generic_with(7, 2, 2, opts).unwrap(),
                assign_weights_generic(7, 2, 2).unwrap()
            );
        }
    }

    #[test]
    fn anti_basic_goes_negative() {
        let opts = GenericOptions {
            family: Family::AntiBasic,
            ..Default::default()
        };
        let t = assign_weights_generic_with(2, 2, 2, opts).unwrap();
        assert_eq!(t.get(ty(0, 2, 0)), Some(&q(-1)));
        assert!(verify_induced(&t, InducedMode::Type).unwrap().passed());
    }

    #[test]
    fn json_and_csv() {
        let t = assign_weights_generic(1, 2, 1).unwrap();
        let j = t.to_json();
        assert_eq!(j["entries"][0]["owner"], serde_json::json!([1, 0, 0]));
        assert_eq!(j["entries"][0]["W"], "1/1");
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("n,d,k,owner,W,width,count,per_chain\n"));
        assert!(csv.contains("\"[1,0,0]\",1/1"));
    }
}
