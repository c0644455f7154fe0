//! Exact maximum independent sets of the forbidden-pair conflict graph,
//! used as ground truth for the extremal statements at small n.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    all_points, build_candidate_set, candidate_size, forbidden_pair, predicted_variants,
    validate_set, Point, PointSet, Variant,
};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut b = Bits::empty(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }
}

/// Vertices are all points of {0..d}^n in lexicographic order; edges join
/// forbidden pairs.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    points: Vec<Point>,
    adj: Vec<Bits>,
    edges: usize,
}

impl ConflictGraph {
    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    fn set_of(&self, vertices: &[usize]) -> PointSet {
        let pts = vertices.iter().map(|&v| self.points[v].clone()).collect();
        PointSet::new(self.n, self.d, Some(self.k), pts).expect("graph points are valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest admissible (d+1)^n.
    pub max_vertices: u128,
    /// Branch-and-bound nodes before giving up; `None` means unlimited.
    pub node_limit: Option<u64>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 100,
            node_limit: None,
        }
    }
}

/// Largest graph on which all maximum sets are enumerated.
pub fn enumeration_limit(d: u32) -> usize {
    if d == 1 {
        32
    } else {
        27
    }
}

pub fn build_conflict_graph(
    n: u32,
    d: u32,
    k: u32,
    budget: &OracleBudget,
) -> Result<ConflictGraph> {
    if d == 0 {
        return Err(Error::OutOfRange("d must be at least 1".into()));
    }
    let size = u128::from(d + 1).checked_pow(n).unwrap_or(u128::MAX);
    if size > budget.max_vertices {
        return Err(Error::BudgetExceeded {
            what: format!("conflict graph on {{0..{d}}}^{n}"),
            needed: size,
            budget: budget.max_vertices,
        });
    }
    let points = all_points(n, d)?;
    let len = points.len();
    let mut adj = vec![Bits::empty(len); len];
    let mut edges = 0;
    for u in 0..len {
        for v in u + 1..len {
            if forbidden_pair(&points[u], &points[v], k)? {
                adj[u].insert(v);
                adj[v].insert(u);
                edges += 1;
            }
        }
    }
    Ok(ConflictGraph {
        n,
        d,
        k,
        points,
        adj,
        edges,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MisResult {
    pub size: usize,
    pub witness: PointSet,
    /// False when the node limit stopped the search early; `size` is then
    /// only a lower bound.
    pub certified: bool,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_solutions: Option<Vec<PointSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximumSets {
    pub size: usize,
    pub sets: Vec<PointSet>,
    /// More than `cap` maximum sets exist.
    pub truncated: bool,
}

/// Greedy cover of `p` by cliques of the graph, in the order vertices are
/// branched on, with the running number of cliques as the bound.
fn clique_cover(g: &ConflictGraph, p: &Bits) -> Vec<(usize, usize)> {
    let mut left = p.clone();
    let mut out = Vec::with_capacity(p.count());
    let mut class = 0;
    while !left.is_empty() {
        class += 1;
        let mut q = left.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            left.remove(v);
            q.and_assign(&g.adj[v]);
            out.push((v, class));
        }
    }
    out
}

struct Search<'a> {
    g: &'a ConflictGraph,
    non_adj: Vec<Bits>,
    nodes: u64,
    node_limit: Option<u64>,
    aborted: bool,
    best: Vec<usize>,
    /// In enumeration mode: the target size and the sets found so far.
    target: Option<usize>,
    found: Vec<Vec<usize>>,
    cap: usize,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut p: Bits) {
        self.nodes += 1;
        if self.node_limit.is_some_and(|lim| self.nodes > lim) {
            self.aborted = true;
            return;
        }
        if p.is_empty() {
            match self.target {
                Some(t) if current.len() == t => {
                    self.found.push(current.clone());
                }
                None if current.len() > self.best.len() => self.best = current.clone(),
                _ => {}
            }
            return;
        }
        let cover = clique_cover(self.g, &p);
        for &(v, bound) in cover.iter().rev() {
            if self.aborted || self.found.len() > self.cap {
                return;
            }
            let enough = match self.target {
                Some(t) => current.len() + bound >= t,
                None => current.len() + bound > self.best.len(),
            };
            if !enough {
                return;
            }
            current.push(v);
            let next = p.and(&self.non_adj[v]);
            self.expand(current, next);
            current.pop();
            p.remove(v);
        }
        // a branch whose candidates were all pruned still ends a maximal set
        if self.target.is_none() && current.len() > self.best.len() {
            self.best = current.clone();
        }
    }
}

fn search(
    g: &ConflictGraph,
    node_limit: Option<u64>,
    target: Option<usize>,
    cap: usize,
) -> Search<'_> {
    let len = g.vertex_count();
    let non_adj = (0..len)
        .map(|v| {
            let mut b = Bits::full(len);
            for u in 0..len {
                if g.adj[v].contains(u) {
                    b.remove(u);
                }
            }
            b.remove(v);
            b
        })
        .collect();
    let mut s = Search {
        g,
        non_adj,
        nodes: 0,
        node_limit,
        aborted: false,
        best: Vec::new(),
        target,
        found: Vec::new(),
        cap,
    };
    s.expand(&mut Vec::new(), Bits::full(len));
    s
}

/// Exact branch and bound; deterministic given the vertex order.
pub fn max_independent_set(g: &ConflictGraph, node_limit: Option<u64>) -> MisResult {
    let s = search(g, node_limit, None, 0);
    MisResult {
        size: s.best.len(),
        witness: g.set_of(&s.best),
        certified: !s.aborted,
        nodes: s.nodes,
        all_solutions: None,
    }
}

/// All maximum independent sets, up to `cap` of them.
pub fn enumerate_maximum_sets(g: &ConflictGraph, cap: usize) -> Result<MaximumSets> {
    let limit = enumeration_limit(g.d);
    if g.vertex_count() > limit {
        return Err(Error::BudgetExceeded {
            what: format!("enumeration of maximum sets for n={}, d={}", g.n, g.d),
            needed: g.vertex_count() as u128,
            budget: limit as u128,
        });
    }
    let size = max_independent_set(g, None).size;
    let s = search(g, None, Some(size), cap);
    let truncated = s.found.len() > cap;
    let mut sets: Vec<PointSet> = s.found.iter().take(cap).map(|v| g.set_of(v)).collect();
    sets.sort_by(|a, b| a.points().cmp(b.points()));
    Ok(MaximumSets {
        size,
        sets,
        truncated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    /// Oracle size; a lower bound only when `certified` is false.
    pub mis: Option<usize>,
    pub candidate: String,
    /// Whether the maximum sets are exactly the predicted residue classes;
    /// null when enumeration was out of budget.
    pub unique: Option<bool>,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub predicted_sets: usize,
    pub maximum_sets: Option<usize>,
    pub certified: bool,
    pub note: Option<String>,
}

/// Which prediction to certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// d in {1,2}: the residue classes of the proved results.
    Theorem,
    /// any d: |x| = floor(nd/2) or ceil(nd/2) mod dk+1.
    Conjecture,
}

fn predicted(n: u32, d: u32, claim: Claim) -> Result<Vec<Variant>> {
    match claim {
        Claim::Theorem => {
            if d > 2 {
                return Err(Error::UnsupportedVariant(format!(
                    "no theorem for d={d}; use the conjecture"
                )));
            }
            Ok(predicted_variants(n, d))
        }
        Claim::Conjecture => Ok(if (n * d) % 2 == 1 {
            vec![Variant::Conjecture, Variant::ConjectureTwin]
        } else {
            vec![Variant::Conjecture]
        }),
    }
}

/// PASS iff the candidate size equals the oracle size and, where
/// enumeration is feasible, the maximum sets are exactly the predicted ones.
pub fn certify_theorem(
    n: u32,
    d: u32,
    k: u32,
    claim: Claim,
    budget: &OracleBudget,
) -> Result<Verdict> {
    if k < 1 {
        return Err(Error::OutOfRange("need k >= 1".into()));
    }
    let variants = predicted(n, d, claim)?;
    let candidate: BigInt = candidate_size(n, d, k, variants[0])?;
    let label = (claim == Claim::Conjecture && d >= 3).then(|| "UNPROVEN".to_string());
    let mut verdict = Verdict {
        n,
        d,
        k,
        mis: None,
        candidate: candidate.to_string(),
        unique: None,
        status: VerdictStatus::Incomplete,
        label,
        predicted_sets: variants.len(),
        maximum_sets: None,
        certified: false,
        note: None,
    };
    let g = match build_conflict_graph(n, d, k, budget) {
        Ok(g) => g,
        Err(e @ Error::BudgetExceeded { .. }) => {
            verdict.note = Some(e.to_string());
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    let mis = max_independent_set(&g, budget.node_limit);
    verdict.mis = Some(mis.size);
    verdict.certified = mis.certified;
    if !mis.certified {
        verdict.note = Some(format!(
            "node limit hit after {} nodes; mis is a lower bound",
            mis.nodes
        ));
        return Ok(verdict);
    }
    let sets: Vec<PointSet> = variants
        .iter()
        .map(|&v| build_candidate_set(n, d, k, v))
        .collect::<Result<_>>()?;
    let valid = sets.iter().all(|s| validate_set(s, k).is_ok());
    let size_ok = valid && BigInt::from(mis.size) == candidate;
    if g.vertex_count() <= enumeration_limit(d) {
        let cap = 4096;
        let all = enumerate_maximum_sets(&g, cap)?;
        verdict.maximum_sets = (!all.truncated).then_some(all.sets.len());
        let mut want: Vec<&[Point]> = sets.iter().map(|s| s.points()).collect();
        want.sort();
        let got: Vec<&[Point]> = all.sets.iter().map(|s| s.points()).collect();
        verdict.unique = Some(!all.truncated && want == got);
    } else {
        verdict.note = Some(format!(
            "{} vertices exceed the enumeration limit {}; uniqueness not checked",
            g.vertex_count(),
            enumeration_limit(d)
        ));
    }
    if !valid {
        verdict.note = Some("a predicted set violates the forbidden-pair condition".into());
    }
    verdict.status = if size_ok && verdict.unique != Some(false) {
        VerdictStatus::Pass
    } else {
        VerdictStatus::Fail
    };
    Ok(verdict)
}
