//! Instance model, validation, and single-source shortest paths on
//! undirected weighted graphs.
//!
//! Weights are total over all vertex pairs: every pair is either an edge of
//! `G` (with a weight) or a non-edge (with a weight and an insertion cost).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;
use std::ops::Add;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub type VertexId = usize;

/// Instances at or below this vertex count keep a dense triangular pair table.
pub const DEFAULT_DENSE_THRESHOLD: usize = 2048;

/// All finite distances must stay below this bound.
pub const DISTANCE_HEADROOM: u64 = 1 << 62;

/// A path weight, or `+inf` for unreachable pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dist(u64);

impl Dist {
    pub const INF: Dist = Dist(u64::MAX);
    pub const ZERO: Dist = Dist(0);

    pub fn finite(value: u64) -> Dist {
        assert!(value < u64::MAX, "finite distance collides with the +inf sentinel");
        Dist(value)
    }

    pub fn is_finite(self) -> bool {
        self.0 != u64::MAX
    }

    pub fn value(self) -> Option<u64> {
        self.is_finite().then_some(self.0)
    }

    /// `factor * self`, with `+inf` absorbing.
    pub fn scaled(self, factor: u64) -> Dist {
        match self.value() {
            Some(v) => Dist(v.saturating_mul(factor).min(u64::MAX - 1)),
            None => Dist::INF,
        }
    }
}

impl Add for Dist {
    type Output = Dist;

    fn add(self, rhs: Dist) -> Dist {
        if !self.is_finite() || !rhs.is_finite() {
            return Dist::INF;
        }
        let sum = self.0 + rhs.0;
        debug_assert!(sum < u64::MAX);
        Dist(sum)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.value() {
            Some(v) => serializer.serialize_u64(v),
            None => serializer.serialize_str("inf"),
        }
    }
}

/// Unordered vertex pair, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub u: VertexId,
    pub v: VertexId,
}

impl Pair {
    pub fn new(a: VertexId, b: VertexId) -> Pair {
        assert_ne!(a, b, "a pair needs two distinct vertices");
        if a < b {
            Pair { u: a, v: b }
        } else {
            Pair { u: b, v: a }
        }
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairAttr {
    Edge { weight: u64 },
    NonEdge { weight: u64, cost: u64 },
}

impl PairAttr {
    pub fn weight(&self) -> u64 {
        match *self {
            PairAttr::Edge { weight } | PairAttr::NonEdge { weight, .. } => weight,
        }
    }

    pub fn is_edge(&self) -> bool {
        matches!(self, PairAttr::Edge { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonEdgeDefault {
    pub weight: u64,
    pub cost: u64,
}

#[derive(Clone, Debug)]
enum PairTable {
    /// Triangular table over `u < v`; `None` marks an undefined pair.
    Dense(Vec<Option<PairAttr>>),
    /// Explicit pairs per vertex (both directions, sorted); everything else
    /// falls back to the default non-edge.
    Sparse(Vec<Vec<(VertexId, PairAttr)>>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(VertexId),
    #[error("pair {0} listed more than once")]
    DuplicatePair(Pair),
}

/// Collects pairs and produces a [`WeightedInstance`].
///
/// Structural problems (range, self-loops, duplicates) fail `build`;
/// semantic ones (missing weights, zero costs) are left to [`WeightedInstance::validate`].
#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    n: usize,
    budget: u64,
    default: Option<NonEdgeDefault>,
    entries: BTreeMap<Pair, PairAttr>,
    dense_threshold: usize,
    error: Option<InstanceError>,
}

impl InstanceBuilder {
    pub fn new(n: usize, budget: u64) -> Self {
        InstanceBuilder {
            n,
            budget,
            default: None,
            entries: BTreeMap::new(),
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            error: None,
        }
    }

    pub fn default_non_edge(mut self, weight: u64, cost: u64) -> Self {
        self.default = Some(NonEdgeDefault { weight, cost });
        self
    }

    pub fn dense_threshold(mut self, threshold: usize) -> Self {
        self.dense_threshold = threshold;
        self
    }

    pub fn edge(self, a: VertexId, b: VertexId, weight: u64) -> Self {
        self.insert(a, b, PairAttr::Edge { weight })
    }

    pub fn non_edge(self, a: VertexId, b: VertexId, weight: u64, cost: u64) -> Self {
        self.insert(a, b, PairAttr::NonEdge { weight, cost })
    }

    pub fn try_insert(&mut self, a: VertexId, b: VertexId, attr: PairAttr) -> Result<(), InstanceError> {
        for x in [a, b] {
            if x >= self.n {
                return Err(InstanceError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if a == b {
            return Err(InstanceError::SelfLoop(a));
        }
        let pair = Pair::new(a, b);
        if self.entries.insert(pair, attr).is_some() {
            return Err(InstanceError::DuplicatePair(pair));
        }
        Ok(())
    }

    fn insert(mut self, a: VertexId, b: VertexId, attr: PairAttr) -> Self {
        if self.error.is_none() {
            if let Err(e) = self.try_insert(a, b, attr) {
                self.error = Some(e);
            }
        }
        self
    }

    pub fn build(self) -> Result<WeightedInstance, InstanceError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        if self.n == 0 {
            return Err(InstanceError::Empty);
        }
        let n = self.n;
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (pair, attr) in &self.entries {
            if let PairAttr::Edge { weight } = *attr {
                adj[pair.u].push((pair.v, weight));
                adj[pair.v].push((pair.u, weight));
                edge_count += 1;
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let table = if n <= self.dense_threshold {
            let fill = self.default.map(|d| PairAttr::NonEdge { weight: d.weight, cost: d.cost });
            let mut dense = vec![fill; n * (n - 1) / 2];
            for (pair, attr) in &self.entries {
                dense[tri_index(n, pair.u, pair.v)] = Some(*attr);
            }
            PairTable::Dense(dense)
        } else {
            let mut rows = vec![Vec::new(); n];
            for (pair, attr) in &self.entries {
                rows[pair.u].push((pair.v, *attr));
                rows[pair.v].push((pair.u, *attr));
            }
            for row in &mut rows {
                row.sort_unstable_by_key(|&(y, _)| y);
            }
            PairTable::Sparse(rows)
        };
        Ok(WeightedInstance { n, budget: self.budget, default: self.default, table, adj, edge_count })
    }
}

fn tri_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Graph `G`, total weights `w`, non-edge costs `c`, and budget `B`.
#[derive(Clone, Debug)]
pub struct WeightedInstance {
    n: usize,
    budget: u64,
    default: Option<NonEdgeDefault>,
    table: PairTable,
    adj: Vec<Vec<(VertexId, u64)>>,
    edge_count: usize,
}

impl WeightedInstance {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn default_non_edge(&self) -> Option<NonEdgeDefault> {
        self.default
    }

    /// Same graph and weights under a different budget.
    pub fn with_budget(&self, budget: u64) -> WeightedInstance {
        WeightedInstance { budget, ..self.clone() }
    }

    /// Edges of `G` incident to `x`, as `(neighbor, weight)` sorted by neighbor.
    pub fn neighbors(&self, x: VertexId) -> &[(VertexId, u64)] {
        &self.adj[x]
    }

    pub fn adjacency(&self) -> &[Vec<(VertexId, u64)>] {
        &self.adj
    }

    pub fn pair(&self, a: VertexId, b: VertexId) -> Option<PairAttr> {
        let p = Pair::new(a, b);
        match &self.table {
            PairTable::Dense(dense) => dense[tri_index(self.n, p.u, p.v)],
            PairTable::Sparse(rows) => {
                let row = &rows[p.u];
                match row.binary_search_by_key(&p.v, |&(y, _)| y) {
                    Ok(i) => Some(row[i].1),
                    Err(_) => self.default.map(|d| PairAttr::NonEdge { weight: d.weight, cost: d.cost }),
                }
            }
        }
    }

    pub fn weight(&self, a: VertexId, b: VertexId) -> Option<u64> {
        self.pair(a, b).map(|attr| attr.weight())
    }

    pub fn is_edge(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.adj[a].binary_search_by_key(&b, |&(y, _)| y).is_ok()
    }

    /// Cost of inserting `{a, b}`; `None` for edges and undefined pairs.
    pub fn cost(&self, a: VertexId, b: VertexId) -> Option<u64> {
        match self.pair(a, b)? {
            PairAttr::NonEdge { cost, .. } => Some(cost),
            PairAttr::Edge { .. } => None,
        }
    }

    /// Calls `f(y, weight, cost)` for every non-edge `{x, y}`, in increasing `y`.
    pub fn for_each_non_edge(&self, x: VertexId, mut f: impl FnMut(VertexId, u64, u64)) {
        match &self.table {
            PairTable::Dense(dense) => {
                for y in 0..self.n {
                    if y == x {
                        continue;
                    }
                    let idx = if x < y { tri_index(self.n, x, y) } else { tri_index(self.n, y, x) };
                    if let Some(PairAttr::NonEdge { weight, cost }) = dense[idx] {
                        f(y, weight, cost);
                    }
                }
            }
            PairTable::Sparse(rows) => {
                let row = &rows[x];
                let mut next = 0;
                for y in 0..self.n {
                    if y == x {
                        continue;
                    }
                    while next < row.len() && row[next].0 < y {
                        next += 1;
                    }
                    if next < row.len() && row[next].0 == y {
                        if let PairAttr::NonEdge { weight, cost } = row[next].1 {
                            f(y, weight, cost);
                        }
                    } else if let Some(d) = self.default {
                        f(y, d.weight, d.cost);
                    }
                }
            }
        }
    }

    /// All edges of `G` in increasing pair order.
    pub fn edges(&self) -> Vec<(Pair, u64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &(v, w) in list {
                if u < v {
                    out.push((Pair { u, v }, w));
                }
            }
        }
        out
    }

    /// All non-edges in increasing pair order.
    pub fn non_edges(&self) -> Vec<Pair> {
        let mut out = Vec::new();
        for u in 0..self.n {
            self.for_each_non_edge(u, |v, _, _| {
                if u < v {
                    out.push(Pair { u, v });
                }
            });
        }
        out
    }

    /// Reports every violated invariant; an empty report means valid.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut missing = 0usize;
        let mut max_weight = 0u64;
        for u in 0..self.n {
            for v in u + 1..self.n {
                match self.pair(u, v) {
                    None => missing += 1,
                    Some(attr) => {
                        max_weight = max_weight.max(attr.weight());
                        if let PairAttr::NonEdge { cost, .. } = attr {
                            if cost == 0 {
                                violations.push(Violation::CostNotPositive(Pair { u, v }));
                            }
                        }
                    }
                }
            }
        }
        if missing > 0 {
            violations.push(Violation::WeightNotTotal { missing });
        }
        if (self.n as u128) * (max_weight as u128) >= DISTANCE_HEADROOM as u128 {
            violations.push(Violation::Headroom { n: self.n, max_weight });
        }
        ValidationReport { violations }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WeightNotTotal { missing: usize },
    CostNotPositive(Pair),
    Headroom { n: usize, max_weight: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WeightNotTotal { missing } => {
                write!(f, "weight not total ({missing} pairs have no weight)")
            }
            Violation::CostNotPositive(p) => write!(f, "cost must be ≥ 1 on non-edge {p}"),
            Violation::Headroom { n, max_weight } => {
                write!(f, "n · max weight = {n} · {max_weight} exceeds 2^62")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

pub type Adjacency = [Vec<(VertexId, u64)>];

/// Dijkstra over an adjacency list; unreachable vertices are `+inf`.
pub fn sssp_adjacency(adj: &Adjacency, source: VertexId) -> Vec<Dist> {
    let mut dist = vec![Dist::INF; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Dist::ZERO;
    heap.push(Reverse((0u64, source)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if Dist(d) > dist[x] {
            continue;
        }
        for &(y, w) in &adj[x] {
            let nd = d + w;
            if Dist(nd) < dist[y] {
                dist[y] = Dist(nd);
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

/// Shortest distances in `G` from `source`.
pub fn sssp(instance: &WeightedInstance, source: VertexId) -> Vec<Dist> {
    sssp_adjacency(&instance.adj, source)
}

pub fn diameter_of(adj: &Adjacency) -> Dist {
    (0..adj.len())
        .into_par_iter()
        .map(|s| sssp_adjacency(adj, s).into_iter().max().unwrap_or(Dist::ZERO))
        .max()
        .unwrap_or(Dist::ZERO)
}

pub fn diameter(instance: &WeightedInstance) -> Dist {
    diameter_of(&instance.adj)
}

/// Adjacency of `(V, E ∪ added)`; each added pair carries its `w` weight.
pub fn augmented_adjacency(instance: &WeightedInstance, added: &[Pair]) -> Vec<Vec<(VertexId, u64)>> {
    let mut adj = instance.adj.clone();
    for p in added {
        let w = instance.weight(p.u, p.v).expect("added pair must have a weight");
        adj[p.u].push((p.v, w));
        adj[p.v].push((p.u, w));
    }
    adj
}

pub fn augmented_diameter(instance: &WeightedInstance, added: &[Pair]) -> Dist {
    diameter_of(&augmented_adjacency(instance, added))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AugmentationError {
    #[error("pair {0} is already an edge of the graph")]
    NotANonEdge(Pair),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
}

/// A set `F` of inserted non-edges with its cost and the resulting diameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation {
    pub added: Vec<Pair>,
    pub total_cost: u64,
    pub diameter: Dist,
}

impl Augmentation {
    /// Deduplicates and sorts `pairs`, then measures cost and diameter.
    pub fn evaluate(
        instance: &WeightedInstance,
        pairs: impl IntoIterator<Item = Pair>,
    ) -> Result<Augmentation, AugmentationError> {
        let added: Vec<Pair> = pairs.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut total_cost = 0u64;
        for p in &added {
            if p.v >= instance.n() {
                return Err(AugmentationError::VertexOutOfRange { vertex: p.v, n: instance.n() });
            }
            match instance.cost(p.u, p.v) {
                Some(c) => total_cost += c,
                None => return Err(AugmentationError::NotANonEdge(*p)),
            }
        }
        let diameter = augmented_diameter(instance, &added);
        Ok(Augmentation { added, total_cost, diameter })
    }

    pub fn within_budget(&self, instance: &WeightedInstance) -> bool {
        self.total_cost <= instance.budget()
    }
}
