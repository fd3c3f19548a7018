//! Minimum-height augmented shortest-path trees over the cluster centers, and
//! the `(1, 4)`-approximation built on them.
//!
//! `γ(u, S, j)` is the least height of a tree rooted at `u` that reaches every
//! center in `S` using bounded-cost paths whose budgets sum to `j`:
//!
//! ```text
//! γ(u, {c}, j) = D[j][u][c]
//! γ(u, S, j)   = min over v, ∅ ≠ S' ⊊ S, j1 + j2 + j3 = j of
//!                D[j1][u][v] + max(γ(v, S', j2), γ(v, S \ S', j3))
//! ```
//!
//! The table is filled by increasing `|S|`. For each `(S, v)` the inner
//! `min over S', j2 of max(...)` is tabulated once per remaining budget and then
//! combined with every `(u, j1)`, which gives the same minimum and tie-break as
//! the direct triple loop.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bounded_paths::{apsp_b, BoundedCostDistances, PathError, SourceWitnesses};
use crate::clustering::{greedy_centers, ClusterCenters};
use crate::graph::{Augmentation, Dist, Pair, ValidationReport, VertexId, WeightedInstance};

/// Bitmask over the non-root centers; bit `i` is the `(i+2)`-th selected center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CenterSubset(u32);

impl CenterSubset {
    pub const MAX_CENTERS: usize = 24;

    pub fn from_bits(bits: u32) -> CenterSubset {
        CenterSubset(bits)
    }

    pub fn full(count: usize) -> CenterSubset {
        assert!(count <= Self::MAX_CENTERS);
        CenterSubset(((1u64 << count) - 1) as u32)
    }

    pub fn singleton(index: usize) -> CenterSubset {
        CenterSubset(1 << index)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn minus(self, other: CenterSubset) -> CenterSubset {
        CenterSubset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: CenterSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// Proper non-empty subsets containing the lowest element, ascending.
    fn anchored_parts(self) -> Vec<CenterSubset> {
        let low = self.0 & self.0.wrapping_neg();
        let rest = self.0 ^ low;
        let mut parts = Vec::new();
        let mut sub = rest;
        loop {
            if sub != rest {
                parts.push(CenterSubset(sub | low));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        parts.sort_unstable();
        parts
    }
}

/// The argmin recorded for a finite table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    /// `|S| = 1`: a single bounded-cost path to `center`.
    Base { center: VertexId },
    /// Path `u → via` with budget `j1`, then subtrees for `part` (budget `j2`)
    /// and the rest of `S` (budget `j3`), both rooted at `via`.
    Split { via: VertexId, part: CenterSubset, j1: usize, j2: usize, j3: usize },
}

/// Which structural case of an optimal tree a split realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitCase {
    /// The root itself branches.
    RootBranch,
    /// A path to a center, which then roots the remaining centers.
    PathToCenter,
    /// A path to a non-center branching vertex.
    PathToBranch,
}

#[derive(Clone, Debug)]
pub struct DpTable {
    n: usize,
    layers: usize,
    /// `C' = C \ {c_1}` in selection order.
    centers: Vec<VertexId>,
    gamma: Vec<Dist>,
    back: Vec<Option<Choice>>,
}

impl DpTable {
    fn index(&self, u: VertexId, set: CenterSubset, j: usize) -> usize {
        debug_assert!(!set.is_empty());
        (set.0 as usize * self.layers + j) * self.n + u
    }

    pub fn centers(&self) -> &[VertexId] {
        &self.centers
    }

    pub fn full_set(&self) -> CenterSubset {
        CenterSubset::full(self.centers.len())
    }

    pub fn budget(&self) -> usize {
        self.layers - 1
    }

    pub fn gamma(&self, u: VertexId, set: CenterSubset, j: usize) -> Dist {
        self.gamma[self.index(u, set, j)]
    }

    pub fn choice(&self, u: VertexId, set: CenterSubset, j: usize) -> Option<Choice> {
        self.back[self.index(u, set, j)]
    }

    pub fn members(&self, set: CenterSubset) -> Vec<VertexId> {
        set.indices().map(|i| self.centers[i]).collect()
    }

    pub fn classify(&self, u: VertexId, set: CenterSubset, choice: &Choice) -> Option<SplitCase> {
        match *choice {
            Choice::Base { .. } => None,
            Choice::Split { via, part, .. } => {
                let rest = set.minus(part);
                let single_center = |s: CenterSubset| s.len() == 1 && self.members(s) == [via];
                Some(if via == u {
                    SplitCase::RootBranch
                } else if single_center(part) || single_center(rest) {
                    SplitCase::PathToCenter
                } else {
                    SplitCase::PathToBranch
                })
            }
        }
    }

    /// Every recorded split with its case, for all finite entries.
    pub fn split_cases(&self) -> Vec<SplitCase> {
        let mut out = Vec::new();
        for bits in 1..1u32 << self.centers.len() {
            let set = CenterSubset(bits);
            for j in 0..self.layers {
                for u in 0..self.n {
                    if let Some(choice) = self.choice(u, set, j) {
                        out.extend(self.classify(u, set, &choice));
                    }
                }
            }
        }
        out
    }
}

type Cell = (Dist, Option<Choice>);

/// Fills `γ(u, S, j)` for every vertex, non-empty `S ⊆ C'`, and `j ≤ B`.
///
/// Ties go to the smallest `(v, S', j1, j2)`, with `S'` restricted to subsets
/// holding the lowest member of `S` (the two halves are interchangeable).
pub fn solve_gamma(instance: &WeightedInstance, centers: &ClusterCenters, dists: &BoundedCostDistances) -> DpTable {
    let n = instance.n();
    let layers = dists.budget() + 1;
    let rest: Vec<VertexId> = centers.centers[1..].to_vec();
    let k = rest.len();
    assert!(k <= CenterSubset::MAX_CENTERS, "too many centers for the subset table");
    let slab = layers * n;
    let mut table = DpTable {
        n,
        layers,
        centers: rest,
        gamma: vec![Dist::INF; (1usize << k) * slab],
        back: vec![None; (1usize << k) * slab],
    };

    for size in 1..=k {
        let masks: Vec<u32> = (1..1u32 << k).filter(|m| m.count_ones() as usize == size).collect();
        let slabs: Vec<Vec<Cell>> = masks
            .par_iter()
            .map(|&m| {
                let set = CenterSubset(m);
                if size == 1 {
                    base_slab(&table, dists, set)
                } else {
                    split_slab(&table, dists, set)
                }
            })
            .collect();
        for (m, cells) in masks.into_iter().zip(slabs) {
            let start = m as usize * slab;
            for (offset, (g, b)) in cells.into_iter().enumerate() {
                table.gamma[start + offset] = g;
                table.back[start + offset] = b;
            }
        }
    }
    table
}

fn base_slab(table: &DpTable, dists: &BoundedCostDistances, set: CenterSubset) -> Vec<Cell> {
    let center = table.centers[set.indices().next().unwrap()];
    let mut cells = Vec::with_capacity(table.layers * table.n);
    for j in 0..table.layers {
        for u in 0..table.n {
            let d = dists.get(j, u, center);
            cells.push((d, d.is_finite().then_some(Choice::Base { center })));
        }
    }
    cells
}

fn split_slab(table: &DpTable, dists: &BoundedCostDistances, set: CenterSubset) -> Vec<Cell> {
    let (n, layers) = (table.n, table.layers);
    let parts = set.anchored_parts();

    // join[v][j'] = min over (S', j2) of max(γ(v,S',j2), γ(v,S\S',j'-j2))
    let mut join: Vec<(Dist, CenterSubset, usize)> = vec![(Dist::INF, CenterSubset(0), 0); n * layers];
    for v in 0..n {
        for jp in 0..layers {
            let best = &mut join[v * layers + jp];
            for &part in &parts {
                let other = set.minus(part);
                for j2 in 0..=jp {
                    let value = table.gamma(v, part, j2).max(table.gamma(v, other, jp - j2));
                    if value < best.0 {
                        *best = (value, part, j2);
                    }
                }
            }
        }
    }

    let mut cells = Vec::with_capacity(layers * n);
    for j in 0..layers {
        for u in 0..n {
            let mut best = Dist::INF;
            let mut arg: Option<(VertexId, CenterSubset, usize, usize)> = None;
            for v in 0..n {
                for j1 in 0..=j {
                    let d = dists.get(j1, u, v);
                    let (m, part, j2) = join[v * layers + (j - j1)];
                    if !d.is_finite() || !m.is_finite() {
                        continue;
                    }
                    let value = d + m;
                    let tuple = (v, part, j1, j2);
                    if value < best || (value == best && arg.is_some_and(|a| tuple < a)) {
                        best = value;
                        arg = Some(tuple);
                    }
                }
            }
            let choice = arg.map(|(via, part, j1, j2)| Choice::Split { via, part, j1, j2, j3: j - j1 - j2 });
            cells.push((best, choice));
        }
    }
    cells
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub vertex: VertexId,
    /// How many earlier tree nodes carry the same vertex.
    pub occurrence: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub weight: u64,
    /// The inserted pair and its cost, when this hop is a non-edge of `G`.
    pub non_edge: Option<(Pair, u64)>,
}

/// A rooted tree whose nodes are vertex occurrences; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugTree {
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge>,
}

impl AugTree {
    pub fn root(&self) -> VertexId {
        self.nodes[0].vertex
    }

    /// Largest root-to-node weight.
    pub fn height(&self) -> u64 {
        let mut depth = vec![0u64; self.nodes.len()];
        // edges are created parent-first
        for e in &self.edges {
            depth[e.child] = depth[e.parent] + e.weight;
        }
        depth.into_iter().max().unwrap_or(0)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.nodes.iter().map(|n| n.vertex).collect()
    }

    pub fn non_edges(&self) -> BTreeSet<Pair> {
        self.edges.iter().filter_map(|e| e.non_edge.map(|(p, _)| p)).collect()
    }

    /// Cost of the distinct non-edges used.
    pub fn distinct_cost(&self) -> u64 {
        let mut seen = BTreeSet::new();
        self.edges.iter().filter_map(|e| e.non_edge).filter(|(p, _)| seen.insert(*p)).map(|(_, c)| c).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("entry ({u}, {set:?}, {j}) is infeasible")]
    Infeasible { u: VertexId, set: CenterSubset, j: usize },
    #[error(transparent)]
    Path(#[from] PathError),
}

struct TreeBuilder<'a> {
    instance: &'a WeightedInstance,
    table: &'a DpTable,
    witnesses: HashMap<VertexId, SourceWitnesses>,
    occurrences: HashMap<VertexId, usize>,
    tree: AugTree,
}

impl TreeBuilder<'_> {
    fn add_node(&mut self, vertex: VertexId) -> usize {
        let count = self.occurrences.entry(vertex).or_insert(0);
        self.tree.nodes.push(TreeNode { vertex, occurrence: *count });
        *count += 1;
        self.tree.nodes.len() - 1
    }

    /// Appends the witness path `u → v` under node `at`; returns the node of `v`.
    fn graft_path(&mut self, at: usize, u: VertexId, v: VertexId, beta: usize) -> Result<usize, TreeError> {
        if u == v {
            return Ok(at);
        }
        let instance = self.instance;
        let path =
            self.witnesses.entry(u).or_insert_with(|| SourceWitnesses::new(instance, u)).path_to(instance, v, beta)?;
        let mut current = at;
        for hop in path.vertices.windows(2) {
            let (a, b) = (hop[0], hop[1]);
            if a == b {
                continue;
            }
            let child = self.add_node(b);
            let weight = instance.weight(a, b).expect("pair weight");
            let non_edge = instance.cost(a, b).map(|c| (Pair::new(a, b), c));
            self.tree.edges.push(TreeEdge { parent: current, child, weight, non_edge });
            current = child;
        }
        Ok(current)
    }

    fn expand(&mut self, at: usize, u: VertexId, set: CenterSubset, j: usize) -> Result<(), TreeError> {
        match self.table.choice(u, set, j) {
            None => Err(TreeError::Infeasible { u, set, j }),
            Some(Choice::Base { center }) => self.graft_path(at, u, center, j).map(|_| ()),
            Some(Choice::Split { via, part, j1, j2, j3 }) => {
                let mid = self.graft_path(at, u, via, j1)?;
                self.expand(mid, via, part, j2)?;
                self.expand(mid, via, set.minus(part), j3)
            }
        }
    }
}

/// Follows back-pointers from `(u, set, j)`; the tree's height equals `γ(u, set, j)`.
pub fn reconstruct_tree(
    table: &DpTable,
    instance: &WeightedInstance,
    u: VertexId,
    set: CenterSubset,
    j: usize,
) -> Result<AugTree, TreeError> {
    let mut builder = TreeBuilder {
        instance,
        table,
        witnesses: HashMap::new(),
        occurrences: HashMap::new(),
        tree: AugTree { nodes: Vec::new(), edges: Vec::new() },
    };
    let root = builder.add_node(u);
    builder.expand(root, u, set, j)?;
    Ok(builder.tree)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub phases: Vec<(&'static str, Duration)>,
}

impl PhaseTimings {
    pub fn record<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.phases.push((name, start.elapsed()));
        out
    }

    pub fn total(&self) -> Duration {
        self.phases.iter().map(|(_, d)| *d).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),
    #[error("first center {first} out of range for n = {n}")]
    FirstCenterOutOfRange { first: VertexId, n: usize },
    #[error("budget {0} needs more than {max} centers", max = CenterSubset::MAX_CENTERS + 1)]
    BudgetTooLarge(u64),
}

#[derive(Clone, Debug)]
pub struct FptOutcome {
    pub augmentation: Augmentation,
    pub centers: ClusterCenters,
    /// `γ(c_1, C', B)`; zero when there is nothing to connect.
    pub gamma_height: Dist,
    /// Set when `γ(c_1, C', B)` is infinite and only a partial tree was used.
    pub infeasible_height: bool,
    pub tree: Option<AugTree>,
    pub timings: PhaseTimings,
}

pub(crate) fn check_instance(instance: &WeightedInstance, first_center: VertexId) -> Result<(), SolveError> {
    let report = instance.validate();
    if !report.is_valid() {
        return Err(SolveError::InvalidInstance(report));
    }
    if first_center >= instance.n() {
        return Err(SolveError::FirstCenterOutOfRange { first: first_center, n: instance.n() });
    }
    Ok(())
}

/// Bounded-cost APSP, clustering, the subset DP at `(c_1, C', B)`, and the
/// non-edges of the reconstructed tree.
pub fn fpt_solve(instance: &WeightedInstance, first_center: VertexId) -> Result<FptOutcome, SolveError> {
    check_instance(instance, first_center)?;
    let budget = instance.budget();
    if budget > CenterSubset::MAX_CENTERS as u64 && (instance.n() as u64) > CenterSubset::MAX_CENTERS as u64 + 1 {
        return Err(SolveError::BudgetTooLarge(budget));
    }
    let mut timings = PhaseTimings::default();
    let centers = timings.record("clustering", || greedy_centers(instance, first_center));

    if centers.centers.len() <= 1 {
        let augmentation = timings.record("diameter", || Augmentation::evaluate(instance, []).expect("empty set"));
        return Ok(FptOutcome {
            augmentation,
            centers,
            gamma_height: Dist::ZERO,
            infeasible_height: false,
            tree: None,
            timings,
        });
    }

    let dists = timings.record("apsp", || apsp_b(instance));
    let table = timings.record("dp", || solve_gamma(instance, &centers, &dists));
    let root = centers.first();
    let b = dists.budget();
    let full = table.full_set();
    let gamma_height = table.gamma(root, full, b);

    let target = if gamma_height.is_finite() {
        Some(full)
    } else {
        // largest reachable subset, smallest mask among equals
        (1..=full.bits())
            .map(CenterSubset)
            .filter(|s| table.gamma(root, *s, b).is_finite())
            .max_by_key(|s| (s.len(), std::cmp::Reverse(s.bits())))
    };
    let tree = timings.record("reconstruct", || {
        target.map(|set| reconstruct_tree(&table, instance, root, set, b).expect("finite entry reconstructs"))
    });
    let added: Vec<Pair> = tree.as_ref().map(|t| t.non_edges().into_iter().collect()).unwrap_or_default();
    let augmentation =
        timings.record("diameter", || Augmentation::evaluate(instance, added).expect("tree uses non-edges only"));
    Ok(FptOutcome { augmentation, centers, gamma_height, infeasible_height: !gamma_height.is_finite(), tree, timings })
}
