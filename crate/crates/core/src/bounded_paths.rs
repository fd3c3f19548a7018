//! Bounded-cost shortest paths in the complete graph `K`.
//!
//! A path in `K` may use non-edges of `G` as long as their total cost stays
//! within a per-query budget `β`. These distances are computed by Dijkstra on a
//! layered digraph: `B+1` copies of `G`, where crossing a non-edge of cost `c`
//! jumps `c` layers forward and a weight-0 arc advances each vertex to the next
//! layer. The `(u,0) → (v,β)` distance equals the cheapest `β`-bounded `u–v` path.
//!
//! The digraph is never stored during searches; arcs are generated from the
//! instance on the fly. [`build_layered_digraph`] materializes it for inspection.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Dist, Pair, VertexId, WeightedInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayerNode {
    pub vertex: VertexId,
    pub layer: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    /// Copy of an edge of `G` inside one layer.
    Intra,
    /// A non-edge, jumping forward by its cost.
    NonEdge { cost: u64 },
    /// Weight-0 advance `(v,i) → (v,i+1)`; the image of a self-loop of `K`.
    SelfAdvance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayeredArc {
    pub from: LayerNode,
    pub to: LayerNode,
    pub weight: u64,
    pub kind: ArcKind,
}

#[derive(Clone, Debug)]
pub struct LayeredDigraph {
    pub n: usize,
    pub layers: usize,
    /// Sorted by `(from, to)`.
    pub arcs: Vec<LayeredArc>,
}

impl LayeredDigraph {
    pub fn node_count(&self) -> usize {
        self.n * self.layers
    }

    pub fn count(&self, pred: impl Fn(&LayeredArc) -> bool) -> usize {
        self.arcs.iter().filter(|a| pred(a)).count()
    }
}

fn layer_count(instance: &WeightedInstance) -> usize {
    usize::try_from(instance.budget()).expect("budget too large") + 1
}

fn for_each_out_arc(instance: &WeightedInstance, node: LayerNode, mut f: impl FnMut(LayerNode, u64, ArcKind)) {
    let top = instance.budget();
    let layer = node.layer;
    for &(y, w) in instance.neighbors(node.vertex) {
        f(LayerNode { vertex: y, layer }, w, ArcKind::Intra);
    }
    let room = top - layer as u64;
    instance.for_each_non_edge(node.vertex, |y, w, c| {
        if c <= room {
            f(LayerNode { vertex: y, layer: layer + c as usize }, w, ArcKind::NonEdge { cost: c });
        }
    });
    if (layer as u64) < top {
        f(LayerNode { vertex: node.vertex, layer: layer + 1 }, 0, ArcKind::SelfAdvance);
    }
}

pub fn build_layered_digraph(instance: &WeightedInstance) -> LayeredDigraph {
    let layers = layer_count(instance);
    let mut arcs = Vec::new();
    for layer in 0..layers {
        for vertex in 0..instance.n() {
            let from = LayerNode { vertex, layer };
            for_each_out_arc(instance, from, |to, weight, kind| arcs.push(LayeredArc { from, to, weight, kind }));
        }
    }
    arcs.sort_by_key(|a| (a.from, a.to));
    LayeredDigraph { n: instance.n(), layers, arcs }
}

const NO_PRED: u32 = u32::MAX;

/// Single-source Dijkstra over the implicit layered digraph.
#[derive(Clone, Debug)]
pub struct LayeredSearch {
    n: usize,
    layers: usize,
    source: LayerNode,
    dist: Vec<Dist>,
    pred: Vec<u32>,
}

impl LayeredSearch {
    /// Predecessor ties go to the smallest `(vertex, layer)` among nodes settled earlier.
    pub fn run(instance: &WeightedInstance, source: LayerNode, track_preds: bool) -> LayeredSearch {
        let n = instance.n();
        let layers = layer_count(instance);
        let total = n * layers;
        assert!(total < NO_PRED as usize, "layered digraph too large");
        let index = |x: LayerNode| x.layer * n + x.vertex;
        let key = |x: LayerNode| (x.vertex * layers + x.layer) as u64;
        let node_of = |i: usize| LayerNode { vertex: i % n, layer: i / n };

        let mut dist = vec![Dist::INF; total];
        let mut pred = if track_preds { vec![NO_PRED; total] } else { Vec::new() };
        let mut settled = vec![false; total];
        let mut heap = BinaryHeap::new();
        dist[index(source)] = Dist::ZERO;
        heap.push(Reverse((0u64, key(source), index(source))));

        while let Some(Reverse((d, _, xi))) = heap.pop() {
            if settled[xi] {
                continue;
            }
            settled[xi] = true;
            let x = node_of(xi);
            for_each_out_arc(instance, x, |y, w, _| {
                let yi = index(y);
                if settled[yi] {
                    return;
                }
                let nd = Dist::finite(d + w);
                if nd < dist[yi] {
                    dist[yi] = nd;
                    if track_preds {
                        pred[yi] = xi as u32;
                    }
                    heap.push(Reverse((d + w, key(y), yi)));
                } else if track_preds && nd == dist[yi] && key(x) < key(node_of(pred[yi] as usize)) {
                    pred[yi] = xi as u32;
                }
            });
        }
        LayeredSearch { n, layers, source, dist, pred }
    }

    pub fn source(&self) -> LayerNode {
        self.source
    }

    pub fn dist(&self, node: LayerNode) -> Dist {
        self.dist[node.layer * self.n + node.vertex]
    }

    /// Node sequence of the search tree path to `target`; requires predecessors.
    pub fn node_path(&self, target: LayerNode) -> Option<Vec<LayerNode>> {
        assert!(!self.pred.is_empty(), "search ran without predecessor tracking");
        if !self.dist(target).is_finite() {
            return None;
        }
        let mut cur = target.layer * self.n + target.vertex;
        let src = self.source.layer * self.n + self.source.vertex;
        let mut nodes = vec![target];
        while cur != src {
            cur = self.pred[cur] as usize;
            nodes.push(LayerNode { vertex: cur % self.n, layer: cur / self.n });
        }
        nodes.reverse();
        Some(nodes)
    }

    pub fn layers(&self) -> usize {
        self.layers
    }
}

/// `D[β][source][v]` for every `β ≤ B` and every `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedRow {
    pub source: VertexId,
    n: usize,
    layers: usize,
    dist: Vec<Dist>,
}

impl BoundedRow {
    pub fn get(&self, beta: usize, v: VertexId) -> Dist {
        self.dist[beta * self.n + v]
    }

    pub fn budget(&self) -> usize {
        self.layers - 1
    }

    /// Distances to all vertices under budget `beta`.
    pub fn at_budget(&self, beta: usize) -> &[Dist] {
        &self.dist[beta * self.n..(beta + 1) * self.n]
    }
}

pub fn sssp_b(instance: &WeightedInstance, source: VertexId) -> BoundedRow {
    let search = LayeredSearch::run(instance, LayerNode { vertex: source, layer: 0 }, false);
    BoundedRow { source, n: search.n, layers: search.layers, dist: search.dist }
}

/// The full `(B+1) × n × n` table of bounded-cost distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedCostDistances {
    n: usize,
    layers: usize,
    table: Vec<Dist>,
}

impl BoundedCostDistances {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn budget(&self) -> usize {
        self.layers - 1
    }

    pub fn get(&self, beta: usize, u: VertexId, v: VertexId) -> Dist {
        self.table[(beta * self.n + u) * self.n + v]
    }

    pub fn row(&self, beta: usize, u: VertexId) -> &[Dist] {
        let start = (beta * self.n + u) * self.n;
        &self.table[start..start + self.n]
    }
}

/// One layered search per source, run in parallel; output is order-independent.
pub fn apsp_b(instance: &WeightedInstance) -> BoundedCostDistances {
    let n = instance.n();
    let layers = layer_count(instance);
    let rows: Vec<BoundedRow> = (0..n).into_par_iter().map(|u| sssp_b(instance, u)).collect();
    let mut table = vec![Dist::INF; layers * n * n];
    for row in &rows {
        for beta in 0..layers {
            let start = (beta * n + row.source) * n;
            table[start..start + n].copy_from_slice(row.at_budget(beta));
        }
    }
    BoundedCostDistances { n, layers, table }
}

/// A walk in `K` with the non-edges it inserts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPath {
    pub vertices: Vec<VertexId>,
    /// Distinct non-edges, in order of first use.
    pub non_edges: Vec<Pair>,
    pub weight: u64,
    /// Total cost of the distinct non-edges.
    pub cost: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("no {beta}-bounded-cost path from {u} to {v}")]
    NoPath { beta: usize, u: VertexId, v: VertexId },
}

/// A predecessor-tracking search from `(u, 0)`, reusable for many targets.
#[derive(Clone, Debug)]
pub struct SourceWitnesses {
    search: LayeredSearch,
}

impl SourceWitnesses {
    pub fn new(instance: &WeightedInstance, source: VertexId) -> SourceWitnesses {
        SourceWitnesses { search: LayeredSearch::run(instance, LayerNode { vertex: source, layer: 0 }, true) }
    }

    pub fn source(&self) -> VertexId {
        self.search.source.vertex
    }

    pub fn dist(&self, beta: usize, v: VertexId) -> Dist {
        self.search.dist(LayerNode { vertex: v, layer: beta })
    }

    /// Projects the `(u,0) → (v,β)` search path onto `K`, dropping layer advances.
    pub fn path_to(&self, instance: &WeightedInstance, v: VertexId, beta: usize) -> Result<KPath, PathError> {
        let u = self.source();
        let nodes =
            self.search.node_path(LayerNode { vertex: v, layer: beta }).ok_or(PathError::NoPath { beta, u, v })?;
        let mut vertices = vec![nodes[0].vertex];
        let mut non_edges = Vec::new();
        let mut seen = BTreeSet::new();
        let mut weight = 0u64;
        let mut cost = 0u64;
        for hop in nodes.windows(2) {
            let (a, b) = (hop[0], hop[1]);
            if a.vertex == b.vertex {
                continue;
            }
            weight += instance.weight(a.vertex, b.vertex).expect("pair weight");
            if a.layer != b.layer {
                let p = Pair::new(a.vertex, b.vertex);
                if seen.insert(p) {
                    non_edges.push(p);
                    cost += instance.cost(p.u, p.v).expect("non-edge cost");
                }
            }
            vertices.push(b.vertex);
        }
        Ok(KPath { vertices, non_edges, weight, cost })
    }
}

/// Witness path for `D[β][u][v]`, recomputed by a fresh search from `(u, 0)`.
pub fn reconstruct_path(
    instance: &WeightedInstance,
    dists: &BoundedCostDistances,
    beta: usize,
    u: VertexId,
    v: VertexId,
) -> Result<KPath, PathError> {
    if !dists.get(beta, u, v).is_finite() {
        return Err(PathError::NoPath { beta, u, v });
    }
    let path = SourceWitnesses::new(instance, u).path_to(instance, v, beta)?;
    debug_assert_eq!(Dist::finite(path.weight), dists.get(beta, u, v));
    Ok(path)
}
