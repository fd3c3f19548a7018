//! Instance generators: Set Cover gadgets with a known diameter profile, their
//! multi-copy variant, and seeded random instances.
//!
//! Gadget layout (unit weights, unit costs, budget `k`, `m = |X|·k`):
//! `a-b`; `b` adjacent to every `y` and every `u`; `Y` and `U` are cliques;
//! `y_x-t_{i,s}` whenever `s ∈ x`; `t_{i,s}-u_{jl}` whenever `i ∈ {j, l}`.
//! Vertices are numbered `a = 0`, `b = 1`, then `Y`, then the `T` blocks in
//! order, then `U` in lexicographic `(i, j)` order.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{sssp, Dist, InstanceBuilder, VertexId, WeightedInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    /// Elements are `0..universe`.
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
    pub k: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid set cover instance: {0}")]
    InvalidSetCover(String),
    #[error("m = |X|·k = {m} leaves no pair vertices; need m ≥ 2")]
    Degenerate { m: usize },
    #[error("need at least 2 copies, got {0}")]
    TooFewCopies(usize),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl SetCoverInstance {
    /// One subset per line as space-separated element ids; blank lines and
    /// `#` comments are skipped. The universe defaults to `max element + 1`.
    pub fn parse(text: &str, k: u64, universe: Option<usize>) -> Result<SetCoverInstance, ReductionError> {
        let mut sets = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let set = content
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| {
                        ReductionError::InvalidSetCover(format!("line {}: invalid element '{tok}'", i + 1))
                    })
                })
                .collect::<Result<BTreeSet<_>, _>>()?;
            sets.push(set.into_iter().collect());
        }
        let universe = universe.unwrap_or_else(|| sets.iter().flatten().map(|&e| e + 1).max().unwrap_or(0));
        let sc = SetCoverInstance { universe, sets, k };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        let bad = |msg: String| Err(ReductionError::InvalidSetCover(msg));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.universe == 0 {
            return bad("the base set is empty".into());
        }
        if self.sets.is_empty() {
            return bad("the family is empty".into());
        }
        for (i, set) in self.sets.iter().enumerate() {
            if set.is_empty() {
                return bad(format!("set {i} is empty"));
            }
            if let Some(&e) = set.iter().find(|&&e| e >= self.universe) {
                return bad(format!("set {i} has element {e} outside 0..{}", self.universe));
            }
            if set.iter().collect::<BTreeSet<_>>().len() != set.len() {
                return bad(format!("set {i} repeats an element"));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.sets.len() * usize::try_from(self.k).unwrap_or(usize::MAX)
    }

    pub fn family_covers(&self) -> bool {
        let covered: BTreeSet<usize> = self.sets.iter().flatten().copied().collect();
        covered.len() == self.universe
    }

    /// Exhaustive decision: is there a subfamily of at most `k` sets covering everything?
    pub fn has_cover(&self) -> bool {
        assert!(self.universe < 64 && self.sets.len() < 64, "exhaustive cover search needs small inputs");
        let full = (1u64 << self.universe) - 1;
        let masks: Vec<u64> = self.sets.iter().map(|s| s.iter().fold(0u64, |m, &e| m | 1 << e)).collect();
        (0u64..1 << masks.len()).any(|pick| {
            pick.count_ones() as u64 <= self.k
                && masks.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).fold(0, |acc, (_, m)| acc | m) == full
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionLayout {
    pub a: VertexId,
    pub b: VertexId,
    pub m: usize,
    pub copies: usize,
    /// `y[copy][set]`.
    pub y: Vec<Vec<VertexId>>,
    /// `t[copy][block][element]`.
    pub t: Vec<Vec<Vec<VertexId>>>,
    /// `(i, j, vertex)` with `i < j`, lexicographic.
    pub u: Vec<(usize, usize, VertexId)>,
    pub budget: u64,
    pub family_covers: bool,
}

impl ReductionLayout {
    pub fn vertex_count(&self) -> usize {
        2 + self.y_vertices().len() + self.t_vertices().len() + self.u.len()
    }

    pub fn y_vertices(&self) -> Vec<VertexId> {
        self.y.iter().flatten().copied().collect()
    }

    pub fn t_vertices(&self) -> Vec<VertexId> {
        self.t.iter().flatten().flatten().copied().collect()
    }

    pub fn u_vertices(&self) -> Vec<VertexId> {
        self.u.iter().map(|&(_, _, v)| v).collect()
    }
}

/// Expected vertex count `2 + c|X| + c|S|m + m(m−1)/2` for `c` copies.
pub fn expected_vertex_count(sc: &SetCoverInstance, copies: usize) -> usize {
    let m = sc.m();
    2 + copies * sc.sets.len() + copies * sc.universe * m + m * (m - 1) / 2
}

fn build(sc: &SetCoverInstance, copies: usize) -> Result<(WeightedInstance, ReductionLayout), ReductionError> {
    sc.validate()?;
    let m = sc.m();
    if m < 2 {
        return Err(ReductionError::Degenerate { m });
    }
    let mut next = 2;
    let mut take = || {
        next += 1;
        next - 1
    };
    let y: Vec<Vec<VertexId>> = (0..copies).map(|_| (0..sc.sets.len()).map(|_| take()).collect()).collect();
    let t: Vec<Vec<Vec<VertexId>>> =
        (0..copies).map(|_| (0..m).map(|_| (0..sc.universe).map(|_| take()).collect()).collect()).collect();
    let mut u = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            u.push((i, j, take()));
        }
    }
    let n = next;
    let budget = sc.k * copies as u64;
    let layout = ReductionLayout { a: 0, b: 1, m, copies, y, t, u, budget, family_covers: sc.family_covers() };

    let mut edges: Vec<(VertexId, VertexId)> = vec![(layout.a, layout.b)];
    let ys = layout.y_vertices();
    let us = layout.u_vertices();
    edges.extend(ys.iter().chain(&us).map(|&v| (layout.b, v)));
    for (i, &p) in ys.iter().enumerate() {
        edges.extend(ys[i + 1..].iter().map(|&q| (p, q)));
    }
    for (i, &p) in us.iter().enumerate() {
        edges.extend(us[i + 1..].iter().map(|&q| (p, q)));
    }
    for copy in 0..copies {
        for (x, set) in sc.sets.iter().enumerate() {
            for block in 0..m {
                edges.extend(set.iter().map(|&s| (layout.y[copy][x], layout.t[copy][block][s])));
            }
        }
        for block in 0..m {
            for &(i, j, uv) in &layout.u {
                if block == i || block == j {
                    edges.extend(layout.t[copy][block].iter().map(|&tv| (tv, uv)));
                }
            }
        }
    }

    let mut builder = InstanceBuilder::new(n, budget).default_non_edge(1, 1);
    for (p, q) in edges {
        builder = builder.edge(p, q, 1);
    }
    let instance = builder.build().expect("gadget edges are distinct");
    check_reduction(&instance, &layout)?;
    Ok((instance, layout))
}

/// Gadget with budget `k` whose diameter can drop from 3 to 2 exactly when a
/// cover of size `k` exists (for families of at least three sets).
pub fn reduce_setcover(sc: &SetCoverInstance) -> Result<(WeightedInstance, ReductionLayout), ReductionError> {
    build(sc, 1)
}

/// `copies` disjoint copies of `Y` and `T` sharing one `U` and one clique over
/// all `Y` copies; budget `k · copies`.
pub fn reduce_setcover_multicopy(
    sc: &SetCoverInstance,
    copies: usize,
) -> Result<(WeightedInstance, ReductionLayout), ReductionError> {
    if copies < 2 {
        return Err(ReductionError::TooFewCopies(copies));
    }
    build(sc, copies)
}

/// Verifies diameter 3 and the distance profile of `a`: 1 to `b`, 2 to `Y ∪ U`,
/// 3 to `T`; and, when the family covers the base set, that every pair avoiding
/// `a` is within distance 2.
pub fn check_reduction(instance: &WeightedInstance, layout: &ReductionLayout) -> Result<(), ReductionError> {
    let fail = |msg: String| Err(ReductionError::SelfCheck(msg));
    if instance.n() != layout.vertex_count() {
        return fail(format!("{} vertices, layout has {}", instance.n(), layout.vertex_count()));
    }
    let from_a = sssp(instance, layout.a);
    let expect = |v: VertexId, d: u64, what: &str| -> Result<(), ReductionError> {
        if from_a[v] == Dist::finite(d) {
            Ok(())
        } else {
            Err(ReductionError::SelfCheck(format!("dist(a, {what} {v}) = {}, expected {d}", from_a[v])))
        }
    };
    expect(layout.b, 1, "b")?;
    for v in layout.y_vertices() {
        expect(v, 2, "y")?;
    }
    for v in layout.u_vertices() {
        expect(v, 2, "u")?;
    }
    for v in layout.t_vertices() {
        expect(v, 3, "t")?;
    }
    let mut diameter = from_a.iter().copied().max().unwrap_or(Dist::ZERO);
    for s in 1..instance.n() {
        let row = sssp(instance, s);
        if layout.family_covers {
            if let Some(v) = (1..instance.n()).find(|&v| row[v] > Dist::finite(2)) {
                return fail(format!("dist({s}, {v}) = {} exceeds 2", row[v]));
            }
        }
        diameter = diameter.max(row.into_iter().max().unwrap_or(Dist::ZERO));
    }
    if diameter != Dist::finite(3) {
        return fail(format!("diameter {diameter}, expected 3"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub edge_probability: f64,
    pub max_weight: u64,
    pub max_cost: u64,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid generator parameter: {0}")]
pub struct GenError(pub String);

/// Erdős–Rényi edges with weights uniform in `[1, max_weight]`; every non-edge
/// shares one default weight and cost drawn up front.
///
/// Stream: ChaCha8 seeded from `seed`; draws are the default weight, the
/// default cost, then per pair `u < v` in lexicographic order a Bernoulli
/// trial followed by the edge weight when it succeeds.
pub fn gen_random(params: &RandomParams) -> Result<WeightedInstance, GenError> {
    let RandomParams { n, edge_probability: p, max_weight, max_cost, budget, seed } = *params;
    if n == 0 {
        return Err(GenError("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError(format!("edge probability {p} outside [0, 1]")));
    }
    if max_weight == 0 || max_cost == 0 {
        return Err(GenError("max weight and max cost must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let default_weight = rng.random_range(1..=max_weight);
    let default_cost = rng.random_range(1..=max_cost);
    let mut builder = InstanceBuilder::new(n, budget).default_non_edge(default_weight, default_cost);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                builder = builder.edge(u, v, rng.random_range(1..=max_weight));
            }
        }
    }
    let instance = builder.build().map_err(|e| GenError(e.to_string()))?;
    let report = instance.validate();
    if !report.is_valid() {
        return Err(GenError(report.to_string()));
    }
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::diameter;

    fn base() -> SetCoverInstance {
        SetCoverInstance { universe: 2, sets: vec![vec![0], vec![0, 1]], k: 1 }
    }

    #[test]
    fn base_example_layout() {
        let (inst, layout) = reduce_setcover(&base()).unwrap();
        assert_eq!(inst.n(), 9);
        assert_eq!(layout.vertex_count(), expected_vertex_count(&base(), 1));
        assert_eq!(diameter(&inst), Dist::finite(3));
        assert_eq!(inst.budget(), 1);
        assert_eq!(layout.y, vec![vec![2, 3]]);
        assert_eq!(layout.t, vec![vec![vec![4, 5], vec![6, 7]]]);
        assert_eq!(layout.u, vec![(0, 1, 8)]);
        // y for {0} touches only element 0 of each block
        assert!(inst.is_edge(2, 4) && !inst.is_edge(2, 5));
        assert!(inst.is_edge(3, 5) && inst.is_edge(5, 8) && inst.is_edge(1, 8));
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let sc = SetCoverInstance { universe: 2, sets: vec![vec![0]], k: 1 };
        assert_eq!(reduce_setcover(&sc).unwrap_err(), ReductionError::Degenerate { m: 1 });
        assert_eq!(reduce_setcover_multicopy(&base(), 1).unwrap_err(), ReductionError::TooFewCopies(1));
        let empty = SetCoverInstance { universe: 2, sets: vec![vec![]], k: 1 };
        assert!(matches!(reduce_setcover(&empty), Err(ReductionError::InvalidSetCover(_))));
    }

    #[test]
    fn uncovered_elements_keep_the_profile_of_a() {
        let sc = SetCoverInstance { universe: 3, sets: vec![vec![0], vec![1]], k: 1 };
        let (inst, layout) = reduce_setcover(&sc).unwrap();
        assert!(!layout.family_covers);
        assert_eq!(diameter(&inst), Dist::finite(3));
    }

    #[test]
    fn multicopy_layout() {
        let (inst, layout) = reduce_setcover_multicopy(&base(), 2).unwrap();
        assert_eq!(layout.budget, 2);
        assert_eq!(layout.y.len(), 2);
        assert!(layout.y.iter().all(|block| block.len() == 2));
        assert_eq!(layout.t.len(), 2);
        assert!(layout.t.iter().all(|copy| copy.len() == 2));
        assert_eq!(inst.n(), expected_vertex_count(&base(), 2));
        assert_eq!(inst.n(), 15);
        // the Y clique spans both copies
        assert!(inst.is_edge(layout.y[0][0], layout.y[1][1]));
        // membership edges stay inside a copy
        assert!(!inst.is_edge(layout.y[0][1], layout.t[1][0][1]));
    }

    #[test]
    fn parses_set_families() {
        let sc = SetCoverInstance::parse("0\n# comment\n0 1\n\n", 1, None).unwrap();
        assert_eq!(sc, base());
        assert!(sc.has_cover());
        let sc = SetCoverInstance::parse("0\n1\n", 1, Some(2)).unwrap();
        assert!(!sc.has_cover());
        assert!(SetCoverInstance { k: 2, ..sc.clone() }.has_cover());
        assert!(SetCoverInstance::parse("0 x\n", 1, None).is_err());
        assert!(SetCoverInstance::parse("0 4\n", 1, Some(3)).is_err());
    }

    #[test]
    fn random_extremes() {
        let k4 =
            gen_random(&RandomParams { n: 4, edge_probability: 1.0, max_weight: 1, max_cost: 1, budget: 1, seed: 3 })
                .unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.non_edges().is_empty());
        let empty =
            gen_random(&RandomParams { n: 5, edge_probability: 0.0, max_weight: 1, max_cost: 1, budget: 2, seed: 3 })
                .unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(empty.non_edges().len(), 10);
        let bad = RandomParams { n: 3, edge_probability: 1.5, max_weight: 1, max_cost: 1, budget: 0, seed: 0 };
        assert!(gen_random(&bad).is_err());
    }
}
