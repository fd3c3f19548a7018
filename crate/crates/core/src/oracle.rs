//! Brute-force ground truth: exact optimum by subset enumeration, bounded-cost
//! path search by simple-path enumeration, and minimum SPT height over all
//! augmentations. Guards refuse work instead of truncating it.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Dist, Pair, VertexId, WeightedInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_non_edges: usize,
    /// Cap on candidate sets (or search nodes) an oracle may visit.
    pub max_candidates: u64,
    pub max_path_vertices: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_non_edges: 28, max_candidates: 20_000_000, max_path_vertices: 8 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large: {0}")]
    TooLarge(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub best_f: Vec<Pair>,
    pub best_diameter: Dist,
    pub explored: u64,
}

/// All-pairs distances, updated in place as pairs are inserted.
#[derive(Clone)]
struct DistMatrix {
    n: usize,
    d: Vec<u64>,
}

const UNREACHED: u64 = u64::MAX;

impl DistMatrix {
    fn of(instance: &WeightedInstance) -> DistMatrix {
        let n = instance.n();
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            d.extend(crate::graph::sssp(instance, s).into_iter().map(|x| x.value().unwrap_or(UNREACHED)));
        }
        DistMatrix { n, d }
    }

    fn get(&self, x: VertexId, y: VertexId) -> u64 {
        self.d[x * self.n + y]
    }

    fn insert(&mut self, p: VertexId, q: VertexId, w: u64) {
        let n = self.n;
        let (col_p, col_q): (Vec<u64>, Vec<u64>) = (0..n).map(|x| (self.get(x, p), self.get(x, q))).unzip();
        for x in 0..n {
            let (xp, xq) = (col_p[x], col_q[x]);
            if xp == UNREACHED && xq == UNREACHED {
                continue;
            }
            for y in 0..n {
                let via_pq = xp.saturating_add(w).saturating_add(col_q[y]);
                let via_qp = xq.saturating_add(w).saturating_add(col_p[y]);
                let cell = &mut self.d[x * n + y];
                *cell = (*cell).min(via_pq).min(via_qp);
            }
        }
    }

    fn diameter(&self) -> Dist {
        let m = self.d.iter().copied().max().unwrap_or(0);
        if m == UNREACHED {
            Dist::INF
        } else {
            Dist::finite(m)
        }
    }

    fn dist(&self, x: VertexId, y: VertexId) -> Dist {
        match self.get(x, y) {
            UNREACHED => Dist::INF,
            v => Dist::finite(v),
        }
    }
}

struct Candidate {
    pair: Pair,
    weight: u64,
    cost: u64,
}

fn candidates(instance: &WeightedInstance) -> Vec<Candidate> {
    instance
        .non_edges()
        .into_iter()
        .map(|pair| Candidate {
            pair,
            weight: instance.weight(pair.u, pair.v).unwrap(),
            cost: instance.cost(pair.u, pair.v).unwrap(),
        })
        .collect()
}

/// Number of subsets with total cost ≤ `budget`, saturating at `cap + 1`.
fn count_subsets(items: &[Candidate], budget: u64, cap: u64) -> u64 {
    let b = usize::try_from(budget.min(items.iter().map(|c| c.cost).sum())).unwrap_or(usize::MAX);
    let mut ways = vec![0u64; b + 1];
    ways[0] = 1;
    for item in items {
        let c = item.cost as usize;
        for total in (c..=b).rev() {
            ways[total] = ways[total].saturating_add(ways[total - c]).min(cap + 1);
        }
    }
    ways.iter().fold(0u64, |acc, &w| acc.saturating_add(w)).min(cap + 1)
}

/// Visits every non-edge subset of cost ≤ `budget` in lexicographic order of
/// the sorted subset, passing the distance matrix of the augmented graph.
fn enumerate_subsets(
    instance: &WeightedInstance,
    budget: u64,
    limits: &OracleLimits,
    mut visit: impl FnMut(&[Pair], &DistMatrix),
) -> Result<u64, OracleError> {
    let items = candidates(instance);
    if items.len() > limits.max_non_edges {
        return Err(OracleError::TooLarge(format!(
            "{} non-edges exceed the limit of {}",
            items.len(),
            limits.max_non_edges
        )));
    }
    let count = count_subsets(&items, budget, limits.max_candidates);
    if count > limits.max_candidates {
        return Err(OracleError::TooLarge(format!(
            "more than {} candidate sets within budget {budget}",
            limits.max_candidates
        )));
    }

    fn walk(
        items: &[Candidate],
        from: usize,
        remaining: u64,
        chosen: &mut Vec<Pair>,
        matrix: &DistMatrix,
        visit: &mut dyn FnMut(&[Pair], &DistMatrix),
    ) {
        visit(chosen, matrix);
        for (i, item) in items.iter().enumerate().skip(from) {
            if item.cost > remaining {
                continue;
            }
            let mut next = matrix.clone();
            next.insert(item.pair.u, item.pair.v, item.weight);
            chosen.push(item.pair);
            walk(items, i + 1, remaining - item.cost, chosen, &next, visit);
            chosen.pop();
        }
    }

    let matrix = DistMatrix::of(instance);
    walk(&items, 0, budget, &mut Vec::new(), &matrix, &mut visit);
    Ok(count)
}

/// `D^B_opt` with the lexicographically smallest optimal `F`.
pub fn exact_optimum(instance: &WeightedInstance, limits: &OracleLimits) -> Result<ExactResult, OracleError> {
    let mut best: Option<(Dist, Vec<Pair>)> = None;
    let explored = enumerate_subsets(instance, instance.budget(), limits, |chosen, matrix| {
        let d = matrix.diameter();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, chosen.to_vec()));
        }
    })?;
    let (best_diameter, best_f) = best.expect("the empty set is always a candidate");
    Ok(ExactResult { best_f, best_diameter, explored })
}

/// Minimum weight of a simple `u–v` path in the complete graph whose
/// non-edges cost at most `beta` in total.
pub fn path_oracle(
    instance: &WeightedInstance,
    u: VertexId,
    v: VertexId,
    beta: u64,
    limits: &OracleLimits,
) -> Result<Dist, OracleError> {
    let n = instance.n();
    if n > limits.max_path_vertices {
        return Err(OracleError::TooLarge(format!(
            "{n} vertices exceed the path limit of {}",
            limits.max_path_vertices
        )));
    }
    if u == v {
        return Ok(Dist::ZERO);
    }

    fn dfs(
        instance: &WeightedInstance,
        at: VertexId,
        target: VertexId,
        remaining: u64,
        weight: u64,
        on_path: &mut Vec<bool>,
        best: &mut Option<u64>,
    ) {
        for next in 0..instance.n() {
            if on_path[next] {
                continue;
            }
            let w = instance.weight(at, next).unwrap();
            let spend = instance.cost(at, next).unwrap_or(0);
            if spend > remaining {
                continue;
            }
            let total = weight + w;
            if next == target {
                if best.is_none_or(|b| total < b) {
                    *best = Some(total);
                }
                continue;
            }
            on_path[next] = true;
            dfs(instance, next, target, remaining - spend, total, on_path, best);
            on_path[next] = false;
        }
    }

    let mut on_path = vec![false; n];
    on_path[u] = true;
    let mut best = None;
    dfs(instance, u, v, beta, 0, &mut on_path, &mut best);
    Ok(best.map_or(Dist::INF, Dist::finite))
}

/// Least `max_{c ∈ targets} dist(root, c)` over all augmentations of cost ≤ `budget`.
pub fn mhspt_oracle(
    instance: &WeightedInstance,
    targets: &[VertexId],
    root: VertexId,
    budget: u64,
    limits: &OracleLimits,
) -> Result<Dist, OracleError> {
    let mut best = Dist::INF;
    enumerate_subsets(instance, budget, limits, |_, matrix| {
        let height = targets.iter().map(|&c| matrix.dist(root, c)).max().unwrap_or(Dist::ZERO);
        best = best.min(height);
    })?;
    Ok(best)
}

/// Searches for `F` with cost ≤ `B` and diameter ≤ `target`.
///
/// Bounded search tree: any solution must put a non-edge on a short path for
/// the first pair still farther apart than `target`, so the search branches
/// only over those non-edges. Complete, so `None` proves infeasibility.
pub fn feasible_diameter(
    instance: &WeightedInstance,
    target: u64,
    limits: &OracleLimits,
) -> Result<Option<Vec<Pair>>, OracleError> {
    let items = candidates(instance);
    let min_weight = items.iter().map(|c| c.weight).min().unwrap_or(0);
    let mut search = FeasibleSearch {
        items: &items,
        target,
        min_weight,
        nodes: 0,
        limit: limits.max_candidates,
        seen: HashSet::new(),
    };
    let mut chosen = Vec::new();
    let found = search.branch(&DistMatrix::of(instance), instance.budget(), &mut chosen)?;
    Ok(found.then(|| {
        chosen.sort_unstable();
        chosen
    }))
}

struct FeasibleSearch<'a> {
    items: &'a [Candidate],
    target: u64,
    min_weight: u64,
    nodes: u64,
    limit: u64,
    seen: HashSet<Vec<usize>>,
}

impl FeasibleSearch<'_> {
    fn branch(&mut self, matrix: &DistMatrix, remaining: u64, chosen: &mut Vec<Pair>) -> Result<bool, OracleError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(OracleError::TooLarge(format!("search exceeded {} nodes", self.limit)));
        }
        let n = matrix.n;
        let violating =
            (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).find(|&(x, y)| matrix.get(x, y) > self.target);
        let Some((x, y)) = violating else {
            return Ok(true);
        };

        let mut taken: Vec<usize> = Vec::new();
        for (index, item) in self.items.iter().enumerate() {
            if item.cost > remaining || chosen.contains(&item.pair) {
                continue;
            }
            let left = remaining - item.cost;
            let (p, q, w) = (item.pair.u, item.pair.v, item.weight);
            let useful = [(p, q), (q, p)].into_iter().any(|(near, far)| {
                let after = matrix.get(far, y).min(w.saturating_add(matrix.get(near, y)));
                let tail = if left > 0 { after.min(self.min_weight) } else { after };
                matrix.get(x, near).saturating_add(w).saturating_add(tail) <= self.target
            });
            if !useful {
                continue;
            }
            taken.clear();
            taken.extend(chosen.iter().map(|pair| self.items.iter().position(|c| c.pair == *pair).unwrap()));
            taken.push(index);
            taken.sort_unstable();
            if !self.seen.insert(taken.clone()) {
                continue;
            }
            let mut next = matrix.clone();
            next.insert(p, q, w);
            chosen.push(item.pair);
            if self.branch(&next, left, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::InstanceBuilder;

    fn p4(budget: u64) -> WeightedInstance {
        InstanceBuilder::new(4, budget)
            .default_non_edge(1, 1)
            .edge(0, 1, 1)
            .edge(1, 2, 1)
            .edge(2, 3, 1)
            .build()
            .unwrap()
    }

    #[test]
    fn exact_p4_prefers_smallest_witness() {
        let r = exact_optimum(&p4(1), &OracleLimits::default()).unwrap();
        assert_eq!(r.best_diameter, Dist::finite(2));
        assert_eq!(r.best_f, vec![Pair::new(0, 2)]);
        assert_eq!(r.explored, 4);
    }

    #[test]
    fn exact_zero_budget_is_input_diameter() {
        let r = exact_optimum(&p4(0), &OracleLimits::default()).unwrap();
        assert!(r.best_f.is_empty());
        assert_eq!(r.best_diameter, Dist::finite(3));
        let k3 = InstanceBuilder::new(3, 5).edge(0, 1, 1).edge(1, 2, 1).edge(0, 2, 1).build().unwrap();
        let r = exact_optimum(&k3, &OracleLimits::default()).unwrap();
        assert_eq!((r.best_f.len(), r.best_diameter), (0, Dist::finite(1)));
    }

    #[test]
    fn guards_refuse() {
        let tight = OracleLimits { max_non_edges: 2, ..OracleLimits::default() };
        assert!(matches!(exact_optimum(&p4(1), &tight), Err(OracleError::TooLarge(_))));
        let tight = OracleLimits { max_candidates: 3, ..OracleLimits::default() };
        assert!(exact_optimum(&p4(1), &tight).is_err());
        let tight = OracleLimits { max_path_vertices: 3, ..OracleLimits::default() };
        assert!(path_oracle(&p4(1), 0, 3, 1, &tight).is_err());
    }

    #[test]
    fn subset_count_matches_enumeration() {
        let inst = InstanceBuilder::new(5, 3).default_non_edge(1, 2).edge(0, 1, 1).build().unwrap();
        let items = candidates(&inst);
        let mut seen = 0u64;
        let reported = enumerate_subsets(&inst, 3, &OracleLimits::default(), |_, _| seen += 1).unwrap();
        assert_eq!(seen, 1 + items.len() as u64);
        assert_eq!(reported, seen);
    }

    #[test]
    fn incremental_matrix_matches_recomputation() {
        let inst = p4(2);
        let mut m = DistMatrix::of(&inst);
        m.insert(0, 3, 1);
        m.insert(0, 2, 1);
        let fresh = crate::graph::augmented_adjacency(&inst, &[Pair::new(0, 3), Pair::new(0, 2)]);
        for s in 0..4 {
            let row = crate::graph::sssp_adjacency(&fresh, s);
            for (t, &d) in row.iter().enumerate() {
                assert_eq!(m.dist(s, t), d);
            }
        }
    }

    #[test]
    fn path_oracle_examples() {
        let limits = OracleLimits::default();
        assert_eq!(path_oracle(&p4(1), 0, 3, 0, &limits).unwrap(), Dist::finite(3));
        assert_eq!(path_oracle(&p4(1), 0, 3, 1, &limits).unwrap(), Dist::finite(1));
        let split = InstanceBuilder::new(2, 0).non_edge(0, 1, 4, 1).build().unwrap();
        assert_eq!(path_oracle(&split, 0, 1, 0, &limits).unwrap(), Dist::INF);
        assert_eq!(path_oracle(&split, 0, 1, 1, &limits).unwrap(), Dist::finite(4));
    }

    #[test]
    fn mhspt_examples() {
        let limits = OracleLimits::default();
        assert_eq!(mhspt_oracle(&p4(1), &[3], 0, 1, &limits).unwrap(), Dist::finite(1));
        assert_eq!(mhspt_oracle(&p4(1), &[3], 0, 0, &limits).unwrap(), Dist::finite(3));
        assert_eq!(mhspt_oracle(&p4(1), &[2], 2, 1, &limits).unwrap(), Dist::ZERO);
    }

    #[test]
    fn feasibility_agrees_with_exact_on_small_cycles() {
        let limits = OracleLimits::default();
        for n in 4..=7 {
            for budget in 0..=2 {
                let mut b = InstanceBuilder::new(n, budget).default_non_edge(1, 1);
                for i in 0..n {
                    b = b.edge(i, (i + 1) % n, 1);
                }
                let inst = b.build().unwrap();
                let opt = exact_optimum(&inst, &limits).unwrap().best_diameter.value().unwrap();
                for target in 1..=opt {
                    let found = feasible_diameter(&inst, target, &limits).unwrap();
                    assert_eq!(found.is_some(), target >= opt, "n={n} B={budget} target={target}");
                    if let Some(f) = found {
                        assert!(crate::graph::augmented_diameter(&inst, &f) <= Dist::finite(target));
                        assert!(f.len() as u64 <= budget);
                    }
                }
            }
        }
    }
}
