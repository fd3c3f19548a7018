#![allow(dead_code)]

use bcmd::graph::{InstanceBuilder, WeightedInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn path(n: usize, budget: u64) -> WeightedInstance {
    let mut b = InstanceBuilder::new(n, budget).default_non_edge(1, 1);
    for i in 1..n {
        b = b.edge(i - 1, i, 1);
    }
    b.build().unwrap()
}

pub fn p4(budget: u64) -> WeightedInstance {
    path(4, budget)
}

pub fn k3(budget: u64) -> WeightedInstance {
    InstanceBuilder::new(3, budget).edge(0, 1, 1).edge(1, 2, 1).edge(0, 2, 1).build().unwrap()
}

pub fn star5(budget: u64) -> WeightedInstance {
    let mut b = InstanceBuilder::new(5, budget).default_non_edge(1, 1);
    for leaf in 1..5 {
        b = b.edge(0, leaf, 1);
    }
    b.build().unwrap()
}

pub fn cycle(n: usize, budget: u64) -> WeightedInstance {
    let mut b = InstanceBuilder::new(n, budget).default_non_edge(1, 1);
    for i in 0..n {
        b = b.edge(i, (i + 1) % n, 1);
    }
    b.build().unwrap()
}

pub fn two_triangles(budget: u64) -> WeightedInstance {
    InstanceBuilder::new(6, budget)
        .default_non_edge(1, 1)
        .edge(0, 1, 1)
        .edge(1, 2, 1)
        .edge(0, 2, 1)
        .edge(3, 4, 1)
        .edge(4, 5, 1)
        .edge(3, 5, 1)
        .build()
        .unwrap()
}

/// Every pair gets its own weight; non-edges their own cost in `1..=max_cost`.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    budget: u64,
    p: f64,
    max_weight: u64,
    max_cost: u64,
) -> WeightedInstance {
    let mut b = InstanceBuilder::new(n, budget);
    for u in 0..n {
        for v in u + 1..n {
            let w = rng.random_range(0..=max_weight);
            b = if rng.random_bool(p) {
                b.edge(u, v, w)
            } else {
                b.non_edge(u, v, w.max(1), rng.random_range(1..=max_cost))
            };
        }
    }
    b.build().unwrap()
}

/// `count` instances with `n ≤ max_n` and `B ≤ max_budget`, fixed by `seed`.
pub fn random_corpus(seed: u64, count: usize, max_n: usize, max_budget: u64, max_cost: u64) -> Vec<WeightedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_n);
            let budget = rng.random_range(0..=max_budget);
            let p = rng.random_range(0.2..0.8);
            let max_weight = rng.random_range(1..=6);
            random_instance(&mut rng, n, budget, p, max_weight, max_cost)
        })
        .collect()
}

/// Unit-cost instances with `k ≥ 1`.
pub fn unit_cost_corpus(seed: u64, count: usize, max_n: usize, max_k: u64) -> Vec<WeightedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_n);
            let k = rng.random_range(1..=max_k);
            let p = rng.random_range(0.2..0.8);
            let max_weight = rng.random_range(1..=6);
            random_instance(&mut rng, n, k, p, max_weight, 1)
        })
        .collect()
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// All connected labeled graphs on `n` vertices with unit edge weights and the
/// given non-edge default.
pub fn connected_unit_graphs(n: usize, budget: u64, non_edge_weight: u64, non_edge_cost: u64) -> Vec<WeightedInstance> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        if !connected(n, &edges) {
            continue;
        }
        let mut b = InstanceBuilder::new(n, budget).default_non_edge(non_edge_weight, non_edge_cost);
        for (u, v) in edges {
            b = b.edge(u, v, 1);
        }
        out.push(b.build().unwrap());
    }
    out
}

/// Exhaustive unit-weight corpus for `n ≤ max_n`.
pub fn exhaustive_unit_corpus(max_n: usize, budget: u64) -> Vec<WeightedInstance> {
    (1..=max_n).flat_map(|n| connected_unit_graphs(n, budget, 1, 1)).collect()
}
