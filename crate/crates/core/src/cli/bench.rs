//! Benchmark suites: a quality table against the exact oracle, and a runtime
//! sweep over the budget on a fixed 50-vertex instance.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::fpt::fpt_solve;
use crate::graph::{Dist, WeightedInstance};
use crate::oracle::{exact_optimum, OracleLimits};
use crate::reductions::{gen_random, RandomParams};
use crate::unit_cost::{cluster_spanning_mst, pairwise_centers, star_centers, UnitCostInstance};

use super::report::ratio;

/// Proven diameter factor and insertion-cost limit of each algorithm for budget `k`.
pub fn guarantee(algorithm: &str, k: u64) -> (u64, u64) {
    match algorithm {
        "fpt" => (4, k),
        "pairs" => (3, k * (k + 1) * (k + 1)),
        "star" => (4, k * k),
        "mst" => (3 * k + 2, k),
        other => panic!("no guarantee for '{other}'"),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: &'static str,
    pub n: usize,
    pub budget: u64,
    pub cost: u64,
    pub cost_limit: u64,
    pub diameter: Dist,
    pub optimum: Dist,
    pub ratio: Option<f64>,
    pub bound: u64,
    pub ok: bool,
}

fn small_instances(seed: u64) -> Vec<(String, WeightedInstance)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..24)
        .map(|i| {
            let params = RandomParams {
                n: rng.random_range(5..=7),
                edge_probability: rng.random_range(0.2..0.6),
                max_weight: 4,
                max_cost: if i % 2 == 0 { 1 } else { 2 },
                budget: rng.random_range(1..=3),
                seed: rng.random(),
            };
            (format!("r{i:02}"), gen_random(&params).expect("valid parameters"))
        })
        .collect()
}

fn row(
    name: &str,
    algorithm: &'static str,
    inst: &WeightedInstance,
    cost: u64,
    diameter: Dist,
    optimum: Dist,
) -> BenchRow {
    let (bound, cost_limit) = guarantee(algorithm, inst.budget());
    BenchRow {
        instance: name.to_string(),
        algorithm,
        n: inst.n(),
        budget: inst.budget(),
        cost,
        cost_limit,
        diameter,
        optimum,
        ratio: ratio(diameter, optimum),
        bound,
        ok: cost <= cost_limit && diameter <= optimum.scaled(bound),
    }
}

/// Every algorithm on 24 seeded instances with `n ≤ 7`; unit-cost algorithms
/// only where every non-edge costs 1.
pub fn run_small(seed: u64) -> Vec<BenchRow> {
    small_instances(seed)
        .par_iter()
        .map(|(name, inst)| {
            let optimum =
                exact_optimum(inst, &OracleLimits::default()).expect("small instances fit the oracle").best_diameter;
            let fpt = fpt_solve(inst, 0).expect("valid instance").augmentation;
            let mut rows = vec![row(name, "fpt", inst, fpt.total_cost, fpt.diameter, optimum)];
            if let Ok(unit) = UnitCostInstance::new(inst.clone()) {
                let runs = [
                    ("pairs", pairwise_centers(&unit, 0)),
                    ("star", star_centers(&unit, 0)),
                    ("mst", cluster_spanning_mst(&unit, 0)),
                ];
                for (algo, out) in runs {
                    let aug = out.expect("first center in range").augmentation;
                    rows.push(row(name, algo, inst, aug.added.len() as u64, aug.diameter, optimum));
                }
            }
            rows
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn small_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<9}{:<7}{:>3}{:>3}{:>6}{:>7}{:>10}{:>9}{:>8}{:>7}  status",
        "instance", "algo", "n", "B", "cost", "limit", "diameter", "optimum", "ratio", "bound"
    )
    .unwrap();
    for r in rows {
        let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.3}"));
        writeln!(
            out,
            "{:<9}{:<7}{:>3}{:>3}{:>6}{:>7}{:>10}{:>9}{:>8}{:>7}  {}",
            r.instance,
            r.algorithm,
            r.n,
            r.budget,
            r.cost,
            r.cost_limit,
            r.diameter.to_string(),
            r.optimum.to_string(),
            ratio,
            r.bound,
            if r.ok { "ok" } else { "VIOLATION" }
        )
        .unwrap();
    }
    for algo in ["fpt", "pairs", "star", "mst"] {
        let ratios: Vec<f64> = rows.iter().filter(|r| r.algorithm == algo).filter_map(|r| r.ratio).collect();
        if ratios.is_empty() {
            continue;
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let max = ratios.iter().copied().fold(0.0, f64::max);
        writeln!(out, "{algo}: {} rows, mean ratio {mean:.3}, max ratio {max:.3}", ratios.len()).unwrap();
    }
    let violations = rows.iter().filter(|r| !r.ok).count();
    writeln!(out, "violations: {violations}").unwrap();
    out
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ScaleRow {
    pub n: usize,
    pub budget: u64,
    pub ms: f64,
    pub cost: u64,
    pub diameter: Dist,
    pub gamma_height: Dist,
}

pub fn scale_instance(n: usize, budget: u64, seed: u64) -> WeightedInstance {
    gen_random(&RandomParams { n, edge_probability: 0.08, max_weight: 10, max_cost: 2, budget, seed })
        .expect("valid parameters")
}

/// `fpt_solve` wall-clock on one 50-vertex instance for each budget in `budgets`.
pub fn run_scale(seed: u64, budgets: &[u64]) -> Vec<ScaleRow> {
    budgets
        .iter()
        .map(|&b| {
            let inst = scale_instance(50, b, seed);
            let start = Instant::now();
            let out = fpt_solve(&inst, 0).expect("valid instance");
            ScaleRow {
                n: inst.n(),
                budget: b,
                ms: start.elapsed().as_secs_f64() * 1e3,
                cost: out.augmentation.total_cost,
                diameter: out.augmentation.diameter,
                gamma_height: out.gamma_height,
            }
        })
        .collect()
}

pub fn scale_table(rows: &[ScaleRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{:>4}{:>4}{:>12}{:>10}{:>6}{:>10}", "n", "B", "ms", "growth", "cost", "diameter").unwrap();
    for (i, r) in rows.iter().enumerate() {
        let growth = match i.checked_sub(1).map(|p| &rows[p]) {
            Some(prev) if prev.budget + 1 == r.budget && prev.ms > 0.0 => format!("{:.2}x", r.ms / prev.ms),
            _ => "-".into(),
        };
        writeln!(
            out,
            "{:>4}{:>4}{:>12.3}{:>10}{:>6}{:>10}",
            r.n,
            r.budget,
            r.ms,
            growth,
            r.cost,
            r.diameter.to_string()
        )
        .unwrap();
    }
    writeln!(out, "reference growth per unit of B for a 3^B term: 3.00x").unwrap();
    out
}
