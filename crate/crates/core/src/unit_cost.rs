//! Polynomial algorithms for instances where every non-edge costs 1.
//!
//! All three start from the `k+1` greedy centers:
//! - [`pairwise_centers`] joins every pair of centers by a cheapest
//!   `k`-bounded-cost path (up to `k(k+1)²` insertions, diameter ≤ 3·opt);
//! - [`star_centers`] joins the first center to all others (up to `k²`
//!   insertions, diameter ≤ 4·opt);
//! - [`cluster_spanning_mst`] links the clusters by a minimum spanning tree of
//!   their lightest connectors (≤ `k` insertions, diameter ≤ (3k+2)·opt).

use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounded_paths::SourceWitnesses;
use crate::clustering::{greedy_centers, ClusterCenters};
use crate::graph::{Augmentation, Pair, ValidationReport, VertexId, WeightedInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitCostError {
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),
    #[error("non-edge {0} does not have unit cost")]
    NonUnitCost(Pair),
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("first center {first} out of range for n = {n}")]
    FirstCenterOutOfRange { first: VertexId, n: usize },
}

/// A valid instance whose non-edges all cost 1, with budget `k ≥ 1`.
#[derive(Clone, Debug)]
pub struct UnitCostInstance(WeightedInstance);

impl UnitCostInstance {
    pub fn new(instance: WeightedInstance) -> Result<UnitCostInstance, UnitCostError> {
        let report = instance.validate();
        if !report.is_valid() {
            return Err(UnitCostError::InvalidInstance(report));
        }
        if instance.budget() == 0 {
            return Err(UnitCostError::ZeroBudget);
        }
        for u in 0..instance.n() {
            let mut bad = None;
            instance.for_each_non_edge(u, |v, _, cost| {
                if cost != 1 && bad.is_none() {
                    bad = Some(Pair::new(u, v));
                }
            });
            if let Some(p) = bad {
                return Err(UnitCostError::NonUnitCost(p));
            }
        }
        Ok(UnitCostInstance(instance))
    }

    pub fn instance(&self) -> &WeightedInstance {
        &self.0
    }

    pub fn k(&self) -> u64 {
        self.0.budget()
    }
}

#[derive(Clone, Debug)]
pub struct UnitCostOutcome {
    pub augmentation: Augmentation,
    pub centers: ClusterCenters,
}

fn prepare(unit: &UnitCostInstance, first_center: VertexId) -> Result<(ClusterCenters, usize), UnitCostError> {
    let inst = unit.instance();
    if first_center >= inst.n() {
        return Err(UnitCostError::FirstCenterOutOfRange { first: first_center, n: inst.n() });
    }
    let k = usize::try_from(unit.k()).unwrap_or(usize::MAX).min(inst.n() * inst.n());
    Ok((greedy_centers(inst, first_center), k))
}

fn path_non_edges(
    inst: &WeightedInstance,
    witnesses: &SourceWitnesses,
    targets: &[VertexId],
    k: usize,
) -> BTreeSet<Pair> {
    targets.iter().filter_map(|&t| witnesses.path_to(inst, t, k).ok()).flat_map(|path| path.non_edges).collect()
}

fn finish(inst: &WeightedInstance, added: BTreeSet<Pair>, centers: ClusterCenters) -> UnitCostOutcome {
    let augmentation = Augmentation::evaluate(inst, added).expect("paths insert non-edges only");
    UnitCostOutcome { augmentation, centers }
}

/// Union of cheapest `k`-bounded-cost paths between every pair of centers.
pub fn pairwise_centers(unit: &UnitCostInstance, first_center: VertexId) -> Result<UnitCostOutcome, UnitCostError> {
    let (centers, k) = prepare(unit, first_center)?;
    let inst = unit.instance();
    let c = &centers.centers;
    let added: BTreeSet<Pair> = (0..c.len())
        .into_par_iter()
        .map(|i| {
            let witnesses = SourceWitnesses::new(inst, c[i]);
            path_non_edges(inst, &witnesses, &c[i + 1..], k)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(finish(inst, added, centers))
}

/// Union of cheapest `k`-bounded-cost paths from the first center to the others,
/// all read off a single layered search.
pub fn star_centers(unit: &UnitCostInstance, first_center: VertexId) -> Result<UnitCostOutcome, UnitCostError> {
    let (centers, k) = prepare(unit, first_center)?;
    let inst = unit.instance();
    let witnesses = SourceWitnesses::new(inst, centers.first());
    let added = path_non_edges(inst, &witnesses, &centers.centers[1..], k);
    Ok(finish(inst, added, centers))
}

/// Lightest pair joining clusters `i < j`. Among equal weights an existing
/// edge wins, then the smallest `(u, v)` with `u` in cluster `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connector {
    pub weight: u64,
    pub i: usize,
    pub j: usize,
    pub u: VertexId,
    pub v: VertexId,
    pub non_edge: bool,
}

pub fn cluster_connectors(inst: &WeightedInstance, centers: &ClusterCenters) -> Vec<Connector> {
    let clusters = centers.clusters();
    let mut out = Vec::new();
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let best = clusters[i]
                .iter()
                .flat_map(|&u| clusters[j].iter().map(move |&v| (u, v)))
                .map(|(u, v)| (inst.weight(u, v).expect("total weight"), !inst.is_edge(u, v), u, v))
                .min();
            if let Some((weight, non_edge, u, v)) = best {
                out.push(Connector { weight, i, j, u, v, non_edge });
            }
        }
    }
    out
}

/// Minimum spanning tree over the cluster graph; only its non-edge connectors
/// are inserted.
pub fn cluster_spanning_mst(unit: &UnitCostInstance, first_center: VertexId) -> Result<UnitCostOutcome, UnitCostError> {
    let (centers, _) = prepare(unit, first_center)?;
    let inst = unit.instance();
    let mut connectors = cluster_connectors(inst, &centers);
    connectors.sort_unstable_by_key(|e| (e.weight, e.i, e.j));
    let mut forest = UnionFind::<usize>::new(centers.centers.len());
    let mut added = BTreeSet::new();
    for e in connectors {
        if forest.union(e.i, e.j) && e.non_edge {
            added.insert(Pair::new(e.u, e.v));
        }
    }
    Ok(finish(inst, added, centers))
}
