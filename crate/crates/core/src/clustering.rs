//! Farthest-point selection of `B+1` cluster centers.

use crate::graph::{sssp, Dist, VertexId, WeightedInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterCenters {
    /// Centers in selection order; `centers[0]` is the first center.
    pub centers: Vec<VertexId>,
    /// Index into `centers` of each vertex's nearest center.
    pub assignment: Vec<usize>,
    /// `dist_G(v, C)` per vertex.
    pub center_distances: Vec<Dist>,
    pub radius: Dist,
    /// `dist_G(c_i, {c_1..c_{i-1}})` at the moment each center was picked (`0` for the first).
    pub selection_gaps: Vec<Dist>,
}

impl ClusterCenters {
    pub fn first(&self) -> VertexId {
        self.centers[0]
    }

    /// Members of each cluster, in increasing vertex order.
    pub fn clusters(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.centers.len()];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Picks `min(B+1, n)` centers starting from `first_center`.
///
/// Each further center maximizes its distance to the centers chosen so far,
/// ties going to the smallest vertex id. Assignments move only on strict
/// improvement, so ties go to the earliest center, except that a center is
/// always assigned to itself.
pub fn greedy_centers(instance: &WeightedInstance, first_center: VertexId) -> ClusterCenters {
    let n = instance.n();
    assert!(first_center < n, "first center out of range");
    let target = usize::try_from(instance.budget()).map_or(n, |b| b.saturating_add(1).min(n));

    let mut centers = Vec::with_capacity(target);
    let mut selected = vec![false; n];
    let mut nearest = vec![Dist::INF; n];
    let mut assignment = vec![0usize; n];
    let mut gaps = Vec::with_capacity(target);

    let mut next = first_center;
    let mut gap = Dist::ZERO;
    loop {
        let index = centers.len();
        centers.push(next);
        gaps.push(gap);
        selected[next] = true;
        for (v, d) in sssp(instance, next).into_iter().enumerate() {
            if d < nearest[v] || v == next {
                nearest[v] = d;
                assignment[v] = index;
            }
        }
        if centers.len() == target {
            break;
        }
        let (far, far_dist) = (0..n)
            .filter(|&v| !selected[v])
            .map(|v| (v, nearest[v]))
            .fold(None, |best: Option<(VertexId, Dist)>, (v, d)| match best {
                Some((_, bd)) if bd >= d => best,
                _ => Some((v, d)),
            })
            .expect("an unselected vertex remains");
        next = far;
        gap = far_dist;
    }

    let radius = nearest.iter().copied().max().unwrap_or(Dist::ZERO);
    ClusterCenters { centers, assignment, center_distances: nearest, radius, selection_gaps: gaps }
}
