use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::format::write_instance;
use crate::fpt::PhaseTimings;
use crate::graph::{Augmentation, Dist, VertexId, WeightedInstance};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PhaseTiming {
    pub phase: String,
    pub ms: f64,
}

/// One solver run. JSON fields appear in declaration order; absent values are omitted.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunReport {
    pub algorithm: String,
    pub instance_digest: String,
    pub n: usize,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_center: Option<VertexId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub added: Vec<[VertexId; 2]>,
    pub total_cost: u64,
    pub diameter: Dist,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_height: Option<Dist>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster_radius: Option<Dist>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infeasible_height: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explored: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_optimum: Option<Dist>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<PhaseTiming>>,
}

/// First 16 hex digits of the SHA-256 of the canonical instance text.
pub fn instance_digest(instance: &WeightedInstance) -> String {
    let hash = Sha256::digest(write_instance(instance).as_bytes());
    hex::encode(&hash[..8])
}

/// `diameter / optimum`, defined when both are finite (`1` for `0 / 0`).
pub fn ratio(diameter: Dist, optimum: Dist) -> Option<f64> {
    match (diameter.value(), optimum.value()) {
        (Some(0), Some(0)) => Some(1.0),
        (Some(d), Some(o)) if o > 0 => Some(d as f64 / o as f64),
        _ => None,
    }
}

impl RunReport {
    pub fn new(algorithm: &str, instance: &WeightedInstance, aug: &Augmentation) -> RunReport {
        RunReport {
            algorithm: algorithm.to_string(),
            instance_digest: instance_digest(instance),
            n: instance.n(),
            budget: instance.budget(),
            first_center: None,
            seed: None,
            added: aug.added.iter().map(|p| [p.u, p.v]).collect(),
            total_cost: aug.total_cost,
            diameter: aug.diameter,
            gamma_height: None,
            cluster_radius: None,
            infeasible_height: None,
            explored: None,
            oracle_optimum: None,
            ratio: None,
            timings_ms: None,
        }
    }

    pub fn with_optimum(mut self, optimum: Dist) -> RunReport {
        self.oracle_optimum = Some(optimum);
        self.ratio = ratio(self.diameter, optimum);
        self
    }

    pub fn with_timings(mut self, timings: &PhaseTimings) -> RunReport {
        self.timings_ms = Some(
            timings
                .phases
                .iter()
                .map(|(phase, d)| PhaseTiming { phase: phase.to_string(), ms: d.as_secs_f64() * 1e3 })
                .collect(),
        );
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |key: &str, value: String| writeln!(out, "{key:<18}{value}").unwrap();
        line("algorithm", self.algorithm.clone());
        line("instance", self.instance_digest.clone());
        line("n", self.n.to_string());
        line("budget", self.budget.to_string());
        if let Some(c) = self.first_center {
            line("first_center", c.to_string());
        }
        if let Some(s) = self.seed {
            line("seed", s.to_string());
        }
        let added: Vec<String> = self.added.iter().map(|[u, v]| format!("{{{u},{v}}}")).collect();
        line("added", if added.is_empty() { "-".into() } else { added.join(" ") });
        line("total_cost", self.total_cost.to_string());
        line("diameter", self.diameter.to_string());
        if let Some(h) = self.gamma_height {
            line("gamma_height", h.to_string());
        }
        if let Some(r) = self.cluster_radius {
            line("cluster_radius", r.to_string());
        }
        if let Some(flag) = self.infeasible_height {
            line("infeasible_height", flag.to_string());
        }
        if let Some(e) = self.explored {
            line("explored", e.to_string());
        }
        if let Some(o) = self.oracle_optimum {
            line("oracle_optimum", o.to_string());
        }
        if let Some(r) = self.ratio {
            line("ratio", format!("{r:.3}"));
        }
        if let Some(t) = &self.timings_ms {
            let parts: Vec<String> = t.iter().map(|p| format!("{} {:.3}ms", p.phase, p.ms)).collect();
            line("timings", parts.join(", "));
        }
        out
    }
}
