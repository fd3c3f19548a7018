//! Line-oriented instance and solution files.
//!
//! ```text
//! n 4
//! B 1
//! default_nonedge weight 1 cost 1
//! edge 0 1 1
//! nonedge 0 3 10 1
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Augmentation, Dist, InstanceBuilder, Pair, PairAttr, VertexId, WeightedInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    /// 1-based line number; 0 when the problem is not tied to one line.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T, FormatError> {
    token.parse().map_err(|_| err(line, format!("invalid {what} '{token}'")))
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<WeightedInstance, FormatError> {
    let mut n: Option<usize> = None;
    let mut budget: Option<u64> = None;
    let mut default: Option<(u64, u64)> = None;
    let mut pairs: Vec<(usize, VertexId, VertexId, PairAttr)> = Vec::new();

    for (line, tokens) in significant_lines(text) {
        match tokens[0] {
            "n" => {
                if tokens.len() != 2 {
                    return Err(err(line, "expected 'n <count>'"));
                }
                if n.is_some() {
                    return Err(err(line, "duplicate 'n' line"));
                }
                let count: usize = number(line, tokens[1], "vertex count")?;
                if count == 0 {
                    return Err(err(line, "vertex count must be at least 1"));
                }
                n = Some(count);
            }
            "B" => {
                if tokens.len() != 2 {
                    return Err(err(line, "expected 'B <budget>'"));
                }
                if budget.is_some() {
                    return Err(err(line, "duplicate 'B' line"));
                }
                budget = Some(number(line, tokens[1], "budget")?);
            }
            "default_nonedge" => {
                if tokens.len() != 5 || tokens[1] != "weight" || tokens[3] != "cost" {
                    return Err(err(line, "expected 'default_nonedge weight <w> cost <c>'"));
                }
                if default.is_some() {
                    return Err(err(line, "duplicate 'default_nonedge' line"));
                }
                let w = number(line, tokens[2], "weight")?;
                let c: u64 = number(line, tokens[4], "cost")?;
                if c == 0 {
                    return Err(err(line, "cost must be ≥ 1"));
                }
                default = Some((w, c));
            }
            "edge" => {
                if tokens.len() != 4 {
                    return Err(err(line, "expected 'edge <u> <v> <weight>'"));
                }
                let u = number(line, tokens[1], "vertex")?;
                let v = number(line, tokens[2], "vertex")?;
                let weight = number(line, tokens[3], "weight")?;
                pairs.push((line, u, v, PairAttr::Edge { weight }));
            }
            "nonedge" => {
                if tokens.len() != 5 {
                    return Err(err(line, "expected 'nonedge <u> <v> <weight> <cost>'"));
                }
                let u = number(line, tokens[1], "vertex")?;
                let v = number(line, tokens[2], "vertex")?;
                let weight = number(line, tokens[3], "weight")?;
                let cost: u64 = number(line, tokens[4], "cost")?;
                if cost == 0 {
                    return Err(err(line, "cost must be ≥ 1"));
                }
                pairs.push((line, u, v, PairAttr::NonEdge { weight, cost }));
            }
            other => return Err(err(line, format!("unknown directive '{other}'"))),
        }
    }

    let n = n.ok_or_else(|| err(0, "missing 'n' line"))?;
    let budget = budget.ok_or_else(|| err(0, "missing 'B' line"))?;
    let mut builder = InstanceBuilder::new(n, budget);
    if let Some((w, c)) = default {
        builder = builder.default_non_edge(w, c);
    }
    for (line, u, v, attr) in pairs {
        builder.try_insert(u, v, attr).map_err(|e| err(line, e.to_string()))?;
    }
    let instance = builder.build().map_err(|e| err(0, e.to_string()))?;
    let report = instance.validate();
    if !report.is_valid() {
        return Err(err(0, report.to_string()));
    }
    Ok(instance)
}

/// Canonical text form: explicit lines only for pairs that differ from the default.
pub fn write_instance(instance: &WeightedInstance) -> String {
    let mut out = String::new();
    let n = instance.n();
    writeln!(out, "n {n}").unwrap();
    writeln!(out, "B {}", instance.budget()).unwrap();
    let default = instance.default_non_edge();
    if let Some(d) = default {
        writeln!(out, "default_nonedge weight {} cost {}", d.weight, d.cost).unwrap();
    }
    for (p, w) in instance.edges() {
        writeln!(out, "edge {} {} {w}", p.u, p.v).unwrap();
    }
    for u in 0..n {
        instance.for_each_non_edge(u, |v, weight, cost| {
            if u < v && default.is_none_or(|d| d.weight != weight || d.cost != cost) {
                writeln!(out, "nonedge {u} {v} {weight} {cost}").unwrap();
            }
        });
    }
    out
}

/// Contents of a solution file: `add u v` lines, then `cost`, then `diameter`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFile {
    pub added: Vec<Pair>,
    pub cost: u64,
    pub diameter: Dist,
}

pub fn write_solution(aug: &Augmentation) -> String {
    let mut out = String::new();
    for p in &aug.added {
        writeln!(out, "add {} {}", p.u, p.v).unwrap();
    }
    writeln!(out, "cost {}", aug.total_cost).unwrap();
    writeln!(out, "diameter {}", aug.diameter).unwrap();
    out
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, FormatError> {
    let mut added = Vec::new();
    let mut cost = None;
    let mut diameter = None;
    for (line, tokens) in significant_lines(text) {
        match (tokens[0], tokens.len()) {
            ("add", 3) => {
                let u: usize = number(line, tokens[1], "vertex")?;
                let v: usize = number(line, tokens[2], "vertex")?;
                if u == v {
                    return Err(err(line, "added pair needs two distinct vertices"));
                }
                if cost.is_some() || diameter.is_some() {
                    return Err(err(line, "'add' lines must precede 'cost' and 'diameter'"));
                }
                added.push(Pair::new(u, v));
            }
            ("cost", 2) if cost.is_none() => cost = Some(number(line, tokens[1], "cost")?),
            ("diameter", 2) if diameter.is_none() => {
                diameter = Some(if tokens[1] == "inf" {
                    Dist::INF
                } else {
                    Dist::finite(number(line, tokens[1], "diameter")?)
                });
            }
            _ => return Err(err(line, format!("unexpected line '{}'", tokens.join(" ")))),
        }
    }
    Ok(SolutionFile {
        added,
        cost: cost.ok_or_else(|| err(0, "missing 'cost' line"))?,
        diameter: diameter.ok_or_else(|| err(0, "missing 'diameter' line"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P4: &str = "# path\nn 4\nB 1\ndefault_nonedge weight 1 cost 1\nedge 0 1 1\nedge 1 2 1\nedge 2 3 1\n";

    #[test]
    fn parses_p4() {
        let inst = parse_instance(P4).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.budget(), 1);
        assert_eq!(inst.edge_count(), 3);
        assert_eq!(inst.cost(0, 3), Some(1));
        assert_eq!(write_instance(&inst), P4.trim_start_matches("# path\n"));
    }

    #[test]
    fn nonedge_override_round_trips() {
        let text = "n 3\nB 2\ndefault_nonedge weight 4 cost 1\nedge 0 1 2\nnonedge 0 2 9 2 # pricey\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.pair(2, 0), Some(PairAttr::NonEdge { weight: 9, cost: 2 }));
        assert_eq!(inst.pair(1, 2), Some(PairAttr::NonEdge { weight: 4, cost: 1 }));
        let again = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(write_instance(&again), write_instance(&inst));
    }

    #[test]
    fn incomplete_coverage_without_default_is_invalid() {
        let e = parse_instance("n 3\nB 0\nedge 0 1 1\nedge 1 2 1\n").unwrap_err();
        assert!(e.message.contains("weight not total"), "{e}");
        assert!(parse_instance("n 2\nB 0\nnonedge 0 1 3 1\n").is_ok());
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let e = parse_instance("n 3\nB 1\n\nedge 0 5 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_instance("n 3\nB 1\nedge 0 1 1\nedge 1 0 2\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_instance("n 3\nB x\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_instance("n 3\nB 1\ndefault_nonedge weight 1 cost 1\nnonedge 0 1 1 0\n").unwrap_err();
        assert_eq!((e.line, e.message.as_str()), (4, "cost must be ≥ 1"));
        let e = parse_instance("n 2\nB 1\nloop 0 0\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn solution_round_trip() {
        let aug = Augmentation { added: vec![Pair::new(0, 3), Pair::new(1, 2)], total_cost: 2, diameter: Dist::INF };
        let text = write_solution(&aug);
        assert_eq!(text, "add 0 3\nadd 1 2\ncost 2\ndiameter inf\n");
        let parsed = parse_solution(&text).unwrap();
        assert_eq!(parsed.added, aug.added);
        assert_eq!(parsed.cost, 2);
        assert_eq!(parsed.diameter, Dist::INF);
        assert!(parse_solution("add 0 1\n").is_err());
    }
}
