use bcmd::format::write_instance;
use bcmd::graph::{augmented_diameter, diameter, sssp, Dist, Pair};
use bcmd::oracle::{exact_optimum, feasible_diameter, OracleLimits};
use bcmd::reductions::{
    expected_vertex_count, gen_random, reduce_setcover, reduce_setcover_multicopy, RandomParams, SetCoverInstance,
};

fn base() -> SetCoverInstance {
    SetCoverInstance { universe: 2, sets: vec![vec![0], vec![0, 1]], k: 1 }
}

#[test]
fn yes_instance_reaches_diameter_two() {
    let (inst, layout) = reduce_setcover(&base()).unwrap();
    let r = exact_optimum(&inst, &OracleLimits::default()).unwrap();
    assert_eq!(r.best_diameter, Dist::finite(2));
    assert_eq!(r.best_f, vec![Pair::new(layout.a, layout.y[0][1])]);
}

#[test]
fn equivalence_holds_for_three_set_families() {
    let limits = OracleLimits::default();
    let universe = 3;
    let subsets: Vec<Vec<usize>> = (1u32..8).map(|m| (0..universe).filter(|&e| m >> e & 1 == 1).collect()).collect();
    let mut checked = 0;
    for a in 0..subsets.len() {
        for b in a + 1..subsets.len() {
            for c in b + 1..subsets.len() {
                let sets = vec![subsets[a].clone(), subsets[b].clone(), subsets[c].clone()];
                let sc = SetCoverInstance { universe, sets, k: 1 };
                let (inst, _) = reduce_setcover(&sc).unwrap();
                let found = feasible_diameter(&inst, 2, &limits).unwrap();
                assert_eq!(found.is_some(), sc.has_cover(), "{sc:?}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 35);
}

#[test]
fn two_set_families_admit_a_shortcut_through_the_pair_vertices() {
    // no single set covers {0, 1}, yet one edge a–u_01 brings both T blocks within 2
    let sc = SetCoverInstance { universe: 2, sets: vec![vec![0], vec![1]], k: 1 };
    assert!(!sc.has_cover());
    let (inst, layout) = reduce_setcover(&sc).unwrap();
    let found = feasible_diameter(&inst, 2, &OracleLimits::default()).unwrap().unwrap();
    assert_eq!(found, vec![Pair::new(layout.a, layout.u[0].2)]);
}

#[test]
fn vertex_counts_follow_the_formula() {
    for (universe, sets, k) in
        [(2, vec![vec![0], vec![1]], 2), (3, vec![vec![0, 1], vec![2], vec![1, 2]], 2), (1, vec![vec![0]], 2)]
    {
        let sc = SetCoverInstance { universe, sets, k };
        let (inst, layout) = reduce_setcover(&sc).unwrap();
        assert_eq!(inst.n(), expected_vertex_count(&sc, 1));
        assert_eq!(layout.m, sc.sets.len() * k as usize);
        for copies in 2..=3 {
            let (inst, _) = reduce_setcover_multicopy(&sc, copies).unwrap();
            assert_eq!(inst.n(), expected_vertex_count(&sc, copies));
            assert_eq!(inst.budget(), k * copies as u64);
        }
    }
}

#[test]
fn multicopy_profile_and_yes_instance() {
    let (inst, layout) = reduce_setcover_multicopy(&base(), 2).unwrap();
    assert_eq!(diameter(&inst), Dist::finite(3));
    let t = layout.t_vertices();
    for s in 0..inst.n() {
        let row = sssp(&inst, s);
        for (v, &d) in row.iter().enumerate() {
            if s == layout.a && t.contains(&v) {
                assert_eq!(d, Dist::finite(3));
            } else if s != layout.a && v != layout.a {
                assert!(d <= Dist::finite(2), "dist({s}, {v}) = {d}");
            }
        }
    }
    let limits = OracleLimits { max_non_edges: 80, ..OracleLimits::default() };
    let r = exact_optimum(&inst, &limits).unwrap();
    assert_eq!(inst.non_edges().len(), 73);
    assert_eq!(r.best_diameter, Dist::finite(2));
    let cover_edges = [Pair::new(layout.a, layout.y[0][1]), Pair::new(layout.a, layout.y[1][1])];
    assert_eq!(augmented_diameter(&inst, &cover_edges), Dist::finite(2));
    // with two T blocks the shared pair vertex alone also reaches every copy
    assert_eq!(augmented_diameter(&inst, &[Pair::new(layout.a, layout.u[0].2)]), Dist::finite(2));
}

#[test]
fn random_instance_matches_golden_file() {
    let params = RandomParams { n: 6, edge_probability: 0.5, max_weight: 3, max_cost: 2, budget: 2, seed: 42 };
    let text = write_instance(&gen_random(&params).unwrap());
    assert_eq!(text, include_str!("golden/random_6_42.bcmd"));
}
