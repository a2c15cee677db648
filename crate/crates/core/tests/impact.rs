use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use retiot_core::gen::{random_project, random_typed_dag};
use retiot_core::model::Identifier;
use retiot_core::trace::{build_trace_graph, impact_of_change, validate_links, Direction, Edge, NodeInfo, TraceGraph};

/// Transitive closure by repeated squaring of a boolean adjacency matrix.
fn reachability(nodes: &[Identifier], edges: &[Edge]) -> Vec<Vec<bool>> {
    let n = nodes.len();
    let index = |id: &Identifier| nodes.iter().position(|x| x == id).unwrap();
    let mut m = vec![vec![false; n]; n];
    for e in edges {
        m[index(&e.from)][index(&e.to)] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if !m[i][j] && (0..n).any(|k| m[i][k] && m[k][j]) {
                    m[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

fn oracle(nodes: &[Identifier], m: &[Vec<bool>], i: usize, direction: Direction) -> BTreeSet<Identifier> {
    (0..nodes.len())
        .filter(|&j| {
            j != i
                && match direction {
                    Direction::Downstream => m[i][j],
                    Direction::Upstream => m[j][i],
                    Direction::Both => m[i][j] || m[j][i],
                }
        })
        .map(|j| nodes[j])
        .collect()
}

fn graph(nodes: &[Identifier], edges: &[Edge]) -> TraceGraph {
    TraceGraph::from_links(nodes.iter().map(|n| (*n, NodeInfo::default())), edges.iter().copied()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn impact_equals_brute_force_closure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=50);
        let (nodes, edges) = random_typed_dag(&mut rng, n);
        let g = graph(&nodes, &edges);
        let m = reachability(&nodes, &edges);
        for (i, node) in nodes.iter().enumerate() {
            for direction in [Direction::Downstream, Direction::Upstream, Direction::Both] {
                prop_assert_eq!(impact_of_change(&g, node, direction).unwrap(), oracle(&nodes, &m, i, direction));
            }
        }
    }

    #[test]
    fn downstream_and_upstream_are_dual(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=50);
        let (nodes, edges) = random_typed_dag(&mut rng, n);
        let g = graph(&nodes, &edges);
        let down: Vec<BTreeSet<Identifier>> =
            nodes.iter().map(|a| impact_of_change(&g, a, Direction::Downstream).unwrap()).collect();
        let up: Vec<BTreeSet<Identifier>> =
            nodes.iter().map(|a| impact_of_change(&g, a, Direction::Upstream).unwrap()).collect();
        for (i, a) in nodes.iter().enumerate() {
            for (j, b) in nodes.iter().enumerate() {
                prop_assert_eq!(down[i].contains(b), up[j].contains(a));
            }
        }
    }

    #[test]
    fn adding_an_edge_never_shrinks_impact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=30);
        let (nodes, mut edges) = random_typed_dag(&mut rng, n);
        let before = graph(&nodes, &edges);
        let (_, extra) = random_typed_dag(&mut ChaCha8Rng::seed_from_u64(seed ^ 1), n);
        if let Some(e) = extra.into_iter().find(|e| !edges.contains(e)) {
            edges.push(e);
        }
        let after = graph(&nodes, &edges);
        for node in &nodes {
            for direction in [Direction::Downstream, Direction::Upstream, Direction::Both] {
                let small = impact_of_change(&before, node, direction).unwrap();
                let large = impact_of_change(&after, node, direction).unwrap();
                prop_assert!(small.is_subset(&large));
            }
        }
    }

    #[test]
    fn project_graphs_only_hold_legal_edges(seed in any::<u64>()) {
        let p = random_project(&mut ChaCha8Rng::seed_from_u64(seed));
        let g = build_trace_graph(&p);
        for e in g.edges() {
            prop_assert!(e.kind.allows(e.from.kind, e.to.kind), "{}", e);
            prop_assert!(g.contains(&e.from) && g.contains(&e.to));
        }
        for s in &p.scenarios {
            prop_assert!(g.contains(&s.id));
        }
        // every scenario in a valid project names a functional requirement
        prop_assert!(validate_links(&g).iter().all(|i| !i.to_string().starts_with("unlinked-scenario")));
    }
}

#[test]
fn unknown_node_is_an_error() {
    let (nodes, edges) = random_typed_dag(&mut ChaCha8Rng::seed_from_u64(7), 5);
    let g = graph(&nodes, &edges);
    assert!(impact_of_change(&g, &Identifier::fr(99), Direction::Both).is_err());
}
