use exg_core::analysis::{
    automorphism_group, exec_time_quotient, is_completely_serial, longest_path_vertices, quotient, reachability,
    sym_explore, Digraph, Partition,
};
use proptest::prelude::*;

/// DAG on `0..n` whose edges respect a shuffled vertex order.
fn dag() -> impl Strategy<Value = Digraph> {
    (1usize..9)
        .prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
            )
        })
        .prop_map(|(order, bits)| {
            let n = order.len();
            let mut g = Digraph::new(n);
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        g.add_edge(order[a], order[b]);
                    }
                    k += 1;
                }
            }
            g
        })
}

fn reaches_dfs(g: &Digraph, from: usize, to: usize) -> bool {
    let mut seen = vec![false; g.n()];
    let mut stack = g.succ(from).to_vec();
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend_from_slice(g.succ(v));
        }
    }
    false
}

fn longest_dfs(g: &Digraph, v: usize) -> usize {
    1 + g.succ(v).iter().map(|&w| longest_dfs(g, w)).max().unwrap_or(0)
}

proptest! {
    #[test]
    fn reachability_matches_dfs(g in dag()) {
        let r = reachability(&g);
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(r.reaches(u, v), reaches_dfs(&g, u, v), "{} -> {}", u, v);
            }
        }
    }

    #[test]
    fn serial_iff_longest_path_covers_all(g in dag()) {
        let lp = (0..g.n()).map(|v| longest_dfs(&g, v)).max().unwrap();
        prop_assert_eq!(longest_path_vertices(&g).unwrap(), lp);
        prop_assert_eq!(is_completely_serial(&g).unwrap(), lp == g.n());
    }

    #[test]
    fn independent_blocks_give_acyclic_quotient(g in dag(), labels in proptest::collection::vec(0usize..4, 8)) {
        let r = reachability(&g);
        let p = Partition::from_labels(&labels[..g.n()]);
        let independent = p.blocks().iter().all(|b| r.is_independent_set(b).unwrap());
        if independent {
            prop_assert!(quotient(&g, &p).unwrap().graph.is_dag());
        }
    }

    #[test]
    fn sym_explore_terminates_without_symmetry(g in dag()) {
        let sym = sym_explore(&g).unwrap();
        prop_assert!(sym.iterations <= g.n());
        prop_assert!(automorphism_group(&sym.final_quotient.graph).is_trivial());
        prop_assert!(sym.final_quotient.graph.is_dag());
        let exec_t = exec_time_quotient(&reachability(&g), &sym.composed).unwrap();
        prop_assert!(exec_t <= g.n());
        prop_assert!(exec_t >= longest_path_vertices(&g).unwrap());
    }
}
