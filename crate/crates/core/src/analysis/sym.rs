use super::{orbit_partition, quotient, AnalysisError, Digraph, Partition, QuotientGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymExploreResult {
    /// Quotient of the input by `composed`; its automorphism group is trivial.
    pub final_quotient: QuotientGraph,
    /// Orbit partition applied at each step, on that step's quotient.
    pub partitions: Vec<Partition>,
    /// All steps composed into one partition of the input vertices.
    pub composed: Partition,
    pub iterations: usize,
}

/// Repeatedly replaces the graph by its quotient under the orbits of its
/// automorphism group until that group is trivial.
pub fn sym_explore(g: &Digraph) -> Result<SymExploreResult, AnalysisError> {
    if !g.is_dag() {
        return Err(AnalysisError::NotADag);
    }
    let mut q = g.clone();
    let mut composed = Partition::singletons(g.n());
    let mut partitions = Vec::new();
    loop {
        let orbits = orbit_partition(&q);
        // a non-identity automorphism moves some vertex, so a trivial
        // group is exactly a discrete orbit partition
        if orbits.is_discrete() {
            break;
        }
        if partitions.len() >= g.n() {
            return Err(AnalysisError::InvariantViolation(
                "symmetry reduction did not terminate".into(),
            ));
        }
        q = quotient(&q, &orbits)?.graph;
        composed = composed.compose(&orbits)?;
        partitions.push(orbits);
    }
    let final_quotient = quotient(g, &composed)?;
    debug_assert_eq!(final_quotient.graph.edges().collect::<Vec<_>>(), q.edges().collect::<Vec<_>>());
    Ok(SymExploreResult {
        final_quotient,
        iterations: partitions.len(),
        partitions,
        composed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{automorphism_group, check_chain};

    #[test]
    fn edgeless_collapses_to_one_vertex() {
        let r = sym_explore(&Digraph::new(4)).unwrap();
        assert_eq!(r.final_quotient.n(), 1);
        assert_eq!(r.composed.blocks(), &[vec![0, 1, 2, 3]]);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn disjoint_chains_become_one_chain() {
        let g = Digraph::from_edges(8, [(0, 1), (2, 3), (4, 5), (6, 7)]);
        let r = sym_explore(&g).unwrap();
        assert!(check_chain(&r.final_quotient.graph));
        assert_eq!(r.final_quotient.n(), 2);
        assert_eq!(r.composed.blocks(), &[vec![0, 2, 4, 6], vec![1, 3, 5, 7]]);
    }

    #[test]
    fn second_level_symmetry() {
        // 0 -> {1, 2}, 1 -> 3, 2 -> 4, 3 -> 5, 4 -> 5 and an asymmetric
        // tail 5 -> 6: first orbits pair (1,2) and (3,4)
        let g = Digraph::from_edges(7, [(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5), (5, 6)]);
        let r = sym_explore(&g).unwrap();
        assert_eq!(r.composed.blocks(), &[vec![0], vec![1, 2], vec![3, 4], vec![5], vec![6]]);
        assert!(check_chain(&r.final_quotient.graph));
        assert!(automorphism_group(&r.final_quotient.graph).is_trivial());
    }

    #[test]
    fn rigid_graph_unchanged() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let r = sym_explore(&g).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.composed.is_discrete());
    }

    #[test]
    fn rejects_cycles() {
        let g = Digraph::from_edges(2, [(0, 1), (1, 0)]);
        assert_eq!(sym_explore(&g), Err(AnalysisError::NotADag));
    }
}
