use std::collections::HashMap;

use num_bigint::BigUint;

use super::{AnalysisError, Digraph, Partition};

/// Largest graph [`brute_force_aut`] accepts.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 8;

/// Automorphism group of a digraph, given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    /// Non-identity permutations `v -> perm[v]` generating the group.
    pub generators: Vec<Vec<usize>>,
    pub orbits: Partition,
    pub order: Option<BigUint>,
}

impl AutGroup {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Whether `perm` is a bijection on the vertices mapping edges onto edges.
pub fn is_automorphism(g: &Digraph, perm: &[usize]) -> bool {
    let n = g.n();
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    // injective on a finite edge set, so onto as well
    g.edges().all(|(u, v)| g.has_edge(perm[u], perm[v]))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    fn union_perm(&mut self, perm: &[usize]) {
        for (v, &p) in perm.iter().enumerate() {
            self.union(v, p);
        }
    }

    fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.0.len()).map(|v| self.find(v)).collect();
        Partition::from_labels(&roots)
    }
}

/// Classes of vertices with identical in- and out-neighbourhoods. Any
/// permutation inside a class is an automorphism, so the search only has to
/// run on the graph of classes, coloured by class size.
struct TwinReduction {
    classes: Partition,
    graph: Digraph,
    colors: Vec<u32>,
}

impl TwinReduction {
    fn new(g: &Digraph) -> Self {
        let mut ids: HashMap<(&[usize], &[usize]), usize> = HashMap::new();
        let labels: Vec<usize> = (0..g.n())
            .map(|v| {
                let next = ids.len();
                *ids.entry((g.succ(v), g.pred(v))).or_insert(next)
            })
            .collect();
        let classes = Partition::from_labels(&labels);
        let mut graph = Digraph::new(classes.len());
        for (u, v) in g.edges() {
            graph.add_edge(classes.block_of(u), classes.block_of(v));
        }
        let colors = classes.blocks().iter().map(|b| b.len() as u32).collect();
        TwinReduction { classes, graph, colors }
    }

    /// Lifts an automorphism of the class graph by mapping the i-th member
    /// of each class to the i-th member of its image.
    fn lift(&self, sigma: &[usize]) -> Vec<usize> {
        let mut perm = vec![0; self.classes.n()];
        for (c, &image) in sigma.iter().enumerate() {
            for (&v, &w) in self.classes.block(c).iter().zip(self.classes.block(image)) {
                perm[v] = w;
            }
        }
        perm
    }

    fn twin_generators(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.classes.n();
        self.classes.blocks().iter().flat_map(move |b| {
            b.windows(2).map(move |w| {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(w[0], w[1]);
                perm
            })
        })
    }
}

/// Individualisation-refinement search for automorphisms of a vertex
/// coloured digraph.
///
/// Colourings range over two copies of the graph: vertex `v` of copy A is
/// index `v`, of copy B index `m + v`. Refining both copies jointly keeps
/// colours comparable, and a colour with different multiplicities in the
/// two copies rules out every automorphism compatible with the pairs
/// individualised so far.
struct Search<'a> {
    g: &'a Digraph,
    base: &'a [u32],
}

impl<'a> Search<'a> {
    fn m(&self) -> usize {
        self.g.n()
    }

    fn initial(&self) -> Vec<u32> {
        let mut c: Vec<u32> = self.base.iter().chain(self.base).copied().collect();
        let balanced = self.refine(&mut c);
        debug_assert!(balanced);
        c
    }

    fn neighbour_colors(&self, c: &[u32], adj: &[usize], offset: usize) -> Vec<u32> {
        let mut out: Vec<u32> = adj.iter().map(|&w| c[w + offset]).collect();
        out.sort_unstable();
        out
    }

    /// Refines `c` to the coarsest equitable colouring below it; returns
    /// false when the copies become unbalanced.
    fn refine(&self, c: &mut [u32]) -> bool {
        let m = self.m();
        let total = 2 * m;
        if total == 0 {
            return true;
        }
        let mut count = {
            let mut cs = c.to_vec();
            cs.sort_unstable();
            cs.dedup();
            cs.len()
        };
        loop {
            let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..total)
                .map(|v| {
                    let (offset, x) = if v < m { (0, v) } else { (m, v - m) };
                    (
                        c[v],
                        self.neighbour_colors(c, self.g.succ(x), offset),
                        self.neighbour_colors(c, self.g.pred(x), offset),
                    )
                })
                .collect();
            let mut order: Vec<usize> = (0..total).collect();
            order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
            let mut next = 0u32;
            for k in 0..total {
                if k > 0 && sigs[order[k]] != sigs[order[k - 1]] {
                    next += 1;
                }
                c[order[k]] = next;
            }
            let new_count = next as usize + 1;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut balance = vec![0i64; count];
        for v in 0..m {
            balance[c[v] as usize] += 1;
            balance[c[m + v] as usize] -= 1;
        }
        balance.iter().all(|&b| b == 0)
    }

    fn individualize(&self, c: &mut [u32], x: usize, y: usize) {
        let fresh = c.iter().copied().max().unwrap_or(0) + 1;
        c[x] = fresh;
        c[self.m() + y] = fresh;
    }

    /// Smallest colour cell of size > 1 in copy A, ties to the lower colour.
    fn target_cell(&self, c: &[u32]) -> Option<u32> {
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for &col in &c[..self.m()] {
            *sizes.entry(col).or_default() += 1;
        }
        sizes
            .into_iter()
            .filter(|&(_, s)| s > 1)
            .min_by_key(|&(col, s)| (s, col))
            .map(|(col, _)| col)
    }

    /// Matches A to B within each colour, fixing vertices that occur in
    /// both copies of a cell and pairing the rest in order.
    fn guess(&self, c: &[u32]) -> Option<Vec<usize>> {
        let m = self.m();
        let mut cells: HashMap<u32, (Vec<usize>, Vec<usize>)> = HashMap::new();
        for v in 0..m {
            cells.entry(c[v]).or_default().0.push(v);
            cells.entry(c[m + v]).or_default().1.push(v);
        }
        let mut perm = vec![usize::MAX; m];
        for (a, b) in cells.values() {
            let mut rest_a = Vec::new();
            for &x in a {
                if b.binary_search(&x).is_ok() {
                    perm[x] = x;
                } else {
                    rest_a.push(x);
                }
            }
            let rest_b = b.iter().filter(|&&y| a.binary_search(&y).is_err());
            for (&x, &y) in rest_a.iter().zip(rest_b) {
                perm[x] = y;
            }
        }
        is_automorphism(self.g, &perm).then_some(perm)
    }

    /// Finds an automorphism compatible with the refined colouring `c`.
    fn extend(&self, c: Vec<u32>) -> Option<Vec<usize>> {
        if let Some(p) = self.guess(&c) {
            return Some(p);
        }
        let m = self.m();
        let cell = self.target_cell(&c)?;
        let x = (0..m).find(|&v| c[v] == cell)?;
        let mut targets: Vec<usize> = (0..m).filter(|&y| c[m + y] == cell).collect();
        if let Some(pos) = targets.iter().position(|&y| y == x) {
            targets[..=pos].rotate_right(1);
        }
        for y in targets {
            let mut next = c.clone();
            self.individualize(&mut next, x, y);
            if self.refine(&mut next) {
                if let Some(p) = self.extend(next) {
                    return Some(p);
                }
            }
        }
        None
    }

    /// An automorphism mapping `x` to `y` whose colouring is `c` before
    /// individualising.
    fn map_to(&self, c: &[u32], x: usize, y: usize) -> Option<Vec<usize>> {
        let mut next = c.to_vec();
        self.individualize(&mut next, x, y);
        if self.refine(&mut next) {
            self.extend(next)
        } else {
            None
        }
    }

    /// Generators along a stabiliser chain plus the group order.
    fn generators(&self) -> (Vec<Vec<usize>>, BigUint) {
        let m = self.m();
        let mut c = self.initial();
        let mut levels = Vec::new();
        while let Some(cell) = self.target_cell(&c) {
            let candidates: Vec<usize> = (0..m).filter(|&v| c[v] == cell).collect();
            let b = candidates[0];
            levels.push((b, candidates, c.clone()));
            self.individualize(&mut c, b, b);
            let balanced = self.refine(&mut c);
            debug_assert!(balanced);
        }

        let mut uf = UnionFind::new(m);
        let mut generators = Vec::new();
        let mut order = BigUint::from(1u32);
        // deepest stabiliser first, so each level only searches for coset
        // representatives of orbit points not yet reached
        for (b, candidates, cols) in levels.iter().rev() {
            let mut rejected: Vec<usize> = Vec::new();
            for &u in candidates {
                if uf.same(*b, u) || rejected.iter().any(|&r| uf.same(r, u)) {
                    continue;
                }
                match self.map_to(cols, *b, u) {
                    Some(p) => {
                        uf.union_perm(&p);
                        generators.push(p);
                    }
                    None => rejected.push(u),
                }
            }
            let orbit = candidates.iter().filter(|&&u| uf.same(*b, u)).count();
            order *= orbit;
        }
        (generators, order)
    }

    /// Orbits only: one search per cell member against the known orbit
    /// representatives of its cell.
    fn orbits(&self) -> UnionFind {
        let m = self.m();
        let c = self.initial();
        let mut cells: Vec<(u32, Vec<usize>)> = Vec::new();
        {
            let mut index: HashMap<u32, usize> = HashMap::new();
            for (v, &colour) in c[..m].iter().enumerate() {
                let i = *index.entry(colour).or_insert_with(|| {
                    cells.push((colour, Vec::new()));
                    cells.len() - 1
                });
                cells[i].1.push(v);
            }
        }
        let mut uf = UnionFind::new(m);
        for (_, members) in cells.iter().filter(|(_, members)| members.len() > 1) {
            let mut reps: Vec<usize> = Vec::new();
            for &u in members {
                if reps.iter().any(|&r| uf.same(r, u)) {
                    continue;
                }
                let found = reps.iter().find_map(|&r| self.map_to(&c, r, u));
                match found {
                    Some(p) => uf.union_perm(&p),
                    None => reps.push(u),
                }
            }
        }
        uf
    }
}

/// Generators, orbits and order of `Aut(g)` on the unlabelled structure.
pub fn automorphism_group(g: &Digraph) -> AutGroup {
    let reduction = TwinReduction::new(g);
    let search = Search {
        g: &reduction.graph,
        base: &reduction.colors,
    };
    let (class_generators, class_order) = search.generators();

    let mut generators: Vec<Vec<usize>> = reduction.twin_generators().collect();
    generators.extend(class_generators.iter().map(|s| reduction.lift(s)));

    let mut order = class_order;
    for block in reduction.classes.blocks() {
        for k in 2..=block.len() {
            order *= k;
        }
    }

    let mut uf = UnionFind::new(g.n());
    for p in &generators {
        uf.union_perm(p);
    }
    AutGroup {
        generators,
        orbits: uf.partition(),
        order: Some(order),
    }
}

/// Orbit partition of `Aut(g)` without building a full generating set.
pub fn orbit_partition(g: &Digraph) -> Partition {
    let reduction = TwinReduction::new(g);
    let search = Search {
        g: &reduction.graph,
        base: &reduction.colors,
    };
    let mut class_orbits = search.orbits();
    let labels: Vec<usize> = (0..g.n())
        .map(|v| class_orbits.find(reduction.classes.block_of(v)))
        .collect();
    Partition::from_labels(&labels)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Enumerates all `n!` permutations; every non-identity automorphism is
/// returned as a generator.
pub fn brute_force_aut(g: &Digraph) -> Result<AutGroup, AnalysisError> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(AnalysisError::TooLarge(n));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut generators = Vec::new();
    let mut count = 1u64;
    while next_permutation(&mut perm) {
        if is_automorphism(g, &perm) {
            generators.push(perm.clone());
            count += 1;
        }
    }
    let mut uf = UnionFind::new(n);
    for p in &generators {
        uf.union_perm(p);
    }
    Ok(AutGroup {
        generators,
        orbits: uf.partition(),
        order: Some(BigUint::from(count)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Digraph {
        Digraph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    fn big(n: u64) -> Option<BigUint> {
        Some(BigUint::from(n))
    }

    #[test]
    fn edgeless_is_symmetric_group() {
        let a = automorphism_group(&Digraph::new(3));
        assert_eq!(a.order, big(6));
        assert_eq!(a.orbits.blocks(), &[vec![0, 1, 2]]);
        assert_eq!(brute_force_aut(&Digraph::new(3)).unwrap().order, big(6));
    }

    #[test]
    fn two_chain_is_rigid() {
        let g = Digraph::from_edges(2, [(0, 1)]);
        let a = automorphism_group(&g);
        assert!(a.is_trivial());
        assert_eq!(a.order, big(1));
        assert!(a.orbits.is_discrete());
        assert_eq!(brute_force_aut(&g).unwrap().order, big(1));
    }

    #[test]
    fn diamond_swaps_middle() {
        let a = automorphism_group(&diamond());
        assert_eq!(a.order, big(2));
        assert_eq!(a.generators, vec![vec![0, 2, 1, 3]]);
        assert_eq!(a.orbits.blocks(), &[vec![0], vec![1, 2], vec![3]]);
        assert_eq!(brute_force_aut(&diamond()).unwrap().generators, vec![vec![0, 2, 1, 3]]);
    }

    #[test]
    fn disjoint_chains() {
        // four 2-chains: Sym(4) on the chains
        let g = Digraph::from_edges(8, [(0, 1), (2, 3), (4, 5), (6, 7)]);
        let a = automorphism_group(&g);
        assert_eq!(a.order, big(24));
        assert_eq!(a.orbits.blocks(), &[vec![0, 2, 4, 6], vec![1, 3, 5, 7]]);
        assert!(a.generators.iter().all(|p| is_automorphism(&g, p)));
        assert_eq!(orbit_partition(&g), a.orbits);
    }

    #[test]
    fn directed_cycle_rotations() {
        let g = Digraph::from_edges(5, (0..5).map(|v| (v, (v + 1) % 5)));
        let a = automorphism_group(&g);
        assert_eq!(a.order, big(5));
        assert_eq!(a.orbits.len(), 1);
        assert_eq!(brute_force_aut(&g).unwrap().order, big(5));
    }

    #[test]
    fn self_loops_respected() {
        let g = Digraph::from_edges(3, [(0, 0), (1, 1)]);
        let a = automorphism_group(&g);
        assert_eq!(a.order, big(2));
        assert_eq!(a.orbits.blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn empty_graph() {
        let a = automorphism_group(&Digraph::new(0));
        assert!(a.is_trivial());
        assert_eq!(a.order, big(1));
        assert!(orbit_partition(&Digraph::new(0)).is_empty());
    }

    #[test]
    fn brute_force_limit() {
        assert_eq!(brute_force_aut(&Digraph::new(9)), Err(AnalysisError::TooLarge(9)));
    }

    #[test]
    fn automorphism_check() {
        let g = diamond();
        assert!(is_automorphism(&g, &[0, 1, 2, 3]));
        assert!(!is_automorphism(&g, &[3, 1, 2, 0]));
        assert!(!is_automorphism(&g, &[0, 1, 1, 3]));
        assert!(!is_automorphism(&g, &[0, 1, 2]));
    }
}
