use fixedbitset::FixedBitSet;

use super::{AnalysisError, Digraph};

/// Transitive closure: `reaches(u, v)` iff a path of at least one edge
/// leads from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    forward: Vec<FixedBitSet>,
    backward: Vec<FixedBitSet>,
}

pub fn reachability(g: &Digraph) -> Reachability {
    let n = g.n();
    let mut forward = vec![FixedBitSet::with_capacity(n); n];
    match g.topo_order() {
        Some(order) => {
            for &v in order.iter().rev() {
                let mut row = FixedBitSet::with_capacity(n);
                for &w in g.succ(v) {
                    row.insert(w);
                    row.union_with(&forward[w]);
                }
                forward[v] = row;
            }
        }
        None => {
            for (v, row) in forward.iter_mut().enumerate() {
                let mut stack: Vec<usize> = g.succ(v).to_vec();
                while let Some(w) = stack.pop() {
                    if !row.put(w) {
                        stack.extend_from_slice(g.succ(w));
                    }
                }
            }
        }
    }
    let mut backward = vec![FixedBitSet::with_capacity(n); n];
    for (u, row) in forward.iter().enumerate() {
        for v in row.ones() {
            backward[v].insert(u);
        }
    }
    Reachability { forward, backward }
}

impl Reachability {
    pub fn n(&self) -> usize {
        self.forward.len()
    }

    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.forward[u].contains(v)
    }

    /// Vertices reachable from `v`.
    pub fn descendants(&self, v: usize) -> &FixedBitSet {
        &self.forward[v]
    }

    /// Vertices that reach `v`.
    pub fn ancestors(&self, v: usize) -> &FixedBitSet {
        &self.backward[v]
    }

    fn check(&self, v: usize) -> Result<(), AnalysisError> {
        if v >= self.n() {
            return Err(AnalysisError::VertexOutOfRange(v));
        }
        Ok(())
    }

    fn set(&self, vs: &[usize]) -> Result<FixedBitSet, AnalysisError> {
        if vs.is_empty() {
            return Err(AnalysisError::EmptySet);
        }
        let mut s = FixedBitSet::with_capacity(self.n());
        for &v in vs {
            self.check(v)?;
            s.insert(v);
        }
        Ok(s)
    }

    /// `u ⊥ v`: neither reaches the other. Defined for distinct vertices only.
    pub fn independent(&self, u: usize, v: usize) -> Result<bool, AnalysisError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(AnalysisError::SamePair(u));
        }
        Ok(!self.reaches(u, v) && !self.reaches(v, u))
    }

    fn ind_class_set(&self, v: usize) -> FixedBitSet {
        let mut s = self.forward[v].clone();
        s.union_with(&self.backward[v]);
        s.toggle_range(..);
        // on cyclic graphs v may reach itself
        s.insert(v);
        s
    }

    /// `[v]_⊥`: `v` together with every vertex independent of it, ascending.
    pub fn ind_class(&self, v: usize) -> Result<Vec<usize>, AnalysisError> {
        self.check(v)?;
        Ok(self.ind_class_set(v).ones().collect())
    }

    pub fn ind_class_size(&self, v: usize) -> Result<usize, AnalysisError> {
        self.check(v)?;
        Ok(self.ind_class_set(v).count_ones(..))
    }

    /// Pairwise independence of the members of `set`.
    pub fn is_independent_set(&self, set: &[usize]) -> Result<bool, AnalysisError> {
        let s = self.set(set)?;
        Ok(s.ones().all(|v| self.forward[v].is_disjoint(&s)))
    }

    /// Maximality through `I = ∩_{x ∈ I} [x]_⊥`.
    pub fn is_maximally_independent(&self, set: &[usize]) -> Result<bool, AnalysisError> {
        let s = self.set(set)?;
        let mut meet = FixedBitSet::with_capacity(self.n());
        meet.insert_range(..);
        for v in s.ones() {
            meet.intersect_with(&self.ind_class_set(v));
        }
        Ok(meet == s)
    }
}

pub fn is_completely_serial(g: &Digraph) -> Result<bool, AnalysisError> {
    if !g.is_dag() {
        return Err(AnalysisError::NotADag);
    }
    let r = reachability(g);
    Ok((0..g.n()).all(|v| r.ind_class_set(v).count_ones(..) == 1))
}

pub fn is_completely_parallel(g: &Digraph) -> Result<bool, AnalysisError> {
    if !g.is_dag() {
        return Err(AnalysisError::NotADag);
    }
    let r = reachability(g);
    Ok((0..g.n()).all(|v| r.ind_class_set(v).count_ones(..) == g.n()))
}
