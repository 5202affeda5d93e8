use super::AnalysisError;

/// Partition of `0..n` into non-empty blocks.
///
/// Blocks are sorted internally and ordered by their smallest member, so two
/// equal partitions always compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, AnalysisError> {
        let mut block_of = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(AnalysisError::InvalidPartition("empty block".into()));
            }
            for &v in block {
                if v >= n {
                    return Err(AnalysisError::InvalidPartition(format!("vertex {v} out of range")));
                }
                if block_of[v] != usize::MAX {
                    return Err(AnalysisError::InvalidPartition(format!("vertex {v} in two blocks")));
                }
                block_of[v] = i;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(AnalysisError::InvalidPartition(format!("vertex {v} not covered")));
        }
        Ok(Self::from_labels(&block_of))
    }

    /// Groups vertices with equal labels; `labels[v]` is an arbitrary block
    /// tag for vertex `v`.
    pub fn from_labels<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        // scanning vertices in order numbers blocks by smallest member
        for (v, l) in labels.iter().enumerate() {
            let b = *index.entry(*l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(v);
            block_of.push(b);
        }
        Partition { blocks, block_of }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|v| vec![v]).collect(),
            block_of: (0..n).collect(),
        }
    }

    pub fn whole(n: usize) -> Self {
        Self::from_labels(&vec![0u8; n])
    }

    /// Number of vertices partitioned.
    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    /// True when every block is a singleton.
    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }

    /// `outer` partitions the blocks of `self`; the result partitions the
    /// vertices of `self` accordingly.
    pub fn compose(&self, outer: &Partition) -> Result<Partition, AnalysisError> {
        if outer.n() != self.len() {
            return Err(AnalysisError::InvalidPartition(format!(
                "outer partition covers {} blocks, inner has {}",
                outer.n(),
                self.len()
            )));
        }
        let labels: Vec<usize> = self.block_of.iter().map(|&b| outer.block_of(b)).collect();
        Ok(Self::from_labels(&labels))
    }
}
