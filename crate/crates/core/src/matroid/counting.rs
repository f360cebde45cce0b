use super::{IncrementalOracle, Membership, OracleKind};
use crate::error::{validation, Result};

pub(crate) struct UniformOracle {
    k: usize,
    members: Membership,
}

impl UniformOracle {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        UniformOracle { k, members: Membership::new(n) }
    }
}

impl IncrementalOracle for UniformOracle {
    fn ground_size(&self) -> usize {
        self.members.ground_size()
    }
    fn kind(&self) -> OracleKind {
        OracleKind::RankCapable
    }
    fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }
    fn current_len(&self) -> usize {
        self.members.len()
    }
    fn insert(&mut self, i: usize) -> Result<()> {
        self.members.insert(i)
    }
    fn delete(&mut self, i: usize) -> Result<()> {
        self.members.delete(i)
    }
    fn is_independent(&mut self) -> bool {
        self.members.len() <= self.k
    }
    fn rank(&mut self) -> Result<usize> {
        Ok(self.members.len().min(self.k))
    }
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool> {
        self.members.require(i)?;
        Ok(self.members.len() <= self.k)
    }
}

/// Block index of every element, after checking that the blocks partition
/// `0..n` and that no cap exceeds its block.
pub(crate) fn partition_layout(blocks: &[Vec<usize>], caps: &[usize]) -> Result<Vec<usize>> {
    if blocks.len() != caps.len() {
        return Err(validation(format!("{} blocks but {} caps", blocks.len(), caps.len())));
    }
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut block_of = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        if caps[b] > block.len() {
            return Err(validation(format!("cap {} of block {b} exceeds its size {}", caps[b], block.len())));
        }
        for &i in block {
            if i >= n {
                return Err(validation(format!("element {i} outside 0..{n}; blocks must partition the ground set")));
            }
            if block_of[i] != usize::MAX {
                return Err(validation(format!("element {i} appears in more than one block")));
            }
            block_of[i] = b;
        }
    }
    Ok(block_of)
}

pub(crate) struct PartitionOracle {
    block_of: Vec<usize>,
    caps: Vec<usize>,
    counts: Vec<usize>,
    over_cap: usize,
    rank: usize,
    members: Membership,
}

impl PartitionOracle {
    pub(crate) fn new(blocks: &[Vec<usize>], caps: &[usize]) -> Result<Self> {
        let block_of = partition_layout(blocks, caps)?;
        let n = block_of.len();
        Ok(PartitionOracle {
            block_of,
            caps: caps.to_vec(),
            counts: vec![0; blocks.len()],
            over_cap: 0,
            rank: 0,
            members: Membership::new(n),
        })
    }
}

impl IncrementalOracle for PartitionOracle {
    fn ground_size(&self) -> usize {
        self.members.ground_size()
    }
    fn kind(&self) -> OracleKind {
        OracleKind::RankCapable
    }
    fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }
    fn current_len(&self) -> usize {
        self.members.len()
    }
    fn insert(&mut self, i: usize) -> Result<()> {
        self.members.insert(i)?;
        let b = self.block_of[i];
        self.counts[b] += 1;
        if self.counts[b] <= self.caps[b] {
            self.rank += 1;
        } else if self.counts[b] == self.caps[b] + 1 {
            self.over_cap += 1;
        }
        Ok(())
    }
    fn delete(&mut self, i: usize) -> Result<()> {
        self.members.delete(i)?;
        let b = self.block_of[i];
        if self.counts[b] <= self.caps[b] {
            self.rank -= 1;
        } else if self.counts[b] == self.caps[b] + 1 {
            self.over_cap -= 1;
        }
        self.counts[b] -= 1;
        Ok(())
    }
    fn is_independent(&mut self) -> bool {
        self.over_cap == 0
    }
    fn rank(&mut self) -> Result<usize> {
        Ok(self.rank)
    }
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool> {
        self.members.require(i)?;
        let b = self.block_of[i];
        Ok(self.counts[b] <= self.caps[b])
    }
}
