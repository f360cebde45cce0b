use super::{IncrementalOracle, Membership, OracleKind};
use crate::error::Result;

/// Column matroid over GF(2). Rank is recomputed by elimination on every
/// query, `O(|S| * r)` word operations.
pub(crate) struct BinaryOracle {
    columns: Vec<Vec<u64>>,
    members: Membership,
}

impl BinaryOracle {
    pub(crate) fn new(matrix: &[Vec<u8>]) -> Self {
        let n = matrix.first().map_or(0, Vec::len);
        let words = matrix.len().div_ceil(64).max(1);
        let mut columns = vec![vec![0u64; words]; n];
        for (r, row) in matrix.iter().enumerate() {
            for (c, &bit) in row.iter().enumerate() {
                if bit == 1 {
                    columns[c][r / 64] |= 1 << (r % 64);
                }
            }
        }
        BinaryOracle { columns, members: Membership::new(n) }
    }

    /// Rank of the current columns, optionally skipping one.
    fn rank_without(&self, skip: Option<usize>) -> usize {
        // basis vectors stored with their pivot (lowest set bit)
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for c in 0..self.columns.len() {
            if !self.members.contains(c) || Some(c) == skip {
                continue;
            }
            let mut v = self.columns[c].clone();
            for (pivot, b) in &basis {
                if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x ^= y;
                    }
                }
            }
            if let Some(p) = lowest_bit(&v) {
                basis.push((p, v));
            }
        }
        basis.len()
    }
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

impl IncrementalOracle for BinaryOracle {
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
        self.rank_without(None) == self.members.len()
    }
    fn rank(&mut self) -> Result<usize> {
        Ok(self.rank_without(None))
    }
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool> {
        self.members.require(i)?;
        Ok(self.rank_without(Some(i)) < self.rank_without(None))
    }
}
