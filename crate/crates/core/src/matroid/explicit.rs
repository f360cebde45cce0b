use super::{to_mask, IncrementalOracle, Membership, OracleKind, EXPLICIT_LIMIT};
use crate::error::{validation, Result};
use std::collections::HashSet;

/// Validates an explicit family and returns it as bitmasks.
pub(crate) fn family_masks(n: usize, sets: &[Vec<usize>]) -> Result<HashSet<u64>> {
    if n > EXPLICIT_LIMIT {
        return Err(validation(format!("explicit matroids are limited to {EXPLICIT_LIMIT} elements, got {n}")));
    }
    let mut family = HashSet::with_capacity(sets.len());
    for set in sets {
        family.insert(to_mask(n, set)?);
    }
    if !family.contains(&0) {
        return Err(validation("explicit family must contain the empty set"));
    }
    for &s in &family {
        let mut m = s;
        while m != 0 {
            let bit = m & m.wrapping_neg();
            if !family.contains(&(s & !bit)) {
                return Err(validation(format!(
                    "explicit family is not downward closed: {:?} present but {:?} missing",
                    mask_elems(s),
                    mask_elems(s & !bit)
                )));
            }
            m &= m - 1;
        }
    }
    Ok(family)
}

fn mask_elems(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Table lookup on a bitmask of the current set.
pub(crate) struct ExplicitOracle {
    family: HashSet<u64>,
    members: Membership,
    mask: u64,
}

impl ExplicitOracle {
    pub(crate) fn new(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        Ok(ExplicitOracle { family: family_masks(n, sets)?, members: Membership::new(n), mask: 0 })
    }

    fn rank_of(&self, mask: u64) -> usize {
        if self.family.contains(&mask) {
            return mask.count_ones() as usize;
        }
        self.family
            .iter()
            .filter(|&&f| f & !mask == 0)
            .map(|f| f.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }
}

impl IncrementalOracle for ExplicitOracle {
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
        self.mask |= 1 << i;
        Ok(())
    }
    fn delete(&mut self, i: usize) -> Result<()> {
        self.members.delete(i)?;
        self.mask &= !(1 << i);
        Ok(())
    }
    fn is_independent(&mut self) -> bool {
        self.family.contains(&self.mask)
    }
    fn rank(&mut self) -> Result<usize> {
        Ok(self.rank_of(self.mask))
    }
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool> {
        self.members.require(i)?;
        Ok(self.rank_of(self.mask & !(1 << i)) < self.rank_of(self.mask))
    }
}
