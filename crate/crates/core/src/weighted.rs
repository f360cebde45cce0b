//! Dynamic weighted selection over a fixed universe `0..n`.
//!
//! Weights live in the leaves of an implicit binary tree whose internal nodes
//! hold subtree sums. Every update recomputes the sums on the leaf-to-root path
//! from the children, so the maintained total never accumulates drift from
//! repeated add/subtract.

use crate::error::{validation, Error, Result};

#[derive(Clone, Debug)]
pub struct WeightedIndex {
    n: usize,
    leaves: usize,
    tree: Vec<f64>,
    active: usize,
}

impl WeightedIndex {
    /// An index over `0..n` with every weight zero.
    pub fn new(n: usize) -> Self {
        let leaves = n.max(1).next_power_of_two();
        WeightedIndex {
            n,
            leaves,
            tree: vec![0.0; 2 * leaves],
            active: 0,
        }
    }

    /// Builds an index from a weight vector in `O(n)`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let mut w = WeightedIndex::new(weights.len());
        for (i, &x) in weights.iter().enumerate() {
            check_weight(x)?;
            w.tree[w.leaves + i] = x;
            if x > 0.0 {
                w.active += 1;
            }
        }
        w.rebuild();
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.tree[self.leaves + i]
    }

    /// Number of elements with nonzero weight.
    pub fn active_count(&self) -> usize {
        self.active
    }

    pub fn total(&self) -> f64 {
        self.tree[1]
    }

    /// Sets the weight of `i`; zero deactivates it.
    pub fn set(&mut self, i: usize, x: f64) -> Result<()> {
        if i >= self.n {
            return Err(validation(format!("element {i} outside universe of size {}", self.n)));
        }
        check_weight(x)?;
        self.assign(i, x);
        Ok(())
    }

    /// Unchecked variant of [`set`](Self::set) for the sampler hot loop.
    #[inline]
    pub(crate) fn assign(&mut self, i: usize, x: f64) {
        let mut node = self.leaves + i;
        let old = self.tree[node];
        match (old > 0.0, x > 0.0) {
            (false, true) => self.active += 1,
            (true, false) => self.active -= 1,
            _ => {}
        }
        self.tree[node] = x;
        while node > 1 {
            node >>= 1;
            self.tree[node] = self.tree[2 * node] + self.tree[2 * node + 1];
        }
    }

    /// Returns the element whose cumulative interval contains `u`, where `u`
    /// is drawn uniformly from `(0, total)`. A `u` sitting exactly on a
    /// cumulative boundary selects the lower-indexed element.
    pub fn sample(&self, u: f64) -> Result<usize> {
        if self.total() <= 0.0 {
            return Err(Error::EmptySelection);
        }
        Ok(self.descend(u))
    }

    #[inline]
    pub(crate) fn descend(&self, mut u: f64) -> usize {
        let mut node = 1;
        while node < self.leaves {
            let left = self.tree[2 * node];
            if (u <= left && left > 0.0) || self.tree[2 * node + 1] <= 0.0 {
                node *= 2;
            } else {
                u -= left;
                node = 2 * node + 1;
            }
        }
        node - self.leaves
    }

    /// Recomputes every internal sum from the leaves.
    pub fn rebuild(&mut self) {
        for node in (1..self.leaves).rev() {
            self.tree[node] = self.tree[2 * node] + self.tree[2 * node + 1];
        }
    }
}

fn check_weight(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(validation(format!("weight must be finite and nonnegative, got {x}")));
    }
    Ok(())
}
