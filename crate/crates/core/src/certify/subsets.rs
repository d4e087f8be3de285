//! Search over subsets of a small universe (at most 64 items) under a
//! monotone feasibility oracle: every subset of a feasible set is feasible.
//!
//! Used with "fits in one cap of radius phi" and "fits in one ball of
//! diameter d".

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::par;

pub const MAX_UNIVERSE: usize = 64;

/// Ceiling on the number of feasible subsets visited by [`maximal_feasible`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 4_000_000;

pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

pub(crate) fn members(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

fn above(i: usize) -> u64 {
    if i + 1 >= 64 {
        0
    } else {
        !0u64 << (i + 1)
    }
}

pub(crate) struct SubsetSearch<F> {
    len: usize,
    /// `compat[i]` has bit `j` set iff `{i, j}` is feasible.
    compat: Vec<u64>,
    oracle: F,
}

impl<F> SubsetSearch<F>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    pub(crate) fn new(len: usize, oracle: F) -> Result<Self> {
        if len > MAX_UNIVERSE {
            return Err(Error::LimitExceeded(format!(
                "subset search over {len} items (max {MAX_UNIVERSE})"
            )));
        }
        let rows = par::map_range(0..len, |i| {
            let mut row = 0u64;
            for j in 0..len {
                if j == i || oracle(&[i.min(j), i.max(j)]) {
                    row |= bit(j);
                }
            }
            row
        });
        Ok(SubsetSearch {
            len,
            compat: rows,
            oracle,
        })
    }

    fn extend(&self, current: &[usize], mut cand: u64) -> u64 {
        let mut out = 0u64;
        let mut buf = current.to_vec();
        while cand != 0 {
            let k = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            buf.push(k);
            if (self.oracle)(&buf) {
                out |= bit(k);
            }
            buf.pop();
        }
        out
    }

    fn initial_candidates(&self, i: usize, current: &[usize]) -> u64 {
        let cand = self.compat[i] & above(i);
        if current.len() == 1 {
            cand
        } else {
            self.extend(current, cand)
        }
    }

    /// Largest feasible subset. `incumbent` is a size already known to be
    /// achievable; the returned subset has at least that size whenever one
    /// exists. Among maximum subsets the one found first in index order wins,
    /// independent of the worker count.
    pub(crate) fn max_feasible(&self, incumbent: usize) -> Vec<usize> {
        if self.len == 0 {
            return Vec::new();
        }
        let global = AtomicUsize::new(incumbent.max(1));
        let branches = par::map_range(0..self.len, |i| {
            let mut best: Vec<usize> = Vec::new();
            let mut current = vec![i];
            let cand = self.initial_candidates(i, &current);
            self.dfs_max(&mut current, cand, &mut best, &global);
            best
        });
        let mut winner: Vec<usize> = Vec::new();
        for b in branches {
            if b.len() > winner.len() {
                winner = b;
            }
        }
        winner
    }

    fn dfs_max(&self, current: &mut Vec<usize>, cand: u64, best: &mut Vec<usize>, global: &AtomicUsize) {
        let bound = current.len() + cand.count_ones() as usize;
        if bound <= best.len() || bound < global.load(Ordering::Relaxed) {
            return;
        }
        if current.len() > best.len() {
            *best = current.clone();
            global.fetch_max(best.len(), Ordering::Relaxed);
        }
        let mut rest = cand;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let bound = current.len() + 1 + rest.count_ones() as usize;
            if bound <= best.len() || bound < global.load(Ordering::Relaxed) {
                return;
            }
            current.push(k);
            let next = self.extend(current, rest & self.compat[k]);
            self.dfs_max(current, next, best, global);
            current.pop();
        }
    }

    /// Every inclusion-maximal feasible subset, as bitmasks, in a fixed order.
    pub(crate) fn maximal_feasible(&self, limit: usize) -> Result<Vec<u64>> {
        let visited = AtomicUsize::new(0);
        let branches = par::map_range(0..self.len, |i| {
            let mut out = Vec::new();
            let mut current = vec![i];
            let cand = self.initial_candidates(i, &current);
            self.dfs_maximal(&mut current, cand, &mut out, &visited, limit)
                .map(|_| out)
        });
        let mut all = Vec::new();
        for b in branches {
            all.extend(b?);
        }
        Ok(all)
    }

    fn dfs_maximal(
        &self,
        current: &mut Vec<usize>,
        cand: u64,
        out: &mut Vec<u64>,
        visited: &AtomicUsize,
        limit: usize,
    ) -> Result<()> {
        if visited.fetch_add(1, Ordering::Relaxed) >= limit {
            return Err(Error::LimitExceeded(format!(
                "more than {limit} feasible subsets"
            )));
        }
        if cand == 0 {
            if self.is_maximal(current) {
                out.push(current.iter().fold(0u64, |m, &i| m | bit(i)));
            }
            return Ok(());
        }
        if cand.count_ones() > 1 {
            // when every remaining candidate fits at once, the union is the
            // only maximal set below this node
            let mut full = current.clone();
            full.extend(members(cand));
            if (self.oracle)(&full) {
                if self.is_maximal(&full) {
                    out.push(full.iter().fold(0u64, |m, &i| m | bit(i)));
                }
                return Ok(());
            }
        }
        let mut rest = cand;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            current.push(k);
            let next = self.extend(current, rest & self.compat[k]);
            self.dfs_maximal(current, next, out, visited, limit)?;
            current.pop();
        }
        Ok(())
    }

    fn is_maximal(&self, current: &[usize]) -> bool {
        let mask = current.iter().fold(0u64, |m, &i| m | bit(i));
        let common = current.iter().fold(!0u64, |m, &i| m & self.compat[i]);
        let outside = common & !mask & if self.len == 64 { !0 } else { bit(self.len) - 1 };
        if outside == 0 {
            return true;
        }
        self.extend(current, outside) == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Points on a line; a subset is feasible when its span is at most 2.
    fn line_oracle(xs: &'static [f64]) -> impl Fn(&[usize]) -> bool + Sync {
        move |s: &[usize]| {
            let lo = s.iter().map(|&i| xs[i]).fold(f64::INFINITY, f64::min);
            let hi = s.iter().map(|&i| xs[i]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo <= 2.0
        }
    }

    static XS: [f64; 7] = [0.0, 1.0, 1.5, 4.0, 5.0, 5.5, 6.0];

    #[test]
    fn max_subset_on_a_line() {
        let s = SubsetSearch::new(XS.len(), line_oracle(&XS)).unwrap();
        assert_eq!(s.max_feasible(0), vec![3, 4, 5, 6]);
        assert_eq!(s.max_feasible(4), vec![3, 4, 5, 6]);
    }

    #[test]
    fn maximal_subsets_on_a_line() {
        let s = SubsetSearch::new(XS.len(), line_oracle(&XS)).unwrap();
        let mut got: Vec<Vec<usize>> = s
            .maximal_feasible(1000)
            .unwrap()
            .into_iter()
            .map(members)
            .collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 1, 2], vec![3, 4, 5, 6]]);
    }

    #[test]
    fn enumeration_limit() {
        let s = SubsetSearch::new(XS.len(), line_oracle(&XS)).unwrap();
        assert!(matches!(s.maximal_feasible(3), Err(Error::LimitExceeded(_))));
    }

    #[test]
    fn universe_limit() {
        assert!(SubsetSearch::new(65, |_: &[usize]| true).is_err());
        let s = SubsetSearch::new(64, |_: &[usize]| true).unwrap();
        assert_eq!(s.maximal_feasible(10_000).unwrap(), vec![!0u64]);
    }
}
