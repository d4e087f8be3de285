//! Exact and greedy set cover over bitmask families (universe of at most 64).

use crate::certify::subsets::{bit, members};

fn full(universe: usize) -> u64 {
    if universe == 64 {
        !0
    } else {
        bit(universe) - 1
    }
}

/// Greedy cover: repeatedly take the set covering the most uncovered items,
/// lowest index on ties. `None` if the family does not cover the universe.
pub fn greedy_set_cover(universe: usize, sets: &[u64]) -> Option<Vec<usize>> {
    let mut uncovered = full(universe);
    let mut chosen = Vec::new();
    while uncovered != 0 {
        let (idx, gain) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, (s & uncovered).count_ones()))
            .fold((usize::MAX, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if gain == 0 {
            return None;
        }
        chosen.push(idx);
        uncovered &= !sets[idx];
    }
    Some(chosen)
}

/// [`greedy_set_cover`] over index lists, for universes larger than 64.
pub(crate) fn greedy_cover_lists(universe: usize, sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut covered = vec![false; universe];
    let mut left = universe;
    let mut chosen = Vec::new();
    while left > 0 {
        let (idx, gain) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.iter().filter(|&&e| !covered[e]).count()))
            .fold((usize::MAX, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if gain == 0 {
            return None;
        }
        for &e in &sets[idx] {
            if !covered[e] {
                covered[e] = true;
                left -= 1;
            }
        }
        chosen.push(idx);
    }
    Some(chosen)
}

struct Solver<'a> {
    sets: &'a [u64],
    /// Sets containing each item.
    covering: Vec<Vec<usize>>,
    best: Vec<usize>,
}

impl Solver<'_> {
    fn search(&mut self, uncovered: u64, chosen: &mut Vec<usize>) {
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let max_gain = self
            .sets
            .iter()
            .map(|s| (s & uncovered).count_ones())
            .max()
            .unwrap_or(0) as usize;
        if max_gain == 0 {
            return;
        }
        let need = (uncovered.count_ones() as usize).div_ceil(max_gain);
        if chosen.len() + need >= self.best.len() {
            return;
        }
        // branch on the uncovered item with the fewest covering sets
        let item = members(uncovered)
            .into_iter()
            .min_by_key(|&e| (self.covering[e].len(), e))
            .expect("uncovered is nonempty");
        let mut options = self.covering[item].clone();
        options.sort_by_key(|&s| (std::cmp::Reverse((self.sets[s] & uncovered).count_ones()), s));
        for s in options {
            chosen.push(s);
            self.search(uncovered & !self.sets[s], chosen);
            chosen.pop();
        }
    }
}

/// Minimum set cover by depth-first branch and bound, seeded with the greedy
/// cover. `None` if the family does not cover the universe.
pub fn exact_set_cover(universe: usize, sets: &[u64]) -> Option<Vec<usize>> {
    let greedy = greedy_set_cover(universe, sets)?;
    let mut covering = vec![Vec::new(); universe];
    for (i, s) in sets.iter().enumerate() {
        for e in members(*s & full(universe)) {
            covering[e].push(i);
        }
    }
    let mut solver = Solver {
        sets,
        covering,
        best: greedy,
    };
    solver.search(full(universe), &mut Vec::new());
    let mut best = solver.best;
    best.sort_unstable();
    Some(best)
}
