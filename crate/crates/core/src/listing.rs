//! Distinct-element listing over the run tags `A` via previous-occurrence minima.

use crate::rmq::SparseTable;
use crate::text::TagId;

#[derive(Debug, Clone)]
pub struct DistinctLister {
    values: Vec<TagId>,
    /// Previous occurrence of the same value, shifted by one (0 = none).
    prev: SparseTable<usize>,
}

impl DistinctLister {
    pub fn new(values: &[TagId]) -> Self {
        let mut last = std::collections::HashMap::new();
        let prev = values
            .iter()
            .enumerate()
            .map(|(i, &v)| last.insert(v, i + 1).unwrap_or(0))
            .collect();
        DistinctLister {
            values: values.to_vec(),
            prev: SparseTable::new(prev),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Distinct values of `values[s..=e]`, ordered by first occurrence.
    /// `visits` grows by the number of ranges examined, at most twice the
    /// number of values reported.
    pub fn list(&self, s: usize, e: usize, visits: &mut usize) -> Vec<TagId> {
        let mut found = Vec::new();
        if s <= e && e < self.values.len() {
            self.collect(s, s, e, &mut found, visits);
        }
        found.sort_unstable();
        found.into_iter().map(|pos| self.values[pos]).collect()
    }

    fn collect(&self, s: usize, lo: usize, hi: usize, found: &mut Vec<usize>, visits: &mut usize) {
        *visits += 1;
        let m = self.prev.argmin(lo, hi);
        // prev is shifted by one, so "before s" reads as "at most s".
        if self.prev.key(m) > s {
            return;
        }
        found.push(m);
        if m > lo {
            self.collect(s, lo, m - 1, found, visits);
        }
        if m < hi {
            self.collect(s, m + 1, hi, found, visits);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn equal_values_list_once() {
        let lister = DistinctLister::new(&[4, 4, 4]);
        let mut visits = 0;
        assert_eq!(lister.list(0, 2, &mut visits), vec![4]);
        assert!(visits <= 2);
        assert!(lister.list(2, 1, &mut visits).is_empty());
    }

    #[test]
    fn matches_scan_with_bounded_visits() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut trials = 0;
        while trials < 10_000 {
            let n = rng.gen_range(1..120);
            let sigma = rng.gen_range(1..12);
            let values: Vec<TagId> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
            let lister = DistinctLister::new(&values);
            for _ in 0..100 {
                let s = rng.gen_range(0..n);
                let e = rng.gen_range(s..n);
                let mut expect = Vec::new();
                for &v in &values[s..=e] {
                    if !expect.contains(&v) {
                        expect.push(v);
                    }
                }
                let mut visits = 0;
                assert_eq!(lister.list(s, e, &mut visits), expect);
                assert!(visits <= 2 * expect.len());
                trials += 1;
            }
        }
    }
}
