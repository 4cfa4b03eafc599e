//! Range-minimum machinery shared by the run structures, the interval
//! hierarchy and the tag tree.

/// Sparse table answering leftmost-argmin queries over an immutable array in
/// O(1) after O(n log n) preprocessing.
#[derive(Debug, Clone)]
pub struct SparseTable<K> {
    keys: Vec<K>,
    levels: Vec<Vec<u32>>,
}

impl<K: Ord + Copy> SparseTable<K> {
    pub fn new(keys: Vec<K>) -> Self {
        let n = keys.len();
        let mut levels: Vec<Vec<u32>> = Vec::new();
        if n > 0 {
            levels.push((0..n as u32).collect());
            let mut width = 1;
            while 2 * width <= n {
                let prev = levels.last().unwrap();
                let next: Vec<u32> = (0..=n - 2 * width)
                    .map(|i| {
                        let a = prev[i];
                        let b = prev[i + width];
                        if keys[a as usize] <= keys[b as usize] {
                            a
                        } else {
                            b
                        }
                    })
                    .collect();
                levels.push(next);
                width *= 2;
            }
        }
        SparseTable { keys, levels }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: usize) -> K {
        self.keys[i]
    }

    /// Leftmost position of the minimum in `keys[l..=r]`.
    pub fn argmin(&self, l: usize, r: usize) -> usize {
        debug_assert!(l <= r && r < self.keys.len());
        let k = (r - l + 1).ilog2() as usize;
        let a = self.levels[k][l];
        let b = self.levels[k][r + 1 - (1 << k)];
        if self.keys[a as usize] <= self.keys[b as usize] {
            a as usize
        } else {
            b as usize
        }
    }

    pub fn min(&self, l: usize, r: usize) -> K {
        self.keys[self.argmin(l, r)]
    }
}

/// Binary min-tree over an array, answering "nearest position below a
/// threshold" to the left or right of a bound in O(log n).
#[derive(Debug, Clone)]
pub struct MinTree {
    len: usize,
    size: usize,
    mins: Vec<u64>,
}

impl MinTree {
    pub fn new(values: &[u64]) -> Self {
        let len = values.len();
        let size = len.next_power_of_two().max(1);
        let mut mins = vec![u64::MAX; 2 * size];
        mins[size..size + len].copy_from_slice(values);
        for v in (1..size).rev() {
            mins[v] = mins[2 * v].min(mins[2 * v + 1]);
        }
        MinTree { len, size, mins }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Largest `p <= hi` with `values[p] < threshold`.
    pub fn last_below(&self, hi: usize, threshold: u64, steps: &mut usize) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        let hi = hi.min(self.len - 1);
        self.last_below_rec(1, 0, self.size - 1, hi, threshold, steps)
    }

    fn last_below_rec(
        &self,
        node: usize,
        nl: usize,
        nr: usize,
        hi: usize,
        threshold: u64,
        steps: &mut usize,
    ) -> Option<usize> {
        *steps += 1;
        if nl > hi || self.mins[node] >= threshold {
            return None;
        }
        if nl == nr {
            return Some(nl);
        }
        let mid = (nl + nr) / 2;
        self.last_below_rec(2 * node + 1, mid + 1, nr, hi, threshold, steps)
            .or_else(|| self.last_below_rec(2 * node, nl, mid, hi, threshold, steps))
    }

    /// Smallest `p >= lo` with `values[p] < threshold`.
    pub fn first_below(&self, lo: usize, threshold: u64, steps: &mut usize) -> Option<usize> {
        if lo >= self.len {
            return None;
        }
        self.first_below_rec(1, 0, self.size - 1, lo, threshold, steps)
    }

    fn first_below_rec(
        &self,
        node: usize,
        nl: usize,
        nr: usize,
        lo: usize,
        threshold: u64,
        steps: &mut usize,
    ) -> Option<usize> {
        *steps += 1;
        if nr < lo || self.mins[node] >= threshold {
            return None;
        }
        if nl == nr {
            return Some(nl);
        }
        let mid = (nl + nr) / 2;
        self.first_below_rec(2 * node, nl, mid, lo, threshold, steps)
            .or_else(|| self.first_below_rec(2 * node + 1, mid + 1, nr, lo, threshold, steps))
    }
}

/// Number of distinct values in each inclusive range `values[l..=r]`,
/// computed offline with a Fenwick tree swept by right endpoint.
pub fn offline_distinct_counts(values: &[u32], ranges: &[(usize, usize)]) -> Vec<usize> {
    let n = values.len();
    let mut order: Vec<usize> = (0..ranges.len()).collect();
    order.sort_unstable_by_key(|&q| ranges[q].1);

    let mut fenwick = vec![0i64; n + 1];
    let add = |fw: &mut Vec<i64>, pos: usize, delta: i64| {
        let mut i = pos + 1;
        while i <= n {
            fw[i] += delta;
            i += i & i.wrapping_neg();
        }
    };
    let prefix = |fw: &Vec<i64>, pos: usize| -> i64 {
        let mut i = pos;
        let mut s = 0;
        while i > 0 {
            s += fw[i];
            i -= i & i.wrapping_neg();
        }
        s
    };

    let mut last_seen: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    let mut out = vec![0usize; ranges.len()];
    let mut next = 0usize;
    for q in order {
        let (l, r) = ranges[q];
        while next <= r {
            if let Some(prev) = last_seen.insert(values[next], next) {
                add(&mut fenwick, prev, -1);
            }
            add(&mut fenwick, next, 1);
            next += 1;
        }
        out[q] = (prefix(&fenwick, r + 1) - prefix(&fenwick, l)) as usize;
    }
    out
}
