/// Subsets of `0..n` (as bitmasks) of sizes `lo..=hi`, by increasing size and
/// lexicographically (as sorted id sequences) within each size.
pub(crate) struct SubsetsBySize {
    n: usize,
    size: usize,
    hi: usize,
    cur: Option<Vec<usize>>,
}

impl SubsetsBySize {
    pub(crate) fn new(n: usize, lo: usize, hi: usize) -> Self {
        debug_assert!(n <= 64);
        let hi = hi.min(n);
        let mut it = SubsetsBySize { n, size: lo, hi, cur: None };
        if lo <= hi {
            it.cur = Some((0..lo).collect());
        }
        it
    }
}

impl Iterator for SubsetsBySize {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.cur.as_mut()?;
        let mask = cur.iter().fold(0u64, |m, &v| m | 1 << v);
        // advance to the next combination of the same size
        let k = cur.len();
        let mut i = k;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if cur[i] < self.n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.size += 1;
            self.cur = (self.size <= self.hi).then(|| (0..self.size).collect());
        }
        Some(mask)
    }
}

pub(crate) fn edge_masks(edges: &[Vec<usize>]) -> Vec<u64> {
    edges.iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect()
}
