//! LU factorization with partial pivoting for banded matrices.
//!
//! Rows are stored as windows `(first column, values)`. Pivoting swaps
//! whole windows, so the factorization is `P A = L U` with the unit lower
//! factor kept left of the diagonal in each window.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Row {
    start: usize,
    values: Vec<f64>,
}

impl Row {
    fn end(&self) -> usize {
        self.start + self.values.len()
    }

    fn get(&self, col: usize) -> f64 {
        if col >= self.start && col < self.end() {
            self.values[col - self.start]
        } else {
            0.0
        }
    }

    fn extend_to(&mut self, end: usize) {
        if end > self.end() {
            let len = end - self.start;
            self.values.resize(len, 0.0);
        }
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    rows: Vec<Row>,
    perm: Vec<usize>,
}

impl BandedLu {
    /// Factorizes `A`, given as symmetric sorted adjacency triples, minus `shift`
    /// on the diagonal.
    pub fn factor(
        n: usize,
        entries: &[(usize, usize, f64)],
        diagonal: &[f64],
        shift: f64,
    ) -> Result<Self> {
        let mut lo = vec![usize::MAX; n];
        let mut hi = vec![0usize; n];
        for i in 0..n {
            lo[i] = i;
            hi[i] = i;
        }
        for &(i, j, _) in entries {
            lo[i] = lo[i].min(j);
            hi[i] = hi[i].max(j);
        }
        // Non-decreasing window starts keep every "start <= k" scan a prefix.
        for i in (0..n.saturating_sub(1)).rev() {
            lo[i] = lo[i].min(lo[i + 1]);
        }
        let mut rows: Vec<Row> = (0..n)
            .map(|i| Row {
                start: lo[i],
                values: vec![0.0; hi[i] - lo[i] + 1],
            })
            .collect();
        for &(i, j, v) in entries {
            rows[i].values[j - lo[i]] += v;
        }
        for i in 0..n {
            rows[i].values[i - lo[i]] += diagonal[i] - shift;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = rows
            .iter()
            .flat_map(|r| r.values.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        for k in 0..n {
            let mut best = k;
            let mut best_val = rows[k].get(k).abs();
            let mut r = k + 1;
            while r < n && rows[r].start <= k {
                let v = rows[r].get(k).abs();
                if v > best_val {
                    best = r;
                    best_val = v;
                }
                r += 1;
            }
            if best_val <= 1e-14 * scale {
                return Err(Error::SingularShift { pivot: k });
            }
            if best != k {
                rows.swap(k, best);
                perm.swap(k, best);
            }
            let pivot_end = rows[k].end();
            let pivot = rows[k].get(k);
            let (head, tail) = rows.split_at_mut(k + 1);
            let prow = &head[k];
            for row in tail.iter_mut() {
                if row.start > k {
                    break;
                }
                let a = row.get(k);
                if a == 0.0 {
                    continue;
                }
                let l = a / pivot;
                row.extend_to(pivot_end);
                let off_r = row.start;
                let off_p = prow.start;
                row.values[k - off_r] = l;
                for c in (k + 1)..pivot_end {
                    row.values[c - off_r] -= l * prow.values[c - off_p];
                }
            }
        }
        Ok(BandedLu { rows, perm })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.rows.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let row = &self.rows[r];
            let mut s = y[r];
            for (v, yc) in row.values.iter().zip(&y[row.start..r]) {
                s -= v * yc;
            }
            y[r] = s;
        }
        for r in (0..n).rev() {
            let row = &self.rows[r];
            let mut s = y[r];
            for (v, yc) in row.values[r + 1 - row.start..]
                .iter()
                .zip(&y[r + 1..row.end()])
            {
                s -= v * yc;
            }
            y[r] = s / row.values[r - row.start];
        }
        b.copy_from_slice(&y);
    }
}
