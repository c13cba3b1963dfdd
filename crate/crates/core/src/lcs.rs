//! Longest common subsequence and the indel distance it induces.

use crate::model::{Instance, Probe};

/// Standard quadratic DP, `O(|a|·|b|)` time and `O(|b|)` space.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// One longest common subsequence as index pairs `(i, j)` with `a[i] == b[j]`.
///
/// Ties prefer the leftmost match positions.
pub fn lcs_pairs<T: PartialEq>(a: &[T], b: &[T]) -> Vec<(usize, usize)> {
    // suffix table: best[i][j] = LCS(a[i..], b[j..]); greedy forward walk is leftmost
    let (n, m) = (a.len(), b.len());
    let mut best = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            best[i][j] = if a[i] == b[j] {
                best[i + 1][j + 1] + 1
            } else {
                best[i + 1][j].max(best[i][j + 1])
            };
        }
    }
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(best[0][0]);
    while i < n && j < m {
        if a[i] == b[j] && best[i][j] == best[i + 1][j + 1] + 1 {
            out.push((i, j));
            i += 1;
            j += 1;
        } else if best[i + 1][j] >= best[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// `len(a) + len(b) - 2·|LCS(a, b)|`.
pub fn seq_distance<T: PartialEq>(a: &[T], b: &[T]) -> u64 {
    (a.len() + b.len() - 2 * lcs_length(a, b)) as u64
}

pub fn probe_distance(a: &Probe, b: &Probe) -> u64 {
    seq_distance(&a.seq, &b.seq)
}

/// Symmetric integer distance matrix over probe ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<u64>,
}

impl MetricSpace {
    /// Panics if the matrix is not square, symmetric, with zero diagonal.
    pub fn from_matrix(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            assert_eq!(row[i], 0, "non-zero diagonal at {i}");
            for (j, &d) in row.iter().enumerate() {
                assert_eq!(d, rows[j][i], "asymmetric at ({i}, {j})");
            }
            dist.extend_from_slice(row);
        }
        MetricSpace { n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn max_distance(&self) -> u64 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// First violated triangle `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k)`.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    if self.dist(i, k) > self.dist(i, j) + self.dist(j, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

pub fn build_metric(instance: &Instance) -> MetricSpace {
    let n = instance.n();
    let mut dist = vec![0u64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = probe_distance(&instance.probes[i], &instance.probes[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let metric = MetricSpace { n, dist };
    debug_assert!(metric.triangle_violation().is_none());
    metric
}
