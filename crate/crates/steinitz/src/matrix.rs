//! Vector matrices, prefix column sums, and row permutations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::NormSpec;

/// A `k x n` grid of vectors in `R^d`, stored flat in row-major order.
///
/// Construction validates that the grid is rectangular and that every
/// coordinate is finite; values are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorMatrix {
    d: usize,
    k: usize,
    n: usize,
    data: Vec<f64>,
}

impl VectorMatrix {
    /// Builds a matrix from nested `entries[row][column][coordinate]`.
    pub fn new(d: usize, k: usize, n: usize, entries: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if d == 0 || k == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "d, k, n must all be positive".into(),
            ));
        }
        if entries.len() != k {
            return Err(Error::ShapeMismatch(format!(
                "expected {k} rows, got {}",
                entries.len()
            )));
        }
        let mut data = Vec::with_capacity(k * n * d);
        for (j, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "row {j} has {} columns, expected {n}",
                    row.len()
                )));
            }
            for (i, entry) in row.iter().enumerate() {
                if entry.len() != d {
                    return Err(Error::ShapeMismatch(format!(
                        "entry ({j}, {i}) has dimension {}, expected {d}",
                        entry.len()
                    )));
                }
                for &c in entry {
                    if !c.is_finite() {
                        return Err(Error::NonFinite { row: j, col: i });
                    }
                    data.push(c);
                }
            }
        }
        Ok(Self { d, k, n, data })
    }

    /// Builds a matrix entry by entry from a closure `(row, column) -> vector`.
    pub fn from_fn(
        d: usize,
        k: usize,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Vec<f64>,
    ) -> Result<Self> {
        let entries = (0..k)
            .map(|j| (0..n).map(|i| f(j, i)).collect())
            .collect();
        Self::new(d, k, n, entries)
    }

    pub fn zeros(d: usize, k: usize, n: usize) -> Result<Self> {
        Self::from_fn(d, k, n, |_, _| vec![0.0; d])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The vector in row `j`, column `i`.
    pub fn entry(&self, j: usize, i: usize) -> &[f64] {
        let base = (j * self.n + i) * self.d;
        &self.data[base..base + self.d]
    }

    /// Nested `entries[row][column][coordinate]` copy, for serialization.
    pub fn to_entries(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.k)
            .map(|j| (0..self.n).map(|i| self.entry(j, i).to_vec()).collect())
            .collect()
    }

    /// Sum of the entries in the first `m` columns, accumulated row-major
    /// (row by row within the included block) so the result is deterministic.
    pub fn prefix_column_sums(&self, m: usize) -> Result<Vec<f64>> {
        if m > self.n {
            return Err(Error::OutOfRange {
                index: m,
                max: self.n,
            });
        }
        let mut sum = vec![0.0; self.d];
        for j in 0..self.k {
            for i in 0..m {
                for (s, &c) in sum.iter_mut().zip(self.entry(j, i)) {
                    *s += c;
                }
            }
        }
        Ok(sum)
    }

    /// Sum of all entries (equals `prefix_column_sums(n)`).
    pub fn total_sum(&self) -> Vec<f64> {
        self.prefix_column_sums(self.n).expect("n is in range")
    }

    /// Sum of the entries of column `i`, rows in ascending order.
    pub fn column_sum(&self, i: usize) -> Vec<f64> {
        let mut sum = vec![0.0; self.d];
        for j in 0..self.k {
            for (s, &c) in sum.iter_mut().zip(self.entry(j, i)) {
                *s += c;
            }
        }
        sum
    }

    /// `max_m ||sigma_m||` over `m = 1..=n`.
    pub fn max_prefix_norm(&self, spec: &NormSpec) -> f64 {
        (1..=self.n)
            .map(|m| spec.eval(&self.prefix_column_sums(m).expect("m in range")))
            .fold(0.0, f64::max)
    }

    /// Rearranges each row: output entry `(j, p)` is this matrix's entry
    /// `(j, perms[j][p])`. Entries are moved bit-exactly, never recomputed.
    pub fn apply_permutations(&self, perms: &RowPermutations) -> Result<VectorMatrix> {
        if !verify_row_permuted(self, perms) {
            return Err(Error::ShapeMismatch(
                "permutations do not form a bijection of the columns per row".into(),
            ));
        }
        let mut data = Vec::with_capacity(self.data.len());
        for (j, row) in perms.rows().iter().enumerate() {
            for &src in row {
                data.extend_from_slice(self.entry(j, src));
            }
        }
        Ok(VectorMatrix {
            d: self.d,
            k: self.k,
            n: self.n,
            data,
        })
    }
}

/// One permutation of the column indices `0..n` per row; position `p` of
/// row `j` holds the original column index sent to `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RowPermutations {
    perms: Vec<Vec<usize>>,
}

impl RowPermutations {
    pub fn new(perms: Vec<Vec<usize>>) -> Self {
        Self { perms }
    }

    pub fn identity(k: usize, n: usize) -> Self {
        Self {
            perms: vec![(0..n).collect(); k],
        }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn k(&self) -> usize {
        self.perms.len()
    }

    /// Composition: applying `self` and then `next` to a matrix equals
    /// applying the returned permutations once.
    pub fn compose(&self, next: &RowPermutations) -> Result<RowPermutations> {
        if self.perms.len() != next.perms.len() {
            return Err(Error::ShapeMismatch(
                "permutation row counts differ".into(),
            ));
        }
        let perms = self
            .perms
            .iter()
            .zip(&next.perms)
            .map(|(first, second)| {
                if first.len() != second.len() {
                    return Err(Error::ShapeMismatch(
                        "permutation row lengths differ".into(),
                    ));
                }
                second
                    .iter()
                    .map(|&p| {
                        first.get(p).copied().ok_or(Error::OutOfRange {
                            index: p,
                            max: first.len(),
                        })
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Ok(RowPermutations { perms })
    }
}

/// Structural certificate that `perms` is a legal row permutation for `a`:
/// `k` rows, each a bijection of `0..n`. Malformed input yields `false`.
pub fn verify_row_permuted(a: &VectorMatrix, perms: &RowPermutations) -> bool {
    if perms.perms.len() != a.k {
        return false;
    }
    perms.perms.iter().all(|row| {
        if row.len() != a.n {
            return false;
        }
        let mut seen = vec![false; a.n];
        row.iter().all(|&p| {
            if p >= a.n || seen[p] {
                false
            } else {
                seen[p] = true;
                true
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_matrix(row: &[f64]) -> VectorMatrix {
        VectorMatrix::new(1, 1, row.len(), vec![row.iter().map(|&x| vec![x]).collect()])
            .unwrap()
    }

    #[test]
    fn prefix_sums_single_row() {
        let a = row_matrix(&[1.0, -1.0]);
        assert_eq!(a.prefix_column_sums(0).unwrap(), vec![0.0]);
        assert_eq!(a.prefix_column_sums(1).unwrap(), vec![1.0]);
        assert_eq!(a.prefix_column_sums(2).unwrap(), vec![0.0]);
        assert!(a.prefix_column_sums(3).is_err());
    }

    #[test]
    fn identity_permutation_is_noop() {
        let a = VectorMatrix::from_fn(2, 2, 3, |j, i| vec![j as f64, i as f64]).unwrap();
        let c = a
            .apply_permutations(&RowPermutations::identity(2, 3))
            .unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn swap_exchanges_columns() {
        let a = row_matrix(&[3.0, 7.0]);
        let p = RowPermutations::new(vec![vec![1, 0]]);
        let c = a.apply_permutations(&p).unwrap();
        assert_eq!(c.entry(0, 0), &[7.0]);
        assert_eq!(c.entry(0, 1), &[3.0]);
    }

    #[test]
    fn inverse_composition_restores_input() {
        let a = VectorMatrix::from_fn(2, 2, 4, |j, i| vec![(j + i) as f64, i as f64]).unwrap();
        let p = RowPermutations::new(vec![vec![2, 0, 3, 1], vec![1, 3, 0, 2]]);
        let mut inv_rows = Vec::new();
        for row in p.rows() {
            let mut inv = vec![0; row.len()];
            for (pos, &src) in row.iter().enumerate() {
                inv[src] = pos;
            }
            inv_rows.push(inv);
        }
        let inv = RowPermutations::new(inv_rows);
        let back = a
            .apply_permutations(&p)
            .unwrap()
            .apply_permutations(&inv)
            .unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn rejects_malformed_permutations() {
        let a = VectorMatrix::zeros(1, 1, 3).unwrap();
        assert!(verify_row_permuted(&a, &RowPermutations::identity(1, 3)));
        // repeated index
        assert!(!verify_row_permuted(
            &a,
            &RowPermutations::new(vec![vec![0, 0, 1]])
        ));
        // index out of range
        assert!(!verify_row_permuted(
            &a,
            &RowPermutations::new(vec![vec![0, 1, 3]])
        ));
        // wrong row count
        assert!(!verify_row_permuted(
            &a,
            &RowPermutations::identity(2, 3)
        ));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = VectorMatrix::new(1, 1, 1, vec![vec![vec![f64::NAN]]]);
        assert!(matches!(err, Err(Error::NonFinite { .. })));
    }
}
