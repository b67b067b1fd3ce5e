//! Dense elimination helpers: the null-space vector behind the signing
//! algorithm.

use crate::error::{Error, Result};

/// Relative pivot threshold for rank decisions.
const PIVOT_REL_TOL: f64 = 1e-10;

/// Finds a nontrivial dependence `alpha` with `sum_i alpha_i v_i = 0` for
/// `m >= d+1` vectors in `R^d`, normalized so that `max_i |alpha_i| = 1`.
///
/// Uses Gauss-Jordan elimination with partial pivoting on the `d x m`
/// coefficient matrix; the first free column gets coefficient one and the
/// pivot columns are solved by back-substitution.
pub fn dependence_vector(vectors: &[Vec<f64>], d: usize) -> Result<Vec<f64>> {
    let m = vectors.len();
    if m < d + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least d+1 = {} vectors, got {m}",
            d + 1
        )));
    }
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != d {
            return Err(Error::ShapeMismatch(format!(
                "vector {i} has dimension {}, expected {d}",
                v.len()
            )));
        }
    }

    // rows = coordinates, columns = vectors
    let mut a = vec![vec![0.0; m]; d];
    for (col, v) in vectors.iter().enumerate() {
        for (row, &c) in v.iter().enumerate() {
            a[row][col] = c;
        }
    }
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |s, &c| s.max(c.abs()));
    let threshold = PIVOT_REL_TOL * scale;

    let mut pivot_cols: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0;
    for col in 0..m {
        if rank == d {
            break;
        }
        let (best_row, best_val) = (rank..d)
            .map(|r| (r, a[r][col].abs()))
            .fold((rank, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_val <= threshold {
            continue; // free column
        }
        a.swap(rank, best_row);
        let inv = 1.0 / a[rank][col];
        for c in col..m {
            a[rank][c] *= inv;
        }
        for r in 0..d {
            if r != rank {
                let factor = a[r][col];
                if factor != 0.0 {
                    for c in col..m {
                        a[r][c] -= factor * a[rank][c];
                    }
                }
            }
        }
        pivot_cols.push((rank, col));
        rank += 1;
    }

    let is_pivot = {
        let mut mask = vec![false; m];
        for &(_, c) in &pivot_cols {
            mask[c] = true;
        }
        mask
    };
    let free = (0..m).find(|&c| !is_pivot[c]).ok_or_else(|| {
        Error::Infeasible("no free column: vectors are independent".into())
    })?;

    let mut alpha = vec![0.0; m];
    alpha[free] = 1.0;
    for &(row, col) in &pivot_cols {
        alpha[col] = -a[row][free];
    }

    let max_abs = alpha.iter().fold(0.0f64, |s, &c| s.max(c.abs()));
    for c in &mut alpha {
        *c /= max_abs;
    }
    Ok(alpha)
}
