//! Zero-sum sequence reordering with prefix sums bounded by `d * max ||a_i||`,
//! and its lift to matrices through column sums (bound `d * k`).
//!
//! The reordering peels one element at a time from the full index set `I_t`
//! (|I_t| = t, from t = N down to t = d), maintaining feasibility of
//!
//! ```text
//! P(I) = { lambda : I -> [0,1],  sum lambda_i = |I| - d,  sum lambda_i a_i = 0 }
//! ```
//!
//! The removed element goes to output position t. Feasibility of `P(I_t)`
//! gives `sum_{I_t} a_i = sum_{I_t} (1 - lambda_i) a_i`, whose norm is at
//! most `d * max ||a_i||` because the weights `1 - lambda_i` sum to `d`;
//! prefixes shorter than `d` are bounded by the same amount termwise. Works
//! for symmetric norms and non-symmetric seminorms alike, since only the
//! triangle inequality and positive homogeneity are used.

use crate::error::{Error, Result};
use crate::matrix::{RowPermutations, VectorMatrix};
use crate::norms::NormSpec;
use crate::simplex::feasible_point;

/// Feasibility tolerance for the peeling systems.
const FEAS_TOL: f64 = 1e-9;
/// Coefficients at most this far from zero make an element provably
/// removable by rescaling the current feasible point.
const ZERO_COEFF: f64 = 1e-12;

/// Reorders a zero-sum sequence so every prefix sum has norm at most
/// `d * max_i ||a_i||` (up to tolerance). Returns the permutation: position
/// `p` of the output holds input index `perm[p]`.
///
/// Entries need not be unit vectors. Errors when the total sum is larger
/// than `zero_tol` under `spec`.
pub fn steinitz_reorder(
    seq: &[Vec<f64>],
    d: usize,
    spec: &NormSpec,
    zero_tol: f64,
) -> Result<Vec<usize>> {
    let n = seq.len();
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    for (i, v) in seq.iter().enumerate() {
        if v.len() != d {
            return Err(Error::ShapeMismatch(format!(
                "element {i} has dimension {}, expected {d}",
                v.len()
            )));
        }
    }
    let mut total = vec![0.0; d];
    for v in seq {
        for (t, &c) in total.iter_mut().zip(v) {
            *t += c;
        }
    }
    let total_norm = spec.eval(&total);
    if total_norm > zero_tol {
        return Err(Error::ZeroSumViolation {
            norm: total_norm,
            tol: zero_tol,
        });
    }
    if n <= d {
        return Ok((0..n).collect());
    }

    let mut order = vec![0usize; n];
    let mut active: Vec<usize> = (0..n).collect();
    let mut lambda = solve_system(seq, &active, d)
        .ok_or_else(|| Error::Infeasible("initial weight system has no solution".into()))?;

    for t in (d + 1..=n).rev() {
        debug_assert_eq!(active.len(), t);
        // Candidates in ascending order of their current weight, index as
        // tie-break.
        let mut by_weight: Vec<usize> = (0..t).collect();
        by_weight.sort_by(|&a, &b| {
            lambda[a]
                .partial_cmp(&lambda[b])
                .expect("weights are finite")
                .then(active[a].cmp(&active[b]))
        });

        let mut removed = None;
        for &pos in &by_weight {
            if lambda[pos] <= ZERO_COEFF {
                // A zero-weight element is always removable: rescaling the
                // remaining weights by (t-1-d)/(t-d) stays feasible.
                let scale = (t - 1 - d) as f64 / (t - d) as f64;
                let mut next = lambda.clone();
                next.remove(pos);
                for l in &mut next {
                    *l *= scale;
                }
                removed = Some((pos, next));
                break;
            }
            let mut rest = active.clone();
            rest.remove(pos);
            if let Some(next) = solve_system(seq, &rest, d) {
                removed = Some((pos, next));
                break;
            }
        }
        let (pos, next) = removed.ok_or_else(|| {
            Error::Infeasible(format!("no removable element at set size {t}"))
        })?;
        order[t - 1] = active.remove(pos);
        lambda = next;
    }

    // The final d elements keep ascending index order.
    order[..d].copy_from_slice(&active);
    Ok(order)
}

/// Feasible point of `P(active)` if one exists.
fn solve_system(seq: &[Vec<f64>], active: &[usize], d: usize) -> Option<Vec<f64>> {
    let t = active.len();
    let cols: Vec<Vec<f64>> = active
        .iter()
        .map(|&i| {
            let mut col = Vec::with_capacity(d + 1);
            col.push(1.0);
            col.extend_from_slice(&seq[i]);
            col
        })
        .collect();
    let mut rhs = vec![0.0; d + 1];
    rhs[0] = (t - d) as f64;
    let tol = FEAS_TOL * rhs[0].max(1.0);
    feasible_point(&cols, &rhs, tol)
}

/// Rearranges all rows of `a` by the same column permutation, chosen so the
/// reordered column sums have bounded prefixes. Since every column sum lies
/// in `k` times the unit body, the resulting prefix column sums are bounded
/// by `d * k` (up to tolerance). Valid for seminorms.
pub fn column_steinitz(
    a: &VectorMatrix,
    spec: &NormSpec,
    zero_tol: f64,
) -> Result<RowPermutations> {
    let sums: Vec<Vec<f64>> = (0..a.n()).map(|i| a.column_sum(i)).collect();
    let perm = steinitz_reorder(&sums, a.d(), spec, zero_tol)?;
    Ok(RowPermutations::new(vec![perm; a.k()]))
}
