//! Exhaustive ground truth at desk scale: the best achievable maximum prefix
//! norm over row permutations (`exact_u`), over sign assignments (`exact_v`),
//! and the minimum first-column sum over row-permuted copies.
//!
//! Enumeration is lexicographic and keeps the first strict minimum, so the
//! reported witness is the lexicographically smallest one. Oversized search
//! spaces are refused, never truncated.

use crate::error::{Error, Result};
use crate::matrix::{RowPermutations, VectorMatrix};
use crate::norms::NormSpec;
use crate::signing::{apply_signs, SignMatrix};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `U(A) = min_C max_m ||sigma_m(C)||` over all row-permuted copies, with a
/// witness. Refuses when `(n!)^k` exceeds `budget`.
pub fn exact_u(
    a: &VectorMatrix,
    spec: &NormSpec,
    budget: u64,
) -> Result<(f64, RowPermutations)> {
    let size = factorial(a.n()).saturating_pow(a.k() as u32);
    check_budget(size, budget)?;

    let mut rows: Vec<Vec<usize>> = vec![(0..a.n()).collect(); a.k()];
    let mut best: Option<(f64, RowPermutations)> = None;
    loop {
        let perms = RowPermutations::new(rows.clone());
        let value = a.apply_permutations(&perms)?.max_prefix_norm(spec);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, perms));
        }
        if !advance_rows(&mut rows) {
            break;
        }
    }
    Ok(best.expect("at least the identity combination was visited"))
}

/// `V(B) = min_eps max_m ||sigma_m(B^eps)||` over all sign matrices, with a
/// witness. Refuses when `2^{kn}` exceeds `budget`.
pub fn exact_v(b: &VectorMatrix, spec: &NormSpec, budget: u64) -> Result<(f64, SignMatrix)> {
    let cells = b.k() * b.n();
    let size = if cells >= 128 {
        u128::MAX
    } else {
        1u128 << cells
    };
    check_budget(size, budget)?;

    let mut best: Option<(f64, SignMatrix)> = None;
    for code in 0..size {
        // Flat row-major pattern; the first cell is the most significant
        // digit and -1 sorts before +1, so ascending codes are in
        // lexicographic order.
        let signs = (0..b.k())
            .map(|j| {
                (0..b.n())
                    .map(|i| {
                        let bit = cells - 1 - (j * b.n() + i);
                        if code >> bit & 1 == 0 {
                            -1
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect();
        let eps = SignMatrix::new(signs)?;
        let value = apply_signs(b, &eps)?.max_prefix_norm(spec);
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, eps));
        }
    }
    Ok(best.expect("at least one sign pattern was visited"))
}

/// Exact minimum of `||sigma_1(C)||` over row-permuted copies: one entry is
/// chosen per row, `n^k` combinations. Refuses beyond 10^7 combinations.
pub fn column_one_min(a: &VectorMatrix, spec: &NormSpec) -> Result<f64> {
    let size = (a.n() as u128).saturating_pow(a.k() as u32);
    check_budget(size, DEFAULT_BUDGET)?;

    let mut choice = vec![0usize; a.k()];
    let mut best = f64::INFINITY;
    loop {
        let mut sum = vec![0.0; a.d()];
        for (j, &i) in choice.iter().enumerate() {
            for (s, &c) in sum.iter_mut().zip(a.entry(j, i)) {
                *s += c;
            }
        }
        best = best.min(spec.eval(&sum));

        // odometer over the row choices, last row fastest
        let mut pos = a.k();
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < a.n() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

fn check_budget(size: u128, budget: u64) -> Result<()> {
    if size > u128::from(budget) {
        return Err(Error::BudgetExceeded {
            size,
            budget: u128::from(budget),
        });
    }
    Ok(())
}

fn factorial(n: usize) -> u128 {
    (2..=n as u128).try_fold(1u128, u128::checked_mul).unwrap_or(u128::MAX)
}

/// Advances the per-row permutations to the next combination in lexicographic
/// order (last row fastest); false when exhausted.
fn advance_rows(rows: &mut [Vec<usize>]) -> bool {
    for row in rows.iter_mut().rev() {
        if next_permutation(row) {
            return true;
        }
        row.sort_unstable();
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_matrix(row: &[f64]) -> VectorMatrix {
        VectorMatrix::new(1, 1, row.len(), vec![row.iter().map(|&x| vec![x]).collect()])
            .unwrap()
    }

    #[test]
    fn u_of_zero_matrix_is_zero() {
        let a = VectorMatrix::zeros(2, 2, 3).unwrap();
        let (value, _) = exact_u(&a, &NormSpec::L2, DEFAULT_BUDGET).unwrap();
        assert_eq!(value, 0.0);
    }

    #[test]
    fn u_of_plus_minus_one() {
        let a = row_matrix(&[1.0, -1.0]);
        let (value, witness) = exact_u(&a, &NormSpec::L1, DEFAULT_BUDGET).unwrap();
        assert_eq!(value, 1.0);
        // lexicographically smallest witness is the identity
        assert_eq!(witness.rows()[0], vec![0, 1]);
    }

    #[test]
    fn u_refuses_oversized_search() {
        let a = VectorMatrix::zeros(1, 1, 12).unwrap();
        assert!(matches!(
            exact_u(&a, &NormSpec::L1, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn v_of_single_unit_entry_is_one() {
        let b = row_matrix(&[1.0]);
        let (value, _) = exact_v(&b, &NormSpec::L1, DEFAULT_BUDGET).unwrap();
        assert_eq!(value, 1.0);
    }

    #[test]
    fn v_of_two_ones() {
        let b = row_matrix(&[1.0, 1.0]);
        let (value, witness) = exact_v(&b, &NormSpec::L1, DEFAULT_BUDGET).unwrap();
        assert_eq!(value, 1.0);
        // (-1, +1) precedes (+1, -1) in the enumeration order
        assert_eq!(witness.rows()[0], vec![-1, 1]);
    }

    #[test]
    fn v_of_zero_matrix_is_zero() {
        let b = VectorMatrix::zeros(2, 2, 2).unwrap();
        let (value, _) = exact_v(&b, &NormSpec::Linf, DEFAULT_BUDGET).unwrap();
        assert_eq!(value, 0.0);
    }

    #[test]
    fn column_one_min_single_row_picks_smallest_entry() {
        let a = row_matrix(&[3.0, -2.0, 5.0]);
        assert_eq!(column_one_min(&a, &NormSpec::L1).unwrap(), 2.0);
    }

    #[test]
    fn column_one_min_of_zero_matrix() {
        let a = VectorMatrix::zeros(2, 3, 2).unwrap();
        assert_eq!(column_one_min(&a, &NormSpec::L1).unwrap(), 0.0);
    }

    #[test]
    fn permutation_enumeration_is_lexicographic() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }
}
