//! Dense phase-1 simplex for box-constrained feasibility systems.
//!
//! Solves "find `lambda` in `[0,1]^t` with `A lambda = rhs`" by minimizing
//! the sum of artificial variables, with Bland's anti-cycling rule. Systems
//! here are small (a handful of equality rows), so a full dense tableau with
//! reduced costs recomputed per iteration is adequate and deterministic.

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-9;
const RATIO_EPS: f64 = 1e-12;
const SNAP_EPS: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// Returns a feasible `lambda` (length `cols.len()`) with residual sum below
/// `feas_tol`, or `None` when the phase-1 optimum stays above the tolerance.
///
/// `cols[j]` is the column of structural variable `j`; all structural
/// variables are bounded to `[0, 1]`.
pub(crate) fn feasible_point(cols: &[Vec<f64>], rhs: &[f64], feas_tol: f64) -> Option<Vec<f64>> {
    let m = rhs.len();
    let t = cols.len();
    debug_assert!(cols.iter().all(|c| c.len() == m));

    let total = t + m;
    let sigma: Vec<f64> = rhs.iter().map(|&b| if b >= 0.0 { 1.0 } else { -1.0 }).collect();

    // Tableau w.r.t. the all-artificial basis B = diag(sigma): row r of the
    // structural block is sigma_r * cols[.][r], the artificial block is I.
    let mut tab: Vec<Vec<f64>> = (0..m)
        .map(|r| {
            let mut row: Vec<f64> = cols.iter().map(|c| sigma[r] * c[r]).collect();
            row.extend((0..m).map(|q| if q == r { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    let mut x_b: Vec<f64> = rhs.iter().map(|&b| b.abs()).collect();
    let mut basis: Vec<usize> = (t..total).collect();
    let mut state: Vec<VarState> = (0..total)
        .map(|j| if j < t { VarState::AtLower } else { VarState::Basic(j - t) })
        .collect();
    // Artificials never re-enter once they leave the basis.
    let mut banned = vec![false; total];

    let cost = |j: usize| if j < t { 0.0 } else { 1.0 };
    let upper = |j: usize| if j < t { 1.0 } else { f64::INFINITY };

    let iter_cap = 1000 + 50 * total;
    for _ in 0..iter_cap {
        // Reduced costs against the current basis.
        let mut entering = None;
        for j in 0..total {
            if banned[j] || matches!(state[j], VarState::Basic(_)) {
                continue;
            }
            let cbar = cost(j)
                - (0..m)
                    .map(|r| cost(basis[r]) * tab[r][j])
                    .sum::<f64>();
            let dir = match state[j] {
                VarState::AtLower if cbar < -COST_TOL => 1.0,
                VarState::AtUpper if cbar > COST_TOL => -1.0,
                _ => continue,
            };
            entering = Some((j, dir));
            break; // Bland: smallest eligible index
        }
        let Some((j, dir)) = entering else {
            break; // optimal
        };

        // Ratio test: how far can the entering variable move.
        let own_range = upper(j); // lower bounds are all zero, so range = upper
        let mut best_ratio = f64::INFINITY;
        let mut leave: Option<(usize, bool)> = None; // (row, leaves to upper bound)
        for r in 0..m {
            let g = dir * tab[r][j];
            if g > PIVOT_TOL {
                let ratio = (x_b[r].max(0.0)) / g;
                if ratio < best_ratio - RATIO_EPS
                    || (ratio < best_ratio + RATIO_EPS
                        && leave.is_some_and(|(lr, _)| basis[r] < basis[lr]))
                {
                    best_ratio = ratio.min(best_ratio);
                    leave = Some((r, false));
                }
            } else if g < -PIVOT_TOL {
                let ub = upper(basis[r]);
                if ub.is_finite() {
                    let ratio = (ub - x_b[r]).max(0.0) / (-g);
                    if ratio < best_ratio - RATIO_EPS
                        || (ratio < best_ratio + RATIO_EPS
                            && leave.is_some_and(|(lr, _)| basis[r] < basis[lr]))
                    {
                        best_ratio = ratio.min(best_ratio);
                        leave = Some((r, true));
                    }
                }
            }
        }

        if own_range <= best_ratio + RATIO_EPS {
            // Bound flip: the entering variable crosses its own range.
            for r in 0..m {
                x_b[r] -= dir * own_range * tab[r][j];
            }
            state[j] = match state[j] {
                VarState::AtLower => VarState::AtUpper,
                VarState::AtUpper => VarState::AtLower,
                VarState::Basic(_) => unreachable!(),
            };
            continue;
        }
        let Some((pr, to_upper)) = leave else {
            return None; // unbounded ray; cannot happen for a phase-1 objective
        };

        let delta = best_ratio;
        let entering_value = match state[j] {
            VarState::AtLower => dir * delta,
            VarState::AtUpper => 1.0 + dir * delta,
            VarState::Basic(_) => unreachable!(),
        };
        for r in 0..m {
            if r != pr {
                x_b[r] -= dir * delta * tab[r][j];
            }
        }
        let leaving = basis[pr];
        state[leaving] = if to_upper { VarState::AtUpper } else { VarState::AtLower };
        if leaving >= t {
            banned[leaving] = true;
        }

        let pivot = tab[pr][j];
        let inv = 1.0 / pivot;
        for c in 0..total {
            tab[pr][c] *= inv;
        }
        for r in 0..m {
            if r != pr {
                let factor = tab[r][j];
                if factor != 0.0 {
                    for c in 0..total {
                        tab[r][c] -= factor * tab[pr][c];
                    }
                }
            }
        }
        basis[pr] = j;
        state[j] = VarState::Basic(pr);
        x_b[pr] = entering_value;
    }

    let residual: f64 = (0..m)
        .filter(|&r| basis[r] >= t)
        .map(|r| x_b[r].max(0.0))
        .sum();
    if residual > feas_tol {
        return None;
    }

    let mut lambda = vec![0.0; t];
    for (j, lam) in lambda.iter_mut().enumerate() {
        *lam = match state[j] {
            VarState::AtLower => 0.0,
            VarState::AtUpper => 1.0,
            VarState::Basic(r) => {
                let v = x_b[r].clamp(0.0, 1.0);
                if v < SNAP_EPS {
                    0.0
                } else if v > 1.0 - SNAP_EPS {
                    1.0
                } else {
                    v
                }
            }
        };
    }
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(cols: &[Vec<f64>], rhs: &[f64], lambda: &[f64], tol: f64) {
        for (r, &b) in rhs.iter().enumerate() {
            let got: f64 = cols.iter().zip(lambda).map(|(c, &l)| c[r] * l).sum();
            assert!((got - b).abs() <= tol, "row {r}: {got} vs {b}");
        }
        assert!(lambda.iter().all(|&l| (-1e-12..=1.0 + 1e-12).contains(&l)));
    }

    #[test]
    fn simple_feasible_system() {
        // lambda_1 + lambda_2 = 1, lambda_1 - lambda_2 = 0 -> (0.5, 0.5)
        let cols = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let rhs = vec![1.0, 0.0];
        let lambda = feasible_point(&cols, &rhs, 1e-9).unwrap();
        check(&cols, &rhs, &lambda, 1e-9);
    }

    #[test]
    fn infeasible_by_bounds() {
        // lambda_1 + lambda_2 = 3 cannot be met inside the unit box.
        let cols = vec![vec![1.0], vec![1.0]];
        let rhs = vec![3.0];
        assert!(feasible_point(&cols, &rhs, 1e-9).is_none());
    }

    #[test]
    fn negative_rhs() {
        let cols = vec![vec![-2.0], vec![1.0]];
        let rhs = vec![-1.5];
        let lambda = feasible_point(&cols, &rhs, 1e-9).unwrap();
        check(&cols, &rhs, &lambda, 1e-9);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let cols = vec![vec![1.0, 2.0], vec![1.0, 2.0]];
        let rhs = vec![1.0, 2.0];
        let lambda = feasible_point(&cols, &rhs, 1e-9).unwrap();
        check(&cols, &rhs, &lambda, 1e-9);
    }

    #[test]
    fn zero_sum_uniform_point_exists() {
        // Columns of a zero-sum vector family admit lambda = (t-d)/t uniform;
        // the solver must find some feasible point, not necessarily that one.
        let vs = [
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let cols: Vec<Vec<f64>> = vs
            .iter()
            .map(|v| {
                let mut c = vec![1.0];
                c.extend(v);
                c
            })
            .collect();
        let rhs = vec![2.0, 0.0, 0.0]; // t - d = 4 - 2
        let lambda = feasible_point(&cols, &rhs, 1e-9).unwrap();
        check(&cols, &rhs, &lambda, 1e-9);
    }
}
