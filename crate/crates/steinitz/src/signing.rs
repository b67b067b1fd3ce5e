//! Sign assignment with bounded prefix sums.
//!
//! `balanced_signs` keeps a window of at most `d+1` undecided elements with
//! fractional coefficients in `[-1, 1]` while the decided prefix coefficients
//! are exact signs, preserving `sum lambda_i a_i = 0` over everything
//! processed. Whenever the window is full, a linear dependence of its vectors
//! moves the coefficients until one hits a bound and gets decided. Prefix
//! sums of the final signs stay within `2d - 1` of zero in the given norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dependence_vector;
use crate::matrix::VectorMatrix;
use crate::norms::NormSpec;

/// Input unit-norm slack.
const UNIT_TOL: f64 = 1e-9;
/// A coefficient this close to +-1 is considered decided.
const HIT_SNAP: f64 = 1e-9;

/// A `k x n` grid of signs, values exactly -1 or +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignMatrix {
    signs: Vec<Vec<i8>>,
}

impl SignMatrix {
    pub fn new(signs: Vec<Vec<i8>>) -> Result<Self> {
        if signs
            .iter()
            .any(|row| row.iter().any(|&s| s != 1 && s != -1))
        {
            return Err(Error::InvalidParameter(
                "sign entries must be +1 or -1".into(),
            ));
        }
        Ok(Self { signs })
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.signs
    }

    pub fn k(&self) -> usize {
        self.signs.len()
    }

    pub fn n(&self) -> usize {
        self.signs.first().map_or(0, Vec::len)
    }

    pub fn get(&self, j: usize, i: usize) -> i8 {
        self.signs[j][i]
    }
}

/// Entrywise product `{eps_i^j * b_i^j}`.
pub fn apply_signs(b: &VectorMatrix, eps: &SignMatrix) -> Result<VectorMatrix> {
    if eps.k() != b.k() || eps.signs.iter().any(|row| row.len() != b.n()) {
        return Err(Error::ShapeMismatch(
            "sign matrix shape does not match the vector matrix".into(),
        ));
    }
    VectorMatrix::from_fn(b.d(), b.k(), b.n(), |j, i| {
        let s = f64::from(eps.get(j, i));
        b.entry(j, i).iter().map(|&c| s * c).collect()
    })
}

/// Exhaustive leftover rounding is attempted up to this window size.
const ROUNDING_SEARCH_LIMIT: usize = 12;

/// Signs `eps_i` for a sequence of unit vectors such that every prefix
/// `sum_{i<=m} eps_i a_i` has norm at most `2d - 1` (up to tolerance).
/// Requires a symmetric `spec` and `||a_i|| <= 1`.
///
/// The core is the floating-coefficient window construction; on its own it
/// only forces prefixes under `2d`, so the at most `d` leftover coefficients
/// are rounded by exhaustive search over their sign choices, and the greedy
/// assignment replaces the result when it realizes a strictly smaller
/// maximum prefix norm (at `d = 1` greedy never exceeds `1 = 2d - 1`).
pub fn balanced_signs(seq: &[Vec<f64>], d: usize, spec: &NormSpec) -> Result<Vec<i8>> {
    if !spec.is_symmetric() {
        return Err(Error::NonSymmetricNorm);
    }
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
        let norm = spec.eval(v);
        if norm > 1.0 + UNIT_TOL {
            return Err(Error::UnitNormViolation {
                norm,
                tol: UNIT_TOL,
            });
        }
    }

    let n = seq.len();
    let mut signs: Vec<i8> = vec![1; n];
    let mut window: Vec<usize> = Vec::with_capacity(d + 1);
    let mut coeff: Vec<f64> = Vec::with_capacity(d + 1);

    for (i, v) in seq.iter().enumerate() {
        if v.iter().all(|&c| c == 0.0) {
            continue; // zero vectors cannot move any prefix; sign +1
        }
        window.push(i);
        coeff.push(0.0);
        while window.len() == d + 1 {
            eliminate(seq, d, &mut window, &mut coeff, &mut signs)?;
        }
    }
    round_leftovers(seq, spec, &mut signs, &window, &coeff);

    let window_value = max_signed_prefix(seq, &signs, spec);
    let greedy = greedy_signs(seq, spec);
    if max_signed_prefix(seq, &greedy, spec) < window_value {
        return Ok(greedy);
    }
    Ok(signs)
}

/// Decides the leftover window coefficients: nearest sign (ties to +1) by
/// default, replaced by the exhaustive sign choice over the leftovers that
/// minimizes the realized maximum prefix norm.
fn round_leftovers(
    seq: &[Vec<f64>],
    spec: &NormSpec,
    signs: &mut [i8],
    window: &[usize],
    coeff: &[f64],
) {
    for (&i, &l) in window.iter().zip(coeff) {
        signs[i] = if l >= 0.0 { 1 } else { -1 };
    }
    let w = window.len();
    if w == 0 || w > ROUNDING_SEARCH_LIMIT {
        return;
    }

    // Prefixes strictly before the first leftover are unaffected.
    let d = seq.first().map_or(0, Vec::len);
    let start = window[0];
    let mut base = vec![0.0; d];
    for (v, &s) in seq[..start].iter().zip(signs.iter()) {
        for (acc, &c) in base.iter_mut().zip(v) {
            *acc += f64::from(s) * c;
        }
    }

    let defaults: Vec<i8> = window.iter().map(|&i| signs[i]).collect();
    let mut best_mask = 0u32;
    let mut best_value = f64::INFINITY;
    for mask in 0..1u32 << w {
        for (bit, &i) in window.iter().enumerate() {
            signs[i] = if mask >> bit & 1 == 0 {
                defaults[bit]
            } else {
                -defaults[bit]
            };
        }
        let mut sum = base.clone();
        let mut value = 0.0f64;
        for (v, &s) in seq[start..].iter().zip(&signs[start..]) {
            for (acc, &c) in sum.iter_mut().zip(v) {
                *acc += f64::from(s) * c;
            }
            value = value.max(spec.eval(&sum));
        }
        // Strict improvement keeps the default rounding on ties.
        if value < best_value {
            best_value = value;
            best_mask = mask;
        }
    }
    for (bit, &i) in window.iter().enumerate() {
        signs[i] = if best_mask >> bit & 1 == 0 {
            defaults[bit]
        } else {
            -defaults[bit]
        };
    }
}

fn max_signed_prefix(seq: &[Vec<f64>], signs: &[i8], spec: &NormSpec) -> f64 {
    let d = seq.first().map_or(0, Vec::len);
    let mut sum = vec![0.0; d];
    let mut worst = 0.0f64;
    for (v, &s) in seq.iter().zip(signs) {
        for (acc, &c) in sum.iter_mut().zip(v) {
            *acc += f64::from(s) * c;
        }
        worst = worst.max(spec.eval(&sum));
    }
    worst
}

/// One dependence step: move the window coefficients along the dependence
/// direction until at least one hits -1 or +1, then decide every hit.
fn eliminate(
    seq: &[Vec<f64>],
    d: usize,
    window: &mut Vec<usize>,
    coeff: &mut Vec<f64>,
    signs: &mut [i8],
) -> Result<()> {
    let vectors: Vec<Vec<f64>> = window.iter().map(|&i| seq[i].clone()).collect();
    let alpha = dependence_vector(&vectors, d)?;

    // Largest step in each direction keeping all coefficients in [-1, 1].
    let mut pos = f64::INFINITY;
    let mut neg = f64::INFINITY;
    for (&l, &a) in coeff.iter().zip(&alpha) {
        if a > 0.0 {
            pos = pos.min((1.0 - l) / a);
            neg = neg.min((l + 1.0) / a);
        } else if a < 0.0 {
            pos = pos.min((l + 1.0) / -a);
            neg = neg.min((1.0 - l) / -a);
        }
    }
    // max |alpha_i| = 1 keeps both extents finite; ties go the positive way.
    let step = if pos <= neg { pos } else { -neg };
    debug_assert!(step.is_finite());

    let mut kept_window = Vec::with_capacity(window.len());
    let mut kept_coeff = Vec::with_capacity(coeff.len());
    for ((&i, &l), &a) in window.iter().zip(coeff.iter()).zip(&alpha) {
        let moved = l + step * a;
        if moved.abs() >= 1.0 - HIT_SNAP {
            // Decide exactly on the bound so the sign carries no drift.
            signs[i] = if moved > 0.0 { 1 } else { -1 };
        } else {
            kept_window.push(i);
            kept_coeff.push(moved);
        }
    }
    *window = kept_window;
    *coeff = kept_coeff;
    Ok(())
}

/// Lifts `balanced_signs` to a matrix by serializing it column-major (all
/// `k` entries of column 1, then column 2, ...). Every prefix column sum of
/// the signed matrix is one of the serialized prefix sums, so the `2d - 1`
/// bound carries over.
pub fn assign_matrix_signs(b: &VectorMatrix, spec: &NormSpec) -> Result<SignMatrix> {
    let serialized: Vec<Vec<f64>> = column_major(b)
        .map(|(j, i)| b.entry(j, i).to_vec())
        .collect();
    let flat = balanced_signs(&serialized, b.d(), spec)?;
    let mut signs = vec![vec![1i8; b.n()]; b.k()];
    for (pos, (j, i)) in column_major(b).enumerate() {
        signs[j][i] = flat[pos];
    }
    SignMatrix::new(signs)
}

fn column_major(b: &VectorMatrix) -> impl Iterator<Item = (usize, usize)> {
    let (k, n) = (b.k(), b.n());
    (0..n).flat_map(move |i| (0..k).map(move |j| (j, i)))
}

/// Baseline: pick each sign to minimize the running prefix norm, ties +1.
/// No bound guarantee; for comparison only.
pub fn greedy_signs(seq: &[Vec<f64>], spec: &NormSpec) -> Vec<i8> {
    let d = seq.first().map_or(0, Vec::len);
    let mut prefix = vec![0.0; d];
    let mut signs = Vec::with_capacity(seq.len());
    for v in seq {
        let plus: Vec<f64> = prefix.iter().zip(v).map(|(p, c)| p + c).collect();
        let minus: Vec<f64> = prefix.iter().zip(v).map(|(p, c)| p - c).collect();
        if spec.eval(&plus) <= spec.eval(&minus) {
            signs.push(1);
            prefix = plus;
        } else {
            signs.push(-1);
            prefix = minus;
        }
    }
    signs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalars(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    fn prefix_norms(seq: &[Vec<f64>], signs: &[i8], spec: &NormSpec) -> Vec<f64> {
        let d = seq[0].len();
        let mut sum = vec![0.0; d];
        let mut out = Vec::new();
        for (v, &s) in seq.iter().zip(signs) {
            for (acc, &c) in sum.iter_mut().zip(v) {
                *acc += f64::from(s) * c;
            }
            out.push(spec.eval(&sum));
        }
        out
    }

    #[test]
    fn ones_alternate_in_one_dimension() {
        let seq = scalars(&[1.0, 1.0, 1.0, 1.0]);
        let signs = balanced_signs(&seq, 1, &NormSpec::L1).unwrap();
        assert_eq!(signs[0], -signs[1]);
        assert_eq!(signs[2], -signs[3]);
        for p in prefix_norms(&seq, &signs, &NormSpec::L1) {
            assert!(p <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn zero_sequence_is_trivial() {
        let seq = vec![vec![0.0, 0.0]; 5];
        let signs = balanced_signs(&seq, 2, &NormSpec::L2).unwrap();
        assert_eq!(signs, vec![1; 5]);
    }

    #[test]
    fn basis_triple_stays_within_bound() {
        let seq = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let signs = balanced_signs(&seq, 2, &NormSpec::Linf).unwrap();
        let worst = prefix_norms(&seq, &signs, &NormSpec::Linf)
            .into_iter()
            .fold(0.0, f64::max);
        assert!(worst <= 3.0 + 1e-9, "worst prefix {worst}");
    }

    #[test]
    fn rejects_oversized_entries_and_seminorms() {
        let seq = vec![vec![1.5, 0.0]];
        assert!(matches!(
            balanced_signs(&seq, 2, &NormSpec::L2),
            Err(Error::UnitNormViolation { .. })
        ));
        let semi = crate::norms::box_seminorm(2, 4.0);
        assert!(matches!(
            balanced_signs(&[vec![0.0, 0.0]], 2, &semi),
            Err(Error::NonSymmetricNorm)
        ));
    }

    #[test]
    fn matrix_signing_matches_row_signing_for_single_row() {
        let row: Vec<Vec<f64>> = vec![
            vec![0.3, -0.4],
            vec![-0.8, 0.1],
            vec![0.5, 0.5],
            vec![0.0, -1.0],
        ];
        let b = VectorMatrix::new(2, 1, 4, vec![row.clone()]).unwrap();
        let eps = assign_matrix_signs(&b, &NormSpec::L2).unwrap();
        let flat = balanced_signs(&row, 2, &NormSpec::L2).unwrap();
        assert_eq!(eps.rows()[0], flat);
    }

    #[test]
    fn signed_column_prefixes_stay_bounded_in_one_dimension() {
        let b = VectorMatrix::new(
            1,
            2,
            2,
            vec![
                vec![vec![1.0], vec![-1.0]],
                vec![vec![-1.0], vec![1.0]],
            ],
        )
        .unwrap();
        let eps = assign_matrix_signs(&b, &NormSpec::L1).unwrap();
        let signed = apply_signs(&b, &eps).unwrap();
        assert!(signed.max_prefix_norm(&NormSpec::L1) <= 1.0 + 1e-9);
    }

    #[test]
    fn greedy_matches_hand_rolled_choices() {
        let seq = scalars(&[1.0, 1.0]);
        assert_eq!(greedy_signs(&seq, &NormSpec::L1), vec![1, -1]);

        let seq = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(greedy_signs(&seq, &NormSpec::L2), vec![1, 1, -1]);
    }
}
