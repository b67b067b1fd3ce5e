//! Instance generators: random zero-sum matrices, the `l1` lower-bound
//! family, and the seminorm counterexample family.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::VectorMatrix;
use crate::norms::{box_seminorm, NormSpec};

/// Sampled coordinates are truncated onto this grid so that sums of up to
/// ~2^20 entries are exact in doubles; the paired `v, -v` placement then
/// cancels to exactly zero no matter the summation order.
const GRID: f64 = 67108864.0; // 2^26

/// A `k x n` matrix of unit vectors with total sum exactly zero: `kn/2`
/// sampled vectors are placed together with their negations at uniformly
/// chosen free cells. Deterministic for a fixed seed.
pub fn random_zero_sum(
    d: usize,
    k: usize,
    n: usize,
    spec: &NormSpec,
    seed: u64,
) -> Result<VectorMatrix> {
    if d == 0 || k == 0 || n == 0 {
        return Err(Error::InvalidParameter("d, k, n must be positive".into()));
    }
    if (k * n) % 2 != 0 {
        return Err(Error::InvalidParameter(
            "k * n must be even to place vectors in cancelling pairs".into(),
        ));
    }
    if !spec.is_symmetric() {
        return Err(Error::NonSymmetricNorm);
    }
    spec.validate(d)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<Vec<f64>> = vec![Vec::new(); k * n];
    let mut free: Vec<usize> = (0..k * n).collect();
    for _ in 0..k * n / 2 {
        let v = sample_unit(&mut rng, d, spec);
        let neg = v.iter().map(|&c| -c).collect();
        let a = free.swap_remove(rng.random_range(0..free.len()));
        let b = free.swap_remove(rng.random_range(0..free.len()));
        cells[a] = v;
        cells[b] = neg;
    }
    VectorMatrix::from_fn(d, k, n, |j, i| std::mem::take(&mut cells[j * n + i]))
}

/// Rejection sampling in `[-1, 1]^d`, with a rescale fallback so pathological
/// bodies cannot stall the generator. Coordinates are truncated to the grid.
fn sample_unit(rng: &mut ChaCha8Rng, d: usize, spec: &NormSpec) -> Vec<f64> {
    let mut v = vec![0.0; d];
    for _ in 0..1024 {
        for c in &mut v {
            *c = quantize(rng.random_range(-1.0..=1.0));
        }
        if spec.eval(&v) <= 1.0 {
            return v;
        }
    }
    let norm = spec.eval(&v);
    for c in &mut v {
        *c = quantize(*c / norm);
    }
    v
}

fn quantize(c: f64) -> f64 {
    (c * GRID).trunc() / GRID
}

/// The `l1` lower-bound family: `s` horizontal copies of the `d x 2d` block
/// whose identical rows are `e_1, ..., e_d, -e/d, ..., -e/d`, padded with
/// `k - d` zero rows. Every column sum of any row-permuted copy has `l1`
/// norm at least `d/2`.
pub fn l1_lower_bound(d: usize, s: usize, k: usize) -> Result<(VectorMatrix, NormSpec)> {
    if d == 0 || s == 0 {
        return Err(Error::InvalidParameter("d and s must be positive".into()));
    }
    if k < d {
        return Err(Error::InvalidParameter(format!(
            "need k >= d zero-padded rows, got k = {k} < d = {d}"
        )));
    }
    let n = 2 * d * s;
    let a = VectorMatrix::from_fn(d, k, n, |j, i| {
        let mut v = vec![0.0; d];
        if j < d {
            let pos = i % (2 * d);
            if pos < d {
                v[pos] = 1.0;
            } else {
                v.iter_mut().for_each(|c| *c = -1.0 / d as f64);
            }
        }
        v
    })?;
    Ok((a, NormSpec::L1))
}

/// Minimum possible `l1` norm of a column holding `q` copies of `-e/d` and
/// `d - q` distinct basis vectors: `((d-q)^2 + q^2) / d`.
pub fn l1_column_value(d: u64, q: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    if q > d {
        return Err(Error::OutOfRange {
            index: q as usize,
            max: d as usize,
        });
    }
    Ok(((d - q).pow(2) + q.pow(2)) as f64 / d as f64)
}

/// The seminorm counterexample family at dimension `d >= 5`: a `k x d`
/// matrix, `k = ceil((2^d - 1)/d)`, whose first `d` rows hold `2^{j-1} e_i - e`
/// and whose remaining rows are `-e` except for `s = kd - (2^d - 1)` cells of
/// `-f` and `-g` balancing the total to exactly zero. Every entry has
/// seminorm exactly 1 under the returned body (`x_i >= -1`, `sum x_i <= 2^d`),
/// yet every row-permuted copy has a first-column sum of norm at least `k - 2`.
///
/// Built in integer arithmetic and converted once, so the zero total is exact.
pub fn seminorm_lower_bound(d: usize) -> Result<(VectorMatrix, NormSpec)> {
    if d < 5 {
        // k = ceil((2^d - 1)/d) only reaches the two balancing rows d+1 and
        // d+2 once 2^d - 1 > d(d + 1), which first holds at d = 5.
        return Err(Error::InvalidParameter(format!(
            "the construction needs d >= 5, got {d}"
        )));
    }
    if d >= 53 {
        return Err(Error::InvalidParameter(
            "2^d must stay exactly representable".into(),
        ));
    }
    let pow = (1u64 << d) - 1; // 2^d - 1
    let k = pow.div_ceil(d as u64) as usize;
    let s = (k * d - pow as usize) as usize;
    let half = d / 2;

    let entry = |j: usize, i: usize| -> Vec<i64> {
        if j < d {
            // 2^j e_i - e (row j is the paper-level (j+1)-st power row)
            (0..d)
                .map(|h| if h == i { (1i64 << j) - 1 } else { -1 })
                .collect()
        } else if j == d && i < s {
            // -f = -(e_1 + ... + e_{floor(d/2)})
            (0..d).map(|h| if h < half { -1 } else { 0 }).collect()
        } else if j == d + 1 && i < s {
            // -g = -(e_{floor(d/2)+1} + ... + e_d)
            (0..d).map(|h| if h < half { 0 } else { -1 }).collect()
        } else {
            vec![-1; d]
        }
    };

    let a = VectorMatrix::from_fn(d, k, d, |j, i| {
        entry(j, i).into_iter().map(|c| c as f64).collect()
    })?;
    let spec = box_seminorm(d, (1u64 << d) as f64);
    Ok((a, spec))
}
