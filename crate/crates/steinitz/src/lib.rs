//! Constructive rearrangement of vector matrices with bounded prefix column
//! sums.
//!
//! Given a `k x n` matrix of vectors in `R^d`, each of norm at most 1, whose
//! total sum is zero, the library produces row-wise rearrangements whose
//! prefix column sums stay within `min{dk, 4d - 2}` for symmetric norms and
//! within `dk` for non-symmetric seminorms, together with exact brute-force
//! oracles and the known lower-bound instance families.

pub mod error;
pub mod instances;
pub mod linalg;
pub mod matrix;
pub mod norms;
pub mod oracles;
pub mod reorder;
pub mod signing;
pub mod transference;

mod simplex;

pub use error::{Error, Result};
pub use matrix::{verify_row_permuted, RowPermutations, VectorMatrix};
pub use norms::{box_seminorm, NormSpec};
pub use signing::SignMatrix;
pub use transference::{
    rearrange, rearrange_with, Method, PassRecord, RearrangeOptions, RearrangementReport,
};

/// Additive tolerance for algebraic identities (zero sums, unit norms).
pub const ALGEBRAIC_TOL: f64 = 1e-9;
/// Additive tolerance for theorem-bound checks.
pub const BOUND_TOL: f64 = 1e-6;
