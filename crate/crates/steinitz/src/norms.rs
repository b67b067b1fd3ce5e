//! Norm and seminorm evaluation for the supported unit bodies.
//!
//! Polytope bodies are given by facet inequalities; the Minkowski functional
//! is then a maximum of inner products, closed-form up to rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::VectorMatrix;

/// Descriptor of the unit body `K` and its induced norm or seminorm.
///
/// * `L1`, `L2`, `Linf`: the usual `l_p` norms.
/// * `SymPolytope` with facets `u_j`: `K = {x : |<u_j, x>| <= 1 for all j}`,
///   norm `max_j |<u_j, x>|`.
/// * `Seminorm` with facets `u_j`: `K = {x : <u_j, x> <= 1 for all j}`,
///   value `max(0, max_j <u_j, x>)`. Not symmetric: flipping `x` can change
///   the value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    L1,
    L2,
    Linf,
    SymPolytope { facets: Vec<Vec<f64>> },
    Seminorm { facets: Vec<Vec<f64>> },
}

/// The body `{x : -1 <= x_i for all i, sum_i x_i <= cap}` as facet
/// inequalities `{-e_1, ..., -e_d, e/cap}`.
pub fn box_seminorm(d: usize, cap: f64) -> NormSpec {
    let mut facets: Vec<Vec<f64>> = (0..d)
        .map(|h| {
            let mut u = vec![0.0; d];
            u[h] = -1.0;
            u
        })
        .collect();
    facets.push(vec![1.0 / cap; d]);
    NormSpec::Seminorm { facets }
}

fn dot(u: &[f64], x: &[f64]) -> f64 {
    u.iter().zip(x).map(|(a, b)| a * b).sum()
}

impl NormSpec {
    /// True for every kind except `Seminorm`.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, NormSpec::Seminorm { .. })
    }

    /// Checks the spec against ambient dimension `d`: facet shapes, and for
    /// `Seminorm` that the value is positive on the probe set `{±e_i}` (a
    /// necessary condition for the body to be bounded).
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            NormSpec::L1 | NormSpec::L2 | NormSpec::Linf => Ok(()),
            NormSpec::SymPolytope { facets } | NormSpec::Seminorm { facets } => {
                if facets.is_empty() {
                    return Err(Error::InvalidNorm("polytope body needs at least one facet".into()));
                }
                for (j, u) in facets.iter().enumerate() {
                    if u.len() != d {
                        return Err(Error::InvalidNorm(format!(
                            "facet {j} has dimension {}, expected {d}",
                            u.len()
                        )));
                    }
                    if u.iter().any(|c| !c.is_finite()) {
                        return Err(Error::InvalidNorm(format!("facet {j} has a non-finite coordinate")));
                    }
                }
                if let NormSpec::Seminorm { .. } = self {
                    for h in 0..d {
                        let mut e = vec![0.0; d];
                        e[h] = 1.0;
                        let plus = self.eval(&e);
                        e[h] = -1.0;
                        let minus = self.eval(&e);
                        if plus <= 0.0 || minus <= 0.0 {
                            return Err(Error::InvalidNorm(format!(
                                "seminorm vanishes on a coordinate direction (axis {h}); body is unbounded"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Evaluates `||x||_K = min{t >= 0 : x in tK}`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            NormSpec::L1 => x.iter().map(|c| c.abs()).sum(),
            NormSpec::L2 => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
            NormSpec::Linf => x.iter().fold(0.0, |m, c| m.max(c.abs())),
            NormSpec::SymPolytope { facets } => {
                assert_facet_dim(facets, x);
                facets.iter().fold(0.0, |m, u| m.max(dot(u, x).abs()))
            }
            NormSpec::Seminorm { facets } => {
                assert_facet_dim(facets, x);
                facets.iter().fold(0.0, |m, u| m.max(dot(u, x)))
            }
        }
    }

    /// True iff every entry of `a` has norm at most `1 + tol`.
    pub fn unit_check(&self, a: &VectorMatrix, tol: f64) -> bool {
        (0..a.k()).all(|j| (0..a.n()).all(|i| self.eval(a.entry(j, i)) <= 1.0 + tol))
    }
}

fn assert_facet_dim(facets: &[Vec<f64>], x: &[f64]) {
    assert!(
        facets.iter().all(|u| u.len() == x.len()),
        "facet dimension does not match the evaluated vector"
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_values() {
        assert_eq!(NormSpec::L1.eval(&[1.0, -2.0]), 3.0);
        assert_eq!(NormSpec::L2.eval(&[3.0, 4.0]), 5.0);
        assert_eq!(NormSpec::Linf.eval(&[1.0, -2.0]), 2.0);
    }

    #[test]
    fn box_seminorm_section5_value() {
        // d=2, cap=4: ||(-1,-1)|| = max(0, 1, 1, -2/4) = 1
        let spec = box_seminorm(2, 4.0);
        assert_eq!(spec.eval(&[-1.0, -1.0]), 1.0);
    }

    #[test]
    fn box_seminorm_breaks_symmetry() {
        // ||e|| = d/cap but ||-e|| = 1 once cap > d.
        let d = 3;
        let cap = 32.0;
        let spec = box_seminorm(d, cap);
        let e = vec![1.0; d];
        let neg_e = vec![-1.0; d];
        assert!((spec.eval(&e) - d as f64 / cap).abs() < 1e-15);
        assert_eq!(spec.eval(&neg_e), 1.0);
        assert!(!spec.is_symmetric());
    }

    #[test]
    fn unit_check_flags_large_entries() {
        let zero = VectorMatrix::zeros(2, 2, 2).unwrap();
        assert!(NormSpec::L2.unit_check(&zero, 1e-9));
        let big = VectorMatrix::new(2, 1, 1, vec![vec![vec![1.5, 0.0]]]).unwrap();
        assert!(!NormSpec::L2.unit_check(&big, 1e-9));
    }

    #[test]
    fn seminorm_validation_rejects_unbounded_bodies() {
        // A single facet leaves every -u direction free.
        let spec = NormSpec::Seminorm {
            facets: vec![vec![1.0, 0.0]],
        };
        assert!(spec.validate(2).is_err());
        assert!(box_seminorm(4, 16.0).validate(4).is_ok());
    }

    #[test]
    fn json_wire_format() {
        let spec = box_seminorm(2, 4.0);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"seminorm","facets":[[-1.0,0.0],[0.0,-1.0],[0.25,0.25]]}"#
        );
        assert_eq!(serde_json::to_string(&NormSpec::L1).unwrap(), r#"{"kind":"l1"}"#);
        let back: NormSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
