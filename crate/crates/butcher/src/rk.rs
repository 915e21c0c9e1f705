//! Runge–Kutta tableaus and their elementary weights, the bridge from
//! integration methods to group elements.

use crate::group::GroupElement;
use crate::io::CoeffText;
use crate::scalar::Scalar;
use crate::table::TreeTable;
use serde::Deserialize;
use thiserror::Error;

/// A Runge–Kutta tableau `(A, b, c)` with `s` stages.
#[derive(Debug, Clone, PartialEq)]
pub struct RkTableau<F: Scalar> {
    a: Vec<Vec<F>>,
    b: Vec<F>,
    c: Vec<F>,
}

/// Inconsistent tableau dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("inconsistent tableau dimensions: {0}")]
pub struct TableauShapeError(pub String);

/// Error from reading a tableau JSON file.
#[derive(Debug, Error)]
pub enum TableauParseError {
    #[error("invalid tableau JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Coeff(String),
    #[error(transparent)]
    Shape(#[from] TableauShapeError),
}

impl<F: Scalar> RkTableau<F> {
    /// Builds a tableau, checking that `A` is `s×s` and `b`, `c` have length `s`.
    pub fn new(a: Vec<Vec<F>>, b: Vec<F>, c: Vec<F>) -> Result<Self, TableauShapeError> {
        let s = b.len();
        if s == 0 {
            return Err(TableauShapeError("no stages".into()));
        }
        if a.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(TableauShapeError(format!(
                "A must be {s}x{s} to match b"
            )));
        }
        if c.len() != s {
            return Err(TableauShapeError(format!(
                "c has length {} but b has length {s}",
                c.len()
            )));
        }
        Ok(RkTableau { a, b, c })
    }

    /// Number of stages.
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// The stage matrix `A`.
    pub fn a(&self) -> &[Vec<F>] {
        &self.a
    }

    /// The weight vector `b`.
    pub fn b(&self) -> &[F] {
        &self.b
    }

    /// The node vector `c`.
    pub fn c(&self) -> &[F] {
        &self.c
    }

    /// Stages where `c_i ≠ Σ_j A_ij`. A mismatch is worth a warning but is
    /// not an error.
    pub fn row_sum_mismatches(&self) -> Vec<usize> {
        (0..self.stages())
            .filter(|&i| {
                let mut sum = F::zero();
                for v in &self.a[i] {
                    sum = sum + v.clone();
                }
                sum != self.c[i]
            })
            .collect()
    }

    /// The elementary weights of the tableau as a group element:
    /// `Φ_i(•) = 1`, `Φ_i([τ₁…τ_m]) = Π_k Σ_j A_ij Φ_j(τ_k)`, and
    /// `a(τ) = Σ_i b_i Φ_i(τ)`.
    pub fn elementary_weights(&self, max_order: usize) -> GroupElement<F> {
        let table = TreeTable::shared(max_order);
        let s = self.stages();
        // stage weights Φ_i(τ) per enumerated tree, built in grading order so
        // every child lookup is already available
        let mut phi: Vec<Vec<F>> = Vec::with_capacity(table.len());
        for tree in table.trees() {
            let row: Vec<F> = (0..s)
                .map(|i| {
                    let mut prod = F::one();
                    for child in tree.children() {
                        let child_phi = &phi[table.index_of(child).expect("child enumerated")];
                        let mut sum = F::zero();
                        for (j, aij) in self.a[i].iter().enumerate() {
                            sum = sum + aij.clone() * child_phi[j].clone();
                        }
                        prod = prod * sum;
                    }
                    prod
                })
                .collect();
            phi.push(row);
        }
        let coeffs = phi
            .into_iter()
            .map(|row| {
                let mut acc = F::zero();
                for (i, phi_i) in row.into_iter().enumerate() {
                    acc = acc + self.b[i].clone() * phi_i;
                }
                acc
            })
            .collect();
        GroupElement::from_parts(table, coeffs)
    }
}

#[derive(Deserialize)]
struct RawTableau {
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    b: Vec<String>,
    c: Vec<String>,
}

impl<F: CoeffText> RkTableau<F> {
    /// Reads a tableau from JSON: `{"A": [["p/q", …], …], "b": […], "c": […]}`
    /// with rationals as `p/q` strings.
    pub fn from_json(text: &str) -> Result<Self, TableauParseError> {
        let raw: RawTableau = serde_json::from_str(text)?;
        let parse_vec = |v: &[String]| -> Result<Vec<F>, TableauParseError> {
            v.iter()
                .map(|s| F::parse_text(s).map_err(TableauParseError::Coeff))
                .collect()
        };
        let a = raw
            .a
            .iter()
            .map(|row| parse_vec(row))
            .collect::<Result<Vec<_>, _>>()?;
        let b = parse_vec(&raw.b)?;
        let c = parse_vec(&raw.c)?;
        Ok(RkTableau::new(a, b, c)?)
    }

    /// Serializes the tableau back to the JSON file format.
    pub fn to_json(&self) -> String {
        let fmt_vec = |v: &[F]| -> Vec<String> { v.iter().map(CoeffText::to_text).collect() };
        let value = serde_json::json!({
            "A": self.a.iter().map(|row| fmt_vec(row)).collect::<Vec<_>>(),
            "b": fmt_vec(&self.b),
            "c": fmt_vec(&self.c),
        });
        serde_json::to_string_pretty(&value).expect("tableau JSON serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};
    use crate::symplectic::is_symplectic;
    use crate::tree::Tree;
    use num_traits::One;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn tree(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn explicit_euler() -> RkTableau<Rational> {
        RkTableau::new(vec![vec![q("0")]], vec![q("1")], vec![q("0")]).unwrap()
    }

    fn implicit_midpoint() -> RkTableau<Rational> {
        RkTableau::new(vec![vec![q("1/2")]], vec![q("1")], vec![q("1/2")]).unwrap()
    }

    #[test]
    fn zero_weights_give_the_identity() {
        let t = RkTableau::new(vec![vec![q("1/3")]], vec![q("0")], vec![q("1/3")]).unwrap();
        assert_eq!(t.elementary_weights(5), GroupElement::identity(5));
    }

    #[test]
    fn explicit_euler_weights() {
        let w = explicit_euler().elementary_weights(5);
        assert_eq!(w.coeff(&Tree::leaf()), Some(&q("1")));
        for t in crate::tree::enumerate_trees(5) {
            if t.order() >= 2 {
                assert_eq!(w.coeff(&t), Some(&q("0")));
            }
        }
    }

    #[test]
    fn implicit_midpoint_weights_close_form() {
        let w = implicit_midpoint().elementary_weights(6);
        for t in crate::tree::enumerate_trees(6) {
            let expected = Rational::one().div_nat(1u64 << (t.order() - 1));
            assert_eq!(w.coeff(&t), Some(&expected), "at {}", t);
        }
        assert!(is_symplectic(&w));
    }

    #[test]
    fn heun_weights_match_hand_values() {
        // 2-stage Heun: Φ_i(τ₂) = c_i, so a(τ₂) = Σ b_i c_i = 1/2,
        // a(cherry) = Σ b_i c_i² = 1/2, a(3-chain) = Σ b_i A_ij c_j = 0.
        let heun = RkTableau::new(
            vec![vec![q("0"), q("0")], vec![q("1"), q("0")]],
            vec![q("1/2"), q("1/2")],
            vec![q("0"), q("1")],
        )
        .unwrap();
        let w = heun.elementary_weights(3);
        assert_eq!(w.coeff(&Tree::leaf()), Some(&q("1")));
        assert_eq!(w.coeff(&tree("[[]]")), Some(&q("1/2")));
        assert_eq!(w.coeff(&tree("[[][]]")), Some(&q("1/2")));
        assert_eq!(w.coeff(&tree("[[[]]]")), Some(&q("0")));
        assert!(heun.row_sum_mismatches().is_empty());
    }

    #[test]
    fn row_sum_mismatch_is_reported() {
        let t = RkTableau::new(vec![vec![q("1/2")]], vec![q("1")], vec![q("1/3")]).unwrap();
        assert_eq!(t.row_sum_mismatches(), vec![0]);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"A": [["0", "0"], ["1/2", "0"]], "b": ["0", "1"], "c": ["0", "1/2"]}"#;
        let t = RkTableau::<Rational>::from_json(text).unwrap();
        assert_eq!(t.stages(), 2);
        assert_eq!(t.a()[1][0], q("1/2"));
        let again = RkTableau::<Rational>::from_json(&t.to_json()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn json_errors() {
        assert!(matches!(
            RkTableau::<Rational>::from_json("not json"),
            Err(TableauParseError::Json(_))
        ));
        assert!(matches!(
            RkTableau::<Rational>::from_json(r#"{"A": [["1/0"]], "b": ["1"], "c": ["0"]}"#),
            Err(TableauParseError::Coeff(_))
        ));
        assert!(matches!(
            RkTableau::<Rational>::from_json(r#"{"A": [["0"]], "b": ["1", "2"], "c": ["0"]}"#),
            Err(TableauParseError::Shape(_))
        ));
    }
}
