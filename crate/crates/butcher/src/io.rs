//! Text formats for elements and curves.
//!
//! Element files are UTF-8 with a header line `order N` followed by one
//! entry per line, `<tree-encoding> <p>/<q>`; omitted trees default to
//! coefficient 0. Curve files use the same header and carry the polynomial
//! coefficients in ascending powers of `t`:
//! `<tree-encoding> <c0>/<d0> <c1>/<d1> …`.

use crate::expflow::PolyCurve;
use crate::group::{GroupElement, LieElement};
use crate::poly::Poly;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::tree::{ParseTreeError, Tree};
use num_traits::Zero;
use std::collections::HashMap;
use thiserror::Error;

/// Scalars with a one-token text form for the element file formats.
pub trait CoeffText: Scalar {
    /// Parses one coefficient token.
    fn parse_text(token: &str) -> Result<Self, String>;

    /// Formats the coefficient as a single token.
    fn to_text(&self) -> String;
}

impl CoeffText for Rational {
    fn parse_text(token: &str) -> Result<Self, String> {
        parse_rational(token).map_err(|e| e.to_string())
    }

    fn to_text(&self) -> String {
        format_rational(self)
    }
}

impl CoeffText for f64 {
    fn parse_text(token: &str) -> Result<Self, String> {
        if let Some((num, den)) = token.split_once('/') {
            let num: f64 = num
                .parse()
                .map_err(|_| format!("malformed rational `{token}`: invalid numerator"))?;
            let den: f64 = den
                .parse()
                .map_err(|_| format!("malformed rational `{token}`: invalid denominator"))?;
            if den == 0.0 {
                return Err(format!("malformed rational `{token}`: division by zero"));
            }
            Ok(num / den)
        } else {
            token
                .parse()
                .map_err(|_| format!("malformed coefficient `{token}`"))
        }
    }

    fn to_text(&self) -> String {
        format!("{self}")
    }
}

/// Error from reading an element or curve file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FileError {
    #[error("missing `order N` header line")]
    MissingHeader,
    #[error("line {line}: malformed header `{found}`, expected `order N`")]
    BadHeader { line: usize, found: String },
    #[error("line {line}: {source}")]
    Tree {
        line: usize,
        #[source]
        source: ParseTreeError,
    },
    #[error("line {line}: {message}")]
    Coeff { line: usize, message: String },
    #[error("line {line}: missing coefficient after tree `{tree}`")]
    MissingCoeff { line: usize, tree: String },
    #[error("line {line}: duplicate entry for tree `{tree}`")]
    Duplicate { line: usize, tree: String },
    #[error("line {line}: tree `{tree}` has order {order}, beyond the file order {max_order}")]
    OrderExceeded {
        line: usize,
        tree: String,
        order: usize,
        max_order: usize,
    },
}

impl FileError {
    /// Whether the error is an order violation rather than a syntax error.
    pub fn is_contract_violation(&self) -> bool {
        matches!(self, FileError::OrderExceeded { .. })
    }
}

type NumberedLines<'a> = Vec<(usize, &'a str)>;
type Entries<F> = HashMap<Tree, (usize, Vec<F>)>;

fn parse_header(text: &str) -> Result<(usize, NumberedLines<'_>), FileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (line, header) = lines.next().ok_or(FileError::MissingHeader)?;
    let order = header
        .trim()
        .strip_prefix("order")
        .and_then(|rest| rest.trim().parse::<usize>().ok())
        .ok_or_else(|| FileError::BadHeader {
            line,
            found: header.trim().to_string(),
        })?;
    Ok((order, lines.collect()))
}

fn parse_entries<F: CoeffText>(text: &str) -> Result<(usize, Entries<F>), FileError> {
    let (order, lines) = parse_header(text)?;
    let mut entries: Entries<F> = HashMap::new();
    for (line, content) in lines {
        let mut tokens = content.split_whitespace();
        let tree_token = tokens.next().expect("blank lines are filtered");
        let tree: Tree = tree_token
            .parse()
            .map_err(|source| FileError::Tree { line, source })?;
        if tree.order() > order {
            return Err(FileError::OrderExceeded {
                line,
                tree: tree.encode(),
                order: tree.order(),
                max_order: order,
            });
        }
        let coeffs = tokens
            .map(|token| {
                F::parse_text(token).map_err(|message| FileError::Coeff { line, message })
            })
            .collect::<Result<Vec<F>, FileError>>()?;
        if coeffs.is_empty() {
            return Err(FileError::MissingCoeff {
                line,
                tree: tree.encode(),
            });
        }
        if entries.insert(tree.clone(), (line, coeffs)).is_some() {
            return Err(FileError::Duplicate {
                line,
                tree: tree.encode(),
            });
        }
    }
    Ok((order, entries))
}

fn single_coeffs<F: CoeffText>(
    text: &str,
) -> Result<(usize, HashMap<Tree, F>), FileError> {
    let (order, entries) = parse_entries::<F>(text)?;
    let mut out = HashMap::with_capacity(entries.len());
    for (tree, (line, mut coeffs)) in entries {
        if coeffs.len() != 1 {
            return Err(FileError::Coeff {
                line,
                message: format!(
                    "tree `{}` carries {} coefficients; element files take one",
                    tree.encode(),
                    coeffs.len()
                ),
            });
        }
        out.insert(tree, coeffs.pop().expect("checked length"));
    }
    Ok((order, out))
}

/// Reads a group element; missing trees default to coefficient 0.
pub fn parse_group_element<F: CoeffText>(text: &str) -> Result<GroupElement<F>, FileError> {
    let (order, mut coeffs) = single_coeffs::<F>(text)?;
    Ok(GroupElement::from_fn(order, |t| {
        coeffs.remove(t).unwrap_or_else(F::zero)
    }))
}

/// Reads a tangent element; missing trees default to coefficient 0.
pub fn parse_lie_element<F: CoeffText>(text: &str) -> Result<LieElement<F>, FileError> {
    let (order, mut coeffs) = single_coeffs::<F>(text)?;
    Ok(LieElement::from_fn(order, |t| {
        coeffs.remove(t).unwrap_or_else(F::zero)
    }))
}

/// Reads a polynomial curve; per line the coefficients ascend in powers of `t`.
pub fn parse_curve<F: CoeffText>(text: &str) -> Result<PolyCurve<F>, FileError> {
    let (order, mut entries) = parse_entries::<F>(text)?;
    Ok(PolyCurve::from_fn(order, |t| {
        entries
            .remove(t)
            .map(|(_, coeffs)| Poly::from_coeffs(coeffs))
            .unwrap_or_else(Poly::zero)
    }))
}

fn write_coeff_lines<F: CoeffText>(
    max_order: usize,
    entries: impl Iterator<Item = (Tree, Vec<F>)>,
) -> String {
    let mut out = format!("order {max_order}\n");
    for (tree, coeffs) in entries {
        out.push_str(&tree.encode());
        for c in coeffs {
            out.push(' ');
            out.push_str(&c.to_text());
        }
        out.push('\n');
    }
    out
}

/// Writes a group element: header plus the nonzero coefficients in
/// enumeration order. Output is deterministic and re-parses to an equal value.
pub fn write_group_element<F: CoeffText>(a: &GroupElement<F>) -> String {
    write_coeff_lines(
        a.max_order(),
        a.table()
            .trees()
            .iter()
            .zip(a.coeffs())
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (t.clone(), vec![c.clone()])),
    )
}

/// Writes a tangent element in the element file format.
pub fn write_lie_element<F: CoeffText>(a: &LieElement<F>) -> String {
    write_coeff_lines(
        a.max_order(),
        a.table()
            .trees()
            .iter()
            .zip(a.coeffs())
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (t.clone(), vec![c.clone()])),
    )
}

/// Writes a polynomial curve, skipping identically-zero polynomials.
pub fn write_curve<F: CoeffText>(curve: &PolyCurve<F>) -> String {
    let table = crate::table::TreeTable::shared(curve.max_order());
    write_coeff_lines(
        curve.max_order(),
        table
            .trees()
            .iter()
            .zip(curve.polys())
            .filter(|(_, p)| !p.is_zero())
            .map(|(t, p)| (t.clone(), p.coeffs().to_vec())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn element_round_trip() {
        let text = "order 3\n[] 1/2\n[[][]] -4/6\n";
        let a: GroupElement<Rational> = parse_group_element(text).unwrap();
        assert_eq!(a.max_order(), 3);
        assert_eq!(a.coeff(&"[]".parse().unwrap()), Some(&q("1/2")));
        assert_eq!(a.coeff(&"[[]]".parse().unwrap()), Some(&q("0")));
        assert_eq!(a.coeff(&"[[][]]".parse().unwrap()), Some(&q("-2/3")));

        let written = write_group_element(&a);
        assert_eq!(written, "order 3\n[] 1/2\n[[][]] -2/3\n");
        let reparsed: GroupElement<Rational> = parse_group_element(&written).unwrap();
        assert_eq!(reparsed, a);
        // writing is idempotent on its own output
        assert_eq!(write_group_element(&reparsed), written);
    }

    #[test]
    fn identity_writes_as_bare_header() {
        let e = GroupElement::<Rational>::identity(4);
        assert_eq!(write_group_element(&e), "order 4\n");
        assert_eq!(parse_group_element::<Rational>("order 4\n").unwrap(), e);
    }

    #[test]
    fn curve_round_trip() {
        let text = "order 2\n[] 0/1 1/1\n";
        let curve: PolyCurve<Rational> = parse_curve(text).unwrap();
        assert_eq!(
            curve.poly(&"[]".parse().unwrap()),
            Some(&Poly::from_coeffs(vec![q("0"), q("1")]))
        );
        let written = write_curve(&curve);
        assert_eq!(written, "order 2\n[] 0/1 1/1\n");
        assert_eq!(parse_curve::<Rational>(&written).unwrap(), curve);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_group_element::<Rational>("").unwrap_err(),
            FileError::MissingHeader
        );
        assert!(matches!(
            parse_group_element::<Rational>("order x\n").unwrap_err(),
            FileError::BadHeader { line: 1, .. }
        ));
        assert!(matches!(
            parse_group_element::<Rational>("order 2\n[[x]] 1/2\n").unwrap_err(),
            FileError::Tree { line: 2, .. }
        ));
        assert!(matches!(
            parse_group_element::<Rational>("order 2\n[] 1/0\n").unwrap_err(),
            FileError::Coeff { line: 2, .. }
        ));
        assert!(matches!(
            parse_group_element::<Rational>("order 2\n[]\n").unwrap_err(),
            FileError::MissingCoeff { line: 2, .. }
        ));
        assert!(matches!(
            parse_group_element::<Rational>("order 2\n[] 1\n[] 2\n").unwrap_err(),
            FileError::Duplicate { line: 3, .. }
        ));
        let err =
            parse_group_element::<Rational>("order 2\n[[[]]] 1\n").unwrap_err();
        assert!(matches!(err, FileError::OrderExceeded { line: 2, .. }));
        assert!(err.is_contract_violation());
    }

    #[test]
    fn float_coefficients_parse_both_forms() {
        let a: GroupElement<f64> = parse_group_element("order 1\n[] 1/4\n").unwrap();
        assert_eq!(a.coeff(&Tree::leaf()), Some(&0.25));
        let b: GroupElement<f64> = parse_group_element("order 1\n[] 0.25\n").unwrap();
        assert_eq!(b, a);
        let written = write_group_element(&a);
        assert_eq!(written, "order 1\n[] 0.25\n");
    }
}
