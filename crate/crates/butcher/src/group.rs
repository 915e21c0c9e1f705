//! Truncated Butcher group elements and the group operations: identity,
//! the composition product over ordered subtrees, the inverse over edge
//! partitions, and the grading dilation.

use crate::scalar::Scalar;
use crate::table::TreeTable;
use crate::tree::Tree;
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

/// Two elements with different truncation orders were combined.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("incompatible truncations: order {left} vs order {right}")]
pub struct OrderMismatch {
    pub left: usize,
    pub right: usize,
}

pub(crate) fn check_orders(left: usize, right: usize) -> Result<(), OrderMismatch> {
    if left == right {
        Ok(())
    } else {
        Err(OrderMismatch { left, right })
    }
}

/// A truncated tree map `a` with `a(∅) = 1`.
///
/// Stores one coefficient per tree of order `≤ max_order`, dense in the
/// graded enumeration; the coefficient at the empty tree is structural and
/// never stored.
#[derive(Clone)]
pub struct GroupElement<F: Scalar> {
    table: Arc<TreeTable>,
    coeffs: Vec<F>,
}

/// A truncated tree map `a` with `a(∅) = 0`: the tangent space at the
/// identity, dense like [`GroupElement`].
#[derive(Clone)]
pub struct LieElement<F: Scalar> {
    table: Arc<TreeTable>,
    coeffs: Vec<F>,
}

macro_rules! shared_element_impl {
    ($name:ident) => {
        impl<F: Scalar> $name<F> {
            /// The truncation order.
            pub fn max_order(&self) -> usize {
                self.table.max_order()
            }

            /// The enumeration table backing this element.
            pub fn table(&self) -> &Arc<TreeTable> {
                &self.table
            }

            /// Coefficient of `tree`, or `None` if its order exceeds the truncation.
            pub fn coeff(&self, tree: &Tree) -> Option<&F> {
                self.table.index_of(tree).map(|i| &self.coeffs[i])
            }

            /// Sets the coefficient of `tree`.
            pub fn set_coeff(&mut self, tree: &Tree, value: F) -> Result<(), OrderMismatch> {
                match self.table.index_of(tree) {
                    Some(i) => {
                        self.coeffs[i] = value;
                        Ok(())
                    }
                    None => Err(OrderMismatch {
                        left: self.max_order(),
                        right: tree.order(),
                    }),
                }
            }

            /// Coefficients in enumeration order.
            pub fn coeffs(&self) -> &[F] {
                &self.coeffs
            }

            pub(crate) fn coeff_at(&self, idx: usize) -> &F {
                &self.coeffs[idx]
            }

            pub(crate) fn from_parts(table: Arc<TreeTable>, coeffs: Vec<F>) -> Self {
                debug_assert_eq!(table.len(), coeffs.len());
                $name { table, coeffs }
            }

            /// Builds an element by evaluating `f` on every enumerated tree.
            pub fn from_fn(max_order: usize, mut f: impl FnMut(&Tree) -> F) -> Self {
                let table = TreeTable::shared(max_order);
                let coeffs = table.trees().iter().map(|t| f(t)).collect();
                $name { table, coeffs }
            }

            /// Restriction to a smaller truncation order.
            pub fn truncate(&self, max_order: usize) -> Result<Self, OrderMismatch> {
                if max_order > self.max_order() {
                    return Err(OrderMismatch {
                        left: self.max_order(),
                        right: max_order,
                    });
                }
                let table = TreeTable::shared(max_order);
                let coeffs = self.coeffs[..table.len()].to_vec();
                Ok($name { table, coeffs })
            }

            /// Maps every coefficient through `f`, keeping the truncation.
            pub fn map<T: Scalar>(&self, f: impl Fn(&F) -> T) -> $name<T> {
                $name {
                    table: Arc::clone(&self.table),
                    coeffs: self.coeffs.iter().map(f).collect(),
                }
            }
        }

        impl<F: Scalar> PartialEq for $name<F> {
            fn eq(&self, other: &Self) -> bool {
                self.max_order() == other.max_order() && self.coeffs == other.coeffs
            }
        }

        impl<F: Scalar> fmt::Debug for $name<F> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut map = f.debug_map();
                for (i, c) in self.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        map.entry(&self.table.tree(i).encode(), c);
                    }
                }
                map.finish()
            }
        }
    };
}

shared_element_impl!(GroupElement);
shared_element_impl!(LieElement);

impl<F: Scalar> GroupElement<F> {
    /// The group identity `e`: zero on every tree.
    pub fn identity(max_order: usize) -> Self {
        let table = TreeTable::shared(max_order);
        let coeffs = vec![F::zero(); table.len()];
        GroupElement { table, coeffs }
    }

    /// Whether this is the identity element.
    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Reinterprets a tangent element `𝐚` as the group element `𝐚 + e`.
    ///
    /// The stored coefficients are unchanged; only the structural value at
    /// the empty tree differs.
    pub fn from_lie(a: &LieElement<F>) -> Self {
        GroupElement {
            table: Arc::clone(&a.table),
            coeffs: a.coeffs.clone(),
        }
    }

    /// The group product over ordered subtrees:
    /// `(a·b)(τ) = Σ_{s ∈ OST(τ)} b(s_τ) Π_{θ ∈ τ∖s} a(θ)`,
    /// with `b(∅) = 1` and the empty product equal to 1.
    pub fn multiply(&self, b: &GroupElement<F>) -> Result<GroupElement<F>, OrderMismatch> {
        check_orders(self.max_order(), b.max_order())?;
        let table = &self.table;
        let coeffs = (0..table.len())
            .map(|k| {
                let mut acc = F::zero();
                for term in table.ost(k) {
                    let mut prod = match term.kept {
                        Some(i) => b.coeffs[i].clone(),
                        None => F::one(),
                    };
                    if prod.is_zero() {
                        continue;
                    }
                    for &r in &term.removed {
                        prod = prod * self.coeffs[r].clone();
                    }
                    acc = acc + F::from_count(term.mult) * prod;
                }
                acc
            })
            .collect();
        Ok(GroupElement {
            table: Arc::clone(table),
            coeffs,
        })
    }

    /// The group inverse over edge partitions (the antipode formula):
    /// `a⁻¹(τ) = Σ_{p ∈ P(τ)} (−1)^{|p_τ|} Π_{θ ∈ τ∖p} a(θ)`,
    /// where `|p_τ|` counts the components of `τ∖p`.
    pub fn invert(&self) -> GroupElement<F> {
        let table = &self.table;
        let coeffs = (0..table.len())
            .map(|k| {
                let mut acc = F::zero();
                for term in table.partition_terms(k) {
                    let mut prod = F::from_count(term.mult);
                    for &r in &term.forest {
                        prod = prod * self.coeffs[r].clone();
                    }
                    if table.tree(term.skeleton).order() % 2 == 1 {
                        prod = -prod;
                    }
                    acc = acc + prod;
                }
                acc
            })
            .collect();
        GroupElement {
            table: Arc::clone(table),
            coeffs,
        }
    }

    /// The grading dilation: `result(τ) = λ^{|τ|} a(τ)`.
    pub fn dilate(&self, lambda: &F) -> GroupElement<F> {
        GroupElement {
            table: Arc::clone(&self.table),
            coeffs: self.dilated_coeffs(lambda),
        }
    }

    /// Translation in the tangent direction: `a + s·𝐯`, coefficientwise.
    pub fn add_scaled(
        &self,
        dir: &LieElement<F>,
        s: &F,
    ) -> Result<GroupElement<F>, OrderMismatch> {
        check_orders(self.max_order(), dir.max_order())?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&dir.coeffs)
            .map(|(a, d)| a.clone() + s.clone() * d.clone())
            .collect();
        Ok(GroupElement {
            table: Arc::clone(&self.table),
            coeffs,
        })
    }
}

impl<F: Scalar> LieElement<F> {
    /// The zero tangent element.
    pub fn zero_element(max_order: usize) -> Self {
        let table = TreeTable::shared(max_order);
        let coeffs = vec![F::zero(); table.len()];
        LieElement { table, coeffs }
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero_element(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The delta element: 1 on `tree`, 0 elsewhere.
    pub fn delta(max_order: usize, tree: &Tree) -> Result<Self, OrderMismatch> {
        let mut out = LieElement::zero_element(max_order);
        out.set_coeff(tree, F::one())?;
        Ok(out)
    }

    /// Reinterprets a group element `a` as the tangent element `a − e`.
    pub fn from_group(a: &GroupElement<F>) -> Self {
        LieElement {
            table: Arc::clone(&a.table),
            coeffs: a.coeffs.clone(),
        }
    }

    /// Coefficientwise scaling.
    pub fn scale(&self, s: &F) -> LieElement<F> {
        self.map(|c| s.clone() * c.clone())
    }

    /// The grading dilation: `result(τ) = λ^{|τ|} a(τ)`.
    pub fn dilate(&self, lambda: &F) -> LieElement<F> {
        LieElement {
            table: Arc::clone(&self.table),
            coeffs: self.dilated_coeffs(lambda),
        }
    }

    /// The largest order carrying a nonzero coefficient, 0 if all vanish.
    pub fn support_order(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.table.tree(i).order())
            .max()
            .unwrap_or(0)
    }
}

macro_rules! dilate_impl {
    ($name:ident) => {
        impl<F: Scalar> $name<F> {
            fn dilated_coeffs(&self, lambda: &F) -> Vec<F> {
                let mut powers = Vec::with_capacity(self.max_order() + 1);
                powers.push(F::one());
                for k in 1..=self.max_order() {
                    powers.push(powers[k - 1].clone() * lambda.clone());
                }
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| powers[self.table.tree(i).order()].clone() * c.clone())
                    .collect()
            }
        }
    };
}

dilate_impl!(GroupElement);
dilate_impl!(LieElement);

impl<F: Scalar> Add for &LieElement<F> {
    type Output = LieElement<F>;

    fn add(self, rhs: &LieElement<F>) -> LieElement<F> {
        assert_eq!(
            self.max_order(),
            rhs.max_order(),
            "tangent sum needs equal truncation orders"
        );
        LieElement {
            table: Arc::clone(&self.table),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<F: Scalar> Sub for &LieElement<F> {
    type Output = LieElement<F>;

    fn sub(self, rhs: &LieElement<F>) -> LieElement<F> {
        assert_eq!(
            self.max_order(),
            rhs.max_order(),
            "tangent difference needs equal truncation orders"
        );
        LieElement {
            table: Arc::clone(&self.table),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<F: Scalar> Neg for &LieElement<F> {
    type Output = LieElement<F>;

    fn neg(self) -> LieElement<F> {
        LieElement {
            table: Arc::clone(&self.table),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn delta_group(max_order: usize, tree: &str, value: &str) -> GroupElement<Rational> {
        let mut e = GroupElement::identity(max_order);
        e.set_coeff(&t(tree), q(value)).unwrap();
        e
    }

    #[test]
    fn identity_vanishes_on_trees() {
        let e: GroupElement<Rational> = GroupElement::identity(3);
        assert_eq!(e.coeff(&Tree::leaf()), Some(&q("0")));
        assert!(e.is_identity());
        assert_eq!(e.coeff(&t("[[[[]]]]")), None);
    }

    #[test]
    fn product_at_the_single_node_adds() {
        let a = delta_group(2, "[]", "2");
        let b = delta_group(2, "[]", "3");
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab.coeff(&Tree::leaf()), Some(&q("5")));
    }

    #[test]
    fn product_at_the_chain_collects_three_subtrees() {
        let a = delta_group(2, "[]", "1");
        let b = delta_group(2, "[]", "1");
        let ab = a.multiply(&b).unwrap();
        // (a·b)(τ₂) = a(τ₂) + a(•)b(•) + b(τ₂)
        assert_eq!(ab.coeff(&t("[[]]")), Some(&q("1")));
    }

    #[test]
    fn identity_laws() {
        let e = GroupElement::identity(4);
        assert_eq!(e.multiply(&e).unwrap(), e);
        let a = delta_group(4, "[[][]]", "5/3");
        assert_eq!(a.multiply(&e).unwrap(), a);
        assert_eq!(e.multiply(&a).unwrap(), a);
    }

    #[test]
    fn inverse_of_single_node_support_negates() {
        let a = delta_group(3, "[]", "7/2");
        let inv = a.invert();
        assert_eq!(inv.coeff(&Tree::leaf()), Some(&q("-7/2")));
        assert_eq!(a.multiply(&inv).unwrap(), GroupElement::identity(3));
        assert_eq!(inv.multiply(&a).unwrap(), GroupElement::identity(3));
        assert_eq!(GroupElement::<Rational>::identity(3).invert(), GroupElement::identity(3));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a: GroupElement<Rational> = GroupElement::identity(3);
        let b: GroupElement<Rational> = GroupElement::identity(4);
        assert_eq!(
            a.multiply(&b).unwrap_err(),
            OrderMismatch { left: 3, right: 4 }
        );
    }

    #[test]
    fn dilation_scales_by_order() {
        let a = delta_group(3, "[[]]", "1/3");
        let scaled = a.dilate(&q("2"));
        assert_eq!(scaled.coeff(&t("[[]]")), Some(&q("4/3")));
        assert_eq!(a.dilate(&q("1")), a);
        let e: GroupElement<Rational> = GroupElement::identity(3);
        assert_eq!(e.dilate(&q("5")), e);
    }

    #[test]
    fn truncation_restricts_coefficients() {
        let a = GroupElement::from_fn(4, |t| q(&format!("{}", t.order())));
        let b = a.truncate(2).unwrap();
        assert_eq!(b.max_order(), 2);
        assert_eq!(b.coeff(&t("[[]]")), Some(&q("2")));
        assert!(a.truncate(9).is_err());
    }
}
