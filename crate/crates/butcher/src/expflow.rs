//! The Lie-group exponential, its inverse, the derivative of right
//! translation, and the right product integral for polynomial-in-`t` curves.
//!
//! The defining ODE `γ'(t)(τ) = 𝐚(t)(τ) + Σ_{s ∈ SP(τ)₁} γ(t)(s_τ) 𝐚(t)(τ∖s)`
//! is strictly lower triangular in the graded enumeration, so with polynomial
//! data every component of the solution is an exact polynomial: processing
//! trees in grading order, each right-hand side is already known and one
//! antiderivative finishes the component.

use crate::group::{check_orders, GroupElement, LieElement, OrderMismatch};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::table::TreeTable;
use crate::tree::Tree;

use std::sync::Arc;

/// A Lie-algebra-valued curve on `[0, 1]` whose per-tree coefficients are
/// polynomials in `t`.
#[derive(Debug, Clone)]
pub struct PolyCurve<F: Scalar> {
    table: Arc<TreeTable>,
    polys: Vec<Poly<F>>,
}

/// The right product integral of a [`PolyCurve`]: a group-valued curve with
/// polynomial coefficients and `γ(0) = e`.
#[derive(Debug, Clone)]
pub struct SolutionCurve<F: Scalar> {
    table: Arc<TreeTable>,
    polys: Vec<Poly<F>>,
}

impl<F: Scalar> PartialEq for PolyCurve<F> {
    fn eq(&self, other: &Self) -> bool {
        self.max_order() == other.max_order() && self.polys == other.polys
    }
}

impl<F: Scalar> PartialEq for SolutionCurve<F> {
    fn eq(&self, other: &Self) -> bool {
        self.max_order() == other.max_order() && self.polys == other.polys
    }
}

impl<F: Scalar> PolyCurve<F> {
    /// The constant curve `t ↦ a`.
    pub fn constant(a: &LieElement<F>) -> Self {
        PolyCurve {
            table: Arc::clone(a.table()),
            polys: a.coeffs().iter().map(|c| Poly::constant(c.clone())).collect(),
        }
    }

    /// Builds a curve by evaluating `f` on every enumerated tree.
    pub fn from_fn(max_order: usize, f: impl FnMut(&Tree) -> Poly<F>) -> Self {
        let table = TreeTable::shared(max_order);
        let polys = table.trees().iter().map(f).collect();
        PolyCurve { table, polys }
    }

    /// The truncation order.
    pub fn max_order(&self) -> usize {
        self.table.max_order()
    }

    /// The polynomial attached to `tree`, if within the truncation.
    pub fn poly(&self, tree: &Tree) -> Option<&Poly<F>> {
        self.table.index_of(tree).map(|i| &self.polys[i])
    }

    /// Per-tree polynomials in enumeration order.
    pub fn polys(&self) -> &[Poly<F>] {
        &self.polys
    }

    /// Evaluation at a time point, yielding a tangent element.
    pub fn eval(&self, t: &F) -> LieElement<F> {
        LieElement::from_parts(
            Arc::clone(&self.table),
            self.polys.iter().map(|p| p.eval(t)).collect(),
        )
    }
}

impl<F: Scalar> SolutionCurve<F> {
    /// The truncation order.
    pub fn max_order(&self) -> usize {
        self.table.max_order()
    }

    /// The polynomial attached to `tree`, if within the truncation.
    pub fn poly(&self, tree: &Tree) -> Option<&Poly<F>> {
        self.table.index_of(tree).map(|i| &self.polys[i])
    }

    /// Per-tree polynomials in enumeration order.
    pub fn polys(&self) -> &[Poly<F>] {
        &self.polys
    }

    /// Evaluation at a time point, yielding a group element.
    pub fn eval(&self, t: &F) -> GroupElement<F> {
        GroupElement::from_parts(
            Arc::clone(&self.table),
            self.polys.iter().map(|p| p.eval(t)).collect(),
        )
    }

    /// The time-1 value, the evolution of the curve.
    pub fn at_one(&self) -> GroupElement<F> {
        self.eval(&F::one())
    }

    /// The curve as a single group element over the polynomial scalar ring.
    pub fn poly_element(&self) -> GroupElement<Poly<F>> {
        GroupElement::from_parts(Arc::clone(&self.table), self.polys.clone())
    }
}

/// Solves `γ' = T_e ρ_{γ(t)}(𝐚(t))`, `γ(0) = e`, exactly.
///
/// Uniqueness follows from the strict lower triangularity of the system.
pub fn evolve<F: Scalar>(curve: &PolyCurve<F>) -> SolutionCurve<F> {
    let table = &curve.table;
    let mut polys: Vec<Poly<F>> = Vec::with_capacity(table.len());
    for k in 0..table.len() {
        let mut rhs = curve.polys[k].clone();
        for term in table.split_terms(k) {
            rhs = rhs
                + Poly::constant(F::from_count(term.mult))
                    * polys[term.kept].clone()
                    * curve.polys[term.removed].clone();
        }
        polys.push(rhs.antiderivative());
    }
    SolutionCurve {
        table: Arc::clone(table),
        polys,
    }
}

/// The Lie group exponential: the time-1 evolution of the constant curve
/// `t ↦ 𝐚`, specialised to constant coefficients.
pub fn exp<F: Scalar>(a: &LieElement<F>) -> GroupElement<F> {
    exp_curve(a).at_one()
}

/// The solution curve `t ↦ exp(t𝐚)` underlying the exponential.
pub fn exp_curve<F: Scalar>(a: &LieElement<F>) -> SolutionCurve<F> {
    let table = a.table();
    let mut polys: Vec<Poly<F>> = Vec::with_capacity(table.len());
    for k in 0..table.len() {
        let mut rhs = Poly::constant(a.coeff_at(k).clone());
        for term in table.split_terms(k) {
            let weight = F::from_count(term.mult) * a.coeff_at(term.removed).clone();
            rhs = rhs + polys[term.kept].clone() * Poly::constant(weight);
        }
        polys.push(rhs.antiderivative());
    }
    SolutionCurve {
        table: Arc::clone(table),
        polys,
    }
}

/// The Lie group logarithm: the unique `𝐚` with `exp(𝐚) = b`.
///
/// Solved by grading induction on `b(τ_k) = 𝐚(τ_k) + Σ A_{kl}(𝐚) ∫₀¹ γ(τ_l)`:
/// at each tree the integral terms involve only lower grades, which
/// determines `𝐚(τ_k)` and then the solution component `γ(τ_k)`.
pub fn log<F: Scalar>(b: &GroupElement<F>) -> LieElement<F> {
    let table = b.table();
    let mut coeffs: Vec<F> = Vec::with_capacity(table.len());
    let mut polys: Vec<Poly<F>> = Vec::with_capacity(table.len());
    for k in 0..table.len() {
        let mut value = b.coeff_at(k).clone();
        for term in table.split_terms(k) {
            value = value
                - F::from_count(term.mult)
                    * coeffs[term.removed].clone()
                    * polys[term.kept].integral_01();
        }
        let mut rhs = Poly::constant(value.clone());
        for term in table.split_terms(k) {
            let weight = F::from_count(term.mult) * coeffs[term.removed].clone();
            rhs = rhs + polys[term.kept].clone() * Poly::constant(weight);
        }
        coeffs.push(value);
        polys.push(rhs.antiderivative());
    }
    LieElement::from_parts(Arc::clone(table), coeffs)
}

/// The derivative of right translation by `b` at the identity:
/// `T_e ρ_b(𝐚)(τ) = 𝐚(τ) + Σ_{s ∈ SP(τ)₁} b(s_τ) 𝐚(τ∖s)`.
pub fn right_translation_derivative<F: Scalar>(
    b: &GroupElement<F>,
    a: &LieElement<F>,
) -> Result<LieElement<F>, OrderMismatch> {
    check_orders(b.max_order(), a.max_order())?;
    let table = b.table();
    let coeffs = (0..table.len())
        .map(|k| {
            let mut acc = a.coeff_at(k).clone();
            for term in table.split_terms(k) {
                acc = acc
                    + F::from_count(term.mult)
                        * b.coeff_at(term.kept).clone()
                        * a.coeff_at(term.removed).clone();
            }
            acc
        })
        .collect();
    Ok(LieElement::from_parts(Arc::clone(table), coeffs))
}
