//! The Lie algebra of the truncated Butcher group: the bilinear map `B` over
//! nontrivial splittings, the bracket as its skew-symmetrization, and the
//! local star product pulled back from the group.

use crate::group::{check_orders, GroupElement, LieElement, OrderMismatch};
use crate::scalar::Scalar;

use std::sync::Arc;

/// The bilinear map `B(𝐚,𝐛)(τ) = Σ_{s ∈ SP(τ)₁} 𝐛(s_τ) 𝐚(τ∖s)`.
pub fn bilinear_b<F: Scalar>(
    a: &LieElement<F>,
    b: &LieElement<F>,
) -> Result<LieElement<F>, OrderMismatch> {
    check_orders(a.max_order(), b.max_order())?;
    let table = a.table();
    let coeffs = (0..table.len())
        .map(|k| {
            let mut acc = F::zero();
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

/// The Lie bracket
/// `[𝐚,𝐛](τ) = Σ_{s ∈ SP(τ)₁} (𝐛(s_τ) 𝐚(τ∖s) − 𝐛(τ∖s) 𝐚(s_τ)) = B(𝐚,𝐛) − B(𝐛,𝐚)`.
pub fn bracket<F: Scalar>(
    a: &LieElement<F>,
    b: &LieElement<F>,
) -> Result<LieElement<F>, OrderMismatch> {
    let ab = bilinear_b(a, b)?;
    let ba = bilinear_b(b, a)?;
    Ok(&ab - &ba)
}

/// The local star product `𝐚 ∗ 𝐛 = (𝐚 + e)·(𝐛 + e) − e`, the group
/// multiplication pulled back through translation by the identity.
pub fn star<F: Scalar>(
    a: &LieElement<F>,
    b: &LieElement<F>,
) -> Result<LieElement<F>, OrderMismatch> {
    let product = GroupElement::from_lie(a).multiply(&GroupElement::from_lie(b))?;
    Ok(LieElement::from_group(&product))
}
