//! Membership tests for the symplectic subgroup and its Lie algebra.
//!
//! A group element is symplectic when `P_{u,v}(a) = a(u∘v) + a(v∘u) −
//! a(u)a(v)` vanishes for all tree pairs; a tangent element when `Q_{u,v}(x)
//! = x(u∘v) + x(v∘u)` does. At truncation order `N` the pairs with
//! `|u| + |v| ≤ N` are the computable conditions, and both conditions are
//! symmetric in `(u, v)`, so each unordered pair is tested once.

use crate::group::{GroupElement, LieElement};
use crate::scalar::Scalar;
use crate::table::TreeTable;
use crate::tree::Tree;

use thiserror::Error;

/// A tree pair whose product order exceeds the element's truncation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pair ({u}, {v}) needs order {needed} but the truncation is {max_order}")]
pub struct PairOrderError {
    pub u: Tree,
    pub v: Tree,
    pub needed: usize,
    pub max_order: usize,
}

/// The first tree pair violating a symplectic condition, with its defect.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<F> {
    pub u: Tree,
    pub v: Tree,
    pub defect: F,
}

fn pair_check(u: &Tree, v: &Tree, max_order: usize) -> Result<(), PairOrderError> {
    let needed = u.order() + v.order();
    if needed > max_order {
        return Err(PairOrderError {
            u: u.clone(),
            v: v.clone(),
            needed,
            max_order,
        });
    }
    Ok(())
}

/// The symplecticity defect `P_{u,v}(a) = a(u∘v) + a(v∘u) − a(u)a(v)`.
pub fn symplectic_defect<F: Scalar>(
    a: &GroupElement<F>,
    u: &Tree,
    v: &Tree,
) -> Result<F, PairOrderError> {
    pair_check(u, v, a.max_order())?;
    let uv = u.butcher_product(v);
    let vu = v.butcher_product(u);
    Ok(a.coeff(&uv).unwrap().clone() + a.coeff(&vu).unwrap().clone()
        - a.coeff(u).unwrap().clone() * a.coeff(v).unwrap().clone())
}

/// The tangent defect `Q_{u,v}(x) = x(u∘v) + x(v∘u)`.
pub fn tangent_defect<F: Scalar>(
    x: &LieElement<F>,
    u: &Tree,
    v: &Tree,
) -> Result<F, PairOrderError> {
    pair_check(u, v, x.max_order())?;
    let uv = u.butcher_product(v);
    let vu = v.butcher_product(u);
    Ok(x.coeff(&uv).unwrap().clone() + x.coeff(&vu).unwrap().clone())
}

fn scan_pairs<F: Scalar>(
    table: &TreeTable,
    mut defect: impl FnMut(&Tree, &Tree) -> F,
) -> Result<(), Violation<F>> {
    let trees = table.trees();
    for (i, u) in trees.iter().enumerate() {
        for v in trees[i..].iter() {
            if u.order() + v.order() > table.max_order() {
                continue;
            }
            let d = defect(u, v);
            if !d.is_zero() {
                return Err(Violation {
                    u: u.clone(),
                    v: v.clone(),
                    defect: d,
                });
            }
        }
    }
    Ok(())
}

/// Checks all pairs with `|u| + |v| ≤ max_order`; the error carries the first
/// violating pair in enumeration order.
pub fn check_symplectic<F: Scalar>(a: &GroupElement<F>) -> Result<(), Violation<F>> {
    scan_pairs(a.table(), |u, v| {
        symplectic_defect(a, u, v).expect("pair orders pre-filtered")
    })
}

/// Whether `a` satisfies every computable symplectic condition.
pub fn is_symplectic<F: Scalar>(a: &GroupElement<F>) -> bool {
    check_symplectic(a).is_ok()
}

/// Tangent-space analogue of [`check_symplectic`].
pub fn check_tangent_symplectic<F: Scalar>(x: &LieElement<F>) -> Result<(), Violation<F>> {
    scan_pairs(x.table(), |u, v| {
        tangent_defect(x, u, v).expect("pair orders pre-filtered")
    })
}

/// Whether `x` lies in the kernel of every computable `Q_{u,v}`.
pub fn is_tangent_symplectic<F: Scalar>(x: &LieElement<F>) -> bool {
    check_tangent_symplectic(x).is_ok()
}

/// A basis of the tangent-symplectic subspace at the given truncation.
///
/// The conditions `x(u∘v) = −x(v∘u)` tie trees of equal order together in
/// sign-tracking union-find classes; a class is forced to zero when its
/// relations become contradictory (in particular `x(u∘u) = 0`). Each
/// surviving class contributes one `{0, ±1}`-valued basis vector.
pub fn tangent_symplectic_basis<F: Scalar>(max_order: usize) -> Vec<LieElement<F>> {
    let table = TreeTable::shared(max_order);
    let mut dsu = SignedDsu::new(table.len());
    let trees = table.trees();
    for (i, u) in trees.iter().enumerate() {
        for v in trees[i..].iter() {
            if u.order() + v.order() > max_order {
                continue;
            }
            let uv = table.index_of(&u.butcher_product(v)).unwrap();
            let vu = table.index_of(&v.butcher_product(u)).unwrap();
            if uv == vu {
                dsu.force_zero(uv);
            } else {
                dsu.union_opposite(uv, vu);
            }
        }
    }

    let mut basis = Vec::new();
    for root in 0..table.len() {
        let (r, _) = dsu.find(root);
        if r != root || dsu.zero[root] {
            continue;
        }
        let mut coeffs = vec![F::zero(); table.len()];
        for (i, coeff) in coeffs.iter_mut().enumerate() {
            let (ri, sign) = dsu.find(i);
            if ri == root {
                *coeff = if sign > 0 { F::one() } else { -F::one() };
            }
        }
        basis.push(LieElement::from_parts(std::sync::Arc::clone(&table), coeffs));
    }
    basis
}

/// Union-find with a relative sign on every link.
struct SignedDsu {
    parent: Vec<usize>,
    sign: Vec<i8>,
    zero: Vec<bool>,
}

impl SignedDsu {
    fn new(n: usize) -> Self {
        SignedDsu {
            parent: (0..n).collect(),
            sign: vec![1; n],
            zero: vec![false; n],
        }
    }

    /// Root of `i` and the sign of `x_i` relative to the root.
    fn find(&mut self, i: usize) -> (usize, i8) {
        if self.parent[i] == i {
            return (i, 1);
        }
        let (root, parent_sign) = self.find(self.parent[i]);
        self.parent[i] = root;
        self.sign[i] *= parent_sign;
        (root, self.sign[i])
    }

    /// Imposes `x_i = −x_j`.
    fn union_opposite(&mut self, i: usize, j: usize) {
        let (ri, si) = self.find(i);
        let (rj, sj) = self.find(j);
        if ri == rj {
            if si != -sj {
                self.zero[ri] = true;
            }
            return;
        }
        // x_ri = (si * -sj) x_rj
        self.parent[ri] = rj;
        self.sign[ri] = -si * sj;
        self.zero[rj] |= self.zero[ri];
    }

    fn force_zero(&mut self, i: usize) {
        let (r, _) = self.find(i);
        self.zero[r] = true;
    }
}
