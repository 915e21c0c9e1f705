//! Labeled brute-force reference implementations.
//!
//! These evaluate the group formulas by enumerating the vertex subsets and
//! edge subsets of a labeled representative directly, with no multiplicity
//! aggregation. They are exponential in the tree order and exist solely to
//! cross-check the class-aggregated operations; the self-test suite and the
//! acceptance oracles run both routes and compare.

use crate::group::{GroupElement, LieElement};
use crate::scalar::Scalar;
use crate::tree::Tree;


/// A labeled copy of a tree: vertices in preorder, the root at index 0, so
/// every parent index is smaller than its child's.
pub struct LabeledTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl LabeledTree {
    /// Labels `tree` by a preorder walk.
    ///
    /// Limited to 24 vertices; subsets are enumerated as `u32` masks.
    pub fn from_tree(tree: &Tree) -> LabeledTree {
        assert!(
            tree.order() <= 24,
            "brute-force enumeration is exponential; {} vertices is past the supported 24",
            tree.order()
        );
        let mut lt = LabeledTree {
            parent: Vec::with_capacity(tree.order()),
            children: Vec::with_capacity(tree.order()),
        };
        lt.push(tree, None);
        lt
    }

    fn push(&mut self, tree: &Tree, parent: Option<usize>) -> usize {
        let id = self.parent.len();
        self.parent.push(parent);
        self.children.push(Vec::new());
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        for child in tree.children() {
            self.push(child, Some(id));
        }
        id
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Whether the tree is empty (never true for trees built from [`Tree`]).
    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// The canonical tree induced on the vertices selected by `keep`,
    /// starting from `root`; `keep(root)` must hold.
    fn induced(&self, root: usize, keep: &impl Fn(usize) -> bool) -> Tree {
        let children = self.children[root]
            .iter()
            .filter(|&&c| keep(c))
            .map(|&c| self.induced(c, keep))
            .collect();
        Tree::with_children(children)
    }

    /// Whether a vertex mask is an ordered subtree: empty, or containing the
    /// root with every selected vertex's parent selected.
    fn is_ordered_subtree(&self, mask: u32) -> bool {
        if mask == 0 {
            return true;
        }
        if mask & 1 == 0 {
            return false;
        }
        for v in 1..self.len() {
            if mask & (1 << v) != 0 {
                let p = self.parent[v].expect("non-root vertex has a parent");
                if mask & (1 << p) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Roots of the components of the complement of a vertex mask.
    fn complement_roots(&self, mask: u32) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| {
                mask & (1 << v) == 0
                    && match self.parent[v] {
                        None => true,
                        Some(p) => mask & (1 << p) != 0,
                    }
            })
            .collect()
    }

    /// The kept subtree and removed components of an ordered-subtree mask.
    fn split_by_mask(&self, mask: u32) -> (Option<Tree>, Vec<Tree>) {
        let kept = if mask == 0 {
            None
        } else {
            Some(self.induced(0, &|v| mask & (1 << v) != 0))
        };
        let removed = self
            .complement_roots(mask)
            .into_iter()
            .map(|r| self.induced(r, &|v| mask & (1 << v) == 0))
            .collect();
        (kept, removed)
    }

    /// Component trees and skeleton of an edge mask; bit `v-1` cuts the edge
    /// above vertex `v`.
    fn forest_and_skeleton(&self, edge_mask: u32) -> (Vec<Tree>, Tree) {
        let n = self.len();
        let cut = |v: usize| v > 0 && edge_mask & (1 << (v - 1)) != 0;
        // component representative per vertex, computable in preorder
        let mut comp = vec![0usize; n];
        for v in 1..n {
            comp[v] = if cut(v) {
                v
            } else {
                comp[self.parent[v].expect("non-root vertex has a parent")]
            };
        }
        let comp_roots: Vec<usize> = (0..n).filter(|&v| v == 0 || cut(v)).collect();
        let forest = comp_roots
            .iter()
            .map(|&r| self.induced(r, &|v| comp[v] == r))
            .collect();
        // skeleton: one vertex per component, edges re-established from cuts
        let mut skel_children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 1..n {
            if cut(v) {
                skel_children[comp[self.parent[v].unwrap()]].push(v);
            }
        }
        fn build(skel_children: &[Vec<usize>], at: usize) -> Tree {
            Tree::with_children(
                skel_children[at]
                    .iter()
                    .map(|&c| build(skel_children, c))
                    .collect(),
            )
        }
        (forest, build(&skel_children, 0))
    }
}

/// Number of labeled ordered subtrees of `tau`, the empty one included.
pub fn ordered_subtree_count(tau: &Tree) -> u64 {
    let lt = LabeledTree::from_tree(tau);
    (0u32..1 << lt.len())
        .filter(|&mask| lt.is_ordered_subtree(mask))
        .count() as u64
}

/// `(a·b)(τ)` summed over labeled ordered subtrees.
pub fn multiply_at<F: Scalar>(a: &GroupElement<F>, b: &GroupElement<F>, tau: &Tree) -> F {
    let lt = LabeledTree::from_tree(tau);
    let mut acc = F::zero();
    for mask in 0u32..1 << lt.len() {
        if !lt.is_ordered_subtree(mask) {
            continue;
        }
        let (kept, removed) = lt.split_by_mask(mask);
        let mut term = match kept {
            Some(t) => b.coeff(&t).expect("subtree within truncation").clone(),
            None => F::one(),
        };
        for r in removed {
            term = term * a.coeff(&r).expect("component within truncation").clone();
        }
        acc = acc + term;
    }
    acc
}

/// `a⁻¹(τ)` summed over labeled edge subsets, with the sign
/// `(−1)^(number of components)`.
pub fn invert_at<F: Scalar>(a: &GroupElement<F>, tau: &Tree) -> F {
    let lt = LabeledTree::from_tree(tau);
    let edges = lt.len() - 1;
    let mut acc = F::zero();
    for edge_mask in 0u32..1 << edges {
        let (forest, _skeleton) = lt.forest_and_skeleton(edge_mask);
        let mut term = F::one();
        for component in &forest {
            term = term
                * a.coeff(component)
                    .expect("component within truncation")
                    .clone();
        }
        if forest.len() % 2 == 1 {
            term = -term;
        }
        acc = acc + term;
    }
    acc
}

/// `[𝐚,𝐛](τ)` summed over labeled nontrivial splittings.
pub fn bracket_at<F: Scalar>(a: &LieElement<F>, b: &LieElement<F>, tau: &Tree) -> F {
    let lt = LabeledTree::from_tree(tau);
    let full = (1u32 << lt.len()) - 1;
    let mut acc = F::zero();
    for mask in 1u32..full {
        if !lt.is_ordered_subtree(mask) {
            continue;
        }
        let (kept, removed) = lt.split_by_mask(mask);
        if removed.len() != 1 {
            continue;
        }
        let kept = kept.expect("mask is nonzero");
        let removed = &removed[0];
        let b_kept = b.coeff(&kept).expect("within truncation").clone();
        let a_removed = a.coeff(removed).expect("within truncation").clone();
        let b_removed = b.coeff(removed).expect("within truncation").clone();
        let a_kept = a.coeff(&kept).expect("within truncation").clone();
        acc = acc + b_kept * a_removed - b_removed * a_kept;
    }
    acc
}
