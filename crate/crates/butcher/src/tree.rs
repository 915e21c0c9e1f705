//! Canonical rooted trees and the combinatorial decompositions behind every
//! group formula: ordered subtrees, edge partitions with their skeletons,
//! splittings, and the Butcher product.
//!
//! A tree is encoded as a nested-bracket string: `[]` is the single node,
//! `[c1c2...]` concatenates the children encodings. Children are kept sorted
//! descending by encoding, so two rooted trees are isomorphic exactly when
//! their encodings (and hence their structures) are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A rooted tree, stored as its canonical isomorphism-class representative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    order: usize,
    children: Vec<Tree>,
}

impl Tree {
    /// The single-node tree `•`.
    pub fn leaf() -> Tree {
        Tree {
            order: 1,
            children: Vec::new(),
        }
    }

    /// A root with the given child subtrees, canonicalized.
    pub fn with_children(mut children: Vec<Tree>) -> Tree {
        children.sort_by_cached_key(|c| std::cmp::Reverse(c.encode()));
        let order = 1 + children.iter().map(Tree::order).sum::<usize>();
        Tree { order, children }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Child subtrees in canonical order.
    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    /// The canonical nested-bracket encoding.
    pub fn encode(&self) -> String {
        let mut out = String::with_capacity(2 * self.order);
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut String) {
        out.push('[');
        for child in &self.children {
            child.encode_into(out);
        }
        out.push(']');
    }

    /// The Butcher product `self ∘ other`: attach `other` by a new edge to the
    /// root of `self`; the root of `self` is the root of the result.
    pub fn butcher_product(&self, other: &Tree) -> Tree {
        let mut children = self.children.clone();
        children.push(other.clone());
        Tree::with_children(children)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.encode())
    }
}

/// Graded order: by vertex count first, then lexicographic on the encoding.
/// This is the enumeration order of the crate.
impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.encode().cmp(&other.encode()))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Error from parsing a tree encoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseTreeError {
    /// A character other than `[`, `]` or whitespace.
    #[error("unexpected character `{ch}` at byte {pos} of tree encoding")]
    UnexpectedChar { ch: char, pos: usize },
    /// Input ended inside an unclosed bracket.
    #[error("unexpected end of tree encoding: unclosed `[`")]
    UnexpectedEnd,
    /// Nothing but whitespace.
    #[error("empty tree encoding")]
    Empty,
    /// Extra characters after a complete tree.
    #[error("trailing input at byte {pos} of tree encoding")]
    Trailing { pos: usize },
}

impl FromStr for Tree {
    type Err = ParseTreeError;

    /// Parses a nested-bracket encoding, accepting children in any order and
    /// canonicalizing the result.
    fn from_str(s: &str) -> Result<Tree, ParseTreeError> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        skip_ws(bytes, &mut pos);
        if pos == bytes.len() {
            return Err(ParseTreeError::Empty);
        }
        let tree = parse_tree(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(ParseTreeError::Trailing { pos });
        }
        Ok(tree)
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_tree(bytes: &[u8], pos: &mut usize) -> Result<Tree, ParseTreeError> {
    match bytes.get(*pos) {
        Some(b'[') => *pos += 1,
        Some(&b) => {
            return Err(ParseTreeError::UnexpectedChar {
                ch: b as char,
                pos: *pos,
            })
        }
        None => return Err(ParseTreeError::UnexpectedEnd),
    }
    let mut children = Vec::new();
    loop {
        skip_ws(bytes, pos);
        match bytes.get(*pos) {
            Some(b']') => {
                *pos += 1;
                return Ok(Tree::with_children(children));
            }
            Some(b'[') => children.push(parse_tree(bytes, pos)?),
            Some(&b) => {
                return Err(ParseTreeError::UnexpectedChar {
                    ch: b as char,
                    pos: *pos,
                })
            }
            None => return Err(ParseTreeError::UnexpectedEnd),
        }
    }
}

/// A multiset of rooted trees, stored sorted for order-insensitive equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    /// The empty forest.
    pub fn empty() -> Forest {
        Forest { trees: Vec::new() }
    }

    /// A forest with one component.
    pub fn singleton(tree: Tree) -> Forest {
        Forest { trees: vec![tree] }
    }

    /// Builds a forest from components in any order.
    pub fn from_trees(mut trees: Vec<Tree>) -> Forest {
        trees.sort();
        Forest { trees }
    }

    /// Components in graded order.
    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// Total number of vertices across components.
    pub fn order(&self) -> usize {
        self.trees.iter().map(Tree::order).sum()
    }

    /// Number of components.
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    /// Whether the forest has no components.
    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({})", self)
    }
}

/// One isomorphism class of a decomposition, with the number of labeled
/// vertex subsets (ordered subtrees) or edge subsets (partitions) realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTerm {
    /// The kept part: the ordered subtree `s_τ`, or the skeleton `p_τ`.
    /// `None` encodes the empty subtree.
    pub kept: Option<Tree>,
    /// The removed forest `τ∖s`, or the full component forest `τ∖p`.
    pub removed: Forest,
    /// Number of labeled subsets realizing this class.
    pub multiplicity: u64,
}

/// A nontrivial splitting class: an ordered subtree whose removal leaves a
/// single tree, excluding the empty and the full subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    /// The kept subtree `s_τ`; always nonempty and of order `< |τ|`.
    pub kept: Tree,
    /// The single removed tree `τ∖s`.
    pub removed: Tree,
    /// Number of vertex subsets realizing this class.
    pub multiplicity: u64,
}

/// All rooted-tree isomorphism classes of order `≤ max_order`, graded by
/// order and sorted lexicographically by encoding within a grade.
pub fn enumerate_trees(max_order: usize) -> Vec<Tree> {
    trees_by_order(max_order).into_iter().flatten().collect()
}

/// Like [`enumerate_trees`], but grouped by order (index 0 holds order 1).
pub fn trees_by_order(max_order: usize) -> Vec<Vec<Tree>> {
    let mut grades: Vec<Vec<Tree>> = Vec::new();
    for n in 1..=max_order {
        if n == 1 {
            grades.push(vec![Tree::leaf()]);
            continue;
        }
        // Children of a canonical tree appear in descending encoding order,
        // so picking a non-increasing sequence from this pool builds every
        // canonical tree of order n exactly once.
        let mut pool: Vec<Tree> = grades.iter().flatten().cloned().collect();
        pool.sort_by_cached_key(|t| std::cmp::Reverse(t.encode()));
        let mut grade = Vec::new();
        let mut acc = Vec::new();
        extend_children(&pool, 0, n - 1, &mut acc, &mut grade);
        grade.sort_by_cached_key(Tree::encode);
        grades.push(grade);
    }
    grades
}

fn extend_children(
    pool: &[Tree],
    start: usize,
    budget: usize,
    acc: &mut Vec<Tree>,
    out: &mut Vec<Tree>,
) {
    if budget == 0 {
        out.push(Tree::with_children(acc.clone()));
        return;
    }
    for i in start..pool.len() {
        if pool[i].order() <= budget {
            acc.push(pool[i].clone());
            extend_children(pool, i, budget - pool[i].order(), acc, out);
            acc.pop();
        }
    }
}

/// Ordered-subtree classes of `τ`: connected vertex subsets containing the
/// root if nonempty, aggregated by the isomorphism class of `(s_τ, τ∖s)`.
///
/// Includes the empty subtree (kept `None`, removed `{τ}`) and the full
/// subtree (kept `τ`, removed empty). The multiplicities sum to the number of
/// labeled ordered subtrees of `τ`.
pub fn ordered_subtrees(tau: &Tree) -> Vec<DecompositionTerm> {
    let mut agg: BTreeMap<(Option<Tree>, Forest), u64> = BTreeMap::new();
    agg.insert((None, Forest::singleton(tau.clone())), 1);
    for (kept, removed, mult) in rooted_subtrees(tau) {
        *agg.entry((Some(kept), removed)).or_insert(0) += mult;
    }
    agg.into_iter()
        .map(|((kept, removed), multiplicity)| DecompositionTerm {
            kept,
            removed,
            multiplicity,
        })
        .collect()
}

/// Nonempty ordered subtrees of `tau` with their removed forests.
///
/// Per child the subset either omits the whole child subtree (cutting the
/// root edge) or keeps a nonempty ordered subtree of the child; combining
/// the per-child class counts multiplies labeled choices.
fn rooted_subtrees(tau: &Tree) -> Vec<(Tree, Forest, u64)> {
    let mut acc: BTreeMap<(Vec<Tree>, Vec<Tree>), u64> = BTreeMap::new();
    acc.insert((Vec::new(), Vec::new()), 1);
    for child in tau.children() {
        let mut options: Vec<(Option<Tree>, Vec<Tree>, u64)> =
            vec![(None, vec![child.clone()], 1)];
        for (kept, removed, mult) in rooted_subtrees(child) {
            options.push((Some(kept), removed.trees.clone(), mult));
        }
        let mut next: BTreeMap<(Vec<Tree>, Vec<Tree>), u64> = BTreeMap::new();
        for ((kept_children, removed), count) in &acc {
            for (kept, extra_removed, mult) in &options {
                let mut kept_children = kept_children.clone();
                if let Some(kept) = kept {
                    kept_children.push(kept.clone());
                }
                let mut removed = removed.clone();
                removed.extend(extra_removed.iter().cloned());
                kept_children.sort();
                removed.sort();
                *next.entry((kept_children, removed)).or_insert(0) += count * mult;
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|((kept_children, removed), mult)| {
            (
                Tree::with_children(kept_children),
                Forest::from_trees(removed),
                mult,
            )
        })
        .collect()
}

/// Partition classes of `τ`: edge subsets `p`, aggregated by the isomorphism
/// class of `(p_τ, τ∖p)` where `p_τ` is the skeleton obtained by contracting
/// each component of `τ∖p` and re-establishing the edges of `p`.
///
/// The multiplicities sum to `2^(|τ|-1)`.
pub fn partitions(tau: &Tree) -> Vec<DecompositionTerm> {
    let mut agg: BTreeMap<(Tree, Forest), u64> = BTreeMap::new();
    for (root_comp, skeleton, mut others, mult) in partition_triples(tau) {
        others.push(root_comp);
        *agg.entry((skeleton, Forest::from_trees(others))).or_insert(0) += mult;
    }
    agg.into_iter()
        .map(|((skeleton, removed), multiplicity)| DecompositionTerm {
            kept: Some(skeleton),
            removed,
            multiplicity,
        })
        .collect()
}

/// Partitions of `tau` as (root component, skeleton, non-root components).
///
/// Per child edge: keeping it merges the child's root component (and its
/// skeleton root) into ours; cutting it turns the child's root component into
/// a separate component and attaches the child's skeleton below ours.
type PartitionKey = (Vec<Tree>, Vec<Tree>, Vec<Tree>);

fn partition_triples(tau: &Tree) -> Vec<(Tree, Tree, Vec<Tree>, u64)> {
    let mut acc: BTreeMap<PartitionKey, u64> = BTreeMap::new();
    acc.insert((Vec::new(), Vec::new(), Vec::new()), 1);
    for child in tau.children() {
        let child_triples = partition_triples(child);
        let mut next: BTreeMap<PartitionKey, u64> = BTreeMap::new();
        for ((root_children, skel_children, others), count) in &acc {
            for (child_root, child_skel, child_others, mult) in &child_triples {
                // keep the root edge
                let mut rc = root_children.clone();
                rc.push(child_root.clone());
                rc.sort();
                let mut sc = skel_children.clone();
                sc.extend(child_skel.children().iter().cloned());
                sc.sort();
                let mut oc = others.clone();
                oc.extend(child_others.iter().cloned());
                oc.sort();
                *next.entry((rc, sc, oc)).or_insert(0) += count * mult;

                // cut the root edge
                let rc = root_children.clone();
                let mut sc = skel_children.clone();
                sc.push(child_skel.clone());
                sc.sort();
                let mut oc = others.clone();
                oc.push(child_root.clone());
                oc.extend(child_others.iter().cloned());
                oc.sort();
                *next.entry((rc, sc, oc)).or_insert(0) += count * mult;
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|((rc, sc, oc), mult)| (Tree::with_children(rc), Tree::with_children(sc), oc, mult))
        .collect()
}

/// Nontrivial splitting classes of `τ`: ordered subtrees whose removal leaves
/// a single tree, excluding the empty and the full subtree.
///
/// Equivalently, one class per choice of a non-root vertex whose whole
/// subtree is removed. Both sides have order `< |τ|`.
pub fn splittings(tau: &Tree) -> Vec<Splitting> {
    let mut agg: BTreeMap<(Tree, Tree), u64> = BTreeMap::new();
    collect_splittings(tau, &mut agg);
    agg.into_iter()
        .map(|((kept, removed), multiplicity)| Splitting {
            kept,
            removed,
            multiplicity,
        })
        .collect()
}

fn collect_splittings(tau: &Tree, agg: &mut BTreeMap<(Tree, Tree), u64>) {
    for (i, child) in tau.children().iter().enumerate() {
        let mut others: Vec<Tree> = tau.children().to_vec();
        others.remove(i);
        *agg.entry((Tree::with_children(others.clone()), child.clone()))
            .or_insert(0) += 1;
        for sp in splittings(child) {
            let mut kept_children = others.clone();
            kept_children.push(sp.kept);
            *agg.entry((Tree::with_children(kept_children), sp.removed))
                .or_insert(0) += sp.multiplicity;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn encoding_round_trips_and_canonicalizes() {
        assert_eq!(Tree::leaf().encode(), "[]");
        assert_eq!(t("[[]]").order(), 2);
        // non-canonical child order is accepted and normalized
        assert_eq!(t("[[[]][]]"), t("[[][[]]]"));
        assert_eq!(t("[[[]][]]").encode(), "[[][[]]]");
        assert_eq!(t(" [ [] [] ] ").encode(), "[[][]]");
    }

    #[test]
    fn parse_errors_name_positions() {
        assert_eq!("".parse::<Tree>(), Err(ParseTreeError::Empty));
        assert_eq!("[[]".parse::<Tree>(), Err(ParseTreeError::UnexpectedEnd));
        assert_eq!(
            "[]]".parse::<Tree>(),
            Err(ParseTreeError::Trailing { pos: 2 })
        );
        assert_eq!(
            "[x]".parse::<Tree>(),
            Err(ParseTreeError::UnexpectedChar { ch: 'x', pos: 1 })
        );
    }

    #[test]
    fn enumeration_counts_through_order_8() {
        let grades = trees_by_order(8);
        let counts: Vec<usize> = grades.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115]);
        assert!(enumerate_trees(0).is_empty());
        assert_eq!(enumerate_trees(1), vec![Tree::leaf()]);
    }

    #[test]
    fn enumeration_is_graded_and_sorted() {
        let trees = enumerate_trees(6);
        for w in trees.windows(2) {
            assert!(w[0] < w[1], "{} !< {}", w[0], w[1]);
        }
        // every enumerated tree is distinct
        let set: std::collections::HashSet<_> = trees.iter().map(Tree::encode).collect();
        assert_eq!(set.len(), trees.len());
    }

    #[test]
    fn ordered_subtrees_of_small_trees() {
        let terms = ordered_subtrees(&Tree::leaf());
        assert_eq!(terms.len(), 2);
        assert_eq!(terms.iter().map(|x| x.multiplicity).sum::<u64>(), 2);
        assert!(terms
            .iter()
            .any(|x| x.kept.is_none() && x.removed == Forest::singleton(Tree::leaf())));
        assert!(terms
            .iter()
            .any(|x| x.kept == Some(Tree::leaf()) && x.removed.is_empty()));

        let chain2 = t("[[]]");
        let terms = ordered_subtrees(&chain2);
        assert_eq!(terms.len(), 3);
        assert_eq!(terms.iter().map(|x| x.multiplicity).sum::<u64>(), 3);

        let cherry = t("[[][]]");
        let terms = ordered_subtrees(&cherry);
        let leaf_kept = terms
            .iter()
            .find(|x| x.kept == Some(Tree::leaf()))
            .unwrap();
        assert_eq!(leaf_kept.multiplicity, 1);
        assert_eq!(leaf_kept.removed, Forest::from_trees(vec![Tree::leaf(), Tree::leaf()]));
        let chain_kept = terms.iter().find(|x| x.kept == Some(chain2.clone())).unwrap();
        assert_eq!(chain_kept.multiplicity, 2);
        assert_eq!(chain_kept.removed, Forest::singleton(Tree::leaf()));
    }

    #[test]
    fn partitions_of_small_trees() {
        let terms = partitions(&Tree::leaf());
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].kept, Some(Tree::leaf()));
        assert_eq!(terms[0].removed, Forest::singleton(Tree::leaf()));
        assert_eq!(terms[0].multiplicity, 1);

        let chain2 = t("[[]]");
        let terms = partitions(&chain2);
        assert_eq!(terms.len(), 2);
        assert!(terms.iter().any(|x| x.kept == Some(Tree::leaf())
            && x.removed == Forest::singleton(chain2.clone())
            && x.multiplicity == 1));
        assert!(terms.iter().any(|x| x.kept == Some(chain2.clone())
            && x.removed == Forest::from_trees(vec![Tree::leaf(), Tree::leaf()])
            && x.multiplicity == 1));
    }

    #[test]
    fn partitions_of_pictured_seven_node_tree() {
        // Root with a leaf child and a child that carries a leaf and a cherry.
        // Cutting the root-leaf edge and the cherry edge leaves components
        // shaped 3-chain, single node, cherry; the skeleton is the cherry.
        let tau = t("[[][[][[][]]]]");
        assert_eq!(tau.order(), 7);
        let terms = partitions(&tau);
        let expected_removed =
            Forest::from_trees(vec![t("[[[]]]"), Tree::leaf(), t("[[][]]")]);
        let found = terms
            .iter()
            .find(|x| x.kept == Some(t("[[][]]")) && x.removed == expected_removed)
            .expect("pictured partition class missing");
        assert_eq!(found.multiplicity, 1);
        assert_eq!(
            terms.iter().map(|x| x.multiplicity).sum::<u64>(),
            1 << (tau.order() - 1)
        );
    }

    #[test]
    fn splittings_of_small_trees() {
        assert!(splittings(&Tree::leaf()).is_empty());

        let chain2 = t("[[]]");
        let sp = splittings(&chain2);
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].kept, Tree::leaf());
        assert_eq!(sp[0].removed, Tree::leaf());
        assert_eq!(sp[0].multiplicity, 1);

        let cherry = t("[[][]]");
        let sp = splittings(&cherry);
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].kept, chain2);
        assert_eq!(sp[0].removed, Tree::leaf());
        assert_eq!(sp[0].multiplicity, 2);
    }

    #[test]
    fn butcher_product_pictured_identities() {
        let dot = Tree::leaf();
        let chain2 = t("[[]]");
        assert_eq!(dot.butcher_product(&dot), chain2);
        assert_eq!(dot.butcher_product(&chain2), t("[[[]]]"));
        assert_eq!(chain2.butcher_product(&dot), t("[[][]]"));
        assert_eq!(chain2.butcher_product(&chain2), t("[[][[]]]"));
        // not commutative in general
        assert_ne!(dot.butcher_product(&chain2), chain2.butcher_product(&dot));
    }

    #[test]
    fn splitting_terms_stay_below_the_tree_order() {
        for tau in enumerate_trees(6) {
            for sp in splittings(&tau) {
                assert!(sp.kept.order() < tau.order());
                assert!(sp.removed.order() < tau.order());
                assert_eq!(sp.kept.order() + sp.removed.order(), tau.order());
            }
        }
    }

    #[test]
    fn decomposition_order_bookkeeping() {
        for tau in enumerate_trees(6) {
            for term in ordered_subtrees(&tau) {
                let kept_order = term.kept.as_ref().map_or(0, Tree::order);
                assert_eq!(kept_order + term.removed.order(), tau.order());
            }
            for term in partitions(&tau) {
                assert_eq!(term.removed.order(), tau.order());
                assert_eq!(term.kept.as_ref().unwrap().order(), term.removed.len());
            }
        }
    }

    // Random tree built from an arbitrary shape description.
    fn arb_tree() -> impl Strategy<Value = Tree> {
        let leaf = Just(Tree::leaf());
        leaf.prop_recursive(4, 12, 4, |inner| {
            prop::collection::vec(inner, 0..4).prop_map(Tree::with_children)
        })
    }

    proptest! {
        #[test]
        fn canonical_form_ignores_child_insertion_order(tree in arb_tree(), seed in any::<u64>()) {
            prop_assert_eq!(shuffled_rebuild(&tree, seed), tree);
        }

        #[test]
        fn display_parse_round_trip(tree in arb_tree()) {
            let parsed: Tree = tree.encode().parse().unwrap();
            prop_assert_eq!(parsed, tree);
        }

        #[test]
        fn butcher_product_is_order_additive(u in arb_tree(), v in arb_tree()) {
            prop_assert_eq!(u.butcher_product(&v).order(), u.order() + v.order());
        }
    }

    // Rebuilds the tree bottom-up with children permuted by a cheap LCG.
    fn shuffled_rebuild(tree: &Tree, seed: u64) -> Tree {
        let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        fn rebuild(tree: &Tree, state: &mut u64) -> Tree {
            let mut children: Vec<Tree> =
                tree.children().iter().map(|c| rebuild(c, state)).collect();
            for i in (1..children.len()).rev() {
                *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (*state >> 33) as usize % (i + 1);
                children.swap(i, j);
            }
            Tree::with_children(children)
        }
        rebuild(tree, &mut state)
    }
}
