//! Shared graded enumeration tables.
//!
//! A [`TreeTable`] pins the enumeration of all trees up to a truncation order
//! and caches the decompositions of every enumerated tree in index form, so
//! the group and Lie operations reduce to sums over precomputed terms.

use crate::tree::{self, Tree};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// An ordered-subtree class in index form.
#[derive(Debug, Clone)]
pub(crate) struct OstTerm {
    /// Index of the kept subtree, `None` for the empty subtree.
    pub kept: Option<usize>,
    /// Indices of the removed forest components.
    pub removed: Vec<usize>,
    pub mult: u64,
}

/// A partition class in index form.
#[derive(Debug, Clone)]
pub(crate) struct PartitionTerm {
    /// Index of the skeleton.
    pub skeleton: usize,
    /// Indices of all components of the cut forest.
    pub forest: Vec<usize>,
    pub mult: u64,
}

/// A splitting class in index form.
#[derive(Debug, Clone)]
pub(crate) struct SplitTerm {
    pub kept: usize,
    pub removed: usize,
    pub mult: u64,
}

/// The trees of order `≤ max_order` in enumeration order, together with the
/// index form of their decompositions.
#[derive(Debug)]
pub struct TreeTable {
    max_order: usize,
    trees: Vec<Tree>,
    index: HashMap<Tree, usize>,
    /// `grade_start[k]` is the index of the first tree of order `k + 1`;
    /// a final entry marks the end.
    grade_start: Vec<usize>,
    ost: Vec<Vec<OstTerm>>,
    partitions: Vec<Vec<PartitionTerm>>,
    splittings: Vec<Vec<SplitTerm>>,
}

impl TreeTable {
    /// Builds the table for the given truncation order.
    pub fn new(max_order: usize) -> TreeTable {
        let grades = tree::trees_by_order(max_order);
        let mut trees = Vec::new();
        let mut grade_start = Vec::with_capacity(max_order + 1);
        for grade in &grades {
            grade_start.push(trees.len());
            trees.extend(grade.iter().cloned());
        }
        grade_start.push(trees.len());
        let index: HashMap<Tree, usize> = trees
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();

        let lookup = |t: &Tree| -> usize {
            *index
                .get(t)
                .unwrap_or_else(|| panic!("tree {} of order {} outside table", t, t.order()))
        };
        let mut ost = Vec::with_capacity(trees.len());
        let mut partitions = Vec::with_capacity(trees.len());
        let mut splittings = Vec::with_capacity(trees.len());
        for t in &trees {
            ost.push(
                tree::ordered_subtrees(t)
                    .into_iter()
                    .map(|term| OstTerm {
                        kept: term.kept.as_ref().map(&lookup),
                        removed: term.removed.trees().iter().map(&lookup).collect(),
                        mult: term.multiplicity,
                    })
                    .collect(),
            );
            partitions.push(
                tree::partitions(t)
                    .into_iter()
                    .map(|term| PartitionTerm {
                        skeleton: lookup(term.kept.as_ref().expect("skeleton is never empty")),
                        forest: term.removed.trees().iter().map(&lookup).collect(),
                        mult: term.multiplicity,
                    })
                    .collect(),
            );
            splittings.push(
                tree::splittings(t)
                    .into_iter()
                    .map(|sp| SplitTerm {
                        kept: lookup(&sp.kept),
                        removed: lookup(&sp.removed),
                        mult: sp.multiplicity,
                    })
                    .collect(),
            );
        }

        TreeTable {
            max_order,
            trees,
            index,
            grade_start,
            ost,
            partitions,
            splittings,
        }
    }

    /// Fetches the table for `max_order` from a process-wide cache.
    ///
    /// Tables are immutable once built, so sharing across threads is safe.
    pub fn shared(max_order: usize) -> Arc<TreeTable> {
        static CACHE: Lazy<Mutex<HashMap<usize, Arc<TreeTable>>>> =
            Lazy::new(|| Mutex::new(HashMap::new()));
        if let Some(table) = CACHE.lock().unwrap().get(&max_order) {
            return Arc::clone(table);
        }
        // Built outside the lock; a racing builder just produces an identical table.
        let table = Arc::new(TreeTable::new(max_order));
        Arc::clone(
            CACHE
                .lock()
                .unwrap()
                .entry(max_order)
                .or_insert(table),
        )
    }

    /// The truncation order of the table.
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of enumerated trees.
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    /// Whether the table is empty (truncation order 0).
    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// The enumerated trees in graded order.
    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// The tree at an enumeration index.
    pub fn tree(&self, idx: usize) -> &Tree {
        &self.trees[idx]
    }

    /// The enumeration index of `tree`, if its order is within the table.
    pub fn index_of(&self, tree: &Tree) -> Option<usize> {
        self.index.get(tree).copied()
    }

    /// The trees of exactly the given order.
    pub fn trees_of_order(&self, order: usize) -> &[Tree] {
        if order == 0 || order > self.max_order {
            return &[];
        }
        &self.trees[self.grade_start[order - 1]..self.grade_start[order]]
    }

    /// Enumeration indices of the trees of order `≤ order`.
    pub fn indices_up_to_order(&self, order: usize) -> std::ops::Range<usize> {
        let order = order.min(self.max_order);
        0..self.grade_start[order]
    }

    pub(crate) fn ost(&self, idx: usize) -> &[OstTerm] {
        &self.ost[idx]
    }

    pub(crate) fn partition_terms(&self, idx: usize) -> &[PartitionTerm] {
        &self.partitions[idx]
    }

    pub(crate) fn split_terms(&self, idx: usize) -> &[SplitTerm] {
        &self.splittings[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_agree_with_enumeration() {
        let table = TreeTable::shared(5);
        assert_eq!(table.len(), 17); // 1 + 1 + 2 + 4 + 9
        for (i, t) in table.trees().iter().enumerate() {
            assert_eq!(table.index_of(t), Some(i));
            assert_eq!(table.tree(i), t);
        }
        assert_eq!(table.trees_of_order(4).len(), 4);
        assert_eq!(table.trees_of_order(9).len(), 0);
        assert_eq!(table.indices_up_to_order(3), 0..4);
    }

    #[test]
    fn shared_tables_are_cached() {
        let a = TreeTable::shared(3);
        let b = TreeTable::shared(3);
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn decomposition_indices_stay_in_range() {
        let table = TreeTable::new(6);
        for idx in 0..table.len() {
            for term in table.ost(idx) {
                assert!(term.kept.is_none_or(|k| k < table.len()));
                assert!(term.removed.iter().all(|&r| r < table.len()));
            }
            for term in table.partition_terms(idx) {
                assert!(term.skeleton < table.len());
                assert!(term.forest.iter().all(|&r| r < table.len()));
            }
            for term in table.split_terms(idx) {
                assert!(term.kept < idx && term.removed < idx);
            }
        }
    }
}
