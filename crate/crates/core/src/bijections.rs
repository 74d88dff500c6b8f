//! Maximal-gall bijections.
//!
//! A general galled tree with `n` leaves has at most `n − 1` galls; saturated ones
//! correspond to plane binary trees. A simplex tree with `n = 2m − 1` leaves has at
//! most `m − 1` galls; saturated ones correspond to unordered binary trees with `m`
//! leaves.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::comb::{catalan, factorial};
use crate::counts::{count, wedderburn, Labeling, TreeClass, TreeClassSpec};
use crate::error::GalledError;
use crate::oracle::{CanonicalForm, GalledStructure};

/// Binary tree with ordered children.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PlaneBinaryTree {
    Leaf,
    Node(Box<PlaneBinaryTree>, Box<PlaneBinaryTree>),
}

impl PlaneBinaryTree {
    pub fn node(l: PlaneBinaryTree, r: PlaneBinaryTree) -> Self {
        PlaneBinaryTree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlaneBinaryTree::Leaf => 1,
            PlaneBinaryTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }
}

/// All plane binary trees with `n ≥ 1` leaves; there are `C_{n−1}`.
pub fn plane_trees(n: usize) -> Vec<PlaneBinaryTree> {
    let mut by_size: Vec<Vec<PlaneBinaryTree>> = vec![Vec::new(), vec![PlaneBinaryTree::Leaf]];
    for m in 2..=n {
        let mut v = Vec::new();
        for a in 1..m {
            for l in &by_size[a] {
                for r in &by_size[m - a] {
                    v.push(PlaneBinaryTree::node(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(v);
    }
    by_size.get(n).cloned().unwrap_or_default()
}

/// All unordered binary trees with `m ≥ 1` leaves, as gall-free structures.
pub fn unordered_trees(m: usize) -> Vec<GalledStructure> {
    let mut by_size: Vec<Vec<GalledStructure>> = vec![Vec::new(), vec![GalledStructure::Leaf]];
    for k in 2..=m {
        let mut v = Vec::new();
        for a in 1..=k / 2 {
            let b = k - a;
            for (i, x) in by_size[a].iter().enumerate() {
                // Equal sizes: take each unordered pair once.
                let start = if a == b { i } else { 0 };
                for y in &by_size[b][start..] {
                    v.push(GalledStructure::internal(x.clone(), y.clone()));
                }
            }
        }
        by_size.push(v);
    }
    by_size.get(m).cloned().unwrap_or_default()
}

/// Each internal node becomes a gall whose top has the reticulation as a direct
/// child: the left subtree hangs below the reticulation, the right subtree off
/// the single node on the other side.
pub fn plane_to_saturated_general(t: &PlaneBinaryTree) -> GalledStructure {
    match t {
        PlaneBinaryTree::Leaf => GalledStructure::Leaf,
        PlaneBinaryTree::Node(l, r) => {
            GalledStructure::gall(Vec::new(), vec![plane_to_saturated_general(r)], plane_to_saturated_general(l))
        }
    }
}

/// Inverse of [`plane_to_saturated_general`] on its image.
pub fn saturated_general_to_plane(s: &GalledStructure) -> Option<PlaneBinaryTree> {
    match s {
        GalledStructure::Leaf => Some(PlaneBinaryTree::Leaf),
        GalledStructure::GallTop { left, right, ret } => {
            let side = match (left.as_slice(), right.as_slice()) {
                ([], [x]) | ([x], []) => x,
                _ => return None,
            };
            Some(PlaneBinaryTree::node(saturated_general_to_plane(ret)?, saturated_general_to_plane(side)?))
        }
        GalledStructure::Internal(..) => None,
    }
}

/// Each split becomes a gall with one hybridizing node per child edge and a
/// leaf below the reticulation.
pub fn tree_to_saturated_simplex(t: &GalledStructure) -> Result<GalledStructure, GalledError> {
    match t {
        GalledStructure::Leaf => Ok(GalledStructure::Leaf),
        GalledStructure::Internal(a, b) => Ok(GalledStructure::gall(
            vec![tree_to_saturated_simplex(a)?],
            vec![tree_to_saturated_simplex(b)?],
            GalledStructure::Leaf,
        )),
        GalledStructure::GallTop { .. } => Err(GalledError::InvalidInput("expected a tree without galls".into())),
    }
}

/// Canonical forms of a set of structures.
pub fn image(structures: impl IntoIterator<Item = GalledStructure>) -> BTreeSet<CanonicalForm> {
    structures.into_iter().map(|s| s.canonical_form()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryCheck {
    pub class: TreeClass,
    pub labeling: Labeling,
    pub n: usize,
    pub expected: BigUint,
    pub actual: BigUint,
}

impl CorollaryCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

/// Unlabeled and labeled saturated-count identities for `2 ≤ n ≤ n_max`:
/// `C_{n−1}` and `C_{n−1}·n!` for general trees; for odd `n`, `U_{(n+1)/2}` and
/// `u_{(n+1)/2}·n!/((n+1)/2)!` for simplex trees.
pub fn saturated_count_checks(n_max: usize) -> Result<Vec<CorollaryCheck>, GalledError> {
    if n_max < 2 {
        return Err(GalledError::InvalidInput("n_max must be at least 2".into()));
    }
    let mut out = Vec::new();
    for n in 2..=n_max {
        let c = catalan(n - 1);
        for labeling in Labeling::ALL {
            let spec = TreeClassSpec::new(TreeClass::General, labeling);
            let expected = match labeling {
                Labeling::Unlabeled => c.clone(),
                Labeling::LeafLabeled => &c * factorial(n),
            };
            out.push(CorollaryCheck { class: TreeClass::General, labeling, n, expected, actual: count(spec, n, n - 1)? });
        }
        if n % 2 == 1 {
            let m = (n + 1) / 2;
            for labeling in Labeling::ALL {
                let spec = TreeClassSpec::new(TreeClass::SimplexTimeConsistent, labeling);
                let expected = match labeling {
                    Labeling::Unlabeled => wedderburn(m),
                    Labeling::LeafLabeled => crate::counts::labeled_tree_count(m) * factorial(n) / factorial(m),
                };
                out.push(CorollaryCheck {
                    class: TreeClass::SimplexTimeConsistent,
                    labeling,
                    n,
                    expected,
                    actual: count(spec, n, m - 1)?,
                });
            }
        }
    }
    Ok(out)
}

/// The labeled identities only; errors name the first failing `n`.
pub fn check_labeled_corollaries(n_max: usize) -> Result<Vec<CorollaryCheck>, GalledError> {
    let labeled: Vec<CorollaryCheck> = saturated_count_checks(n_max)?
        .into_iter()
        .filter(|c| c.labeling == Labeling::LeafLabeled)
        .collect();
    if let Some(bad) = labeled.iter().find(|c| !c.holds()) {
        return Err(GalledError::InvalidInput(format!(
            "labeled saturated count fails at n = {} ({}): expected {}, got {}",
            bad.n,
            bad.class.name(),
            bad.expected,
            bad.actual
        )));
    }
    Ok(labeled)
}
